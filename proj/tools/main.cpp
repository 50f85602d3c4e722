// fracfem: convergence studies and operator diagnostics from the command line.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fracfem/diagnostics.hpp"
#include "fracfem/errors.hpp"
#include "fracfem/experiments.hpp"
#include "fracfem/report.hpp"

using namespace fracfem;

namespace {

enum ExitCode { kOk = 0, kIo = 1, kConfig = 2, kSolver = 3, kInvariant = 4 };

// Accepts "0.0002", "2e-4" or "1/1280".
double parse_number(const std::string& s) {
  const auto slash = s.find('/');
  if (slash != std::string::npos) return parse_number(s.substr(0, slash)) / parse_number(s.substr(slash + 1));
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(x))
    throw ConfigError("not a number: '" + s + "'");
  return x;
}

std::vector<double> parse_numbers(const std::vector<std::string>& v) {
  std::vector<double> out;
  for (const auto& s : v) out.push_back(parse_number(s));
  return out;
}

struct Options {
  std::vector<std::string> alpha;
  std::string example = "a";
  std::string scheme;
  std::vector<int> m_list;
  int m_ref = 0;
  std::string tau, tau_ref;
  std::vector<std::string> tau_list;
  int temporal_m = 0;
  std::vector<std::string> t;
  std::string init = "L2Proj";
  bool norm = true;
  std::string backend = "auto";
  std::string out;
  std::string format = "csv";
  std::uint64_t seed = 0;
  int rate_window = 3;
  std::string profile = "tiny";
};

ExperimentConfig make_config(const Options& o, const std::vector<double>& default_times) {
  ExperimentConfig c;
  c.example = parse_example(o.example);
  if (!o.alpha.empty()) c.alphas = parse_numbers(o.alpha);
  if (!o.scheme.empty()) c.scheme = parse_method(o.scheme);
  if (!o.m_list.empty()) c.m_list = o.m_list;
  if (o.m_ref > 0) c.m_ref = o.m_ref;
  if (!o.tau.empty()) c.tau = parse_number(o.tau);
  if (!o.tau_ref.empty()) c.tau_ref = parse_number(o.tau_ref);
  if (!o.tau_list.empty()) c.tau_list = parse_numbers(o.tau_list);
  if (o.temporal_m > 0) c.temporal_m = o.temporal_m;
  c.times = o.t.empty() ? default_times : parse_numbers(o.t);
  c.init = parse_init(o.init);
  c.normalize = o.norm;
  c.seed = o.seed;
  c.rate_window = o.rate_window;
  if (o.backend == "dense")
    c.solver.backend = Backend::Dense;
  else if (o.backend == "iterative")
    c.solver.backend = Backend::Iterative;
  else if (o.backend != "auto")
    throw ConfigError("unknown backend '" + o.backend + "' (expected dense, iterative or auto)");
  return c;
}

void write(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::ios_base::failure("failed writing '" + path + "'");
}

std::string render(const ConvergenceReport& r, const Options& o, const ExperimentConfig& c) {
  return parse_format(o.format) == ReportFormat::Csv ? to_csv(r)
                                                      : to_markdown(r, c.rate_window, c.superconvergence_margin);
}

// Writes the report, then enforces the rate-sanity invariant.
int finish(const ConvergenceReport& r, const Options& o, const ExperimentConfig& c) {
  write(render(r, o, c), o.out);
  check_rate_sanity(r, c.rate_window);
  return kOk;
}

void append(ConvergenceReport& into, const ConvergenceReport& from) {
  into.rows.insert(into.rows.end(), from.rows.begin(), from.rows.end());
}

int reproduce(const Options& o) {
  const bool tiny = o.profile == "tiny";
  if (!tiny && o.profile != "full") throw ConfigError("unknown profile '" + o.profile + "' (expected tiny or full)");
  ExperimentConfig base = make_config(o, {1.0});
  if (tiny) {
    base.alphas = {1.5};
    base.m_list = {8, 16};
    base.m_ref = 64;
    base.tau = 0.01;
    base.temporal_m = 32;
    base.tau_list = {0.1, 0.05};
    base.tau_ref = 1.0 / 80;
  }
  ConvergenceReport all;
  for (Example e : {Example::A, Example::B1, Example::B2, Example::C}) {
    ExperimentConfig c = base;
    c.example = e;
    c.scheme = Method::DampedCN;
    c.times = {1.0};
    if (e != Example::A) c.init = Init::L2Proj;
    append(all, run_spatial_study(c));
  }
  for (Method m : {Method::BE, Method::CN, Method::DampedCN}) {
    ExperimentConfig c = base;
    c.example = Example::A;
    c.scheme = m;
    c.times = {1.0};
    append(all, run_temporal_study(c));
  }
  for (Example e : {Example::B1, Example::B2}) {
    ExperimentConfig c = base;
    c.example = e;
    c.scheme = Method::DampedCN;
    c.init = Init::L2Proj;
    c.tau = tiny ? 1e-3 : 1e-5;
    c.times = tiny ? std::vector<double>{0.1, 0.01} : std::vector<double>{0.1, 0.01, 0.005, 0.001};
    append(all, run_smalltime_study(c));
  }
  return finish(all, o, base);
}

int diagnose(const Options& o) {
  const ExperimentConfig c = make_config(o, {1.0});
  const std::vector<int> cells = o.m_list.empty() ? std::vector<int>{32, 64, 128} : o.m_list;
  const double times[] = {1e-3, 1e-2, 1e-1, 1.0};
  const bool csv = parse_format(o.format) == ReportFormat::Csv;
  std::ostringstream out;
  if (csv)
    out << "alpha,m,min_real,max_abs_arg,sector_angle,coercivity,continuity,smoothing_sup\n";
  else
    out << "| alpha | m | min Re | max arg | sector angle | c0 | C0 | smoothing sup |\n|---|---|---|---|---|---|---|---|\n";
  for (double a : c.alphas) {
    const FracOrder alpha(a);
    for (int m : cells) {
      const UniformMesh mesh(m);
      const SectorReport s = sector_check(mesh, alpha);
      const ConstantsReport k = estimate_constants(mesh, alpha, 1000, c.seed);
      const double sm = m <= 128 ? smoothing_check(mesh, alpha, 1.0, times, 10, c.seed).sup : NAN;
      const std::string sep = csv ? "," : " | ";
      out << (csv ? "" : "| ") << format_double(a) << sep << m << sep << format_double(s.min_real) << sep
          << format_double(s.max_abs_arg) << sep << format_double(s.sector_angle) << sep
          << format_double(k.coercivity) << sep << format_double(k.continuity) << sep << format_double(sm)
          << (csv ? "\n" : " |\n");
    }
  }
  write(out.str(), o.out);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite element solver and convergence harness for space-fractional diffusion"};
  app.set_config("--config", "", "Flat key = value file; command-line flags take precedence");
  app.require_subcommand(1);
  Options o;

  app.add_option("--alpha", o.alpha, "Fractional orders in (1, 2)")->delimiter(',');
  app.add_option("--example", o.example, "Example: a, b1, b2 or c");
  app.add_option("--scheme", o.scheme, "Time stepping: BE, CN or DampedCN");
  app.add_option("--m-list", o.m_list, "Mesh sizes (cells)")->delimiter(',');
  app.add_option("--m-ref", o.m_ref, "Reference mesh size");
  app.add_option("--tau", o.tau, "Time step for spatial studies (accepts 1/N)");
  app.add_option("--tau-ref", o.tau_ref, "Reference time step for temporal studies");
  app.add_option("--tau-list", o.tau_list, "Time steps for temporal studies")->delimiter(',');
  app.add_option("--temporal-m", o.temporal_m, "Mesh size for temporal studies");
  app.add_option("--t", o.t, "Observation times")->delimiter(',');
  app.add_option("--init", o.init, "Initial projection: L2Proj, Ritz or Interp");
  app.add_flag("--norm,!--no-norm", o.norm, "Normalize errors by the L2 norm of the initial data");
  app.add_option("--backend", o.backend, "Linear solver: auto, dense or iterative");
  app.add_option("--out", o.out, "Output file (default: standard output)");
  app.add_option("--format", o.format, "csv or markdown");
  app.add_option("--seed", o.seed, "Seed for randomized diagnostics");
  app.add_option("--rate-window", o.rate_window, "Number of trailing rates averaged (0 = all)");
  app.add_option("--profile", o.profile, "reproduce-paper size: tiny or full");

  auto* spatial = app.add_subcommand("spatial", "Convergence in h at fixed time step");
  auto* temporal = app.add_subcommand("temporal", "Convergence in tau on a fixed mesh");
  auto* smalltime = app.add_subcommand("smalltime", "Spatial convergence at small observation times");
  auto* diag = app.add_subcommand("diagnose", "Spectrum, numerical range and smoothing diagnostics");
  auto* repro = app.add_subcommand("reproduce-paper", "All studies in one CSV");
  for (auto* s : {spatial, temporal, smalltime, diag, repro}) s->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*spatial) {
      const auto c = make_config(o, {1.0});
      return finish(run_spatial_study(c), o, c);
    }
    if (*temporal) {
      const auto c = make_config(o, {1.0});
      return finish(run_temporal_study(c), o, c);
    }
    if (*smalltime) {
      const auto c = make_config(o, {0.1, 0.01, 0.005, 0.001});
      return finish(run_smalltime_study(c), o, c);
    }
    if (*diag) return diagnose(o);
    if (*repro) return reproduce(o);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kSolver;
  } catch (const InvariantError& e) {
    std::cerr << "invariant violated: " << e.what() << "\n";
    return kInvariant;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  }
  return kOk;
}
