#include "fracfem/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "fracfem/errors.hpp"

namespace fracfem {

std::string example_tag(Example e) {
  switch (e) {
    case Example::A: return "a";
    case Example::B1: return "b1";
    case Example::B2: return "b2";
    case Example::C: return "c";
  }
  return "?";
}

Example parse_example(const std::string& s) {
  if (s == "a") return Example::A;
  if (s == "b1") return Example::B1;
  if (s == "b2") return Example::B2;
  if (s == "c") return Example::C;
  throw ConfigError("unknown example '" + s + "' (expected a, b1, b2 or c)");
}

std::string init_name(Init i) {
  switch (i) {
    case Init::L2Proj: return "L2Proj";
    case Init::Ritz: return "Ritz";
    case Init::Interp: return "Interp";
  }
  return "?";
}

Init parse_init(const std::string& s) {
  if (s == "L2Proj" || s == "l2proj" || s == "P") return Init::L2Proj;
  if (s == "Ritz" || s == "ritz" || s == "R") return Init::Ritz;
  if (s == "Interp" || s == "interp" || s == "I") return Init::Interp;
  throw ConfigError("unknown initialization '" + s + "' (expected L2Proj, Ritz or Interp)");
}

InitialData initial_data_for(Example e) {
  switch (e) {
    case Example::A: return InitialData::smooth_quadratic();
    case Example::B1:
    case Example::C: return InitialData::step_half();
    case Example::B2: return InitialData::quarter_power();
  }
  throw ConfigError("unknown example");
}

bool has_potential(Example e) { return e == Example::C; }

// ---------------------------------------------------------------- config

namespace {

bool whole_steps(double t, double tau) {
  const double r = t / tau;
  return r >= 0.5 && std::abs(r - std::round(r)) <= 1e-9 * r;
}

void validate_common(const ExperimentConfig& c) {
  if (c.alphas.empty()) throw ConfigError("alpha list is empty");
  for (double a : c.alphas)
    if (!(a > 1.0 && a < 2.0)) throw ConfigError("alpha must lie in (1, 2), got " + std::to_string(a));
  if (c.times.empty()) throw ConfigError("observation time list is empty");
  for (double t : c.times)
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("observation times must be positive");
  if (c.rate_window < 0) throw ConfigError("rate window must be nonnegative");
  if (c.init == Init::Ritz && !c.initial_data().ritz_supported())
    throw ConfigError("Ritz initialization is unsupported for example " + example_tag(c.example) +
                      "; use L2Proj");
  if (c.normalize) {
    try {
      (void)c.initial_data().l2_norm();
    } catch (const DomainError&) {
      throw ConfigError("normalization needs an initial datum with a known L2 norm");
    }
  }
  if (!(c.solver.tol >= 1e-12)) throw ConfigError("solver tolerance must be at least 1e-12");
}

void check_times(const ExperimentConfig& c, double tau, const char* what) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError(std::string(what) + " must be positive");
  for (double t : c.times)
    if (!whole_steps(t, tau))
      throw ConfigError("observation time " + std::to_string(t) + " is not a multiple of " + what + " = " +
                        std::to_string(tau));
  if (c.scheme == Method::DampedCN)
    for (double t : c.times)
      if (std::round(t / tau) < 2) throw ConfigError("damped Crank-Nicolson needs at least two steps");
}

}  // namespace

void ExperimentConfig::validate_spatial() const {
  validate_common(*this);
  if (m_list.empty()) throw ConfigError("mesh list is empty");
  if (m_ref < 2) throw ConfigError("reference mesh needs at least 2 cells");
  for (int m : m_list) {
    if (m < 2) throw ConfigError("mesh sizes must be at least 2");
    if (m_ref % m != 0)
      throw ConfigError("mesh size " + std::to_string(m) + " does not divide m_ref = " + std::to_string(m_ref));
  }
  if (has_potential(example)) {
    for (int m : m_list)
      if (m % 2 != 0) throw ConfigError("example c needs even mesh sizes");
    if (m_ref % 2 != 0) throw ConfigError("example c needs an even reference mesh");
  }
  check_times(*this, tau, "tau");
}

void ExperimentConfig::validate_temporal() const {
  validate_common(*this);
  if (temporal_m < 2) throw ConfigError("temporal mesh needs at least 2 cells");
  if (has_potential(example) && temporal_m % 2 != 0) throw ConfigError("example c needs an even mesh");
  if (tau_list.empty()) throw ConfigError("time step list is empty");
  for (double t : tau_list) check_times(*this, t, "tau");
  check_times(*this, tau_ref, "tau_ref");
}

// ---------------------------------------------------------------- errors

ErrorMeter::ErrorMeter(const UniformMesh& ref_mesh, const FracOrder& alpha)
    : mesh_(ref_mesh), mass_(assemble_mass(ref_mesh)), stiffness_(assemble_stiffness(ref_mesh, alpha)) {}

ErrorNorms ErrorMeter::operator()(const CoefficientVector& ref, const CoefficientVector& approx,
                                  const UniformMesh& approx_mesh) const {
  if (!ref.matches(mesh_)) throw DomainError("error norms: reference does not match the reference mesh");
  const Eigen::VectorXd e = ref.values - prolong(approx, approx_mesh, mesh_).values;
  ErrorNorms n;
  n.l2 = std::sqrt(std::max(0.0, e.dot(mass_.apply(e))));
  n.energy = std::sqrt(std::max(0.0, e.dot(stiffness_.apply(e))));
  return n;
}

ErrorNorms compute_errors(const CoefficientVector& ref, const UniformMesh& ref_mesh,
                          const CoefficientVector& approx, const UniformMesh& mesh, const FracOrder& alpha) {
  return ErrorMeter(ref_mesh, alpha)(ref, approx, mesh);
}

bool ReportRow::operator==(const ReportRow& o) const {
  auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
  return example == o.example && same(alpha, o.alpha) && scheme == o.scheme && m == o.m && same(tau, o.tau) &&
         same(t, o.t) && same(err_l2, o.err_l2) && same(err_energy, o.err_energy) && same(rate_l2, o.rate_l2) &&
         same(rate_energy, o.rate_energy) && same(theory_l2, o.theory_l2) &&
         same(theory_energy, o.theory_energy);
}

// ---------------------------------------------------------------- rates

double pairwise_rate(double e_prev, double e) {
  if (!(e_prev > 0.0) || !(e > 0.0)) return NAN;
  return std::log2(e_prev / e);
}

double mean_rate(const std::vector<double>& rates, int window) {
  std::vector<double> finite;
  for (double r : rates)
    if (std::isfinite(r)) finite.push_back(r);
  if (finite.empty()) return NAN;
  const std::size_t k = window > 0 ? std::min<std::size_t>(window, finite.size()) : finite.size();
  double s = 0.0;
  for (std::size_t i = finite.size() - k; i < finite.size(); ++i) s += finite[i];
  return s / static_cast<double>(k);
}

double spatial_theory_l2(double alpha) { return alpha - 1.0; }
double spatial_theory_energy(double alpha) { return 0.5 * alpha - 0.5; }

double temporal_theory(Method m, Example e, double alpha) {
  switch (m) {
    case Method::BE: return 1.0;
    case Method::DampedCN: return 2.0;
    case Method::CN: return (e == Example::A && alpha <= 1.5) ? 2.0 : NAN;
  }
  return NAN;
}

// ---------------------------------------------------------------- studies

CoefficientVector initial_vector(const UniformMesh& mesh, const FracOrder& alpha, const InitialData& v,
                                 Init init, const SolverOptions& solver) {
  switch (init) {
    case Init::L2Proj: return l2_projection(mesh, v);
    case Init::Ritz: return ritz_projection(mesh, alpha, v, solver);
    case Init::Interp: return interpolant(mesh, v);
  }
  throw ConfigError("unknown initialization");
}

StepOperators build_operators(const UniformMesh& mesh, const FracOrder& alpha, Example e) {
  StepOperators ops{assemble_mass(mesh), assemble_stiffness(mesh, alpha), std::nullopt};
  if (has_potential(e)) ops.potential = assemble_weighted_mass(mesh, StepPotential{});
  return ops;
}

namespace {

[[noreturn]] void rethrow_with_context(const std::string& where) {
  try {
    throw;
  } catch (const SolverError& e) {
    throw SolverError(where + ": " + e.what(), e.residual());
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(where + ": " + e.what());
  } catch (const Error& e) {
    throw DomainError(where + ": " + e.what());
  }
}

std::string cell_name(double alpha, const char* key, double value) {
  return "alpha = " + std::to_string(alpha) + ", " + key + " = " + std::to_string(value);
}

double normalizer(const ExperimentConfig& c, const InitialData& v) {
  if (!c.normalize) return 1.0;
  const double n = v.l2_norm();
  return n > 0.0 ? n : 1.0;
}

Trajectory evolve(const ExperimentConfig& c, Method method, double tau, const StepOperators& ops,
                  const CoefficientVector& v0) {
  const double t_max = *std::max_element(c.times.begin(), c.times.end());
  const SchemeSpec spec{method, tau, static_cast<int>(std::lround(t_max / tau))};
  RunOptions opts;
  opts.solver = c.solver;
  opts.snapshot_times = c.times;
  return run_scheme(spec, ops, v0, opts);
}

// Fills pairwise rates for rows [begin, end) of one refinement sequence.
void fill_rates(std::vector<ReportRow>& rows, std::size_t begin) {
  for (std::size_t i = begin; i < rows.size(); ++i) {
    if (i == begin) {
      rows[i].rate_l2 = NAN;
      rows[i].rate_energy = NAN;
    } else {
      rows[i].rate_l2 = pairwise_rate(rows[i - 1].err_l2, rows[i].err_l2);
      rows[i].rate_energy = pairwise_rate(rows[i - 1].err_energy, rows[i].err_energy);
    }
  }
}

}  // namespace

ConvergenceReport run_spatial_study(const ExperimentConfig& c) {
  c.validate_spatial();
  const InitialData v = c.initial_data();
  const double scale = 1.0 / normalizer(c, v);
  const UniformMesh ref_mesh(c.m_ref);
  ConvergenceReport report;
  for (double a : c.alphas) {
    const FracOrder alpha(a);
    Trajectory ref;
    try {
      ref = evolve(c, c.scheme, c.tau, build_operators(ref_mesh, alpha, c.example),
                   initial_vector(ref_mesh, alpha, v, c.init, c.solver));
    } catch (...) {
      rethrow_with_context("reference run (" + cell_name(a, "m", c.m_ref) + ")");
    }
    const ErrorMeter meter(ref_mesh, alpha);
    std::vector<std::vector<ErrorNorms>> errs(c.times.size());
    for (int m : c.m_list) {
      try {
        const UniformMesh mesh(m);
        const Trajectory tr = evolve(c, c.scheme, c.tau, build_operators(mesh, alpha, c.example),
                                     initial_vector(mesh, alpha, v, c.init, c.solver));
        for (std::size_t k = 0; k < c.times.size(); ++k)
          errs[k].push_back(meter(ref.at(c.times[k]).state, tr.at(c.times[k]).state, mesh));
      } catch (...) {
        rethrow_with_context("spatial study (" + cell_name(a, "m", m) + ")");
      }
    }
    for (std::size_t k = 0; k < c.times.size(); ++k) {
      const std::size_t begin = report.rows.size();
      for (std::size_t j = 0; j < c.m_list.size(); ++j) {
        ReportRow r;
        r.example = example_tag(c.example);
        r.alpha = a;
        r.scheme = method_name(c.scheme);
        r.m = c.m_list[j];
        r.tau = c.tau;
        r.t = c.times[k];
        r.err_l2 = errs[k][j].l2 * scale;
        r.err_energy = errs[k][j].energy * scale;
        r.theory_l2 = spatial_theory_l2(a);
        r.theory_energy = spatial_theory_energy(a);
        report.rows.push_back(r);
      }
      fill_rates(report.rows, begin);
    }
  }
  return report;
}

ConvergenceReport run_temporal_study(const ExperimentConfig& c) {
  c.validate_temporal();
  const InitialData v = c.initial_data();
  const double scale = 1.0 / normalizer(c, v);
  const UniformMesh mesh(c.temporal_m);
  ConvergenceReport report;
  for (double a : c.alphas) {
    const FracOrder alpha(a);
    const StepOperators ops = build_operators(mesh, alpha, c.example);
    CoefficientVector v0;
    Trajectory ref;
    try {
      v0 = initial_vector(mesh, alpha, v, c.init, c.solver);
      ref = evolve(c, Method::DampedCN, c.tau_ref, ops, v0);
    } catch (...) {
      rethrow_with_context("temporal reference run (" + cell_name(a, "tau", c.tau_ref) + ")");
    }
    const ErrorMeter meter(mesh, alpha);
    std::vector<std::vector<ErrorNorms>> errs(c.times.size());
    for (double tau : c.tau_list) {
      try {
        const Trajectory tr = evolve(c, c.scheme, tau, ops, v0);
        for (std::size_t k = 0; k < c.times.size(); ++k)
          errs[k].push_back(meter(ref.at(c.times[k]).state, tr.at(c.times[k]).state, mesh));
      } catch (...) {
        rethrow_with_context("temporal study (" + cell_name(a, "tau", tau) + ")");
      }
    }
    for (std::size_t k = 0; k < c.times.size(); ++k) {
      const std::size_t begin = report.rows.size();
      for (std::size_t j = 0; j < c.tau_list.size(); ++j) {
        ReportRow r;
        r.example = example_tag(c.example);
        r.alpha = a;
        r.scheme = method_name(c.scheme);
        r.m = c.temporal_m;
        r.tau = c.tau_list[j];
        r.t = c.times[k];
        r.err_l2 = errs[k][j].l2 * scale;
        r.err_energy = errs[k][j].energy * scale;
        r.theory_l2 = temporal_theory(c.scheme, c.example, a);
        r.theory_energy = NAN;
        report.rows.push_back(r);
      }
      fill_rates(report.rows, begin);
    }
  }
  return report;
}

ConvergenceReport run_smalltime_study(const ExperimentConfig& c) { return run_spatial_study(c); }

// ---------------------------------------------------------------- grouping

std::vector<RateGroup> group_rates(const ConvergenceReport& report, int window, double margin) {
  std::vector<RateGroup> groups;
  std::map<std::string, std::size_t> index;
  for (const auto& r : report.rows) {
    // Temporal rows carry no energy theory, which keeps them apart from spatial rows of the same run.
    const bool temporal_row = std::isnan(r.theory_energy);
    const std::string key = r.example + "|" + std::to_string(r.alpha) + "|" + r.scheme + "|" + std::to_string(r.t) +
                            (temporal_row ? "|T" : "|S");
    auto it = index.find(key);
    if (it == index.end()) {
      RateGroup g;
      g.example = r.example;
      g.alpha = r.alpha;
      g.scheme = r.scheme;
      g.t = r.t;
      g.theory_l2 = r.theory_l2;
      g.theory_energy = r.theory_energy;
      g.temporal = temporal_row;
      it = index.emplace(key, groups.size()).first;
      groups.push_back(std::move(g));
    }
    groups[it->second].rows.push_back(&r);
  }
  for (auto& g : groups) {
    std::vector<double> rl, re;
    for (const auto* r : g.rows) {
      rl.push_back(r->rate_l2);
      re.push_back(r->rate_energy);
    }
    g.mean_l2 = mean_rate(rl, window);
    g.mean_energy = mean_rate(re, window);
    g.superconvergent = std::isfinite(g.mean_l2) && std::isfinite(g.theory_l2) && g.mean_l2 > g.theory_l2 + margin;
  }
  return groups;
}

void check_rate_sanity(const ConvergenceReport& report, int window) {
  for (const auto& g : group_rates(report, window, 0.0)) {
    const std::size_t n = g.rows.size();
    const std::size_t k = window > 0 ? std::min<std::size_t>(n, window + 1) : n;
    for (std::size_t i = n - k + 1; i < n; ++i) {
      const double a = g.rows[i - 1]->err_l2, b = g.rows[i]->err_l2;
      if (a > 0.0 && b > 0.0 && !(b < a))
        throw InvariantError("errors do not decrease under refinement for example " + g.example +
                             ", alpha = " + std::to_string(g.alpha) + ", t = " + std::to_string(g.t));
    }
  }
}

}  // namespace fracfem
