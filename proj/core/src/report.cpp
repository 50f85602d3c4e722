#include "fracfem/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "fracfem/errors.hpp"

namespace fracfem {

std::string format_double(double x) {
  if (std::isnan(x)) return "";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

double parse_double(const std::string& s, int line) {
  if (s.empty()) return NAN;
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw ConfigError("CSV line " + std::to_string(line) + ": bad number '" + s + "'");
  return x;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string to_csv(const ConvergenceReport& report) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : report.rows) {
    out += r.example + "," + format_double(r.alpha) + "," + r.scheme + "," + std::to_string(r.m) + "," +
           format_double(r.tau) + "," + format_double(r.t) + "," + format_double(r.err_l2) + "," +
           format_double(r.err_energy) + "," + format_double(r.rate_l2) + "," + format_double(r.rate_energy) +
           "," + format_double(r.theory_l2) + "," + format_double(r.theory_energy) + "\n";
  }
  return out;
}

ConvergenceReport parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw ConfigError("CSV: missing or unexpected header");
  ConvergenceReport rep;
  int ln = 1;
  while (std::getline(in, line)) {
    ++ln;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 12) throw ConfigError("CSV line " + std::to_string(ln) + ": expected 12 fields");
    ReportRow r;
    r.example = f[0];
    r.alpha = parse_double(f[1], ln);
    r.scheme = f[2];
    const auto res = std::from_chars(f[3].data(), f[3].data() + f[3].size(), r.m);
    if (res.ec != std::errc{}) throw ConfigError("CSV line " + std::to_string(ln) + ": bad mesh size");
    r.tau = parse_double(f[4], ln);
    r.t = parse_double(f[5], ln);
    r.err_l2 = parse_double(f[6], ln);
    r.err_energy = parse_double(f[7], ln);
    r.rate_l2 = parse_double(f[8], ln);
    r.rate_energy = parse_double(f[9], ln);
    r.theory_l2 = parse_double(f[10], ln);
    r.theory_energy = parse_double(f[11], ln);
    rep.rows.push_back(std::move(r));
  }
  return rep;
}

std::string format_error(double x) {
  if (std::isnan(x)) return "-";
  if (x == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  std::string s(buf);
  const auto e = s.find('e');
  std::string mant = s.substr(0, e);
  int exp = std::stoi(s.substr(e + 1));
  return mant + "e" + std::to_string(exp);
}

std::string format_rate(double x) {
  if (!std::isfinite(x)) return "- -";
  double r = std::round(x * 100.0) / 100.0;
  if (r == 0.0) r = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", r);
  return buf;
}

namespace {

std::string level_label(const ReportRow& r, bool temporal) {
  if (!temporal) return std::to_string(r.m);
  const double inv = 1.0 / r.tau;
  if (std::abs(inv - std::round(inv)) < 1e-9 * inv) return "1/" + std::to_string(std::lround(inv));
  return format_double(r.tau);
}

std::string ratio_cell(double mean, double theory, bool superconvergent) {
  std::string s = "≈ " + format_rate(mean) + " (" + format_rate(theory) + ")";
  if (std::isnan(theory)) s = "≈ " + format_rate(mean) + " ( - - )";
  if (superconvergent) s += " superconvergent";
  return s;
}

}  // namespace

std::string to_markdown(const ConvergenceReport& report, int window, double margin) {
  const auto groups = group_rates(report, window, margin);
  // Tables keyed by (example, scheme, t, study kind), in order of appearance.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RateGroup*>> tables;
  for (const auto& g : groups) {
    const std::string key = g.example + "|" + g.scheme + "|" + format_double(g.t) + "|" + (g.temporal ? "T" : "S");
    if (!tables.count(key)) order.push_back(key);
    tables[key].push_back(&g);
  }
  std::ostringstream out;
  bool first = true;
  for (const auto& key : order) {
    const auto& gs = tables[key];
    const RateGroup& g0 = *gs.front();
    const bool temporal = g0.temporal;
    std::vector<std::string> labels;
    for (const auto* r : g0.rows) labels.push_back(level_label(*r, temporal));
    if (!first) out << "\n";
    first = false;
    out << "### Example " << g0.example << ", " << g0.scheme << ", t = " << format_double(g0.t);
    if (temporal)
      out << " (temporal, m = " << g0.rows.front()->m << ")\n\n";
    else
      out << " (spatial, tau = " << format_double(g0.rows.front()->tau) << ")\n\n";
    out << "| alpha | norm |";
    for (const auto& l : labels) out << (temporal ? " tau = " : " m = ") << l << " |";
    out << " ratio |\n|---|---|";
    for (std::size_t i = 0; i < labels.size(); ++i) out << "---|";
    out << "---|\n";
    for (const auto* g : gs) {
      auto line = [&](const char* norm, auto err, double mean, double theory, bool sc) {
        out << "| " << format_double(g->alpha) << " | " << norm << " |";
        for (std::size_t i = 0; i < labels.size(); ++i)
          out << " " << (i < g->rows.size() ? format_error(err(*g->rows[i])) : std::string("-")) << " |";
        out << " " << ratio_cell(mean, theory, sc) << " |\n";
      };
      line("L2", [](const ReportRow& r) { return r.err_l2; }, g->mean_l2, g->theory_l2, g->superconvergent);
      line("energy", [](const ReportRow& r) { return r.err_energy; }, g->mean_energy, g->theory_energy, false);
    }
  }
  return out.str();
}

ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "markdown" || s == "md") return ReportFormat::Markdown;
  throw ConfigError("unknown format '" + s + "' (expected csv or markdown)");
}

void emit_report(const ConvergenceReport& report, ReportFormat format, const std::string& path, int window,
                 double margin) {
  const std::string text = format == ReportFormat::Csv ? to_csv(report) : to_markdown(report, window, margin);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw Error("failed writing '" + path + "'");
}

}  // namespace fracfem
