#pragma once

#include <iosfwd>
#include <string>

#include "fracfem/experiments.hpp"

namespace fracfem {

inline constexpr const char* kCsvHeader =
    "example,alpha,scheme,m,tau,t,err_l2,err_energy,rate_l2,rate_energy,theory_l2,theory_energy";

// Shortest round-trip decimal; NaN becomes the empty string.
std::string format_double(double x);

std::string to_csv(const ConvergenceReport& report);
ConvergenceReport parse_csv(const std::string& text);

// Paper-style tables: one per (example, scheme, t, study), errors per level
// and a trailing "ratio" column with the theoretical rate in brackets.
std::string to_markdown(const ConvergenceReport& report, int window = 3, double margin = 0.75);

// "5.13e-3"
std::string format_error(double x);
// "0.13"; rounds half away from zero. NaN gives "- -".
std::string format_rate(double x);

enum class ReportFormat { Csv, Markdown };
ReportFormat parse_format(const std::string& s);
void emit_report(const ConvergenceReport& report, ReportFormat format, const std::string& path,
                 int window = 3, double margin = 0.75);

}  // namespace fracfem
