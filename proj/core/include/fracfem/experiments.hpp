#pragma once

// Convergence studies against fine reference solutions.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fracfem/fem_assembly.hpp"
#include "fracfem/linear_solvers.hpp"
#include "fracfem/time_integration.hpp"

namespace fracfem {

enum class Example { A, B1, B2, C };
enum class Init { L2Proj, Ritz, Interp };

std::string example_tag(Example e);
Example parse_example(const std::string& s);
std::string init_name(Init i);
Init parse_init(const std::string& s);

// Initial datum of each example; (c) reuses the step datum of (b1).
InitialData initial_data_for(Example e);
bool has_potential(Example e);

struct ExperimentConfig {
  Example example = Example::A;
  // Replaces the example's initial datum when set (the potential still follows `example`).
  std::optional<InitialData> data;
  std::vector<double> alphas{1.25, 1.5, 1.75};
  Method scheme = Method::DampedCN;

  // spatial and small-time studies
  double tau = 2e-4;
  std::vector<int> m_list{16, 32, 64, 128, 256, 512};
  int m_ref = 2048;

  // temporal study
  int temporal_m = 1024;
  std::vector<double> tau_list{1.0 / 10, 1.0 / 20, 1.0 / 40, 1.0 / 80, 1.0 / 160};
  double tau_ref = 1.0 / 1280;

  std::vector<double> times{1.0};
  Init init = Init::L2Proj;
  bool normalize = true;
  std::uint64_t seed = 0;
  int rate_window = 3;  // 0 means all pairwise rates
  double superconvergence_margin = 0.75;
  SolverOptions solver;

  InitialData initial_data() const { return data ? *data : initial_data_for(example); }

  void validate_spatial() const;
  void validate_temporal() const;
};

struct ErrorNorms {
  double l2 = 0.0;
  double energy = 0.0;
};

// Error norms on a fixed reference mesh: l2 = sqrt(e^T M e) and
// energy = sqrt(e^T sym(K) e), where e = ref - prolong(approx).
class ErrorMeter {
 public:
  ErrorMeter(const UniformMesh& ref_mesh, const FracOrder& alpha);
  ErrorNorms operator()(const CoefficientVector& ref, const CoefficientVector& approx,
                        const UniformMesh& approx_mesh) const;

 private:
  UniformMesh mesh_;
  MassMatrix mass_;
  CirculantEmbedding stiffness_;
};

ErrorNorms compute_errors(const CoefficientVector& ref, const UniformMesh& ref_mesh,
                          const CoefficientVector& approx, const UniformMesh& mesh, const FracOrder& alpha);

// One line of a convergence table. Undefined rates and theory values are NaN.
struct ReportRow {
  std::string example;
  double alpha = 0.0;
  std::string scheme;
  int m = 0;
  double tau = 0.0;
  double t = 0.0;
  double err_l2 = 0.0;
  double err_energy = 0.0;
  double rate_l2 = 0.0;
  double rate_energy = 0.0;
  double theory_l2 = 0.0;
  double theory_energy = 0.0;

  bool operator==(const ReportRow& o) const;
};

struct ConvergenceReport {
  std::vector<ReportRow> rows;
  bool operator==(const ConvergenceReport&) const = default;
};

// Initial vector on `mesh` for the configured initialization.
CoefficientVector initial_vector(const UniformMesh& mesh, const FracOrder& alpha, const InitialData& v,
                                 Init init, const SolverOptions& solver = {});
StepOperators build_operators(const UniformMesh& mesh, const FracOrder& alpha, Example e);

ConvergenceReport run_spatial_study(const ExperimentConfig& config);
ConvergenceReport run_temporal_study(const ExperimentConfig& config);
ConvergenceReport run_smalltime_study(const ExperimentConfig& config);

// log2(e_prev / e) when both are strictly positive, NaN otherwise.
double pairwise_rate(double e_prev, double e);
// Mean of the last `window` finite rates (all when window == 0), NaN if none.
double mean_rate(const std::vector<double>& rates, int window);

double spatial_theory_l2(double alpha);
double spatial_theory_energy(double alpha);
double temporal_theory(Method m, Example e, double alpha);

// Rows sharing (example, alpha, scheme, t) in refinement order.
struct RateGroup {
  std::string example;
  double alpha = 0.0;
  std::string scheme;
  double t = 0.0;
  bool temporal = false;  // refinement in tau at fixed m
  std::vector<const ReportRow*> rows;
  double mean_l2 = 0.0;
  double mean_energy = 0.0;
  double theory_l2 = 0.0;
  double theory_energy = 0.0;
  bool superconvergent = false;  // mean L2 rate above theory + margin
};

std::vector<RateGroup> group_rates(const ConvergenceReport& report, int window, double margin);

// Errors must strictly decrease over the last window+1 levels of every group.
void check_rate_sanity(const ConvergenceReport& report, int window);

}  // namespace fracfem
