#pragma once

// One-step schemes for M U' + K U = F: backward Euler, Crank-Nicolson and
// Crank-Nicolson started with two backward Euler steps.

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fracfem/linear_solvers.hpp"
#include "fracfem/mesh.hpp"
#include "fracfem/operators.hpp"

namespace fracfem {

class SpectralFrame;

enum class Method { BE, CN, DampedCN };

const char* method_name(Method m);
Method parse_method(const std::string& s);

struct SchemeSpec {
  Method method = Method::BE;
  double tau = 0.0;
  int steps = 0;

  void validate() const;
  double final_time() const { return steps * tau; }
};

// Spatial operators of the semi-discrete problem; K_total = K + M_q.
struct StepOperators {
  MassMatrix mass;
  ToeplitzOperator stiffness;
  std::optional<TridiagonalMatrix> potential;

  int dim() const noexcept { return mass.dim(); }
  SystemOperator system(double a, double b) const { return SystemOperator(a, b, mass, stiffness, potential); }
};

struct Snapshot {
  int step = 0;
  double t = 0.0;
  CoefficientVector state;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
  CoefficientVector final_state;
  double final_time = 0.0;

  const Snapshot& at(double t) const;
};

// Load vector F(t) (already tested against the hat basis).
using LoadHook = std::function<Eigen::VectorXd(double t)>;

struct RunOptions {
  SolverOptions solver;
  std::vector<double> snapshot_times;  // each must be a whole number of steps
  LoadHook load;                       // empty means F = 0
};

Trajectory run_scheme(const SchemeSpec& spec, const StepOperators& ops, const CoefficientVector& v,
                      const RunOptions& options = {});
Trajectory run_scheme(const SchemeSpec& spec, const MassMatrix& mass, const ToeplitzOperator& stiffness,
                      const CoefficientVector& v, const RunOptions& options = {});

// Scalar stability functions. For DampedCN, stability_fn is the first-step
// factor r_bw and stability_fn_pow uses r_bw(z)^2 r_cn(z)^{n-2} for n >= 2.
std::complex<double> stability_fn(Method method, std::complex<double> z);
std::complex<double> stability_fn_pow(Method method, std::complex<double> z, int n);

// n-step solution operator r(sB)^n in the spectral frame.
Eigen::MatrixXd scheme_power_matrix(Method method, const Eigen::MatrixXd& b, double s, int n);

// For each n = 1..n_max, sup over s of (n s)^gamma ||A_h^gamma r(s A_h)^n||_M.
std::vector<double> smoothing_profile(const SpectralFrame& frame, Method method, double gamma, int n_max,
                                      std::span<const double> s_grid);
double smoothing_constant(const SpectralFrame& frame, Method method, double gamma, int n_max,
                          std::span<const double> s_grid);
// Default sampling: s = 10^k for k = -4..0 in steps of 1/2.
std::vector<double> default_s_grid();

// Empirical constant in |e^{-nz} - r_cn(z)^n| <= C n |z|^3 e^{-c n |z|}.
struct CnBoundGrid {
  double r_min = 1e-2;
  double r_max = 1.0;
  int n_radius = 40;
  double arg_max = 1.2;
  int n_arg = 25;
  int n_max = 64;
  double c = 0.2;

  CnBoundGrid refined() const;
};

struct CnBoundFit {
  double constant = 0.0;          // fitted C on the grid
  double refined_constant = 0.0;  // same fit on the 2x refined grid
  double c = 0.0;
  // Refinement changes C by at most 10%.
  bool stable() const { return refined_constant <= 1.1 * constant && constant <= 1.1 * refined_constant; }
};

double fit_cn_constant(const CnBoundGrid& grid);
CnBoundFit fit_cn_bound(const CnBoundGrid& grid = {});

}  // namespace fracfem
