#pragma once

// Piecewise-linear Galerkin discretization on a uniform mesh: the fractional
// stiffness matrix, mass matrices, load vectors and the projections onto the
// finite element space.

#include <functional>
#include <optional>
#include <string>

#include "fracfem/fractional_kernels.hpp"
#include "fracfem/linear_solvers.hpp"
#include "fracfem/mesh.hpp"
#include "fracfem/operators.hpp"

namespace fracfem {

// q(x) = left on (0, breakpoint), right on (breakpoint, 1).
struct StepPotential {
  double breakpoint = 0.5;
  double left = 1.0;
  double right = 0.0;

  double operator()(double x) const { return x < breakpoint ? left : right; }
};

enum class InitialKind { SmoothQuadratic, StepHalf, QuarterPower, Custom };

// Initial datum v. The tagged data carry an exact truncated-power
// representation, which gives closed-form moments against hat functions.
class InitialData {
 public:
  static InitialData smooth_quadratic();  // x (x - 1)
  static InitialData step_half();         // indicator of (1/2, 1)
  static InitialData quarter_power();     // x^(1/4)
  static InitialData zero();
  // Custom datum with a closed-form representation. `l2_norm` may be supplied
  // when known; otherwise l2_norm() throws.
  static InitialData from_power_function(std::string name, PiecewisePowerFunction f,
                                         std::optional<double> l2_norm = std::nullopt);
  // Element of the discrete space on `mesh`.
  static InitialData from_nodal(const UniformMesh& mesh, const CoefficientVector& c);
  // Pointwise data only: interpolation works, moments do not.
  static InitialData from_function(std::string name, std::function<double(double)> f);

  InitialKind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  double operator()(double x) const;

  bool has_moment_rule() const noexcept { return power_.has_value(); }
  const PiecewisePowerFunction& power_function() const;
  // Closed-form ||v||_{L^2(0,1)}.
  double l2_norm() const;
  // True when v is in H^1 with v(0) = v(1) = 0, where the Ritz projection is
  // computed in closed form.
  bool ritz_supported() const;

 private:
  InitialKind kind_ = InitialKind::Custom;
  std::string name_;
  std::optional<PiecewisePowerFunction> power_;
  std::function<double(double)> pointwise_;
  std::optional<double> norm_;
};

// K(i, j) = A(phi_j, phi_i) for i - j = k. Closed form
//   -h^{1-alpha} / Gamma(4-alpha) * sum_{d=-2}^{2} w_d (k+d)_+^{3-alpha},
// w = (1, -4, 6, -4, 1); a binomial series replaces the fourth difference for
// large k.
double stiffness_entry(const UniformMesh& mesh, const FracOrder& alpha, int k);

ToeplitzOperator assemble_stiffness(const UniformMesh& mesh, const FracOrder& alpha);
MassMatrix assemble_mass(const UniformMesh& mesh);
// Gram matrix weighted by a step potential whose breakpoint must be a node.
TridiagonalMatrix assemble_weighted_mass(const UniformMesh& mesh, const StepPotential& q);

// (v, phi_i) for every interior node.
Eigen::VectorXd load_vector(const UniformMesh& mesh, const InitialData& v);
// A(v, phi_i) = (0D^{alpha-1} v, phi_i') for every interior node.
Eigen::VectorXd ritz_load_vector(const UniformMesh& mesh, const FracOrder& alpha,
                                 const InitialData& v);

CoefficientVector l2_projection(const UniformMesh& mesh, const InitialData& v);
CoefficientVector ritz_projection(const UniformMesh& mesh, const FracOrder& alpha,
                                  const InitialData& v, const SolverOptions& options = {});
CoefficientVector interpolant(const UniformMesh& mesh, const std::function<double(double)>& v);
CoefficientVector interpolant(const UniformMesh& mesh, const InitialData& v);

// Nodal embedding of a coarse piecewise-linear function into a nested fine mesh.
CoefficientVector prolong(const CoefficientVector& coarse, const UniformMesh& coarse_mesh,
                          const UniformMesh& fine_mesh);
// Samples a fine function at the coarse nodes.
CoefficientVector restrict_by_sampling(const CoefficientVector& fine, const UniformMesh& fine_mesh,
                                       const UniformMesh& coarse_mesh);

// sqrt(c^T M c).
double discrete_l2_norm(const UniformMesh& mesh, const CoefficientVector& c);

}  // namespace fracfem
