#pragma once

// Closed-form Riemann-Liouville calculus on powers and truncated powers.
//
// Every fractional derivative of a continuous piecewise-linear function is a
// finite sum of truncated powers coeff * (x - a)_+^p (left-sided) or
// coeff * (a - x)_+^p (right-sided). PiecewisePowerFunction is that sum, and
// the assembly code integrates it exactly against hat functions.

#include <span>
#include <vector>

#include "fracfem/mesh.hpp"

namespace fracfem {

// Order alpha of the model operator, restricted to the open interval (1, 2).
class FracOrder {
 public:
  explicit FracOrder(double alpha);
  double value() const noexcept { return alpha_; }
  double half() const noexcept { return 0.5 * alpha_; }

 private:
  double alpha_;
};

enum class Side { Left, Right };

struct TruncatedPowerTerm {
  double coeff = 0.0;
  double offset = 0.0;    // the shift a, in [0, 1]
  double exponent = 0.0;  // p > -1
  Side side = Side::Left;

  double operator()(double x) const;
};

class PiecewisePowerFunction {
 public:
  PiecewisePowerFunction() = default;
  explicit PiecewisePowerFunction(std::vector<TruncatedPowerTerm> terms);

  const std::vector<TruncatedPowerTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }
  void add(const TruncatedPowerTerm& term);

  double operator()(double x) const;

  // Exact integrals against the weights of the hat basis of `mesh`.
  // moment_hat(i) = int g phi_i, moment_hat_derivative(i) = int g phi_i'.
  double moment_hat(const UniformMesh& mesh, int i) const;
  double moment_hat_derivative(const UniformMesh& mesh, int i) const;

  // Left-sided RL derivative of order beta in (0, 2), applied term by term.
  // Only defined when every term is left-sided; terms whose Gamma factor has
  // a pole vanish (continuous extension).
  PiecewisePowerFunction left_derivative(double beta) const;
  // Left-sided RL integral of order gamma > 0.
  PiecewisePowerFunction left_integral(double gamma) const;

 private:
  std::vector<TruncatedPowerTerm> terms_;
};

// 1 / Gamma(x), zero at the poles x = 0, -1, -2, ...
double reciprocal_gamma(double x);

// (0I_x^gamma t^p)(x) = Gamma(p+1) / Gamma(p+1+gamma) x^(p+gamma).
double rl_integral_power(double gamma, double p, double x);

// (0D_x^beta t^p)(x) = Gamma(p+1) / Gamma(p+1-beta) x^(p-beta); zero when
// p+1-beta is a nonpositive integer.
double rl_deriv_power(double beta, double p, double x);

// Hat function phi_j as a sum of three kinks.
PiecewisePowerFunction hat_function(const UniformMesh& mesh, int j);

// Order alpha/2 derivative of phi_j: left 0D_x^{alpha/2} or right xD_1^{alpha/2}.
PiecewisePowerFunction rl_halfderiv_hat(const FracOrder& alpha, const UniformMesh& mesh,
                                        int j, Side side);

// Order alpha-1 left derivative of phi_j, i.e. 0I^{2-alpha} phi_j'.
PiecewisePowerFunction rl_lowderiv_hat(const FracOrder& alpha, const UniformMesh& mesh, int j);

namespace detail {
// int_0^len (u0 + s)^p s^k ds for k in {0, 1}, u0 >= 0, evaluated without
// cancellation when u0 >> len.
double shifted_power_moment(double u0, double len, double p, int k);
}  // namespace detail

}  // namespace fracfem
