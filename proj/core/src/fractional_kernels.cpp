#include "fracfem/fractional_kernels.hpp"

#include <cmath>
#include <sstream>

#include "fracfem/errors.hpp"

namespace fracfem {

FracOrder::FracOrder(double alpha) : alpha_(alpha) {
  if (!(alpha > 1.0 && alpha < 2.0)) {
    std::ostringstream msg;
    msg << "fractional order must lie in (1, 2), got " << alpha;
    throw DomainError(msg.str());
  }
}

double TruncatedPowerTerm::operator()(double x) const {
  const double u = side == Side::Left ? x - offset : offset - x;
  if (u <= 0.0) return 0.0;
  return coeff * std::pow(u, exponent);
}

PiecewisePowerFunction::PiecewisePowerFunction(std::vector<TruncatedPowerTerm> terms) {
  for (const auto& t : terms) add(t);
}

void PiecewisePowerFunction::add(const TruncatedPowerTerm& term) {
  if (!(term.exponent > -1.0)) {
    throw DomainError("truncated power exponent must exceed -1");
  }
  if (term.offset < 0.0 || term.offset > 1.0) {
    throw DomainError("truncated power offset must lie in [0, 1]");
  }
  if (term.coeff != 0.0) terms_.push_back(term);
}

double PiecewisePowerFunction::operator()(double x) const {
  double sum = 0.0;
  for (const auto& t : terms_) sum += t(x);
  return sum;
}

namespace detail {

double shifted_power_moment(double u0, double len, double p, int k) {
  if (len <= 0.0) return 0.0;
  if (u0 <= 4.0 * len) {
    const double d1 = std::pow(u0 + len, p + 1.0) - std::pow(u0, p + 1.0);
    if (k == 0) return d1 / (p + 1.0);
    const double d2 = std::pow(u0 + len, p + 2.0) - std::pow(u0, p + 2.0);
    return d2 / (p + 2.0) - u0 * d1 / (p + 1.0);
  }
  // Binomial series in r = len / u0 <= 1/4.
  const double r = len / u0;
  double binom = 1.0;
  double rn = 1.0;
  double sum = 0.0;
  for (int n = 0; n < 80; ++n) {
    const double term = binom * rn / (n + k + 1);
    sum += term;
    if (n > 2 && std::abs(term) <= 1e-18 * std::abs(sum)) break;
    binom *= (p - n) / (n + 1);
    rn *= r;
  }
  return std::pow(u0, p) * std::pow(len, k + 1) * sum;
}

}  // namespace detail

namespace {

// int_c^d term(x) * l(x) dx where l is linear with l(c) = wc, l(d) = wd.
double term_cell_moment(const TruncatedPowerTerm& t, double c, double d, double wc, double wd) {
  const double slope = (wd - wc) / (d - c);
  if (t.side == Side::Left) {
    if (t.offset >= d) return 0.0;
    const double lo = std::max(c, t.offset);
    const double w_lo = wc + slope * (lo - c);
    const double len = d - lo;
    const double u0 = lo - t.offset;
    return t.coeff * (w_lo * detail::shifted_power_moment(u0, len, t.exponent, 0) +
                      slope * detail::shifted_power_moment(u0, len, t.exponent, 1));
  }
  if (t.offset <= c) return 0.0;
  const double hi = std::min(d, t.offset);
  const double w_hi = wc + slope * (hi - c);
  const double len = hi - c;
  const double u0 = t.offset - hi;
  return t.coeff * (w_hi * detail::shifted_power_moment(u0, len, t.exponent, 0) -
                    slope * detail::shifted_power_moment(u0, len, t.exponent, 1));
}

void check_interior(const UniformMesh& mesh, int j) {
  if (j < 1 || j > mesh.dim()) {
    std::ostringstream msg;
    msg << "interior index " << j << " out of range [1, " << mesh.dim() << "]";
    throw DomainError(msg.str());
  }
}

PiecewisePowerFunction kink_triple(const UniformMesh& mesh, int j, double scale,
                                   double exponent, Side side) {
  PiecewisePowerFunction f;
  f.add({scale, mesh.node(j - 1), exponent, side});
  f.add({-2.0 * scale, mesh.node(j), exponent, side});
  f.add({scale, mesh.node(j + 1), exponent, side});
  return f;
}

}  // namespace

double PiecewisePowerFunction::moment_hat(const UniformMesh& mesh, int i) const {
  check_interior(mesh, i);
  const double xl = mesh.node(i - 1), xc = mesh.node(i), xr = mesh.node(i + 1);
  double sum = 0.0;
  for (const auto& t : terms_) {
    sum += term_cell_moment(t, xl, xc, 0.0, 1.0);
    sum += term_cell_moment(t, xc, xr, 1.0, 0.0);
  }
  return sum;
}

double PiecewisePowerFunction::moment_hat_derivative(const UniformMesh& mesh, int i) const {
  check_interior(mesh, i);
  const double xl = mesh.node(i - 1), xc = mesh.node(i), xr = mesh.node(i + 1);
  const double inv_h = 1.0 / mesh.h();
  double sum = 0.0;
  for (const auto& t : terms_) {
    sum += term_cell_moment(t, xl, xc, inv_h, inv_h);
    sum -= term_cell_moment(t, xc, xr, inv_h, inv_h);
  }
  return sum;
}

PiecewisePowerFunction PiecewisePowerFunction::left_derivative(double beta) const {
  if (!(beta > 0.0 && beta < 2.0)) throw DomainError("derivative order must lie in (0, 2)");
  PiecewisePowerFunction out;
  for (const auto& t : terms_) {
    if (t.side != Side::Left) throw DomainError("left derivative of a right-sided term");
    const double c = t.coeff * std::tgamma(t.exponent + 1.0) *
                     reciprocal_gamma(t.exponent + 1.0 - beta);
    if (c == 0.0) continue;
    out.add({c, t.offset, t.exponent - beta, Side::Left});
  }
  return out;
}

PiecewisePowerFunction PiecewisePowerFunction::left_integral(double gamma) const {
  if (!(gamma > 0.0)) throw DomainError("integral order must be positive");
  PiecewisePowerFunction out;
  for (const auto& t : terms_) {
    if (t.side != Side::Left) throw DomainError("left integral of a right-sided term");
    const double c = t.coeff * std::tgamma(t.exponent + 1.0) / std::tgamma(t.exponent + 1.0 + gamma);
    out.add({c, t.offset, t.exponent + gamma, Side::Left});
  }
  return out;
}

double reciprocal_gamma(double x) {
  // Arguments such as (a - 1) + 1 - a land within rounding of a pole.
  if (x < 0.5 && std::abs(x - std::round(x)) <= 1e-12) return 0.0;
  return 1.0 / std::tgamma(x);
}

double rl_integral_power(double gamma, double p, double x) {
  if (!(gamma > 0.0)) throw DomainError("rl_integral_power: gamma must be positive");
  if (!(p > -1.0)) throw DomainError("rl_integral_power: p must exceed -1");
  if (!(x >= 0.0 && x <= 1.0)) throw DomainError("rl_integral_power: x must lie in [0, 1]");
  return std::tgamma(p + 1.0) / std::tgamma(p + 1.0 + gamma) * std::pow(x, p + gamma);
}

double rl_deriv_power(double beta, double p, double x) {
  if (!(beta > 0.0 && beta < 2.0)) throw DomainError("rl_deriv_power: beta must lie in (0, 2)");
  if (!(p > -1.0)) throw DomainError("rl_deriv_power: p must exceed -1");
  if (!(x > 0.0 && x <= 1.0)) throw DomainError("rl_deriv_power: x must lie in (0, 1]");
  const double rg = reciprocal_gamma(p + 1.0 - beta);
  if (rg == 0.0) return 0.0;
  return std::tgamma(p + 1.0) * rg * std::pow(x, p - beta);
}

PiecewisePowerFunction hat_function(const UniformMesh& mesh, int j) {
  check_interior(mesh, j);
  return kink_triple(mesh, j, 1.0 / mesh.h(), 1.0, Side::Left);
}

PiecewisePowerFunction rl_halfderiv_hat(const FracOrder& alpha, const UniformMesh& mesh, int j,
                                        Side side) {
  check_interior(mesh, j);
  const double scale = 1.0 / (mesh.h() * std::tgamma(2.0 - alpha.half()));
  return kink_triple(mesh, j, scale, 1.0 - alpha.half(), side);
}

PiecewisePowerFunction rl_lowderiv_hat(const FracOrder& alpha, const UniformMesh& mesh, int j) {
  check_interior(mesh, j);
  const double scale = 1.0 / (mesh.h() * std::tgamma(3.0 - alpha.value()));
  return kink_triple(mesh, j, scale, 2.0 - alpha.value(), Side::Left);
}

}  // namespace fracfem
