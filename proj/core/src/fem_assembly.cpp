#include "fracfem/fem_assembly.hpp"

#include <cmath>

#include "fracfem/errors.hpp"

namespace fracfem {

UniformMesh::UniformMesh(int cells) : m_(cells) {
  if (cells < 2) throw DomainError("mesh needs at least 2 cells, got " + std::to_string(cells));
}

// ---------------------------------------------------------------- data

InitialData InitialData::smooth_quadratic() {
  InitialData d;
  d.kind_ = InitialKind::SmoothQuadratic;
  d.name_ = "a";
  d.power_ = PiecewisePowerFunction({{1.0, 0.0, 2.0, Side::Left}, {-1.0, 0.0, 1.0, Side::Left}});
  d.norm_ = std::sqrt(1.0 / 30.0);
  return d;
}

InitialData InitialData::step_half() {
  InitialData d;
  d.kind_ = InitialKind::StepHalf;
  d.name_ = "b1";
  d.power_ = PiecewisePowerFunction({{1.0, 0.5, 0.0, Side::Left}});
  d.norm_ = std::sqrt(0.5);
  return d;
}

InitialData InitialData::quarter_power() {
  InitialData d;
  d.kind_ = InitialKind::QuarterPower;
  d.name_ = "b2";
  d.power_ = PiecewisePowerFunction({{1.0, 0.0, 0.25, Side::Left}});
  d.norm_ = std::sqrt(2.0 / 3.0);
  return d;
}

InitialData InitialData::zero() {
  return from_power_function("zero", PiecewisePowerFunction{}, 0.0);
}

InitialData InitialData::from_power_function(std::string name, PiecewisePowerFunction f,
                                             std::optional<double> l2_norm) {
  InitialData d;
  d.name_ = std::move(name);
  d.power_ = std::move(f);
  d.norm_ = l2_norm;
  return d;
}

InitialData InitialData::from_nodal(const UniformMesh& mesh, const CoefficientVector& c) {
  if (!c.matches(mesh)) throw DomainError("nodal data: coefficient length does not match mesh");
  PiecewisePowerFunction f;
  for (int j = 1; j <= mesh.dim(); ++j) {
    const double cj = c.values[j - 1];
    if (cj == 0.0) continue;
    const auto hat = hat_function(mesh, j);
    for (const auto& t : hat.terms()) f.add({cj * t.coeff, t.offset, t.exponent, t.side});
  }
  return from_power_function("nodal", std::move(f), discrete_l2_norm(mesh, c));
}

InitialData InitialData::from_function(std::string name, std::function<double(double)> f) {
  if (!f) throw DomainError("initial data: empty function");
  InitialData d;
  d.name_ = std::move(name);
  d.pointwise_ = std::move(f);
  return d;
}

double InitialData::operator()(double x) const {
  if (power_) return (*power_)(x);
  return pointwise_(x);
}

const PiecewisePowerFunction& InitialData::power_function() const {
  if (!power_) throw DomainError("initial data '" + name_ + "' has no registered moment rule");
  return *power_;
}

double InitialData::l2_norm() const {
  if (!norm_) throw DomainError("initial data '" + name_ + "' has no closed-form L2 norm");
  return *norm_;
}

bool InitialData::ritz_supported() const {
  if (!power_) return false;
  for (const auto& t : power_->terms())
    if (t.side != Side::Left || t.exponent < 1.0) return false;
  return std::abs((*power_)(1.0)) <= 1e-12;
}

// ---------------------------------------------------------------- stiffness

namespace {

// Fourth central difference of s -> s_+^q at k, expanded for large k as
//   k^q sum_{n even >= 4} binom(q, n) (2^{n+1} - 8) k^{-n}.
double fourth_difference(int k, double q) {
  if (k <= -2) return 0.0;
  if (k < 8) {
    static constexpr double w[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
    double s = 0.0;
    for (int d = -2; d <= 2; ++d) {
      const int u = k + d;
      if (u > 0) s += w[d + 2] * std::pow(static_cast<double>(u), q);
    }
    return s;
  }
  const double kk = static_cast<double>(k);
  const double inv2 = 1.0 / (kk * kk);
  double binom = 1.0;  // binom(q, n)
  double kpow = 1.0;   // k^{-n}
  double sum = 0.0;
  for (int n = 1; n <= 80; ++n) {
    binom *= (q - (n - 1)) / n;
    if (n % 2 == 1) continue;
    kpow *= inv2;
    if (n < 4) continue;
    const double term = binom * (std::ldexp(1.0, n + 1) - 8.0) * kpow;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return std::pow(kk, q) * sum;
}

}  // namespace

double stiffness_entry(const UniformMesh& mesh, const FracOrder& alpha, int k) {
  const double a = alpha.value();
  const double scale = std::pow(mesh.h(), 1.0 - a) / std::tgamma(4.0 - a);
  return -scale * fourth_difference(k, 3.0 - a);
}

ToeplitzOperator assemble_stiffness(const UniformMesh& mesh, const FracOrder& alpha) {
  const int n = mesh.dim();
  std::vector<double> row(n), col(n);
  for (int k = 0; k < n; ++k) {
    col[k] = stiffness_entry(mesh, alpha, k);
    row[k] = stiffness_entry(mesh, alpha, -k);
  }
  return ToeplitzOperator(std::move(row), std::move(col));
}

// ---------------------------------------------------------------- mass

MassMatrix assemble_mass(const UniformMesh& mesh) {
  const int n = mesh.dim();
  const double h = mesh.h();
  MassMatrix m;
  m.diag.assign(n, 4.0 * h / 6.0);
  m.sub.assign(n - 1, h / 6.0);
  m.super = m.sub;
  return m;
}

TridiagonalMatrix assemble_weighted_mass(const UniformMesh& mesh, const StepPotential& q) {
  const double pos = q.breakpoint * mesh.cells();
  if (std::abs(pos - std::round(pos)) > 1e-12)
    throw DomainError("weighted mass: potential breakpoint " + std::to_string(q.breakpoint) +
                      " is not a node of the mesh with m = " + std::to_string(mesh.cells()));
  const int n = mesh.dim();
  const double h = mesh.h();
  // Value of q on cell e = (x_e, x_{e+1}).
  auto qe = [&](int e) { return q(mesh.h() * (e + 0.5)); };
  TridiagonalMatrix w;
  w.diag.resize(n);
  w.sub.resize(n - 1);
  for (int j = 1; j <= n; ++j) w.diag[j - 1] = (qe(j - 1) + qe(j)) * h / 3.0;
  for (int j = 1; j < n; ++j) w.sub[j - 1] = qe(j) * h / 6.0;
  w.super = w.sub;
  return w;
}

// ---------------------------------------------------------------- loads

Eigen::VectorXd load_vector(const UniformMesh& mesh, const InitialData& v) {
  const auto& f = v.power_function();
  Eigen::VectorXd b(mesh.dim());
  for (int i = 1; i <= mesh.dim(); ++i) b[i - 1] = f.moment_hat(mesh, i);
  return b;
}

Eigen::VectorXd ritz_load_vector(const UniformMesh& mesh, const FracOrder& alpha,
                                 const InitialData& v) {
  if (!v.ritz_supported())
    throw DomainError("Ritz projection is unsupported for initial data '" + v.name() +
                      "'; use the L2 projection");
  const auto g = v.power_function().left_derivative(alpha.value() - 1.0);
  Eigen::VectorXd r(mesh.dim());
  for (int i = 1; i <= mesh.dim(); ++i) r[i - 1] = g.moment_hat_derivative(mesh, i);
  return r;
}

CoefficientVector l2_projection(const UniformMesh& mesh, const InitialData& v) {
  return CoefficientVector(assemble_mass(mesh).solve(load_vector(mesh, v)));
}

CoefficientVector ritz_projection(const UniformMesh& mesh, const FracOrder& alpha,
                                  const InitialData& v, const SolverOptions& options) {
  const Eigen::VectorXd r = ritz_load_vector(mesh, alpha, v);
  SystemOperator op(0.0, 1.0, assemble_mass(mesh), assemble_stiffness(mesh, alpha));
  return CoefficientVector(LinearSolver(std::move(op), options).solve(r));
}

CoefficientVector interpolant(const UniformMesh& mesh, const std::function<double(double)>& v) {
  Eigen::VectorXd c(mesh.dim());
  for (int j = 1; j <= mesh.dim(); ++j) c[j - 1] = v(mesh.node(j));
  return CoefficientVector(std::move(c));
}

CoefficientVector interpolant(const UniformMesh& mesh, const InitialData& v) {
  return interpolant(mesh, [&v](double x) { return v(x); });
}

// ---------------------------------------------------------------- transfer

namespace {
int refinement_ratio(const UniformMesh& coarse, const UniformMesh& fine) {
  if (fine.cells() % coarse.cells() != 0)
    throw DomainError("meshes are not nested: " + std::to_string(fine.cells()) + " cells is not a multiple of " +
                      std::to_string(coarse.cells()));
  return fine.cells() / coarse.cells();
}
}  // namespace

CoefficientVector prolong(const CoefficientVector& coarse, const UniformMesh& coarse_mesh,
                          const UniformMesh& fine_mesh) {
  if (!coarse.matches(coarse_mesh)) throw DomainError("prolong: coefficient length does not match mesh");
  const int r = refinement_ratio(coarse_mesh, fine_mesh);
  auto cv = [&](int j) { return (j <= 0 || j >= coarse_mesh.cells()) ? 0.0 : coarse.values[j - 1]; };
  Eigen::VectorXd f(fine_mesh.dim());
  for (int k = 1; k <= fine_mesh.dim(); ++k) {
    const int j = k / r;
    const int s = k % r;
    const double t = static_cast<double>(s) / r;
    f[k - 1] = s == 0 ? cv(j) : (1.0 - t) * cv(j) + t * cv(j + 1);
  }
  return CoefficientVector(std::move(f));
}

CoefficientVector restrict_by_sampling(const CoefficientVector& fine, const UniformMesh& fine_mesh,
                                       const UniformMesh& coarse_mesh) {
  if (!fine.matches(fine_mesh)) throw DomainError("restrict: coefficient length does not match mesh");
  const int r = refinement_ratio(coarse_mesh, fine_mesh);
  Eigen::VectorXd c(coarse_mesh.dim());
  for (int j = 1; j <= coarse_mesh.dim(); ++j) c[j - 1] = fine.values[j * r - 1];
  return CoefficientVector(std::move(c));
}

double discrete_l2_norm(const UniformMesh& mesh, const CoefficientVector& c) {
  if (!c.matches(mesh)) throw DomainError("norm: coefficient length does not match mesh");
  return std::sqrt(std::max(0.0, c.values.dot(assemble_mass(mesh).apply(c.values))));
}

}  // namespace fracfem
