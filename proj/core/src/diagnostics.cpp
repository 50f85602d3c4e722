#include "fracfem/diagnostics.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "fracfem/errors.hpp"
#include "fracfem/fem_assembly.hpp"
#include "fracfem/spectral.hpp"
#include "fracfem/time_integration.hpp"

namespace fracfem {

namespace {

constexpr int kDenseEigenLimit = 512;

void check_size(const UniformMesh& mesh) {
  if (mesh.cells() > kDenseEigenLimit)
    throw DomainError("dense spectral diagnostics need m <= " + std::to_string(kDenseEigenLimit));
}

struct SymSkew {
  Eigen::MatrixXd l;  // sym(K) = L L^T
  Eigen::MatrixXd g;  // L^{-1} skew(K) L^{-T}
};

SymSkew sym_skew(const ToeplitzOperator& stiffness) {
  const Eigen::MatrixXd k = stiffness.to_dense();
  const Eigen::MatrixXd s = 0.5 * (k + k.transpose());
  const Eigen::MatrixXd w = 0.5 * (k - k.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success)
    throw InvariantError("symmetric part of the stiffness matrix is not positive definite");
  SymSkew r;
  r.l = llt.matrixL();
  const auto lo = r.l.triangularView<Eigen::Lower>();
  const Eigen::MatrixXd t = lo.solve(w);
  r.g = lo.solve(t.transpose()).transpose();
  return r;
}

Eigen::VectorXcd random_complex(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) {
    const double re = nd(rng);
    const double im = nd(rng);
    v[i] = {re, im};
  }
  return v;
}

std::complex<double> quad_form(const Eigen::MatrixXd& a, const Eigen::VectorXcd& x) {
  return x.dot(a.cast<std::complex<double>>() * x);  // x^H A x
}

}  // namespace

SectorReport sector_check(const MassMatrix& mass, const ToeplitzOperator& stiffness) {
  SectorReport rep;
  rep.eigenvalues = SpectralFrame(mass, stiffness).eigenvalues();
  rep.min_real = INFINITY;
  for (const auto& l : rep.eigenvalues) {
    rep.max_abs_arg = std::max(rep.max_abs_arg, std::abs(std::arg(l)));
    rep.min_real = std::min(rep.min_real, l.real());
  }
  rep.sector_angle = std::atan(spectral_norm(sym_skew(stiffness).g));
  return rep;
}

SectorReport sector_check(const UniformMesh& mesh, const FracOrder& alpha) {
  check_size(mesh);
  SectorReport rep = sector_check(assemble_mass(mesh), assemble_stiffness(mesh, alpha));
  if (!rep.valid() || !(rep.max_abs_arg < 0.5 * std::numbers::pi))
    throw InvariantError("discrete operator has an eigenvalue outside the right half-plane");
  return rep;
}

SectorStability sector_stability(const FracOrder& alpha, std::span<const int> cells) {
  SectorStability st;
  for (int m : cells) {
    st.cells.push_back(m);
    st.reports.push_back(sector_check(UniformMesh(m), alpha));
  }
  auto spread = [&](auto get) {
    double s = 0.0;
    for (const auto& a : st.reports)
      for (const auto& b : st.reports) s = std::max(s, std::abs(get(a) / get(b) - 1.0));
    return s;
  };
  st.angle_spread = spread([](const SectorReport& r) { return r.sector_angle; });
  st.spectral_arg_spread = spread([](const SectorReport& r) { return r.max_abs_arg; });
  return st;
}

std::complex<double> rayleigh_quotient(const MassMatrix& mass, const ToeplitzOperator& stiffness,
                                       const Eigen::VectorXcd& phi) {
  if (phi.size() != mass.dim()) throw DomainError("Rayleigh quotient: dimension mismatch");
  const std::complex<double> den = quad_form(mass.to_dense(), phi);
  if (std::abs(den) == 0.0) throw DomainError("Rayleigh quotient of the zero vector");
  return quad_form(stiffness.to_dense(), phi) / den;
}

std::vector<std::complex<double>> numerical_range_sample(const UniformMesh& mesh, const FracOrder& alpha,
                                                         int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw DomainError("numerical range sampling needs at least one sample");
  const Eigen::MatrixXd m = assemble_mass(mesh).to_dense();
  const Eigen::MatrixXd k = assemble_stiffness(mesh, alpha).to_dense();
  std::mt19937_64 rng(seed);
  std::vector<std::complex<double>> out;
  out.reserve(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    Eigen::VectorXcd phi = random_complex(mesh.dim(), rng);
    phi /= std::sqrt(quad_form(m, phi).real());
    out.push_back(quad_form(k, phi) / quad_form(m, phi));
  }
  return out;
}

double ConstantsReport::implied_angle() const {
  return std::acos(std::clamp(ratio(), -1.0, 1.0));
}

ConstantsReport estimate_constants(const UniformMesh& mesh, const FracOrder& alpha, int n_samples,
                                   std::uint64_t seed) {
  check_size(mesh);
  const ToeplitzOperator stiff = assemble_stiffness(mesh, alpha);
  const Eigen::MatrixXd k = stiff.to_dense();
  const Eigen::MatrixXd s = 0.5 * (k + k.transpose());
  ConstantsReport rep;
  rep.samples = n_samples;
  rep.seed = seed;
  rep.coercivity = INFINITY;
  auto visit = [&](const Eigen::VectorXcd& phi) {
    const double ns = quad_form(s, phi).real();
    const std::complex<double> q = quad_form(k, phi);
    rep.coercivity = std::min(rep.coercivity, q.real() / ns);
    rep.continuity = std::max(rep.continuity, std::abs(q) / ns);
  };
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n_samples; ++i) visit(random_complex(mesh.dim(), rng));

  // The extremal vector for |q| / ||.||_S is L^{-T} y with y the top
  // eigenvector of the Hermitian matrix i G.
  const SymSkew sk = sym_skew(stiff);
  const Eigen::MatrixXcd hg = std::complex<double>(0.0, 1.0) * sk.g.cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hg);
  if (es.info() != Eigen::Success) throw SolverError("eigenvalue computation did not converge", 0.0);
  const int top = static_cast<int>(hg.rows()) - 1;  // eigenvalues come in +- pairs
  const Eigen::MatrixXcd lt = sk.l.transpose().cast<std::complex<double>>();
  visit(lt.triangularView<Eigen::Upper>().solve(es.eigenvectors().col(top)));
  return rep;
}

double coercivity_proxy(const UniformMesh& mesh, const FracOrder& alpha) {
  check_size(mesh);
  const Eigen::MatrixXd k = assemble_stiffness(mesh, alpha).to_dense();
  const Eigen::MatrixXd s = 0.5 * (k + k.transpose());
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, assemble_mass(mesh).to_dense(),
                                                               Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

namespace {

double smoothing_ratio_impl(const StepOperators& ops, const SpectralFrame& frame, const Eigen::MatrixXd& power,
                            double gamma, double t, const Eigen::VectorXcd& chi, int steps) {
  const SchemeSpec spec{Method::DampedCN, t / steps, steps};
  auto evolve = [&](const Eigen::VectorXd& x) {
    const auto traj = run_scheme(spec, ops, CoefficientVector(x));
    return Eigen::VectorXd(power * frame.to_frame(traj.final_state.values));
  };
  const Eigen::VectorXd re = evolve(chi.real());
  const Eigen::VectorXd im = evolve(chi.imag());
  const double num = std::sqrt(re.squaredNorm() + im.squaredNorm());
  const double den = std::sqrt(frame.to_frame(chi.real()).squaredNorm() + frame.to_frame(chi.imag()).squaredNorm());
  if (den == 0.0) throw DomainError("smoothing ratio of the zero vector");
  return std::pow(t, gamma) * num / den;
}

}  // namespace

double smoothing_ratio(const UniformMesh& mesh, const FracOrder& alpha, const SpectralFrame& frame,
                       double gamma, double t, const Eigen::VectorXcd& chi, int steps) {
  const StepOperators ops{assemble_mass(mesh), assemble_stiffness(mesh, alpha), std::nullopt};
  return smoothing_ratio_impl(ops, frame, frame.power(gamma), gamma, t, chi, steps);
}

SmoothingReport smoothing_check(const UniformMesh& mesh, const FracOrder& alpha, double gamma,
                                std::span<const double> t_grid, int n_chi, std::uint64_t seed) {
  if (mesh.cells() > 128) throw DomainError("smoothing check needs m <= 128");
  if (t_grid.empty() || n_chi < 1) throw DomainError("smoothing check needs times and test vectors");
  for (double t : t_grid)
    if (!(t > 0.0)) throw DomainError("smoothing check needs positive times");
  const StepOperators ops{assemble_mass(mesh), assemble_stiffness(mesh, alpha), std::nullopt};
  const SpectralFrame frame(ops.mass, ops.stiffness);
  const Eigen::MatrixXd power = frame.power(gamma);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<Eigen::VectorXcd> chis;
  for (int i = 0; i < n_chi; ++i) {
    Eigen::VectorXcd c(mesh.dim());
    for (int j = 0; j < mesh.dim(); ++j) c[j] = nd(rng);
    chis.push_back(c);
  }
  SmoothingReport rep;
  rep.seed = seed;
  for (double t : t_grid) {
    double sup = 0.0;
    for (const auto& c : chis) sup = std::max(sup, smoothing_ratio_impl(ops, frame, power, gamma, t, c, 1024));
    rep.times.push_back(t);
    rep.sup_per_time.push_back(sup);
    rep.sup = std::max(rep.sup, sup);
  }
  return rep;
}

}  // namespace fracfem
