#include "fracfem/linear_solvers.hpp"

#include <bit>
#include <cmath>
#include <string>

#include <unsupported/Eigen/FFT>

#include "fracfem/errors.hpp"

namespace fracfem {

namespace {
Eigen::FFT<double>& fft_engine() {
  thread_local Eigen::FFT<double> fft;
  return fft;
}
}  // namespace

CirculantEmbedding::CirculantEmbedding(const ToeplitzOperator& t) : n_(t.dim()) {
  size_ = static_cast<int>(std::bit_ceil(static_cast<unsigned>(2 * n_)));
  std::vector<double> c(size_, 0.0);
  for (int k = 0; k < n_; ++k) c[k] = t.first_col()[k];
  for (int k = 1; k < n_; ++k) c[size_ - k] = t.first_row()[k];
  fft_engine().fwd(symbol_, c);
}

Eigen::VectorXd CirculantEmbedding::apply(const Eigen::VectorXd& x) const {
  if (x.size() != n_) throw DomainError("circulant apply: dimension mismatch");
  std::vector<double> xp(size_, 0.0);
  for (int i = 0; i < n_; ++i) xp[i] = x[i];
  std::vector<std::complex<double>> xf;
  auto& fft = fft_engine();
  fft.fwd(xf, xp);
  for (int k = 0; k < size_; ++k) xf[k] *= symbol_[k];
  std::vector<double> y;
  fft.inv(y, xf);
  Eigen::VectorXd out(n_);
  for (int i = 0; i < n_; ++i) out[i] = y[i];
  return out;
}

Eigen::VectorXd toeplitz_matvec(const ToeplitzOperator& t, const Eigen::VectorXd& x) {
  return CirculantEmbedding(t).apply(x);
}

// ---------------------------------------------------------------- operator

SystemOperator::SystemOperator(double a, double b, MassMatrix mass, ToeplitzOperator stiffness,
                               std::optional<TridiagonalMatrix> potential)
    : a_(a), b_(b), mass_(std::move(mass)), stiffness_(std::move(stiffness)), potential_(std::move(potential)) {
  if (stiffness_.dim() != mass_.dim() || (potential_ && potential_->dim() != mass_.dim()))
    throw DomainError("system operator: dimension mismatch between parts");
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("system operator: non-finite coefficient");
  circulant_ = std::make_shared<const CirculantEmbedding>(stiffness_);
}

SystemOperator SystemOperator::with_coefficients(double a, double b) const {
  SystemOperator r = *this;
  r.a_ = a;
  r.b_ = b;
  return r;
}

Eigen::VectorXd SystemOperator::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd y = a_ * mass_.apply(x);
  if (b_ != 0.0) {
    Eigen::VectorXd k = circulant_->apply(x);
    if (potential_) k += potential_->apply(x);
    y += b_ * k;
  }
  return y;
}

TridiagonalMatrix SystemOperator::tridiagonal_part() const {
  TridiagonalMatrix band = stiffness_.tridiagonal_part();
  if (potential_) band = band.combined(1.0, *potential_, 1.0);
  return mass_.combined(a_, band, b_);
}

Eigen::MatrixXd SystemOperator::to_dense() const {
  Eigen::MatrixXd k = stiffness_.to_dense();
  if (potential_) k += potential_->to_dense();
  return a_ * mass_.to_dense() + b_ * k;
}

double relative_residual(const SystemOperator& op, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  const double nb = b.norm();
  const double nr = (op.apply(x) - b).norm();
  return nb > 0.0 ? nr / nb : nr;
}

// ---------------------------------------------------------------- dense

Factorization::Factorization(SystemOperator op, SolverOptions options)
    : op_(std::make_shared<const SystemOperator>(std::move(op))), options_(options) {
  lu_.compute(op_->to_dense());
  const auto d = lu_.matrixLU().diagonal().cwiseAbs();
  const double dmax = d.maxCoeff();
  if (!(dmax > 0.0) || d.minCoeff() <= dmax * 1e-15 * dim())
    throw SolverError("dense factorization: matrix is singular to working precision", INFINITY);
}

Factorization factor_dense(const SystemOperator& op, const SolverOptions& options) {
  if (op.dim() > options.dense_limit)
    throw SolverError("dense factorization: dimension " + std::to_string(op.dim()) +
                          " exceeds the dense limit " + std::to_string(options.dense_limit),
                      INFINITY);
  return Factorization(op, options);
}

Eigen::VectorXd Factorization::solve(const Eigen::VectorXd& b) const {
  if (b.size() != dim()) throw DomainError("dense solve: dimension mismatch");
  Eigen::VectorXd x = lu_.solve(b);
  if (options_.check_residual) {
    const double r = relative_residual(*op_, x, b);
    if (!(r <= options_.tol)) throw SolverError("dense solve: residual check failed", r);
  }
  return x;
}

// ---------------------------------------------------------------- GMRES

namespace {

IterativeResult gmres_impl(const SystemOperator& op, const TridiagonalMatrix& precond,
                           const Eigen::VectorXd& b, const SolverOptions& opt) {
  const int n = op.dim();
  if (b.size() != n) throw DomainError("iterative solve: dimension mismatch");
  if (opt.tol < 1e-12) throw DomainError("iterative solve: tolerance below 1e-12");
  IterativeResult res;
  res.x = Eigen::VectorXd::Zero(n);
  const double nb = b.norm();
  if (nb == 0.0) return res;

  const int mr = std::max(1, std::min(opt.restart, n));
  Eigen::MatrixXd V(n, mr + 1);
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(mr + 1, mr);
  Eigen::VectorXd cs(mr), sn(mr), g(mr + 1);

  Eigen::VectorXd r = b;
  double beta = nb;
  while (res.iterations < opt.max_iterations) {
    V.col(0) = r / beta;
    g.setZero();
    g[0] = beta;
    H.setZero();
    int k = 0;
    for (; k < mr && res.iterations < opt.max_iterations; ++k) {
      ++res.iterations;
      Eigen::VectorXd w = op.apply(precond.solve(V.col(k)));
      for (int i = 0; i <= k; ++i) {  // modified Gram-Schmidt
        H(i, k) = V.col(i).dot(w);
        w -= H(i, k) * V.col(i);
      }
      H(k + 1, k) = w.norm();
      if (H(k + 1, k) > 0.0) V.col(k + 1) = w / H(k + 1, k);
      for (int i = 0; i < k; ++i) {
        const double t = cs[i] * H(i, k) + sn[i] * H(i + 1, k);
        H(i + 1, k) = -sn[i] * H(i, k) + cs[i] * H(i + 1, k);
        H(i, k) = t;
      }
      const double den = std::hypot(H(k, k), H(k + 1, k));
      cs[k] = H(k, k) / den;
      sn[k] = H(k + 1, k) / den;
      H(k, k) = den;
      H(k + 1, k) = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = cs[k] * g[k];
      if (std::abs(g[k + 1]) <= 0.1 * opt.tol * nb) {
        ++k;
        break;
      }
    }
    const Eigen::VectorXd y =
        H.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    res.x += precond.solve(V.leftCols(k) * y);
    r = b - op.apply(res.x);
    beta = r.norm();
    res.relative_residual = beta / nb;
    if (res.relative_residual <= opt.tol) return res;
  }
  throw SolverError("GMRES did not converge in " + std::to_string(res.iterations) + " iterations",
                    res.relative_residual);
}

}  // namespace

IterativeResult gmres(const SystemOperator& op, const Eigen::VectorXd& b, const SolverOptions& options) {
  return gmres_impl(op, op.tridiagonal_part(), b, options);
}

Eigen::VectorXd solve_iterative(const SystemOperator& op, const Eigen::VectorXd& b, double tol,
                                const SolverOptions& options) {
  SolverOptions o = options;
  o.tol = tol;
  return gmres(op, b, o).x;
}

// ---------------------------------------------------------------- wrapper

LinearSolver::LinearSolver(SystemOperator op, SolverOptions options)
    : op_(std::move(op)), options_(options), backend_(options.backend) {
  if (backend_ == Backend::Auto)
    backend_ = op_.dim() <= options_.auto_dense_max ? Backend::Dense : Backend::Iterative;
  if (backend_ == Backend::Dense)
    dense_.emplace(factor_dense(op_, options_));
  else
    precond_ = op_.tridiagonal_part();
}

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& b) const {
  if (dense_) return dense_->solve(b);
  return gmres_impl(op_, precond_, b, options_).x;
}

}  // namespace fracfem
