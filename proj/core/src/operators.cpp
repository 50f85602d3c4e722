#include "fracfem/operators.hpp"

#include "fracfem/errors.hpp"

namespace fracfem {

Eigen::VectorXd TridiagonalMatrix::apply(const Eigen::VectorXd& x) const {
  const int n = dim();
  if (x.size() != n) throw DomainError("tridiagonal apply: dimension mismatch");
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    double s = diag[i] * x[i];
    if (i > 0) s += sub[i - 1] * x[i - 1];
    if (i + 1 < n) s += super[i] * x[i + 1];
    y[i] = s;
  }
  return y;
}

Eigen::MatrixXd TridiagonalMatrix::to_dense() const {
  const int n = dim();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    a(i, i) = diag[i];
    if (i + 1 < n) {
      a(i + 1, i) = sub[i];
      a(i, i + 1) = super[i];
    }
  }
  return a;
}

Eigen::VectorXd TridiagonalMatrix::solve(const Eigen::VectorXd& b) const {
  const int n = dim();
  if (b.size() != n) throw DomainError("tridiagonal solve: dimension mismatch");
  if (n == 0) return b;
  std::vector<double> c(n), d(n);
  double piv = diag[0];
  if (piv == 0.0) throw SolverError("tridiagonal solve: zero pivot", 0.0);
  c[0] = n > 1 ? super[0] / piv : 0.0;
  d[0] = b[0] / piv;
  for (int i = 1; i < n; ++i) {
    piv = diag[i] - sub[i - 1] * c[i - 1];
    if (piv == 0.0) throw SolverError("tridiagonal solve: zero pivot", 0.0);
    c[i] = i + 1 < n ? super[i] / piv : 0.0;
    d[i] = (b[i] - sub[i - 1] * d[i - 1]) / piv;
  }
  Eigen::VectorXd x(n);
  x[n - 1] = d[n - 1];
  for (int i = n - 2; i >= 0; --i) x[i] = d[i] - c[i] * x[i + 1];
  return x;
}

TridiagonalMatrix TridiagonalMatrix::combined(double a, const TridiagonalMatrix& other,
                                              double b) const {
  if (other.dim() != dim()) throw DomainError("tridiagonal combine: dimension mismatch");
  TridiagonalMatrix r = *this;
  for (std::size_t i = 0; i < diag.size(); ++i) r.diag[i] = a * diag[i] + b * other.diag[i];
  for (std::size_t i = 0; i < sub.size(); ++i) {
    r.sub[i] = a * sub[i] + b * other.sub[i];
    r.super[i] = a * super[i] + b * other.super[i];
  }
  return r;
}

ToeplitzOperator::ToeplitzOperator(std::vector<double> first_row, std::vector<double> first_col)
    : first_row_(std::move(first_row)), first_col_(std::move(first_col)) {
  if (first_row_.size() != first_col_.size() || first_row_.empty())
    throw DomainError("Toeplitz operator: first row and column must be nonempty and equal length");
  if (first_row_[0] != first_col_[0])
    throw DomainError("Toeplitz operator: first row and column disagree on the diagonal");
}

Eigen::MatrixXd ToeplitzOperator::to_dense() const {
  const int n = dim();
  Eigen::MatrixXd a(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a(i, j) = entry(i, j);
  return a;
}

Eigen::VectorXd ToeplitzOperator::apply_dense(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw DomainError("Toeplitz apply: dimension mismatch");
  const int n = dim();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += entry(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

TridiagonalMatrix ToeplitzOperator::tridiagonal_part() const {
  const int n = dim();
  TridiagonalMatrix t;
  t.diag.assign(n, first_row_[0]);
  t.sub.assign(n > 0 ? n - 1 : 0, n > 1 ? first_col_[1] : 0.0);
  t.super.assign(n > 0 ? n - 1 : 0, n > 1 ? first_row_[1] : 0.0);
  return t;
}

}  // namespace fracfem
