#pragma once

#include <vector>

#include <Eigen/Core>

namespace fracfem {

// General tridiagonal matrix stored by bands. sub[i] = A(i+1, i), super[i] = A(i, i+1).
struct TridiagonalMatrix {
  std::vector<double> sub;
  std::vector<double> diag;
  std::vector<double> super;

  int dim() const noexcept { return static_cast<int>(diag.size()); }
  bool is_symmetric() const { return sub == super; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd to_dense() const;
  // Gaussian elimination without pivoting (Thomas algorithm).
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

  // a * this + b * other
  TridiagonalMatrix combined(double a, const TridiagonalMatrix& other, double b) const;
};

// Mass matrices are the symmetric instance of the tridiagonal storage.
using MassMatrix = TridiagonalMatrix;

// Dense constant-diagonal matrix, K(i, j) = first_row[j - i] for j >= i and
// first_col[i - j] for i > j.
class ToeplitzOperator {
 public:
  ToeplitzOperator() = default;
  ToeplitzOperator(std::vector<double> first_row, std::vector<double> first_col);

  int dim() const noexcept { return static_cast<int>(first_row_.size()); }
  const std::vector<double>& first_row() const noexcept { return first_row_; }
  const std::vector<double>& first_col() const noexcept { return first_col_; }

  double entry(int i, int j) const {
    return j >= i ? first_row_[j - i] : first_col_[i - j];
  }
  Eigen::MatrixXd to_dense() const;
  // O(n^2) reference product; the fast path lives in linear_solvers.
  Eigen::VectorXd apply_dense(const Eigen::VectorXd& x) const;
  TridiagonalMatrix tridiagonal_part() const;

 private:
  std::vector<double> first_row_;
  std::vector<double> first_col_;
};

}  // namespace fracfem
