#pragma once

// Solvers for a*M + b*(K + M_q), where K is a dense nonsymmetric Toeplitz matrix
// and M, M_q are tridiagonal.

#include <complex>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

#include "fracfem/operators.hpp"

namespace fracfem {

enum class Backend { Auto, Dense, Iterative };

struct SolverOptions {
  Backend backend = Backend::Auto;
  int auto_dense_max = 2048;  // Auto picks dense LU up to this dimension
  int dense_limit = 8192;     // hard cap for dense factorization
  double tol = 1e-10;
  int restart = 50;
  int max_iterations = 5000;
  bool check_residual = true;
};

// Toeplitz matrix embedded in a circulant of size 2^k >= 2n; products cost
// two FFTs of that size plus one pointwise product.
class CirculantEmbedding {
 public:
  explicit CirculantEmbedding(const ToeplitzOperator& t);
  int dim() const noexcept { return n_; }
  int fft_size() const noexcept { return size_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

 private:
  int n_ = 0;
  int size_ = 0;
  std::vector<std::complex<double>> symbol_;
};

Eigen::VectorXd toeplitz_matvec(const ToeplitzOperator& t, const Eigen::VectorXd& x);

class SystemOperator {
 public:
  SystemOperator(double a, double b, MassMatrix mass, ToeplitzOperator stiffness,
                 std::optional<TridiagonalMatrix> potential = std::nullopt);

  int dim() const noexcept { return mass_.dim(); }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  const MassMatrix& mass() const noexcept { return mass_; }
  const ToeplitzOperator& stiffness() const noexcept { return stiffness_; }
  const std::optional<TridiagonalMatrix>& potential() const noexcept { return potential_; }

  // Same operator with other coefficients; shares the FFT symbol.
  SystemOperator with_coefficients(double a, double b) const;

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  TridiagonalMatrix tridiagonal_part() const;
  Eigen::MatrixXd to_dense() const;

 private:
  double a_, b_;
  MassMatrix mass_;
  ToeplitzOperator stiffness_;
  std::optional<TridiagonalMatrix> potential_;
  std::shared_ptr<const CirculantEmbedding> circulant_;
};

// Dense LU with partial pivoting; immutable and reusable.
class Factorization {
 public:
  int dim() const noexcept { return static_cast<int>(lu_.rows()); }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;

 private:
  friend Factorization factor_dense(const SystemOperator&, const SolverOptions&);
  Factorization(SystemOperator op, SolverOptions options);
  std::shared_ptr<const SystemOperator> op_;
  SolverOptions options_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

Factorization factor_dense(const SystemOperator& op, const SolverOptions& options = {});

struct IterativeResult {
  Eigen::VectorXd x;
  int iterations = 0;
  double relative_residual = 0.0;
};

// Restarted GMRES, right-preconditioned by the tridiagonal part of `op`.
IterativeResult gmres(const SystemOperator& op, const Eigen::VectorXd& b,
                      const SolverOptions& options = {});
Eigen::VectorXd solve_iterative(const SystemOperator& op, const Eigen::VectorXd& b, double tol,
                                const SolverOptions& options = {});

// Picks a backend once per operator and applies it to every right-hand side.
class LinearSolver {
 public:
  LinearSolver(SystemOperator op, SolverOptions options = {});
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Backend backend() const noexcept { return backend_; }
  const SystemOperator& op() const noexcept { return op_; }

 private:
  SystemOperator op_;
  SolverOptions options_;
  Backend backend_;
  std::optional<Factorization> dense_;
  TridiagonalMatrix precond_;
};

double relative_residual(const SystemOperator& op, const Eigen::VectorXd& x, const Eigen::VectorXd& b);

}  // namespace fracfem
