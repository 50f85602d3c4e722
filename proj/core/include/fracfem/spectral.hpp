#pragma once

// Dense spectral calculus for A_h = M^{-1} K at desk scale.
//
// With M = L L^T, the matrix B = L^{-1} K L^{-T} is similar to A_h and the map
// x -> L^T x is an isometry from the M-inner product to the Euclidean one, so
// M-norms of functions of A_h are 2-norms of the same functions of B.

#include <optional>

#include <Eigen/Dense>

#include "fracfem/operators.hpp"

namespace fracfem {

class SpectralFrame {
 public:
  SpectralFrame(const MassMatrix& mass, const ToeplitzOperator& stiffness,
                const std::optional<TridiagonalMatrix>& potential = std::nullopt);

  int dim() const noexcept { return static_cast<int>(b_.rows()); }
  const Eigen::MatrixXd& matrix() const noexcept { return b_; }
  const Eigen::MatrixXd& mass_factor() const noexcept { return l_; }

  // Coefficients -> frame coordinates (L^T x) and back.
  Eigen::VectorXd to_frame(const Eigen::VectorXd& x) const;
  Eigen::VectorXd from_frame(const Eigen::VectorXd& y) const;
  Eigen::VectorXcd from_frame(const Eigen::VectorXcd& y) const;

  Eigen::VectorXcd eigenvalues() const;
  // B^gamma for real gamma >= 0 (principal branch, Schur based).
  Eigen::MatrixXd power(double gamma) const;

 private:
  Eigen::MatrixXd l_;
  Eigen::MatrixXd b_;
};

// Largest singular value.
double spectral_norm(const Eigen::MatrixXd& a);

}  // namespace fracfem
