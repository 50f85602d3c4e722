#include "fracfem/spectral.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include "fracfem/errors.hpp"

namespace fracfem {

SpectralFrame::SpectralFrame(const MassMatrix& mass, const ToeplitzOperator& stiffness,
                             const std::optional<TridiagonalMatrix>& potential) {
  if (mass.dim() != stiffness.dim()) throw DomainError("spectral frame: dimension mismatch");
  Eigen::LLT<Eigen::MatrixXd> llt(mass.to_dense());
  if (llt.info() != Eigen::Success) throw SolverError("spectral frame: mass matrix is not positive definite", 0.0);
  l_ = llt.matrixL();
  Eigen::MatrixXd k = stiffness.to_dense();
  if (potential) k += potential->to_dense();
  const auto lo = l_.triangularView<Eigen::Lower>();
  Eigen::MatrixXd t = lo.solve(k);                  // L^{-1} K
  b_ = lo.solve(t.transpose()).transpose();          // L^{-1} K L^{-T}
}

Eigen::VectorXd SpectralFrame::to_frame(const Eigen::VectorXd& x) const {
  return l_.transpose() * x;
}

Eigen::VectorXd SpectralFrame::from_frame(const Eigen::VectorXd& y) const {
  return l_.transpose().triangularView<Eigen::Upper>().solve(y);
}

Eigen::VectorXcd SpectralFrame::from_frame(const Eigen::VectorXcd& y) const {
  Eigen::MatrixXcd lt = l_.transpose().cast<std::complex<double>>();
  return lt.triangularView<Eigen::Upper>().solve(y);
}

Eigen::VectorXcd SpectralFrame::eigenvalues() const {
  Eigen::EigenSolver<Eigen::MatrixXd> es(b_, false);
  if (es.info() != Eigen::Success) throw SolverError("eigenvalue computation did not converge", 0.0);
  return es.eigenvalues();
}

Eigen::MatrixXd SpectralFrame::power(double gamma) const {
  if (gamma < 0.0) throw DomainError("fractional power needs gamma >= 0");
  if (gamma == 0.0) return Eigen::MatrixXd::Identity(dim(), dim());
  if (gamma == 1.0) return b_;
  Eigen::MatrixPower<Eigen::MatrixXd> mp(b_);
  return mp(gamma);
}

double spectral_norm(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a);
  return svd.singularValues()(0);
}

}  // namespace fracfem
