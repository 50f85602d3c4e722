#pragma once

// Numerical checks of the structural properties of A_h = M^{-1} K: location
// of the spectrum and numerical range, coercivity and continuity constants
// in the energy norm, and smoothing of the discrete semigroup.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "fracfem/fractional_kernels.hpp"
#include "fracfem/mesh.hpp"
#include "fracfem/operators.hpp"

namespace fracfem {

class SpectralFrame;

struct SectorReport {
  Eigen::VectorXcd eigenvalues;  // of the pencil (K, M)
  double max_abs_arg = 0.0;
  double min_real = 0.0;
  // Half-angle of the smallest sector around the positive axis containing the
  // numerical range: atan ||S^{-1/2} W S^{-1/2}||_2 for K = S + W.
  double sector_angle = 0.0;

  bool valid() const { return min_real > 0.0; }
};

SectorReport sector_check(const MassMatrix& mass, const ToeplitzOperator& stiffness);
SectorReport sector_check(const UniformMesh& mesh, const FracOrder& alpha);

struct SectorStability {
  std::vector<int> cells;
  std::vector<SectorReport> reports;
  // max |angle_i / angle_j - 1| over pairs of meshes.
  double angle_spread = 0.0;
  double spectral_arg_spread = 0.0;
};

SectorStability sector_stability(const FracOrder& alpha, std::span<const int> cells);

std::complex<double> rayleigh_quotient(const MassMatrix& mass, const ToeplitzOperator& stiffness,
                                       const Eigen::VectorXcd& phi);
// (K phi, phi) / (M phi, phi) for random complex phi with unit mass norm.
std::vector<std::complex<double>> numerical_range_sample(const UniformMesh& mesh, const FracOrder& alpha,
                                                         int n_samples, std::uint64_t seed = 0);

struct ConstantsReport {
  // Extrema of Re(K phi, phi) / ||phi||_S^2 and |(K phi, phi)| / ||phi||_S^2,
  // with ||phi||_S^2 = (sym(K) phi, phi), over samples plus the extremal vector.
  double coercivity = 0.0;
  double continuity = 0.0;
  int samples = 0;
  std::uint64_t seed = 0;

  double ratio() const { return coercivity / continuity; }
  double implied_angle() const;
};

ConstantsReport estimate_constants(const UniformMesh& mesh, const FracOrder& alpha, int n_samples,
                                   std::uint64_t seed = 0);

// Coercivity proxy: smallest eigenvalue of sym(K) relative to M.
double coercivity_proxy(const UniformMesh& mesh, const FracOrder& alpha);

// t^gamma ||A_h^gamma E_h(t) chi||_M / ||chi||_M, with E_h(t) approximated by
// damped Crank-Nicolson at tau = t / steps.
double smoothing_ratio(const UniformMesh& mesh, const FracOrder& alpha, const SpectralFrame& frame,
                       double gamma, double t, const Eigen::VectorXcd& chi, int steps = 1024);

struct SmoothingReport {
  std::vector<double> times;
  std::vector<double> sup_per_time;  // sup over chi at each t
  double sup = 0.0;
  std::uint64_t seed = 0;
};

SmoothingReport smoothing_check(const UniformMesh& mesh, const FracOrder& alpha, double gamma,
                                std::span<const double> t_grid, int n_chi = 10, std::uint64_t seed = 0);

}  // namespace fracfem
