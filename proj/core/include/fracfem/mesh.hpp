#pragma once

#include <cstddef>
#include <utility>

#include <Eigen/Core>

namespace fracfem {

// Uniform partition of (0, 1) into m cells with nodes x_j = j / m.
class UniformMesh {
 public:
  explicit UniformMesh(int cells);

  int cells() const noexcept { return m_; }
  double h() const noexcept { return 1.0 / m_; }
  // Number of interior nodes, which is the dimension of the discrete space.
  int dim() const noexcept { return m_ - 1; }
  // Node coordinate computed as j / m so that x_m == 1 exactly.
  double node(int j) const noexcept { return static_cast<double>(j) / m_; }

  bool operator==(const UniformMesh&) const = default;

 private:
  int m_;
};

// Interior nodal coefficients of a continuous piecewise-linear function that
// vanishes at x = 0 and x = 1.
struct CoefficientVector {
  Eigen::VectorXd values;

  CoefficientVector() = default;
  explicit CoefficientVector(Eigen::VectorXd v) : values(std::move(v)) {}
  static CoefficientVector zeros(const UniformMesh& mesh) {
    return CoefficientVector(Eigen::VectorXd::Zero(mesh.dim()));
  }

  Eigen::Index size() const noexcept { return values.size(); }
  bool matches(const UniformMesh& mesh) const noexcept { return values.size() == mesh.dim(); }
};

}  // namespace fracfem
