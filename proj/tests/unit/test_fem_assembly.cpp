#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "fracfem/errors.hpp"
#include "fracfem/fem_assembly.hpp"
#include "oracle.hpp"

using namespace fracfem;

namespace {

Eigen::MatrixXd classical(int m) {
  const int n = m - 1;
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = 2.0 * m;
    if (i + 1 < n) t(i, i + 1) = t(i + 1, i) = -1.0 * m;
  }
  return t;
}

double max_rel_to_classical(double alpha, int m) {
  const Eigen::MatrixXd k = assemble_stiffness(UniformMesh(m), FracOrder(alpha)).to_dense();
  const Eigen::MatrixXd t = classical(m);
  double worst = 0.0;
  for (int i = 0; i < k.rows(); ++i)
    for (int j = 0; j < k.cols(); ++j)
      worst = std::max(worst, std::abs(k(i, j) - t(i, j)) / (2.0 * m));
  return worst;
}

Eigen::VectorXd random_vector(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = nd(rng);
  return v;
}

std::vector<double> as_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST(UniformMesh, Basics) {
  EXPECT_THROW(UniformMesh(1), DomainError);
  const UniformMesh m(8);
  EXPECT_EQ(m.dim(), 7);
  EXPECT_EQ(m.node(8), 1.0);
  EXPECT_DOUBLE_EQ(m.h() * m.cells(), 1.0);
}

TEST(Stiffness, ClassicalLimit) {
  EXPECT_LT(max_rel_to_classical(1.999999, 8), 1e-4);
  EXPECT_LT(max_rel_to_classical(1.999999, 32), 1e-4);
}

TEST(Stiffness, ClassicalLimitMonotone) {
  const double e2 = max_rel_to_classical(2.0 - 1e-2, 16);
  const double e4 = max_rel_to_classical(2.0 - 1e-4, 16);
  const double e6 = max_rel_to_classical(2.0 - 1e-6, 16);
  EXPECT_GT(e2, e4);
  EXPECT_GT(e4, e6);
}

TEST(Stiffness, MatchesQuadratureOracle) {
  const int m = 8;
  const Eigen::MatrixXd k = assemble_stiffness(UniformMesh(m), FracOrder(1.5)).to_dense();
  for (int i = 1; i < m; ++i)
    for (int j = 1; j < m; ++j) {
      const double ref = oracle::stiffness(m, 1.5, i, j);
      if (ref == 0.0)
        EXPECT_EQ(k(i - 1, j - 1), 0.0);
      else
        EXPECT_NEAR(k(i - 1, j - 1), ref, 1e-8 * std::abs(ref)) << i << "," << j;
    }
}

TEST(Stiffness, ToeplitzAndPersymmetric) {
  for (int m : {4, 8, 16, 32})
    for (double a : {1.25, 1.5, 1.75}) {
      const ToeplitzOperator op = assemble_stiffness(UniformMesh(m), FracOrder(a));
      EXPECT_EQ(op.first_row()[0], op.first_col()[0]);
      const Eigen::MatrixXd k = op.to_dense();
      const int n = m - 1;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          EXPECT_EQ(k(i, j), j >= i ? op.first_row()[j - i] : op.first_col()[i - j]);
          EXPECT_EQ(k(i, j), k(n - 1 - j, n - 1 - i));
        }
    }
}

TEST(Stiffness, LowerHessenberg) {
  const Eigen::MatrixXd k = assemble_stiffness(UniformMesh(16), FracOrder(1.3)).to_dense();
  for (int i = 0; i < k.rows(); ++i)
    for (int j = i + 2; j < k.cols(); ++j) EXPECT_EQ(k(i, j), 0.0);
}

TEST(Stiffness, LargeOffsetSeriesIsContinuous) {
  // Entries just below and above the switch to the series expansion follow the
  // smooth decay k^{-1-alpha}.
  const UniformMesh mesh(64);
  const FracOrder a(1.5);
  for (int k = 5; k <= 12; ++k) {
    const double r0 = stiffness_entry(mesh, a, k) / stiffness_entry(mesh, a, k - 1);
    const double r1 = stiffness_entry(mesh, a, k + 1) / stiffness_entry(mesh, a, k);
    EXPECT_GT(r1, r0);  // ratios increase towards 1
    EXPECT_LT(r1, 1.0);
  }
  // High-precision check at k = 8: direct fourth difference in long double.
  const long double q = 1.5L;
  long double d = 0;
  const long double w[5] = {1, -4, 6, -4, 1};
  for (int s = -2; s <= 2; ++s) d += w[s + 2] * std::pow(static_cast<long double>(8 + s), q);
  const double ref = static_cast<double>(-std::pow(64.0L, 0.5L) * d / std::tgamma(2.5L));
  EXPECT_NEAR(stiffness_entry(mesh, a, 8), ref, 1e-12 * std::abs(ref));
}

TEST(Stiffness, SymmetricPartPositiveDefinite) {
  for (double a : {1.25, 1.5, 1.75}) {
    const Eigen::MatrixXd k = assemble_stiffness(UniformMesh(16), FracOrder(a)).to_dense();
    const Eigen::MatrixXd s = 0.5 * (k + k.transpose());
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(s).eigenvalues()(0), 0.0);
  }
}

TEST(Stiffness, CoercivityUniformInMesh) {
  for (double a : {1.25, 1.5, 1.75}) {
    double lo = INFINITY;
    for (int m : {4, 8, 16, 32, 64}) {
      const UniformMesh mesh(m);
      const Eigen::MatrixXd k = assemble_stiffness(mesh, FracOrder(a)).to_dense();
      const Eigen::MatrixXd s = 0.5 * (k + k.transpose());
      Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, assemble_mass(mesh).to_dense());
      lo = std::min(lo, es.eigenvalues()(0));
    }
    EXPECT_GT(lo, 1.0) << a;
  }
}

TEST(Mass, SmallMesh) {
  const MassMatrix m = assemble_mass(UniformMesh(4));
  for (double d : m.diag) EXPECT_NEAR(d, 1.0 / 6.0, 1e-16);
  for (double o : m.sub) EXPECT_NEAR(o, 1.0 / 24.0, 1e-16);
  EXPECT_TRUE(m.is_symmetric());
}

TEST(Mass, RowSums) {
  const UniformMesh mesh(10);
  const Eigen::MatrixXd m = assemble_mass(mesh).to_dense();
  const Eigen::VectorXd rs = m.rowwise().sum();
  EXPECT_NEAR(rs[0], 5.0 * mesh.h() / 6.0, 1e-15);
  EXPECT_NEAR(rs[8], 5.0 * mesh.h() / 6.0, 1e-15);
  for (int i = 1; i < 8; ++i) EXPECT_NEAR(rs[i], mesh.h(), 1e-15);
}

TEST(Mass, QuadraticExactness) {
  const UniformMesh mesh(8);
  const Eigen::VectorXd c = random_vector(7, 1);
  const auto cs = as_std(c);
  const double ref = oracle::integrate_smooth([&](double x) { return std::pow(oracle::p1(cs, x), 2); }, 0.0, 1.0,
                                              oracle::nodes(8));
  EXPECT_NEAR(c.dot(assemble_mass(mesh).apply(c)), ref, 1e-12 * ref);
}

TEST(Mass, EntriesMatchOracle) {
  for (int m : {4, 8}) {
    const Eigen::MatrixXd a = assemble_mass(UniformMesh(m)).to_dense();
    for (int i = 1; i < m; ++i)
      for (int j = 1; j < m; ++j)
        EXPECT_NEAR(a(i - 1, j - 1), oracle::weighted_gram(m, i, j, [](double) { return 1.0; }), 1e-15);
  }
}

TEST(WeightedMass, UnitPotentialIsMass) {
  const UniformMesh mesh(8);
  const auto w = assemble_weighted_mass(mesh, StepPotential{0.5, 1.0, 1.0});
  const auto m = assemble_mass(mesh);
  for (int i = 0; i < 7; ++i) EXPECT_DOUBLE_EQ(w.diag[i], m.diag[i]);
  for (int i = 0; i < 6; ++i) EXPECT_DOUBLE_EQ(w.sub[i], m.sub[i]);
}

TEST(WeightedMass, SupportDisjointRowsVanish) {
  const Eigen::MatrixXd w = assemble_weighted_mass(UniformMesh(4), StepPotential{}).to_dense();
  EXPECT_EQ(w.row(2).norm(), 0.0);  // phi_3 lives on (1/2, 1)
  EXPECT_GT(w(0, 0), 0.0);
  EXPECT_NEAR(w(1, 1), 1.0 / 12.0, 1e-16);
}

TEST(WeightedMass, QuadraticFormMatchesOracle) {
  const UniformMesh mesh(8);
  const StepPotential q;
  const Eigen::VectorXd c = random_vector(7, 2);
  const auto cs = as_std(c);
  const double ref = oracle::integrate_smooth([&](double x) { return q(x) * std::pow(oracle::p1(cs, x), 2); },
                                              0.0, 1.0, oracle::nodes(8));
  EXPECT_NEAR(c.dot(assemble_weighted_mass(mesh, q).apply(c)), ref, 1e-12 * ref);
}

TEST(WeightedMass, RejectsOddMesh) {
  EXPECT_THROW(assemble_weighted_mass(UniformMesh(5), StepPotential{}), DomainError);
}

TEST(InitialData, ClosedFormNorms) {
  EXPECT_NEAR(InitialData::smooth_quadratic().l2_norm(), std::sqrt(1.0 / 30.0), 1e-16);
  EXPECT_NEAR(InitialData::step_half().l2_norm(), std::sqrt(0.5), 1e-16);
  EXPECT_NEAR(InitialData::quarter_power().l2_norm(), std::sqrt(2.0 / 3.0), 1e-16);
  for (const auto& v : {InitialData::smooth_quadratic(), InitialData::step_half(), InitialData::quarter_power()}) {
    const double ref = oracle::integrate([&](double x) { return v(x) * v(x); }, 0.0, 1.0, {0.5});
    EXPECT_NEAR(v.l2_norm() * v.l2_norm(), ref, 1e-13);
  }
}

TEST(LoadVector, MatchesOracle) {
  for (int m : {2, 3, 8, 32}) {
    const UniformMesh mesh(m);
    for (const auto& v : {InitialData::smooth_quadratic(), InitialData::step_half(), InitialData::quarter_power()}) {
      const Eigen::VectorXd b = load_vector(mesh, v);
      for (int i = 1; i < m; ++i) {
        const double ref = oracle::moment(m, i, [&](double x) { return v(x); }, {0.5});
        EXPECT_NEAR(b[i - 1], ref, 1e-14 + 1e-12 * std::abs(ref)) << v.name() << " m=" << m << " i=" << i;
      }
    }
  }
}

TEST(LoadVector, TwoCellClosedForms) {
  const UniformMesh mesh(2);
  // int_0^1 x(x-1) phi_1 = -5/48 ; int_{1/2}^1 phi_1 = 1/4
  EXPECT_NEAR(load_vector(mesh, InitialData::smooth_quadratic())[0], -5.0 / 48.0, 1e-15);
  EXPECT_NEAR(load_vector(mesh, InitialData::step_half())[0], 0.25, 1e-15);
  EXPECT_EQ(load_vector(mesh, InitialData::zero()).norm(), 0.0);
}

TEST(LoadVector, PointwiseDataHasNoMomentRule) {
  const auto v = InitialData::from_function("sin", [](double x) { return std::sin(x); });
  EXPECT_THROW(load_vector(UniformMesh(4), v), DomainError);
}

TEST(L2Projection, IdentityOnDiscreteSpace) {
  const UniformMesh mesh(16);
  const CoefficientVector c(random_vector(15, 3));
  const auto p = l2_projection(mesh, InitialData::from_nodal(mesh, c));
  EXPECT_LT((p.values - c.values).lpNorm<Eigen::Infinity>(), 1e-12);
}

TEST(L2Projection, SecondOrderForSmoothData) {
  const auto v = InitialData::smooth_quadratic();
  std::vector<double> err;
  for (int m : {16, 32, 64, 128, 256}) {
    const UniformMesh mesh(m);
    const auto c = l2_projection(mesh, v);
    // ||v - P v||^2 = ||v||^2 - ||P v||^2 by orthogonality.
    const double pn = discrete_l2_norm(mesh, c);
    err.push_back(std::sqrt(1.0 / 30.0 - pn * pn));
  }
  for (std::size_t k = 1; k < err.size(); ++k) EXPECT_NEAR(std::log2(err[k - 1] / err[k]), 2.0, 0.1) << k;
}

TEST(L2Projection, OrthogonalityResidual) {
  const int m = 16;
  const UniformMesh mesh(m);
  for (const auto& v : {InitialData::smooth_quadratic(), InitialData::step_half(), InitialData::quarter_power()}) {
    const auto c = as_std(l2_projection(mesh, v).values);
    for (int i = 1; i < m; ++i) {
      const double r = oracle::moment(m, i, [&](double x) { return oracle::p1(c, x) - v(x); }, {0.5});
      EXPECT_LE(std::abs(r), 1e-12);
    }
  }
}

TEST(RitzProjection, IdentityOnDiscreteSpace) {
  const UniformMesh mesh(16);
  const CoefficientVector c(random_vector(15, 4));
  const auto r = ritz_projection(mesh, FracOrder(1.5), InitialData::from_nodal(mesh, c));
  EXPECT_LT((r.values - c.values).lpNorm<Eigen::Infinity>(), 1e-10);
}

TEST(RitzProjection, LoadMatchesOracle) {
  const int m = 16;
  for (double a : {1.25, 1.5, 1.75}) {
    const Eigen::VectorXd r = ritz_load_vector(UniformMesh(m), FracOrder(a), InitialData::smooth_quadratic());
    for (int i = 1; i < m; ++i) {
      const double ref = oracle::form_power(m, a, i, {{1.0, 2.0}, {-1.0, 1.0}});
      EXPECT_NEAR(r[i - 1], ref, 1e-10 * std::max(1.0, std::abs(ref)));
    }
  }
}

TEST(RitzProjection, GalerkinOrthogonality) {
  const int m = 16;
  const double a = 1.5;
  const UniformMesh mesh(m);
  const auto c = ritz_projection(mesh, FracOrder(a), InitialData::smooth_quadratic());
  const Eigen::MatrixXd k = assemble_stiffness(mesh, FracOrder(a)).to_dense();
  for (int i = 1; i < m; ++i) {
    // A(R v - v, phi_i) = (K c)_i - A(v, phi_i), the latter by quadrature.
    const double av = oracle::form_power(m, a, i, {{1.0, 2.0}, {-1.0, 1.0}});
    EXPECT_LE(std::abs(k.row(i - 1).dot(c.values) - av), 1e-7);
  }
}

TEST(RitzProjection, BestApproximationInEnergy) {
  // Re A(v - w, v - w) up to the common term A(v, v):
  //   J(w) = c^T K c - c^T r - sum_j c_j A(phi_j, v), with v symmetric about 1/2.
  const int m = 16;
  const double a = 1.5, beta = 0.75;
  const UniformMesh mesh(m);
  const FracOrder alpha(a);
  const Eigen::MatrixXd k = assemble_stiffness(mesh, alpha).to_dense();
  const Eigen::VectorXd r = ritz_load_vector(mesh, alpha, InitialData::smooth_quadratic());
  auto right_v = [&](double x) {
    // xD_1^beta of y^2 - y with y = 1 - x
    const double y = 1.0 - x;
    return 2.0 / std::tgamma(3.0 - beta) * std::pow(y, 2.0 - beta) - 1.0 / std::tgamma(2.0 - beta) * std::pow(y, 1.0 - beta);
  };
  Eigen::VectorXd s(m - 1);
  for (int j = 1; j < m; ++j)
    s[j - 1] = -oracle::integrate([&](double x) { return oracle::left_frac_hat(m, j, beta, x) * right_v(x); },
                                  0.0, 1.0, oracle::nodes(m));
  auto J = [&](const Eigen::VectorXd& c) { return c.dot(k * c) - c.dot(r) - c.dot(s); };
  const auto ritz = ritz_projection(mesh, alpha, InitialData::smooth_quadratic());
  const auto interp = interpolant(mesh, InitialData::smooth_quadratic());
  EXPECT_LE(J(ritz.values), J(interp.values) + 1e-10);
}

TEST(RitzProjection, NonsmoothDataUnsupported) {
  const UniformMesh mesh(8);
  EXPECT_THROW(ritz_projection(mesh, FracOrder(1.5), InitialData::step_half()), DomainError);
  EXPECT_THROW(ritz_projection(mesh, FracOrder(1.5), InitialData::quarter_power()), DomainError);
}

TEST(Interpolant, NodalValues) {
  const UniformMesh mesh(4);
  const auto c = interpolant(mesh, InitialData::smooth_quadratic());
  EXPECT_DOUBLE_EQ(c.values[0], -3.0 / 16.0);
  EXPECT_DOUBLE_EQ(c.values[1], -0.25);
  EXPECT_DOUBLE_EQ(c.values[2], -3.0 / 16.0);
  const auto q = interpolant(mesh, InitialData::quarter_power());
  EXPECT_DOUBLE_EQ(q.values[0], std::pow(0.25, 0.25));
  EXPECT_DOUBLE_EQ(q.values[1], std::pow(0.5, 0.25));
  EXPECT_DOUBLE_EQ(q.values[2], std::pow(0.75, 0.25));
  const CoefficientVector c2(random_vector(3, 5));
  const auto back = interpolant(mesh, InitialData::from_nodal(mesh, c2));
  EXPECT_LT((back.values - c2.values).norm(), 1e-14);
}

TEST(Transfer, ProlongRestrictRoundTrip) {
  const UniformMesh coarse(8), fine(32);
  const CoefficientVector c(random_vector(7, 6));
  const auto f = prolong(c, coarse, fine);
  EXPECT_EQ(restrict_by_sampling(f, fine, coarse).values, c.values);
  EXPECT_NEAR(discrete_l2_norm(fine, f), discrete_l2_norm(coarse, c), 1e-13 * discrete_l2_norm(coarse, c));
}

TEST(Transfer, ProlongOfInterpolant) {
  const UniformMesh coarse(4), fine(8);
  const auto v = InitialData::quarter_power();
  const auto f = prolong(interpolant(coarse, v), coarse, fine);
  const auto iv = interpolant(fine, v);
  for (int k = 2; k < 8; k += 2) EXPECT_DOUBLE_EQ(f.values[k - 1], iv.values[k - 1]);
  EXPECT_DOUBLE_EQ(f.values[0], 0.5 * iv.values[1]);  // midpoint of (0, x_1)
}

TEST(Transfer, NonNestedRejected) {
  const CoefficientVector c(Eigen::VectorXd::Zero(3));
  EXPECT_THROW(prolong(c, UniformMesh(4), UniformMesh(6)), DomainError);
}
