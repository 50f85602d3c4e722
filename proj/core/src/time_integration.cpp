#include "fracfem/time_integration.hpp"

#include <cmath>
#include <map>
#include <string>

#include "fracfem/errors.hpp"
#include "fracfem/spectral.hpp"

namespace fracfem {

const char* method_name(Method m) {
  switch (m) {
    case Method::BE: return "BE";
    case Method::CN: return "CN";
    case Method::DampedCN: return "DampedCN";
  }
  return "?";
}

Method parse_method(const std::string& s) {
  if (s == "BE" || s == "be") return Method::BE;
  if (s == "CN" || s == "cn") return Method::CN;
  if (s == "DampedCN" || s == "dampedcn" || s == "DCN" || s == "dcn") return Method::DampedCN;
  throw ConfigError("unknown scheme '" + s + "' (expected BE, CN or DampedCN)");
}

void SchemeSpec::validate() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw ConfigError("time step must be positive");
  if (steps < 1) throw ConfigError("step count must be positive");
  if (method == Method::DampedCN && steps < 2)
    throw ConfigError("damped Crank-Nicolson needs at least two steps");
}

const Snapshot& Trajectory::at(double t) const {
  for (const auto& s : snapshots)
    if (std::abs(s.t - t) <= 1e-12 * std::max(1.0, std::abs(t))) return s;
  throw DomainError("no snapshot stored at t = " + std::to_string(t));
}

namespace {

int step_index(double t, double tau, int steps) {
  const double r = t / tau;
  const long n = std::lround(r);
  if (std::abs(r - n) > 1e-9 * std::max(1.0, r) || n < 0 || n > steps)
    throw ConfigError("snapshot time " + std::to_string(t) + " is not a whole number of steps of " +
                      std::to_string(tau));
  return static_cast<int>(n);
}

}  // namespace

Trajectory run_scheme(const SchemeSpec& spec, const StepOperators& ops, const CoefficientVector& v,
                      const RunOptions& options) {
  spec.validate();
  if (v.size() != ops.dim()) throw DomainError("run_scheme: initial vector does not match operators");

  std::map<int, double> wanted;
  for (double t : options.snapshot_times) wanted[step_index(t, spec.tau, spec.steps)] = t;

  const double tau = spec.tau;
  std::optional<LinearSolver> be, cn;
  std::optional<SystemOperator> cn_rhs;
  if (spec.method != Method::CN) be.emplace(ops.system(1.0, tau), options.solver);
  if (spec.method != Method::BE) {
    cn.emplace(ops.system(1.0, 0.5 * tau), options.solver);
    cn_rhs.emplace(ops.system(1.0, -0.5 * tau));
  }

  Trajectory traj;
  Eigen::VectorXd u = v.values;
  auto record = [&](int n) {
    auto it = wanted.find(n);
    if (it != wanted.end()) traj.snapshots.push_back({n, it->second, CoefficientVector(u)});
  };
  record(0);
  const bool zero = u.isZero(0.0) && !options.load;
  for (int n = 1; n <= spec.steps; ++n) {
    if (!zero) {
      const bool use_be = spec.method == Method::BE || (spec.method == Method::DampedCN && n <= 2);
      try {
        if (use_be) {
          Eigen::VectorXd rhs = ops.mass.apply(u);
          if (options.load) rhs += tau * options.load(n * tau);
          u = be->solve(rhs);
        } else {
          Eigen::VectorXd rhs = cn_rhs->apply(u);
          if (options.load) rhs += 0.5 * tau * (options.load(n * tau) + options.load((n - 1) * tau));
          u = cn->solve(rhs);
        }
      } catch (const SolverError& e) {
        throw SolverError("step " + std::to_string(n) + ": " + e.what(), e.residual());
      }
    }
    record(n);
  }
  traj.final_state = CoefficientVector(u);
  traj.final_time = spec.final_time();
  return traj;
}

Trajectory run_scheme(const SchemeSpec& spec, const MassMatrix& mass, const ToeplitzOperator& stiffness,
                      const CoefficientVector& v, const RunOptions& options) {
  return run_scheme(spec, StepOperators{mass, stiffness, std::nullopt}, v, options);
}

// ---------------------------------------------------------------- scalar

namespace {
std::complex<double> r_bw(std::complex<double> z) {
  if (std::abs(1.0 + z) < 1e-14) throw DomainError("stability function evaluated at its pole z = -1");
  return 1.0 / (1.0 + z);
}
std::complex<double> r_cn(std::complex<double> z) {
  if (std::abs(1.0 + 0.5 * z) < 1e-14) throw DomainError("stability function evaluated at its pole z = -2");
  return (1.0 - 0.5 * z) / (1.0 + 0.5 * z);
}
}  // namespace

std::complex<double> stability_fn(Method method, std::complex<double> z) {
  return method == Method::CN ? r_cn(z) : r_bw(z);
}

std::complex<double> stability_fn_pow(Method method, std::complex<double> z, int n) {
  if (n < 0) throw DomainError("stability power needs n >= 0");
  switch (method) {
    case Method::BE: return std::pow(r_bw(z), n);
    case Method::CN: return std::pow(r_cn(z), n);
    case Method::DampedCN:
      if (n <= 2) return std::pow(r_bw(z), n);
      return r_bw(z) * r_bw(z) * std::pow(r_cn(z), n - 2);
  }
  return 0.0;
}

// ---------------------------------------------------------------- smoothing

Eigen::MatrixXd scheme_power_matrix(Method method, const Eigen::MatrixXd& b, double s, int n) {
  const auto id = Eigen::MatrixXd::Identity(b.rows(), b.cols());
  Eigen::PartialPivLU<Eigen::MatrixXd> be((id + s * b).eval());
  const Eigen::MatrixXd rbw = be.inverse();
  Eigen::PartialPivLU<Eigen::MatrixXd> cn((id + 0.5 * s * b).eval());
  const Eigen::MatrixXd rcn = cn.solve((id - 0.5 * s * b).eval());
  auto mpow = [&](const Eigen::MatrixXd& r, int k) {
    Eigen::MatrixXd out = id;
    for (int i = 0; i < k; ++i) out = r * out;
    return out;
  };
  switch (method) {
    case Method::BE: return mpow(rbw, n);
    case Method::CN: return mpow(rcn, n);
    case Method::DampedCN: return n <= 2 ? mpow(rbw, n) : Eigen::MatrixXd(mpow(rcn, n - 2) * rbw * rbw);
  }
  return id;
}

std::vector<double> smoothing_profile(const SpectralFrame& frame, Method method, double gamma, int n_max,
                                      std::span<const double> s_grid) {
  if (n_max < 1) throw DomainError("smoothing profile needs n_max >= 1");
  if (s_grid.empty()) throw DomainError("smoothing profile needs a nonempty s grid");
  const Eigen::MatrixXd& b = frame.matrix();
  const Eigen::MatrixXd p = frame.power(gamma);
  const auto id = Eigen::MatrixXd::Identity(b.rows(), b.cols());
  std::vector<double> prof(n_max, 0.0);
  for (double s : s_grid) {
    if (!(s > 0.0)) throw DomainError("smoothing profile needs positive s");
    Eigen::PartialPivLU<Eigen::MatrixXd> be((id + s * b).eval());
    Eigen::PartialPivLU<Eigen::MatrixXd> cn((id + 0.5 * s * b).eval());
    const Eigen::MatrixXd cn_right = (id - 0.5 * s * b).eval();
    Eigen::MatrixXd x = p;  // A^gamma r(sA)^n, built one factor at a time
    for (int n = 1; n <= n_max; ++n) {
      const bool use_be = method == Method::BE || (method == Method::DampedCN && n <= 2);
      x = use_be ? Eigen::MatrixXd(be.solve(x)) : Eigen::MatrixXd(cn.solve(cn_right * x));
      prof[n - 1] = std::max(prof[n - 1], std::pow(n * s, gamma) * spectral_norm(x));
    }
  }
  return prof;
}

double smoothing_constant(const SpectralFrame& frame, Method method, double gamma, int n_max,
                          std::span<const double> s_grid) {
  const auto prof = smoothing_profile(frame, method, gamma, n_max, s_grid);
  double c = 0.0;
  for (double v : prof) c = std::max(c, v);
  return c;
}

std::vector<double> default_s_grid() {
  std::vector<double> s;
  for (int k = -8; k <= 0; ++k) s.push_back(std::pow(10.0, 0.5 * k));
  return s;
}

// ---------------------------------------------------------------- CN bound

CnBoundGrid CnBoundGrid::refined() const {
  CnBoundGrid g = *this;
  g.n_radius = 2 * n_radius - 1;
  g.n_arg = 2 * n_arg - 1;
  return g;
}

double fit_cn_constant(const CnBoundGrid& g) {
  if (g.n_radius < 2 || g.n_arg < 2 || g.n_max < 1 || !(g.r_min > 0.0) || !(g.r_max > g.r_min))
    throw DomainError("invalid sampling grid for the rational bound fit");
  double c_fit = 0.0;
  const double lr0 = std::log(g.r_min), lr1 = std::log(g.r_max);
  for (int i = 0; i < g.n_radius; ++i) {
    const double r = std::exp(lr0 + (lr1 - lr0) * i / (g.n_radius - 1));
    for (int j = 0; j < g.n_arg; ++j) {
      const double th = -g.arg_max + 2.0 * g.arg_max * j / (g.n_arg - 1);
      const std::complex<double> z = std::polar(r, th);
      const std::complex<double> rc = r_cn(z);
      std::complex<double> rn = 1.0;
      for (int n = 1; n <= g.n_max; ++n) {
        rn *= rc;
        const double err = std::abs(std::exp(-static_cast<double>(n) * z) - rn);
        const double bound = n * r * r * r * std::exp(-g.c * n * r);
        c_fit = std::max(c_fit, err / bound);
      }
    }
  }
  return c_fit;
}

CnBoundFit fit_cn_bound(const CnBoundGrid& grid) {
  return {fit_cn_constant(grid), fit_cn_constant(grid.refined()), grid.c};
}

}  // namespace fracfem
