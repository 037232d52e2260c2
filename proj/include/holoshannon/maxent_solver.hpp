#pragma once

// Maximum-entropy occupancy of a discretized mu-space {(x, p^x)}: maximize
// the Stirling microstate count ln W = N ln N - sum n ln n subject to a fixed
// total and a fixed momentum per site. The stationary point is
// n(x, p) = exp(-alpha - lambda_x p) with lambda_x = beta v_x.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "holoshannon/core.hpp"

namespace holoshannon::maxent {

struct MuSpaceGrid {
  std::size_t n_x = 0;
  std::vector<double> momenta;  // symmetric about 0, ascending

  std::size_t n_p() const { return momenta.size(); }
  std::size_t cells() const { return n_x * momenta.size(); }
  double p_max() const { return momenta.back(); }
};

/// n_p equally spaced momenta spanning [-p_max, p_max].
inline MuSpaceGrid make_grid(std::size_t n_x, std::size_t n_p, double p_max) {
  detail::require(n_x >= 2 && n_p >= 2, "mu-space grid needs at least 2 sites and 2 momenta");
  detail::require(p_max > 0.0 && std::isfinite(p_max), "p_max must be positive");
  MuSpaceGrid g;
  g.n_x = n_x;
  g.momenta.resize(n_p);
  for (std::size_t j = 0; j < n_p; ++j)
    g.momenta[j] = -p_max + 2.0 * p_max * static_cast<double>(j) / static_cast<double>(n_p - 1);
  // exact symmetry about zero
  for (std::size_t j = 0; j < n_p / 2; ++j) g.momenta[n_p - 1 - j] = -g.momenta[j];
  if (n_p % 2 == 1) g.momenta[n_p / 2] = 0.0;
  return g;
}

/// Row-major n(x, p): index x * n_p + j.
struct OccupancyField {
  std::size_t n_x = 0;
  std::size_t n_p = 0;
  std::vector<double> values;

  double& at(std::size_t x, std::size_t j) { return values[x * n_p + j]; }
  double at(std::size_t x, std::size_t j) const { return values[x * n_p + j]; }

  double total() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }

  double site_total(std::size_t x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < n_p; ++j) s += at(x, j);
    return s;
  }

  double site_momentum(const MuSpaceGrid& g, std::size_t x) const {
    double s = 0.0;
    for (std::size_t j = 0; j < n_p; ++j) s += g.momenta[j] * at(x, j);
    return s;
  }
};

struct ConstraintSet {
  double total = 0.0;             // N = sum n
  std::vector<double> momentum;   // P(x) = sum_p p n(x, p)
};

/// Strict feasibility: some positive occupancy meets the constraints iff sum |P(x)| < p_max N.
inline bool feasible(const MuSpaceGrid& g, const ConstraintSet& c) {
  if (!(c.total > 0.0) || c.momentum.size() != g.n_x) return false;
  double s = 0.0;
  for (double p : c.momentum) s += std::abs(p);
  return s < g.p_max() * c.total;
}

struct Multipliers {
  double alpha = 0.0;
  double beta = 0.0;
};

/// alpha = ln2/(8 pi G R), beta = ln2/(pi ħ).
inline Multipliers determine_multipliers(double G_N, double R_ads, double hbar = kHbar) {
  detail::require(G_N > 0.0 && R_ads > 0.0 && hbar > 0.0, "G_N, R_ads and ħ must be positive");
  return {kLn2 / (8.0 * kPi * G_N * R_ads), kLn2 / (kPi * hbar)};
}

/// Stirling form N ln N - sum n ln n with 0 ln 0 = 0.
inline double log_microstates(std::span<const double> occupancy) {
  double total = 0.0;
  double sum = 0.0;
  for (double n : occupancy) {
    detail::require(n >= 0.0, "occupancy must be non-negative");
    total += n;
    if (n > 0.0) sum += n * std::log(n);
  }
  return total > 0.0 ? total * std::log(total) - sum : 0.0;
}

inline double log_microstates(const OccupancyField& f) { return log_microstates(f.values); }

/// ln of the multinomial N! / prod n!.
inline double log_microstates_exact(std::span<const std::uint64_t> counts) {
  std::uint64_t total = 0;
  double sum = 0.0;
  for (std::uint64_t n : counts) {
    total += n;
    sum += std::lgamma(static_cast<double>(n) + 1.0);
  }
  return std::lgamma(static_cast<double>(total) + 1.0) - sum;
}

/// n = exp(-alpha - beta p v_x(x)).
inline OccupancyField closed_form_occupancy(const MuSpaceGrid& g, const Multipliers& m, std::span<const double> v_x) {
  detail::require(std::isfinite(m.alpha) && std::isfinite(m.beta), "multipliers must be finite");
  detail::require(v_x.size() == g.n_x, "one velocity per site required");
  OccupancyField f{g.n_x, g.n_p(), std::vector<double>(g.cells())};
  for (std::size_t x = 0; x < g.n_x; ++x)
    for (std::size_t j = 0; j < g.n_p(); ++j) {
      const double exponent = -m.alpha - m.beta * g.momenta[j] * v_x[x];
      if (exponent > std::log(std::numeric_limits<double>::max()))
        throw DomainError("closed-form occupancy overflows; multipliers out of range");
      f.at(x, j) = std::exp(exponent);
    }
  return f;
}

/// Closed form with alpha fixed by the total: n = N e^{-beta p v_x} / sum e^{-beta p v_x}.
inline OccupancyField closed_form_occupancy(const MuSpaceGrid& g, double beta, std::span<const double> v_x,
                                            double total) {
  detail::require(total > 0.0, "total occupancy must be positive");
  detail::require(v_x.size() == g.n_x, "one velocity per site required");
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < g.n_x; ++x)
    for (double p : g.momenta) shift = std::max(shift, -beta * p * v_x[x]);
  double z = 0.0;
  for (std::size_t x = 0; x < g.n_x; ++x)
    for (double p : g.momenta) z += std::exp(-beta * p * v_x[x] - shift);
  return closed_form_occupancy(g, {shift + std::log(z) - std::log(total), beta}, v_x);
}

struct SolverOptions {
  double tolerance = 1e-10;  // on constraint residuals relative to N
  int max_iterations = 200;
};

struct MaxEntSolution {
  OccupancyField occupancy;
  double alpha = 0.0;
  std::vector<double> lambda;  // beta * v_x per site
  int iterations = 0;
  double residual = 0.0;

  std::vector<double> velocities(double beta) const {
    std::vector<double> v(lambda.size());
    for (std::size_t x = 0; x < v.size(); ++x) v[x] = lambda[x] / beta;
    return v;
  }
};

class InfeasibleConstraints : public DomainError {
 public:
  InfeasibleConstraints() : DomainError("constraints infeasible: need N > 0 and sum |P(x)| < p_max N") {}
};

namespace detail_solver {

struct DualState {
  double value = 0.0;
  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  OccupancyField occupancy;
};

// Dual g(alpha, lambda) = sum n + alpha N + sum_x lambda_x P_x, convex, minimized at the optimum.
inline DualState evaluate(const MuSpaceGrid& g, const ConstraintSet& c, const Eigen::VectorXd& theta) {
  const auto nx = static_cast<Eigen::Index>(g.n_x);
  DualState s;
  s.occupancy = {g.n_x, g.n_p(), std::vector<double>(g.cells())};
  s.gradient = Eigen::VectorXd::Zero(nx + 1);
  s.hessian = Eigen::MatrixXd::Zero(nx + 1, nx + 1);
  double sum_n = 0.0;
  for (Eigen::Index x = 0; x < nx; ++x) {
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t j = 0; j < g.n_p(); ++j) {
      const double p = g.momenta[j];
      const double n = std::exp(-theta(0) - theta(x + 1) * p);
      s.occupancy.at(static_cast<std::size_t>(x), j) = n;
      m0 += n;
      m1 += p * n;
      m2 += p * p * n;
    }
    sum_n += m0;
    s.gradient(x + 1) = c.momentum[static_cast<std::size_t>(x)] - m1;
    s.hessian(0, x + 1) = s.hessian(x + 1, 0) = m1;
    s.hessian(x + 1, x + 1) = m2;
    s.value += theta(x + 1) * c.momentum[static_cast<std::size_t>(x)];
  }
  s.gradient(0) = c.total - sum_n;
  s.hessian(0, 0) = sum_n;
  s.value += sum_n + theta(0) * c.total;
  return s;
}

inline double residual(const DualState& s, double total) { return s.gradient.cwiseAbs().maxCoeff() / total; }

}  // namespace detail_solver

/// Damped Newton on the dual in (alpha, lambda_x).
inline MaxEntSolution maxent_solve(const MuSpaceGrid& g, const ConstraintSet& c, const SolverOptions& opt = {}) {
  if (!feasible(g, c)) throw InfeasibleConstraints();
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.n_x) + 1);
  theta(0) = -std::log(c.total / static_cast<double>(g.cells()));

  detail_solver::DualState state = detail_solver::evaluate(g, c, theta);
  int it = 0;
  // A couple of extra steps after the tolerance is met cost nothing with quadratic convergence.
  int polish = 2;
  for (; it < opt.max_iterations; ++it) {
    const double r = detail_solver::residual(state, c.total);
    if (r <= opt.tolerance && polish-- <= 0) break;
    const Eigen::VectorXd step = state.hessian.ldlt().solve(-state.gradient);
    const double slope = state.gradient.dot(step);
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k, t *= 0.5) {
      detail_solver::DualState trial = detail_solver::evaluate(g, c, theta + t * step);
      if (std::isfinite(trial.value) && trial.value <= state.value + 1e-4 * t * slope + 1e-15 * std::abs(state.value)) {
        theta += t * step;
        state = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  const double r = detail_solver::residual(state, c.total);
  if (!(r <= opt.tolerance)) throw ConvergenceError("max-ent dual Newton did not converge", r);

  MaxEntSolution out;
  out.occupancy = std::move(state.occupancy);
  out.alpha = theta(0);
  out.lambda.assign(theta.data() + 1, theta.data() + theta.size());
  out.iterations = it;
  out.residual = r;
  return out;
}

/// Probability carried in log space: exp(-alpha Area - beta I) underflows for large wedges.
struct LogProbability {
  double log_value = 0.0;
  double value() const { return std::exp(log_value); }
};

/// p_bulk = exp(-alpha Area - beta I) with the multipliers fixed by G_N, R_ads and ħ.
inline LogProbability equal_apriori_probability(double area, double action, double G_N, double R_ads,
                                                double hbar = kHbar) {
  detail::require(std::isfinite(area) && std::isfinite(action), "area and action must be finite");
  const Multipliers m = determine_multipliers(G_N, R_ads, hbar);
  return {-m.alpha * area - m.beta * action};
}

/// S = -ln p (nats).
inline double entropy_from_probability(const LogProbability& p) { return -p.log_value; }
inline double entropy_bits(const LogProbability& p) { return -p.log_value / kLn2; }

struct ThermoRelation {
  double momentum = 0.0;    // P(x0) at which the derivative is taken
  double derivative = 0.0;  // ds/dP by central differences
  double expected = 0.0;    // beta v_x
  double curvature = 0.0;   // second difference, <= 0 for a concave s(P)
  double residual = 0.0;    // |ds/dP - beta v_x|
};

/// Uniform site momentum produced by lambda = beta v_x, for N spread over the grid.
inline ConstraintSet constraints_for_velocity(const MuSpaceGrid& g, double beta, double v_x, double total) {
  double z = 0.0, m1 = 0.0;
  for (double p : g.momenta) {
    const double w = std::exp(-beta * v_x * p);
    z += w;
    m1 += p * w;
  }
  const double site_total = total / static_cast<double>(g.n_x);
  return {total, std::vector<double>(g.n_x, site_total * m1 / z)};
}

/// Differentiates the maximal ln W with respect to P at site 0 and compares with the multiplier beta v_x.
/// The step defaults to 1e-3 p_max.
inline ThermoRelation thermo_relation_check(const MuSpaceGrid& g, double v_x, double beta, double total = 1.0,
                                            double step = 0.0) {
  if (step <= 0.0) step = 1e-3 * g.p_max();
  const ConstraintSet base = constraints_for_velocity(g, beta, v_x, total);
  auto entropy_at = [&](double delta) {
    ConstraintSet c = base;
    c.momentum[0] += delta;
    return log_microstates(maxent_solve(g, c).occupancy);
  };
  const double s_plus = entropy_at(step);
  const double s_mid = entropy_at(0.0);
  const double s_minus = entropy_at(-step);
  ThermoRelation out;
  out.momentum = base.momentum[0];
  out.derivative = (s_plus - s_minus) / (2.0 * step);
  out.expected = beta * v_x;
  out.curvature = (s_plus - 2.0 * s_mid + s_minus) / (step * step);
  out.residual = std::abs(out.derivative - out.expected);
  return out;
}

}  // namespace holoshannon::maxent
