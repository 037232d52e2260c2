#pragma once

// Independent reference computations. Nothing here calls the closed forms or
// solvers it is used to check.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <Eigen/Dense>

#include "holoshannon/ads_geometry.hpp"
#include "holoshannon/maxent_solver.hpp"
#include "holoshannon/mera_counting.hpp"
#include "holoshannon/vonneumann_lattice.hpp"

namespace holoshannon::verify {

// ---------------------------------------------------------------------------
// Packets

/// <g_1|g_2> for normalized exp(-pi (x-x_j)^2/a^2) e^{i k_j x}:
/// exp(-pi d^2/(2a^2) - dk^2 a^2/(8 pi)) e^{i dk xc}.
inline std::complex<double> packet_overlap(const lattice::PlanckLattice& lat, lattice::CellIndex c1,
                                           lattice::CellIndex c2) {
  const double a = lat.eps_q;
  const double x1 = lat.center_q(c1), x2 = lat.center_q(c2);
  const double dk = lat.center_p(c2) - lat.center_p(c1);
  const double d = x1 - x2;
  const double xc = 0.5 * (x1 + x2);
  return std::exp(-kPi * d * d / (2.0 * a * a) - dk * dk * a * a / (8.0 * kPi)) * std::polar(1.0, dk * xc);
}

inline Eigen::MatrixXcd analytic_gram(const lattice::PlanckLattice& lat) {
  const auto n = static_cast<Eigen::Index>(lat.cell_count());
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = packet_overlap(lat, lat.cell(static_cast<std::size_t>(i)), lat.cell(static_cast<std::size_t>(j)));
  return g;
}

/// Composite Simpson <f|g> with f, g evaluated pointwise (odd point count enforced).
inline std::complex<double> simpson_overlap(const std::function<std::complex<double>(double)>& f,
                                            const std::function<std::complex<double>(double)>& g, double lo,
                                            double hi, std::size_t intervals) {
  if (intervals % 2 == 1) ++intervals;
  const double h = (hi - lo) / static_cast<double>(intervals);
  std::complex<double> s = 0.0;
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double x = lo + h * static_cast<double>(i);
    const double w = (i == 0 || i == intervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    s += w * std::conj(f(x)) * g(x);
  }
  return s * h / 3.0;
}

// ---------------------------------------------------------------------------
// Geometry

/// Hyperbolic arclength R sqrt(w'^2 + z'^2)/z of the circle w = c + a cos t,
/// z = a sin t, integrated numerically over z >= eps.
inline double geodesic_length_quadrature(const ads::WedgeGeometry& g) {
  const double a = g.l / 2.0;
  const double t0 = std::asin(g.eps / a);
  auto integrand = [&](double t) {
    const double dw = -a * std::sin(t);
    const double dz = a * std::cos(t);
    return g.R_ads * std::sqrt(dw * dw + dz * dz) / (a * std::sin(t));
  };
  boost::math::quadrature::tanh_sinh<double> integrator;
  return integrator.integrate(integrand, t0, kPi - t0);
}

/// Double integral of 1/z^2 over the region: Gauss-Legendre across each chord in w, adaptive
/// Gauss-Kronrod in theta with z = a sin(theta), which removes the square-root endpoint at z = a.
inline double wedge_area_quadrature(const ads::WedgeGeometry& g) {
  const double a = g.l / 2.0;
  const double c = g.l / 2.0;
  if (a <= g.eps) return 0.0;
  auto row = [&](double z) {
    const double half = std::sqrt(std::max(0.0, a * a - z * z));
    return boost::math::quadrature::gauss<double, 20>::integrate([z](double) { return 1.0 / (z * z); }, c - half,
                                                                  c + half);
  };
  auto integrand = [&](double theta) { return row(a * std::sin(theta)) * a * std::cos(theta); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, std::asin(g.eps / a), kPi / 2.0, 20,
                                                                        1e-13);
}

// ---------------------------------------------------------------------------
// MERA microstates

using BigInt = boost::multiprecision::cpp_int;

/// W^(0) = W^(M) prod_m W^(m)/W^(m+1) as an explicit integer for an ensemble of N members.
inline BigInt microstate_count(const std::vector<std::uint64_t>& layers, unsigned ensemble) {
  BigInt w = 1;  // W^(M)
  for (std::size_t m = 0; m + 1 < layers.size(); ++m) {
    BigInt ratio = 1;
    ratio <<= static_cast<unsigned>(ensemble * layers[m + 1]);
    w *= ratio;
  }
  return w;
}

/// log2 of an exact power of two; -1 if w is not one.
inline long long exact_log2(const BigInt& w) {
  if (w <= 0) return -1;
  const auto bits = boost::multiprecision::msb(w);
  BigInt check = 1;
  check <<= bits;
  return check == w ? static_cast<long long>(bits) : -1;
}

/// Halving recursion written out independently of the library.
inline std::vector<std::uint64_t> halving_layers(std::uint64_t l0) {
  std::vector<std::uint64_t> out{l0};
  while (out.back() != 1) out.push_back(out.back() / 2 + out.back() % 2);
  return out;
}

// ---------------------------------------------------------------------------
// Max-ent

struct BisectionSolution {
  double alpha = 0.0;
  std::vector<double> lambda;
};

namespace detail_oracle {

template <class F>
double bisect_decreasing(F f, double lo, double hi) {
  // expand until f(lo) > 0 > f(hi)
  for (int i = 0; i < 200 && f(lo) <= 0.0; ++i) lo = lo * 2.0 - 1.0;
  for (int i = 0; i < 200 && f(hi) >= 0.0; ++i) hi = hi * 2.0 + 1.0;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail_oracle

/// Nested bisection: for a trial alpha each lambda_x solves e^{-alpha} sum p e^{-lambda p} = P_x;
/// alpha then matches the total, which decreases monotonically in alpha.
inline BisectionSolution maxent_bisection(const maxent::MuSpaceGrid& g, const maxent::ConstraintSet& c) {
  auto site_lambda = [&](double alpha, double target) {
    return detail_oracle::bisect_decreasing(
        [&](double lam) {
          double s = 0.0;
          for (double p : g.momenta) s += p * std::exp(-alpha - lam * p);
          return s - target;
        },
        -1.0, 1.0);
  };
  auto total_at = [&](double alpha) {
    double n = 0.0;
    for (std::size_t x = 0; x < g.n_x; ++x) {
      const double lam = site_lambda(alpha, c.momentum[x]);
      for (double p : g.momenta) n += std::exp(-alpha - lam * p);
    }
    return n - c.total;
  };
  BisectionSolution out;
  out.alpha = detail_oracle::bisect_decreasing(total_at, -1.0, 1.0);
  for (std::size_t x = 0; x < g.n_x; ++x) out.lambda.push_back(site_lambda(out.alpha, c.momentum[x]));
  return out;
}

/// Integer occupancy per cell, row-major like OccupancyField.
using Configuration = std::vector<std::uint64_t>;

/// Every way to place `particles` indistinguishable-count units into `cells` cells.
inline std::vector<Configuration> compositions(std::size_t cells, std::uint64_t particles) {
  std::vector<Configuration> out;
  Configuration current(cells, 0);
  std::function<void(std::size_t, std::uint64_t)> place = [&](std::size_t cell, std::uint64_t left) {
    if (cell + 1 == cells) {
      current[cell] = left;
      out.push_back(current);
      return;
    }
    for (std::uint64_t n = 0; n <= left; ++n) {
      current[cell] = n;
      place(cell + 1, left - n);
    }
  };
  place(0, particles);
  return out;
}

struct IntegerInstance {
  std::uint64_t particles = 0;
  std::vector<long long> momentum;      // integer P(x)
  std::vector<Configuration> feasible;  // all configurations meeting the constraints
};

/// All constraint sets reachable with the given particle count on an integer-momentum grid.
inline std::vector<IntegerInstance> integer_instances(const maxent::MuSpaceGrid& g, std::uint64_t particles) {
  std::map<std::vector<long long>, IntegerInstance> grouped;
  for (const Configuration& cfg : compositions(g.cells(), particles)) {
    std::vector<long long> p(g.n_x, 0);
    for (std::size_t x = 0; x < g.n_x; ++x)
      for (std::size_t j = 0; j < g.n_p(); ++j)
        p[x] += static_cast<long long>(cfg[x * g.n_p() + j]) * std::llround(g.momenta[j]);
    auto& inst = grouped[p];
    inst.particles = particles;
    inst.momentum = p;
    inst.feasible.push_back(cfg);
  }
  std::vector<IntegerInstance> out;
  for (auto& [key, inst] : grouped) out.push_back(std::move(inst));
  return out;
}

struct EnumerationVerdict {
  bool matches = false;
  double best_log_w = 0.0;
  std::size_t argmax_count = 0;
  std::size_t nearest_count = 0;
};

/// The feasible configurations nearest (Euclidean) to the continuum optimum must all maximize the exact multinomial.
inline EnumerationVerdict compare_with_enumeration(const IntegerInstance& inst, const maxent::OccupancyField& continuum) {
  EnumerationVerdict v;
  std::vector<double> log_w, dist;
  for (const Configuration& cfg : inst.feasible) {
    log_w.push_back(maxent::log_microstates_exact(cfg));
    double d = 0.0;
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      const double diff = static_cast<double>(cfg[i]) - continuum.values[i];
      d += diff * diff;
    }
    dist.push_back(d);
  }
  v.best_log_w = *std::max_element(log_w.begin(), log_w.end());
  const double nearest = *std::min_element(dist.begin(), dist.end());
  v.matches = true;
  for (std::size_t i = 0; i < log_w.size(); ++i) {
    const bool is_argmax = log_w[i] >= v.best_log_w - 1e-9;
    const bool is_nearest = dist[i] <= nearest + 1e-9;
    v.argmax_count += is_argmax;
    v.nearest_count += is_nearest;
    if (is_nearest && !is_argmax) v.matches = false;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Random inputs

/// p_{n,k} = |U_{n,k}|^2 for a Haar-like random unitary: the overlap matrix of two orthonormal bases.
inline Eigen::MatrixXd random_overlap_matrix(std::size_t levels, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const auto n = static_cast<Eigen::Index>(levels);
  Eigen::MatrixXcd z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = {normal(rng), normal(rng)};
  const Eigen::MatrixXcd q = Eigen::HouseholderQR<Eigen::MatrixXcd>(z).householderQ();
  return q.cwiseAbs2();
}

}  // namespace holoshannon::verify
