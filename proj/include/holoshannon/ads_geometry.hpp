#pragma once

// Static AdS3 in Poincaré coordinates (w, z): the half-circle geodesic
// anchored on a boundary interval [0, l], its regulated length and the area
// of the enclosed wedge slice, plus the Lorentz-boosted planar BTZ metric.

#include <algorithm>
#include <array>
#include <cmath>

#include "holoshannon/core.hpp"

namespace holoshannon::ads {

/// Boundary interval [0, l] with UV cutoff eps (z >= eps), curvature radius and Newton constant.
struct WedgeGeometry {
  double l = 0.0;
  double eps = 0.0;
  double R_ads = 1.0;
  double G_N = 1.0;

  double ratio() const { return l / eps; }
};

inline WedgeGeometry make_wedge(double l, double eps, double R_ads = 1.0, double G_N = 1.0) {
  detail::require(l > 0.0 && eps > 0.0, "interval length and cutoff must be positive");
  detail::require(R_ads > 0.0 && G_N > 0.0, "R_ads and G_N must be positive");
  return {l, eps, R_ads, G_N};
}

/// The RT geodesic for [0, l]: the half-circle (w - l/2)^2 + z^2 = (l/2)^2.
struct GeodesicArc {
  double center = 0.0;
  double radius = 0.0;

  double z_at(double w) const {
    const double d = w - center;
    return std::sqrt(std::max(0.0, radius * radius - d * d));
  }
};

inline GeodesicArc geodesic_arc(const WedgeGeometry& g) { return {g.l / 2.0, g.l / 2.0}; }

/// Brown-Henneaux central charge c = 3R/(2G).
inline double central_charge(double R_ads, double G_N) { return 3.0 * R_ads / (2.0 * G_N); }

/// Regulated length of the half-circle above z = eps: 2R ln((a + sqrt(a^2 - eps^2))/eps).
inline double geodesic_length(const WedgeGeometry& g) {
  if (!(g.l > 2.0 * g.eps)) throw DomainError("geodesic_length requires l > 2 eps");
  const double a = g.l / 2.0;
  return 2.0 * g.R_ads * std::log((a + std::sqrt(a * a - g.eps * g.eps)) / g.eps);
}

/// Ryu-Takayanagi: S = Length / (4 G_N).
inline double rt_entropy(double length, double G_N) {
  detail::require(length >= 0.0, "geodesic length must be non-negative");
  detail::require(G_N > 0.0, "G_N must be positive");
  return length / (4.0 * G_N);
}

/// Cardy-form entropy (c/3) ln(l/eps), the asymptotic value of rt_entropy(geodesic_length).
inline double cardy_entropy(const WedgeGeometry& g) {
  return central_charge(g.R_ads, g.G_N) / 3.0 * std::log(g.ratio());
}

/// Integral of dw dz / z^2 over {z >= eps} inside the half-circle:
/// (2/eps) sqrt(a^2 - eps^2) - 2 arcsin(sqrt(a^2 - eps^2)/a), zero when a <= eps.
inline double wedge_area(const WedgeGeometry& g) {
  detail::require(g.eps > 0.0, "cutoff must be positive");
  const double a = g.l / 2.0;
  if (a <= g.eps) return 0.0;
  const double chord = std::sqrt(a * a - g.eps * g.eps);
  return 2.0 * chord / g.eps - 2.0 * std::asin(chord / a);
}

/// Area law l/eps - pi that wedge_area approaches as eps/l -> 0.
inline double wedge_area_asymptotic(const WedgeGeometry& g) { return g.ratio() - kPi; }

/// C_A = Area / (8 pi G_N R_ads).
inline double holographic_complexity(const WedgeGeometry& g) {
  return wedge_area(g) / (8.0 * kPi * g.G_N * g.R_ads);
}

/// Spatial program length Area / (8 pi G_N).
inline double program_length_spatial(const WedgeGeometry& g) { return wedge_area(g) / (8.0 * kPi * g.G_N); }

// ---------------------------------------------------------------------------
// Boosted planar BTZ

/// Two-velocity of a uniform boundary fluid with speed u, mostly-plus signature.
struct TwoVelocity {
  double gamma = 1.0;
  std::array<double, 2> upper{};  // u^mu = (gamma, gamma u)
  std::array<double, 2> lower{};  // u_mu = eta u = (-gamma, gamma u)

  double norm() const { return upper[0] * lower[0] + upper[1] * lower[1]; }
};

inline double lorentz_gamma(double u) {
  if (!(std::abs(u) < 1.0)) throw DomainError("fluid speed must satisfy |u| < 1");
  return 1.0 / std::sqrt(1.0 - u * u);
}

inline TwoVelocity two_velocity(double u) {
  const double gamma = lorentz_gamma(u);
  return {gamma, {gamma, gamma * u}, {-gamma, gamma * u}};
}

struct BoostedMetric {
  double r_plus = 1.0;
  double u = 0.0;
};

inline BoostedMetric make_boosted_metric(double r_plus, double u) {
  detail::require(r_plus > 0.0, "horizon radius must be positive");
  lorentz_gamma(u);
  return {r_plus, u};
}

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

inline constexpr Matrix2 kMinkowski{{{-1.0, 0.0}, {0.0, 1.0}}};

/// Components in (r, t, x) of ds^2 = -2 u_mu dx^mu dr + r^2 [eta + (r+^2/r^2) u u]_{mu nu} dx^mu dx^nu.
inline Matrix3 btz_metric_components(double r, const BoostedMetric& m) {
  detail::require(r > 0.0, "radial coordinate must be positive");
  const TwoVelocity v = two_velocity(m.u);
  Matrix3 g{};
  g[0][0] = 0.0;
  for (int mu = 0; mu < 2; ++mu) {
    g[0][mu + 1] = -v.lower[mu];
    g[mu + 1][0] = -v.lower[mu];
    for (int nu = 0; nu < 2; ++nu)
      g[mu + 1][nu + 1] = r * r * kMinkowski[mu][nu] + m.r_plus * m.r_plus * v.lower[mu] * v.lower[nu];
  }
  return g;
}

/// delta g_{mu nu} = gamma_{mu nu} - r^2 eta_{mu nu} on the (t, x) block; equals r+^2 u_mu u_nu for every r.
inline Matrix2 metric_discrepancy(double r, const BoostedMetric& m) {
  const Matrix3 g = btz_metric_components(r, m);
  Matrix2 d{};
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu) d[mu][nu] = g[mu + 1][nu + 1] - r * r * kMinkowski[mu][nu];
  return d;
}

/// delta g^{mu nu}, indices raised with eta.
inline Matrix2 raise_with_eta(const Matrix2& lower) {
  Matrix2 up{};
  for (int mu = 0; mu < 2; ++mu)
    for (int nu = 0; nu < 2; ++nu) up[mu][nu] = kMinkowski[mu][mu] * kMinkowski[nu][nu] * lower[mu][nu];
  return up;
}

}  // namespace holoshannon::ads
