#pragma once

// Layer bookkeeping for a binary (or k-ary) MERA over a boundary interval and
// exact counting of classicalized microstates. Each coarse-graining step
// divides the microstate count by 2^N per site of the deeper layer, so
// (1/N) log2 W^(0) is the sum of site counts below the boundary.

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "holoshannon/ads_geometry.hpp"
#include "holoshannon/core.hpp"

namespace holoshannon::mera {

using BigInt = boost::multiprecision::cpp_int;

struct MeraNetwork {
  std::vector<std::uint64_t> layers;  // l_0 (boundary) .. l_M, or .. l_{m_h} when thermal
  unsigned arity = 2;
  std::optional<std::size_t> horizon_layer;  // m_h when two truncated towers are pasted
  std::vector<std::uint64_t> mirror;         // pasted tower l_{m_h} .. l_0

  std::size_t depth() const { return layers.size() - 1; }
  bool thermal() const { return horizon_layer.has_value(); }
  std::uint64_t boundary_sites() const { return layers.front(); }

  /// U_m = -m, so that the layer radius is r_m = r_inf 2^{U_m}.
  static int depth_parameter(std::size_t m) { return -static_cast<int>(m); }
};

inline std::vector<std::uint64_t> coarse_grain_layers(std::uint64_t l0, unsigned arity) {
  std::vector<std::uint64_t> layers{l0};
  while (layers.back() > 1) layers.push_back((layers.back() + arity - 1) / arity);
  return layers;
}

/// Ground-state network down to a single site, or, with m_h, the tower
/// truncated at layer m_h pasted to its mirror image.
inline MeraNetwork build_network(std::uint64_t l0, unsigned arity = 2,
                                 std::optional<std::size_t> horizon_layer = std::nullopt) {
  if (l0 < 1) throw DomainError("boundary layer needs at least one site");
  detail::require(arity >= 2, "coarse-graining arity must be at least 2");
  MeraNetwork net;
  net.arity = arity;
  net.layers = coarse_grain_layers(l0, arity);
  if (horizon_layer) {
    detail::require(*horizon_layer <= net.depth(), "horizon layer lies below the deepest layer");
    net.layers.resize(*horizon_layer + 1);
    net.horizon_layer = horizon_layer;
    net.mirror.assign(net.layers.rbegin(), net.layers.rend());
  }
  return net;
}

/// log2(W^(m)/W^(m+1)) / N = l_{m+1} for each step of each tower, kept as integers.
struct CountLedger {
  std::vector<std::uint64_t> step_exponents;         // first tower, m = 0 .. M-1
  std::vector<std::uint64_t> mirror_step_exponents;  // pasted tower, boundary side first
  BigInt total;                                      // (1/N) log2 W^(0)
};

inline CountLedger count_ledger(const MeraNetwork& net) {
  CountLedger ledger;
  for (std::size_t m = 1; m < net.layers.size(); ++m) {
    ledger.step_exponents.push_back(net.layers[m]);
    ledger.total += net.layers[m];
  }
  // The mirror tower is stored horizon-first; its boundary is the last entry.
  for (std::size_t i = net.mirror.size(); i-- > 1;) {
    ledger.mirror_step_exponents.push_back(net.mirror[i - 1]);
    ledger.total += net.mirror[i - 1];
  }
  return ledger;
}

/// (1/N) log2 W^(0) = sum_{m>=1} l_m (both towers when pasted).
inline BigInt shannon_from_counting(const MeraNetwork& net) { return count_ledger(net).total; }

enum class ReplicaRounding { Floor, Round };

struct ReplicaCount {
  std::uint64_t replicas = 0;  // k, additional MERA copies
  double ratio = 0.0;          // R_ads / t_perp
  double fractional = 0.0;     // ratio - k
};

/// Relative distance to the nearest integer below which R/t_perp counts as integral.
inline constexpr double kReplicaSnap = 1e-9;

/// k = floor(R_ads / t_perp); an absent t_perp (no momentum) gives k = 0.
inline ReplicaCount momentum_replicas(double R_ads, std::optional<double> t_perp,
                                      ReplicaRounding mode = ReplicaRounding::Floor) {
  detail::require(R_ads > 0.0, "R_ads must be positive");
  ReplicaCount out;
  if (!t_perp) return out;
  detail::require(*t_perp > 0.0, "t_perp must be positive");
  out.ratio = R_ads / *t_perp;
  const double nearest = std::round(out.ratio);
  double k = mode == ReplicaRounding::Floor ? std::floor(out.ratio) : nearest;
  if (std::abs(out.ratio - nearest) <= kReplicaSnap * std::max(1.0, nearest)) k = nearest;
  out.replicas = static_cast<std::uint64_t>(k);
  out.fractional = out.ratio - k;
  return out;
}

/// (1/N) log2 W^(bdy) with W^(bdy) = W^(0) (W^(0))^k, i.e. (1 + k) sum l_m.
inline BigInt boundary_microstates(const MeraNetwork& net, std::uint64_t replicas) {
  return BigInt(replicas + 1) * shannon_from_counting(net);
}

/// Layer radius r_m = r_inf 2^{-m}.
inline double layer_radius(std::size_t m, double r_inf) {
  detail::require(r_inf > 0.0, "UV radius must be positive");
  return r_inf * std::exp2(MeraNetwork::depth_parameter(m));
}

/// 1/T_bulk = -R_ads U / (kappa ħ), with U = log2(r_m / r_inf).
inline double bulk_temperature(std::size_t m, double kappa, double r_inf = 1.0, double R_ads = 1.0,
                               double hbar = kHbar) {
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  const double U = std::log2(layer_radius(m, r_inf) / r_inf);
  return -R_ads * U / (kappa * hbar) + 0.0;  // + 0.0 turns -0 into 0
}

inline constexpr double kAsymptoticRatio = 16.0;

struct ContinuumComparison {
  BigInt discrete_area;  // sum l_m
  double wedge_area = 0.0;
  std::optional<double> deviation;  // |sum - area| / area; empty when the area vanishes
  bool asymptotic = true;           // l/eps >= 16
};

/// Discretized area of the ground-state network against the continuum wedge area.
inline ContinuumComparison continuum_comparison(const MeraNetwork& net, const ads::WedgeGeometry& g) {
  const double expected = std::round(g.ratio());
  detail::require(static_cast<double>(net.boundary_sites()) == expected,
                  "network boundary sites must equal round(l/eps)");
  ContinuumComparison out;
  out.discrete_area = shannon_from_counting(net);
  out.wedge_area = ads::wedge_area(g);
  if (out.wedge_area > 0.0)
    out.deviation = std::abs(out.discrete_area.convert_to<double>() - out.wedge_area) / out.wedge_area;
  out.asymptotic = g.ratio() >= kAsymptoticRatio;
  return out;
}

}  // namespace holoshannon::mera
