#pragma once

// Canonical-ensemble identities for a Hamiltonian coarse-grained onto the
// redefined phase-space cells, and the bulk actions they feed.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "holoshannon/core.hpp"

namespace holoshannon::thermo {

inline constexpr double kStochasticTolerance = 1e-12;

struct RedefinedHamiltonian {
  std::vector<double> energies;  // E_n
  Eigen::MatrixXd overlap;       // p_{n,k}, rows sum to 1
  std::vector<double> coarse;    // <E>_k = sum_n E_n p_{n,k}

  std::size_t levels() const { return coarse.size(); }

  /// Columns also sum to 1; then every <E>_k is a convex combination of the E_n.
  bool doubly_stochastic(double tol = 1e-9) const {
    for (Eigen::Index k = 0; k < overlap.cols(); ++k)
      if (std::abs(overlap.col(k).sum() - 1.0) > tol) return false;
    return true;
  }
};

inline RedefinedHamiltonian coarse_grain_hamiltonian(std::span<const double> energies, const Eigen::MatrixXd& p) {
  detail::require(!energies.empty(), "spectrum must not be empty");
  detail::require(static_cast<std::size_t>(p.rows()) == energies.size(), "overlap matrix needs one row per level");
  detail::require(p.cols() >= 1, "overlap matrix needs at least one cell");
  for (Eigen::Index n = 0; n < p.rows(); ++n) {
    detail::require((p.row(n).array() >= 0.0).all(), "overlap probabilities must be non-negative");
    if (std::abs(p.row(n).sum() - 1.0) > kStochasticTolerance)
      throw DomainError("overlap matrix row does not sum to 1");
  }
  RedefinedHamiltonian h;
  h.energies.assign(energies.begin(), energies.end());
  h.overlap = p;
  const Eigen::Map<const Eigen::VectorXd> e(energies.data(), static_cast<Eigen::Index>(energies.size()));
  const Eigen::VectorXd coarse = p.transpose() * e;
  h.coarse.assign(coarse.data(), coarse.data() + coarse.size());
  return h;
}

/// Energies shifted for a frame moving with the reservoir: <E>_k - v <P>_k + K.
inline RedefinedHamiltonian boosted(RedefinedHamiltonian h, std::span<const double> momenta, double velocity,
                                    double kinetic_constant) {
  detail::require(momenta.size() == h.coarse.size(), "one momentum per cell required");
  for (std::size_t k = 0; k < h.coarse.size(); ++k) h.coarse[k] += -velocity * momenta[k] + kinetic_constant;
  return h;
}

struct CanonicalState {
  double beta = 0.0;
  std::vector<double> weights;  // e^{-beta <E>_k} / Z
  double log_partition = 0.0;   // ln Z
};

inline CanonicalState canonical_state(double beta, const RedefinedHamiltonian& h) {
  detail::require(beta >= 0.0 && std::isfinite(beta), "inverse temperature must be non-negative");
  CanonicalState s;
  s.beta = beta;
  const double e_min = *std::min_element(h.coarse.begin(), h.coarse.end());
  double z = 0.0;
  s.weights.resize(h.coarse.size());
  for (std::size_t k = 0; k < h.coarse.size(); ++k) {
    s.weights[k] = std::exp(-beta * (h.coarse[k] - e_min));
    z += s.weights[k];
  }
  for (double& w : s.weights) w /= z;
  s.log_partition = std::log(z) - beta * e_min;
  return s;
}

/// F = -(1/beta) ln Z; undefined (empty) at beta = 0.
inline std::optional<double> helmholtz(double beta, const RedefinedHamiltonian& h) {
  const CanonicalState s = canonical_state(beta, h);
  if (beta == 0.0) return std::nullopt;
  return -s.log_partition / beta;
}

struct EntropyIdentity {
  double entropy_nats = 0.0;  // -sum w ln w of the Gibbs weights
  double mean_energy = 0.0;
  std::optional<double> free_energy;
  double thermodynamic = 0.0;  // beta (E - F) = beta E + ln Z
  double residual = 0.0;
};

/// Compares the Shannon entropy (nats) of the Gibbs weights with beta (E - F).
inline EntropyIdentity entropy_identity_check(double beta, const RedefinedHamiltonian& h) {
  const CanonicalState s = canonical_state(beta, h);
  EntropyIdentity out;
  for (std::size_t k = 0; k < s.weights.size(); ++k) {
    const double w = s.weights[k];
    if (w > 0.0) out.entropy_nats -= w * std::log(w);
    out.mean_energy += w * h.coarse[k];
  }
  out.free_energy = helmholtz(beta, h);
  out.thermodynamic = beta * out.mean_energy + s.log_partition;
  out.residual = std::abs(out.entropy_nats - out.thermodynamic);
  return out;
}

/// I_AdS = ħ beta F.
inline double gkpw_action(double beta, double free_energy, double hbar = kHbar) { return hbar * beta * free_energy; }

inline constexpr double kBitInformation = kLn2;  // b

/// I_bulk = -(b/pi) W_TN - ħ b A_TN.
inline double bulk_tn_action(double abbreviated_action, double discretized_area, double hbar = kHbar) {
  return -(kBitInformation / kPi) * abbreviated_action - hbar * kBitInformation * discretized_area;
}

/// Membrane tension ħ b / (8 pi G R^2).
inline double membrane_tension(double G_N, double R_ads, double hbar = kHbar) {
  detail::require(G_N > 0.0 && R_ads > 0.0, "G_N and R_ads must be positive");
  return hbar * kBitInformation / (8.0 * kPi * G_N * R_ads * R_ads);
}

}  // namespace holoshannon::thermo
