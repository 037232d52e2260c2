#pragma once

// Boundary perfect fluid (p = eps) dual to a boosted BTZ black hole: bulk
// momentum density, shift vector, abbreviated action over the wedge slice,
// Margolus-Levitin time and the H = C_A + I_A/(pi ħ) comparison.

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "holoshannon/ads_geometry.hpp"
#include "holoshannon/core.hpp"

namespace holoshannon::hydro {

/// eps_kin = kinetic_factor * rho * u^2. The default 1/2 makes
/// rho u^2/(pi ħ) = 4 eps_kin/h an identity.
inline constexpr double kDefaultKineticFactor = 0.5;

struct FluidState {
  double u = 0.0;
  double gamma = 1.0;
  double eps_energy = 0.0;
  double pressure = 0.0;
  double rho = 0.0;  // eps / gamma^2
  double eps_kin = 0.0;
  double kinetic_factor = kDefaultKineticFactor;
};

inline FluidState make_fluid(double u, double eps_energy, double kinetic_factor = kDefaultKineticFactor) {
  detail::require(eps_energy >= 0.0 && std::isfinite(eps_energy), "energy density must be non-negative");
  detail::require(kinetic_factor > 0.0 && kinetic_factor <= 1.0, "kinetic factor must lie in (0, 1]");
  FluidState f;
  f.u = u;
  f.gamma = ads::lorentz_gamma(u);
  f.eps_energy = eps_energy;
  f.pressure = eps_energy;
  f.rho = eps_energy / (f.gamma * f.gamma);
  f.eps_kin = kinetic_factor * f.rho * u * u;
  f.kinetic_factor = kinetic_factor;
  detail::require(f.eps_kin <= f.eps_energy, "kinetic energy exceeds total energy density");
  return f;
}

/// Fluid whose kinetic energy density is prescribed: rho = eps_kin / (factor u^2).
inline FluidState fluid_from_kinetic(double u, double eps_kin, double kinetic_factor = kDefaultKineticFactor) {
  detail::require(u != 0.0, "a prescribed kinetic energy needs a non-zero velocity");
  detail::require(eps_kin > 0.0, "kinetic energy density must be positive");
  const double gamma = ads::lorentz_gamma(u);
  FluidState f = make_fluid(u, eps_kin / (kinetic_factor * u * u) * gamma * gamma, kinetic_factor);
  f.eps_kin = eps_kin;
  return f;
}

/// Fluid dual to horizon radius r+: eps = r+^2 gamma^2, so rho = r+^2.
inline FluidState fluid_for_horizon(double r_plus, double u, double kinetic_factor = kDefaultKineticFactor) {
  detail::require(r_plus > 0.0, "horizon radius must be positive");
  const double gamma = ads::lorentz_gamma(u);
  return make_fluid(u, r_plus * r_plus * gamma * gamma, kinetic_factor);
}

/// 8 pi G p^x from each of its three expressions; they coincide when r+^2 = rho.
struct MomentumDensityForms {
  double from_horizon = 0.0;  // -r+^2 gamma u
  double from_energy = 0.0;   // -eps u / gamma
  double from_mass = 0.0;     // -rho gamma u
};

inline MomentumDensityForms momentum_density_forms(const FluidState& f, double r_plus) {
  return {-r_plus * r_plus * f.gamma * f.u, -f.eps_energy * f.u / f.gamma, -f.rho * f.gamma * f.u};
}

/// Horizontal bulk momentum density p^x = -rho gamma u / (8 pi G).
inline double momentum_density(const FluidState& f, double G_N) {
  detail::require(G_N > 0.0, "G_N must be positive");
  return -f.rho * f.gamma * f.u / (8.0 * kPi * G_N);
}

inline double shift_vector(const FluidState& f) { return -f.u; }

/// Margolus-Levitin time h / (4 eps_kin).
inline double margolus_levitin(double eps_kin, double hbar = kHbar) {
  if (!(eps_kin > 0.0)) throw DomainError("Margolus-Levitin time needs a positive kinetic energy");
  return 2.0 * kPi * hbar / (4.0 * eps_kin);
}

/// t_perp, or empty when the fluid carries no momentum (1/t_perp = 0 exactly).
using OrthogonalizationTime = std::optional<double>;

inline OrthogonalizationTime orthogonalization_time(const FluidState& f, double hbar = kHbar) {
  if (f.eps_kin == 0.0) return std::nullopt;
  return margolus_levitin(f.eps_kin, hbar);
}

inline double inverse_time(const OrthogonalizationTime& t) { return t ? 1.0 / *t : 0.0; }

enum class Regime { NonRelativistic, Marginal, Relativistic };

inline Regime classify_regime(double u) {
  const double s = std::abs(u);
  if (s <= 0.1) return Regime::NonRelativistic;
  if (s < 0.5) return Regime::Marginal;
  return Regime::Relativistic;
}

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::NonRelativistic: return "non-relativistic";
    case Regime::Marginal: return "marginal";
    case Regime::Relativistic: return "relativistic";
  }
  return "unknown";
}

class RegimeError : public DomainError {
 public:
  explicit RegimeError(double u)
      : DomainError("fluid speed |u| = " + std::to_string(std::abs(u)) +
                    " is outside the non-relativistic regime of the abbreviated action") {}
};

struct ActionResult {
  double value = 0.0;  // I_A
  Regime regime = Regime::NonRelativistic;
  bool small_cutoff = true;  // eps << l (l/eps >= 16)
};

/// I_A = [Area/(8 pi G)] rho u^2, the wedge integral of the constant p^x v_x
/// at leading order in u. Throws RegimeError for |u| >= 0.5 unless allowed.
inline ActionResult abbreviated_action(const ads::WedgeGeometry& g, const FluidState& f,
                                       bool allow_relativistic = false) {
  ActionResult out;
  out.regime = classify_regime(f.u);
  if (out.regime == Regime::Relativistic && !allow_relativistic) throw RegimeError(f.u);
  out.small_cutoff = g.ratio() >= 16.0;
  out.value = ads::program_length_spatial(g) * f.rho * f.u * f.u;
  return out;
}

/// The three evaluations of I_A/(pi ħ).
struct ActionRoutes {
  double from_area = 0.0;     // [Area/(8 pi G)] rho u^2 / (pi ħ)
  double from_kinetic = 0.0;  // [(l/eps)/(8 pi G)] 4 eps_kin / h
  double from_central_charge = 0.0;  // [c/(12 pi)] (l/eps) / t_perp
};

inline ActionRoutes action_routes(const ads::WedgeGeometry& g, const FluidState& f, double hbar = kHbar) {
  const double h = 2.0 * kPi * hbar;
  const double inv_t = inverse_time(orthogonalization_time(f, hbar));
  ActionRoutes r;
  r.from_area = ads::program_length_spatial(g) * f.rho * f.u * f.u / (kPi * hbar);
  r.from_kinetic = g.ratio() / (8.0 * kPi * g.G_N) * 4.0 * f.eps_kin / h;
  r.from_central_charge = ads::central_charge(g.R_ads, g.G_N) / (12.0 * kPi) * g.ratio() * inv_t;
  return r;
}

/// ell_A = ell_s (1 + 1/t_perp).
inline double program_length_total(double ell_spatial, const OrthogonalizationTime& t_perp) {
  return ell_spatial * (1.0 + inverse_time(t_perp));
}

struct ConjectureReport {
  double H_bits = 0.0;
  double C_A = 0.0;
  double I_over_pihbar = 0.0;
  double residual = 0.0;  // H - (C_A + I/(pi ħ))

  double predicted() const { return C_A + I_over_pihbar; }
  double relative_residual() const { return H_bits != 0.0 ? std::abs(residual) / H_bits : std::abs(residual); }
};

inline ConjectureReport conjecture_check(double H_bits, double C_A, double I_A, double hbar = kHbar) {
  ConjectureReport r;
  r.H_bits = H_bits;
  r.C_A = C_A;
  r.I_over_pihbar = I_A / (kPi * hbar);
  r.residual = H_bits - (C_A + r.I_over_pihbar);
  return r;
}

}  // namespace holoshannon::hydro
