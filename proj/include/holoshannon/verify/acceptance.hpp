#pragma once

// Acceptance criteria AC1..AC10. Each criterion yields a verdict plus a JSON
// detail block; wall times are kept out of the detail so two runs with the
// same seed serialize identically.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"

#include "holoshannon/ads_geometry.hpp"
#include "holoshannon/hydro_action.hpp"
#include "holoshannon/maxent_solver.hpp"
#include "holoshannon/mera_counting.hpp"
#include "holoshannon/thermo_identities.hpp"
#include "holoshannon/verify/oracles.hpp"
#include "holoshannon/vonneumann_lattice.hpp"

namespace holoshannon::verify {

using Json = nlohmann::ordered_json;

struct Criterion {
  std::string id;
  std::string title;
  bool passed = true;
  Json detail = Json::object();
  double seconds = 0.0;

  void expect(const std::string& key, double value, double tolerance) {
    detail[key] = {{"value", value}, {"tolerance", tolerance}};
    if (!(value <= tolerance)) passed = false;
  }
  void require(const std::string& key, bool ok) {
    detail[key] = ok;
    if (!ok) passed = false;
  }
};

namespace acceptance {

inline double rel(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline lattice::PacketBasis symmetric_basis() {
  return lattice::build_packet_basis(lattice::build_lattice(std::sqrt(2.0 * kPi), 1, 1));
}

inline Criterion coarse_graining(double budget_s) {
  Criterion c{"AC1", "coarse-graining entropy of equal superpositions"};
  const auto start = std::chrono::steady_clock::now();
  const lattice::PacketBasis basis = symmetric_basis();
  double worst_h = 0.0, worst_s = 0.0, worst_nats = 0.0;
  for (std::size_t K : {1u, 2u, 4u, 8u}) {
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t k = 0; k < K; ++k) a(static_cast<Eigen::Index>(k)) = 1.0 / std::sqrt(static_cast<double>(K));
    const auto psi = lattice::normalized(basis.grid, lattice::state_from_cells(basis, a));
    const auto mix = lattice::classicalize(lattice::expand(psi, basis));
    const double H = lattice::shannon_entropy_bits(mix);
    const double S = lattice::von_neumann_entropy_nats(mix);
    double direct = 0.0;
    for (double p : mix.probabilities) {
      const double q = p / mix.captured_norm;
      if (q > 0.0) direct -= q * std::log(q);
    }
    worst_h = std::max(worst_h, std::abs(H - std::log2(static_cast<double>(K))));
    worst_s = std::max(worst_s, std::abs(S - kLn2 * H));
    worst_nats = std::max(worst_nats, std::abs(S - direct));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.expect("H_minus_log2K", worst_h, 1e-9);
  c.expect("S_minus_ln2H", worst_s, 0.0);
  c.expect("S_minus_direct_nats", worst_nats, 1e-12);
  c.require("runtime_under_10s", seconds < budget_s);
  return c;
}

inline Criterion superselection(std::uint64_t seed) {
  Criterion c{"AC2", "superselection of cell-diagonal observables"};
  const lattice::PacketBasis basis = symmetric_basis();
  const lattice::PlanckLattice& lat = basis.lattice;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-10.0, 10.0);
  std::vector<double> random_values(basis.size());
  for (double& v : random_values) v = uni(rng);

  using Fn = std::function<double(lattice::CellIndex)>;
  const std::vector<std::pair<std::string, Fn>> observables{
      {"coarse_position", [&](lattice::CellIndex k) { return lat.center_q(k); }},
      {"coarse_momentum", [&](lattice::CellIndex k) { return lat.center_p(k); }},
      {"polynomial", [&](lattice::CellIndex k) {
         const double q = lat.center_q(k), p = lat.center_p(k);
         return q * q - 3.0 * q * p + p * p * p;
       }},
      {"random", [&](lattice::CellIndex k) { return random_values[lat.index_of(k)]; }},
      {"identity", [](lattice::CellIndex) { return 1.0; }}};
  double worst = 0.0;
  for (const auto& [name, f] : observables) {
    const double off = lattice::check_superselection(basis, f);
    c.detail[name] = off;
    worst = std::max(worst, off);
  }
  c.expect("max_off_diagonal_diagonal_observables", worst, 1e-8);
  const std::vector<double> xs = lattice::position_samples(basis.grid);
  const double raw = lattice::check_superselection(basis, std::span<const double>(xs));
  c.detail["raw_position"] = raw;
  c.require("raw_position_exceeds_1e-3", raw > 1e-3);
  return c;
}

inline Criterion geometry() {
  Criterion c{"AC3", "wedge area, geodesic length and RT entropy"};
  const ads::WedgeGeometry g64 = ads::make_wedge(64.0, 1.0);
  const double area = ads::wedge_area(g64), area_q = wedge_area_quadrature(g64);
  c.detail["area_64"] = area;
  c.detail["area_64_quadrature"] = area_q;
  c.expect("area_vs_quadrature_64", rel(area, area_q), 5e-3);
  double worst_len = 0.0;
  for (double ratio : {4.0, 64.0, 100.0, 1024.0}) {
    const ads::WedgeGeometry g = ads::make_wedge(ratio, 1.0);
    worst_len = std::max(worst_len, rel(ads::geodesic_length(g), geodesic_length_quadrature(g)));
  }
  c.expect("length_vs_quadrature", worst_len, 1e-3);
  const ads::WedgeGeometry g100 = ads::make_wedge(100.0, 1.0, 1.0, 0.25);
  const double S_rt = ads::rt_entropy(ads::geodesic_length(g100), g100.G_N);
  const double S_cardy = ads::cardy_entropy(g100);
  c.detail["S_rt_100"] = S_rt;
  c.detail["S_cardy_100"] = S_cardy;
  c.expect("rt_vs_cardy_100", rel(S_rt, S_cardy), 5e-3);
  return c;
}

inline Criterion mera_ground(double budget_s) {
  Criterion c{"AC4", "ground-state MERA microstate identity"};
  const auto start = std::chrono::steady_clock::now();
  bool ledger_ok = true, product_ok = true, layers_ok = true, powers_ok = true;
  for (std::uint64_t l0 = 1; l0 <= 1024; ++l0) {
    const mera::MeraNetwork net = mera::build_network(l0);
    layers_ok = layers_ok && net.layers == halving_layers(l0);
    const mera::BigInt h = mera::shannon_from_counting(net);
    mera::BigInt sum = 0;
    for (std::size_t m = 1; m < net.layers.size(); ++m) sum += net.layers[m];
    ledger_ok = ledger_ok && h == sum;
    for (unsigned N : {1u, 3u}) product_ok = product_ok && mera::BigInt(exact_log2(microstate_count(net.layers, N))) == N * h;
    if ((l0 & (l0 - 1)) == 0) powers_ok = powers_ok && h == l0 - 1;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  c.require("layers_match_halving_oracle", layers_ok);
  c.require("ledger_equals_layer_sum", ledger_ok);
  c.require("log2_microstate_product_equals_N_sum", product_ok);
  c.require("power_of_two_gives_2k_minus_1", powers_ok);
  c.require("runtime_under_1s", seconds < budget_s);
  return c;
}

inline Criterion mera_momentum() {
  Criterion c{"AC5", "momentum-replica MERA count"};
  bool formula_ok = true;
  // t_perp = R/q for integer q gives exactly q replicas; t_perp = 2R gives none.
  for (std::uint64_t l0 = 1; l0 <= 64; ++l0) {
    const mera::MeraNetwork net = mera::build_network(l0);
    const mera::BigInt h = mera::shannon_from_counting(net);
    for (std::uint64_t q = 1; q <= 8; ++q) {
      const auto k = mera::momentum_replicas(1.0, 1.0 / static_cast<double>(q));
      formula_ok = formula_ok && k.replicas == q && mera::boundary_microstates(net, k.replicas) == (q + 1) * h;
    }
    const auto none = mera::momentum_replicas(1.0, 2.0);
    formula_ok = formula_ok && none.replicas == 0 && mera::boundary_microstates(net, 0) == h;
    formula_ok = formula_ok && mera::momentum_replicas(1.0, std::nullopt).replicas == 0;
  }
  c.require("H_total_equals_1_plus_k_times_sum", formula_ok);

  const hydro::FluidState f = hydro::fluid_from_kinetic(0.05, kPi);
  const auto t = hydro::orthogonalization_time(f);
  const auto k = mera::momentum_replicas(1.0, t);
  const mera::BigInt h8 = mera::boundary_microstates(mera::build_network(8), k.replicas);
  c.detail["t_perp"] = *t;
  c.detail["replicas"] = k.replicas;
  c.detail["H_total_l0_8"] = h8.convert_to<std::uint64_t>();
  c.require("l0_8_t_half_gives_21_bits", h8 == 21);
  return c;
}

inline hydro::ConjectureReport conjecture_at(double ratio, const hydro::FluidState& f) {
  const ads::WedgeGeometry g = ads::make_wedge(ratio, 1.0, 1.0, 1.0 / (8.0 * kPi));
  const mera::MeraNetwork net = mera::build_network(static_cast<std::uint64_t>(std::llround(ratio)));
  const auto k = mera::momentum_replicas(g.R_ads, hydro::orthogonalization_time(f));
  const double H = mera::boundary_microstates(net, k.replicas).convert_to<double>();
  return hydro::conjecture_check(H, ads::holographic_complexity(g), hydro::abbreviated_action(g, f).value);
}

inline Criterion conjecture() {
  Criterion c{"AC6", "H_MERA against C_A + I_A/(pi hbar)"};
  const std::vector<std::pair<std::string, hydro::FluidState>> fluids{
      {"unit_horizon", hydro::fluid_for_horizon(1.0, 0.05)}, {"half_t_perp", hydro::fluid_from_kinetic(0.05, kPi)}};
  for (const auto& [name, f] : fluids) {
    Json rows = Json::array();
    double previous = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (double ratio : {64.0, 256.0, 1024.0}) {
      const hydro::ConjectureReport r = conjecture_at(ratio, f);
      rows.push_back({{"l_over_eps", ratio},
                      {"H_bits", r.H_bits},
                      {"predicted", r.predicted()},
                      {"relative_residual", r.relative_residual()}});
      monotone = monotone && r.relative_residual() < previous;
      previous = r.relative_residual();
    }
    c.detail[name] = rows;
    c.expect(name + "_relative_residual_64", rows[0]["relative_residual"].get<double>(), 0.05);
    c.require(name + "_monotone_decrease", monotone);
  }
  return c;
}

inline Criterion maxent(std::uint64_t seed) {
  Criterion c{"AC7", "maximum-entropy solver"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> nx_dist(2, 5), np_dist(2, 7);
  std::uniform_real_distribution<double> pmax_dist(0.5, 2.0), total_dist(1.0, 50.0), share(-0.95, 0.95);
  const double beta = maxent::determine_multipliers(1.0 / (8.0 * kPi), 1.0).beta;
  double worst_closed = 0.0, worst_oracle = 0.0;
  for (int i = 0; i < 50; ++i) {
    const maxent::MuSpaceGrid g = maxent::make_grid(nx_dist(rng), np_dist(rng), pmax_dist(rng));
    maxent::ConstraintSet cs{total_dist(rng), std::vector<double>(g.n_x)};
    for (double& p : cs.momentum) p = cs.total / static_cast<double>(g.n_x) * g.p_max() * share(rng);
    const maxent::MaxEntSolution sol = maxent::maxent_solve(g, cs);
    const maxent::OccupancyField closed = maxent::closed_form_occupancy(g, beta, sol.velocities(beta), cs.total);
    for (std::size_t k = 0; k < g.cells(); ++k)
      worst_closed = std::max(worst_closed, rel(sol.occupancy.values[k], closed.values[k]));
    const BisectionSolution o = maxent_bisection(g, cs);
    worst_oracle = std::max(worst_oracle, std::abs(sol.alpha - o.alpha) / std::max(1.0, std::abs(o.alpha)));
    for (std::size_t x = 0; x < g.n_x; ++x)
      worst_oracle = std::max(worst_oracle, std::abs(sol.lambda[x] - o.lambda[x]) / std::max(1.0, std::abs(o.lambda[x])));
  }
  c.expect("solver_vs_closed_form", worst_closed, 1e-8);
  c.expect("solver_vs_bisection", worst_oracle, 1e-8);

  std::size_t instances = 0, mismatches = 0;
  for (auto [nx, np] : {std::pair<std::size_t, std::size_t>{2, 2}, {2, 3}, {3, 2}}) {
    const maxent::MuSpaceGrid g = maxent::make_grid(nx, np, 1.0);
    for (std::uint64_t n = 1; n <= 6; ++n) {
      for (const IntegerInstance& inst : integer_instances(g, n)) {
        maxent::ConstraintSet cs{static_cast<double>(n), {}};
        for (long long p : inst.momentum) cs.momentum.push_back(static_cast<double>(p));
        if (!maxent::feasible(g, cs)) continue;
        ++instances;
        if (!compare_with_enumeration(inst, maxent::maxent_solve(g, cs).occupancy).matches) ++mismatches;
      }
    }
  }
  c.detail["enumerated_instances"] = instances;
  c.require("continuum_argmax_matches_enumeration", mismatches == 0 && instances > 0);

  const maxent::MuSpaceGrid g = maxent::make_grid(3, 5, 1.0);
  double worst_tr = 0.0;
  for (double v : {0.0, -0.05, 0.3, -1.5}) worst_tr = std::max(worst_tr, maxent::thermo_relation_check(g, v, beta).residual);
  c.expect("thermo_relation_residual", worst_tr, 1e-4);
  return c;
}

inline Criterion multipliers() {
  Criterion c{"AC8", "Lagrange multipliers and equal a priori probability"};
  const double G = 1.0 / (8.0 * kPi);
  const maxent::Multipliers m = maxent::determine_multipliers(G, 1.0);
  c.detail["alpha"] = m.alpha;
  c.detail["beta"] = m.beta;
  c.expect("alpha_minus_ln2", std::abs(m.alpha - kLn2), 2.0 * std::numeric_limits<double>::epsilon());
  c.expect("beta_minus_ln2_over_pi", std::abs(m.beta - kLn2 / kPi), 2.0 * std::numeric_limits<double>::epsilon());
  double worst = 0.0;
  for (double ratio : {64.0, 256.0, 1024.0}) {
    const ads::WedgeGeometry g = ads::make_wedge(ratio, 1.0, 1.0, G);
    const hydro::FluidState f = hydro::fluid_for_horizon(1.0, 0.05);
    const double I = hydro::abbreviated_action(g, f).value;
    const double S = maxent::entropy_from_probability(maxent::equal_apriori_probability(ads::wedge_area(g), I, G, 1.0));
    const double hydro_side = kLn2 * hydro::conjecture_check(0.0, ads::holographic_complexity(g), I).predicted();
    worst = std::max(worst, rel(S, hydro_side));
  }
  c.expect("minus_ln_p_vs_hydro_pipeline", worst, 1e-12);
  return c;
}

inline Criterion thermo_identity(std::uint64_t seed) {
  Criterion c{"AC9", "entropy identity of the redefined Hamiltonian"};
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> levels(1, 10);
  std::uniform_real_distribution<double> log_beta(std::log(0.01), std::log(10.0)), energy(-3.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t K = levels(rng);
    std::vector<double> e(K);
    for (double& x : e) x = energy(rng);
    const auto h = thermo::coarse_grain_hamiltonian(e, random_overlap_matrix(K, rng));
    worst = std::max(worst, thermo::entropy_identity_check(std::exp(log_beta(rng)), h).residual);
  }
  c.expect("max_residual", worst, 1e-9);
  double worst_limit = 0.0;
  for (std::size_t K = 1; K <= 10; ++K) {
    std::vector<double> e(K);
    for (double& x : e) x = energy(rng);
    const auto h = thermo::coarse_grain_hamiltonian(e, random_overlap_matrix(K, rng));
    worst_limit = std::max(worst_limit, std::abs(thermo::entropy_identity_check(0.0, h).entropy_nats -
                                                 std::log(static_cast<double>(K))));
    worst_limit = std::max(worst_limit, std::abs(thermo::entropy_identity_check(1e-10, h).entropy_nats -
                                                 std::log(static_cast<double>(K))));
  }
  c.expect("beta_to_zero_minus_lnK", worst_limit, 1e-9);
  return c;
}

inline Json to_json(const std::vector<Criterion>& cs) {
  Json out = Json::array();
  for (const Criterion& c : cs)
    out.push_back({{"id", c.id}, {"title", c.title}, {"passed", c.passed}, {"detail", c.detail}});
  return out;
}

}  // namespace acceptance

/// AC1..AC9 once.
inline std::vector<Criterion> run_criteria(std::uint64_t seed) {
  using namespace acceptance;
  std::vector<std::function<Criterion()>> jobs{
      [] { return coarse_graining(10.0); },
      [&] { return superselection(seed); },
      [] { return geometry(); },
      [] { return mera_ground(1.0); },
      [] { return mera_momentum(); },
      [] { return conjecture(); },
      [&] { return maxent(seed + 1); },
      [] { return multipliers(); },
      [&] { return thermo_identity(seed + 2); }};
  std::vector<Criterion> out;
  for (const auto& job : jobs) {
    const auto start = std::chrono::steady_clock::now();
    Criterion c;
    try {
      c = job();
    } catch (const std::exception& e) {
      c.passed = false;
      c.detail["error"] = e.what();
    }
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.push_back(std::move(c));
  }
  return out;
}

/// Runs AC1..AC9 twice and appends AC10: identical serialized reports within the time budget.
inline std::vector<Criterion> run_acceptance(std::uint64_t seed, double budget_s = 120.0) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<Criterion> first = run_criteria(seed);
  const std::vector<Criterion> second = run_criteria(seed);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  Criterion c{"AC10", "determinism and total runtime"};
  const std::string a = acceptance::to_json(first).dump(), b = acceptance::to_json(second).dump();
  c.detail["report_bytes"] = a.size();
  c.require("byte_identical_reports", a == b);
  c.require("runtime_under_2min", seconds < budget_s);
  c.seconds = seconds;
  first.push_back(std::move(c));
  return first;
}

}  // namespace holoshannon::verify
