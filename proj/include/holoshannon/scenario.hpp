#pragma once

// Scenario files: one JSON document with a section per pipeline. Every
// physical constant is explicit; the only defaults are the documented module
// defaults listed in README.md.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "holoshannon/ads_geometry.hpp"
#include "holoshannon/core.hpp"
#include "holoshannon/hydro_action.hpp"
#include "holoshannon/mera_counting.hpp"
#include "holoshannon/vonneumann_lattice.hpp"

namespace holoshannon::scenario {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

struct GeometryParams {
  double l = 0.0;
  double eps = 0.0;
  double G_N = 0.0;
  double R_ads = 1.0;
  std::optional<double> r_plus;  // derived from the fluid when absent
};

struct FluidParams {
  double u = 0.0;
  std::optional<double> eps_energy;
  std::optional<double> eps_kin;
  double kinetic_factor = hydro::kDefaultKineticFactor;
  bool allow_relativistic = false;
};

struct LatticeParams {
  double eps_q = 0.0;
  int m_max_q = 1;
  int m_max_p = 1;
  std::optional<double> grid_spacing;
  std::optional<double> padding;
  double max_loss = lattice::kDefaultTruncationLoss;
};

struct MeraParams {
  unsigned arity = 2;
  std::optional<std::size_t> horizon_layer;
  double kappa = 1.0;
  double r_inf = 1.0;
  mera::ReplicaRounding rounding = mera::ReplicaRounding::Floor;
};

struct MaxEntParams {
  std::size_t n_x = 3;
  std::size_t n_p = 5;
  double p_max = 1.0;
  double total = 10.0;
};

struct ThermoParams {
  std::size_t levels = 6;
  double beta = 1.0;
};

struct Scenario {
  std::string name;
  GeometryParams geometry;
  FluidParams fluid;
  LatticeParams lattice;
  MeraParams mera;
  MaxEntParams maxent;
  ThermoParams thermo;
  std::uint64_t seed = 0;

  ads::WedgeGeometry wedge() const { return {geometry.l, geometry.eps, geometry.R_ads, geometry.G_N}; }

  hydro::FluidState fluid_state() const {
    if (fluid.eps_kin) return hydro::fluid_from_kinetic(fluid.u, *fluid.eps_kin, fluid.kinetic_factor);
    return hydro::make_fluid(fluid.u, *fluid.eps_energy, fluid.kinetic_factor);
  }

  /// r+ as configured, else sqrt(rho) so that r+^2 = rho, else 1 for an empty fluid.
  double r_plus() const {
    if (geometry.r_plus) return *geometry.r_plus;
    const double rho = fluid_state().rho;
    return rho > 0.0 ? std::sqrt(rho) : 1.0;
  }

  std::uint64_t boundary_sites() const { return static_cast<std::uint64_t>(std::llround(geometry.l / geometry.eps)); }
};

namespace detail_parse {

class Reader {
 public:
  Reader(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  ~Reader() = default;

  /// Throws on keys that were never read.
  void finish() const {
    for (const auto& [key, value] : node_.items())
      if (!seen_.count(key)) throw ConfigError(field(key), "unknown field");
  }

  bool has(const std::string& key) const { return node_.contains(key) && !node_.at(key).is_null(); }

  double number(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key)) throw ConfigError(field(key), "required field missing");
    const Json& v = node_.at(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field(key), "must be finite");
    return d;
  }

  double number(const std::string& key, double fallback) { return has(key) ? number(key) : (seen_.insert(key), fallback); }

  std::optional<double> optional_number(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return number(key);
  }

  long long integer(const std::string& key, long long fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    const Json& v = node_.at(key);
    if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
    return v.get<long long>();
  }

  std::optional<long long> optional_integer(const std::string& key) {
    if (!has(key)) {
      seen_.insert(key);
      return std::nullopt;
    }
    return integer(key, 0);
  }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    if (!node_.at(key).is_boolean()) throw ConfigError(field(key), "expected true or false");
    return node_.at(key).get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    if (!node_.at(key).is_string()) throw ConfigError(field(key), "expected a string");
    return node_.at(key).get<std::string>();
  }

  Reader child(const std::string& key) {
    seen_.insert(key);
    if (!node_.contains(key)) throw ConfigError(field(key), "required section missing");
    return Reader(node_.at(key), field(key));
  }

  std::optional<Reader> optional_child(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return Reader(node_.at(key), field(key));
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  void check(bool ok, const std::string& key, const std::string& message) const {
    if (!ok) throw ConfigError(field(key), message);
  }

 private:
  const Json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

}  // namespace detail_parse

/// Parses and validates a scenario document; every failure is a ConfigError naming the field.
inline Scenario parse_scenario(const Json& doc) {
  using detail_parse::Reader;
  Reader root(doc, "");
  Scenario s;
  const long long version = root.integer("schema_version", kSchemaVersion);
  root.check(version == kSchemaVersion, "schema_version", "unsupported schema version");
  s.name = root.string("name", "scenario");
  const long long seed = root.integer("seed", 0);
  root.check(seed >= 0, "seed", "must be non-negative");
  s.seed = static_cast<std::uint64_t>(seed);

  {
    Reader g = root.child("geometry");
    s.geometry.l = g.number("l");
    s.geometry.eps = g.number("eps");
    s.geometry.R_ads = g.number("R_ads", 1.0);
    const auto G = g.optional_number("G_N");
    const auto eight_pi_G = g.optional_number("eight_pi_G_N");
    g.check(G.has_value() != eight_pi_G.has_value(), "G_N", "give exactly one of G_N or eight_pi_G_N");
    s.geometry.G_N = G ? *G : *eight_pi_G / (8.0 * kPi);
    s.geometry.r_plus = g.optional_number("r_plus");
    g.check(s.geometry.eps > 0.0, "eps", "must be positive");
    g.check(s.geometry.l > 2.0 * s.geometry.eps, "l", "must exceed 2 eps");
    g.check(s.geometry.R_ads > 0.0, "R_ads", "must be positive");
    g.check(s.geometry.G_N > 0.0, G ? "G_N" : "eight_pi_G_N", "must be positive");
    g.check(!s.geometry.r_plus || *s.geometry.r_plus > 0.0, "r_plus", "must be positive");
    const double ratio = s.geometry.l / s.geometry.eps;
    g.check(ratio <= static_cast<double>(1ULL << 40), "l", "l/eps too large for the layer ledger");
    g.finish();
  }
  {
    Reader f = root.child("fluid");
    s.fluid.u = f.number("u");
    s.fluid.eps_energy = f.optional_number("eps_energy");
    s.fluid.eps_kin = f.optional_number("eps_kin");
    s.fluid.kinetic_factor = f.number("kinetic_factor", hydro::kDefaultKineticFactor);
    s.fluid.allow_relativistic = f.boolean("allow_relativistic", false);
    f.check(std::abs(s.fluid.u) < 1.0, "u", "must satisfy |u| < 1");
    f.check(s.fluid.eps_energy.has_value() != s.fluid.eps_kin.has_value(), "eps_energy",
            "give exactly one of eps_energy or eps_kin");
    f.check(!s.fluid.eps_energy || *s.fluid.eps_energy >= 0.0, "eps_energy", "must be non-negative");
    f.check(!s.fluid.eps_kin || (*s.fluid.eps_kin > 0.0 && s.fluid.u != 0.0), "eps_kin",
            "must be positive and needs u != 0");
    f.check(s.fluid.kinetic_factor > 0.0 && s.fluid.kinetic_factor <= 1.0, "kinetic_factor", "must lie in (0, 1]");
    f.check(s.fluid.allow_relativistic || hydro::classify_regime(s.fluid.u) != hydro::Regime::Relativistic, "u",
            "|u| >= 0.5 is outside the non-relativistic regime (set allow_relativistic to override)");
    f.finish();
    try {
      const hydro::FluidState state = s.fluid_state();
      if (s.geometry.r_plus && state.rho > 0.0) {
        const double r2 = *s.geometry.r_plus * *s.geometry.r_plus;
        if (std::abs(r2 - state.rho) > 1e-9 * state.rho)
          throw ConfigError("geometry.r_plus", "r_plus^2 must equal the fluid mass density eps/gamma^2");
      }
    } catch (const DomainError& e) {
      throw ConfigError("fluid", e.what());
    }
  }
  {
    Reader lat = root.child("lattice");
    s.lattice.eps_q = lat.number("eps_q");
    s.lattice.m_max_q = static_cast<int>(lat.integer("m_max_q", 1));
    s.lattice.m_max_p = static_cast<int>(lat.integer("m_max_p", 1));
    s.lattice.grid_spacing = lat.optional_number("grid_spacing");
    s.lattice.padding = lat.optional_number("padding");
    s.lattice.max_loss = lat.number("max_loss", lattice::kDefaultTruncationLoss);
    lat.check(s.lattice.eps_q > 0.0, "eps_q", "must be positive");
    lat.check(s.lattice.m_max_q >= 0 && s.lattice.m_max_q <= 8, "m_max_q", "must lie in [0, 8]");
    lat.check(s.lattice.m_max_p >= 0 && s.lattice.m_max_p <= 8, "m_max_p", "must lie in [0, 8]");
    lat.check(!s.lattice.grid_spacing || (*s.lattice.grid_spacing > 0.0 &&
                                          *s.lattice.grid_spacing <= s.lattice.eps_q / 16.0),
              "grid_spacing", "must satisfy 0 < spacing <= eps_q/16");
    lat.check(!s.lattice.padding || *s.lattice.padding >= 4.0 * s.lattice.eps_q, "padding", "must be >= 4 eps_q");
    lat.check(s.lattice.max_loss > 0.0 && s.lattice.max_loss < 1.0, "max_loss", "must lie in (0, 1)");
    lat.finish();
  }
  if (auto m = root.optional_child("mera")) {
    const long long arity = m->integer("arity", 2);
    m->check(arity >= 2 && arity <= 16, "arity", "must lie in [2, 16]");
    s.mera.arity = static_cast<unsigned>(arity);
    if (const auto h = m->optional_integer("horizon_layer")) {
      m->check(*h >= 0, "horizon_layer", "must be non-negative");
      s.mera.horizon_layer = static_cast<std::size_t>(*h);
    }
    s.mera.kappa = m->number("kappa", 1.0);
    s.mera.r_inf = m->number("r_inf", 1.0);
    const std::string rounding = m->string("replica_rounding", "floor");
    m->check(rounding == "floor" || rounding == "round", "replica_rounding", "must be \"floor\" or \"round\"");
    s.mera.rounding = rounding == "floor" ? mera::ReplicaRounding::Floor : mera::ReplicaRounding::Round;
    m->check(s.mera.kappa > 0.0, "kappa", "must be positive");
    m->check(s.mera.r_inf > 0.0, "r_inf", "must be positive");
    m->finish();
  }
  if (s.mera.horizon_layer) {
    const auto depth = mera::coarse_grain_layers(s.boundary_sites(), s.mera.arity).size() - 1;
    if (*s.mera.horizon_layer > depth) throw ConfigError("mera.horizon_layer", "deeper than the network");
  }
  if (auto me = root.optional_child("maxent")) {
    const long long nx = me->integer("n_x", 3);
    const long long np = me->integer("n_p", 5);
    me->check(nx >= 2 && nx <= 64, "n_x", "must lie in [2, 64]");
    me->check(np >= 2 && np <= 64, "n_p", "must lie in [2, 64]");
    s.maxent.n_x = static_cast<std::size_t>(nx);
    s.maxent.n_p = static_cast<std::size_t>(np);
    s.maxent.p_max = me->number("p_max", 1.0);
    s.maxent.total = me->number("total", 10.0);
    me->check(s.maxent.p_max > 0.0, "p_max", "must be positive");
    me->check(s.maxent.total > 0.0, "total", "must be positive");
    me->finish();
  }
  if (auto th = root.optional_child("thermo")) {
    const long long k = th->integer("levels", 6);
    th->check(k >= 1 && k <= 64, "levels", "must lie in [1, 64]");
    s.thermo.levels = static_cast<std::size_t>(k);
    s.thermo.beta = th->number("beta", 1.0);
    th->check(s.thermo.beta >= 0.0, "beta", "must be non-negative");
    th->finish();
  }
  root.finish();
  return s;
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("scenario", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("scenario", std::string("malformed JSON: ") + e.what());
  }
}

inline Scenario load_scenario(const std::string& path) { return parse_scenario(read_json_file(path)); }

/// Scalar fields a sweep may vary, as JSON pointers into the scenario document.
inline const std::vector<std::string>& sweepable_fields() {
  static const std::vector<std::string> fields{
      "geometry.l",        "geometry.eps",      "geometry.G_N",    "geometry.eight_pi_G_N", "geometry.R_ads",
      "geometry.r_plus",   "fluid.u",           "fluid.eps_energy", "fluid.eps_kin",        "fluid.kinetic_factor",
      "lattice.eps_q",     "lattice.m_max_q",   "lattice.m_max_p", "lattice.max_loss",      "mera.horizon_layer",
      "mera.kappa",        "mera.r_inf",        "maxent.n_x",      "maxent.n_p",            "maxent.p_max",
      "maxent.total",      "thermo.levels",     "thermo.beta"};
  return fields;
}

/// Copy of the document with one scalar replaced; integer fields receive integral values.
inline Json with_parameter(Json doc, const std::string& field, double value) {
  const auto& fields = sweepable_fields();
  if (std::find(fields.begin(), fields.end(), field) == fields.end())
    throw ConfigError(field, "not a sweepable scalar field");
  const auto dot = field.find('.');
  const std::string section = field.substr(0, dot);
  const std::string key = field.substr(dot + 1);
  static const std::set<std::string> integers{"m_max_q", "m_max_p", "horizon_layer", "n_x", "n_p", "levels"};
  if (!doc.contains(section)) doc[section] = Json::object();
  if (integers.count(key)) {
    if (value != std::round(value)) throw ConfigError(field, "integer field needs an integral value");
    doc[section][key] = static_cast<long long>(std::llround(value));
  } else {
    doc[section][key] = value;
  }
  return doc;
}

}  // namespace holoshannon::scenario
