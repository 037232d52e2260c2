#include <cmath>

#include <gtest/gtest.h>

#include "holoshannon/runner.hpp"

using namespace holoshannon;
using namespace holoshannon::runner;
using holoshannon::scenario::Json;

namespace {

Json document(double u) {
  Json doc = Json::parse(R"({
    "name": "unit",
    "seed": 99,
    "geometry": { "l": 64.0, "eps": 1.0, "eight_pi_G_N": 1.0, "R_ads": 1.0 },
    "lattice": { "eps_q": 2.5066282746310002, "m_max_q": 1, "m_max_p": 1 },
    "mera": { "horizon_layer": 3 }
  })");
  if (u == 0.0) doc["fluid"] = {{"u", 0.0}, {"eps_energy", 1.0}};
  else doc["fluid"] = {{"u", u}, {"eps_kin", kPi}};
  return doc;
}

Json run(double u, const RunOptions& opt = {}) { return run_scenario(scenario::parse_scenario(document(u)), opt); }

std::size_t column(const Json& table, const std::string& name) {
  const Json& cols = table.at("columns");
  return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), name) - cols.begin());
}

}  // namespace

TEST(RunScenario, GroundStatePasses) {
  const Json r = run(0.0);
  EXPECT_TRUE(report_ok(r)) << r.dump(2);
  EXPECT_EQ(r.at("checks").size(), 10u);
  EXPECT_EQ(value_or_null(r, "mera_momentum", "H_total_bits"), 63);
  EXPECT_EQ(value_or_null(r, "mera_momentum", "replicas"), 0);
  EXPECT_TRUE(value_or_null(r, "mera_momentum", "t_perp").is_null());
  EXPECT_EQ(value_or_null(r, "abbreviated_action", "I_A"), 0.0);
}

TEST(RunScenario, MomentumTriplesBoundaryBits) {
  const Json r = run(0.05);
  EXPECT_TRUE(report_ok(r)) << r.dump(2);
  EXPECT_EQ(value_or_null(r, "mera_momentum", "replicas"), 2);
  EXPECT_EQ(value_or_null(r, "mera_momentum", "H_total_bits"), 3 * 63);
  const double rel = value_or_null(r, "conjecture", "relative_residual").get<double>();
  EXPECT_LE(rel, kConjectureTolerance);
  EXPECT_EQ(find_check(r, "conjecture").at("status"), "pass");
}

TEST(RunScenario, SummaryCountsChecks) {
  const Json r = run(0.05);
  const Json& s = r.at("summary");
  EXPECT_EQ(s.at("passed").get<int>() + s.at("failed").get<int>() + s.at("informational").get<int>(), 10);
  EXPECT_EQ(r.at("schema_version"), scenario::kSchemaVersion);
  EXPECT_EQ(r.at("seed"), 99u);
}

TEST(RunScenario, DeterministicForFixedSeed) {
  EXPECT_EQ(run(0.05).dump(), run(0.05).dump());
  RunOptions other;
  other.seed = 100;
  const Json r = run(0.05, other);
  EXPECT_EQ(r.at("seed"), 100u);
  EXPECT_TRUE(report_ok(r));
}

TEST(RunScenario, TimingsOnlyOnRequest) {
  EXPECT_FALSE(run(0.0).at("checks")[0].contains("wall_time_s"));
  RunOptions opt;
  opt.timings = true;
  EXPECT_TRUE(run(0.0, opt).at("checks")[0].contains("wall_time_s"));
}

TEST(RunScenario, StrictRegimeFailsMarginalSpeeds) {
  EXPECT_TRUE(report_ok(run(0.2)));
  RunOptions strict;
  strict.strict_regime = true;
  const Json r = run(0.2, strict);
  EXPECT_FALSE(report_ok(r));
  EXPECT_EQ(find_check(r, "abbreviated_action").at("status"), "fail");
  EXPECT_TRUE(report_ok(run(0.05, strict)));
}

TEST(RunScenario, SmallIntervalsAreInformational) {
  Json doc = document(0.05);
  doc["geometry"]["l"] = 16.0;
  doc["mera"].erase("horizon_layer");
  const Json r = run_scenario(scenario::parse_scenario(doc));
  EXPECT_TRUE(report_ok(r));
  EXPECT_EQ(find_check(r, "conjecture").at("status"), "info");
}

TEST(ReportCsv, OneRowPerResidual) {
  const std::string csv = report_csv(run(0.0));
  EXPECT_EQ(csv.rfind("check,status,quantity,value,tolerance\n", 0), 0u);
  EXPECT_NE(csv.find("mera_ground,pass,power_of_two_closed_form,true,"), std::string::npos);
}

TEST(Sweep, SingleValueMatchesRun) {
  const Json table = sweep(document(0.05), "fluid.u", {0.05});
  EXPECT_EQ(table.at("reports")[0].dump(), run(0.05).dump());
  EXPECT_EQ(table.at("columns").size(), sweep_columns().size() + 1);
  EXPECT_EQ(table.at("rows")[0].size(), table.at("columns").size());
}

TEST(Sweep, ActionScalesWithSpeedSquaredAtFixedEnergy) {
  Json doc = document(0.0);
  doc["mera"].erase("horizon_layer");
  const Json table = sweep(doc, "fluid.u", {0.01, 0.02, 0.04});
  ASSERT_TRUE(table.at("ok").get<bool>());
  const std::size_t col = column(table, "I_A");
  const double a = table.at("rows")[0][col].get<double>();
  for (std::size_t i = 1; i < 3; ++i) {
    const double r = table.at("rows")[i][0].get<double>() / 0.01;
    EXPECT_NEAR(table.at("rows")[i][col].get<double>() / a, r * r, 0.01 * r * r);
  }
}

TEST(Sweep, ActionFixedByKineticEnergy) {
  const Json table = sweep(document(0.05), "fluid.u", {0.01, 0.04});
  const std::size_t col = column(table, "I_A");
  EXPECT_NEAR(table.at("rows")[1][col].get<double>(), table.at("rows")[0][col].get<double>(),
              1e-12 * table.at("rows")[0][col].get<double>());
}

TEST(Sweep, ContinuumDeviationShrinksWithInterval) {
  Json doc = document(0.05);
  doc["mera"].erase("horizon_layer");
  const Json table = sweep(doc, "geometry.l", {16.0, 64.0, 256.0, 1024.0});
  const std::size_t col = column(table, "continuum_deviation");
  double prev = std::numeric_limits<double>::infinity();
  for (const Json& row : table.at("rows")) {
    const double d = row[col].get<double>();
    EXPECT_LT(d, prev);
    prev = d;
  }
}

TEST(Sweep, InvalidValueRejectsWholeSweep) {
  EXPECT_THROW(sweep(document(0.05), "fluid.u", {0.05, 1.5}), ConfigError);
  EXPECT_THROW(sweep(document(0.05), "fluid.speed", {0.05}), ConfigError);
  EXPECT_THROW(sweep(document(0.05), "fluid.u", {}), ConfigError);
}

TEST(Sweep, CsvHeaderAndRows) {
  const std::string csv = sweep_csv(sweep(document(0.0), "thermo.beta", {0.5, 2.0}));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "thermo.beta,l_over_eps,H_ground_bits,H_total_bits,replicas,wedge_area,C_A,I_A,"
                                            "I_over_pihbar,residual,relative_residual,continuum_deviation,checks_failed,ok");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}
