// holoshannon: run scenarios, sweep a parameter, or run the acceptance suite.
//
// Exit codes: 0 every check passed, 1 a check failed, 2 configuration or usage error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "holoshannon/runner.hpp"
#include "holoshannon/scenario.hpp"
#include "holoshannon/verify/acceptance.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;

// Output is only written once the whole document exists.
void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw holoshannon::ConfigError("--out", "cannot write " + path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase-space coarse-graining, AdS3 wedge geometry and MERA counting laboratory"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, format = "json", parameter;
  std::optional<std::uint64_t> seed;
  std::vector<double> values;
  bool strict_regime = false, timings = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Output file (stdout when omitted)");
    sub->add_option("--seed", seed, "Random seed overriding the scenario's");
  };

  CLI::App* run = app.add_subcommand("run", "Run every pipeline on one scenario");
  run->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  run->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("--strict-regime", strict_regime, "Fail the action check for 0.1 < |u| < 0.5");
  run->add_flag("--timings", timings, "Add wall times to the report");
  add_common(run);

  CLI::App* sweep = app.add_subcommand("sweep", "Re-run a scenario over values of one scalar field");
  sweep->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
  sweep->add_option("--param", parameter, "Dotted field name, e.g. geometry.l")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sweep->add_flag("--strict-regime", strict_regime, "Fail the action check for 0.1 < |u| < 0.5");
  sweep->add_flag("--timings", timings, "Add wall times to the reports");
  add_common(sweep);

  CLI::App* check = app.add_subcommand("check", "Run the acceptance suite");
  add_common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  holoshannon::runner::RunOptions opt;
  opt.strict_regime = strict_regime;
  opt.timings = timings;
  opt.seed = seed;

  try {
    if (run->parsed()) {
      const holoshannon::scenario::Scenario s = holoshannon::scenario::load_scenario(scenario_path);
      const auto report = holoshannon::runner::run_scenario(s, opt);
      emit(format == "csv" ? holoshannon::runner::report_csv(report) : report.dump(2) + "\n", out_path);
      return holoshannon::runner::report_ok(report) ? kExitOk : kExitFailed;
    }
    if (sweep->parsed()) {
      const auto doc = holoshannon::scenario::read_json_file(scenario_path);
      const auto table = holoshannon::runner::sweep(doc, parameter, values, opt);
      emit(format == "csv" ? holoshannon::runner::sweep_csv(table) : table.dump(2) + "\n", out_path);
      return table.at("ok").get<bool>() ? kExitOk : kExitFailed;
    }
    const auto criteria = holoshannon::verify::run_acceptance(seed.value_or(0));
    bool ok = true;
    for (const auto& c : criteria) {
      std::cerr << (c.passed ? "PASS " : "FAIL ") << c.id << "  " << c.title << '\n';
      ok = ok && c.passed;
    }
    holoshannon::verify::Json report;
    report["schema_version"] = holoshannon::scenario::kSchemaVersion;
    report["seed"] = seed.value_or(0);
    report["criteria"] = holoshannon::verify::acceptance::to_json(criteria);
    report["ok"] = ok;
    emit(report.dump(2) + "\n", out_path);
    return ok ? kExitOk : kExitFailed;
  } catch (const holoshannon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailed;
  }
}
