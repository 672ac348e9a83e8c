// Command-line front end: simulate synthetic walks, run the tracker over
// measurement logs, score the two methods against each other, fit sensor
// noise models, and run seeded Monte-Carlo comparisons.

#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hybridloc/errors.hpp"
#include "hybridloc/pipeline.hpp"

namespace {

struct GlobalFlags {
  std::optional<uint64_t> seed;
  std::string fov_mode;  // "", "declared" or "measured"
  bool fusion_feedback = false;
};

hybridloc::RunOverrides to_overrides(const GlobalFlags& flags) {
  hybridloc::RunOverrides overrides;
  overrides.seed = flags.seed;
  if (flags.fov_mode == "declared") {
    overrides.fov_mode = hybridloc::FovMode::kDeclared;
  } else if (flags.fov_mode == "measured") {
    overrides.fov_mode = hybridloc::FovMode::kMeasured;
  }
  overrides.fusion_feedback = flags.fusion_feedback;
  return overrides;
}

void add_global_flags(CLI::App& cmd, GlobalFlags& flags) {
  cmd.add_option("--seed", flags.seed,
                 "Override the scenario's master seed for this run");
  cmd.add_option("--fov-mode", flags.fov_mode,
                 "Detection cone the simulator applies: the declared width or the "
                 "narrower one observed on a real target")
      ->check(CLI::IsMember({"declared", "measured"}));
  cmd.add_flag("--fusion-feedback", flags.fusion_feedback,
               "Experimental: feed the fused position back into the tracker");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Indoor localization testbed: radio tracking fused with proximity sensing"};
  app.require_subcommand(1);

  GlobalFlags flags;

  // simulate
  std::string sim_scenario, sim_out_log, sim_out_truth;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Generate a measurement log and ground truth for a scenario");
  simulate->add_option("--scenario", sim_scenario, "Scenario JSON file")->required();
  simulate->add_option("--out-log", sim_out_log, "Output measurement CSV")->required();
  simulate->add_option("--out-truth", sim_out_truth, "Output ground-truth CSV")->required();
  add_global_flags(*simulate, flags);

  // localize
  std::string loc_scenario, loc_log, loc_out, loc_mode = "hybrid";
  CLI::App* localize =
      app.add_subcommand("localize", "Run the tracker over a measurement log");
  localize->add_option("--scenario", loc_scenario, "Scenario JSON file")->required();
  localize->add_option("--log", loc_log, "Input measurement CSV")->required();
  localize->add_option("--out", loc_out, "Output estimates CSV")->required();
  localize->add_option("--mode", loc_mode, "ble = radio only, hybrid = radio + proximity")
      ->check(CLI::IsMember({"ble", "hybrid"}));
  add_global_flags(*localize, flags);

  // evaluate
  hybridloc::EvaluateArgs eval_args;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score two estimate files against the reference walk");
  evaluate->add_option("--scenario", eval_args.scenario_path, "Scenario JSON file")->required();
  evaluate->add_option("--ble", eval_args.ble_estimates_path, "Radio-only estimates CSV")
      ->required();
  evaluate->add_option("--hybrid", eval_args.hybrid_estimates_path, "Hybrid estimates CSV")
      ->required();
  evaluate->add_option("--report", eval_args.out_report_path, "Output report JSON")->required();
  evaluate->add_option("--cdf-ble", eval_args.out_cdf_ble_path,
                       "Output CDF CSV (default: <report stem>_cdf_ble.csv)");
  evaluate->add_option("--cdf-hybrid", eval_args.out_cdf_hybrid_path,
                       "Output CDF CSV (default: <report stem>_cdf_hybrid.csv)");
  evaluate->add_option("--errors-ble", eval_args.out_errors_ble_path,
                       "Output per-tick error CSV (default: <report stem>_errors_ble.csv)");
  evaluate->add_option("--errors-hybrid", eval_args.out_errors_hybrid_path,
                       "Output per-tick error CSV (default: <report stem>_errors_hybrid.csv)");
  add_global_flags(*evaluate, flags);

  // fit-sensor
  std::string fit_calibration, fit_out;
  std::string fit_bias;
  CLI::App* fit = app.add_subcommand(
      "fit-sensor", "Fit the ranging stddev cubic (and optional bias table) from calibration CSVs");
  fit->add_option("--calibration", fit_calibration, "distance_m,stddev_m CSV")->required();
  fit->add_option("--bias", fit_bias, "distance_m,bias_m CSV (optional)");
  fit->add_option("--out", fit_out, "Output sensor-model JSON")->required();

  // montecarlo
  std::string mc_scenario, mc_report;
  int mc_runs = 20;
  CLI::App* montecarlo = app.add_subcommand(
      "montecarlo", "Repeated simulate+localize+evaluate over derived seeds");
  montecarlo->add_option("--scenario", mc_scenario, "Scenario JSON file")->required();
  montecarlo->add_option("--runs", mc_runs, "Number of runs")->check(CLI::PositiveNumber);
  montecarlo->add_option("--report", mc_report, "Output report JSON")->required();
  add_global_flags(*montecarlo, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    const hybridloc::RunOverrides overrides = to_overrides(flags);
    if (simulate->parsed()) {
      hybridloc::cmd_simulate(sim_scenario, sim_out_log, sim_out_truth, overrides);
      std::cout << "wrote " << sim_out_log << " and " << sim_out_truth << "\n";
    } else if (localize->parsed()) {
      const auto mode =
          loc_mode == "ble" ? hybridloc::LocalizeMode::kBle : hybridloc::LocalizeMode::kHybrid;
      hybridloc::cmd_localize(loc_scenario, loc_log, loc_out, mode, overrides);
      std::cout << "wrote " << loc_out << "\n";
    } else if (evaluate->parsed()) {
      hybridloc::cmd_evaluate(eval_args, overrides);
      std::cout << hybridloc::read_text_file(eval_args.out_report_path);
    } else if (fit->parsed()) {
      hybridloc::cmd_fit_sensor(fit_calibration,
                                fit_bias.empty() ? std::nullopt
                                                 : std::optional<std::string>(fit_bias),
                                fit_out, std::cout);
    } else if (montecarlo->parsed()) {
      hybridloc::cmd_montecarlo(mc_scenario, mc_runs, mc_report, overrides);
      std::cout << hybridloc::read_text_file(mc_report);
    }
  } catch (const hybridloc::Error& e) {
    std::cerr << "hybridloc: error [" << e.code_name() << "] " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "hybridloc: internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
