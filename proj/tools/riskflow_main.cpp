// Batch front end: parses a scenario config and dispatches one of the four
// pipelines. Exit codes: 0 ok, 2 config error, 3 numeric error, 4 I/O error.

#include <cstdint>
#include <functional>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "riskflow/config.hpp"
#include "riskflow/errors.hpp"
#include "riskflow/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool allow_unstable = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "scenario config file (JSON)")
      ->required();
  cmd->add_option("--out", args.out_dir, "output directory (overrides the config)");
  cmd->add_option("--format", args.format, "csv or json (overrides the config)")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", args.seed, "seed override")->each([&](const std::string&) {
    args.seed_set = true;
  });
  cmd->add_flag("--allow-unstable", args.allow_unstable,
                "admit non-oscillatory disturbance parameters");
}

int dispatch(const CommonArgs& args,
             const std::function<void(const riskflow::config::ScenarioConfig&,
                                      const riskflow::runner::Options&)>& pipeline) {
  try {
    riskflow::config::ScenarioConfig cfg =
        riskflow::config::parse_config(args.config_path, args.allow_unstable);
    riskflow::runner::Options opt;
    opt.out_dir = args.out_dir;
    opt.format = args.format;
    if (args.seed_set) opt.seed = args.seed;
    opt.allow_unstable = args.allow_unstable;
    pipeline(cfg, opt);
    return riskflow::exit_ok;
  } catch (const riskflow::ConfigError& e) {
    std::cerr << "error (config): " << e.what() << "\n";
    return riskflow::exit_config_error;
  } catch (const riskflow::NumericError& e) {
    std::cerr << "error (numeric): " << e.what() << "\n";
    return riskflow::exit_numeric_error;
  } catch (const riskflow::IoError& e) {
    std::cerr << "error (io): " << e.what() << "\n";
    return riskflow::exit_io_error;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return riskflow::exit_failure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"riskflow - transaction/expectation market simulator"};
  app.require_subcommand(1);

  CommonArgs sim_args, field_args, dec_args, ens_args;
  auto* sim = app.add_subcommand("simulate", "micro simulation and aggregation to grid fields");
  add_common(sim, sim_args);
  auto* field = app.add_subcommand("field", "continuity stepping and domain-balance report");
  add_common(field, field_args);
  auto* dec = app.add_subcommand("decompose", "oscillator trajectories to return decomposition");
  add_common(dec, dec_args);
  auto* ens = app.add_subcommand("ensemble", "Monte Carlo distribution study");
  add_common(ens, ens_args);

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return dispatch(sim_args, riskflow::runner::run_simulate);
  if (field->parsed()) return dispatch(field_args, riskflow::runner::run_field);
  if (dec->parsed()) return dispatch(dec_args, riskflow::runner::run_decompose);
  if (ens->parsed()) return dispatch(ens_args, riskflow::runner::run_ensemble);
  return riskflow::exit_failure;
}
