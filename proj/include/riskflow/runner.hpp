#ifndef RISKFLOW_RUNNER_HPP
#define RISKFLOW_RUNNER_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "riskflow/config.hpp"

namespace riskflow::runner {

struct Options {
  std::string out_dir;                 // empty: take config output.directory
  std::string format;                  // empty: take config output.format
  std::optional<std::uint64_t> seed;   // overrides the config seed
  bool allow_unstable = false;         // ORed with the config flag
};

// Each pipeline writes its outputs and throws typed errors; the CLI maps
// exception types onto exit codes.
void run_simulate(const config::ScenarioConfig& cfg, const Options& opt);
void run_field(const config::ScenarioConfig& cfg, const Options& opt);
void run_decompose(const config::ScenarioConfig& cfg, const Options& opt);
void run_ensemble(const config::ScenarioConfig& cfg, const Options& opt);

}  // namespace riskflow::runner

#endif
