#ifndef RISKFLOW_CONFIG_HPP
#define RISKFLOW_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskflow/aggregate.hpp"
#include "riskflow/dynamics.hpp"
#include "riskflow/ensemble.hpp"
#include "riskflow/espace.hpp"

namespace riskflow::config {

struct AgentSamplerConfig {
  long count = 1;
  std::uint64_t seed = 0;
  double velocity_lo = 0.0, velocity_hi = 0.0;
  double volume_lo = 0.0, volume_hi = 1.0;
  double value_lo = 0.0, value_hi = 1.0;
  double expectation_lo = 1.0, expectation_hi = 1.0;
};

struct SimulateConfig {
  aggregate::TimeWindow window;
  int windows = 1;
  std::vector<espace::Agent> agents;           // explicit roster ...
  std::optional<AgentSamplerConfig> sampler;   // ... or a sampler, not both
};

struct FieldInitial {
  enum class Kind { uniform, pulse };
  Kind kind = Kind::uniform;
  double value = 0.0;  // uniform level
  espace::Vec3 center{};
  double width = 0.1;
  double amplitude = 1.0;
};

struct FieldFactor {
  enum class Kind { zero, constant, linear_coupling };
  Kind kind = Kind::zero;
  double value = 0.0;        // constant source
  double coefficient = 0.0;  // linear coupling onto the partner field
};

struct FieldPartner {
  std::string label = "partner";
  FieldInitial initial;
  espace::Vec3 velocity{};
  double coefficient = 0.0;  // coupling back onto the primary field
};

struct FieldConfig {
  std::string quantity = "volume";
  FieldInitial initial;
  espace::Vec3 velocity{};
  FieldFactor factor;
  std::optional<FieldPartner> partner;  // required iff factor is linear_coupling
  double dt = 0.0;
  long steps = 1;
  long record_every = 1;
};

struct TrendConfig {
  double price_rate = 0.0;
  std::vector<double> value_rates;
  std::vector<double> volume_rates;
};

struct DecomposeConfig {
  double duration = 1.0;
  double sample_step = 0.1;
  std::vector<double> horizons;
  std::optional<TrendConfig> trend;
};

struct OutputConfig {
  std::string directory = "out";
  std::string format = "csv";
};

struct ScenarioConfig {
  std::optional<espace::EconomicDomain> domain;
  std::optional<espace::GridSpec> grid;
  int types = 1;
  bool allow_unstable = false;
  std::optional<SimulateConfig> simulate;
  std::optional<FieldConfig> field;
  std::optional<dynamics::DisturbanceParams> disturbance;
  std::optional<DecomposeConfig> decompose;
  std::optional<ensemble::EnsembleConfig> ensemble;
  OutputConfig output;

  std::string canonical_text;  // sorted-key dump of the parsed document
  std::uint64_t hash = 0;      // fnv1a64 of canonical_text
};

// Parses and validates; throws IoError when the file cannot be read and
// ConfigError carrying every collected issue (unknown keys are errors).
// allow_unstable_flag ORs with the config's own allow_unstable key before
// the oscillator condition is checked.
ScenarioConfig parse_config(const std::string& path, bool allow_unstable_flag = false);
ScenarioConfig parse_config_text(const std::string& text, bool allow_unstable_flag = false);

}  // namespace riskflow::config

#endif
