#ifndef RISKFLOW_ENSEMBLE_HPP
#define RISKFLOW_ENSEMBLE_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "riskflow/dynamics.hpp"
#include "riskflow/pricing.hpp"
#include "riskflow/rng.hpp"

namespace riskflow::ensemble {

struct SamplerSpec {
  enum class Kind { point, uniform, normal };
  Kind kind = Kind::point;
  double a = 0.0;  // point value / uniform lower / normal mean
  double b = 0.0;  // uniform upper / normal stddev

  double sample(Rng& rng) const;
  double support_min() const;  // -inf for normal
  double support_max() const;
  std::vector<std::string> issues(const std::string& name) const;
};

struct EnsembleConfig {
  long runs = 1;
  std::uint64_t seed = 0;
  int types = 1;

  SamplerSpec mean_volume;
  std::optional<SamplerSpec> mean_value;      // exclusive with equal_price_factor
  std::optional<double> equal_price_factor;   // mean value = factor * mean volume

  SamplerSpec frequency_volume;
  SamplerSpec frequency_value;
  SamplerSpec amplitude_volume;
  SamplerSpec amplitude_value;
  SamplerSpec phase_volume;
  SamplerSpec phase_value;
  bool allow_large_amplitudes = false;

  double duration = 1.0;
  double sample_step = 0.1;
  std::vector<double> horizons;  // each a positive integer multiple of sample_step

  int histogram_bins = 0;  // 0 = Freedman-Diaconis

  int samples() const;                          // per-run sample count (duration grid + 1)
  std::vector<std::size_t> horizon_lags() const;  // horizons in sample steps
};

// Empty result means valid.
std::vector<std::string> config_issues(const EnsembleConfig& config);

// One full oscillator parameter set plus mixing weights, drawn from the
// samplers in a fixed order; advances rng deterministically.
struct ScenarioSample {
  dynamics::DisturbanceParams params;
  pricing::Weights weights;
};
ScenarioSample sample_scenario(Rng& rng, const EnsembleConfig& config);

struct MomentSet {
  double mean = 0.0;
  double variance = 0.0;  // unbiased, divisor n-1
  std::optional<double> skewness;         // m3 / m2^(3/2), central moments over n
  std::optional<double> excess_kurtosis;  // m4 / m2^2 - 3
};

// Throws NumericError("insufficient samples") when fewer than two samples.
// Skewness needs n >= 3 and kurtosis n >= 4; both are undefined when the
// samples are constant.
MomentSet moments(std::span<const double> samples);

struct Histogram {
  std::vector<double> edges;        // bins + 1 ascending edges
  std::vector<long long> counts;    // sums to the sample count
};

// bins = 0 selects Freedman-Diaconis width 2*IQR/cbrt(n).
Histogram histogram(std::span<const double> samples, int bins = 0);

struct ObservableReport {
  std::string name;
  long long count = 0;
  MomentSet moments;
  double min = 0.0;
  double max = 0.0;
  Histogram histogram;
};

struct DistributionReport {
  long long runs = 0;
  long long excluded_runs = 0;  // degeneracy errors, counted and skipped
  std::uint64_t seed = 0;
  std::vector<ObservableReport> observables;
};

// Monte Carlo over independent per-run substreams; merge order is fixed by
// run index so the report is identical for any thread count.
DistributionReport run_ensemble(const EnsembleConfig& config);

// Deterministic serialization; the moment formulas are documented in the
// header block so every report is self-describing.
std::string report_json(const DistributionReport& report, const std::string& config_hash_hex);

void write_histogram_csv(const ObservableReport& obs, std::ostream& os,
                         const std::vector<std::string>& header_comments);

}  // namespace riskflow::ensemble

#endif
