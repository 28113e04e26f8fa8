#include "riskflow/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

#include "riskflow/csv.hpp"
#include "riskflow/errors.hpp"

namespace riskflow::ensemble {

double SamplerSpec::sample(Rng& rng) const {
  switch (kind) {
    case Kind::point:
      return a;
    case Kind::uniform:
      return rng.uniform(a, b);
    case Kind::normal:
      return rng.normal(a, b);
  }
  return a;
}

double SamplerSpec::support_min() const {
  switch (kind) {
    case Kind::point:
      return a;
    case Kind::uniform:
      return a;
    case Kind::normal:
      return -std::numeric_limits<double>::infinity();
  }
  return a;
}

double SamplerSpec::support_max() const {
  switch (kind) {
    case Kind::point:
      return a;
    case Kind::uniform:
      return b;
    case Kind::normal:
      return std::numeric_limits<double>::infinity();
  }
  return a;
}

std::vector<std::string> SamplerSpec::issues(const std::string& name) const {
  std::vector<std::string> out;
  if (kind == Kind::uniform && !(a <= b)) {
    out.push_back(name + ": uniform sampler needs lower <= upper");
  }
  if (kind == Kind::normal && !(b >= 0.0)) {
    out.push_back(name + ": normal sampler needs stddev >= 0");
  }
  return out;
}

int EnsembleConfig::samples() const {
  return static_cast<int>(std::llround(duration / sample_step)) + 1;
}

std::vector<std::size_t> EnsembleConfig::horizon_lags() const {
  std::vector<std::size_t> lags;
  lags.reserve(horizons.size());
  for (double d : horizons) lags.push_back(static_cast<std::size_t>(std::llround(d / sample_step)));
  return lags;
}

std::vector<std::string> config_issues(const EnsembleConfig& c) {
  std::vector<std::string> issues;
  if (c.runs < 1) issues.push_back("ensemble: runs must be >= 1");
  if (c.types < 1) issues.push_back("ensemble: types must be >= 1");
  if (!(c.duration > 0.0)) issues.push_back("ensemble: duration must be > 0");
  if (!(c.sample_step > 0.0)) issues.push_back("ensemble: sample_step must be > 0");

  auto positive_support = [&](const SamplerSpec& s, const std::string& name) {
    auto base = s.issues(name);
    issues.insert(issues.end(), base.begin(), base.end());
    if (!(s.support_min() > 0.0)) {
      issues.push_back(name + ": sampler support must be strictly positive " +
                       "(normal samplers are not admissible here)");
    }
  };
  positive_support(c.mean_volume, "ensemble.mean_volume");
  if (c.equal_price_factor && c.mean_value) {
    issues.push_back("ensemble: give either mean_value or equal_price_factor, not both");
  } else if (c.equal_price_factor) {
    if (!(*c.equal_price_factor > 0.0)) {
      issues.push_back("ensemble.equal_price_factor: must be > 0");
    }
  } else if (c.mean_value) {
    positive_support(*c.mean_value, "ensemble.mean_value");
  } else {
    issues.push_back("ensemble: one of mean_value or equal_price_factor is required");
  }
  positive_support(c.frequency_volume, "ensemble.frequency_volume");
  positive_support(c.frequency_value, "ensemble.frequency_value");

  auto amplitude_check = [&](const SamplerSpec& s, const std::string& name) {
    auto base = s.issues(name);
    issues.insert(issues.end(), base.begin(), base.end());
    if (c.allow_large_amplitudes) return;
    const double extreme =
        std::max(std::abs(s.support_min()), std::abs(s.support_max()));
    // amp*sin + amp*cos split: |sin part| + |cos part| <= sqrt(2)*amplitude.
    if (!(extreme * std::sqrt(2.0) < 0.1)) {
      issues.push_back(name + ": amplitude support exceeds the linearization advisory " +
                       "(|amplitude|*sqrt(2) must stay below 0.1; set allow_large_amplitudes " +
                       "to override)");
    }
  };
  amplitude_check(c.amplitude_volume, "ensemble.amplitude_volume");
  amplitude_check(c.amplitude_value, "ensemble.amplitude_value");

  for (auto s : {&c.phase_volume, &c.phase_value}) {
    auto base = s->issues("ensemble.phase");
    issues.insert(issues.end(), base.begin(), base.end());
  }

  if (c.horizons.empty()) {
    issues.push_back("ensemble: at least one return horizon is required");
  }
  if (c.duration > 0.0 && c.sample_step > 0.0) {
    const int nt = c.samples();
    for (double d : c.horizons) {
      const double ratio = d / c.sample_step;
      const double rounded = std::round(ratio);
      if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        issues.push_back("ensemble: horizon " + format_double(d) +
                         " is not a positive integer multiple of sample_step");
      } else if (static_cast<int>(rounded) > nt - 1) {
        issues.push_back("ensemble: horizon " + format_double(d) + " exceeds the duration");
      }
    }
  }
  if (c.histogram_bins < 0) issues.push_back("ensemble: histogram_bins must be >= 0");
  return issues;
}

ScenarioSample sample_scenario(Rng& rng, const EnsembleConfig& config) {
  ScenarioSample out;
  std::vector<double> mean_volumes(config.types), mean_values(config.types);
  out.params.types.resize(config.types);
  for (int k = 0; k < config.types; ++k) {
    const double q0 = config.mean_volume.sample(rng);
    const double sv0 = config.equal_price_factor ? *config.equal_price_factor * q0
                                                 : config.mean_value->sample(rng);
    if (!(q0 > 0.0) || !(sv0 > 0.0)) {
      throw ConfigError("ensemble: sampled non-positive mean at type " + std::to_string(k));
    }
    mean_volumes[k] = q0;
    mean_values[k] = sv0;

    auto draw_channel = [&](const SamplerSpec& freq, const SamplerSpec& amp,
                            const SamplerSpec& phase, double mean) {
      dynamics::OscChannel ch;
      ch.mean = mean;
      ch.mean_expected = 1.0;
      const double w = freq.sample(rng);
      ch.response = w;
      ch.feedback = -w;
      const double amplitude = amp.sample(rng);
      const double ph = phase.sample(rng);
      ch.amp_sin = amplitude * std::cos(ph);
      ch.amp_cos = amplitude * std::sin(ph);
      return ch;
    };
    out.params.types[k].volume =
        draw_channel(config.frequency_volume, config.amplitude_volume, config.phase_volume, q0);
    out.params.types[k].value =
        draw_channel(config.frequency_value, config.amplitude_value, config.phase_value, sv0);
  }
  out.weights = pricing::weights(mean_volumes, mean_values);
  return out;
}

MomentSet moments(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw NumericError("insufficient samples: moments need at least 2");
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double mean = sum / static_cast<double>(n);
  double s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (double x : samples) {
    const double d = x - mean;
    const double d2 = d * d;
    s2 += d2;
    s3 += d2 * d;
    s4 += d2 * d2;
  }
  MomentSet m;
  m.mean = mean;
  m.variance = s2 / static_cast<double>(n - 1);
  const double m2 = s2 / static_cast<double>(n);
  if (m2 > 0.0) {
    if (n >= 3) m.skewness = (s3 / static_cast<double>(n)) / std::pow(m2, 1.5);
    if (n >= 4) m.excess_kurtosis = (s4 / static_cast<double>(n)) / (m2 * m2) - 3.0;
  }
  return m;
}

Histogram histogram(std::span<const double> samples, int bins) {
  Histogram h;
  if (samples.empty()) {
    h.edges = {0.0, 1.0};
    h.counts = {0};
    return h;
  }
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const std::size_t n = sorted.size();

  if (bins <= 0) {
    auto quantile = [&](double q) {
      const double pos = q * static_cast<double>(n - 1);
      const std::size_t i = static_cast<std::size_t>(pos);
      const double frac = pos - static_cast<double>(i);
      return i + 1 < n ? sorted[i] * (1.0 - frac) + sorted[i + 1] * frac : sorted[i];
    };
    const double iqr = quantile(0.75) - quantile(0.25);
    const double width = 2.0 * iqr / std::cbrt(static_cast<double>(n));
    if (width > 0.0 && hi > lo) {
      bins = static_cast<int>(std::ceil((hi - lo) / width));
    } else if (hi > lo) {
      bins = static_cast<int>(std::ceil(std::log2(static_cast<double>(n)))) + 1;  // Sturges
    } else {
      bins = 1;
    }
    bins = std::clamp(bins, 1, 10000);
  }

  h.edges.resize(bins + 1);
  const double span = hi - lo;
  for (int i = 0; i <= bins; ++i) {
    h.edges[i] = lo + span * static_cast<double>(i) / static_cast<double>(bins);
  }
  h.edges.back() = hi;
  h.counts.assign(bins, 0);
  for (double x : sorted) {
    int b = span > 0.0 ? static_cast<int>((x - lo) / span * static_cast<double>(bins)) : 0;
    b = std::clamp(b, 0, bins - 1);
    ++h.counts[b];
  }
  return h;
}

namespace {

struct RunSamples {
  bool excluded = false;
  std::vector<double> pi;
  std::vector<std::vector<double>> r;        // per horizon
  std::vector<std::vector<double>> partial;  // per horizon
  std::vector<std::vector<double>> volume;   // per horizon
};

RunSamples run_one(const EnsembleConfig& config, long run_index) {
  RunSamples out;
  Rng rng(substream_seed(config.seed, static_cast<std::uint64_t>(run_index)));
  const ScenarioSample scenario = sample_scenario(rng, config);
  const int nt = config.samples();
  const int K = config.types;

  pricing::Series volume_dist(K, std::vector<double>(nt));
  pricing::Series value_dist(K, std::vector<double>(nt));
  for (int j = 0; j < nt; ++j) {
    const double t = config.sample_step * static_cast<double>(j);
    const auto state = dynamics::closed_form_disturbance(scenario.params, t);
    for (int k = 0; k < K; ++k) {
      volume_dist[k][j] = state.volume[k].disturbance;
      value_dist[k][j] = state.value[k].disturbance;
    }
  }
  // Partial price disturbances from the linear split value = price + volume.
  pricing::Series price_dist(K, std::vector<double>(nt));
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < nt; ++j) price_dist[k][j] = value_dist[k][j] - volume_dist[k][j];
  }

  const auto lags = config.horizon_lags();
  out.r.resize(lags.size());
  out.partial.resize(lags.size());
  out.volume.resize(lags.size());
  try {
    out.pi = pricing::composite_from_partials(scenario.weights, price_dist, volume_dist);
    for (std::size_t h = 0; h < lags.size(); ++h) {
      const std::size_t lag = lags[h];
      out.r[h].reserve(nt - lag);
      out.partial[h].reserve(nt - lag);
      out.volume[h].reserve(nt - lag);
      for (std::size_t t = lag; t < static_cast<std::size_t>(nt); ++t) {
        const auto b =
            pricing::return_decomposition(scenario.weights, price_dist, volume_dist, t, lag);
        // In the advisory amplitude regime |r| < 1, so this is an absolute
        // 1e-12 bound; near-degenerate overrides scale it with the value.
        if (std::abs(b.r_direct - b.r) > 1e-12 * std::max(1.0, std::abs(b.r_direct))) {
          throw NumericError("ensemble: decomposition audit failed at run " +
                             std::to_string(run_index));
        }
        out.r[h].push_back(b.r);
        out.partial[h].push_back(b.partial_component);
        out.volume[h].push_back(b.volume_component);
      }
    }
  } catch (const DegeneracyError&) {
    out = RunSamples{};
    out.excluded = true;
  }
  return out;
}

ObservableReport make_report(std::string name, std::vector<double>&& samples, int bins) {
  ObservableReport rep;
  rep.name = std::move(name);
  rep.count = static_cast<long long>(samples.size());
  rep.moments = moments(samples);
  rep.min = *std::min_element(samples.begin(), samples.end());
  rep.max = *std::max_element(samples.begin(), samples.end());
  rep.histogram = histogram(samples, bins);
  return rep;
}

}  // namespace

DistributionReport run_ensemble(const EnsembleConfig& config) {
  {
    auto issues = config_issues(config);
    if (!issues.empty()) throw ConfigError(issues);
  }

  const auto lags = config.horizon_lags();
  std::vector<double> pi_samples;
  std::vector<std::vector<double>> r_samples(lags.size());
  std::vector<std::vector<double>> partial_samples(lags.size());
  std::vector<std::vector<double>> volume_samples(lags.size());
  long long excluded = 0;

  std::string worker_error;
  const long chunk = 512;
  std::vector<RunSamples> slot(static_cast<std::size_t>(std::min(chunk, config.runs)));
  for (long start = 0; start < config.runs; start += chunk) {
    const long end = std::min(config.runs, start + chunk);

#pragma omp parallel for schedule(dynamic, 1)
    for (long r = start; r < end; ++r) {
      try {
        slot[r - start] = run_one(config, r);
      } catch (const std::exception& e) {
#pragma omp critical
        if (worker_error.empty()) worker_error = e.what();
      }
    }
    if (!worker_error.empty()) throw NumericError(worker_error);

    // Merge in run-index order: reports are independent of thread count.
    for (long r = start; r < end; ++r) {
      RunSamples& s = slot[r - start];
      if (s.excluded) {
        ++excluded;
        continue;
      }
      pi_samples.insert(pi_samples.end(), s.pi.begin(), s.pi.end());
      for (std::size_t h = 0; h < lags.size(); ++h) {
        r_samples[h].insert(r_samples[h].end(), s.r[h].begin(), s.r[h].end());
        partial_samples[h].insert(partial_samples[h].end(), s.partial[h].begin(),
                                  s.partial[h].end());
        volume_samples[h].insert(volume_samples[h].end(), s.volume[h].begin(), s.volume[h].end());
      }
      s = RunSamples{};
    }
  }

  if (pi_samples.size() < 2) {
    throw NumericError("ensemble: too few surviving runs to report statistics");
  }

  DistributionReport report;
  report.runs = config.runs;
  report.excluded_runs = excluded;
  report.seed = config.seed;
  report.observables.push_back(make_report("pi", std::move(pi_samples), config.histogram_bins));
  for (std::size_t h = 0; h < lags.size(); ++h) {
    const std::string d = format_double(config.horizons[h]);
    report.observables.push_back(
        make_report("r[d=" + d + "]", std::move(r_samples[h]), config.histogram_bins));
    report.observables.push_back(make_report("r_partial[d=" + d + "]",
                                             std::move(partial_samples[h]),
                                             config.histogram_bins));
    report.observables.push_back(make_report("r_volume[d=" + d + "]", std::move(volume_samples[h]),
                                             config.histogram_bins));
  }
  return report;
}

namespace {

nlohmann::json moments_json(const MomentSet& m) {
  nlohmann::json j;
  j["mean"] = m.mean;
  j["variance"] = m.variance;
  if (m.skewness) {
    j["skewness"] = *m.skewness;
  } else {
    j["skewness"] = nullptr;
  }
  if (m.excess_kurtosis) {
    j["excess_kurtosis"] = *m.excess_kurtosis;
  } else {
    j["excess_kurtosis"] = nullptr;
  }
  return j;
}

}  // namespace

std::string report_json(const DistributionReport& report, const std::string& config_hash_hex) {
  nlohmann::json j;
  j["meta"]["config_hash"] = config_hash_hex;
  j["meta"]["seed"] = report.seed;
  j["meta"]["runs"] = report.runs;
  j["meta"]["excluded_runs"] = report.excluded_runs;
  j["meta"]["moment_formulas"] =
      "mean = sum(x)/n; variance = sum((x-mean)^2)/(n-1); "
      "skewness = m3/m2^(3/2); excess_kurtosis = m4/m2^2 - 3 with central moments "
      "m_j = sum((x-mean)^j)/n";
  j["observables"] = nlohmann::json::array();
  for (const auto& obs : report.observables) {
    nlohmann::json o;
    o["name"] = obs.name;
    o["count"] = obs.count;
    o["moments"] = moments_json(obs.moments);
    o["min"] = obs.min;
    o["max"] = obs.max;
    o["histogram"]["edges"] = obs.histogram.edges;
    o["histogram"]["counts"] = obs.histogram.counts;
    j["observables"].push_back(std::move(o));
  }
  return j.dump(2) + "\n";
}

void write_histogram_csv(const ObservableReport& obs, std::ostream& os,
                         const std::vector<std::string>& header_comments) {
  CsvWriter w(os);
  for (const auto& c : header_comments) w.comment(c);
  w.row({"bin_left", "bin_right", "count"});
  for (std::size_t i = 0; i < obs.histogram.counts.size(); ++i) {
    w.row({CsvWriter::cell(obs.histogram.edges[i]), CsvWriter::cell(obs.histogram.edges[i + 1]),
           CsvWriter::cell(static_cast<std::int64_t>(obs.histogram.counts[i]))});
  }
}

}  // namespace riskflow::ensemble
