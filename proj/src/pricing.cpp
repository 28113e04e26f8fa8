#include "riskflow/pricing.hpp"

#include <cmath>
#include <string>

#include "riskflow/errors.hpp"

namespace riskflow::pricing {

namespace {

constexpr double degeneracy_eps = 1e-9;

void require_nondegenerate(double denom, const char* what) {
  if (std::abs(denom) < degeneracy_eps) {
    throw DegeneracyError(std::string("degenerate denominator in ") + what);
  }
}

void check_series(const Weights& w, const Series& a, const Series& b, std::size_t t) {
  if (static_cast<int>(a.size()) != w.types() || static_cast<int>(b.size()) != w.types()) {
    throw NumericError("series length mismatch: one series per expectation type required");
  }
  for (int k = 0; k < w.types(); ++k) {
    if (a[k].size() != a[0].size() || b[k].size() != a[0].size()) {
      throw NumericError("series length mismatch across types");
    }
  }
  if (w.types() > 0 && t >= a[0].size()) throw NumericError("time index beyond series length");
}

}  // namespace

Weights weights(std::span<const double> mean_volumes, std::span<const double> mean_values) {
  if (mean_volumes.empty() || mean_volumes.size() != mean_values.size()) {
    throw NumericError("weights: need matching non-empty mean volume/value lists");
  }
  Weights w;
  const std::size_t n = mean_volumes.size();
  w.volume_share.resize(n);
  w.value_share.resize(n);
  w.mean_price.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (!(mean_volumes[k] > 0.0) || !(mean_values[k] > 0.0)) {
      throw NumericError("weights: non-positive mean at type " + std::to_string(k));
    }
    w.total_mean_volume += mean_volumes[k];
    w.total_mean_value += mean_values[k];
  }
  for (std::size_t k = 0; k < n; ++k) {
    w.volume_share[k] = mean_volumes[k] / w.total_mean_volume;
    w.value_share[k] = mean_values[k] / w.total_mean_value;
    w.mean_price[k] = mean_values[k] / mean_volumes[k];
  }
  w.base_price = w.total_mean_value / w.total_mean_volume;
  return w;
}

std::size_t series_length(const Series& s) { return s.empty() ? 0 : s[0].size(); }

double composite_disturbance_at(const Weights& w, const Series& value_dist,
                                const Series& volume_dist, std::size_t t) {
  check_series(w, value_dist, volume_dist, t);
  double sum = 0.0;
  for (int k = 0; k < w.types(); ++k) sum += w.value_share[k] * value_dist[k][t];
  for (int k = 0; k < w.types(); ++k) sum -= w.volume_share[k] * volume_dist[k][t];
  return sum;
}

std::vector<double> composite_disturbance(const Weights& w, const Series& value_dist,
                                          const Series& volume_dist) {
  std::vector<double> out(series_length(value_dist));
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = composite_disturbance_at(w, value_dist, volume_dist, t);
  }
  return out;
}

double composite_from_partials_at(const Weights& w, const Series& price_dist,
                                  const Series& volume_dist, std::size_t t) {
  check_series(w, price_dist, volume_dist, t);
  double sum = 0.0;
  for (int k = 0; k < w.types(); ++k) sum += w.value_share[k] * price_dist[k][t];
  for (int k = 0; k < w.types(); ++k) {
    sum += (w.value_share[k] - w.volume_share[k]) * volume_dist[k][t];
  }
  return sum;
}

std::vector<double> composite_from_partials(const Weights& w, const Series& price_dist,
                                            const Series& volume_dist) {
  std::vector<double> out(series_length(price_dist));
  for (std::size_t t = 0; t < out.size(); ++t) {
    out[t] = composite_from_partials_at(w, price_dist, volume_dist, t);
  }
  return out;
}

ExactPrice exact_price(const Series& volumes, const Series& values, double base_price) {
  if (volumes.empty() || volumes.size() != values.size()) {
    throw NumericError("exact_price: need matching non-empty volume/value series");
  }
  const std::size_t nt = volumes[0].size();
  ExactPrice out;
  out.price.resize(nt);
  out.deviation.resize(nt);
  for (std::size_t t = 0; t < nt; ++t) {
    double q = 0.0, sv = 0.0;
    for (std::size_t k = 0; k < volumes.size(); ++k) {
      q += volumes[k][t];
      sv += values[k][t];
    }
    if (!(q > 0.0)) {
      throw NumericError("exact_price: zero total volume at sample " + std::to_string(t));
    }
    out.price[t] = sv / q;
    out.deviation[t] = out.price[t] / base_price - 1.0;
  }
  return out;
}

double relative_change(std::span<const double> series, std::size_t t, std::size_t lag) {
  if (lag == 0 || lag > t) throw NumericError("off-grid horizon: need 0 < lag <= t");
  if (t >= series.size()) throw NumericError("off-grid horizon: t beyond series length");
  const double before = series[t - lag];
  require_nondegenerate(1.0 + before, "relative_change");
  return (series[t] - before) / (1.0 + before);
}

namespace {

// Shared core: the plain decomposition is the trend one at zero rates, which
// keeps the zero-trend reduction bit-exact.
ReturnBreakdown decompose(const Weights& w, double price_rate, const Series& price_dist,
                          const Series& volume_dist, std::size_t t, std::size_t lag,
                          double sample_step) {
  check_series(w, price_dist, volume_dist, t);
  if (lag == 0 || lag > t) throw NumericError("off-grid horizon: need 0 < lag <= t");

  ReturnBreakdown b;
  b.t = t;
  b.lag = lag;
  b.horizon = static_cast<double>(lag) * sample_step;
  b.pi_now = composite_from_partials_at(w, price_dist, volume_dist, t);
  b.pi_then = composite_from_partials_at(w, price_dist, volume_dist, t - lag);

  const double t_then = static_cast<double>(t - lag) * sample_step;
  const double denom = 1.0 + price_rate * t_then + b.pi_then;
  require_nondegenerate(denom, "return decomposition");

  const int K = w.types();
  b.partial_weight.resize(K);
  b.volume_weight.resize(K);
  b.partial_return.resize(K);
  b.volume_return.resize(K);
  for (int k = 0; k < K; ++k) {
    b.partial_weight[k] = w.value_share[k] * (1.0 + price_dist[k][t - lag]) / denom;
    b.volume_weight[k] =
        (w.value_share[k] - w.volume_share[k]) * (1.0 + volume_dist[k][t - lag]) / denom;
    b.partial_return[k] = relative_change(price_dist[k], t, lag);
    b.volume_return[k] = relative_change(volume_dist[k], t, lag);
  }
  for (int k = 0; k < K; ++k) b.partial_component += b.partial_weight[k] * b.partial_return[k];
  for (int k = 0; k < K; ++k) b.volume_component += b.volume_weight[k] * b.volume_return[k];
  b.drift = price_rate * b.horizon / denom;
  b.r = b.drift + b.partial_component + b.volume_component;
  b.r_direct = (price_rate * b.horizon + b.pi_now - b.pi_then) / denom;
  return b;
}

}  // namespace

ReturnBreakdown return_decomposition(const Weights& w, const Series& price_dist,
                                     const Series& volume_dist, std::size_t t, std::size_t lag) {
  return decompose(w, 0.0, price_dist, volume_dist, t, lag, 1.0);
}

ReturnBreakdown trend_return(const Weights& w, const TrendRates& rates, const Series& price_dist,
                             const Series& volume_dist, std::size_t t, std::size_t lag,
                             double sample_step) {
  if (static_cast<int>(rates.value_rate.size()) != w.types() ||
      static_cast<int>(rates.volume_rate.size()) != w.types()) {
    throw NumericError("trend_return: one value/volume rate per type required");
  }
  double composed = 0.0;
  for (int k = 0; k < w.types(); ++k) {
    composed += w.value_share[k] * rates.value_rate[k] - w.volume_share[k] * rates.volume_rate[k];
  }
  if (std::abs(rates.price_rate - composed) > 1e-12) {
    throw NumericError("trend_return: inconsistent trend rates (price rate must equal the "
                       "share-weighted value/volume rates)");
  }
  if (!(sample_step > 0.0)) throw NumericError("trend_return: sample_step must be > 0");
  return decompose(w, rates.price_rate, price_dist, volume_dist, t, lag, sample_step);
}

}  // namespace riskflow::pricing
