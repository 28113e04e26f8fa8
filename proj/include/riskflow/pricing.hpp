#ifndef RISKFLOW_PRICING_HPP
#define RISKFLOW_PRICING_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace riskflow::pricing {

// Mixing weights from the per-type mean trade volumes and values.
// volume_share is the volume weight (sums to 1), value_share the value
// weight (sums to 1); mean_price[k] = mean_value[k]/mean_volume[k].
struct Weights {
  std::vector<double> volume_share;  // per type
  std::vector<double> value_share;   // per type
  std::vector<double> mean_price;    // per type
  double base_price = 0.0;           // total mean value / total mean volume
  double total_mean_volume = 0.0;
  double total_mean_value = 0.0;

  int types() const { return static_cast<int>(volume_share.size()); }
};

// Throws NumericError on an empty list or a non-positive mean.
Weights weights(std::span<const double> mean_volumes, std::span<const double> mean_values);

// Per-type time series indexed [type][time]; all types equal length.
using Series = std::vector<std::vector<double>>;

std::size_t series_length(const Series& s);

// Composite price disturbance from value and volume disturbances:
// sum(value_share*value_dist) - sum(volume_share*volume_dist), pointwise.
double composite_disturbance_at(const Weights& w, const Series& value_dist,
                                const Series& volume_dist, std::size_t t);
std::vector<double> composite_disturbance(const Weights& w, const Series& value_dist,
                                          const Series& volume_dist);

// Same composite written on partial price and volume disturbances:
// sum(value_share*price_dist) + sum((value_share - volume_share)*volume_dist).
// This form is the defining one for the return decomposition.
double composite_from_partials_at(const Weights& w, const Series& price_dist,
                                  const Series& volume_dist, std::size_t t);
std::vector<double> composite_from_partials(const Weights& w, const Series& price_dist,
                                            const Series& volume_dist);

// Nonlinear oracle: p(t) = sum_k value_k(t) / sum_k volume_k(t) on absolute
// series, and its exact relative deviation p(t)/base_price - 1.
struct ExactPrice {
  std::vector<double> price;
  std::vector<double> deviation;
};
ExactPrice exact_price(const Series& volumes, const Series& values, double base_price);

// (series[t] - series[t-lag]) / (1 + series[t-lag]); shared by partial
// returns on price disturbances and volume "returns" on volume disturbances.
double relative_change(std::span<const double> series, std::size_t t, std::size_t lag);

// Mean-price trend rates for the linear-trend variant. alpha must equal
// sum(value_share*value_rate - volume_share*volume_rate) to 1e-12.
struct TrendRates {
  double price_rate = 0.0;                // drift of the composite price
  std::vector<double> value_rate;         // per type
  std::vector<double> volume_rate;        // per type
};

struct ReturnBreakdown {
  std::size_t t = 0;      // sample index of the later time
  std::size_t lag = 0;    // horizon in samples
  double horizon = 0.0;   // lag * sample_step
  double r = 0.0;         // drift + weighted partial returns + weighted volume returns
  double r_direct = 0.0;  // straight ratio on the composite disturbance
  double drift = 0.0;     // trend drift term, zero without a trend
  double partial_component = 0.0;  // sum(partial_weight * partial_return)
  double volume_component = 0.0;   // sum(volume_weight * volume_return)
  std::vector<double> partial_weight;  // per type, with the volume weights sums to 1
  std::vector<double> volume_weight;
  std::vector<double> partial_return;
  std::vector<double> volume_return;
  double pi_now = 0.0;   // composite disturbance at t
  double pi_then = 0.0;  // composite disturbance at t - lag
};

// Exact decomposition of the return over `lag` samples into per-type partial
// returns and volume returns. r and r_direct agree to rounding by
// construction. Throws NumericError for off-grid horizons and denominators
// within 1e-9 of zero.
ReturnBreakdown return_decomposition(const Weights& w, const Series& price_dist,
                                     const Series& volume_dist, std::size_t t, std::size_t lag);

// Linear-trend variant; time enters through sample_step. With all rates zero
// this reduces bit-for-bit to return_decomposition.
ReturnBreakdown trend_return(const Weights& w, const TrendRates& rates, const Series& price_dist,
                             const Series& volume_dist, std::size_t t, std::size_t lag,
                             double sample_step);

}  // namespace riskflow::pricing

#endif
