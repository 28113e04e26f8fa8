#ifndef RISKFLOW_DYNAMICS_HPP
#define RISKFLOW_DYNAMICS_HPP

#include <string>
#include <vector>

namespace riskflow::dynamics {

// One transaction channel (trade volume or trade value) coupled to its
// expectation channel. `response` drives the transaction disturbance from
// the expectation disturbance; `feedback` drives the expectation disturbance
// from the transaction disturbance. Oscillatory when response*feedback < 0.
struct OscChannel {
  double mean = 1.0;           // slow mean of the transaction component
  double mean_expected = 1.0;  // slow mean of the expected-transaction component
  double response = 1.0;
  double feedback = -1.0;
  double amp_sin = 0.0;  // sine amplitude of the closed-form disturbance
  double amp_cos = 0.0;  // cosine amplitude
};

struct TypeParams {
  OscChannel volume;
  OscChannel value;
};

struct DisturbanceParams {
  std::vector<TypeParams> types;
};

// Empty result means valid (means positive, expected means nonzero).
std::vector<std::string> params_issues(const DisturbanceParams& params, bool allow_unstable);

struct Frequency {
  double rate = 0.0;        // radians per time if oscillatory, e-folding rate otherwise
  bool oscillatory = true;  // false only reachable with allow_unstable
};

// sqrt(-response*feedback) when the product is negative. A nonnegative
// product is an error unless allow_unstable, which returns the exponential
// rate sqrt(response*feedback) flagged non-oscillatory.
Frequency oscillator_frequency(double response, double feedback, bool allow_unstable = false);

struct FrequencyPair {
  Frequency volume;
  Frequency value;
};
FrequencyPair oscillator_frequencies(const TypeParams& type, bool allow_unstable = false);

// Dimensionless disturbance of a transaction channel and of its expected
// counterpart at one instant.
struct ChannelState {
  double disturbance = 0.0;
  double expected = 0.0;
};

struct DisturbanceState {
  double t = 0.0;
  std::vector<ChannelState> volume;  // per type
  std::vector<ChannelState> value;
};

// Harmonic solution: disturbance = amp_sin*sin(w t) + amp_cos*cos(w t); the
// expected disturbance follows from the first-order coupling,
// expected = mean/(response*mean_expected) * d(disturbance)/dt.
DisturbanceState closed_form_disturbance(const DisturbanceParams& params, double t);

// Classical RK4 on the first-order system
//   d(disturbance)/dt = response * (mean_expected/mean) * expected
//   d(expected)/dt    = feedback * (mean/mean_expected) * disturbance
// Trajectory holds steps+1 states including the initial one.
std::vector<DisturbanceState> integrate_coupled(const DisturbanceParams& params,
                                                const DisturbanceState& initial, double dt,
                                                long steps);

struct LinearizationWarning {
  int type = 0;
  std::string channel;     // "volume" or "value"
  double amplitude = 0.0;  // |amp_sin| + |amp_cos|
};

// Warns where |amp_sin| + |amp_cos| >= 0.1; never an error.
std::vector<LinearizationWarning> check_linearization(const DisturbanceParams& params);

}  // namespace riskflow::dynamics

#endif
