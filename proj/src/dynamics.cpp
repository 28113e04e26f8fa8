#include "riskflow/dynamics.hpp"

#include <cmath>

#include "riskflow/errors.hpp"

namespace riskflow::dynamics {

std::vector<std::string> params_issues(const DisturbanceParams& params, bool allow_unstable) {
  std::vector<std::string> issues;
  if (params.types.empty()) issues.push_back("disturbance: need at least one expectation type");
  for (std::size_t k = 0; k < params.types.size(); ++k) {
    auto check = [&](const OscChannel& ch, const char* name) {
      const std::string where = "type " + std::to_string(k) + " " + name;
      if (!(ch.mean > 0.0)) issues.push_back(where + ": mean must be > 0");
      if (ch.mean_expected == 0.0) issues.push_back(where + ": expected mean must be nonzero");
      if (!allow_unstable && !(ch.response * ch.feedback < 0.0)) {
        issues.push_back(where +
                         ": non-oscillatory coupling (response*feedback must be < 0; "
                         "pass allow-unstable to admit it)");
      }
    };
    check(params.types[k].volume, "volume");
    check(params.types[k].value, "value");
  }
  return issues;
}

Frequency oscillator_frequency(double response, double feedback, bool allow_unstable) {
  const double product = response * feedback;
  if (product < 0.0) return Frequency{std::sqrt(-product), true};
  if (!allow_unstable) {
    throw NumericError("non-oscillatory: response*feedback = " + std::to_string(product) +
                       " must be negative");
  }
  return Frequency{std::sqrt(product), false};
}

FrequencyPair oscillator_frequencies(const TypeParams& type, bool allow_unstable) {
  return FrequencyPair{
      oscillator_frequency(type.volume.response, type.volume.feedback, allow_unstable),
      oscillator_frequency(type.value.response, type.value.feedback, allow_unstable)};
}

namespace {

ChannelState closed_form_channel(const OscChannel& ch, double t) {
  const Frequency f = oscillator_frequency(ch.response, ch.feedback);
  const double w = f.rate;
  const double s = std::sin(w * t);
  const double c = std::cos(w * t);
  ChannelState st;
  st.disturbance = ch.amp_sin * s + ch.amp_cos * c;
  const double ddt = w * (ch.amp_sin * c - ch.amp_cos * s);
  st.expected = ch.mean / (ch.response * ch.mean_expected) * ddt;
  return st;
}

}  // namespace

DisturbanceState closed_form_disturbance(const DisturbanceParams& params, double t) {
  DisturbanceState st;
  st.t = t;
  st.volume.reserve(params.types.size());
  st.value.reserve(params.types.size());
  for (const auto& type : params.types) {
    st.volume.push_back(closed_form_channel(type.volume, t));
    st.value.push_back(closed_form_channel(type.value, t));
  }
  return st;
}

namespace {

// RK4 on one channel pair; rates are composed once outside the stage loop.
ChannelState rk4_channel(const OscChannel& ch, const ChannelState& s, double dt) {
  const double drive = ch.response * (ch.mean_expected / ch.mean);
  const double feed = ch.feedback * (ch.mean / ch.mean_expected);

  auto dq = [&](const ChannelState& u) { return drive * u.expected; };
  auto de = [&](const ChannelState& u) { return feed * u.disturbance; };

  const ChannelState k1{dq(s), de(s)};
  const ChannelState s2{s.disturbance + 0.5 * dt * k1.disturbance,
                        s.expected + 0.5 * dt * k1.expected};
  const ChannelState k2{dq(s2), de(s2)};
  const ChannelState s3{s.disturbance + 0.5 * dt * k2.disturbance,
                        s.expected + 0.5 * dt * k2.expected};
  const ChannelState k3{dq(s3), de(s3)};
  const ChannelState s4{s.disturbance + dt * k3.disturbance, s.expected + dt * k3.expected};
  const ChannelState k4{dq(s4), de(s4)};

  return ChannelState{
      s.disturbance + dt / 6.0 *
                          (k1.disturbance + 2.0 * k2.disturbance + 2.0 * k3.disturbance +
                           k4.disturbance),
      s.expected + dt / 6.0 * (k1.expected + 2.0 * k2.expected + 2.0 * k3.expected + k4.expected)};
}

}  // namespace

std::vector<DisturbanceState> integrate_coupled(const DisturbanceParams& params,
                                                const DisturbanceState& initial, double dt,
                                                long steps) {
  if (!(dt > 0.0)) throw NumericError("integrate_coupled: dt must be > 0");
  if (initial.volume.size() != params.types.size() ||
      initial.value.size() != params.types.size()) {
    throw NumericError("integrate_coupled: state does not match the type count");
  }
  // Accuracy advisory dt*w < 0.5 for every frequency.
  for (const auto& type : params.types) {
    const FrequencyPair f = oscillator_frequencies(type, true);
    if (dt * f.volume.rate >= 0.5 || dt * f.value.rate >= 0.5) {
      throw NumericError("integrate_coupled: step-size advisory violated (dt*omega >= 0.5)");
    }
  }

  std::vector<DisturbanceState> trajectory;
  trajectory.reserve(steps + 1);
  trajectory.push_back(initial);
  DisturbanceState s = initial;
  for (long n = 0; n < steps; ++n) {
    for (std::size_t k = 0; k < params.types.size(); ++k) {
      s.volume[k] = rk4_channel(params.types[k].volume, s.volume[k], dt);
      s.value[k] = rk4_channel(params.types[k].value, s.value[k], dt);
    }
    s.t = initial.t + dt * static_cast<double>(n + 1);
    trajectory.push_back(s);
  }
  return trajectory;
}

std::vector<LinearizationWarning> check_linearization(const DisturbanceParams& params) {
  std::vector<LinearizationWarning> warnings;
  for (std::size_t k = 0; k < params.types.size(); ++k) {
    auto scan = [&](const OscChannel& ch, const char* name) {
      const double amp = std::abs(ch.amp_sin) + std::abs(ch.amp_cos);
      if (amp >= 0.1) warnings.push_back({static_cast<int>(k), name, amp});
    };
    scan(params.types[k].volume, "volume");
    scan(params.types[k].value, "value");
  }
  return warnings;
}

}  // namespace riskflow::dynamics
