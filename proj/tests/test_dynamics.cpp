#include <doctest.h>

#include <cmath>

#include "riskflow/dynamics.hpp"
#include "riskflow/errors.hpp"
#include "riskflow/rng.hpp"

using namespace riskflow;
using namespace riskflow::dynamics;

namespace {

constexpr double two_pi = 6.283185307179586476925287;

DisturbanceParams one_type(double mean, double mean_expected, double response, double feedback,
                           double amp_sin, double amp_cos) {
  OscChannel ch{mean, mean_expected, response, feedback, amp_sin, amp_cos};
  return DisturbanceParams{{TypeParams{ch, ch}}};
}

}  // namespace

TEST_CASE("oscillator frequency from the coupling product") {
  CHECK(oscillator_frequency(1.0, -4.0).rate == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(oscillator_frequency(1.0, -4.0).oscillatory);
  CHECK_THROWS_AS(oscillator_frequency(1.0, 1.0), NumericError);
  CHECK_THROWS_AS(oscillator_frequency(0.0, -1.0), NumericError);  // degenerate zero rate

  const auto unstable = oscillator_frequency(1.0, 4.0, true);
  CHECK(!unstable.oscillatory);
  CHECK(unstable.rate == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("closed form evaluates the harmonic at known phases") {
  // sin amplitude only: q(pi/4) with omega=2 hits the crest.
  auto p = one_type(1.0, 1.0, 1.0, -4.0, 0.01, 0.0);
  auto s = closed_form_disturbance(p, 3.14159265358979323846 / 4.0);
  CHECK(s.volume[0].disturbance == doctest::Approx(0.01).epsilon(1e-12));

  // cos amplitude only at t = 0.
  auto p2 = one_type(1.0, 1.0, 1.0, -9.0, 0.0, 0.01);
  auto s2 = closed_form_disturbance(p2, 0.0);
  CHECK(s2.volume[0].disturbance == doctest::Approx(0.01).epsilon(1e-15));

  // Zero amplitudes stay identically zero.
  auto p3 = one_type(1.0, 1.0, 1.0, -1.0, 0.0, 0.0);
  for (double t : {0.0, 0.3, 1.7, 12.0}) {
    auto s3 = closed_form_disturbance(p3, t);
    CHECK(s3.volume[0].disturbance == 0.0);
    CHECK(s3.volume[0].expected == 0.0);
  }
}

TEST_CASE("closed form satisfies the second-order oscillator equation") {
  const double response = 1.3, feedback = -5.2;
  const double w = std::sqrt(-response * feedback);
  const double amp_sin = 0.04, amp_cos = 0.03;
  auto p = one_type(2.0, 7.0, response, feedback, amp_sin, amp_cos);
  // Independent evaluation of the second time derivative.
  for (int i = 0; i <= 200; ++i) {
    const double t = 0.05 * i;
    const double q = closed_form_disturbance(p, t).volume[0].disturbance;
    const double d2q = -amp_sin * w * w * std::sin(w * t) - amp_cos * w * w * std::cos(w * t);
    const double residual = d2q + w * w * q;
    CHECK(std::abs(residual) <= 1e-12 * w * w * (std::abs(amp_sin) + std::abs(amp_cos)));
  }
}

TEST_CASE("closed form keeps the oscillator energy constant") {
  const double response = 0.7, feedback = -3.1;
  const double w = std::sqrt(-response * feedback);
  auto p = one_type(3.0, 11.0, response, feedback, 0.02, -0.015);
  const double energy0 = w * w * (0.02 * 0.02 + 0.015 * 0.015);
  for (int i = 0; i <= 300; ++i) {
    const double t = 0.04 * i;
    const auto s = closed_form_disturbance(p, t);
    const double q = s.volume[0].disturbance;
    // dq/dt recovered from the coupling relation.
    const double dq = s.volume[0].expected * p.types[0].volume.response *
                      p.types[0].volume.mean_expected / p.types[0].volume.mean;
    const double energy = w * w * q * q + dq * dq;
    CHECK(energy == doctest::Approx(energy0).epsilon(1e-12));
  }
}

TEST_CASE("RK4 tracks the closed form over one period") {
  auto p = one_type(100.0, 10.0, 2.0, -two_pi * two_pi / 2.0, 0.01, 0.004);
  const double w = oscillator_frequency(2.0, -two_pi * two_pi / 2.0).rate;
  CHECK(w == doctest::Approx(two_pi).epsilon(1e-14));
  const double period = two_pi / w;
  const long n = 1000;
  const double dt = period / static_cast<double>(n);

  auto traj = integrate_coupled(p, closed_form_disturbance(p, 0.0), dt, n);
  double max_err = 0.0;
  for (long i = 0; i <= n; ++i) {
    const auto ref = closed_form_disturbance(p, traj[i].t);
    max_err = std::max(max_err, std::abs(traj[i].volume[0].disturbance -
                                         ref.volume[0].disturbance));
  }
  CHECK(max_err <= 1e-9);

  // Energy drift along the numeric trajectory stays tiny.
  const double drive = 2.0 * 10.0 / 100.0;
  double e_first = 0.0, worst_drift = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double q = traj[i].volume[0].disturbance;
    const double dq = drive * traj[i].volume[0].expected;
    const double e = w * w * q * q + dq * dq;
    if (i == 0) {
      e_first = e;
    } else {
      worst_drift = std::max(worst_drift, std::abs(e - e_first) / e_first);
    }
  }
  CHECK(worst_drift <= 1e-8);
}

TEST_CASE("RK4 converges at fourth order") {
  auto p = one_type(50.0, 5.0, 1.0, -two_pi * two_pi, 0.02, 0.0);
  const double w = std::sqrt(two_pi * two_pi);
  const double period = two_pi / w;
  auto max_error = [&](long n) {
    const double dt = period / static_cast<double>(n);
    auto traj = integrate_coupled(p, closed_form_disturbance(p, 0.0), dt, n);
    double err = 0.0;
    for (const auto& s : traj) {
      err = std::max(err, std::abs(s.volume[0].disturbance -
                                   closed_form_disturbance(p, s.t).volume[0].disturbance));
    }
    return err;
  };
  const double e1 = max_error(500);
  const double e2 = max_error(1000);
  const double order = std::log2(e1 / e2);
  CHECK(order >= 3.7);
  CHECK(order <= 4.3);
}

TEST_CASE("zero initial state is an equilibrium of the coupled system") {
  auto p = one_type(10.0, 2.0, 1.5, -2.5, 0.05, 0.01);
  DisturbanceState zero;
  zero.volume.assign(1, {});
  zero.value.assign(1, {});
  auto traj = integrate_coupled(p, zero, 0.01, 200);
  for (const auto& s : traj) {
    CHECK(s.volume[0].disturbance == 0.0);
    CHECK(s.volume[0].expected == 0.0);
    CHECK(s.value[0].disturbance == 0.0);
  }
}

TEST_CASE("types evolve independently: permuting labels permutes trajectories") {
  OscChannel a{10.0, 1.0, 1.0, -4.0, 0.01, 0.02};
  OscChannel b{20.0, 2.0, 2.0, -8.0, 0.03, -0.01};
  DisturbanceParams fwd{{TypeParams{a, a}, TypeParams{b, b}}};
  DisturbanceParams rev{{TypeParams{b, b}, TypeParams{a, a}}};

  auto t_fwd = integrate_coupled(fwd, closed_form_disturbance(fwd, 0.0), 0.01, 100);
  auto t_rev = integrate_coupled(rev, closed_form_disturbance(rev, 0.0), 0.01, 100);
  for (std::size_t i = 0; i < t_fwd.size(); ++i) {
    CHECK(t_fwd[i].volume[0].disturbance == t_rev[i].volume[1].disturbance);
    CHECK(t_fwd[i].volume[1].disturbance == t_rev[i].volume[0].disturbance);
  }
}

TEST_CASE("step-size advisory is enforced") {
  auto p = one_type(1.0, 1.0, 10.0, -10.0, 0.01, 0.0);  // omega = 10
  CHECK_THROWS_AS(integrate_coupled(p, closed_form_disturbance(p, 0.0), 0.06, 10), NumericError);
}

TEST_CASE("linearization advisory warns above the amplitude threshold") {
  auto quiet = one_type(1.0, 1.0, 1.0, -1.0, 0.01, 0.02);
  CHECK(check_linearization(quiet).empty());

  auto loud = one_type(1.0, 1.0, 1.0, -1.0, 0.3, 0.0);
  auto warnings = check_linearization(loud);
  REQUIRE(warnings.size() == 2);  // both channels carry the large amplitude
  CHECK(warnings[0].type == 0);
  CHECK(warnings[0].amplitude == doctest::Approx(0.3));

  auto silent = one_type(1.0, 1.0, 1.0, -1.0, 0.0, 0.0);
  CHECK(check_linearization(silent).empty());
}

TEST_CASE("parameter validation flags the non-oscillatory branch") {
  auto bad = one_type(1.0, 1.0, 1.0, 1.0, 0.0, 0.0);
  auto issues = params_issues(bad, false);
  REQUIRE(!issues.empty());
  CHECK(issues[0].find("non-oscillatory") != std::string::npos);
  CHECK(params_issues(bad, true).empty());

  auto bad_mean = one_type(-1.0, 1.0, 1.0, -1.0, 0.0, 0.0);
  CHECK(!params_issues(bad_mean, false).empty());
}
