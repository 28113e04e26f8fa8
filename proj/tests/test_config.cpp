#include <doctest.h>

#include <string>

#include "riskflow/config.hpp"
#include "riskflow/errors.hpp"

using namespace riskflow;
using namespace riskflow::config;

namespace {

const char* minimal_oscillator = R"({
  "types": 1,
  "disturbance": {
    "types": [
      {"volume": {"mean": 100.0, "mean_expected": 10.0, "response": 1.0, "feedback": -4.0,
                  "amp_sin": 0.01, "amp_cos": 0.0},
       "value": {"mean": 300.0, "mean_expected": 30.0, "response": 1.0, "feedback": -9.0,
                 "amp_sin": 0.02, "amp_cos": 0.0}}
    ]
  },
  "decompose": {"duration": 2.0, "sample_step": 0.1, "horizons": [0.5]}
})";

std::string error_text(const std::string& text, bool allow_unstable = false) {
  try {
    parse_config_text(text, allow_unstable);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("a minimal single-type oscillator config parses") {
  const auto cfg = parse_config_text(minimal_oscillator);
  CHECK(cfg.types == 1);
  REQUIRE(cfg.disturbance.has_value());
  CHECK(cfg.disturbance->types[0].volume.mean == 100.0);
  REQUIRE(cfg.decompose.has_value());
  CHECK(cfg.decompose->horizons == std::vector<double>{0.5});
  CHECK(cfg.hash != 0);
}

TEST_CASE("the config hash ignores formatting but tracks content") {
  const auto a = parse_config_text(minimal_oscillator);
  std::string reformatted(minimal_oscillator);
  reformatted.insert(1, "\n\n    ");
  const auto b = parse_config_text(reformatted);
  CHECK(a.hash == b.hash);

  std::string changed(minimal_oscillator);
  changed.replace(changed.find("100.0"), 5, "101.0");
  const auto c = parse_config_text(changed);
  CHECK(a.hash != c.hash);
}

TEST_CASE("non-oscillatory coupling is rejected unless the flag admits it") {
  std::string text(minimal_oscillator);
  text.replace(text.find("-4.0"), 4, "4.0");
  const auto msg = error_text(text);
  CHECK(msg.find("non-oscillatory") != std::string::npos);
  CHECK(msg.find("response*feedback") != std::string::npos);
  CHECK_NOTHROW(parse_config_text(text, true));

  // The config file itself can also opt in.
  std::string opted = "{\"allow_unstable\": true," + text.substr(1);
  CHECK_NOTHROW(parse_config_text(opted));
}

TEST_CASE("unknown keys are errors naming the path") {
  std::string text(minimal_oscillator);
  text.replace(text.find("\"sample_step\""), 13, "\"sample_stepp\"");
  const auto msg = error_text(text);
  CHECK(msg.find("config.decompose.sample_stepp") != std::string::npos);
  CHECK(msg.find("unknown key") != std::string::npos);
  // The dropped required key is reported in the same pass.
  CHECK(msg.find("config.decompose.sample_step:") != std::string::npos);
}

TEST_CASE("all validation errors are collected, not only the first") {
  const char* broken = R"({
    "types": 0,
    "domain": {"dimension": 4, "bounds": [1, 1, 1, 1]},
    "grid": {"cells": [10, 10, 10, 10]},
    "output": {"format": "xml"}
  })";
  const auto msg = error_text(broken);
  CHECK(msg.find("config.types") != std::string::npos);
  CHECK(msg.find("dimension-out-of-range") != std::string::npos);
  CHECK(msg.find("config.output.format") != std::string::npos);
}

TEST_CASE("malformed documents and missing files map to distinct errors") {
  CHECK_THROWS_AS(parse_config_text("{ not json"), ConfigError);
  CHECK(error_text("{ not json").find("malformed document") != std::string::npos);
  CHECK_THROWS_AS(parse_config("/nonexistent/path.json"), IoError);
}

TEST_CASE("simulate section validates agents against the domain") {
  const char* sim = R"({
    "types": 1,
    "domain": {"dimension": 1, "bounds": [1.0]},
    "grid": {"cells": [10]},
    "simulate": {
      "window": {"span": 0.2, "sample_step": 0.1},
      "windows": 2,
      "agents": [
        {"id": 0, "x": [1.5], "v": [0.0],
         "trades": [{"volume": 1.0, "value": 2.0}],
         "expectations": [{"volume": 1.0, "value": 1.0}]}
      ]
    }
  })";
  const auto msg = error_text(sim);
  CHECK(msg.find("coordinate outside domain") != std::string::npos);

  std::string ok(sim);
  ok.replace(ok.find("1.5"), 3, "0.5");
  CHECK_NOTHROW(parse_config_text(ok));

  std::string bad_window(ok);
  bad_window.replace(bad_window.find("0.2"), 3, "0.25");
  CHECK(error_text(bad_window).find("integer multiple") != std::string::npos);

  std::string negative(ok);
  negative.replace(negative.find("\"volume\": 1.0"), 13, "\"volume\": -1.0");
  CHECK(error_text(negative).find("nonnegative") != std::string::npos);
}

TEST_CASE("roster and sampler are mutually exclusive") {
  const char* both = R"({
    "types": 1,
    "domain": {"dimension": 1, "bounds": [1.0]},
    "grid": {"cells": [10]},
    "simulate": {
      "window": {"span": 0.1, "sample_step": 0.1},
      "agents": [{"id": 0, "x": [0.5], "v": [0.0],
                  "trades": [{"volume": 1.0, "value": 2.0}],
                  "expectations": [{"volume": 1.0, "value": 1.0}]}],
      "agent_sampler": {"count": 10, "seed": 1, "velocity": [-0.1, 0.1],
                        "volume": [0, 1], "value": [0, 1]}
    }
  })";
  CHECK(error_text(both).find("exactly one of") != std::string::npos);
}

TEST_CASE("ensemble sampler supports are validated at parse time") {
  const char* ens = R"({
    "types": 1,
    "ensemble": {
      "runs": 10, "seed": 1,
      "mean_volume": {"kind": "uniform", "lower": -1.0, "upper": 5.0},
      "mean_value": {"kind": "point", "value": 300.0},
      "frequency_volume": {"kind": "point", "value": 6.0},
      "frequency_value": {"kind": "point", "value": 6.0},
      "amplitude_volume": {"kind": "point", "value": 0.01},
      "amplitude_value": {"kind": "point", "value": 0.01},
      "phase_volume": {"kind": "point", "value": 0.0},
      "phase_value": {"kind": "point", "value": 0.0},
      "duration": 1.0, "sample_step": 0.1, "horizons": [0.5]
    }
  })";
  const auto msg = error_text(ens);
  CHECK(msg.find("mean_volume") != std::string::npos);
  CHECK(msg.find("strictly positive") != std::string::npos);

  std::string ok(ens);
  ok.replace(ok.find("-1.0"), 4, "1.0");
  const auto cfg = parse_config_text(ok);
  REQUIRE(cfg.ensemble.has_value());
  CHECK(cfg.ensemble->runs == 10);
}

TEST_CASE("field section demands a partner only for linear coupling") {
  const char* field = R"({
    "types": 1,
    "domain": {"dimension": 1, "bounds": [1.0]},
    "grid": {"cells": [100]},
    "field": {
      "quantity": "volume",
      "initial": {"kind": "pulse", "center": [0.3], "width": 0.1, "amplitude": 1.0},
      "velocity": {"kind": "constant", "value": [1.0]},
      "factor": {"kind": "linear_coupling", "coefficient": 0.5},
      "dt": 0.004, "steps": 10
    }
  })";
  CHECK(error_text(field).find("partner") != std::string::npos);

  std::string ok(field);
  ok.replace(ok.find("\"coefficient\": 0.5"), std::string("\"coefficient\": 0.5").size(),
             "\"coefficient\": 0.5, \"partner\": {\"label\": \"expected\", "
             "\"initial\": {\"kind\": \"uniform\", \"value\": 1.0}, "
             "\"velocity\": [0.0], \"coefficient\": -0.5}");
  CHECK_NOTHROW(parse_config_text(ok));
}

TEST_CASE("decompose trend rates must match the type count") {
  std::string text(minimal_oscillator);
  text.replace(text.find("\"horizons\": [0.5]"), std::string("\"horizons\": [0.5]").size(),
               "\"horizons\": [0.5], \"trend\": {\"price_rate\": 0.0, "
               "\"value_rates\": [0.0, 0.0], \"volume_rates\": [0.0]}");
  CHECK(error_text(text).find("one entry per expectation type") != std::string::npos);
}
