#include "riskflow/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "riskflow/csv.hpp"
#include "riskflow/errors.hpp"

namespace riskflow::config {

namespace {

using nlohmann::json;

// Collects every issue instead of stopping at the first; getters return
// fallbacks so parsing can continue past an error.
struct Reader {
  std::vector<std::string>& errors;

  void fail(const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); }

  void check_keys(const json& obj, const std::string& path,
                  std::initializer_list<const char*> allowed) {
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!ok.count(it.key())) fail(path + "." + it.key(), "unknown key");
    }
  }

  bool require_object(const json& j, const std::string& path) {
    if (j.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  double number(const json& obj, const char* key, const std::string& path, double fallback,
                bool required = true) {
    if (!obj.contains(key)) {
      if (required) fail(path + "." + key, "missing required number");
      return fallback;
    }
    if (!obj[key].is_number()) {
      fail(path + "." + key, "expected a number");
      return fallback;
    }
    return obj[key].get<double>();
  }

  long integer(const json& obj, const char* key, const std::string& path, long fallback,
               bool required = true) {
    if (!obj.contains(key)) {
      if (required) fail(path + "." + key, "missing required integer");
      return fallback;
    }
    if (!obj[key].is_number_integer()) {
      fail(path + "." + key, "expected an integer");
      return fallback;
    }
    return obj[key].get<long>();
  }

  std::uint64_t unsigned64(const json& obj, const char* key, const std::string& path,
                           std::uint64_t fallback, bool required = true) {
    if (!obj.contains(key)) {
      if (required) fail(path + "." + key, "missing required integer");
      return fallback;
    }
    if (!obj[key].is_number_unsigned() && !obj[key].is_number_integer()) {
      fail(path + "." + key, "expected a nonnegative integer");
      return fallback;
    }
    return obj[key].get<std::uint64_t>();
  }

  bool boolean(const json& obj, const char* key, const std::string& path, bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) {
      fail(path + "." + key, "expected true or false");
      return fallback;
    }
    return obj[key].get<bool>();
  }

  std::string text(const json& obj, const char* key, const std::string& path,
                   const std::string& fallback, bool required = true) {
    if (!obj.contains(key)) {
      if (required) fail(path + "." + key, "missing required string");
      return fallback;
    }
    if (!obj[key].is_string()) {
      fail(path + "." + key, "expected a string");
      return fallback;
    }
    return obj[key].get<std::string>();
  }

  std::vector<double> number_list(const json& obj, const char* key, const std::string& path,
                                  bool required = true) {
    std::vector<double> out;
    if (!obj.contains(key)) {
      if (required) fail(path + "." + key, "missing required array of numbers");
      return out;
    }
    if (!obj[key].is_array()) {
      fail(path + "." + key, "expected an array of numbers");
      return out;
    }
    for (const auto& e : obj[key]) {
      if (!e.is_number()) {
        fail(path + "." + key, "expected numbers only");
        return {};
      }
      out.push_back(e.get<double>());
    }
    return out;
  }

  espace::Vec3 axes(const json& obj, const char* key, const std::string& path, int dim) {
    espace::Vec3 v{};
    auto list = number_list(obj, key, path);
    if (static_cast<int>(list.size()) != dim) {
      fail(path + "." + key, "expected " + std::to_string(dim) + " entries (one per axis)");
      return v;
    }
    for (int i = 0; i < dim && i < 3; ++i) v[i] = list[i];
    return v;
  }
};

ensemble::SamplerSpec parse_sampler(Reader& r, const json& j, const std::string& path) {
  ensemble::SamplerSpec s;
  if (!r.require_object(j, path)) return s;
  const std::string kind = r.text(j, "kind", path, "point");
  if (kind == "point") {
    r.check_keys(j, path, {"kind", "value"});
    s.kind = ensemble::SamplerSpec::Kind::point;
    s.a = r.number(j, "value", path, 0.0);
  } else if (kind == "uniform") {
    r.check_keys(j, path, {"kind", "lower", "upper"});
    s.kind = ensemble::SamplerSpec::Kind::uniform;
    s.a = r.number(j, "lower", path, 0.0);
    s.b = r.number(j, "upper", path, 0.0);
  } else if (kind == "normal") {
    r.check_keys(j, path, {"kind", "mean", "stddev"});
    s.kind = ensemble::SamplerSpec::Kind::normal;
    s.a = r.number(j, "mean", path, 0.0);
    s.b = r.number(j, "stddev", path, 0.0);
  } else {
    r.fail(path + ".kind", "expected point, uniform, or normal");
  }
  return s;
}

FieldInitial parse_initial(Reader& r, const json& j, const std::string& path, int dim) {
  FieldInitial init;
  if (!r.require_object(j, path)) return init;
  const std::string kind = r.text(j, "kind", path, "uniform");
  if (kind == "uniform") {
    r.check_keys(j, path, {"kind", "value"});
    init.kind = FieldInitial::Kind::uniform;
    init.value = r.number(j, "value", path, 0.0);
  } else if (kind == "pulse") {
    r.check_keys(j, path, {"kind", "center", "width", "amplitude"});
    init.kind = FieldInitial::Kind::pulse;
    init.center = r.axes(j, "center", path, dim);
    init.width = r.number(j, "width", path, 0.1);
    init.amplitude = r.number(j, "amplitude", path, 1.0);
    if (!(init.width > 0.0)) r.fail(path + ".width", "must be > 0");
  } else {
    r.fail(path + ".kind", "expected uniform or pulse");
  }
  return init;
}

dynamics::OscChannel parse_channel(Reader& r, const json& j, const std::string& path) {
  dynamics::OscChannel ch;
  if (!r.require_object(j, path)) return ch;
  r.check_keys(j, path,
               {"mean", "mean_expected", "response", "feedback", "amp_sin", "amp_cos"});
  ch.mean = r.number(j, "mean", path, 1.0);
  ch.mean_expected = r.number(j, "mean_expected", path, 1.0);
  ch.response = r.number(j, "response", path, 1.0);
  ch.feedback = r.number(j, "feedback", path, -1.0);
  ch.amp_sin = r.number(j, "amp_sin", path, 0.0, false);
  ch.amp_cos = r.number(j, "amp_cos", path, 0.0, false);
  return ch;
}

espace::Agent parse_agent(Reader& r, const json& j, const std::string& path, int dim, int types) {
  espace::Agent a;
  if (!r.require_object(j, path)) return a;
  r.check_keys(j, path, {"id", "x", "v", "trades", "expectations"});
  a.id = r.integer(j, "id", path, 0);
  a.x = r.axes(j, "x", path, dim);
  a.v = r.axes(j, "v", path, dim);
  auto parse_pairs = [&](const char* key, auto& dest, const char* first, const char* second) {
    if (!j.contains(key) || !j[key].is_array() ||
        static_cast<int>(j[key].size()) != types) {
      r.fail(path + "." + key, "expected an array with one entry per expectation type");
      return;
    }
    int idx = 0;
    for (const auto& e : j[key]) {
      const std::string p = path + "." + key + "[" + std::to_string(idx) + "]";
      typename std::remove_reference_t<decltype(dest)>::value_type pair;
      if (!e.is_object()) {
        r.fail(p, "expected an object");
      } else {
        r.check_keys(e, p, {"volume", "value"});
        pair.volume = r.number(e, first, p, 0.0);
        pair.value = r.number(e, second, p, 0.0);
      }
      dest.push_back(pair);
      ++idx;
    }
  };
  parse_pairs("trades", a.trades, "volume", "value");
  parse_pairs("expectations", a.expectations, "volume", "value");
  return a;
}

SimulateConfig parse_simulate(Reader& r, const json& j, const std::string& path, int dim,
                              int types) {
  SimulateConfig sc;
  if (!r.require_object(j, path)) return sc;
  r.check_keys(j, path, {"window", "windows", "agents", "agent_sampler"});
  if (j.contains("window") && r.require_object(j["window"], path + ".window")) {
    r.check_keys(j["window"], path + ".window", {"span", "sample_step"});
    sc.window.span = r.number(j["window"], "span", path + ".window", 1.0);
    sc.window.sample_step = r.number(j["window"], "sample_step", path + ".window", 1.0);
  } else if (!j.contains("window")) {
    r.fail(path + ".window", "missing required object");
  }
  sc.windows = static_cast<int>(r.integer(j, "windows", path, 1, false));
  if (sc.windows < 1) r.fail(path + ".windows", "must be >= 1");

  const bool has_roster = j.contains("agents");
  const bool has_sampler = j.contains("agent_sampler");
  if (has_roster == has_sampler) {
    r.fail(path, "exactly one of agents or agent_sampler is required");
  }
  if (has_roster) {
    if (!j["agents"].is_array() || j["agents"].empty()) {
      r.fail(path + ".agents", "expected a non-empty array");
    } else {
      int idx = 0;
      for (const auto& e : j["agents"]) {
        sc.agents.push_back(
            parse_agent(r, e, path + ".agents[" + std::to_string(idx) + "]", dim, types));
        ++idx;
      }
    }
  }
  if (has_sampler && r.require_object(j["agent_sampler"], path + ".agent_sampler")) {
    const auto& s = j["agent_sampler"];
    const std::string sp = path + ".agent_sampler";
    r.check_keys(s, sp, {"count", "seed", "velocity", "volume", "value", "expectation"});
    AgentSamplerConfig a;
    a.count = r.integer(s, "count", sp, 1);
    a.seed = r.unsigned64(s, "seed", sp, 0, false);
    auto range = [&](const char* key, double& lo, double& hi, bool required) {
      if (!s.contains(key) && !required) return;
      auto list = r.number_list(s, key, sp, required);
      if (list.size() == 2 && list[0] <= list[1]) {
        lo = list[0];
        hi = list[1];
      } else if (!list.empty() || required) {
        r.fail(sp + "." + std::string(key), "expected [lower, upper] with lower <= upper");
      }
    };
    range("velocity", a.velocity_lo, a.velocity_hi, true);
    range("volume", a.volume_lo, a.volume_hi, true);
    range("value", a.value_lo, a.value_hi, true);
    range("expectation", a.expectation_lo, a.expectation_hi, false);
    if (a.count < 1) r.fail(sp + ".count", "must be >= 1");
    if (a.volume_lo < 0.0) r.fail(sp + ".volume", "trade volume must be nonnegative");
    if (a.value_lo < 0.0) r.fail(sp + ".value", "trade value must be nonnegative");
    sc.sampler = a;
  }
  return sc;
}

FieldConfig parse_field(Reader& r, const json& j, const std::string& path, int dim) {
  FieldConfig fc;
  if (!r.require_object(j, path)) return fc;
  r.check_keys(j, path,
               {"quantity", "initial", "velocity", "factor", "dt", "steps", "record_every"});
  fc.quantity = r.text(j, "quantity", path, "volume", false);
  if (j.contains("initial")) {
    fc.initial = parse_initial(r, j["initial"], path + ".initial", dim);
  } else {
    r.fail(path + ".initial", "missing required object");
  }
  if (j.contains("velocity") && r.require_object(j["velocity"], path + ".velocity")) {
    r.check_keys(j["velocity"], path + ".velocity", {"kind", "value"});
    const std::string kind = r.text(j["velocity"], "kind", path + ".velocity", "constant");
    if (kind == "zero") {
      fc.velocity = {};
    } else if (kind == "constant") {
      fc.velocity = r.axes(j["velocity"], "value", path + ".velocity", dim);
    } else {
      r.fail(path + ".velocity.kind", "expected zero or constant");
    }
  } else if (!j.contains("velocity")) {
    r.fail(path + ".velocity", "missing required object");
  }
  if (j.contains("factor") && r.require_object(j["factor"], path + ".factor")) {
    const auto& f = j["factor"];
    const std::string fp = path + ".factor";
    const std::string kind = r.text(f, "kind", fp, "zero");
    if (kind == "zero") {
      r.check_keys(f, fp, {"kind"});
      fc.factor.kind = FieldFactor::Kind::zero;
    } else if (kind == "constant") {
      r.check_keys(f, fp, {"kind", "value"});
      fc.factor.kind = FieldFactor::Kind::constant;
      fc.factor.value = r.number(f, "value", fp, 0.0);
    } else if (kind == "linear_coupling") {
      r.check_keys(f, fp, {"kind", "coefficient", "partner"});
      fc.factor.kind = FieldFactor::Kind::linear_coupling;
      fc.factor.coefficient = r.number(f, "coefficient", fp, 0.0);
      if (f.contains("partner") && r.require_object(f["partner"], fp + ".partner")) {
        const auto& p = f["partner"];
        const std::string pp = fp + ".partner";
        r.check_keys(p, pp, {"label", "initial", "velocity", "coefficient"});
        FieldPartner partner;
        partner.label = r.text(p, "label", pp, "partner", false);
        if (p.contains("initial")) {
          partner.initial = parse_initial(r, p["initial"], pp + ".initial", dim);
        } else {
          r.fail(pp + ".initial", "missing required object");
        }
        if (p.contains("velocity")) {
          partner.velocity = r.axes(p, "velocity", pp, dim);
        }
        partner.coefficient = r.number(p, "coefficient", pp, 0.0);
        fc.partner = partner;
      } else {
        r.fail(fp + ".partner", "linear_coupling requires a partner field");
      }
    } else {
      r.fail(fp + ".kind", "expected zero, constant, or linear_coupling");
    }
  }
  fc.dt = r.number(j, "dt", path, 0.0);
  fc.steps = r.integer(j, "steps", path, 1);
  fc.record_every = r.integer(j, "record_every", path, 1, false);
  if (!(fc.dt > 0.0)) r.fail(path + ".dt", "must be > 0");
  if (fc.steps < 1) r.fail(path + ".steps", "must be >= 1");
  if (fc.record_every < 1) r.fail(path + ".record_every", "must be >= 1");
  return fc;
}

DecomposeConfig parse_decompose(Reader& r, const json& j, const std::string& path, int types) {
  DecomposeConfig dc;
  if (!r.require_object(j, path)) return dc;
  r.check_keys(j, path, {"duration", "sample_step", "horizons", "trend"});
  dc.duration = r.number(j, "duration", path, 1.0);
  dc.sample_step = r.number(j, "sample_step", path, 0.1);
  dc.horizons = r.number_list(j, "horizons", path);
  if (!(dc.duration > 0.0)) r.fail(path + ".duration", "must be > 0");
  if (!(dc.sample_step > 0.0)) r.fail(path + ".sample_step", "must be > 0");
  if (dc.horizons.empty()) r.fail(path + ".horizons", "need at least one horizon");
  if (dc.duration > 0.0 && dc.sample_step > 0.0) {
    const long nt = std::llround(dc.duration / dc.sample_step) + 1;
    for (double d : dc.horizons) {
      const double ratio = d / dc.sample_step;
      const double rounded = std::round(ratio);
      if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        r.fail(path + ".horizons",
               format_double(d) + " is not a positive integer multiple of sample_step");
      } else if (std::llround(rounded) > nt - 1) {
        r.fail(path + ".horizons", format_double(d) + " exceeds the duration");
      }
    }
  }
  if (j.contains("trend") && r.require_object(j["trend"], path + ".trend")) {
    const auto& t = j["trend"];
    const std::string tp = path + ".trend";
    r.check_keys(t, tp, {"price_rate", "value_rates", "volume_rates"});
    TrendConfig trend;
    trend.price_rate = r.number(t, "price_rate", tp, 0.0);
    trend.value_rates = r.number_list(t, "value_rates", tp);
    trend.volume_rates = r.number_list(t, "volume_rates", tp);
    if (static_cast<int>(trend.value_rates.size()) != types ||
        static_cast<int>(trend.volume_rates.size()) != types) {
      r.fail(tp, "value_rates and volume_rates need one entry per expectation type");
    }
    dc.trend = trend;
  }
  return dc;
}

ensemble::EnsembleConfig parse_ensemble(Reader& r, const json& j, const std::string& path,
                                        int types) {
  ensemble::EnsembleConfig ec;
  ec.types = types;
  if (!r.require_object(j, path)) return ec;
  r.check_keys(j, path,
               {"runs", "seed", "mean_volume", "mean_value", "equal_price_factor",
                "frequency_volume", "frequency_value", "amplitude_volume", "amplitude_value",
                "phase_volume", "phase_value", "allow_large_amplitudes", "duration",
                "sample_step", "horizons", "histogram_bins"});
  ec.runs = r.integer(j, "runs", path, 1);
  ec.seed = r.unsigned64(j, "seed", path, 0);
  auto sampler = [&](const char* key, ensemble::SamplerSpec& dest, bool required) {
    if (j.contains(key)) {
      dest = parse_sampler(r, j[key], path + "." + key);
      return true;
    }
    if (required) r.fail(path + "." + std::string(key), "missing required sampler");
    return false;
  };
  sampler("mean_volume", ec.mean_volume, true);
  ensemble::SamplerSpec mv;
  if (sampler("mean_value", mv, false)) ec.mean_value = mv;
  if (j.contains("equal_price_factor")) {
    ec.equal_price_factor = r.number(j, "equal_price_factor", path, 1.0);
  }
  sampler("frequency_volume", ec.frequency_volume, true);
  sampler("frequency_value", ec.frequency_value, true);
  sampler("amplitude_volume", ec.amplitude_volume, true);
  sampler("amplitude_value", ec.amplitude_value, true);
  sampler("phase_volume", ec.phase_volume, true);
  sampler("phase_value", ec.phase_value, true);
  ec.allow_large_amplitudes = r.boolean(j, "allow_large_amplitudes", path, false);
  ec.duration = r.number(j, "duration", path, 1.0);
  ec.sample_step = r.number(j, "sample_step", path, 0.1);
  ec.horizons = r.number_list(j, "horizons", path);
  ec.histogram_bins = static_cast<int>(r.integer(j, "histogram_bins", path, 0, false));
  auto issues = ensemble::config_issues(ec);
  for (auto& i : issues) r.fail(path, i);
  return ec;
}

ScenarioConfig parse_document(const json& doc, bool allow_unstable_flag) {
  std::vector<std::string> errors;
  Reader r{errors};
  ScenarioConfig sc;

  if (!doc.is_object()) {
    throw ConfigError(std::vector<std::string>{"config: top level must be a JSON object"});
  }
  r.check_keys(doc, "config",
               {"domain", "grid", "types", "allow_unstable", "simulate", "field", "disturbance",
                "decompose", "ensemble", "output"});

  sc.types = static_cast<int>(r.integer(doc, "types", "config", 1, false));
  if (sc.types < 1) r.fail("config.types", "must be >= 1");
  sc.allow_unstable = r.boolean(doc, "allow_unstable", "config", false) || allow_unstable_flag;

  if (doc.contains("domain") && r.require_object(doc["domain"], "config.domain")) {
    const auto& d = doc["domain"];
    r.check_keys(d, "config.domain", {"dimension", "bounds"});
    espace::EconomicDomain domain;
    domain.dim = static_cast<int>(r.integer(d, "dimension", "config.domain", 1));
    auto bounds = r.number_list(d, "bounds", "config.domain");
    if (domain.dim >= 1 && domain.dim <= espace::max_dim &&
        static_cast<int>(bounds.size()) == domain.dim) {
      for (int i = 0; i < domain.dim; ++i) domain.upper[i] = bounds[i];
    } else if (domain.dim >= 1 && domain.dim <= espace::max_dim) {
      r.fail("config.domain.bounds", "expected one bound per axis");
    }
    sc.domain = domain;
  }
  if (doc.contains("grid") && r.require_object(doc["grid"], "config.grid")) {
    const auto& g = doc["grid"];
    r.check_keys(g, "config.grid", {"cells"});
    espace::GridSpec grid;
    auto cells = r.number_list(g, "cells", "config.grid");
    const int dim = sc.domain ? sc.domain->dim : static_cast<int>(cells.size());
    if (static_cast<int>(cells.size()) == dim && dim >= 1 && dim <= espace::max_dim) {
      for (int i = 0; i < dim; ++i) {
        if (cells[i] != std::floor(cells[i])) {
          r.fail("config.grid.cells", "cell counts must be integers");
          break;
        }
        grid.cells[i] = static_cast<int>(cells[i]);
      }
    } else {
      r.fail("config.grid.cells", "expected one cell count per axis");
    }
    sc.grid = grid;
  }
  if (sc.domain && sc.grid) {
    auto issues = espace::domain_issues(*sc.domain, *sc.grid);
    for (auto& i : issues) r.fail("config.domain", i);
  } else if (sc.domain.has_value() != sc.grid.has_value()) {
    r.fail("config", "domain and grid must be given together");
  }

  const int dim = sc.domain ? sc.domain->dim : 1;

  if (doc.contains("simulate")) {
    if (!sc.domain) r.fail("config.simulate", "requires a domain and grid");
    sc.simulate = parse_simulate(r, doc["simulate"], "config.simulate", dim, sc.types);
    // Window multiplicity and roster invariants.
    if (sc.simulate) {
      try {
        (void)sc.simulate->window.steps();
      } catch (const ConfigError& e) {
        r.fail("config.simulate.window", e.what());
      }
      if (sc.domain && sc.grid) {
        int idx = 0;
        for (const auto& a : sc.simulate->agents) {
          const std::string ap = "config.simulate.agents[" + std::to_string(idx) + "]";
          for (int i = 0; i < dim; ++i) {
            if (!(a.x[i] >= 0.0) || !(a.x[i] <= sc.domain->upper[i])) {
              r.fail(ap, "coordinate outside domain on axis " + std::to_string(i));
            }
          }
          for (const auto& tr : a.trades) {
            if (tr.volume < 0.0 || tr.value < 0.0) {
              r.fail(ap, "trade volume and value must be nonnegative");
            }
          }
          ++idx;
        }
      }
    }
  }
  if (doc.contains("field")) {
    if (!sc.domain) r.fail("config.field", "requires a domain and grid");
    sc.field = parse_field(r, doc["field"], "config.field", dim);
  }
  if (doc.contains("disturbance")) {
    const auto& d = doc["disturbance"];
    if (r.require_object(d, "config.disturbance")) {
      r.check_keys(d, "config.disturbance", {"types"});
      dynamics::DisturbanceParams params;
      if (!d.contains("types") || !d["types"].is_array() ||
          static_cast<int>(d["types"].size()) != sc.types) {
        r.fail("config.disturbance.types", "expected one entry per expectation type");
      } else {
        int idx = 0;
        for (const auto& e : d["types"]) {
          const std::string tp = "config.disturbance.types[" + std::to_string(idx) + "]";
          dynamics::TypeParams t;
          if (e.is_object()) {
            r.check_keys(e, tp, {"volume", "value"});
            if (e.contains("volume")) t.volume = parse_channel(r, e["volume"], tp + ".volume");
            else r.fail(tp + ".volume", "missing required object");
            if (e.contains("value")) t.value = parse_channel(r, e["value"], tp + ".value");
            else r.fail(tp + ".value", "missing required object");
          } else {
            r.fail(tp, "expected an object");
          }
          params.types.push_back(t);
          ++idx;
        }
        auto issues = dynamics::params_issues(params, sc.allow_unstable);
        for (auto& i : issues) r.fail("config.disturbance", i);
        sc.disturbance = params;
      }
    }
  }
  if (doc.contains("decompose")) {
    if (!doc.contains("disturbance")) {
      r.fail("config.decompose", "requires a disturbance section");
    }
    sc.decompose = parse_decompose(r, doc["decompose"], "config.decompose", sc.types);
  }
  if (doc.contains("ensemble")) {
    sc.ensemble = parse_ensemble(r, doc["ensemble"], "config.ensemble", sc.types);
  }
  if (doc.contains("output")) {
    const auto& o = doc["output"];
    if (r.require_object(o, "config.output")) {
      r.check_keys(o, "config.output", {"directory", "format"});
      sc.output.directory = r.text(o, "directory", "config.output", "out", false);
      sc.output.format = r.text(o, "format", "config.output", "csv", false);
      if (sc.output.format != "csv" && sc.output.format != "json") {
        r.fail("config.output.format", "expected csv or json");
      }
    }
  }

  if (!errors.empty()) throw ConfigError(errors);

  sc.canonical_text = doc.dump();
  sc.hash = fnv1a64(sc.canonical_text);
  return sc;
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text, bool allow_unstable_flag) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::vector<std::string>{std::string("malformed document: ") + e.what()});
  }
  return parse_document(doc, allow_unstable_flag);
}

ScenarioConfig parse_config(const std::string& path, bool allow_unstable_flag) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("missing file: cannot open config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), allow_unstable_flag);
}

}  // namespace riskflow::config
