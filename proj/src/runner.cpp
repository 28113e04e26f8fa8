#include "riskflow/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "riskflow/csv.hpp"
#include "riskflow/errors.hpp"
#include "riskflow/fieldsolve.hpp"
#include "riskflow/pricing.hpp"
#include "riskflow/rng.hpp"

namespace riskflow::runner {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int log_level() {
  const char* env = std::getenv("RISKFLOW_LOG");
  if (!env) return 1;
  const std::string v(env);
  if (v == "quiet") return 0;
  if (v == "debug") return 2;
  return 1;
}

void log_info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "riskflow: " << msg << "\n";
}

struct Sink {
  fs::path dir;
  std::string format;
  std::vector<std::string> meta;
  json meta_json;

  std::ofstream open(const std::string& name) const {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IoError("cannot open output file '" + (dir / name).string() + "'");
    log_info("writing " + (dir / name).string());
    return out;
  }

  void write_json(const std::string& name, json j) const {
    j["meta"] = meta_json;
    auto out = open(name);
    out << j.dump(2) << "\n";
  }
};

Sink make_sink(const config::ScenarioConfig& cfg, const Options& opt,
               const std::string& subcommand, std::uint64_t seed) {
  Sink sink;
  sink.dir = opt.out_dir.empty() ? cfg.output.directory : opt.out_dir;
  sink.format = opt.format.empty() ? cfg.output.format : opt.format;
  if (sink.format != "csv" && sink.format != "json") {
    throw ConfigError("format must be csv or json");
  }
  std::error_code ec;
  fs::create_directories(sink.dir, ec);
  if (ec) throw IoError("cannot create output directory '" + sink.dir.string() + "'");
  const std::string hash = hex64(cfg.hash);
  sink.meta = {"tool=riskflow subcommand=" + subcommand, "config_hash=" + hash,
               "seed=" + std::to_string(seed)};
  sink.meta_json["tool"] = "riskflow";
  sink.meta_json["subcommand"] = subcommand;
  sink.meta_json["config_hash"] = hash;
  sink.meta_json["seed"] = seed;
  return sink;
}

std::vector<espace::Agent> build_roster(const config::SimulateConfig& sim,
                                        const espace::EconomicDomain& domain, int types,
                                        std::uint64_t seed) {
  if (!sim.sampler) return sim.agents;
  const auto& s = *sim.sampler;
  Rng rng(seed);
  std::vector<espace::Agent> roster(s.count);
  for (long i = 0; i < s.count; ++i) {
    espace::Agent& a = roster[i];
    a.id = i;
    for (int d = 0; d < domain.dim; ++d) {
      a.x[d] = rng.uniform(0.0, domain.upper[d]);
      a.v[d] = rng.uniform(s.velocity_lo, s.velocity_hi);
    }
    a.trades.resize(types);
    a.expectations.resize(types);
    for (int k = 0; k < types; ++k) {
      a.trades[k].volume = rng.uniform(s.volume_lo, s.volume_hi);
      a.trades[k].value = rng.uniform(s.value_lo, s.value_hi);
      a.expectations[k].volume = rng.uniform(s.expectation_lo, s.expectation_hi);
      a.expectations[k].value = rng.uniform(s.expectation_lo, s.expectation_hi);
    }
  }
  return roster;
}

json field_entries_json(const aggregate::AggregateField& field) {
  json rows = json::array();
  for (int c = 0; c < field.cells(); ++c) {
    for (int k = 0; k < field.types; ++k) {
      const auto& e = field.at(c, k);
      json row;
      row["cell"] = c;
      row["type"] = k;
      row["volume"] = e.volume;
      row["value"] = e.value;
      row["expected_volume"] = e.expected_volume;
      row["expected_value"] = e.expected_value;
      for (int i = 0; i < field.domain.dim; ++i) {
        row["impulse_volume"].push_back(e.impulse_volume[i]);
        row["impulse_value"].push_back(e.impulse_value[i]);
        row["expected_impulse_volume"].push_back(e.expected_impulse_volume[i]);
        row["expected_impulse_value"].push_back(e.expected_impulse_value[i]);
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<double> materialize_initial(const fieldsolve::Mesh& mesh,
                                        const config::FieldInitial& init) {
  std::vector<double> f(mesh.ncells, 0.0);
  if (init.kind == config::FieldInitial::Kind::uniform) {
    for (auto& x : f) x = init.value;
    return f;
  }
  // Product of per-axis cos^2 bumps, exactly zero outside the support.
  for (int c = 0; c < mesh.ncells; ++c) {
    double v = init.amplitude;
    for (int i = 0; i < mesh.dim; ++i) {
      const int ci = (c / mesh.stride[i]) % mesh.cells[i];
      const double x = (static_cast<double>(ci) + 0.5) * mesh.extent[i];
      const double u = (x - init.center[i]) / init.width;
      if (std::abs(u) >= 1.0) {
        v = 0.0;
        break;
      }
      const double b = std::cos(1.5707963267948966 * u);
      v *= b * b;
    }
    f[c] = v;
  }
  return f;
}

}  // namespace

void run_simulate(const config::ScenarioConfig& cfg, const Options& opt) {
  if (!cfg.simulate || !cfg.domain || !cfg.grid) {
    throw ConfigError("simulate: config needs domain, grid, and a simulate section");
  }
  const auto& sim = *cfg.simulate;
  const std::uint64_t seed =
      opt.seed ? *opt.seed : (sim.sampler ? sim.sampler->seed : 0);
  Sink sink = make_sink(cfg, opt, "simulate", seed);

  std::vector<espace::Agent> roster = build_roster(sim, *cfg.domain, cfg.types, seed);
  const int steps_per_window = sim.window.steps();

  json totals = json::array();
  for (int w = 0; w < sim.windows; ++w) {
    std::vector<std::vector<espace::Agent>> snapshots;
    snapshots.reserve(steps_per_window);
    for (int s = 0; s < steps_per_window; ++s) {
      snapshots.push_back(roster);
      roster = espace::advance_agents(std::move(roster), *cfg.domain, sim.window.sample_step);
    }
    const auto field = aggregate::aggregate_window(snapshots, *cfg.domain, *cfg.grid, cfg.types);

    const std::string name = "fields_window_" + std::to_string(w);
    if (sink.format == "csv") {
      auto out = sink.open(name + ".csv");
      auto comments = sink.meta;
      comments.push_back("window=" + std::to_string(w));
      aggregate::write_csv(field, out, comments);
    } else {
      json j;
      j["window"] = w;
      j["entries"] = field_entries_json(field);
      sink.write_json(name + ".json", std::move(j));
    }

    const auto global = aggregate::integrate_domain(field);
    json wt;
    wt["window"] = w;
    for (int k = 0; k < field.types; ++k) {
      json t;
      t["type"] = k;
      t["volume"] = global.per_type[k].volume;
      t["value"] = global.per_type[k].value;
      t["expected_volume"] = global.per_type[k].expected_volume;
      t["expected_value"] = global.per_type[k].expected_value;
      wt["per_type"].push_back(std::move(t));
    }
    wt["total"]["volume"] = global.total.volume;
    wt["total"]["value"] = global.total.value;
    totals.push_back(std::move(wt));
  }
  json summary;
  summary["windows"] = std::move(totals);
  sink.write_json("totals.json", std::move(summary));
}

void run_field(const config::ScenarioConfig& cfg, const Options& opt) {
  if (!cfg.field || !cfg.domain || !cfg.grid) {
    throw ConfigError("field: config needs domain, grid, and a field section");
  }
  const auto& fc = *cfg.field;
  Sink sink = make_sink(cfg, opt, "field", 0);
  const auto mesh = fieldsolve::Mesh::make(*cfg.domain, *cfg.grid);

  const fieldsolve::VelocityField velocity(mesh.ncells, fc.velocity);
  std::vector<double> primary = materialize_initial(mesh, fc.initial);

  struct Record {
    long step;
    std::string quantity;
    int cell;
    double value;
  };
  std::vector<Record> records;
  auto record_field = [&](long step, const std::string& name, const std::vector<double>& f) {
    for (int c = 0; c < mesh.ncells; ++c) records.push_back({step, name, c, f[c]});
  };

  json balance;
  if (fc.factor.kind == config::FieldFactor::Kind::linear_coupling) {
    const auto& partner_cfg = *fc.partner;
    std::vector<double> partner = materialize_initial(mesh, partner_cfg.initial);
    const fieldsolve::VelocityField partner_velocity(mesh.ncells, partner_cfg.velocity);

    record_field(0, fc.quantity, primary);
    record_field(0, partner_cfg.label, partner);
    auto traj = fieldsolve::run_coupled_linear(mesh, primary, partner, velocity,
                                               partner_velocity, fc.factor.coefficient,
                                               partner_cfg.coefficient, fc.dt, fc.steps);
    record_field(fc.steps, fc.quantity, traj.field_a);
    record_field(fc.steps, partner_cfg.label, traj.field_b);

    double max_res_a = 0.0, max_res_b = 0.0;
    for (long s = 0; s + 1 < static_cast<long>(traj.integral_a.size()); ++s) {
      const double ra = std::abs((traj.integral_a[s + 1] - traj.integral_a[s]) / fc.dt -
                                 fc.factor.coefficient * traj.integral_b[s]);
      const double rb = std::abs((traj.integral_b[s + 1] - traj.integral_b[s]) / fc.dt -
                                 partner_cfg.coefficient * traj.integral_a[s]);
      max_res_a = std::max(max_res_a, ra);
      max_res_b = std::max(max_res_b, rb);
    }
    balance["max_residual"][fc.quantity] = max_res_a;
    balance["max_residual"][partner_cfg.label] = max_res_b;
    balance["integral_first"][fc.quantity] = traj.integral_a.front();
    balance["integral_last"][fc.quantity] = traj.integral_a.back();
    balance["integral_first"][partner_cfg.label] = traj.integral_b.front();
    balance["integral_last"][partner_cfg.label] = traj.integral_b.back();
  } else {
    std::vector<double> factor(mesh.ncells, 0.0);
    if (fc.factor.kind == config::FieldFactor::Kind::constant) {
      for (auto& x : factor) x = fc.factor.value;
    }
    const double factor_integral = fieldsolve::integrate(mesh, factor);

    record_field(0, fc.quantity, primary);
    double max_res = 0.0;
    double integral_first = fieldsolve::integrate(mesh, primary);
    double integral_prev = integral_first;
    for (long s = 1; s <= fc.steps; ++s) {
      primary = fieldsolve::step_continuity(mesh, primary, velocity, factor, fc.dt);
      const double integral = fieldsolve::integrate(mesh, primary);
      max_res = std::max(max_res, std::abs((integral - integral_prev) / fc.dt - factor_integral));
      integral_prev = integral;
      if (s % fc.record_every == 0 || s == fc.steps) record_field(s, fc.quantity, primary);
    }
    balance["max_residual"][fc.quantity] = max_res;
    balance["integral_first"][fc.quantity] = integral_first;
    balance["integral_last"][fc.quantity] = integral_prev;
  }

  if (sink.format == "csv") {
    auto out = sink.open("field_trajectory.csv");
    CsvWriter w(out);
    for (const auto& c : sink.meta) w.comment(c);
    w.row({"step", "cell", "quantity", "value"});
    for (const auto& r : records) {
      w.row({CsvWriter::cell(static_cast<std::int64_t>(r.step)), CsvWriter::cell(r.cell),
             r.quantity, CsvWriter::cell(r.value)});
    }
  } else {
    json rows = json::array();
    for (const auto& r : records) {
      rows.push_back({{"step", r.step}, {"cell", r.cell}, {"quantity", r.quantity},
                      {"value", r.value}});
    }
    json j;
    j["trajectory"] = std::move(rows);
    sink.write_json("field_trajectory.json", std::move(j));
  }
  sink.write_json("balance_report.json", std::move(balance));
}

void run_decompose(const config::ScenarioConfig& cfg, const Options& opt) {
  if (!cfg.decompose || !cfg.disturbance) {
    throw ConfigError("decompose: config needs disturbance and decompose sections");
  }
  const auto& dc = *cfg.decompose;
  const auto& params = *cfg.disturbance;
  Sink sink = make_sink(cfg, opt, "decompose", 0);

  const int K = static_cast<int>(params.types.size());
  const long nt = std::llround(dc.duration / dc.sample_step) + 1;

  std::vector<double> mean_volumes(K), mean_values(K);
  for (int k = 0; k < K; ++k) {
    mean_volumes[k] = params.types[k].volume.mean;
    mean_values[k] = params.types[k].value.mean;
  }
  const auto w = pricing::weights(mean_volumes, mean_values);

  pricing::TrendRates rates;
  rates.value_rate.assign(K, 0.0);
  rates.volume_rate.assign(K, 0.0);
  if (dc.trend) {
    rates.price_rate = dc.trend->price_rate;
    rates.value_rate = dc.trend->value_rates;
    rates.volume_rate = dc.trend->volume_rates;
  }

  // Closed-form oscillator trajectories, then the linear price split.
  pricing::Series volume_dist(K, std::vector<double>(nt));
  pricing::Series value_dist(K, std::vector<double>(nt));
  pricing::Series price_dist(K, std::vector<double>(nt));
  pricing::Series abs_volume(K, std::vector<double>(nt));
  pricing::Series abs_value(K, std::vector<double>(nt));
  std::vector<dynamics::DisturbanceState> states;
  states.reserve(nt);
  for (long j = 0; j < nt; ++j) {
    const double t = dc.sample_step * static_cast<double>(j);
    states.push_back(dynamics::closed_form_disturbance(params, t));
    for (int k = 0; k < K; ++k) {
      const double q = states.back().volume[k].disturbance;
      const double sv = states.back().value[k].disturbance;
      volume_dist[k][j] = q;
      value_dist[k][j] = sv;
      price_dist[k][j] = sv - q;
      abs_volume[k][j] = mean_volumes[k] * (1.0 + rates.volume_rate[k] * t + q);
      abs_value[k][j] = mean_values[k] * (1.0 + rates.value_rate[k] * t + sv);
    }
  }
  const auto pi = pricing::composite_from_partials(w, price_dist, volume_dist);
  const auto exact = pricing::exact_price(abs_volume, abs_value, w.base_price);

  // Oscillator trajectory export.
  {
    auto out = sink.open("oscillator_trajectory.csv");
    CsvWriter cw(out);
    for (const auto& c : sink.meta) cw.comment(c);
    cw.row({"t", "type", "volume_disturbance", "value_disturbance", "expected_volume_disturbance",
            "expected_value_disturbance"});
    for (long j = 0; j < nt; ++j) {
      for (int k = 0; k < K; ++k) {
        cw.row({CsvWriter::cell(states[j].t), CsvWriter::cell(k),
                CsvWriter::cell(states[j].volume[k].disturbance),
                CsvWriter::cell(states[j].value[k].disturbance),
                CsvWriter::cell(states[j].volume[k].expected),
                CsvWriter::cell(states[j].value[k].expected)});
      }
    }
  }

  long degenerate_pairs = 0;
  json rows = json::array();
  std::ofstream csv_out;
  std::optional<CsvWriter> cw;
  if (sink.format == "csv") {
    csv_out = sink.open("decomposition.csv");
    cw.emplace(csv_out);
    for (const auto& c : sink.meta) cw->comment(c);
    cw->row({"t", "d", "r_direct", "r_decomposed", "k", "epsilon_k", "eta_k", "r_k", "w_k", "pi",
             "pi_exact"});
  }

  for (double horizon : dc.horizons) {
    const std::size_t lag = static_cast<std::size_t>(std::llround(horizon / dc.sample_step));
    for (std::size_t t = lag; t < static_cast<std::size_t>(nt); ++t) {
      pricing::ReturnBreakdown b;
      try {
        b = dc.trend ? pricing::trend_return(w, rates, price_dist, volume_dist, t, lag,
                                             dc.sample_step)
                     : pricing::return_decomposition(w, price_dist, volume_dist, t, lag);
      } catch (const DegeneracyError&) {
        ++degenerate_pairs;
        continue;
      }
      const double t_real = dc.sample_step * static_cast<double>(t);
      if (cw) {
        for (int k = 0; k < K; ++k) {
          cw->row({CsvWriter::cell(t_real), CsvWriter::cell(horizon),
                   CsvWriter::cell(b.r_direct), CsvWriter::cell(b.r), CsvWriter::cell(k),
                   CsvWriter::cell(b.partial_weight[k]), CsvWriter::cell(b.volume_weight[k]),
                   CsvWriter::cell(b.partial_return[k]), CsvWriter::cell(b.volume_return[k]),
                   CsvWriter::cell(pi[t]), CsvWriter::cell(exact.deviation[t])});
        }
      } else {
        json row;
        row["t"] = t_real;
        row["d"] = horizon;
        row["r_direct"] = b.r_direct;
        row["r_decomposed"] = b.r;
        row["epsilon"] = b.partial_weight;
        row["eta"] = b.volume_weight;
        row["partial_returns"] = b.partial_return;
        row["volume_returns"] = b.volume_return;
        row["pi"] = pi[t];
        row["pi_exact"] = exact.deviation[t];
        rows.push_back(std::move(row));
      }
    }
  }
  if (!cw) {
    json j;
    j["rows"] = std::move(rows);
    sink.write_json("decomposition.json", std::move(j));
  }

  json summary;
  summary["volume_share"] = w.volume_share;
  summary["value_share"] = w.value_share;
  summary["mean_price"] = w.mean_price;
  summary["base_price"] = w.base_price;
  summary["degenerate_pairs_skipped"] = degenerate_pairs;
  summary["trend_mode"] = dc.trend.has_value();
  for (int k = 0; k < K; ++k) {
    const auto f = dynamics::oscillator_frequencies(params.types[k], cfg.allow_unstable ||
                                                                          opt.allow_unstable);
    json fj;
    fj["type"] = k;
    fj["volume_rate"] = f.volume.rate;
    fj["volume_oscillatory"] = f.volume.oscillatory;
    fj["value_rate"] = f.value.rate;
    fj["value_oscillatory"] = f.value.oscillatory;
    summary["frequencies"].push_back(std::move(fj));
  }
  for (const auto& warn : dynamics::check_linearization(params)) {
    summary["linearization_warnings"].push_back(
        {{"type", warn.type}, {"channel", warn.channel}, {"amplitude", warn.amplitude}});
  }
  if (!summary.contains("linearization_warnings")) {
    summary["linearization_warnings"] = json::array();
  }
  sink.write_json("decomposition_summary.json", std::move(summary));
}

void run_ensemble(const config::ScenarioConfig& cfg, const Options& opt) {
  if (!cfg.ensemble) throw ConfigError("ensemble: config needs an ensemble section");
  ensemble::EnsembleConfig ec = *cfg.ensemble;
  if (opt.seed) ec.seed = *opt.seed;
  Sink sink = make_sink(cfg, opt, "ensemble", ec.seed);

  const auto report = ensemble::run_ensemble(ec);
  {
    auto out = sink.open("ensemble_report.json");
    out << ensemble::report_json(report, hex64(cfg.hash));
  }
  // Histogram CSVs named by horizon position so file names stay stable.
  for (std::size_t i = 0; i < report.observables.size(); ++i) {
    const auto& obs = report.observables[i];
    std::string name;
    if (i == 0) {
      name = "hist_pi.csv";
    } else {
      const std::size_t h = (i - 1) / 3;
      static const char* kinds[] = {"r", "r_partial", "r_volume"};
      name = std::string("hist_") + kinds[(i - 1) % 3] + "_" + std::to_string(h) + ".csv";
    }
    auto out = sink.open(name);
    auto comments = sink.meta;
    comments.push_back("observable=" + obs.name);
    ensemble::write_histogram_csv(obs, out, comments);
  }
}

}  // namespace riskflow::runner
