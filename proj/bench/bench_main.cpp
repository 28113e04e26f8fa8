// Serial reference vs OpenMP kernel timings for the three hot paths:
// particle-to-grid aggregation, upwind field stepping, ensemble runs.

#include <chrono>
#include <cstdio>
#include <functional>
#include <omp.h>
#include <vector>

#include "riskflow/aggregate.hpp"
#include "riskflow/ensemble.hpp"
#include "riskflow/fieldsolve.hpp"
#include "riskflow/reference.hpp"
#include "riskflow/rng.hpp"

using namespace riskflow;

namespace {

double seconds(const std::function<void()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count();
}

std::vector<espace::Agent> random_roster(std::size_t n, const espace::EconomicDomain& domain,
                                         int types, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<espace::Agent> roster(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& a = roster[i];
    a.id = static_cast<std::int64_t>(i);
    for (int d = 0; d < domain.dim; ++d) {
      a.x[d] = rng.uniform(0.0, domain.upper[d]);
      a.v[d] = rng.uniform(-0.2, 0.2);
    }
    a.trades.resize(types);
    a.expectations.resize(types);
    for (int k = 0; k < types; ++k) {
      a.trades[k] = {rng.uniform(0.0, 10.0), rng.uniform(0.0, 30.0)};
      a.expectations[k] = {rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
    }
  }
  return roster;
}

void bench_aggregate() {
  espace::EconomicDomain domain{3, {1.0, 1.0, 1.0}};
  espace::GridSpec grid{{24, 24, 24}};
  const int types = 4;
  std::vector<std::vector<espace::Agent>> snapshots(4);
  for (int s = 0; s < 4; ++s) snapshots[s] = random_roster(200000, domain, types, 11 + s);

  aggregate::AggregateField serial_out, parallel_out;
  const double ts = seconds(
      [&] { serial_out = reference::aggregate_direct(snapshots, domain, grid, types); });
  const double tp = seconds(
      [&] { parallel_out = aggregate::aggregate_window(snapshots, domain, grid, types); });
  bool identical = serial_out.entries.size() == parallel_out.entries.size();
  for (std::size_t i = 0; identical && i < serial_out.entries.size(); ++i) {
    identical = serial_out.entries[i].volume == parallel_out.entries[i].volume &&
                serial_out.entries[i].value == parallel_out.entries[i].value;
  }
  std::printf("aggregate   200k agents x4 steps   serial %8.3f s   omp %8.3f s   x%.2f   %s\n",
              ts, tp, ts / tp, identical ? "bit-identical" : "MISMATCH");
}

void bench_fieldstep() {
  espace::EconomicDomain domain{3, {1.0, 1.0, 1.0}};
  espace::GridSpec grid{{64, 64, 64}};
  const auto mesh = fieldsolve::Mesh::make(domain, grid);
  Rng rng(5);
  std::vector<double> f(mesh.ncells);
  fieldsolve::VelocityField vel(mesh.ncells);
  for (int c = 0; c < mesh.ncells; ++c) {
    f[c] = rng.uniform(0.0, 1.0);
    for (int i = 0; i < 3; ++i) vel[c][i] = rng.uniform(-1.0, 1.0);
  }
  std::vector<double> factor(mesh.ncells, 0.0);
  const double dt = 0.5 * fieldsolve::max_stable_dt(mesh, vel);
  const int steps = 100;

  std::vector<double> a = f, b = f;
  const double ts = seconds([&] {
    for (int s = 0; s < steps; ++s) a = reference::step_continuity_serial(mesh, a, vel, factor, dt);
  });
  const double tp = seconds([&] {
    for (int s = 0; s < steps; ++s) b = fieldsolve::step_continuity(mesh, b, vel, factor, dt);
  });
  bool identical = true;
  for (int c = 0; c < mesh.ncells; ++c) identical = identical && a[c] == b[c];
  std::printf("field step  64^3 grid x100 steps    serial %8.3f s   omp %8.3f s   x%.2f   %s\n",
              ts, tp, ts / tp, identical ? "bit-identical" : "MISMATCH");
}

void bench_ensemble() {
  ensemble::EnsembleConfig ec;
  ec.runs = 2000;
  ec.seed = 99;
  ec.types = 4;
  ec.mean_volume = {ensemble::SamplerSpec::Kind::uniform, 50.0, 150.0};
  ec.mean_value = ensemble::SamplerSpec{ensemble::SamplerSpec::Kind::uniform, 100.0, 450.0};
  ec.frequency_volume = {ensemble::SamplerSpec::Kind::uniform, 3.0, 9.0};
  ec.frequency_value = {ensemble::SamplerSpec::Kind::uniform, 3.0, 9.0};
  ec.amplitude_volume = {ensemble::SamplerSpec::Kind::uniform, 0.0, 0.05};
  ec.amplitude_value = {ensemble::SamplerSpec::Kind::uniform, 0.0, 0.05};
  ec.phase_volume = {ensemble::SamplerSpec::Kind::uniform, 0.0, 6.283185307179586};
  ec.phase_value = {ensemble::SamplerSpec::Kind::uniform, 0.0, 6.283185307179586};
  ec.duration = 12.8;
  ec.sample_step = 0.1;
  ec.horizons = {0.5};

  const int max_threads = omp_get_max_threads();
  omp_set_num_threads(1);
  ensemble::DistributionReport serial_rep, parallel_rep;
  const double ts = seconds([&] { serial_rep = ensemble::run_ensemble(ec); });
  omp_set_num_threads(max_threads);
  const double tp = seconds([&] { parallel_rep = ensemble::run_ensemble(ec); });
  const bool identical =
      ensemble::report_json(serial_rep, "x") == ensemble::report_json(parallel_rep, "x");
  std::printf("ensemble    2000 runs, K=4          serial %8.3f s   omp %8.3f s   x%.2f   %s\n",
              ts, tp, ts / tp, identical ? "byte-identical" : "MISMATCH");
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  bench_aggregate();
  bench_fieldstep();
  bench_ensemble();
  return 0;
}
