#include "riskflow/aggregate.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "riskflow/csv.hpp"
#include "riskflow/errors.hpp"

namespace riskflow::aggregate {

int TimeWindow::steps() const {
  if (!(span > 0.0) || !(sample_step > 0.0)) {
    throw ConfigError("time window: span and sample_step must be > 0");
  }
  const double ratio = span / sample_step;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
    throw ConfigError("time window: span must be a positive integer multiple of sample_step");
  }
  return static_cast<int>(rounded);
}

TypeCellEntry& TypeCellEntry::operator+=(const TypeCellEntry& o) {
  volume += o.volume;
  value += o.value;
  expected_volume += o.expected_volume;
  expected_value += o.expected_value;
  for (int i = 0; i < 3; ++i) {
    impulse_volume[i] += o.impulse_volume[i];
    impulse_value[i] += o.impulse_value[i];
    expected_impulse_volume[i] += o.expected_impulse_volume[i];
    expected_impulse_value[i] += o.expected_impulse_value[i];
  }
  return *this;
}

namespace {

std::optional<Vec3> ratio_vec(const Vec3& num, double den) {
  if (den == 0.0) return std::nullopt;
  return Vec3{num[0] / den, num[1] / den, num[2] / den};
}

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

std::optional<double> price(const TypeCellEntry& e) { return ratio(e.value, e.volume); }
std::optional<Vec3> velocity_volume(const TypeCellEntry& e) {
  return ratio_vec(e.impulse_volume, e.volume);
}
std::optional<Vec3> velocity_value(const TypeCellEntry& e) {
  return ratio_vec(e.impulse_value, e.value);
}
std::optional<double> expectation_volume(const TypeCellEntry& e) {
  return ratio(e.expected_volume, e.volume);
}
std::optional<double> expectation_value(const TypeCellEntry& e) {
  return ratio(e.expected_value, e.value);
}
std::optional<Vec3> velocity_expected_volume(const TypeCellEntry& e) {
  return ratio_vec(e.expected_impulse_volume, e.expected_volume);
}
std::optional<Vec3> velocity_expected_value(const TypeCellEntry& e) {
  return ratio_vec(e.expected_impulse_value, e.expected_value);
}

AggregateField aggregate_window(std::span<const std::vector<Agent>> snapshots,
                                const EconomicDomain& domain, const GridSpec& grid, int types) {
  espace::validate_domain(domain, grid);
  if (types < 1) throw ConfigError("aggregate: need at least one expectation type");
  if (snapshots.empty()) throw ConfigError("aggregate: window covers no steps");

  const int ncells = espace::cell_count(domain, grid);
  const std::size_t nagents = snapshots.front().size();
  const int nsteps = static_cast<int>(snapshots.size());
  for (const auto& snap : snapshots) {
    if (snap.size() != nagents) throw ConfigError("aggregate: snapshots differ in agent count");
  }

  AggregateField field;
  field.domain = domain;
  field.grid = grid;
  field.types = types;
  field.entries.assign(static_cast<std::size_t>(ncells) * types, TypeCellEntry{});
  if (nagents == 0) return field;

  // Roster positions sorted by agent id once; every later walk follows this
  // order, which fixes the per-cell summation order.
  std::vector<std::size_t> order(nagents);
  for (std::size_t i = 0; i < nagents; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return snapshots[0][a].id < snapshots[0][b].id;
  });

  // The index pass is pure, so it parallelizes; failures are located after
  // the loop where throwing is legal again.
  std::vector<int> cell_of(nagents * nsteps);
  const long total = static_cast<long>(nagents) * nsteps;
  long bad_index = -1;
#pragma omp parallel for schedule(static) reduction(max : bad_index) if (total >= 16384)
  for (long m = 0; m < total; ++m) {
    const std::size_t oi = static_cast<std::size_t>(m) / nsteps;
    const int s = static_cast<int>(m % nsteps);
    const Agent& agent = snapshots[s][order[oi]];
    if (static_cast<int>(agent.trades.size()) != types ||
        static_cast<int>(agent.expectations.size()) != types) {
      bad_index = std::max(bad_index, m);
      continue;
    }
    int flat = 0;
    for (int i = domain.dim - 1; i >= 0; --i) {
      const double xi = agent.x[i];
      if (!(xi >= 0.0) || !(xi <= domain.upper[i])) {
        bad_index = std::max(bad_index, m);
        flat = 0;
        break;
      }
      int idx = static_cast<int>(std::floor(xi / (domain.upper[i] / grid.cells[i])));
      if (idx >= grid.cells[i]) idx = grid.cells[i] - 1;
      flat = flat * grid.cells[i] + idx;
    }
    cell_of[m] = flat;
  }
  if (bad_index >= 0) {
    const Agent& agent = snapshots[bad_index % nsteps][order[bad_index / nsteps]];
    if (static_cast<int>(agent.trades.size()) != types ||
        static_cast<int>(agent.expectations.size()) != types) {
      throw ConfigError("aggregate: agent " + std::to_string(agent.id) +
                        " does not carry one trade/expectation pair per type");
    }
    (void)espace::cell_index(agent.x, domain, grid);  // throws the precise error
  }

  // Each thread owns a contiguous range of cells and walks the full roster
  // in (agent id, step) order, keeping only its own cells. Per-cell sums are
  // therefore accumulated in the same order for every thread count, so the
  // result is bit-identical to the serial reference.
  const double inv_steps = 1.0 / static_cast<double>(nsteps);
#pragma omp parallel
  {
    int lo = 0, hi = ncells;
#ifdef _OPENMP
    const long nth = omp_get_num_threads();
    const long tid = omp_get_thread_num();
    lo = static_cast<int>(static_cast<long>(ncells) * tid / nth);
    hi = static_cast<int>(static_cast<long>(ncells) * (tid + 1) / nth);
#endif
    for (long m = 0; m < total; ++m) {
      const int c = cell_of[m];
      if (c < lo || c >= hi) continue;
      const Agent& agent = snapshots[m % nsteps][order[m / nsteps]];
      for (int k = 0; k < types; ++k) {
        const auto& tr = agent.trades[k];
        const auto& ex = agent.expectations[k];
        TypeCellEntry& e = field.at(c, k);
        e.volume += tr.volume;
        e.value += tr.value;
        e.expected_volume += ex.volume * tr.volume;
        e.expected_value += ex.value * tr.value;
        for (int i = 0; i < domain.dim; ++i) {
          e.impulse_volume[i] += tr.volume * agent.v[i];
          e.impulse_value[i] += tr.value * agent.v[i];
          e.expected_impulse_volume[i] += ex.volume * tr.volume * agent.v[i];
          e.expected_impulse_value[i] += ex.value * tr.value * agent.v[i];
        }
      }
    }
    for (int c = lo; c < hi; ++c) {
      for (int k = 0; k < types; ++k) {
        TypeCellEntry& e = field.at(c, k);
        e.volume *= inv_steps;
        e.value *= inv_steps;
        e.expected_volume *= inv_steps;
        e.expected_value *= inv_steps;
        for (int i = 0; i < 3; ++i) {
          e.impulse_volume[i] *= inv_steps;
          e.impulse_value[i] *= inv_steps;
          e.expected_impulse_volume[i] *= inv_steps;
          e.expected_impulse_value[i] *= inv_steps;
        }
      }
    }
  }
  return field;
}

AggregateField aggregate_transactions(std::span<const std::vector<Agent>> snapshots,
                                      const EconomicDomain& domain, const GridSpec& grid,
                                      int types) {
  return aggregate_window(snapshots, domain, grid, types);
}
AggregateField aggregate_impulses(std::span<const std::vector<Agent>> snapshots,
                                  const EconomicDomain& domain, const GridSpec& grid, int types) {
  return aggregate_window(snapshots, domain, grid, types);
}
AggregateField aggregate_expected(std::span<const std::vector<Agent>> snapshots,
                                  const EconomicDomain& domain, const GridSpec& grid, int types) {
  return aggregate_window(snapshots, domain, grid, types);
}

std::vector<TypeCellEntry> totals_over_types(const AggregateField& field) {
  std::vector<TypeCellEntry> totals(field.cells());
  for (int c = 0; c < field.cells(); ++c) {
    for (int k = 0; k < field.types; ++k) totals[c] += field.at(c, k);
  }
  return totals;
}

GlobalTotals integrate_domain(const AggregateField& field) {
  GlobalTotals g;
  g.per_type.assign(field.types, TypeCellEntry{});
  for (int c = 0; c < field.cells(); ++c) {
    for (int k = 0; k < field.types; ++k) g.per_type[k] += field.at(c, k);
  }
  for (const auto& e : g.per_type) g.total += e;
  return g;
}

std::vector<Vec3> advection_velocity(const AggregateField& field, int type,
                                     VelocityChannel channel) {
  std::vector<Vec3> out(field.cells(), Vec3{});
  for (int c = 0; c < field.cells(); ++c) {
    const TypeCellEntry& e = field.at(c, type);
    std::optional<Vec3> v;
    switch (channel) {
      case VelocityChannel::volume:
        v = velocity_volume(e);
        break;
      case VelocityChannel::value:
        v = velocity_value(e);
        break;
      case VelocityChannel::expected_volume:
        v = velocity_expected_volume(e);
        break;
      case VelocityChannel::expected_value:
        v = velocity_expected_value(e);
        break;
    }
    if (v) out[c] = *v;
  }
  return out;
}

void write_csv(const AggregateField& field, std::ostream& os,
               const std::vector<std::string>& header_comments) {
  CsvWriter w(os);
  for (const auto& c : header_comments) w.comment(c);
  const int dim = field.domain.dim;
  std::vector<std::string> header = {"cell", "type", "volume", "value"};
  auto push_axes = [&](const std::string& base) {
    for (int i = 0; i < dim; ++i) header.push_back(base + "_" + std::to_string(i));
  };
  push_axes("impulse_volume");
  push_axes("impulse_value");
  header.push_back("expected_volume");
  header.push_back("expected_value");
  push_axes("expected_impulse_volume");
  push_axes("expected_impulse_value");
  header.push_back("price");
  push_axes("velocity_volume");
  push_axes("velocity_value");
  header.push_back("expectation_volume");
  header.push_back("expectation_value");
  w.row(header);

  for (int c = 0; c < field.cells(); ++c) {
    for (int k = 0; k < field.types; ++k) {
      const TypeCellEntry& e = field.at(c, k);
      std::vector<std::string> row = {CsvWriter::cell(c), CsvWriter::cell(k),
                                      CsvWriter::cell(e.volume), CsvWriter::cell(e.value)};
      auto push_vec = [&](const Vec3& v) {
        for (int i = 0; i < dim; ++i) row.push_back(CsvWriter::cell(v[i]));
      };
      auto push_opt_vec = [&](const std::optional<Vec3>& v) {
        for (int i = 0; i < dim; ++i)
          row.push_back(v ? CsvWriter::cell((*v)[i]) : std::string());
      };
      push_vec(e.impulse_volume);
      push_vec(e.impulse_value);
      row.push_back(CsvWriter::cell(e.expected_volume));
      row.push_back(CsvWriter::cell(e.expected_value));
      push_vec(e.expected_impulse_volume);
      push_vec(e.expected_impulse_value);
      row.push_back(CsvWriter::cell(price(e)));
      push_opt_vec(velocity_volume(e));
      push_opt_vec(velocity_value(e));
      row.push_back(CsvWriter::cell(expectation_volume(e)));
      row.push_back(CsvWriter::cell(expectation_value(e)));
      w.row(row);
    }
  }
}

}  // namespace riskflow::aggregate
