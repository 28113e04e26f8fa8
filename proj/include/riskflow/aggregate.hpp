#ifndef RISKFLOW_AGGREGATE_HPP
#define RISKFLOW_AGGREGATE_HPP

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "riskflow/espace.hpp"

namespace riskflow::aggregate {

using espace::Agent;
using espace::EconomicDomain;
using espace::GridSpec;
using espace::Vec3;

// Forward averaging span [t, t + span) sampled every sample_step.
struct TimeWindow {
  double span = 1.0;
  double sample_step = 1.0;

  // Number of simulation steps covered; throws ConfigError if span is not a
  // positive integer multiple of sample_step.
  int steps() const;
};

// Extensive per-(cell, type) aggregates. All entries are window averages of
// sums over the agents inside the cell.
struct TypeCellEntry {
  double volume = 0.0;  // trade volume
  double value = 0.0;   // trade value
  Vec3 impulse_volume{};
  Vec3 impulse_value{};
  double expected_volume = 0.0;
  double expected_value = 0.0;
  Vec3 expected_impulse_volume{};
  Vec3 expected_impulse_value{};

  TypeCellEntry& operator+=(const TypeCellEntry& o);
};

// Derived ratios are never fabricated: empty optional when the denominator
// vanishes (empty cell).
std::optional<double> price(const TypeCellEntry& e);               // value / volume
std::optional<Vec3> velocity_volume(const TypeCellEntry& e);       // impulse_volume / volume
std::optional<Vec3> velocity_value(const TypeCellEntry& e);        // impulse_value / value
std::optional<double> expectation_volume(const TypeCellEntry& e);  // expected_volume / volume
std::optional<double> expectation_value(const TypeCellEntry& e);   // expected_value / value
std::optional<Vec3> velocity_expected_volume(const TypeCellEntry& e);
std::optional<Vec3> velocity_expected_value(const TypeCellEntry& e);

struct AggregateField {
  EconomicDomain domain;
  GridSpec grid;
  int types = 1;
  std::vector<TypeCellEntry> entries;  // index = cell * types + k

  const TypeCellEntry& at(int cell, int type) const { return entries[cell * types + type]; }
  TypeCellEntry& at(int cell, int type) { return entries[cell * types + type]; }
  int cells() const { return static_cast<int>(entries.size()) / types; }
};

// One roster snapshot per simulation step inside the window, all with the
// same agents in the same order. Accumulation order inside a cell is fixed
// (agent id, then step) so results are bit-reproducible.
AggregateField aggregate_window(std::span<const std::vector<Agent>> snapshots,
                                const EconomicDomain& domain, const GridSpec& grid, int types);

// Facet views named after the operations they stand for; each returns a full
// field computed by the single shared pass.
AggregateField aggregate_transactions(std::span<const std::vector<Agent>> snapshots,
                                      const EconomicDomain& domain, const GridSpec& grid,
                                      int types);
AggregateField aggregate_impulses(std::span<const std::vector<Agent>> snapshots,
                                  const EconomicDomain& domain, const GridSpec& grid, int types);
AggregateField aggregate_expected(std::span<const std::vector<Agent>> snapshots,
                                  const EconomicDomain& domain, const GridSpec& grid, int types);

// Component-wise sums over expectation types, one entry per cell.
std::vector<TypeCellEntry> totals_over_types(const AggregateField& field);

// Domain integrals: cells hold extensive quantities, so integration is the
// plain sum over cells. per_type[k] plus the all-type total.
struct GlobalTotals {
  std::vector<TypeCellEntry> per_type;
  TypeCellEntry total;
};
GlobalTotals integrate_domain(const AggregateField& field);

// One row per (cell, type); undefined ratios as empty cells.
void write_csv(const AggregateField& field, std::ostream& os,
               const std::vector<std::string>& header_comments);

// Per-cell advecting velocity for the continuity stepper. Cells where the
// ratio is undefined carry nothing and so advect at zero.
enum class VelocityChannel { volume, value, expected_volume, expected_value };
std::vector<Vec3> advection_velocity(const AggregateField& field, int type,
                                     VelocityChannel channel);

}  // namespace riskflow::aggregate

#endif
