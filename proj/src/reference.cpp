#include "riskflow/reference.hpp"

#include <algorithm>
#include <cmath>

#include "riskflow/errors.hpp"

namespace riskflow::reference {

aggregate::AggregateField aggregate_direct(
    std::span<const std::vector<espace::Agent>> snapshots, const espace::EconomicDomain& domain,
    const espace::GridSpec& grid, int types) {
  espace::validate_domain(domain, grid);
  if (types < 1) throw ConfigError("aggregate: need at least one expectation type");
  if (snapshots.empty()) throw ConfigError("aggregate: window covers no steps");

  aggregate::AggregateField field;
  field.domain = domain;
  field.grid = grid;
  field.types = types;
  field.entries.assign(
      static_cast<std::size_t>(espace::cell_count(domain, grid)) * types, {});

  const std::size_t nagents = snapshots.front().size();
  const int nsteps = static_cast<int>(snapshots.size());
  std::vector<std::size_t> order(nagents);
  for (std::size_t i = 0; i < nagents; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return snapshots[0][a].id < snapshots[0][b].id;
  });

  for (std::size_t oi = 0; oi < nagents; ++oi) {
    for (int s = 0; s < nsteps; ++s) {
      const espace::Agent& agent = snapshots[s][order[oi]];
      const int c = espace::cell_index(agent.x, domain, grid);
      for (int k = 0; k < types; ++k) {
        const auto& tr = agent.trades[k];
        const auto& ex = agent.expectations[k];
        aggregate::TypeCellEntry& e = field.at(c, k);
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
  }
  const double inv_steps = 1.0 / static_cast<double>(nsteps);
  for (auto& e : field.entries) {
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
  return field;
}

std::vector<double> step_continuity_serial(const fieldsolve::Mesh& mesh,
                                           std::span<const double> field,
                                           const fieldsolve::VelocityField& velocity,
                                           std::span<const double> factor, double dt) {
  if (!(dt > 0.0) || dt > fieldsolve::max_stable_dt(mesh, velocity)) {
    throw NumericError("step_continuity_serial: stability bound violated");
  }
  const int n = mesh.ncells;
  // flux[i][c] = flux through the "+" face of cell c along axis i (zero on
  // the exterior boundary).
  std::vector<std::vector<double>> flux(mesh.dim, std::vector<double>(n, 0.0));
  for (int i = 0; i < mesh.dim; ++i) {
    const int s = mesh.stride[i];
    for (int c = 0; c < n; ++c) {
      const int ci = (c / s) % mesh.cells[i];
      if (ci + 1 >= mesh.cells[i]) continue;
      const double vf = 0.5 * (velocity[c][i] + velocity[c + s][i]);
      const double upwind = vf > 0.0 ? field[c] : field[c + s];
      flux[i][c] = vf * upwind * mesh.face_area[i];
    }
  }
  std::vector<double> next(field.size());
  const double inv_vol = 1.0 / mesh.cell_vol;
  for (int c = 0; c < n; ++c) {
    double net_outflow = 0.0;
    for (int i = 0; i < mesh.dim; ++i) {
      const int s = mesh.stride[i];
      const int ci = (c / s) % mesh.cells[i];
      if (ci + 1 < mesh.cells[i]) net_outflow += flux[i][c];
      if (ci > 0) net_outflow -= flux[i][c - s];
    }
    next[c] = field[c] + dt * (factor[c] - net_outflow * inv_vol);
  }
  return next;
}

}  // namespace riskflow::reference
