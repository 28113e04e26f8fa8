#include "riskflow/fieldsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "riskflow/errors.hpp"

namespace riskflow::fieldsolve {

Mesh Mesh::make(const EconomicDomain& domain, const GridSpec& grid) {
  espace::validate_domain(domain, grid);
  Mesh m;
  m.domain = domain;
  m.grid = grid;
  m.dim = domain.dim;
  m.cells = grid.cells;
  m.extent = espace::cell_extents(domain, grid);
  m.ncells = espace::cell_count(domain, grid);
  m.cell_vol = espace::cell_volume(domain, grid);
  int s = 1;
  for (int i = 0; i < m.dim; ++i) {
    m.stride[i] = s;
    s *= m.cells[i];
  }
  for (int i = 0; i < m.dim; ++i) m.face_area[i] = m.cell_vol / m.extent[i];
  return m;
}

namespace {

void check_sizes(const Mesh& mesh, std::size_t field, std::size_t vel, std::size_t factor) {
  if (field != static_cast<std::size_t>(mesh.ncells) ||
      vel != static_cast<std::size_t>(mesh.ncells) ||
      factor != static_cast<std::size_t>(mesh.ncells)) {
    throw NumericError("step_continuity: field/velocity/factor size does not match the grid");
  }
}

bool all_finite(std::span<const double> v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

bool all_finite(const VelocityField& v, int dim) {
  for (const auto& a : v)
    for (int i = 0; i < dim; ++i)
      if (!std::isfinite(a[i])) return false;
  return true;
}

// Decompose a flat index into per-axis coordinates on demand.
inline int coord_of(const Mesh& m, int cell, int axis) {
  return (cell / m.stride[axis]) % m.cells[axis];
}

}  // namespace

double max_stable_dt(const Mesh& mesh, const VelocityField& velocity, double safety) {
  double bound = std::numeric_limits<double>::infinity();
  for (int i = 0; i < mesh.dim; ++i) {
    double vmax = 0.0;
    for (const auto& v : velocity) vmax = std::max(vmax, std::abs(v[i]));
    if (vmax > 0.0) bound = std::min(bound, mesh.extent[i] / vmax);
  }
  return safety * bound;
}

double positivity_time_step(const Mesh& mesh, const VelocityField& velocity, double safety) {
  double worst = 0.0;  // max over cells of sum_i outflow_speed_i / extent_i
  for (int c = 0; c < mesh.ncells; ++c) {
    double rate = 0.0;
    for (int i = 0; i < mesh.dim; ++i) {
      const int ci = coord_of(mesh, c, i);
      double out = 0.0;
      if (ci + 1 < mesh.cells[i]) {
        const double vf = 0.5 * (velocity[c][i] + velocity[c + mesh.stride[i]][i]);
        out += std::max(vf, 0.0);
      }
      if (ci > 0) {
        const double vf = 0.5 * (velocity[c - mesh.stride[i]][i] + velocity[c][i]);
        out += std::max(-vf, 0.0);
      }
      rate += out / mesh.extent[i];
    }
    worst = std::max(worst, rate);
  }
  if (worst == 0.0) return std::numeric_limits<double>::infinity();
  return safety / worst;
}

namespace {

inline double cell_update(const Mesh& mesh, std::span<const double> field,
                          const VelocityField& velocity, std::span<const double> factor,
                          double dt, double inv_vol, int c) {
  double net_outflow = 0.0;  // sum of signed face fluxes, outward positive
  for (int i = 0; i < mesh.dim; ++i) {
    const int ci = coord_of(mesh, c, i);
    const int s = mesh.stride[i];
    // "+" face: flux leaving c toward the upper neighbor.
    if (ci + 1 < mesh.cells[i]) {
      const double vf = 0.5 * (velocity[c][i] + velocity[c + s][i]);
      const double upwind = vf > 0.0 ? field[c] : field[c + s];
      net_outflow += vf * upwind * mesh.face_area[i];
    }
    // "-" face: flux entering c from the lower neighbor (same expression
    // the neighbor uses for its "+" face, so cancellation is exact).
    if (ci > 0) {
      const double vf = 0.5 * (velocity[c - s][i] + velocity[c][i]);
      const double upwind = vf > 0.0 ? field[c - s] : field[c];
      net_outflow -= vf * upwind * mesh.face_area[i];
    }
  }
  return field[c] + dt * (factor[c] - net_outflow * inv_vol);
}

// Small grids skip the OpenMP region entirely; its entry cost dwarfs the
// per-cell arithmetic below a few thousand cells.
void step_into(const Mesh& mesh, std::span<const double> field, const VelocityField& velocity,
               std::span<const double> factor, double dt, std::vector<double>& next) {
  const double inv_vol = 1.0 / mesh.cell_vol;
  if (mesh.ncells >= 4096) {
#pragma omp parallel for schedule(static)
    for (int c = 0; c < mesh.ncells; ++c) {
      next[c] = cell_update(mesh, field, velocity, factor, dt, inv_vol, c);
    }
  } else {
    for (int c = 0; c < mesh.ncells; ++c) {
      next[c] = cell_update(mesh, field, velocity, factor, dt, inv_vol, c);
    }
  }
}

void validate_step(const Mesh& mesh, std::span<const double> field,
                   const VelocityField& velocity, std::span<const double> factor, double dt) {
  check_sizes(mesh, field.size(), velocity.size(), factor.size());
  if (!(dt > 0.0)) throw NumericError("step_continuity: dt must be > 0");
  const double bound = max_stable_dt(mesh, velocity);
  if (dt > bound) {
    throw NumericError("step_continuity: stability bound violated, dt = " + std::to_string(dt) +
                       " exceeds " + std::to_string(bound));
  }
  if (!all_finite(field) || !all_finite(factor) || !all_finite(velocity, mesh.dim)) {
    throw NumericError("step_continuity: non-finite input");
  }
}

}  // namespace

std::vector<double> step_continuity(const Mesh& mesh, std::span<const double> field,
                                    const VelocityField& velocity,
                                    std::span<const double> factor, double dt) {
  validate_step(mesh, field, velocity, factor, dt);
  std::vector<double> next(field.size());
  step_into(mesh, field, velocity, factor, dt, next);
  return next;
}

double integrate(const Mesh& mesh, std::span<const double> field) {
  double sum = 0.0;
  for (double f : field) sum += f;
  return sum * mesh.cell_vol;
}

std::vector<double> balance_residuals(const Mesh& mesh,
                                      std::span<const std::vector<double>> trajectory,
                                      std::span<const std::vector<double>> factors, double dt) {
  if (trajectory.size() < 2) return {};
  if (factors.size() + 1 < trajectory.size()) {
    throw NumericError("balance_residuals: need one factor field per step");
  }
  std::vector<double> residuals;
  residuals.reserve(trajectory.size() - 1);
  for (std::size_t s = 0; s + 1 < trajectory.size(); ++s) {
    const double before = integrate(mesh, trajectory[s]);
    const double after = integrate(mesh, trajectory[s + 1]);
    const double source = integrate(mesh, factors[s]);
    residuals.push_back(std::abs((after - before) / dt - source));
  }
  return residuals;
}

CoupledTrajectory run_coupled_linear(const Mesh& mesh, std::vector<double> field_a,
                                     std::vector<double> field_b, const VelocityField& velocity_a,
                                     const VelocityField& velocity_b, double coeff_a,
                                     double coeff_b, double dt, long steps) {
  validate_step(mesh, field_a, velocity_a, field_b, dt);
  validate_step(mesh, field_b, velocity_b, field_a, dt);

  CoupledTrajectory out;
  out.time.reserve(steps + 1);
  out.integral_a.reserve(steps + 1);
  out.integral_b.reserve(steps + 1);
  std::vector<double> factor_a(field_a.size()), factor_b(field_b.size());
  std::vector<double> next_a(field_a.size()), next_b(field_b.size());
  out.time.push_back(0.0);
  out.integral_a.push_back(integrate(mesh, field_a));
  out.integral_b.push_back(integrate(mesh, field_b));
  for (long s = 0; s < steps; ++s) {
    for (std::size_t c = 0; c < field_a.size(); ++c) {
      factor_a[c] = coeff_a * field_b[c];
      factor_b[c] = coeff_b * field_a[c];
    }
    step_into(mesh, field_a, velocity_a, factor_a, dt, next_a);
    step_into(mesh, field_b, velocity_b, factor_b, dt, next_b);
    field_a.swap(next_a);
    field_b.swap(next_b);
    out.time.push_back(dt * static_cast<double>(s + 1));
    const double ia = integrate(mesh, field_a);
    const double ib = integrate(mesh, field_b);
    if (!std::isfinite(ia) || !std::isfinite(ib)) {
      throw NumericError("run_coupled_linear: field diverged at step " + std::to_string(s + 1));
    }
    out.integral_a.push_back(ia);
    out.integral_b.push_back(ib);
  }
  out.field_a = std::move(field_a);
  out.field_b = std::move(field_b);
  return out;
}

}  // namespace riskflow::fieldsolve
