#include "riskflow/espace.hpp"

#include <cmath>

#include "riskflow/errors.hpp"

namespace riskflow::espace {

std::vector<std::string> domain_issues(const EconomicDomain& domain, const GridSpec& grid) {
  std::vector<std::string> issues;
  if (domain.dim < 1 || domain.dim > max_dim) {
    issues.push_back("dimension-out-of-range: dimension must be 1..3, got " +
                     std::to_string(domain.dim));
    return issues;  // axis checks below would index garbage
  }
  for (int i = 0; i < domain.dim; ++i) {
    if (!(domain.upper[i] > 0.0) || !std::isfinite(domain.upper[i])) {
      issues.push_back("non-positive bound: axis " + std::to_string(i) + " upper limit must be > 0");
    }
    if (grid.cells[i] < 1) {
      issues.push_back("zero cells: axis " + std::to_string(i) + " needs at least one cell");
    }
  }
  return issues;
}

void validate_domain(const EconomicDomain& domain, const GridSpec& grid) {
  auto issues = domain_issues(domain, grid);
  if (!issues.empty()) throw ConfigError(issues);
}

Vec3 cell_extents(const EconomicDomain& domain, const GridSpec& grid) {
  Vec3 ext{1.0, 1.0, 1.0};
  for (int i = 0; i < domain.dim; ++i) ext[i] = domain.upper[i] / grid.cells[i];
  return ext;
}

double cell_volume(const EconomicDomain& domain, const GridSpec& grid) {
  const Vec3 ext = cell_extents(domain, grid);
  double vol = 1.0;
  for (int i = 0; i < domain.dim; ++i) vol *= ext[i];
  return vol;
}

int cell_count(const EconomicDomain& domain, const GridSpec& grid) {
  int n = 1;
  for (int i = 0; i < domain.dim; ++i) n *= grid.cells[i];
  return n;
}

std::array<int, 3> cell_coords(const Vec3& x, const EconomicDomain& domain, const GridSpec& grid) {
  const Vec3 ext = cell_extents(domain, grid);
  std::array<int, 3> c{0, 0, 0};
  for (int i = 0; i < domain.dim; ++i) {
    if (!(x[i] >= 0.0) || !(x[i] <= domain.upper[i])) {
      throw NumericError("coordinate outside domain: axis " + std::to_string(i) + " value " +
                         std::to_string(x[i]) + " not in [0, " + std::to_string(domain.upper[i]) +
                         "]");
    }
    int idx = static_cast<int>(std::floor(x[i] / ext[i]));
    if (idx >= grid.cells[i]) idx = grid.cells[i] - 1;  // upper-edge clamp
    c[i] = idx;
  }
  return c;
}

int flat_index(const std::array<int, 3>& coords, const EconomicDomain& domain,
               const GridSpec& grid) {
  int idx = 0;
  for (int i = domain.dim - 1; i >= 0; --i) idx = idx * grid.cells[i] + coords[i];
  return idx;
}

int cell_index(const Vec3& x, const EconomicDomain& domain, const GridSpec& grid) {
  return flat_index(cell_coords(x, domain, grid), domain, grid);
}

std::vector<Agent> advance_agents(std::vector<Agent> agents, const EconomicDomain& domain,
                                  double dt) {
  if (!(dt > 0.0)) throw NumericError("advance_agents: dt must be > 0");
  for (Agent& a : agents) {
    for (int i = 0; i < domain.dim; ++i) {
      double xi = a.x[i] + a.v[i] * dt;
      if (xi < 0.0) {
        xi = 0.0;
        a.v[i] = 0.0;
      } else if (xi > domain.upper[i]) {
        xi = domain.upper[i];
        a.v[i] = 0.0;
      }
      a.x[i] = xi;
    }
  }
  return agents;
}

}  // namespace riskflow::espace
