#ifndef RISKFLOW_ESPACE_HPP
#define RISKFLOW_ESPACE_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace riskflow::espace {

inline constexpr int max_dim = 3;

using Vec3 = std::array<double, 3>;

// Bounded box of risk coordinates: 0 <= x_i <= upper[i] on each of dim axes.
struct EconomicDomain {
  int dim = 1;
  Vec3 upper{1.0, 0.0, 0.0};
};

struct GridSpec {
  std::array<int, 3> cells{1, 1, 1};
};

// Extensive two-component quantity: trade volume (asset units) and trade
// value (currency units). Component-wise additive over any agent grouping.
struct TransactionPair {
  double volume = 0.0;
  double value = 0.0;

  TransactionPair& operator+=(const TransactionPair& o) {
    volume += o.volume;
    value += o.value;
    return *this;
  }
  friend TransactionPair operator+(TransactionPair a, const TransactionPair& b) {
    a += b;
    return a;
  }
};

// Dimensionless expectation levels attached to the volume and value
// components of an agent's trades under one expectation type.
struct ExpectationPair {
  double volume = 1.0;
  double value = 1.0;
};

struct Agent {
  std::int64_t id = 0;
  Vec3 x{};  // risk coordinates, inside the domain
  Vec3 v{};  // risk drift per unit time
  std::vector<TransactionPair> trades;        // one per expectation type
  std::vector<ExpectationPair> expectations;  // one per expectation type
};

// Empty result means valid. Messages name the violated invariant.
std::vector<std::string> domain_issues(const EconomicDomain& domain, const GridSpec& grid);

// Throws ConfigError listing every violation.
void validate_domain(const EconomicDomain& domain, const GridSpec& grid);

Vec3 cell_extents(const EconomicDomain& domain, const GridSpec& grid);
double cell_volume(const EconomicDomain& domain, const GridSpec& grid);
int cell_count(const EconomicDomain& domain, const GridSpec& grid);

// Multi-index with c_i = floor(x_i / extent_i); the upper edge x_i = X_i
// lands in the last cell so the map is total on the closed domain.
// Throws NumericError for coordinates outside the domain.
std::array<int, 3> cell_coords(const Vec3& x, const EconomicDomain& domain, const GridSpec& grid);

int flat_index(const std::array<int, 3>& coords, const EconomicDomain& domain,
               const GridSpec& grid);

int cell_index(const Vec3& x, const EconomicDomain& domain, const GridSpec& grid);

// Straight-line motion x += v*dt. A component that would leave the domain is
// clamped to the boundary and its velocity zeroed; no agent exists outside.
std::vector<Agent> advance_agents(std::vector<Agent> agents, const EconomicDomain& domain,
                                  double dt);

}  // namespace riskflow::espace

#endif
