#ifndef RISKFLOW_FIELDSOLVE_HPP
#define RISKFLOW_FIELDSOLVE_HPP

#include <array>
#include <span>
#include <vector>

#include "riskflow/espace.hpp"

namespace riskflow::fieldsolve {

using espace::EconomicDomain;
using espace::GridSpec;
using espace::Vec3;

// Geometry cache for the structured grid: strides, cell extents, face areas.
struct Mesh {
  EconomicDomain domain;
  GridSpec grid;
  int dim = 1;
  int ncells = 1;
  std::array<int, 3> cells{1, 1, 1};
  std::array<int, 3> stride{1, 1, 1};
  Vec3 extent{1.0, 1.0, 1.0};
  Vec3 face_area{1.0, 1.0, 1.0};  // area of a face normal to each axis
  double cell_vol = 1.0;

  static Mesh make(const EconomicDomain& domain, const GridSpec& grid);
};

// Per-cell advecting velocity; empty cells must already be mapped to zero.
using VelocityField = std::vector<Vec3>;

// Advisory stability bound dt <= safety * min_i(extent_i / max|v_i|).
double max_stable_dt(const Mesh& mesh, const VelocityField& velocity, double safety = 0.9);

// Largest dt for which the upwind update keeps nonnegative fields
// nonnegative (sum of per-axis outflow CFL numbers <= safety).
double positivity_time_step(const Mesh& mesh, const VelocityField& velocity,
                            double safety = 0.9);

// One explicit upwind finite-volume step of  df/dt + div(f v) = factor.
// Face velocity is the mean of the adjacent cell velocities; the upwind
// cell's value is carried; every exterior face has zero flux. Throws
// NumericError when dt violates the advisory bound or inputs are not finite.
std::vector<double> step_continuity(const Mesh& mesh, std::span<const double> field,
                                    const VelocityField& velocity,
                                    std::span<const double> factor, double dt);

double integrate(const Mesh& mesh, std::span<const double> field);

// |d/dt integral(f) - integral(factor)| per step for a stepper-produced
// trajectory; interior fluxes cancel pairwise so this vanishes to rounding.
std::vector<double> balance_residuals(const Mesh& mesh,
                                      std::span<const std::vector<double>> trajectory,
                                      std::span<const std::vector<double>> factors, double dt);

// Two fields advancing together under the pointwise linear cross-coupling
// factor_a = coeff_a * b, factor_b = coeff_b * a (factors taken from the
// pre-step fields). Records the domain integrals of both fields per step.
struct CoupledTrajectory {
  std::vector<double> time;
  std::vector<double> integral_a;
  std::vector<double> integral_b;
  std::vector<double> field_a;  // final state
  std::vector<double> field_b;
};
CoupledTrajectory run_coupled_linear(const Mesh& mesh, std::vector<double> field_a,
                                     std::vector<double> field_b, const VelocityField& velocity_a,
                                     const VelocityField& velocity_b, double coeff_a,
                                     double coeff_b, double dt, long steps);

}  // namespace riskflow::fieldsolve

#endif
