#ifndef RISKFLOW_REFERENCE_HPP
#define RISKFLOW_REFERENCE_HPP

#include <span>
#include <vector>

#include "riskflow/aggregate.hpp"
#include "riskflow/fieldsolve.hpp"

// Serial reference implementations kept for testing and benchmarking. They
// take structurally different paths from the parallel kernels but perform
// the same arithmetic in the same order, so results must match bit for bit.
namespace riskflow::reference {

// Direct (agent id, then step) accumulation without the cell bucketing pass.
aggregate::AggregateField aggregate_direct(
    std::span<const std::vector<espace::Agent>> snapshots, const espace::EconomicDomain& domain,
    const espace::GridSpec& grid, int types);

// Plain-loop upwind step using precomputed per-axis face flux arrays.
std::vector<double> step_continuity_serial(const fieldsolve::Mesh& mesh,
                                           std::span<const double> field,
                                           const fieldsolve::VelocityField& velocity,
                                           std::span<const double> factor, double dt);

}  // namespace riskflow::reference

#endif
