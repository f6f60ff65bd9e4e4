#pragma once

#include <cstdint>

#include "sidelink/channel.hpp"
#include "sidelink/constraints.hpp"
#include "sidelink/result.hpp"
#include "sidelink/scenario.hpp"

namespace sidelink {

// Controls for the exact branch-and-bound search.  A limit of zero
// means unlimited; hitting either limit yields SolveStatus::timeout.
// enable_pruning exists so tests can re-run the identical decision
// space without bound/feasibility cuts and confirm the same optimum.
struct SolverOptions {
    double time_limit = 0.0;
    std::uint64_t node_limit = 0;
    bool enable_pruning = true;
};

// Optimal allocation by branch and bound.  Vehicles are branched over
// subframes in descending demanded rate (ties by ascending id); the
// subchannel subsets inside each subframe are chosen jointly and
// exactly, so the value reported for a partial subframe assignment is
// never an estimate.  Among equal-objective optima the returned
// assignment matrix is the lexicographically smallest flattened
// vehicle-major 0/1 vector.  Returns status infeasible when no
// assignment satisfies every rate window and pairwise rule, timeout
// when a limit was hit first.
SolveResult solve_exact(const Scenario& scenario, const ChannelGrid& grid,
                        const CapacityMap& capacities,
                        const ConstraintSystem& system,
                        const SolverOptions& options = {});

// Exhaustive reference solver: enumerates every vehicle's admissible
// rows (rate window met inside a single subframe) and checks pair
// rules incrementally.  Same tie-breaking as solve_exact.  Guarded to
// tiny instances: at most 48 grid cells per vehicle set, at most 16
// subchannels, and a worst-case enumeration below 2^24 paths; larger
// input throws InstanceTooLarge.
SolveResult brute_force_solve(const Scenario& scenario,
                              const ChannelGrid& grid,
                              const CapacityMap& capacities,
                              const ConstraintSystem& system);

} // namespace sidelink
