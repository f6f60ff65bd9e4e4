#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "sidelink/channel.hpp"
#include "sidelink/constraints.hpp"
#include "sidelink/result.hpp"
#include "sidelink/rng.hpp"
#include "sidelink/scenario.hpp"
#include "sidelink/types.hpp"

namespace sidelink {

// Which subframe each already-placed vehicle transmits in. Grows
// cluster by cluster; vehicles placed through an earlier cluster keep
// their subframe in every later one.
struct SubframeMatching {
    std::map<int, int> subframe_of; // vehicle id -> subframe (1-based)
};

// Cluster positions (0-based indices into scenario.clusters()) sorted
// by descending member count, ties by ascending position. Larger
// clusters are placed first because they have the least freedom.
std::vector<int> sort_clusters(const Scenario& scenario);

// Extends `fixed` so that every member of `cluster` has a subframe
// and no two members share one. Members already placed keep their
// subframe (which counts as occupied within this cluster); the rest
// are visited in ascending id and each draws uniformly from the
// remaining free subframes. Throws InsufficientSubframes when the
// cluster needs more distinct subframes than exist — including the
// case where two already-placed members collide.
SubframeMatching match_subframes(const std::vector<int>& cluster,
                                 const SubframeMatching& fixed, int n_subframes,
                                 Rng& rng);

// Randomized multi-stage heuristic. Clusters are processed largest
// first; each cluster's members are given distinct subframes at
// random, then each newly placed member (ascending id) fills its
// subframe with the subchannel subset whose summed capacity best
// approaches its demanded rate from below — skipping subchannels a
// one-hop neighbour in the same subframe already claimed. The result
// is free of subframe, confinement and subchannel conflicts by
// construction; the demand window's lower edge is not guaranteed, so
// status is `heuristic` (never `optimal`). A cluster that cannot be
// placed propagates InsufficientSubframes.
SolveResult run_mikp(const Scenario& scenario, const ChannelGrid& grid,
                     const CapacityMap& capacities,
                     const ConstraintSystem& system, std::uint64_t seed,
                     double resolution);

} // namespace sidelink
