#include "sidelink/solver_mikp.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <string>

#include "sidelink/errors.hpp"
#include "sidelink/knapsack.hpp"

namespace sidelink {

std::vector<int> sort_clusters(const Scenario& scenario) {
    std::vector<int> order(static_cast<size_t>(scenario.n_clusters()));
    for (size_t j = 0; j < order.size(); ++j) order[j] = static_cast<int>(j);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return scenario.clusters()[static_cast<size_t>(a)].size() >
               scenario.clusters()[static_cast<size_t>(b)].size();
    });
    return order;
}

SubframeMatching match_subframes(const std::vector<int>& cluster,
                                 const SubframeMatching& fixed, int n_subframes,
                                 Rng& rng) {
    std::vector<int> members = cluster;
    std::sort(members.begin(), members.end());

    SubframeMatching result = fixed;
    std::set<int> occupied;
    std::vector<int> unplaced;
    for (int id : members) {
        const auto it = result.subframe_of.find(id);
        if (it == result.subframe_of.end()) {
            unplaced.push_back(id);
        } else if (!occupied.insert(it->second).second) {
            // Two members were pinned to the same subframe by earlier
            // clusters; the distinctness rule cannot hold anymore.
            throw InsufficientSubframes(
                "match_subframes: two fixed members share subframe " +
                std::to_string(it->second));
        }
    }

    std::vector<int> free;
    for (int f = 1; f <= n_subframes; ++f)
        if (!occupied.count(f)) free.push_back(f);
    if (unplaced.size() > free.size())
        throw InsufficientSubframes(
            "match_subframes: cluster needs " + std::to_string(unplaced.size()) +
            " free subframes, only " + std::to_string(free.size()) + " left");

    for (int id : unplaced) {
        const auto pick = static_cast<size_t>(
            rng.uniform_index(static_cast<std::uint64_t>(free.size())));
        result.subframe_of[id] = free[pick];
        free.erase(free.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return result;
}

SolveResult run_mikp(const Scenario& scenario, const ChannelGrid& grid,
                     const CapacityMap& capacities,
                     const ConstraintSystem& system, std::uint64_t seed,
                     double resolution) {
    const auto start = std::chrono::steady_clock::now();
    const int n = scenario.n_vehicles();
    const int K = grid.n_subchannels();
    if (!(capacities.grid == grid))
        throw InconsistentInputs(
            "run_mikp: capacity map was generated for a different grid");
    if (capacities.rates.rows() != n)
        throw ShapeMismatch("run_mikp: capacities have " +
                            std::to_string(capacities.rates.rows()) +
                            " rows for " + std::to_string(n) + " vehicles");

    Rng rng(seed);

    // One-hop neighbours per vehicle; only a neighbour sharing the
    // subframe can force subchannels out of a knapsack.
    std::vector<std::vector<int>> hop_neighbours(static_cast<size_t>(n) + 1);
    for (const auto& pair : system.hop_pairs) {
        hop_neighbours[static_cast<size_t>(pair.first)].push_back(pair.second);
        hop_neighbours[static_cast<size_t>(pair.second)].push_back(pair.first);
    }

    SolveResult result;
    result.assignment = Assignment::Zero(n, grid.total_subchannels());
    result.per_vehicle_rate = Vector::Zero(n);

    SubframeMatching matching;
    std::vector<char> allocated(static_cast<size_t>(n) + 1, 0);
    for (int j : sort_clusters(scenario)) {
        const auto& cluster = scenario.clusters()[static_cast<size_t>(j)];
        matching = match_subframes(cluster, matching, grid.n_subframes(), rng);

        // Subchannel selection for the members this cluster placed
        // (overlap members were already handled by an earlier
        // cluster), in ascending id.
        std::vector<int> members = cluster;
        std::sort(members.begin(), members.end());
        for (int id : members) {
            if (allocated[static_cast<size_t>(id)]) continue;
            allocated[static_cast<size_t>(id)] = 1;

            const int f = matching.subframe_of.at(id);
            const int base = (f - 1) * K; // 0-based first column of f

            KnapsackInstance instance;
            instance.budget = scenario.qos_of(id);
            for (int s = 0; s < K; ++s)
                instance.item_rates.push_back(
                    {base + s + 1, capacities.rates(id - 1, base + s)});
            for (int other : hop_neighbours[static_cast<size_t>(id)]) {
                const auto it = matching.subframe_of.find(other);
                if (it == matching.subframe_of.end() || it->second != f)
                    continue;
                for (int s = 0; s < K; ++s)
                    if (result.assignment(other - 1, base + s) != 0.0)
                        instance.forbidden.insert(base + s + 1);
            }

            const auto picked = knapsack_select(instance, resolution);
            for (int subchannel : picked.items)
                result.assignment(id - 1, subchannel - 1) = 1.0;
            result.per_vehicle_rate(id - 1) = picked.total;
            result.objective += picked.total;
        }
    }

    result.status = SolveStatus::heuristic;
    result.elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return result;
}

} // namespace sidelink
