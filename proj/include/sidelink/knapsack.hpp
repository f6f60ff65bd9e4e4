#pragma once

#include <set>
#include <utility>
#include <vector>

namespace sidelink {

// One per-vehicle selection problem: offered subchannels with their
// achievable rates, the demanded rate as budget, and subchannels that
// neighbours already claimed. Item ids are global subchannel indices.
struct KnapsackInstance {
    std::vector<std::pair<int, double>> item_rates; // (subchannel id, bit/s)
    double budget = 0.0;                            // bit/s, > 0
    std::set<int> forbidden;                        // subchannel ids to skip
};

// Outcome of a selection: chosen subchannel ids in ascending order
// plus their exact summed rate.
struct KnapsackSelection {
    std::vector<int> items;
    double total = 0.0;
};

// Pick the admissible subset whose summed rate approaches the budget
// from below as closely as the quantization allows, never exceeding
// it. Rates are quantized to multiples of `resolution` (floor), a
// dynamic program maximizes the quantized sum, and the exact
// (unquantized) sum of the winner is guaranteed <= budget; it is
// within n_items * resolution of the best exact subset sum <= budget.
//
// Deterministic tie order among subsets with equal quantized sum:
// smaller exact sum, then fewer items, then lexicographically
// smallest id sequence.
KnapsackSelection knapsack_select(const KnapsackInstance& instance,
                                  double resolution);

// Reference optimum by exhaustive enumeration, maximizing the exact
// sum <= budget directly (no quantization), same tie order. Guarded
// to at most 20 admissible items.
KnapsackSelection knapsack_brute(const KnapsackInstance& instance);

// Exhaustive oracle for knapsack_select itself: maximizes the
// floor-quantized sum subject to exact sum <= budget with identical
// tie-breaking, so it must agree with knapsack_select item-for-item.
KnapsackSelection knapsack_brute_quantized(const KnapsackInstance& instance,
                                           double resolution);

} // namespace sidelink
