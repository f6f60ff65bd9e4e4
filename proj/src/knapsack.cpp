#include "sidelink/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "sidelink/errors.hpp"

namespace sidelink {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Admissible items in ascending subchannel id, so positional
// lexicographic order coincides with id order.
struct Items {
    std::vector<int> ids;
    std::vector<double> rates;
};

Items admissible_items(const KnapsackInstance& instance) {
    if (!std::isfinite(instance.budget))
        throw NonFiniteInput("knapsack: budget is not finite");
    if (instance.budget <= 0.0)
        throw ConfigInvalid("knapsack: budget must be positive");
    Items items;
    for (const auto& [id, rate] : instance.item_rates) {
        if (!std::isfinite(rate))
            throw NonFiniteInput("knapsack: rate of subchannel " +
                                 std::to_string(id) + " is not finite");
        if (rate < 0.0)
            throw ConfigInvalid("knapsack: rate of subchannel " +
                                std::to_string(id) + " is negative");
        if (instance.forbidden.count(id)) continue;
        items.ids.push_back(id);
        items.rates.push_back(rate);
    }
    // Keep ids ascending regardless of input order.
    std::vector<size_t> perm(items.ids.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::sort(perm.begin(), perm.end(), [&](size_t a, size_t b) {
        return items.ids[a] < items.ids[b];
    });
    Items sorted;
    for (size_t i : perm) {
        sorted.ids.push_back(items.ids[i]);
        sorted.rates.push_back(items.rates[i]);
    }
    return sorted;
}

int popcount64(std::uint64_t mask) { return __builtin_popcountll(mask); }

// True when the selection encoded by `a` precedes the one encoded by
// `b` lexicographically as an ascending index sequence. Only called
// for equal popcounts, where the first index in exactly one of the
// two masks decides: the mask owning it starts with the smaller index.
bool lex_before(std::uint64_t a, std::uint64_t b) {
    const std::uint64_t diff = a ^ b;
    if (diff == 0) return false;
    const std::uint64_t lowest = diff & (~diff + 1);
    return (a & lowest) != 0;
}

// Deterministic preference between two selections with equal primary
// objective: smaller exact sum, then fewer items, then lexicographic.
bool prefer(double sum_a, std::uint64_t mask_a, double sum_b,
            std::uint64_t mask_b) {
    if (sum_a != sum_b) return sum_a < sum_b;
    const int ca = popcount64(mask_a);
    const int cb = popcount64(mask_b);
    if (ca != cb) return ca < cb;
    return lex_before(mask_a, mask_b);
}

KnapsackSelection selection_from_mask(const Items& items, std::uint64_t mask,
                                      double total) {
    KnapsackSelection sel;
    for (size_t i = 0; i < items.ids.size(); ++i)
        if (mask & (std::uint64_t{1} << i)) sel.items.push_back(items.ids[i]);
    sel.total = total;
    return sel;
}

} // namespace

KnapsackSelection knapsack_select(const KnapsackInstance& instance,
                                  double resolution) {
    if (!std::isfinite(resolution))
        throw NonFiniteInput("knapsack_select: resolution is not finite");
    if (resolution <= 0.0)
        throw ConfigInvalid("knapsack_select: resolution must be positive");
    const Items items = admissible_items(instance);
    if (items.ids.size() > 64)
        throw InstanceTooLarge("knapsack_select: more than 64 items");
    const double levels = std::floor(instance.budget / resolution);
    if (levels > 1e7)
        throw InstanceTooLarge(
            "knapsack_select: budget/resolution exceeds 1e7 levels");

    const int W = static_cast<int>(levels);
    // dp[s]: preferred known selection whose quantized sum is exactly
    // s. Keeping the smallest exact sum per level guarantees that if
    // any selection at level s fits the exact budget, dp[s] does too.
    std::vector<double> best_sum(static_cast<size_t>(W) + 1, kInf);
    std::vector<std::uint64_t> best_mask(static_cast<size_t>(W) + 1, 0);
    best_sum[0] = 0.0;

    for (size_t i = 0; i < items.rates.size(); ++i) {
        const int w = static_cast<int>(std::floor(items.rates[i] / resolution));
        if (w > W) continue; // exceeds every level on its own
        const std::uint64_t bit = std::uint64_t{1} << i;
        for (int s = W; s >= w; --s) {
            if (best_sum[static_cast<size_t>(s - w)] == kInf) continue;
            const double cand_sum =
                best_sum[static_cast<size_t>(s - w)] + items.rates[i];
            const std::uint64_t cand_mask =
                best_mask[static_cast<size_t>(s - w)] | bit;
            if (best_sum[static_cast<size_t>(s)] == kInf ||
                prefer(cand_sum, cand_mask, best_sum[static_cast<size_t>(s)],
                       best_mask[static_cast<size_t>(s)])) {
                best_sum[static_cast<size_t>(s)] = cand_sum;
                best_mask[static_cast<size_t>(s)] = cand_mask;
            }
        }
    }

    // Highest quantized level whose preferred selection still fits
    // the exact budget; level 0 (empty selection) always fits.
    for (int s = W; s >= 0; --s)
        if (best_sum[static_cast<size_t>(s)] <= instance.budget)
            return selection_from_mask(items, best_mask[static_cast<size_t>(s)],
                                       best_sum[static_cast<size_t>(s)]);
    return {}; // unreachable: level 0 fits
}

namespace {

KnapsackSelection brute_common(const KnapsackInstance& instance,
                               double resolution, bool quantized) {
    const Items items = admissible_items(instance);
    const size_t n = items.ids.size();
    if (n > 20)
        throw InstanceTooLarge("knapsack_brute: more than 20 items");
    double best_objective = -1.0;
    double best_sum = kInf;
    std::uint64_t best_mask = 0;
    bool have = false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double sum = 0.0;
        double objective = 0.0;
        for (size_t i = 0; i < n; ++i) {
            if (!(mask & (std::uint64_t{1} << i))) continue;
            sum += items.rates[i];
            if (quantized) objective += std::floor(items.rates[i] / resolution);
        }
        if (!quantized) objective = sum;
        if (sum > instance.budget) continue;
        if (!have || objective > best_objective ||
            (objective == best_objective &&
             prefer(sum, mask, best_sum, best_mask))) {
            have = true;
            best_objective = objective;
            best_sum = sum;
            best_mask = mask;
        }
    }
    return selection_from_mask(items, best_mask, best_sum);
}

} // namespace

KnapsackSelection knapsack_brute(const KnapsackInstance& instance) {
    return brute_common(instance, 1.0, false);
}

KnapsackSelection knapsack_brute_quantized(const KnapsackInstance& instance,
                                           double resolution) {
    if (!std::isfinite(resolution))
        throw NonFiniteInput("knapsack_brute_quantized: resolution not finite");
    if (resolution <= 0.0)
        throw ConfigInvalid(
            "knapsack_brute_quantized: resolution must be positive");
    return brute_common(instance, resolution, true);
}

} // namespace sidelink
