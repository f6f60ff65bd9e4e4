#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "sidelink/errors.hpp"
#include "sidelink/knapsack.hpp"
#include "sidelink/rng.hpp"

using namespace sidelink;

namespace {

constexpr double kResolution = 10e3; // 10 kbit/s

KnapsackInstance instance(std::vector<double> rates_mbps, double budget_mbps) {
    KnapsackInstance ins;
    int id = 1;
    for (double r : rates_mbps) ins.item_rates.push_back({id++, r * 1e6});
    ins.budget = budget_mbps * 1e6;
    return ins;
}

} // namespace

TEST_CASE("greedy-looking traps are solved exactly") {
    // {4.1, 4.0, 3.9} with budget 7.8: the best pair 4.0+3.9 busts,
    // 4.1+3.9 busts too, so the single 4.1 wins
    const auto sel = knapsack_select(instance({4.1, 4.0, 3.9}, 7.8),
                                     kResolution);
    CHECK(sel.items == std::vector<int>{1});
    CHECK(sel.total == doctest::Approx(4.1e6));
}

TEST_CASE("budget below every item selects nothing") {
    const auto sel = knapsack_select(instance({1.0, 2.0, 3.0}, 0.5),
                                     kResolution);
    CHECK(sel.items.empty());
    CHECK(sel.total == 0.0);
}

TEST_CASE("whole set fits when the budget allows") {
    const auto sel = knapsack_select(instance({1.0, 2.0, 3.0}, 7.0),
                                     kResolution);
    CHECK(sel.items == std::vector<int>{1, 2, 3});
    CHECK(sel.total == doctest::Approx(6e6));
}

TEST_CASE("forbidden items are skipped") {
    KnapsackInstance ins = instance({4.0, 3.0, 2.0}, 6.0);
    ins.forbidden = {1};
    const auto sel = knapsack_select(ins, kResolution);
    CHECK(sel.items == std::vector<int>{2, 3});
    CHECK(sel.total == doctest::Approx(5e6));
}

TEST_CASE("selection never exceeds the budget") {
    Rng rng(5);
    for (int it = 0; it < 500; ++it) {
        KnapsackInstance ins;
        const int n = 1 + static_cast<int>(rng.uniform_index(10));
        for (int i = 1; i <= n; ++i)
            ins.item_rates.push_back({i, rng.uniform_real(0.0, 13e6)});
        ins.budget = rng.uniform_real(1e5, 13e6);
        const auto sel = knapsack_select(ins, kResolution);
        CHECK(sel.total <= ins.budget);
        double sum = 0.0;
        for (int id : sel.items) sum += ins.item_rates[id - 1].second;
        CHECK(sel.total == doctest::Approx(sum));
    }
}

TEST_CASE("quantized DP lands within resolution times item count of brute") {
    Rng rng(17);
    for (int it = 0; it < 1000; ++it) {
        KnapsackInstance ins;
        const int n = 1 + static_cast<int>(rng.uniform_index(10));
        for (int i = 1; i <= n; ++i)
            ins.item_rates.push_back({i, rng.uniform_real(0.0, 13e6)});
        ins.budget = rng.uniform_real(1e5, 13e6);
        const auto fast = knapsack_select(ins, kResolution);
        const auto brute = knapsack_brute(ins);
        CHECK(fast.total <= ins.budget);
        CHECK(fast.total >= brute.total - kResolution * n);
    }
}

TEST_CASE("DP agrees item-for-item with its quantized oracle") {
    Rng rng(23);
    for (int it = 0; it < 500; ++it) {
        KnapsackInstance ins;
        const int n = 1 + static_cast<int>(rng.uniform_index(8));
        for (int i = 1; i <= n; ++i)
            ins.item_rates.push_back({i, rng.uniform_real(0.0, 13e6)});
        ins.budget = rng.uniform_real(1e5, 13e6);
        if (rng.uniform_index(3) == 0) ins.forbidden = {1};
        const auto fast = knapsack_select(ins, kResolution);
        const auto oracle = knapsack_brute_quantized(ins, kResolution);
        CHECK(fast.items == oracle.items);
        CHECK(fast.total == oracle.total);
    }
}

TEST_CASE("ties prefer smaller exact sum, then fewer items, then ids") {
    // both {1} and {2} quantize to the same floor value; item 2's
    // exact rate is lower, so it wins
    {
        KnapsackInstance ins;
        ins.item_rates = {{1, 1.009e6}, {2, 1.001e6}};
        ins.budget = 1.5e6;
        const auto sel = knapsack_select(ins, kResolution);
        CHECK(sel.items == std::vector<int>{2});
    }
    // identical exact sums: one item beats two
    {
        KnapsackInstance ins;
        ins.item_rates = {{1, 1e6}, {2, 2e6}, {3, 3e6}};
        ins.budget = 3e6;
        const auto sel = knapsack_select(ins, kResolution);
        CHECK(sel.items == std::vector<int>{3});
    }
    // same sum, same size: lexicographically smallest id sequence
    {
        KnapsackInstance ins;
        ins.item_rates = {{1, 2e6}, {2, 2e6}, {3, 2e6}};
        ins.budget = 4e6;
        const auto sel = knapsack_select(ins, kResolution);
        CHECK(sel.items == std::vector<int>{1, 2});
    }
}

TEST_CASE("zero-rate items are harmless") {
    const auto sel = knapsack_select(instance({0.0, 2.0}, 1.0), kResolution);
    // the zero item fits any budget but adds nothing; tie order
    // prefers fewer items, so the empty set wins
    CHECK(sel.items.empty());
    CHECK(sel.total == 0.0);
}

TEST_CASE("guards reject nonsense") {
    KnapsackInstance ins = instance({1.0}, 1.0);
    CHECK_THROWS_AS(knapsack_select(ins, 0.0), ConfigInvalid);
    CHECK_THROWS_AS(knapsack_select(ins, -5.0), ConfigInvalid);
    KnapsackInstance bad = ins;
    bad.budget = 0.0;
    CHECK_THROWS_AS(knapsack_select(bad, kResolution), ConfigInvalid);
    bad.budget = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(knapsack_select(bad, kResolution), NonFiniteInput);

    KnapsackInstance big;
    for (int i = 1; i <= 21; ++i) big.item_rates.push_back({i, 1e6});
    big.budget = 5e6;
    CHECK_THROWS_AS(knapsack_brute(big), InstanceTooLarge);
    CHECK_NOTHROW(knapsack_select(big, kResolution));
}
