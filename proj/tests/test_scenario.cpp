#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <limits>
#include <vector>

#include "sidelink/errors.hpp"
#include "sidelink/scenario.hpp"

using namespace sidelink;

namespace {

RawScenario worked_example() {
    // four vehicles, two overlapping clusters {1,2,3} and {1,2,4}
    RawScenario raw;
    raw.n_vehicles = 4;
    raw.clusters = {{1, 2, 3}, {1, 2, 4}};
    raw.qos = {1e6, 1e6, 1e6, 1e6};
    raw.epsilon = 0.0;
    return raw;
}

Vector qos_vec(std::initializer_list<double> v) {
    Vector q(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) q(i++) = x;
    return q;
}

} // namespace

TEST_CASE("validate_scenario accepts the worked example") {
    const Scenario s = validate_scenario(worked_example());
    CHECK(s.n_vehicles() == 4);
    CHECK(s.n_clusters() == 2);
    CHECK(s.qos_of(3) == 1e6);
    CHECK(s.epsilon() == 0.0);
}

TEST_CASE("validate_scenario names each defect") {
    RawScenario raw = worked_example();

    SUBCASE("empty cluster") {
        raw.clusters.push_back({});
        CHECK_THROWS_AS(validate_scenario(raw), EmptyCluster);
    }
    SUBCASE("unknown vehicle id") {
        raw.clusters[0] = {1, 2, 5};
        CHECK_THROWS_AS(validate_scenario(raw), UnknownVehicleId);
    }
    SUBCASE("id zero is unknown") {
        raw.clusters[0] = {0, 2, 3};
        CHECK_THROWS_AS(validate_scenario(raw), UnknownVehicleId);
    }
    SUBCASE("duplicate id within a cluster") {
        raw.clusters[0] = {1, 2, 2};
        CHECK_THROWS_AS(validate_scenario(raw), DuplicateVehicleId);
    }
    SUBCASE("vehicle in no cluster") {
        raw.clusters = {{1, 2, 3}};
        CHECK_THROWS_AS(validate_scenario(raw), UncoveredVehicle);
    }
    SUBCASE("non-positive qos") {
        raw.qos[2] = 0.0;
        CHECK_THROWS_AS(validate_scenario(raw), NonPositiveQos);
    }
    SUBCASE("non-finite qos") {
        raw.qos[0] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(validate_scenario(raw), NonFiniteInput);
    }
    SUBCASE("negative epsilon") {
        raw.epsilon = -1.0;
        CHECK_THROWS_AS(validate_scenario(raw), NegativeEpsilon);
    }
    SUBCASE("no vehicles") {
        raw.n_vehicles = 0;
        raw.clusters = {};
        raw.qos = {};
        CHECK_THROWS_AS(validate_scenario(raw), ConfigInvalid);
    }
}

TEST_CASE("intra_cluster_pairs of the worked example") {
    const Scenario s = validate_scenario(worked_example());
    const auto pairs = intra_cluster_pairs(s);
    // shared-cluster pairs, lexicographic, each once: v3 and v4
    // never share a cluster
    REQUIRE(pairs.size() == 5);
    const std::vector<std::pair<int, int>> want = {
        {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}};
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(pairs[i].first == want[i].first);
        CHECK(pairs[i].second == want[i].second);
        CHECK(pairs[i].kind == PairKind::intra_cluster);
    }
}

TEST_CASE("one_hop_pairs of the worked example") {
    const Scenario s = validate_scenario(worked_example());
    const auto pairs = one_hop_pairs(s);
    // v3 and v4 see each other only through the shared members 1 and 2
    REQUIRE(pairs.size() == 1);
    CHECK(pairs[0].first == 3);
    CHECK(pairs[0].second == 4);
    CHECK(pairs[0].kind == PairKind::one_hop);
}

TEST_CASE("pair lists are deduplicated and ordered") {
    // three clusters chained: {1,2}, {2,3}, {3,4}
    const Scenario s(4, {{1, 2}, {2, 3}, {3, 4}},
                     qos_vec({1e6, 1e6, 1e6, 1e6}), 0.0);
    const auto intra = intra_cluster_pairs(s);
    REQUIRE(intra.size() == 3);
    CHECK(intra[0].first == 1);
    CHECK(intra[0].second == 2);
    CHECK(intra[2].first == 3);
    CHECK(intra[2].second == 4);

    // (1,3) via cluster pair 1-2, (2,4) via 2-3; (1,4) shares no cluster
    // and no overlapping-cluster membership pair, (1,3) counted once
    const auto hop = one_hop_pairs(s);
    REQUIRE(hop.size() == 2);
    CHECK(hop[0].first == 1);
    CHECK(hop[0].second == 3);
    CHECK(hop[1].first == 2);
    CHECK(hop[1].second == 4);
}

TEST_CASE("intra pairs exclude vehicles in disjoint clusters") {
    const Scenario s(4, {{1, 2}, {3, 4}}, qos_vec({1e6, 1e6, 1e6, 1e6}), 0.0);
    const auto intra = intra_cluster_pairs(s);
    REQUIRE(intra.size() == 2);
    CHECK(one_hop_pairs(s).empty()); // disjoint clusters never overlap
}

TEST_CASE("one_hop excludes pairs that are already intra") {
    // 1 and 2 share cluster A; both also overlap cluster B through 3
    const Scenario s(3, {{1, 2}, {1, 3}, {2, 3}},
                     qos_vec({1e6, 1e6, 1e6}), 0.0);
    CHECK(intra_cluster_pairs(s).size() == 3);
    CHECK(one_hop_pairs(s).empty());
}

TEST_CASE("qos_of rejects out-of-range ids") {
    const Scenario s = validate_scenario(worked_example());
    CHECK_THROWS_AS(s.qos_of(0), UnknownVehicleId);
    CHECK_THROWS_AS(s.qos_of(5), UnknownVehicleId);
}
