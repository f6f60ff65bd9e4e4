#include "sidelink/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "sidelink/errors.hpp"

namespace sidelink {

Scenario::Scenario(int n_vehicles,
                   std::vector<std::vector<int>> clusters,
                   Vector qos,
                   double epsilon)
    : n_vehicles_(n_vehicles),
      clusters_(std::move(clusters)),
      qos_(std::move(qos)),
      epsilon_(epsilon) {
    if (n_vehicles_ < 1)
        throw ConfigInvalid("scenario: need at least one vehicle, got " +
                            std::to_string(n_vehicles_));
    if (clusters_.empty())
        throw ConfigInvalid("scenario: need at least one cluster");
    if (qos_.size() != n_vehicles_)
        throw ShapeMismatch("scenario: qos has " + std::to_string(qos_.size()) +
                            " entries for " + std::to_string(n_vehicles_) +
                            " vehicles");

    std::vector<char> covered(static_cast<size_t>(n_vehicles_) + 1, 0);
    for (size_t j = 0; j < clusters_.size(); ++j) {
        const auto& members = clusters_[j];
        if (members.empty())
            throw EmptyCluster("scenario: cluster " + std::to_string(j + 1) +
                               " has no members");
        std::set<int> seen;
        for (int id : members) {
            if (id < 1 || id > n_vehicles_)
                throw UnknownVehicleId("scenario: cluster " +
                                       std::to_string(j + 1) +
                                       " references vehicle " +
                                       std::to_string(id));
            if (!seen.insert(id).second)
                throw DuplicateVehicleId("scenario: vehicle " +
                                         std::to_string(id) +
                                         " listed twice in cluster " +
                                         std::to_string(j + 1));
            covered[static_cast<size_t>(id)] = 1;
        }
    }
    for (int id = 1; id <= n_vehicles_; ++id)
        if (!covered[static_cast<size_t>(id)])
            throw UncoveredVehicle("scenario: vehicle " + std::to_string(id) +
                                   " belongs to no cluster");

    for (int id = 1; id <= n_vehicles_; ++id) {
        const double q = qos_(id - 1);
        if (!std::isfinite(q))
            throw NonFiniteInput("scenario: qos of vehicle " +
                                 std::to_string(id) + " is not finite");
        if (q <= 0.0)
            throw NonPositiveQos("scenario: qos of vehicle " +
                                 std::to_string(id) + " must be positive");
    }
    if (!std::isfinite(epsilon_))
        throw NonFiniteInput("scenario: epsilon is not finite");
    if (epsilon_ < 0.0)
        throw NegativeEpsilon("scenario: epsilon must be non-negative");
}

double Scenario::qos_of(int id) const {
    if (id < 1 || id > n_vehicles_)
        throw UnknownVehicleId("qos_of: vehicle " + std::to_string(id));
    return qos_(id - 1);
}

Scenario validate_scenario(const RawScenario& raw) {
    Vector qos(static_cast<Index>(raw.qos.size()));
    for (size_t i = 0; i < raw.qos.size(); ++i)
        qos(static_cast<Index>(i)) = raw.qos[i];
    return Scenario(raw.n_vehicles, raw.clusters, std::move(qos), raw.epsilon);
}

namespace {

bool pair_less(const VehiclePair& a, const VehiclePair& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
}

bool pair_same_ids(const VehiclePair& a, const VehiclePair& b) {
    return a.first == b.first && a.second == b.second;
}

} // namespace

std::vector<VehiclePair> intra_cluster_pairs(const Scenario& scenario) {
    std::vector<VehiclePair> pairs;
    for (const auto& members : scenario.clusters()) {
        for (size_t a = 0; a < members.size(); ++a) {
            for (size_t b = a + 1; b < members.size(); ++b) {
                const int lo = std::min(members[a], members[b]);
                const int hi = std::max(members[a], members[b]);
                pairs.push_back({lo, hi, PairKind::intra_cluster});
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), pair_less);
    pairs.erase(std::unique(pairs.begin(), pairs.end(), pair_same_ids),
                pairs.end());
    return pairs;
}

std::vector<VehiclePair> one_hop_pairs(const Scenario& scenario) {
    const auto& clusters = scenario.clusters();
    std::vector<std::set<int>> sets;
    sets.reserve(clusters.size());
    for (const auto& members : clusters)
        sets.emplace_back(members.begin(), members.end());

    std::vector<VehiclePair> pairs;
    for (size_t j = 0; j < sets.size(); ++j) {
        for (size_t k = 0; k < sets.size(); ++k) {
            if (j == k) continue;
            // Only overlapping clusters give rise to one-hop pairs;
            // disjoint clusters are mutually out of range.
            const bool overlap =
                std::any_of(sets[j].begin(), sets[j].end(),
                            [&](int id) { return sets[k].count(id) != 0; });
            if (!overlap) continue;
            for (int i : sets[j]) {
                if (sets[k].count(i)) continue;
                for (int i2 : sets[k]) {
                    if (sets[j].count(i2)) continue;
                    const int lo = std::min(i, i2);
                    const int hi = std::max(i, i2);
                    pairs.push_back({lo, hi, PairKind::one_hop});
                }
            }
        }
    }
    std::sort(pairs.begin(), pairs.end(), pair_less);
    pairs.erase(std::unique(pairs.begin(), pairs.end(), pair_same_ids),
                pairs.end());

    // A pair of vehicles that also shares some cluster is governed by
    // the stronger different-subframe rule; drop it from the one-hop
    // list so each pair carries exactly one relationship.
    const auto intra = intra_cluster_pairs(scenario);
    std::vector<VehiclePair> result;
    result.reserve(pairs.size());
    for (const auto& p : pairs) {
        const bool is_intra = std::binary_search(
            intra.begin(), intra.end(), p,
            [](const VehiclePair& a, const VehiclePair& b) {
                return pair_less(a, b);
            });
        if (!is_intra) result.push_back(p);
    }
    return result;
}

} // namespace sidelink
