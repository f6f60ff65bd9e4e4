#pragma once

#include <vector>

#include "sidelink/types.hpp"

namespace sidelink {

// Relationship between two vehicles that induces a sharing constraint.
//   intra_cluster: both belong to at least one common cluster and must
//                  transmit in different subframes.
//   one_hop:       they sit in different, overlapping clusters (each is
//                  one hop from the other through a shared member) and
//                  must not reuse the same subchannel.
enum class PairKind { intra_cluster, one_hop };

struct VehiclePair {
    int first = 0;  // smaller vehicle id, 1-based
    int second = 0; // larger vehicle id, 1-based
    PairKind kind = PairKind::intra_cluster;

    friend bool operator==(const VehiclePair& a, const VehiclePair& b) {
        return a.first == b.first && a.second == b.second && a.kind == b.kind;
    }
};

// Static description of the vehicles requesting resources: cluster
// membership (clusters may overlap), per-vehicle demanded rate q_i in
// bit/s and the shared demand tolerance epsilon in bit/s.
//
// Vehicle ids are 1-based and dense: every id in 1..n_vehicles must
// appear in at least one cluster.
class Scenario {
public:
    Scenario(int n_vehicles,
             std::vector<std::vector<int>> clusters,
             Vector qos,
             double epsilon);

    int n_vehicles() const { return n_vehicles_; }
    int n_clusters() const { return static_cast<int>(clusters_.size()); }
    const std::vector<std::vector<int>>& clusters() const { return clusters_; }
    const Vector& qos() const { return qos_; }
    double epsilon() const { return epsilon_; }

    // Demanded rate of vehicle `id` (1-based).
    double qos_of(int id) const;

private:
    int n_vehicles_;
    std::vector<std::vector<int>> clusters_;
    Vector qos_;
    double epsilon_;
};

// Scenario description as it arrives from a config file, before any
// invariant has been checked.
struct RawScenario {
    int n_vehicles = 0;
    std::vector<std::vector<int>> clusters;
    std::vector<double> qos; // bit/s, indexed by vehicle id - 1
    double epsilon = 0.0;    // bit/s
};

// Checks every scenario invariant and returns the validated value;
// throws EmptyCluster, UnknownVehicleId, DuplicateVehicleId,
// UncoveredVehicle, NonPositiveQos, NegativeEpsilon or NonFiniteInput
// naming the offending entity.
Scenario validate_scenario(const RawScenario& raw);

// All unordered vehicle pairs that share at least one cluster, each
// listed once with first < second, sorted lexicographically.
std::vector<VehiclePair> intra_cluster_pairs(const Scenario& scenario);

// All unordered pairs (i, i') where some cluster j contains i but not
// i', some overlapping cluster j' contains i' but not i. These
// vehicles are hidden from each other but share a neighbour, so they
// may collide if they reuse a subchannel. Pairs that are also
// intra-cluster pairs are excluded; result is deduplicated and sorted
// lexicographically with first < second.
std::vector<VehiclePair> one_hop_pairs(const Scenario& scenario);

} // namespace sidelink
