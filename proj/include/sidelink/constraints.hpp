#pragma once

#include <vector>

#include "sidelink/channel.hpp"
#include "sidelink/scenario.hpp"
#include "sidelink/types.hpp"

namespace sidelink {

// Boolean N x KL incidence: entry (i-1, k-1) is 1 iff vehicle i
// transmits on global subchannel k. Stored as doubles (0.0 / 1.0).
using Assignment = Matrix;

// Count of subchannels each vehicle uses per subframe: entry (i-1,
// f-1) sums the assignment over the K subchannels of subframe f.
Matrix fold_to_subframes(const Assignment& assignment, const ChannelGrid& grid);

// Row p marks pair p's smaller member in `minus` and larger member in
// `plus`; both matrices are P x N with exactly one 1 per row. Joint
// per-subframe activity of pair p then shows up as nonzero entries of
// column p in (Xs * minus^T) .* (Xs * plus^T) for the L x N
// subframe-activity matrix Xs.
struct SelectorPair {
    Matrix plus;
    Matrix minus;
};

SelectorPair build_G(const std::vector<VehiclePair>& intra_pairs,
                     int n_vehicles);
SelectorPair build_H(const std::vector<VehiclePair>& hop_pairs, int n_vehicles);

// Subframe-confinement operator pair for an L-subframe grid: `minus`
// is the identity, `plus` the strictly lower triangular all-ones
// matrix. For a per-subframe activity column v, (minus*v) .* (plus*v)
// is zero exactly when v has at most one active subframe, because any
// later activity multiplies the accumulated earlier activity. The
// product minus^T * plus is therefore the strictly-lower-triangular
// all-ones matrix enumerating every ordered subframe pair.
struct ConfinementPair {
    Matrix plus;
    Matrix minus;
};

ConfinementPair build_Q(int n_subframes);

// All constraint matrices of one scenario/grid combination plus the
// pair lists that give meaning to the selector rows.
struct ConstraintSystem {
    Matrix G_plus;  // P x N, intra pair second members
    Matrix G_minus; // P x N, intra pair first members
    Matrix Q_plus;  // L x L, strictly lower triangular ones
    Matrix Q_minus; // L x L, identity
    Matrix H_plus;  // U x N, hop pair second members
    Matrix H_minus; // U x N, hop pair first members
    std::vector<VehiclePair> intra_pairs; // row order of G rows
    std::vector<VehiclePair> hop_pairs;   // row order of H rows
};

ConstraintSystem build_constraints(const Scenario& scenario,
                                   const ChannelGrid& grid);

// ---- verification ---------------------------------------------------

// A vehicle whose summed rate missed its demand window.
struct QosViolation {
    int vehicle = 0;
    double achieved_rate = 0.0; // bit/s
    double window_lo = 0.0;     // q - eps
    double window_hi = 0.0;     // q + eps
};

// An intra-cluster pair transmitting together in one subframe.
struct SubframeCollision {
    VehiclePair pair;
    int subframe = 0;
};

// A vehicle spread over more than one subframe.
struct ConfinementViolation {
    int vehicle = 0;
    std::vector<int> subframes; // every active subframe, ascending
};

// A one-hop pair reusing one global subchannel.
struct SubchannelCollision {
    VehiclePair pair;
    int subchannel = 0;
};

// Every rule violation of one assignment; empty report == feasible.
struct ConflictReport {
    std::vector<QosViolation> qos_violations;
    std::vector<SubframeCollision> type2;
    std::vector<ConfinementViolation> type3;
    std::vector<SubchannelCollision> type4;

    bool empty() const {
        return qos_violations.empty() && type2.empty() && type3.empty() &&
               type4.empty();
    }
};

// Relative tolerance applied to each edge of the demand window when
// classifying an assignment, so that a rate sitting exactly on
// q_i +/- eps is accepted regardless of rounding noise.
inline constexpr double kRateWindowRelTol = 1e-9;

// Single source of truth for the demand-window test; the verifier and
// every solver must agree on what counts as admissible.
inline bool rate_within_window(double rate, double q, double eps) {
    const double guard = kRateWindowRelTol * q;
    return rate >= q - eps - guard && rate <= q + eps + guard;
}

// Achieved rate of every vehicle under an assignment (bit/s).
Vector per_vehicle_rates(const Matrix& capacities, const Assignment& assignment);

// Check the assignment against all four rule families. Every family
// is evaluated twice, once through the constraint matrices and once
// by direct enumeration over pairs and subchannels; if the two routes
// ever disagree the function throws InternalCheckerDisagreement,
// since a silent defect in either checker would invalidate every
// downstream result. This verifier is the single source of truth for
// "conflict-free"; solvers never self-certify.
ConflictReport verify(const Assignment& assignment, const Scenario& scenario,
                      const ChannelGrid& grid, const CapacityMap& capacities,
                      const ConstraintSystem& system);

} // namespace sidelink
