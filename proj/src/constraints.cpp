#include "sidelink/constraints.hpp"

#include <cmath>
#include <string>

#include "sidelink/errors.hpp"

namespace sidelink {

Matrix fold_to_subframes(const Assignment& assignment, const ChannelGrid& grid) {
    if (assignment.cols() != grid.total_subchannels())
        throw ShapeMismatch("fold_to_subframes: expected " +
                            std::to_string(grid.total_subchannels()) +
                            " columns, got " + std::to_string(assignment.cols()));
    const Index rows = assignment.rows();
    const int L = grid.n_subframes();
    const int K = grid.n_subchannels();
    Matrix folded = Matrix::Zero(rows, L);
    for (int f = 0; f < L; ++f)
        folded.col(f) = assignment.middleCols(f * K, K).rowwise().sum();
    return folded;
}

namespace {

Matrix selector_matrix(const std::vector<VehiclePair>& pairs, int n_vehicles,
                       bool second_member) {
    Matrix m = Matrix::Zero(static_cast<Index>(pairs.size()), n_vehicles);
    for (size_t p = 0; p < pairs.size(); ++p) {
        const int id = second_member ? pairs[p].second : pairs[p].first;
        if (id < 1 || id > n_vehicles)
            throw UnknownVehicleId("selector: pair member " +
                                   std::to_string(id) + " outside 1.." +
                                   std::to_string(n_vehicles));
        m(static_cast<Index>(p), id - 1) = 1.0;
    }
    return m;
}

} // namespace

SelectorPair build_G(const std::vector<VehiclePair>& intra_pairs,
                     int n_vehicles) {
    return {selector_matrix(intra_pairs, n_vehicles, true),
            selector_matrix(intra_pairs, n_vehicles, false)};
}

SelectorPair build_H(const std::vector<VehiclePair>& hop_pairs, int n_vehicles) {
    return {selector_matrix(hop_pairs, n_vehicles, true),
            selector_matrix(hop_pairs, n_vehicles, false)};
}

ConfinementPair build_Q(int n_subframes) {
    if (n_subframes < 1)
        throw ConfigInvalid("build_Q: need at least one subframe");
    const int L = n_subframes;
    Matrix strict = Matrix::Zero(L, L);
    for (int r = 1; r < L; ++r)
        for (int c = 0; c < r; ++c) strict(r, c) = 1.0;
    return {std::move(strict), Matrix::Identity(L, L)};
}

ConstraintSystem build_constraints(const Scenario& scenario,
                                   const ChannelGrid& grid) {
    ConstraintSystem cs;
    cs.intra_pairs = intra_cluster_pairs(scenario);
    cs.hop_pairs = one_hop_pairs(scenario);
    auto g = build_G(cs.intra_pairs, scenario.n_vehicles());
    cs.G_plus = std::move(g.plus);
    cs.G_minus = std::move(g.minus);
    auto q = build_Q(grid.n_subframes());
    cs.Q_plus = std::move(q.plus);
    cs.Q_minus = std::move(q.minus);
    auto h = build_H(cs.hop_pairs, scenario.n_vehicles());
    cs.H_plus = std::move(h.plus);
    cs.H_minus = std::move(h.minus);
    return cs;
}

Vector per_vehicle_rates(const Matrix& capacities, const Assignment& assignment) {
    if (capacities.rows() != assignment.rows() ||
        capacities.cols() != assignment.cols())
        throw ShapeMismatch("per_vehicle_rates: capacities are " +
                            std::to_string(capacities.rows()) + "x" +
                            std::to_string(capacities.cols()) +
                            " but assignment is " +
                            std::to_string(assignment.rows()) + "x" +
                            std::to_string(assignment.cols()));
    return capacities.cwiseProduct(assignment).rowwise().sum();
}

namespace {

bool same_pair_ids(const VehiclePair& a, const VehiclePair& b) {
    return a.first == b.first && a.second == b.second;
}

void validate_verify_inputs(const Assignment& assignment,
                            const Scenario& scenario, const ChannelGrid& grid,
                            const CapacityMap& capacities,
                            const ConstraintSystem& system) {
    const int n = scenario.n_vehicles();
    const int total = grid.total_subchannels();
    if (!(capacities.grid == grid))
        throw InconsistentInputs(
            "verify: capacity map was generated for a different grid");
    if (capacities.rates.rows() != n)
        throw ShapeMismatch("verify: capacities have " +
                            std::to_string(capacities.rates.rows()) +
                            " rows for " + std::to_string(n) + " vehicles");
    if (assignment.rows() != n || assignment.cols() != total)
        throw ShapeMismatch("verify: assignment must be " + std::to_string(n) +
                            "x" + std::to_string(total) + ", got " +
                            std::to_string(assignment.rows()) + "x" +
                            std::to_string(assignment.cols()));
    for (Index i = 0; i < assignment.rows(); ++i) {
        for (Index k = 0; k < assignment.cols(); ++k) {
            const double x = assignment(i, k);
            if (!std::isfinite(x))
                throw NonFiniteInput("verify: assignment entry (" +
                                     std::to_string(i) + "," +
                                     std::to_string(k) + ") is not finite");
            if (x != 0.0 && x != 1.0)
                throw InconsistentInputs(
                    "verify: assignment entry (" + std::to_string(i) + "," +
                    std::to_string(k) + ") is " + std::to_string(x) +
                    ", expected 0 or 1");
        }
    }

    const Index P = static_cast<Index>(system.intra_pairs.size());
    const Index U = static_cast<Index>(system.hop_pairs.size());
    if (system.G_plus.rows() != P || system.G_plus.cols() != n ||
        system.G_minus.rows() != P || system.G_minus.cols() != n)
        throw ShapeMismatch("verify: pair selectors do not match the " +
                            std::to_string(P) + " intra-cluster pairs");
    if (system.H_plus.rows() != U || system.H_plus.cols() != n ||
        system.H_minus.rows() != U || system.H_minus.cols() != n)
        throw ShapeMismatch("verify: hop selectors do not match the " +
                            std::to_string(U) + " one-hop pairs");
    if (system.Q_plus.rows() != grid.n_subframes() ||
        system.Q_plus.cols() != grid.n_subframes() ||
        system.Q_minus.rows() != grid.n_subframes() ||
        system.Q_minus.cols() != grid.n_subframes())
        throw ShapeMismatch("verify: confinement operators do not match " +
                            std::to_string(grid.n_subframes()) + " subframes");

    // The selector rows must describe this very scenario.
    const auto intra = intra_cluster_pairs(scenario);
    const auto hops = one_hop_pairs(scenario);
    bool pairs_ok = intra.size() == system.intra_pairs.size() &&
                    hops.size() == system.hop_pairs.size();
    for (size_t p = 0; pairs_ok && p < intra.size(); ++p)
        pairs_ok = same_pair_ids(intra[p], system.intra_pairs[p]);
    for (size_t u = 0; pairs_ok && u < hops.size(); ++u)
        pairs_ok = same_pair_ids(hops[u], system.hop_pairs[u]);
    if (!pairs_ok)
        throw InconsistentInputs(
            "verify: constraint system was built for a different scenario");
}

bool active_in_subframe(const Assignment& assignment, const ChannelGrid& grid,
                        int vehicle, int subframe) {
    const int K = grid.n_subchannels();
    for (int j = 0; j < K; ++j)
        if (assignment(vehicle - 1, (subframe - 1) * K + j) != 0.0) return true;
    return false;
}

// ---- matrix route ---------------------------------------------------

std::vector<QosViolation> matrix_qos(const Scenario& scenario,
                                     const CapacityMap& capacities,
                                     const Assignment& assignment) {
    const Vector rates = per_vehicle_rates(capacities.rates, assignment);
    std::vector<QosViolation> out;
    for (int i = 1; i <= scenario.n_vehicles(); ++i) {
        const double q = scenario.qos_of(i);
        if (!rate_within_window(rates(i - 1), q, scenario.epsilon()))
            out.push_back({i, rates(i - 1), q - scenario.epsilon(),
                           q + scenario.epsilon()});
    }
    return out;
}

std::vector<SubframeCollision> matrix_type2(const ConstraintSystem& system,
                                            const Matrix& subframe_activity_t) {
    const Matrix joint =
        (subframe_activity_t * system.G_minus.transpose())
            .cwiseProduct(subframe_activity_t * system.G_plus.transpose());
    std::vector<SubframeCollision> out;
    for (size_t p = 0; p < system.intra_pairs.size(); ++p)
        for (Index f = 0; f < joint.rows(); ++f)
            if (joint(f, static_cast<Index>(p)) > 0.0)
                out.push_back({system.intra_pairs[p], static_cast<int>(f) + 1});
    return out;
}

std::vector<ConfinementViolation> matrix_type3(const Scenario& scenario,
                                               const ConstraintSystem& system,
                                               const Matrix& subframe_activity_t) {
    const Matrix joint = (system.Q_minus * subframe_activity_t)
                             .cwiseProduct(system.Q_plus * subframe_activity_t);
    std::vector<ConfinementViolation> out;
    for (int i = 1; i <= scenario.n_vehicles(); ++i) {
        if (joint.col(i - 1).maxCoeff() <= 0.0) continue;
        ConfinementViolation v;
        v.vehicle = i;
        for (Index f = 0; f < subframe_activity_t.rows(); ++f)
            if (subframe_activity_t(f, i - 1) > 0.0)
                v.subframes.push_back(static_cast<int>(f) + 1);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<SubchannelCollision> matrix_type4(const ConstraintSystem& system,
                                              const Matrix& subchannel_activity_t) {
    const Matrix joint =
        (subchannel_activity_t * system.H_minus.transpose())
            .cwiseProduct(subchannel_activity_t * system.H_plus.transpose());
    std::vector<SubchannelCollision> out;
    for (size_t u = 0; u < system.hop_pairs.size(); ++u)
        for (Index k = 0; k < joint.rows(); ++k)
            if (joint(k, static_cast<Index>(u)) > 0.0)
                out.push_back({system.hop_pairs[u], static_cast<int>(k) + 1});
    return out;
}

// ---- direct route ---------------------------------------------------

std::vector<QosViolation> direct_qos(const Scenario& scenario,
                                     const ChannelGrid& grid,
                                     const CapacityMap& capacities,
                                     const Assignment& assignment) {
    std::vector<QosViolation> out;
    for (int i = 1; i <= scenario.n_vehicles(); ++i) {
        double rate = 0.0;
        for (int k = 0; k < grid.total_subchannels(); ++k)
            if (assignment(i - 1, k) != 0.0) rate += capacities.rates(i - 1, k);
        const double q = scenario.qos_of(i);
        if (!rate_within_window(rate, q, scenario.epsilon()))
            out.push_back(
                {i, rate, q - scenario.epsilon(), q + scenario.epsilon()});
    }
    return out;
}

std::vector<SubframeCollision> direct_type2(const ConstraintSystem& system,
                                            const ChannelGrid& grid,
                                            const Assignment& assignment) {
    std::vector<SubframeCollision> out;
    for (const auto& pair : system.intra_pairs)
        for (int f = 1; f <= grid.n_subframes(); ++f)
            if (active_in_subframe(assignment, grid, pair.first, f) &&
                active_in_subframe(assignment, grid, pair.second, f))
                out.push_back({pair, f});
    return out;
}

std::vector<ConfinementViolation> direct_type3(const Scenario& scenario,
                                               const ChannelGrid& grid,
                                               const Assignment& assignment) {
    std::vector<ConfinementViolation> out;
    for (int i = 1; i <= scenario.n_vehicles(); ++i) {
        std::vector<int> active;
        for (int f = 1; f <= grid.n_subframes(); ++f)
            if (active_in_subframe(assignment, grid, i, f)) active.push_back(f);
        if (active.size() > 1) out.push_back({i, std::move(active)});
    }
    return out;
}

std::vector<SubchannelCollision> direct_type4(const ConstraintSystem& system,
                                              const ChannelGrid& grid,
                                              const Assignment& assignment) {
    std::vector<SubchannelCollision> out;
    for (const auto& pair : system.hop_pairs)
        for (int k = 1; k <= grid.total_subchannels(); ++k)
            if (assignment(pair.first - 1, k - 1) != 0.0 &&
                assignment(pair.second - 1, k - 1) != 0.0)
                out.push_back({pair, k});
    return out;
}

// ---- agreement ------------------------------------------------------

bool same_qos(const std::vector<QosViolation>& a,
              const std::vector<QosViolation>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].vehicle != b[i].vehicle) return false;
    return true;
}

bool same_type2(const std::vector<SubframeCollision>& a,
                const std::vector<SubframeCollision>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!same_pair_ids(a[i].pair, b[i].pair) ||
            a[i].subframe != b[i].subframe)
            return false;
    return true;
}

bool same_type3(const std::vector<ConfinementViolation>& a,
                const std::vector<ConfinementViolation>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i].vehicle != b[i].vehicle || a[i].subframes != b[i].subframes)
            return false;
    return true;
}

bool same_type4(const std::vector<SubchannelCollision>& a,
                const std::vector<SubchannelCollision>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
        if (!same_pair_ids(a[i].pair, b[i].pair) ||
            a[i].subchannel != b[i].subchannel)
            return false;
    return true;
}

} // namespace

ConflictReport verify(const Assignment& assignment, const Scenario& scenario,
                      const ChannelGrid& grid, const CapacityMap& capacities,
                      const ConstraintSystem& system) {
    validate_verify_inputs(assignment, scenario, grid, capacities, system);

    const Matrix subframe_activity_t =
        fold_to_subframes(assignment, grid).transpose(); // L x N
    const Matrix subchannel_activity_t = assignment.transpose(); // KL x N

    ConflictReport report;
    report.qos_violations = matrix_qos(scenario, capacities, assignment);
    report.type2 = matrix_type2(system, subframe_activity_t);
    report.type3 = matrix_type3(scenario, system, subframe_activity_t);
    report.type4 = matrix_type4(system, subchannel_activity_t);

    // Independent re-derivation by direct enumeration. Any mismatch
    // means one of the two checkers is wrong, which must never be
    // papered over.
    if (!same_qos(report.qos_violations,
                  direct_qos(scenario, grid, capacities, assignment)))
        throw InternalCheckerDisagreement(
            "verify: demand-window checkers disagree");
    if (!same_type2(report.type2, direct_type2(system, grid, assignment)))
        throw InternalCheckerDisagreement(
            "verify: subframe-collision checkers disagree");
    if (!same_type3(report.type3, direct_type3(scenario, grid, assignment)))
        throw InternalCheckerDisagreement(
            "verify: confinement checkers disagree");
    if (!same_type4(report.type4, direct_type4(system, grid, assignment)))
        throw InternalCheckerDisagreement(
            "verify: subchannel-collision checkers disagree");

    return report;
}

} // namespace sidelink
