#include "sidelink/solver_exact.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "sidelink/errors.hpp"

namespace sidelink {
namespace {

using Clock = std::chrono::steady_clock;

constexpr int kMaxComponentSize = 64; // member sets live in a uint64 bitmask
constexpr int kMaxSubframes = 64;     // candidate sets live in a uint64 bitmask
constexpr int kMaxSubchannels = 20;   // per-subframe subsets live in a uint32
constexpr std::size_t kMemoCap = std::size_t{1} << 22;
// Relative slack on the incumbent bound so float drift in the running
// sums can never prune an equal-objective tie.
constexpr double kBoundSlack = 1e-12;

// Bit-reverse the low `k` bits.  A flattened assignment row reads
// subchannel columns low to high, so rev(mask) ascending orders the
// rows of one subframe lexicographically.
std::uint32_t rev_bits(std::uint32_t m, int k) {
    std::uint32_t r = 0;
    for (int i = 0; i < k; ++i)
        if (m & (std::uint32_t{1} << i)) r |= std::uint32_t{1} << (k - 1 - i);
    return r;
}

// One vehicle row of an assignment, reduced to its subframe and
// within-subframe subset.  An empty row is normalized to {0, 0}.
struct RowKey {
    int subframe = 0; // 1-based when mask != 0
    std::uint32_t mask = 0;
};

// Lexicographic order of the flattened rows: the all-zero row is
// smallest; otherwise an earlier first set column makes a row larger,
// so a later subframe compares smaller and within one subframe the
// bit-reversed mask decides.
bool row_less(const RowKey& a, const RowKey& b, int k) {
    if (a.mask == 0 || b.mask == 0) return a.mask == 0 && b.mask != 0;
    if (a.subframe != b.subframe) return a.subframe > b.subframe;
    return rev_bits(a.mask, k) < rev_bits(b.mask, k);
}

bool rows_less(const std::vector<RowKey>& a, const std::vector<RowKey>& b,
               int k) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (row_less(a[i], b[i], k)) return true;
        if (row_less(b[i], a[i], k)) return false;
    }
    return false;
}

void scatter_row(Assignment& a, int vehicle, const RowKey& row, int K) {
    if (row.mask == 0) return;
    const int base = (row.subframe - 1) * K;
    for (int i = 0; i < K; ++i)
        if (row.mask & (std::uint32_t{1} << i)) a(vehicle - 1, base + i) = 1.0;
}

// Shared node/time budget across every component of one solve call.
struct SearchLimits {
    Clock::time_point deadline{};
    bool has_deadline = false;
    std::uint64_t node_limit = 0;
    std::uint64_t nodes = 0;
    bool exhausted = false;

    bool tick() {
        if (exhausted) return true;
        ++nodes;
        if (node_limit != 0 && nodes > node_limit) exhausted = true;
        if (has_deadline && (nodes & 255u) == 0 && Clock::now() > deadline)
            exhausted = true;
        return exhausted;
    }
};

struct Option {
    std::uint32_t mask;
    double rate;
};

// Exact optimum of one subframe for one member set: total rate plus
// the chosen per-member subset masks (aligned with ascending ids).
struct SubframeSolution {
    bool feasible = false;
    double value = 0.0;
    std::vector<std::uint32_t> masks;
};

struct ComponentOutcome {
    bool infeasible = false;
    bool have_best = false;
    double value = 0.0;
    std::vector<RowKey> rows; // aligned with the component's member list
};

// Branch and bound over one connected component of the conflict graph
// (vehicles joined by intra-cluster or one-hop pairs).  Vehicles are
// branched over subframes only; because subframes own disjoint global
// subchannel ranges, the one-hop rule binds solely within a subframe
// and each subframe's subset choices are solved exactly on their own
// and memoized per (subframe, member set).
//
// Pruning (all disabled by the test hook):
//   - per-vehicle candidate subframes: bit f stays set while the
//     vehicle's clusters leave f free and the joint subframe solve of
//     (f, occupants + vehicle) is feasible; both conditions are
//     monotone along a branch, so a cleared bit can never come back
//     and an empty candidate set is a sound dead end;
//   - a matching check per cluster (Hall condition): its unassigned
//     members must be matchable to distinct candidate subframes;
//   - incumbent bound: exact value of the occupied subframes plus
//     each unassigned vehicle's best candidate-subframe rate.
class ComponentSolver {
    struct ClusterState {
        std::vector<int> members;
    };

    // sigma_ entries: kUndecided, kSilent, or the chosen subframe >= 0
    static constexpr int kUndecided = -1;
    static constexpr int kSilent = -2;

  public:
    ComponentSolver(const Scenario& s, const ChannelGrid& g,
                    const Matrix& rates, const ConstraintSystem& cs,
                    std::vector<int> members, bool enable_pruning,
                    SearchLimits& limits)
        : n_(static_cast<int>(members.size())),
          K_(g.n_subchannels()),
          L_(g.n_subframes()),
          global_(std::move(members)),
          enable_pruning_(enable_pruning),
          limits_(limits) {
        std::vector<int> local_of(static_cast<size_t>(s.n_vehicles()) + 1, -1);
        for (int v = 0; v < n_; ++v)
            local_of[static_cast<size_t>(global_[static_cast<size_t>(v)])] = v;

        build_options(s, rates);
        if (infeasible_upfront_) return;

        intra_of_.resize(static_cast<size_t>(n_));
        hop_of_.resize(static_cast<size_t>(n_));
        for (const auto& p : cs.intra_pairs) {
            const int a = local_of[static_cast<size_t>(p.first)];
            const int b = local_of[static_cast<size_t>(p.second)];
            if (a < 0 || b < 0) continue;
            intra_of_[static_cast<size_t>(a)].push_back(b);
            intra_of_[static_cast<size_t>(b)].push_back(a);
        }
        for (const auto& p : cs.hop_pairs) {
            const int a = local_of[static_cast<size_t>(p.first)];
            const int b = local_of[static_cast<size_t>(p.second)];
            if (a < 0 || b < 0) continue;
            hop_of_[static_cast<size_t>(a)].push_back(b);
            hop_of_[static_cast<size_t>(b)].push_back(a);
        }

        clusters_of_.resize(static_cast<size_t>(n_));
        for (const auto& cluster : s.clusters()) {
            if (local_of[static_cast<size_t>(cluster.front())] < 0) continue;
            ClusterState st;
            for (int id : cluster)
                st.members.push_back(local_of[static_cast<size_t>(id)]);
            const int idx = static_cast<int>(clusters_.size());
            for (int v : st.members)
                clusters_of_[static_cast<size_t>(v)].push_back(idx);
            clusters_.push_back(std::move(st));
        }

        order_.resize(static_cast<size_t>(n_));
        std::iota(order_.begin(), order_.end(), 0);
        std::sort(order_.begin(), order_.end(), [&](int a, int b) {
            const double qa = qos_[static_cast<size_t>(a)];
            const double qb = qos_[static_cast<size_t>(b)];
            if (qa != qb) return qa > qb;
            return global_[static_cast<size_t>(a)] <
                   global_[static_cast<size_t>(b)];
        });
        rank_.assign(static_cast<size_t>(n_), 0);
        for (int d = 0; d < n_; ++d)
            rank_[static_cast<size_t>(order_[static_cast<size_t>(d)])] = d;

        sigma_.assign(static_cast<size_t>(n_), kUndecided);
        all_ = n_ == 64 ? ~std::uint64_t{0}
                        : (std::uint64_t{1} << n_) - 1;
        members_in_.assign(static_cast<size_t>(L_), 0);
        value_in_.assign(static_cast<size_t>(L_), 0.0);
        memo_.resize(static_cast<size_t>(L_));

        // initial candidates: every subframe with a nonempty option list
        cand_.assign(static_cast<size_t>(n_), 0);
        for (int v = 0; v < n_; ++v)
            for (int f = 0; f < L_; ++f)
                if (!options_[static_cast<size_t>(v)][static_cast<size_t>(f)]
                         .empty())
                    cand_[static_cast<size_t>(v)] |= std::uint64_t{1} << f;
        changed_.assign(static_cast<size_t>(n_) + 1, {});
        match_of_.assign(static_cast<size_t>(L_), -1);
    }

    ComponentOutcome run() {
        ComponentOutcome out;
        if (infeasible_upfront_) {
            out.infeasible = true;
            return out;
        }
        if (!enable_pruning_ || initial_checks_ok()) dfs(0);
        if (have_best_) {
            out.have_best = true;
            out.value = best_value_;
            out.rows = best_rows_;
        } else if (!limits_.exhausted) {
            out.infeasible = true;
        }
        return out;
    }

  private:
    void build_options(const Scenario& s, const Matrix& rates) {
        qos_.resize(static_cast<size_t>(n_));
        options_.resize(static_cast<size_t>(n_));
        best_rate_.resize(static_cast<size_t>(n_));
        subframe_order_.resize(static_cast<size_t>(n_));
        silent_ok_.resize(static_cast<size_t>(n_));
        const std::uint32_t n_masks = std::uint32_t{1} << K_;
        std::vector<double> sum(n_masks);
        for (int v = 0; v < n_; ++v) {
            const int gid = global_[static_cast<size_t>(v)];
            const double q = s.qos_of(gid);
            qos_[static_cast<size_t>(v)] = q;
            // a vehicle whose window admits rate zero may stay silent,
            // occupying no subframe at all; that choice is a dedicated
            // branch, so per-subframe options hold nonzero masks only
            silent_ok_[static_cast<size_t>(v)] =
                rate_within_window(0.0, q, s.epsilon()) ? 1 : 0;
            auto& per_subframe = options_[static_cast<size_t>(v)];
            per_subframe.resize(static_cast<size_t>(L_));
            auto& best = best_rate_[static_cast<size_t>(v)];
            best.assign(static_cast<size_t>(L_),
                        -std::numeric_limits<double>::infinity());
            bool any = false;
            for (int f = 0; f < L_; ++f) {
                const int base = f * K_;
                sum[0] = 0.0;
                for (std::uint32_t m = 1; m < n_masks; ++m) {
                    const int low = std::countr_zero(m);
                    sum[m] = sum[m & (m - 1)] + rates(gid - 1, base + low);
                }
                auto& opts = per_subframe[static_cast<size_t>(f)];
                for (std::uint32_t m = 1; m < n_masks; ++m)
                    if (rate_within_window(sum[m], q, s.epsilon()))
                        opts.push_back({m, sum[m]});
                std::sort(opts.begin(), opts.end(),
                          [this](const Option& a, const Option& b) {
                              if (a.rate != b.rate) return a.rate > b.rate;
                              return rev_bits(a.mask, K_) <
                                     rev_bits(b.mask, K_);
                          });
                if (!opts.empty()) {
                    best[static_cast<size_t>(f)] = opts[0].rate;
                    any = true;
                }
            }
            if (!any && !silent_ok_[static_cast<size_t>(v)]) {
                infeasible_upfront_ = true; // no subframe offers a rate
                                            // inside this vehicle's window
                return;
            }
            auto& forder = subframe_order_[static_cast<size_t>(v)];
            forder.resize(static_cast<size_t>(L_));
            std::iota(forder.begin(), forder.end(), 0);
            std::sort(forder.begin(), forder.end(), [&](int a, int b) {
                const double ra = best[static_cast<size_t>(a)];
                const double rb = best[static_cast<size_t>(b)];
                if (ra != rb) return ra > rb;
                return a < b;
            });
        }
    }

    SubframeSolution solve_subframe(int f, std::uint64_t bits) const {
        SubframeSolution sol;
        if (bits == 0) {
            sol.feasible = true;
            return sol;
        }
        std::vector<int> members;
        for (std::uint64_t rest = bits; rest != 0; rest &= rest - 1)
            members.push_back(std::countr_zero(rest));

        for (int v : members)
            for (int p : intra_of_[static_cast<size_t>(v)])
                if (p > v && ((bits >> p) & 1)) return sol; // same-cluster
                                                            // pair, dead set

        const int m = static_cast<int>(members.size());
        std::vector<std::uint32_t> masks(static_cast<size_t>(m), 0);
        std::vector<int> coupled;
        double total = 0.0;
        for (int i = 0; i < m; ++i) {
            const int v = members[static_cast<size_t>(i)];
            const auto& opts =
                options_[static_cast<size_t>(v)][static_cast<size_t>(f)];
            if (opts.empty()) return sol;
            bool has_partner = false;
            for (int p : hop_of_[static_cast<size_t>(v)])
                if ((bits >> p) & 1) has_partner = true;
            if (has_partner) {
                coupled.push_back(i);
            } else {
                masks[static_cast<size_t>(i)] = opts[0].mask;
                total += opts[0].rate;
            }
        }

        if (!coupled.empty()) {
            const int c = static_cast<int>(coupled.size());
            // earlier coupled indices that are one-hop partners and so
            // must stay subchannel-disjoint
            std::vector<std::vector<int>> earlier(static_cast<size_t>(c));
            for (int i = 0; i < c; ++i) {
                const int v = members[static_cast<size_t>(
                    coupled[static_cast<size_t>(i)])];
                for (int p : hop_of_[static_cast<size_t>(v)])
                    for (int j = 0; j < i; ++j)
                        if (members[static_cast<size_t>(
                                coupled[static_cast<size_t>(j)])] == p)
                            earlier[static_cast<size_t>(i)].push_back(j);
            }
            std::vector<double> suffix_best(static_cast<size_t>(c) + 1, 0.0);
            for (int i = c - 1; i >= 0; --i) {
                const int v = members[static_cast<size_t>(
                    coupled[static_cast<size_t>(i)])];
                suffix_best[static_cast<size_t>(i)] =
                    suffix_best[static_cast<size_t>(i) + 1] +
                    options_[static_cast<size_t>(v)][static_cast<size_t>(f)][0]
                        .rate;
            }

            std::vector<std::uint32_t> chosen(static_cast<size_t>(c), 0);
            std::vector<std::uint32_t> best_masks;
            double best_val = -1.0;
            bool found = false;

            std::function<void(int, double)> jdfs = [&](int i, double cur) {
                if (i == c) {
                    if (!found || cur > best_val) {
                        found = true;
                        best_val = cur;
                        best_masks = chosen;
                    } else if (cur == best_val) {
                        for (int j = 0; j < c; ++j) {
                            const auto a =
                                rev_bits(chosen[static_cast<size_t>(j)], K_);
                            const auto b = rev_bits(
                                best_masks[static_cast<size_t>(j)], K_);
                            if (a == b) continue;
                            if (a < b) best_masks = chosen;
                            break;
                        }
                    }
                    return;
                }
                if (found &&
                    cur + suffix_best[static_cast<size_t>(i)] < best_val)
                    return;
                const int v = members[static_cast<size_t>(
                    coupled[static_cast<size_t>(i)])];
                for (const auto& opt :
                     options_[static_cast<size_t>(v)][static_cast<size_t>(f)]) {
                    bool clash = false;
                    for (int j : earlier[static_cast<size_t>(i)])
                        if (opt.mask & chosen[static_cast<size_t>(j)]) {
                            clash = true;
                            break;
                        }
                    if (clash) continue;
                    chosen[static_cast<size_t>(i)] = opt.mask;
                    jdfs(i + 1, cur + opt.rate);
                }
                chosen[static_cast<size_t>(i)] = 0;
            };
            jdfs(0, 0.0);
            if (!found) return sol;
            total += best_val;
            for (int i = 0; i < c; ++i)
                masks[static_cast<size_t>(coupled[static_cast<size_t>(i)])] =
                    best_masks[static_cast<size_t>(i)];
        }

        sol.feasible = true;
        sol.value = total;
        sol.masks = std::move(masks);
        return sol;
    }

    const SubframeSolution& subframe_solution(int f, std::uint64_t bits) {
        auto& table = memo_[static_cast<size_t>(f)];
        const auto it = table.find(bits);
        if (it != table.end()) return it->second;
        SubframeSolution sol = solve_subframe(f, bits);
        if (memo_entries_ >= kMemoCap) {
            for (auto& t : memo_) t.clear();
            memo_entries_ = 0;
        }
        ++memo_entries_;
        return table.emplace(bits, std::move(sol)).first->second;
    }

    bool cluster_free(int v, int f) const {
        for (int c : clusters_of_[static_cast<size_t>(v)])
            if ((cluster_used_[static_cast<size_t>(c)] >> f) & 1) return false;
        return true;
    }

    // Kuhn matching: can every undecided member that must transmit
    // still take a distinct candidate subframe?  Members free to stay
    // silent never demand a slot.
    bool hall_ok(const ClusterState& cluster) {
        std::fill(match_of_.begin(), match_of_.end(), -1);
        for (int u : cluster.members) {
            if (sigma_[static_cast<size_t>(u)] != kUndecided ||
                silent_ok_[static_cast<size_t>(u)])
                continue;
            std::uint64_t visited = 0;
            if (!augment(u, visited)) return false;
        }
        return true;
    }

    bool augment(int u, std::uint64_t& visited) {
        std::uint64_t avail = cand_[static_cast<size_t>(u)] & ~visited;
        while (avail != 0) {
            const int f = std::countr_zero(avail);
            avail &= avail - 1;
            visited |= std::uint64_t{1} << f;
            if (match_of_[static_cast<size_t>(f)] < 0 ||
                augment(match_of_[static_cast<size_t>(f)], visited)) {
                match_of_[static_cast<size_t>(f)] = u;
                return true;
            }
        }
        return false;
    }

    bool initial_checks_ok() {
        cluster_used_.assign(clusters_.size(), 0);
        for (const auto& cluster : clusters_)
            if (!hall_ok(cluster)) return false;
        return true;
    }

    // Re-derive candidate bit f of every unassigned vehicle after the
    // occupants of f changed; a cleared set is a dead end.  Returns
    // false on a dead end.
    bool propagate(int depth, int f) {
        auto& changed = changed_[static_cast<size_t>(depth)];
        changed.clear();
        const std::uint64_t occupants = members_in_[static_cast<size_t>(f)];
        for (std::uint64_t rest = ~assigned_ & all_; rest != 0;
             rest &= rest - 1) {
            const int u = std::countr_zero(rest);
            if (((cand_[static_cast<size_t>(u)] >> f) & 1) == 0) continue;
            bool keep = cluster_free(u, f);
            if (keep) {
                const std::uint64_t with_u =
                    occupants | (std::uint64_t{1} << u);
                keep = subframe_solution(f, with_u).feasible;
            }
            if (!keep) {
                cand_[static_cast<size_t>(u)] &= ~(std::uint64_t{1} << f);
                changed.push_back(u);
                if (cand_[static_cast<size_t>(u)] == 0 &&
                    !silent_ok_[static_cast<size_t>(u)])
                    return false;
            }
        }
        for (const auto& cluster : clusters_)
            if (!hall_ok(cluster)) return false;
        return true;
    }

    void unpropagate(int depth, int f) {
        for (int u : changed_[static_cast<size_t>(depth)])
            cand_[static_cast<size_t>(u)] |= std::uint64_t{1} << f;
    }

    // Upper bound contribution of the unassigned vehicles: best rate
    // over each one's remaining candidate subframes.
    double unassigned_bound() const {
        double total = 0.0;
        for (std::uint64_t rest = ~assigned_ & all_; rest != 0;
             rest &= rest - 1) {
            const int u = std::countr_zero(rest);
            const auto& best = best_rate_[static_cast<size_t>(u)];
            double top = 0.0;
            bool first = true;
            for (std::uint64_t c = cand_[static_cast<size_t>(u)]; c != 0;
                 c &= c - 1) {
                const double r =
                    best[static_cast<size_t>(std::countr_zero(c))];
                if (first || r > top) top = r;
                first = false;
            }
            total += top;
        }
        return total;
    }

    void leaf() {
        double value = 0.0;
        std::vector<RowKey> rows(static_cast<size_t>(n_));
        for (int f = 0; f < L_; ++f) {
            const std::uint64_t bits = members_in_[static_cast<size_t>(f)];
            if (bits == 0) continue;
            const SubframeSolution& sol = subframe_solution(f, bits);
            if (!sol.feasible) return; // reachable only with pruning off
            value += sol.value;
            int idx = 0;
            for (std::uint64_t rest = bits; rest != 0; rest &= rest - 1) {
                const int v = std::countr_zero(rest);
                const std::uint32_t mask = sol.masks[static_cast<size_t>(idx)];
                if (mask != 0) rows[static_cast<size_t>(v)] = {f + 1, mask};
                ++idx;
            }
        }
        if (!have_best_ || value > best_value_) {
            have_best_ = true;
            best_value_ = value;
            best_rows_ = std::move(rows);
        } else if (value == best_value_ && rows_less(rows, best_rows_, K_)) {
            best_rows_ = std::move(rows);
        }
    }

    // Next vehicle to branch on: fewest remaining choices first (fail
    // fast; silence counts as one), then highest demand, then lowest
    // id.  Visit order cannot change the returned optimum: leaves are
    // compared by value and then by the full lexicographic row order.
    int pick_vehicle(int depth) const {
        if (!enable_pruning_) return order_[static_cast<size_t>(depth)];
        int best = -1;
        int best_count = 0;
        for (std::uint64_t rest = ~assigned_ & all_; rest != 0;
             rest &= rest - 1) {
            const int u = std::countr_zero(rest);
            const int count = std::popcount(cand_[static_cast<size_t>(u)]) +
                              (silent_ok_[static_cast<size_t>(u)] ? 1 : 0);
            if (best < 0 || count < best_count ||
                (count == best_count && rank_[static_cast<size_t>(u)] <
                                            rank_[static_cast<size_t>(best)]))
            {
                best = u;
                best_count = count;
            }
        }
        return best;
    }

    void dfs(int depth) {
        if (limits_.exhausted) return;
        if (depth == n_) {
            leaf();
            return;
        }
        const int v = pick_vehicle(depth);
        for (int f : subframe_order_[static_cast<size_t>(v)]) {
            if (limits_.tick()) return;
            const std::uint64_t prev = members_in_[static_cast<size_t>(f)];
            const std::uint64_t next = prev | (std::uint64_t{1} << v);
            if (enable_pruning_) {
                if (((cand_[static_cast<size_t>(v)] >> f) & 1) == 0) continue;
                const SubframeSolution& after = subframe_solution(f, next);
                if (!after.feasible) continue; // monotone: every superset
                                               // of a dead set is dead
                const double after_value = after.value;
                const double before = value_in_[static_cast<size_t>(f)];
                sigma_[static_cast<size_t>(v)] = f;
                assigned_ |= std::uint64_t{1} << v;
                members_in_[static_cast<size_t>(f)] = next;
                value_in_[static_cast<size_t>(f)] = after_value;
                sum_values_ += after_value - before;
                for (int c : clusters_of_[static_cast<size_t>(v)])
                    cluster_used_[static_cast<size_t>(c)] |= std::uint64_t{1}
                                                             << f;
                bool viable = propagate(depth, f);
                if (viable && have_best_) {
                    const double bound = sum_values_ + unassigned_bound();
                    viable = bound >= best_value_ -
                                          kBoundSlack *
                                              (1.0 + std::abs(best_value_));
                }
                if (viable) dfs(depth + 1);
                unpropagate(depth, f);
                for (int c : clusters_of_[static_cast<size_t>(v)])
                    cluster_used_[static_cast<size_t>(c)] &=
                        ~(std::uint64_t{1} << f);
                sum_values_ -= after_value - before;
                value_in_[static_cast<size_t>(f)] = before;
                members_in_[static_cast<size_t>(f)] = prev;
                assigned_ &= ~(std::uint64_t{1} << v);
                sigma_[static_cast<size_t>(v)] = kUndecided;
            } else {
                sigma_[static_cast<size_t>(v)] = f;
                members_in_[static_cast<size_t>(f)] = next;
                dfs(depth + 1);
                members_in_[static_cast<size_t>(f)] = prev;
                sigma_[static_cast<size_t>(v)] = kUndecided;
            }
            if (limits_.exhausted) return;
        }
        // silence: the vehicle occupies no subframe and contributes no
        // rate; candidate sets of the others are untouched
        if (silent_ok_[static_cast<size_t>(v)]) {
            if (limits_.tick()) return;
            sigma_[static_cast<size_t>(v)] = kSilent;
            if (enable_pruning_) {
                assigned_ |= std::uint64_t{1} << v;
                bool viable = true;
                if (have_best_) {
                    const double bound = sum_values_ + unassigned_bound();
                    viable = bound >= best_value_ -
                                          kBoundSlack *
                                              (1.0 + std::abs(best_value_));
                }
                if (viable) dfs(depth + 1);
                assigned_ &= ~(std::uint64_t{1} << v);
            } else {
                dfs(depth + 1);
            }
            sigma_[static_cast<size_t>(v)] = kUndecided;
        }
    }

    int n_;
    int K_;
    int L_;
    std::vector<int> global_;
    std::vector<double> qos_;
    std::vector<std::vector<std::vector<Option>>> options_;
    std::vector<std::vector<double>> best_rate_; // per (vehicle, subframe)
    std::vector<char> silent_ok_; // window admits a zero rate
    std::vector<int> order_;
    std::vector<int> rank_;
    std::vector<std::vector<int>> subframe_order_;
    std::vector<std::vector<int>> intra_of_;
    std::vector<std::vector<int>> hop_of_;
    std::vector<ClusterState> clusters_;
    std::vector<std::vector<int>> clusters_of_;
    std::vector<std::uint64_t> cluster_used_;

    std::vector<int> sigma_;
    std::uint64_t assigned_ = 0;
    std::uint64_t all_ = 0;
    std::vector<std::uint64_t> members_in_;
    std::vector<double> value_in_;
    std::vector<std::uint64_t> cand_;
    std::vector<std::vector<int>> changed_;
    std::vector<int> match_of_;
    double sum_values_ = 0.0;
    bool enable_pruning_;
    SearchLimits& limits_;
    bool infeasible_upfront_ = false;

    std::vector<std::unordered_map<std::uint64_t, SubframeSolution>> memo_;
    std::size_t memo_entries_ = 0;

    bool have_best_ = false;
    double best_value_ = 0.0;
    std::vector<RowKey> best_rows_;
};

std::vector<std::vector<int>> conflict_components(const Scenario& s,
                                                  const ConstraintSystem& cs) {
    const int n = s.n_vehicles();
    std::vector<int> parent(static_cast<size_t>(n) + 1);
    std::iota(parent.begin(), parent.end(), 0);
    const std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) {
            parent[static_cast<size_t>(x)] =
                parent[static_cast<size_t>(parent[static_cast<size_t>(x)])];
            x = parent[static_cast<size_t>(x)];
        }
        return x;
    };
    const auto unite = [&](int a, int b) {
        parent[static_cast<size_t>(find(a))] = find(b);
    };
    for (const auto& p : cs.intra_pairs) unite(p.first, p.second);
    for (const auto& p : cs.hop_pairs) unite(p.first, p.second);

    std::vector<std::vector<int>> components;
    std::vector<int> slot_of(static_cast<size_t>(n) + 1, -1);
    for (int v = 1; v <= n; ++v) {
        const int root = find(v);
        if (slot_of[static_cast<size_t>(root)] < 0) {
            slot_of[static_cast<size_t>(root)] =
                static_cast<int>(components.size());
            components.emplace_back();
        }
        components[static_cast<size_t>(slot_of[static_cast<size_t>(root)])]
            .push_back(v);
    }
    return components;
}

void validate_solver_inputs(const Scenario& s, const ChannelGrid& g,
                            const CapacityMap& c, const ConstraintSystem& cs) {
    if (!(c.grid == g))
        throw InconsistentInputs(
            "solver: capacity map was generated for a different grid");
    if (c.rates.rows() != s.n_vehicles())
        throw InconsistentInputs(
            "solver: capacities cover " + std::to_string(c.rates.rows()) +
            " vehicles, scenario has " + std::to_string(s.n_vehicles()));
    if (cs.Q_minus.rows() != g.n_subframes())
        throw InconsistentInputs(
            "solver: constraint system was built for " +
            std::to_string(cs.Q_minus.rows()) + " subframes, grid has " +
            std::to_string(g.n_subframes()));
    if ((cs.G_minus.size() > 0 && cs.G_minus.cols() != s.n_vehicles()) ||
        (cs.H_minus.size() > 0 && cs.H_minus.cols() != s.n_vehicles()))
        throw InconsistentInputs(
            "solver: constraint system was built for a different vehicle "
            "count");
}

SolveResult finish(SolveResult r, const CapacityMap& c,
                   Clock::time_point start) {
    r.per_vehicle_rate =
        (r.assignment.array() * c.rates.array()).rowwise().sum();
    r.objective = r.per_vehicle_rate.sum();
    r.elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    return r;
}

} // namespace

SolveResult solve_exact(const Scenario& scenario, const ChannelGrid& grid,
                        const CapacityMap& capacities,
                        const ConstraintSystem& system,
                        const SolverOptions& options) {
    const auto start = Clock::now();
    validate_solver_inputs(scenario, grid, capacities, system);
    if (options.time_limit < 0.0)
        throw ConfigInvalid("solver: time_limit must be nonnegative");
    if (grid.n_subchannels() > kMaxSubchannels)
        throw InstanceTooLarge("solver: more than " +
                               std::to_string(kMaxSubchannels) +
                               " subchannels per subframe");
    if (grid.n_subframes() > kMaxSubframes)
        throw InstanceTooLarge("solver: more than " +
                               std::to_string(kMaxSubframes) + " subframes");

    SolveResult result;
    result.assignment =
        Assignment::Zero(scenario.n_vehicles(), grid.total_subchannels());

    // A cluster with more must-transmit members than subframes can
    // never give them pairwise distinct subframes; members whose
    // window admits silence demand no slot.
    for (const auto& cluster : scenario.clusters()) {
        int forced = 0;
        for (int id : cluster)
            if (!rate_within_window(0.0, scenario.qos_of(id),
                                    scenario.epsilon()))
                ++forced;
        if (forced > grid.n_subframes()) {
            result.status = SolveStatus::infeasible;
            return finish(std::move(result), capacities, start);
        }
    }

    SearchLimits limits;
    if (options.time_limit > 0.0) {
        limits.has_deadline = true;
        limits.deadline =
            start + std::chrono::duration_cast<Clock::duration>(
                        std::chrono::duration<double>(options.time_limit));
    }
    limits.node_limit = options.node_limit;

    for (const auto& members : conflict_components(scenario, system)) {
        if (limits.exhausted) break;
        if (members.size() > kMaxComponentSize)
            throw InstanceTooLarge(
                "solver: conflict component of " +
                std::to_string(members.size()) + " vehicles exceeds " +
                std::to_string(kMaxComponentSize));
        ComponentSolver solver(scenario, grid, capacities.rates, system,
                               members, options.enable_pruning, limits);
        const ComponentOutcome out = solver.run();
        if (out.infeasible) {
            result.status = SolveStatus::infeasible;
            result.assignment.setZero();
            result.nodes_explored = limits.nodes;
            return finish(std::move(result), capacities, start);
        }
        if (out.have_best)
            for (std::size_t i = 0; i < members.size(); ++i)
                scatter_row(result.assignment, members[i], out.rows[i],
                            grid.n_subchannels());
    }

    result.status =
        limits.exhausted ? SolveStatus::timeout : SolveStatus::optimal;
    result.nodes_explored = limits.nodes;
    return finish(std::move(result), capacities, start);
}

SolveResult brute_force_solve(const Scenario& scenario,
                              const ChannelGrid& grid,
                              const CapacityMap& capacities,
                              const ConstraintSystem& system) {
    const auto start = Clock::now();
    validate_solver_inputs(scenario, grid, capacities, system);
    const int n = scenario.n_vehicles();
    const int K = grid.n_subchannels();
    const int L = grid.n_subframes();
    if (n * K * L > 48)
        throw InstanceTooLarge(
            "brute force: n_vehicles * total_subchannels = " +
            std::to_string(n * K * L) + " exceeds 48");
    if (K > 16)
        throw InstanceTooLarge("brute force: more than 16 subchannels");
    // worst case one vehicle contributes the empty row plus every
    // (subframe, subset) pair; cap the full enumeration analytically
    // so runtime stays bounded for any capacity data
    double worst_paths = 1.0;
    const double rows_per_vehicle =
        1.0 + static_cast<double>(L) *
                  static_cast<double>((std::uint32_t{1} << K) - 1);
    for (int v = 0; v < n; ++v) worst_paths *= rows_per_vehicle;
    if (worst_paths > 16'777'216.0)
        throw InstanceTooLarge("brute force: worst-case enumeration of " +
                               std::to_string(worst_paths) +
                               " paths exceeds 2^24");

    struct Row {
        RowKey key;
        double rate;
    };
    std::vector<std::vector<Row>> rows(static_cast<size_t>(n));
    std::vector<double> sum(std::size_t{1} << K);
    for (int v = 0; v < n; ++v) {
        const double q = scenario.qos()(v);
        if (rate_within_window(0.0, q, scenario.epsilon()))
            rows[static_cast<size_t>(v)].push_back({{0, 0}, 0.0});
        for (int f = 1; f <= L; ++f) {
            const int base = (f - 1) * K;
            sum[0] = 0.0;
            for (std::uint32_t m = 1; m < (std::uint32_t{1} << K); ++m) {
                const int low = std::countr_zero(m);
                sum[m] = sum[m & (m - 1)] + capacities.rates(v, base + low);
                if (rate_within_window(sum[m], q, scenario.epsilon()))
                    rows[static_cast<size_t>(v)].push_back({{f, m}, sum[m]});
            }
        }
    }

    std::vector<std::vector<int>> intra_of(static_cast<size_t>(n));
    std::vector<std::vector<int>> hop_of(static_cast<size_t>(n));
    for (const auto& p : system.intra_pairs)
        intra_of[static_cast<size_t>(p.second - 1)].push_back(p.first - 1);
    for (const auto& p : system.hop_pairs)
        hop_of[static_cast<size_t>(p.second - 1)].push_back(p.first - 1);

    std::vector<RowKey> chosen(static_cast<size_t>(n));
    std::vector<RowKey> best;
    double best_value = 0.0;
    bool found = false;
    std::uint64_t nodes = 0;

    const std::function<void(int, double)> dfs = [&](int v, double value) {
        if (v == n) {
            if (!found || value > best_value) {
                found = true;
                best_value = value;
                best = chosen;
            } else if (value == best_value && rows_less(chosen, best, K)) {
                best = chosen;
            }
            return;
        }
        for (const Row& row : rows[static_cast<size_t>(v)]) {
            ++nodes;
            bool ok = true;
            if (row.key.mask != 0) {
                for (int p : intra_of[static_cast<size_t>(v)]) {
                    const RowKey& other = chosen[static_cast<size_t>(p)];
                    if (other.mask != 0 &&
                        other.subframe == row.key.subframe) {
                        ok = false;
                        break;
                    }
                }
                if (ok)
                    for (int p : hop_of[static_cast<size_t>(v)]) {
                        const RowKey& other = chosen[static_cast<size_t>(p)];
                        if (other.subframe == row.key.subframe &&
                            (other.mask & row.key.mask)) {
                            ok = false;
                            break;
                        }
                    }
            }
            if (!ok) continue;
            chosen[static_cast<size_t>(v)] = row.key;
            dfs(v + 1, value + row.rate);
            chosen[static_cast<size_t>(v)] = {0, 0};
        }
    };
    dfs(0, 0.0);

    SolveResult result;
    result.assignment = Assignment::Zero(n, grid.total_subchannels());
    result.status = found ? SolveStatus::optimal : SolveStatus::infeasible;
    if (found)
        for (int v = 0; v < n; ++v)
            scatter_row(result.assignment, v + 1, best[static_cast<size_t>(v)],
                        K);
    result.nodes_explored = nodes;
    return finish(std::move(result), capacities, start);
}

} // namespace sidelink
