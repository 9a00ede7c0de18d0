#pragma once

// Feasibility-restricted edge-chromatic indices of a network.
//
//   fractional index : min sum x_M  s.t. sum_{M ∋ e} x_M = 1, x >= 0
//   integer index    : the same with x_M in {0, 1} (partition of the links)
//   dual             : max sum y_e  s.t. sum_{e in M} y_e <= 1, y free,
//                      solved by adding violated matching constraints lazily
//
// All optima are exact rationals.

#include "fracsched/errors.hpp"
#include "fracsched/link_set.hpp"
#include "fracsched/matching.hpp"
#include "fracsched/network.hpp"
#include "fracsched/rational.hpp"
#include "fracsched/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace fracsched {

struct SupportEntry {
    std::size_t position = 0;  // index into the family
    Rational x;
};

struct FractionalResult {
    Rational chi_star;
    std::vector<SupportEntry> support;  // x_M > 0, ascending position
    bool all_unit = false;
    std::size_t iterations = 0;
    std::vector<Rational> dual;  // one per link; sum_{e in M} dual_e <= 1 for every member M
};

struct IntegerResult {
    std::size_t chi_int = 0;
    std::vector<std::size_t> partition;  // family positions, ascending
};

enum class Verdict { strict, equal };

inline const char* to_string(Verdict v) { return v == Verdict::strict ? "strict" : "equal"; }

struct Classification {
    Rational chi_star;
    std::optional<std::size_t> chi_int;  // absent when the unit-weight shortcut fired
    Verdict verdict = Verdict::equal;
    bool ilp_solved = false;
    FractionalResult fractional;
    std::optional<IntegerResult> integer;
    double lp_ms = 0.0;
    double ilp_ms = 0.0;
};

struct WeightedMatching {
    LinkSet matching;  // may be empty
    Rational weight;
};

struct DualResult {
    Rational z_star;
    std::vector<Rational> y;
    std::size_t cuts_added = 0;
    std::vector<LinkSet> constraints;  // singletons first, then cuts in order added
};

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

inline BigInt ceil_rational(const Rational& r) {
    BigInt q = numerator(r) / denominator(r);
    if (q * denominator(r) < numerator(r)) q += 1;
    return q;
}

}  // namespace detail

/// Exact optimum of the covering LP over the family.
inline FractionalResult solve_fractional(const MatchingFamily& family, const Deadline& deadline = {}) {
    LinearProgram lp;
    lp.a = SparseColumns(family.n_links());
    std::vector<std::uint32_t> rows;
    for (const LinkSet& m : family.matchings()) {
        rows.clear();
        m.for_each([&](std::size_t e) { rows.push_back(static_cast<std::uint32_t>(e)); });
        lp.a.add_unit_column(rows);
    }
    lp.b.assign(family.n_links(), Rational(1));
    lp.c.assign(family.size(), Rational(1));
    lp.sense = Sense::minimize;
    lp.relations.assign(family.n_links(), Relation::equal);

    const LpResult res = simplex_solve(lp, deadline);
    if (res.status != LpStatus::optimal)
        throw std::logic_error(std::string("covering LP reported ") + to_string(res.status));

    FractionalResult out;
    out.chi_star = res.objective;
    out.iterations = res.iterations;
    out.dual = res.dual;
    out.all_unit = true;
    for (std::size_t j = 0; j < res.primal.size(); ++j) {
        if (res.primal[j] > 0) {
            out.support.push_back({j, res.primal[j]});
            if (res.primal[j] != 1) out.all_unit = false;
        }
    }
    return out;
}

namespace detail {

/// Covering LP over the members inside a residual link set, solved in
/// doubles by a revised simplex that starts from the singleton basis and
/// generates columns from a pool kept across calls. Only the final dual is
/// used, and only through an exact bound, so rounding here can weaken a
/// bound but never invalidate one.
class ResidualCoverLp {
public:
    /// Approximate optimal duals, one per link id (zero outside `rows`).
    /// `members` are the family positions disjoint from `covered`.
    std::vector<double> solve(const MatchingFamily& family, const std::vector<std::uint32_t>& rows,
                              const LinkSet& covered, const std::vector<std::uint32_t>& members) {
        const std::size_t m = rows.size();
        const std::size_t n_links = family.n_links();
        row_of_.assign(n_links, -1);
        for (std::size_t i = 0; i < m; ++i) row_of_[rows[i]] = static_cast<int>(i);
        binv_.assign(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) binv_[i * m + i] = 1.0;
        x_.assign(m, 1.0);
        cost_.assign(m, 1.0);
        y_.assign(m, 0.0);
        d_.assign(m, 0.0);

        if (pool_.size() > kPoolLimit) pool_.clear();
        active_.clear();
        for (std::uint32_t pos : pool_)
            if (!family[pos].intersects(covered)) active_.push_back(pos);

        const std::size_t max_iterations = 20 * m + 100;
        for (std::size_t it = 0; it < max_iterations; ++it) {
            compute_duals(m);
            std::int64_t entering = price(family, active_);
            if (entering == kNone) {
                // Pool exhausted: add the most violated residual members.
                if (!generate_columns(family, members, m)) break;
                entering = price(family, active_);
                if (entering == kNone) break;
            }
            pivot(family, entering, m);
        }

        std::vector<double> out(n_links, 0.0);
        for (std::size_t i = 0; i < m; ++i) out[rows[i]] = y_[i];
        return out;
    }

private:
    static constexpr double kTolerance = 1e-9;
    static constexpr std::int64_t kNone = std::numeric_limits<std::int64_t>::min();
    static constexpr std::int64_t kSingleton = -1;
    static constexpr std::int64_t kSurplus = -1'000'000;
    static constexpr std::size_t kPoolLimit = 50'000;

    double member_value(const MatchingFamily& family, std::uint32_t pos) const {
        double v = 0.0;
        family[pos].for_each([&](std::size_t e) { v += y_[static_cast<std::size_t>(row_of_[e])]; });
        return v;
    }

    void compute_duals(std::size_t m) {
        for (std::size_t i = 0; i < m; ++i) y_[i] = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            if (cost_[k] == 0.0) continue;
            const double* row = &binv_[k * m];
            for (std::size_t i = 0; i < m; ++i) y_[i] += row[i];
        }
    }

    /// Entering column: a member with the largest y(M) - 1, a singleton with
    /// y_e > 1, or a surplus with y_e < 0.
    std::int64_t price(const MatchingFamily& family, const std::vector<std::uint32_t>& candidates) const {
        double best = kTolerance;
        std::int64_t entering = kNone;
        for (std::uint32_t pos : candidates) {
            const double v = member_value(family, pos) - 1.0;
            if (v > best) {
                best = v;
                entering = pos;
            }
        }
        for (std::size_t i = 0; i < y_.size(); ++i) {
            if (y_[i] - 1.0 > best) {
                best = y_[i] - 1.0;
                entering = kSingleton - static_cast<std::int64_t>(i);
            }
            if (-y_[i] > best) {
                best = -y_[i];
                entering = kSurplus - static_cast<std::int64_t>(i);
            }
        }
        return entering;
    }

    /// Moves up to m of the most violated residual members into the pool;
    /// false when none is violated.
    bool generate_columns(const MatchingFamily& family, const std::vector<std::uint32_t>& members, std::size_t m) {
        violated_.clear();
        for (std::uint32_t pos : members) {
            const double v = member_value(family, pos) - 1.0;
            if (v > kTolerance) violated_.emplace_back(v, pos);
        }
        if (violated_.empty()) return false;
        const std::size_t keep = std::min(violated_.size(), std::max<std::size_t>(m, 8));
        std::partial_sort(violated_.begin(), violated_.begin() + static_cast<std::ptrdiff_t>(keep), violated_.end(),
                          [](const auto& a, const auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
        for (std::size_t k = 0; k < keep; ++k) {
            pool_.push_back(violated_[k].second);
            active_.push_back(violated_[k].second);
        }
        return true;
    }

    void pivot(const MatchingFamily& family, std::int64_t entering, std::size_t m) {
        // d = B^-1 a
        for (std::size_t k = 0; k < m; ++k) d_[k] = 0.0;
        auto add_row = [&](std::size_t i, double sign) {
            for (std::size_t k = 0; k < m; ++k) d_[k] += sign * binv_[k * m + i];
        };
        double entering_cost = 1.0;
        if (entering >= 0) {
            family[static_cast<std::size_t>(entering)].for_each(
                [&](std::size_t e) { add_row(static_cast<std::size_t>(row_of_[e]), 1.0); });
        } else if (entering <= kSurplus) {
            add_row(static_cast<std::size_t>(kSurplus - entering), -1.0);
            entering_cost = 0.0;
        } else {
            add_row(static_cast<std::size_t>(kSingleton - entering), 1.0);
        }

        std::size_t leave = m;
        double ratio = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < m; ++k) {
            if (d_[k] <= kTolerance) continue;
            const double r = std::max(0.0, x_[k]) / d_[k];
            if (r < ratio - kTolerance) {
                ratio = r;
                leave = k;
            }
        }
        if (leave == m) return;  // cannot happen for a covering LP

        const double pivot_value = d_[leave];
        double* prow = &binv_[leave * m];
        for (std::size_t i = 0; i < m; ++i) prow[i] /= pivot_value;
        x_[leave] /= pivot_value;
        for (std::size_t k = 0; k < m; ++k) {
            if (k == leave || d_[k] == 0.0) continue;
            const double f = d_[k];
            double* row = &binv_[k * m];
            for (std::size_t i = 0; i < m; ++i) row[i] -= f * prow[i];
            x_[k] -= f * x_[leave];
        }
        cost_[leave] = entering_cost;
    }

    std::vector<int> row_of_;
    std::vector<double> binv_;  // m x m, row k belongs to basis position k
    std::vector<double> x_;
    std::vector<double> cost_;
    std::vector<double> y_;
    std::vector<double> d_;
    std::vector<std::uint32_t> pool_;
    std::vector<std::uint32_t> active_;
    std::vector<std::pair<double, std::uint32_t>> violated_;
};

/// Depth-first exact cover. Each node branches on the uncovered link with the
/// fewest members disjoint from what is covered (lowest index on ties) and
/// tries those members by increasing reduced cost 1 - y(M) under the LP
/// duals, then by family position. The incumbent starts as an LP-seeded
/// greedy partition and is replaced only by a strictly smaller cover, so the
/// result is the greedy partition when that is optimal and otherwise the
/// first optimum in search order. Every pruning rule is a valid lower bound.
class PartitionSearch {
public:
    PartitionSearch(const MatchingFamily& family, std::size_t lower_bound, const FractionalResult* vertex,
                    const Deadline& deadline)
        : family_(family), lower_bound_(lower_bound), deadline_(deadline) {
        const std::size_t n = family.n_links();
        for (std::size_t e = 0; e < n; ++e) all_.insert(e);
        // Pairs of links that never share a member must use distinct matchings.
        std::vector<LinkSet> together(n);
        for (const LinkSet& m : family.matchings())
            m.for_each([&](std::size_t e) { together[e] |= m; });
        never_with_.resize(n);
        for (std::size_t e = 0; e < n; ++e) {
            never_with_[e] = all_ - together[e];
        }
        max_card_ = std::max<std::size_t>(1, family.max_cardinality());
        if (vertex) {
            init_dual(vertex->dual);
            seed_ = vertex->support;
            std::stable_sort(seed_.begin(), seed_.end(),
                             [](const SupportEntry& a, const SupportEntry& b) { return a.x > b.x; });
        }
        member_dual_.assign(family.size(), 0);
        if (use_dual_)
            for (std::size_t pos = 0; pos < family.size(); ++pos)
                family[pos].for_each([&](std::size_t e) { member_dual_[pos] += dual_num_[e]; });
        order_.resize(n);
        for (std::size_t e = 0; e < n; ++e) {
            const auto members = family.containing(e);
            order_[e].assign(members.begin(), members.end());
            // Larger y(M) means smaller reduced cost.
            std::stable_sort(order_[e].begin(), order_[e].end(), [&](std::uint32_t a, std::uint32_t b) {
                return member_dual_[a] > member_dual_[b];
            });
        }
    }

    IntegerResult run() {
        // The greedy partition is the first incumbent; the search replaces it
        // only with a strictly smaller one.
        best_ = greedy();
        limit_ = best_.size();
        if (limit_ <= lower_bound_) done_ = true;
        std::int64_t total = 0;
        for (std::int64_t y : dual_num_) total += y;
        // Cheap bounds first; past the node cap, restart with a residual LP
        // bound at every node. Memo entries from the first pass stay valid.
        node_cap_ = kPlainNodes;
        dfs(total);
        if (!done_ && aborted_) {
            aborted_ = false;
            node_cap_ = std::numeric_limits<std::size_t>::max();
            dfs_lp();
        }
        IntegerResult out;
        out.partition = best_;
        std::sort(out.partition.begin(), out.partition.end());
        out.chi_int = best_.size();
        return out;
    }

private:
    /// Disjoint support members by decreasing weight, then the greedy fill.
    std::vector<std::size_t> greedy() const {
        LinkSet covered;
        std::vector<std::size_t> picked;
        for (const SupportEntry& s : seed_) {
            const LinkSet& m = family_[s.position];
            if (m.intersects(covered)) continue;
            covered |= m;
            picked.push_back(s.position);
        }
        while (covered != all_) {
            const std::size_t e = (all_ - covered).front();
            std::size_t pick = family_.size();
            for (std::uint32_t pos : family_.containing(e)) {
                const LinkSet& m = family_[pos];
                if (m.intersects(covered)) continue;
                if (pick == family_.size() || m.size() > family_[pick].size()) pick = pos;
            }
            covered |= family_[pick];
            picked.push_back(pick);
        }
        return picked;
    }

    /// Scales a dual-feasible y to integers over a common denominator. Any
    /// such y restricted to the uncovered links stays feasible for the
    /// residual problem, so ceil(y(uncovered)) bounds its optimum. Left
    /// disabled when y is absent, infeasible, or too large for int64.
    void init_dual(const std::vector<Rational>& dual) {
        const std::size_t n = family_.n_links();
        if (dual.size() != n || n == 0) return;
        const BigInt den = lcm_of_denominators(dual);
        std::vector<BigInt> scaled(n);
        BigInt total_abs = 0;
        for (std::size_t e = 0; e < n; ++e) {
            scaled[e] = numerator(dual[e]) * (den / denominator(dual[e]));
            total_abs += abs(scaled[e]);
        }
        if (den > (BigInt(1) << 40) || total_abs > (BigInt(1) << 60)) return;
        for (const LinkSet& m : family_.matchings()) {
            BigInt sum = 0;
            m.for_each([&](std::size_t e) { sum += scaled[e]; });
            if (sum > den) return;
        }
        dual_den_ = den.convert_to<std::int64_t>();
        dual_num_.resize(n);
        for (std::size_t e = 0; e < n; ++e) dual_num_[e] = scaled[e].convert_to<std::int64_t>();
        use_dual_ = true;
    }

    /// ceil(sum / den) for the scaled dual mass of the uncovered links.
    std::size_t dual_bound(std::int64_t sum) const {
        if (!use_dual_ || sum <= 0) return 0;
        return static_cast<std::size_t>((sum + dual_den_ - 1) / dual_den_);
    }

    std::size_t residual_bound(const LinkSet& uncovered, std::int64_t dual_sum) const {
        std::size_t by_size = (uncovered.size() + max_card_ - 1) / max_card_;
        by_size = std::max(by_size, dual_bound(dual_sum));
        std::size_t clique = 0;
        LinkSet candidates = uncovered;
        while (!candidates.empty()) {
            const std::size_t e = candidates.front();
            ++clique;
            candidates &= never_with_[e];
        }
        return std::max(by_size, clique);
    }

    void dfs(std::int64_t dual_sum) {
        if (done_ || aborted_) return;
        deadline_.poll("partition search");
        if (++nodes_ > node_cap_) {
            aborted_ = true;
            return;
        }
        if (covered_ == all_) {
            best_ = chosen_;
            limit_ = chosen_.size();
            if (limit_ <= lower_bound_) done_ = true;
            return;
        }
        const LinkSet uncovered = all_ - covered_;
        std::size_t bound = residual_bound(uncovered, dual_sum);
        const auto known = failed_.find(uncovered);
        if (known != failed_.end()) bound = std::max<std::size_t>(bound, known->second);
        if (chosen_.size() + bound >= limit_) return;
        const std::size_t limit_before = limit_;

        // Admissible members: disjoint from the cover and within the dual
        // bound. A link with none left prunes the node.
        std::size_t branch = family_.n_links();
        std::size_t fewest = std::numeric_limits<std::size_t>::max();
        uncovered.for_each([&](std::size_t e) {
            if (fewest == 0) return;
            std::size_t count = 0;
            for (std::uint32_t pos : order_[e]) {
                if (chosen_.size() + 1 + dual_bound(dual_sum - member_dual_[pos]) >= limit_) break;
                if (family_[pos].intersects(covered_)) continue;
                if (++count >= fewest) break;
            }
            if (count < fewest) {
                fewest = count;
                branch = e;
            }
        });
        if (fewest == 0) {
            remember_failure(uncovered);
            return;
        }

        for (std::uint32_t pos : order_[branch]) {
            const LinkSet& m = family_[pos];
            if (m.intersects(covered_)) continue;
            const std::int64_t child_sum = dual_sum - member_dual_[pos];
            // Later members have no smaller reduced cost.
            if (chosen_.size() + 1 + dual_bound(child_sum) >= limit_) break;
            covered_ |= m;
            chosen_.push_back(pos);
            dfs(child_sum);
            chosen_.pop_back();
            covered_ = covered_ - m;
            if (done_ || chosen_.size() + 1 >= limit_) break;
        }
        // No improvement means every cover of `uncovered` needs at least
        // limit - chosen members.
        if (!done_ && !aborted_ && limit_ == limit_before) remember_failure(uncovered);
    }

    void remember_failure(const LinkSet& uncovered) {
        if (failed_.size() >= kMaxFailedStates) return;
        auto& slot = failed_[uncovered];
        slot = std::max<std::size_t>(slot, limit_ - chosen_.size());
    }

    /// Same search, bounded at each node by a dual of the residual covering
    /// LP: for y >= 0, every cover of U uses at least y(U) / max_M y(M)
    /// members, evaluated exactly on y scaled to integers.
    void dfs_lp() {
        if (done_) return;
        deadline_.poll("partition search");
        if (covered_ == all_) {
            best_ = chosen_;
            limit_ = chosen_.size();
            if (limit_ <= lower_bound_) done_ = true;
            return;
        }
        const LinkSet uncovered = all_ - covered_;
        std::size_t bound = residual_bound(uncovered, 0);
        const auto known = failed_.find(uncovered);
        if (known != failed_.end()) bound = std::max<std::size_t>(bound, known->second);
        if (chosen_.size() + bound >= limit_) return;
        const std::size_t limit_before = limit_;

        std::vector<std::uint32_t> members;
        for (std::uint32_t pos = 0; pos < family_.size(); ++pos)
            if (!family_[pos].intersects(covered_)) members.push_back(pos);
        const std::vector<std::uint32_t> rows = uncovered.to_vector();
        const std::vector<double> y = lp_.solve(family_, rows, covered_, members);

        std::vector<std::int64_t> yi(family_.n_links(), 0);
        std::int64_t y_total = 0;
        for (std::uint32_t e : rows) {
            yi[e] = static_cast<std::int64_t>(std::floor(std::clamp(y[e], 0.0, 4.0) * kDualScale));
            y_total += yi[e];
        }
        std::vector<std::int64_t> member_y(members.size(), 0);
        std::int64_t den = 0;
        for (std::size_t k = 0; k < members.size(); ++k) {
            family_[members[k]].for_each([&](std::size_t e) { member_y[k] += yi[e]; });
            den = std::max(den, member_y[k]);
        }
        auto cover_bound = [&](std::int64_t sum) -> std::size_t {
            if (den <= 0 || sum <= 0) return 0;
            return static_cast<std::size_t>((sum + den - 1) / den);
        };
        if (chosen_.size() + cover_bound(y_total) >= limit_) {
            remember_failure(uncovered);
            return;
        }

        // Branch on the link with the fewest admissible members.
        auto admissible = [&](std::size_t k) {
            return chosen_.size() + 1 + cover_bound(y_total - member_y[k]) < limit_;
        };
        std::vector<std::size_t> count(family_.n_links(), 0);
        for (std::size_t k = 0; k < members.size(); ++k)
            if (admissible(k)) family_[members[k]].for_each([&](std::size_t e) { ++count[e]; });
        std::size_t branch = rows.front();
        for (std::uint32_t e : rows)
            if (count[e] < count[branch]) branch = e;
        if (count[branch] == 0) {
            remember_failure(uncovered);
            return;
        }

        std::vector<std::size_t> trial;
        for (std::size_t k = 0; k < members.size(); ++k)
            if (family_[members[k]].contains(branch) && admissible(k)) trial.push_back(k);
        std::stable_sort(trial.begin(), trial.end(),
                         [&](std::size_t a, std::size_t b) { return member_y[a] > member_y[b]; });

        for (std::size_t k : trial) {
            if (!admissible(k)) break;
            const LinkSet& m = family_[members[k]];
            covered_ |= m;
            chosen_.push_back(members[k]);
            dfs_lp();
            chosen_.pop_back();
            covered_ = covered_ - m;
            if (done_) return;
        }
        if (limit_ == limit_before) remember_failure(uncovered);
    }

    static constexpr std::size_t kMaxFailedStates = 1'000'000;
    static constexpr std::size_t kPlainNodes = 20'000;
    static constexpr double kDualScale = 1073741824.0;  // 2^30

    const MatchingFamily& family_;
    std::size_t lower_bound_;
    const Deadline& deadline_;
    LinkSet all_;
    std::vector<LinkSet> never_with_;
    std::vector<SupportEntry> seed_;
    std::vector<std::int64_t> member_dual_;       // scaled y(M) per family position
    std::vector<std::vector<std::uint32_t>> order_;  // per link: members in trial order
    std::size_t max_card_ = 1;
    LinkSet covered_;
    std::vector<std::size_t> chosen_;
    std::vector<std::size_t> best_;
    std::size_t limit_ = 0;
    bool done_ = false;
    std::unordered_map<LinkSet, std::size_t, LinkSetHash> failed_;  // residual -> proven lower bound
    std::size_t nodes_ = 0;
    std::size_t node_cap_ = 0;
    bool aborted_ = false;
    ResidualCoverLp lp_;
    bool use_dual_ = false;
    std::int64_t dual_den_ = 1;
    std::vector<std::int64_t> dual_num_;
};

}  // namespace detail

/// Minimum partition of the links into family members, given an optimal
/// vertex of the family's covering LP. Its duals bound every residual
/// problem and the search stops as soon as it meets ceil(chi*).
inline IntegerResult solve_integer(const MatchingFamily& family, const FractionalResult& lp,
                                   const Deadline& deadline = {}) {
    const std::size_t lb = detail::ceil_rational(lp.chi_star).convert_to<std::size_t>();
    return detail::PartitionSearch(family, lb, &lp, deadline).run();
}

inline IntegerResult solve_integer(const MatchingFamily& family, const Deadline& deadline = {}) {
    return solve_integer(family, solve_fractional(family, deadline), deadline);
}

/// Steps 2-4 given the LP vertex from step 1.
inline Classification classify_with_vertex(const MatchingFamily& family, FractionalResult fractional,
                                           const Deadline& deadline = {}) {
    Classification c;
    c.chi_star = fractional.chi_star;
    if (fractional.all_unit) {
        c.verdict = Verdict::equal;
        c.ilp_solved = false;
    } else {
        const auto start = std::chrono::steady_clock::now();
        IntegerResult integer = solve_integer(family, fractional, deadline);
        c.ilp_ms = detail::elapsed_ms(start);
        c.chi_int = integer.chi_int;
        c.ilp_solved = true;
        c.verdict = c.chi_star < Rational(integer.chi_int) ? Verdict::strict : Verdict::equal;
        c.integer = std::move(integer);
    }
    c.fractional = std::move(fractional);
    return c;
}

/// Steps 1-4: LP; stop if every nonzero weight is 1; else ILP and compare.
inline Classification classify(const MatchingFamily& family, const Deadline& deadline = {}) {
    const auto start = std::chrono::steady_clock::now();
    FractionalResult fractional = solve_fractional(family, deadline);
    const double lp_ms = detail::elapsed_ms(start);
    Classification c = classify_with_vertex(family, std::move(fractional), deadline);
    c.lp_ms = lp_ms;
    return c;
}

// ---------------------------------------------------------------------------
// Separation: maximum-weight feasible matching (the empty set has weight 0).

/// Scan of an explicit family.
inline WeightedMatching max_weight_feasible_matching(std::span<const Rational> weights, const MatchingFamily& family) {
    if (weights.size() != family.n_links()) throw std::invalid_argument("one weight per link is required");
    WeightedMatching best{LinkSet{}, Rational(0)};
    std::vector<double> wd(weights.size());
    for (std::size_t e = 0; e < weights.size(); ++e) wd[e] = to_double(weights[e]);
    double scale_all = 0;
    for (double w : wd) scale_all += std::fabs(w);
    double best_d = 0.0;
    for (const LinkSet& m : family.matchings()) {
        double s = 0.0;
        m.for_each([&](std::size_t e) { s += wd[e]; });
        if (s < best_d - 1e-9 * (scale_all + 1.0)) continue;  // certainly not better
        Rational exact = 0;
        m.for_each([&](std::size_t e) { exact += weights[e]; });
        if (exact > best.weight) {
            best.weight = exact;
            best.matching = m;
            best_d = to_double(exact);
        }
    }
    return best;
}

namespace detail {

template <class W>
class MaxWeightSearch {
public:
    MaxWeightSearch(const Network& net, std::vector<std::uint32_t> order, std::vector<W> weight,
                    const Deadline& deadline)
        : state_(net), order_(std::move(order)), weight_(std::move(weight)), deadline_(deadline) {
        suffix_.assign(order_.size() + 1, W(0));
        for (std::size_t k = order_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + weight_[k];
    }

    std::pair<LinkSet, W> run() {
        dfs(0, W(0));
        return {best_set_, best_};
    }

private:
    void dfs(std::size_t from, const W& current) {
        deadline_.poll("max-weight matching search");
        if (current > best_) {
            best_ = current;
            best_set_ = state_.members();
        }
        for (std::size_t k = from; k < order_.size(); ++k) {
            if (current + suffix_[k] <= best_) return;
            if (state_.try_push(order_[k])) {
                dfs(k + 1, current + weight_[k]);
                state_.pop();
            }
        }
    }

    IncrementalFeasibility state_;
    std::vector<std::uint32_t> order_;
    std::vector<W> weight_;  // aligned with order_
    std::vector<W> suffix_;
    const Deadline& deadline_;
    W best_ = W(0);
    LinkSet best_set_;
};

}  // namespace detail

/// Exact branch and bound over the feasible sets of the network. Only
/// positive-weight links can improve a matching, so only they are branched
/// on, heaviest first.
inline WeightedMatching max_weight_feasible_matching(std::span<const Rational> weights, const Network& net,
                                                     const Deadline& deadline = {}) {
    if (weights.size() != net.link_count()) throw std::invalid_argument("one weight per link is required");
    std::vector<std::uint32_t> order;
    for (std::uint32_t e = 0; e < weights.size(); ++e)
        if (weights[e] > 0) order.push_back(e);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::uint32_t a, std::uint32_t b) { return weights[a] > weights[b]; });
    if (order.empty()) return {LinkSet{}, Rational(0)};

    // Scale to integers over the common denominator.
    BigInt common = 1;
    for (std::uint32_t e : order) common = boost::multiprecision::lcm(common, BigInt(denominator(weights[e])));
    std::vector<BigInt> scaled;
    BigInt total = 0;
    for (std::uint32_t e : order) {
        scaled.push_back(numerator(weights[e]) * (common / denominator(weights[e])));
        total += scaled.back();
    }
    if (total < BigInt(std::numeric_limits<std::int64_t>::max() / 4)) {
        std::vector<std::int64_t> w;
        for (const BigInt& s : scaled) w.push_back(s.convert_to<std::int64_t>());
        auto [set, best] = detail::MaxWeightSearch<std::int64_t>(net, order, std::move(w), deadline).run();
        return {set, Rational(BigInt(best), common)};
    }
    auto [set, best] = detail::MaxWeightSearch<BigInt>(net, order, std::move(scaled), deadline).run();
    return {set, Rational(best, common)};
}

using SeparationOracle = std::function<WeightedMatching(std::span<const Rational>)>;

inline SeparationOracle network_separation(const Network& net, const Deadline& deadline = {}) {
    return [&net, &deadline](std::span<const Rational> y) { return max_weight_feasible_matching(y, net, deadline); };
}

inline SeparationOracle family_separation(const MatchingFamily& family) {
    return [&family](std::span<const Rational> y) { return max_weight_feasible_matching(y, family); };
}

/// Maximises sum y_e under the singleton constraints, then repeatedly adds
/// the heaviest violated matching constraint until the oracle finds none.
inline DualResult solve_dual_cutgen(std::size_t n_links, const SeparationOracle& oracle,
                                    const Deadline& deadline = {}) {
    if (n_links == 0) throw PreconditionError("dual needs at least one link");
    DualResult out;
    for (std::size_t e = 0; e < n_links; ++e) {
        LinkSet s;
        s.insert(e);
        out.constraints.push_back(s);
    }
    std::unordered_map<LinkSet, bool, LinkSetHash> listed;
    for (const LinkSet& s : out.constraints) listed[s] = true;

    for (;;) {
        LinearProgram lp;
        lp.a = SparseColumns(out.constraints.size());
        std::vector<std::vector<std::uint32_t>> rows_of_link(n_links);
        for (std::size_t r = 0; r < out.constraints.size(); ++r)
            out.constraints[r].for_each([&](std::size_t e) { rows_of_link[e].push_back(static_cast<std::uint32_t>(r)); });
        for (std::size_t e = 0; e < n_links; ++e) lp.a.add_unit_column(rows_of_link[e]);
        lp.b.assign(out.constraints.size(), Rational(1));
        lp.c.assign(n_links, Rational(1));
        lp.sense = Sense::maximize;
        lp.relations.assign(out.constraints.size(), Relation::less_equal);
        lp.free.assign(n_links, true);

        const LpResult res = simplex_solve(lp, deadline);
        if (res.status != LpStatus::optimal)
            throw std::logic_error(std::string("restricted dual reported ") + to_string(res.status));
        out.z_star = res.objective;
        out.y = res.primal;

        const WeightedMatching violator = oracle(out.y);
        if (violator.weight <= 1) break;
        if (!listed.emplace(violator.matching, true).second)
            throw std::logic_error("separation returned a constraint that is already listed");
        out.constraints.push_back(violator.matching);
        ++out.cuts_added;
    }
    return out;
}

inline DualResult solve_dual_cutgen(const Network& net, const Deadline& deadline = {}) {
    return solve_dual_cutgen(net.link_count(), network_separation(net, deadline), deadline);
}

inline DualResult solve_dual_cutgen(const MatchingFamily& family, const Deadline& deadline = {}) {
    return solve_dual_cutgen(family.n_links(), family_separation(family), deadline);
}

// ---------------------------------------------------------------------------

/// Minimum number of family members, repetition allowed, covering every
/// link exactly k times. Exhaustive memoised search over residual demands,
/// meant for small instances; throws BudgetExceeded past max_states.
inline std::size_t chromatic_index_k(const MatchingFamily& family, std::size_t k,
                                     std::size_t max_states = 10'000'000) {
    if (k == 0) throw std::invalid_argument("k must be positive");
    if (k > 255) throw std::invalid_argument("k above 255 is not supported");
    const std::size_t n = family.n_links();
    std::unordered_map<std::string, std::size_t> memo;
    constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

    std::function<std::size_t(std::string&)> best = [&](std::string& demand) -> std::size_t {
        std::size_t e = 0;
        while (e < n && demand[e] == 0) ++e;
        if (e == n) return 0;
        if (auto it = memo.find(demand); it != memo.end()) return it->second;
        if (memo.size() >= max_states) throw BudgetExceeded("chromatic_index_k state budget exhausted");
        std::size_t result = kInfinity;
        for (std::uint32_t pos : family.containing(e)) {
            const LinkSet& m = family[pos];
            bool fits = true;
            m.for_each([&](std::size_t f) { fits = fits && demand[f] > 0; });
            if (!fits) continue;
            m.for_each([&](std::size_t f) { --demand[f]; });
            const std::size_t sub = best(demand);
            m.for_each([&](std::size_t f) { ++demand[f]; });
            if (sub != kInfinity) result = std::min(result, sub + 1);
        }
        memo.emplace(demand, result);
        return result;
    };

    std::string demand(n, static_cast<char>(k));
    const std::size_t r = best(demand);
    if (r == kInfinity) throw std::logic_error("family cannot cover every link");
    return r;
}

}  // namespace fracsched
