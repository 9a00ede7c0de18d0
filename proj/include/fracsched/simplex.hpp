#pragma once

// Exact two-phase revised simplex over the rationals.
//
// The basis inverse is a dense m x m rational matrix; columns are sparse.
// Pricing evaluates each reduced cost in double precision and recomputes it
// exactly when the double value is within a relative 1e-9 of zero; the
// entering column is always confirmed negative exactly. Dantzig's rule picks
// the column, and Bland's rule takes over after a run of degenerate pivots
// until the objective moves again, so the method cannot cycle.

#include "fracsched/errors.hpp"
#include "fracsched/rational.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fracsched {

enum class Sense { minimize, maximize };
enum class Relation { equal, less_equal, greater_equal };
enum class LpStatus { optimal, infeasible, unbounded };

inline const char* to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
    }
    return "?";
}

/// Column-major sparse matrix. Columns whose coefficients are all 1 store
/// only their row indices.
class SparseColumns {
public:
    SparseColumns() = default;
    explicit SparseColumns(std::size_t rows) : rows_(rows) {}

    void add_column(std::span<const std::uint32_t> rows, std::span<const Rational> values) {
        if (rows.size() != values.size()) throw std::invalid_argument("column: rows/values size mismatch");
        bool ones = true;
        for (const Rational& v : values) ones = ones && v == 1;
        if (ones) {
            add_unit_column(rows);
            return;
        }
        push_rows(rows);
        value_offset_.push_back(values_.size());
        for (const Rational& v : values) {
            values_.push_back(v);
            values_d_.push_back(to_double(v));
        }
    }

    void add_unit_column(std::span<const std::uint32_t> rows) {
        push_rows(rows);
        value_offset_.push_back(kUnit);
    }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return value_offset_.size(); }
    [[nodiscard]] std::span<const std::uint32_t> rows_of(std::size_t j) const {
        return {index_.data() + start_[j], start_[j + 1] - start_[j]};
    }
    [[nodiscard]] bool is_unit(std::size_t j) const { return value_offset_[j] == kUnit; }
    /// Coefficient of the k-th stored entry of column j.
    [[nodiscard]] Rational value(std::size_t j, std::size_t k) const {
        return is_unit(j) ? Rational(1) : values_[value_offset_[j] + k];
    }
    [[nodiscard]] double value_d(std::size_t j, std::size_t k) const {
        return is_unit(j) ? 1.0 : values_d_[value_offset_[j] + k];
    }

private:
    static constexpr std::size_t kUnit = std::numeric_limits<std::size_t>::max();

    void push_rows(std::span<const std::uint32_t> rows) {
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (rows[k] >= rows_) throw std::invalid_argument("column: row index out of range");
            if (k > 0 && rows[k] <= rows[k - 1]) throw std::invalid_argument("column: row indices must increase");
        }
        index_.insert(index_.end(), rows.begin(), rows.end());
        start_.push_back(index_.size());
    }

    std::size_t rows_ = 0;
    std::vector<std::size_t> start_{0};
    std::vector<std::uint32_t> index_;
    std::vector<std::size_t> value_offset_;
    std::vector<Rational> values_;
    std::vector<double> values_d_;
};

/// sense c^T x  subject to  A x (rel) b,  x >= 0 except where free[j].
struct LinearProgram {
    SparseColumns a;
    std::vector<Rational> b;
    std::vector<Rational> c;
    Sense sense = Sense::minimize;
    std::vector<Relation> relations;
    std::vector<bool> free;  // empty means no free variables
};

struct LpResult {
    LpStatus status = LpStatus::infeasible;
    Rational objective;
    std::vector<Rational> primal;  // one per original column
    std::vector<Rational> dual;    // one per row; b^T dual == objective at optimality
    std::vector<std::size_t> basis;  // internal column indices, by row
    std::size_t iterations = 0;
};

namespace detail {

class RevisedSimplex {
public:
    RevisedSimplex(const LinearProgram& lp, const Deadline& deadline) : lp_(lp), deadline_(deadline) {
        m_ = lp.a.rows();
        n_ = lp.a.cols();
        if (lp.b.size() != m_) throw std::invalid_argument("simplex: |b| does not match the row count");
        if (lp.c.size() != n_) throw std::invalid_argument("simplex: |c| does not match the column count");
        if (lp.relations.size() != m_) throw std::invalid_argument("simplex: one relation per row is required");
        if (!lp.free.empty() && lp.free.size() != n_) throw std::invalid_argument("simplex: |free| must match columns");
        build_internal();
    }

    LpResult run() {
        LpResult result;
        if (n_artificial_ > 0) {
            std::vector<Rational> phase1(total_cols_, Rational(0));
            for (std::size_t j = first_artificial_; j < total_cols_; ++j) phase1[j] = 1;
            set_costs(phase1);
            optimise(result.iterations);  // bounded below by zero, never unbounded
            Rational infeasibility = 0;
            for (std::size_t i = 0; i < m_; ++i)
                if (is_artificial(basis_[i])) infeasibility += xb_[i];
            if (infeasibility > 0) {
                result.status = LpStatus::infeasible;
                return result;
            }
            drive_out_artificials();
        }
        std::vector<Rational> phase2(total_cols_, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) {
            phase2[j] = lp_.sense == Sense::minimize ? lp_.c[j] : Rational(-lp_.c[j]);
            if (free_slot_[j] != kNone) phase2[free_slot_[j]] = -phase2[j];
        }
        set_costs(phase2);
        if (!optimise(result.iterations)) {
            result.status = LpStatus::unbounded;
            return result;
        }

        result.status = LpStatus::optimal;
        std::vector<Rational> internal(total_cols_, Rational(0));
        for (std::size_t i = 0; i < m_; ++i) internal[basis_[i]] = xb_[i];
        result.primal.assign(n_, Rational(0));
        for (std::size_t j = 0; j < n_; ++j) {
            result.primal[j] = internal[j];
            if (free_slot_[j] != kNone) result.primal[j] -= internal[free_slot_[j]];
        }
        result.objective = 0;
        for (std::size_t j = 0; j < n_; ++j)
            if (result.primal[j] != 0) result.objective += lp_.c[j] * result.primal[j];
        compute_duals();
        result.dual.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            Rational y = y_[i];
            if (row_sign_[i] < 0) y = -y;
            if (lp_.sense == Sense::maximize) y = -y;
            result.dual[i] = y;
        }
        result.basis = basis_;
        return result;
    }

private:
    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

    // Internal column j: one of original, negated free copy, slack/surplus, artificial.
    enum class Kind : std::uint8_t { original, negated, slack, artificial };
    struct ColumnRef {
        Kind kind;
        std::size_t source;  // original column, or row for slack/artificial
        int sign;            // slack: +1 (<=) or -1 (>=)
    };

    void build_internal() {
        row_sign_.assign(m_, 1);
        relation_.resize(m_);
        b_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            Relation r = lp_.relations[i];
            b_[i] = lp_.b[i];
            if (b_[i] < 0) {
                row_sign_[i] = -1;
                b_[i] = -b_[i];
                if (r == Relation::less_equal) r = Relation::greater_equal;
                else if (r == Relation::greater_equal) r = Relation::less_equal;
            }
            relation_[i] = r;
        }

        columns_.reserve(n_ * 2 + 2 * m_);
        for (std::size_t j = 0; j < n_; ++j) columns_.push_back({Kind::original, j, 1});
        free_slot_.assign(n_, kNone);
        for (std::size_t j = 0; j < n_; ++j) {
            if (!lp_.free.empty() && lp_.free[j]) {
                free_slot_[j] = columns_.size();
                columns_.push_back({Kind::negated, j, -1});
            }
        }
        std::vector<std::size_t> slack_of_row(m_, kNone);
        for (std::size_t i = 0; i < m_; ++i) {
            if (relation_[i] == Relation::equal) continue;
            slack_of_row[i] = columns_.size();
            columns_.push_back({Kind::slack, i, relation_[i] == Relation::less_equal ? 1 : -1});
        }

        // Crash basis: slacks of <= rows, then positive unit columns, then artificials.
        basis_.assign(m_, kNone);
        std::vector<Rational> diag(m_, Rational(1));
        for (std::size_t i = 0; i < m_; ++i)
            if (relation_[i] == Relation::less_equal) basis_[i] = slack_of_row[i];
        for (std::size_t j = 0; j < n_; ++j) {
            const auto rows = lp_.a.rows_of(j);
            if (rows.size() != 1) continue;
            const std::size_t i = rows[0];
            if (basis_[i] != kNone) continue;
            const Rational v = lp_.a.value(j, 0) * row_sign_[i];
            if (v <= 0) continue;
            basis_[i] = j;
            diag[i] = v;
        }
        first_artificial_ = columns_.size();
        for (std::size_t i = 0; i < m_; ++i) {
            if (basis_[i] != kNone) continue;
            basis_[i] = columns_.size();
            columns_.push_back({Kind::artificial, i, 1});
            ++n_artificial_;
        }
        total_cols_ = columns_.size();
        is_basic_.assign(total_cols_, 0);
        for (std::size_t i = 0; i < m_; ++i) is_basic_[basis_[i]] = 1;

        binv_.assign(m_ * m_, Rational(0));
        xb_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) {
            binv_[i * m_ + i] = Rational(1) / diag[i];
            xb_[i] = b_[i] / diag[i];
        }
        y_.assign(m_, Rational(0));
        y_d_.assign(m_, 0.0);
    }

    [[nodiscard]] bool is_artificial(std::size_t j) const { return columns_[j].kind == Kind::artificial; }

    /// Calls f(row, exact coefficient, double coefficient) for the internal column j.
    template <class F>
    void for_each_entry(std::size_t j, F&& f) const {
        const ColumnRef& ref = columns_[j];
        switch (ref.kind) {
            case Kind::original:
            case Kind::negated: {
                const auto rows = lp_.a.rows_of(ref.source);
                const bool unit = lp_.a.is_unit(ref.source);
                for (std::size_t k = 0; k < rows.size(); ++k) {
                    const std::size_t i = rows[k];
                    const int s = row_sign_[i] * ref.sign;
                    if (unit) {
                        f(i, Rational(s), static_cast<double>(s));
                    } else {
                        f(i, Rational(lp_.a.value(ref.source, k) * s), lp_.a.value_d(ref.source, k) * s);
                    }
                }
                break;
            }
            case Kind::slack: f(ref.source, Rational(ref.sign), static_cast<double>(ref.sign)); break;
            case Kind::artificial: f(ref.source, Rational(1), 1.0); break;
        }
    }

    /// Double-only variant of for_each_entry for the pricing filter.
    template <class F>
    void for_each_entry_d(std::size_t j, F&& f) const {
        const ColumnRef& ref = columns_[j];
        switch (ref.kind) {
            case Kind::original:
            case Kind::negated: {
                const auto rows = lp_.a.rows_of(ref.source);
                const bool unit = lp_.a.is_unit(ref.source);
                for (std::size_t k = 0; k < rows.size(); ++k) {
                    const std::size_t i = rows[k];
                    const double s = static_cast<double>(row_sign_[i] * ref.sign);
                    f(i, unit ? s : lp_.a.value_d(ref.source, k) * s);
                }
                break;
            }
            case Kind::slack: f(ref.source, static_cast<double>(ref.sign)); break;
            case Kind::artificial: f(ref.source, 1.0); break;
        }
    }

    void set_costs(std::vector<Rational> costs) {
        cost_ = std::move(costs);
        cost_d_.resize(cost_.size());
        for (std::size_t j = 0; j < cost_.size(); ++j) cost_d_[j] = to_double(cost_[j]);
    }

    void compute_duals() {
        for (std::size_t k = 0; k < m_; ++k) y_[k] = 0;
        for (std::size_t i = 0; i < m_; ++i) {
            const Rational& cb = cost_[basis_[i]];
            if (cb == 0) continue;
            const Rational* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k)
                if (row[k] != 0) y_[k] += cb * row[k];
        }
        for (std::size_t k = 0; k < m_; ++k) y_d_[k] = to_double(y_[k]);
    }

    [[nodiscard]] Rational exact_reduced_cost(std::size_t j) const {
        Rational d = cost_[j];
        for_each_entry(j, [&](std::size_t i, const Rational& v, double) {
            if (y_[i] != 0) d -= y_[i] * v;
        });
        return d;
    }

    enum class Sign : std::uint8_t { negative, nonnegative, unsure };

    /// Reduced cost of column j in doubles with its sign certificate; the
    /// sign is unsure when |d| is within the rounding bound.
    [[nodiscard]] std::pair<double, Sign> filtered_reduced_cost(std::size_t j) const {
        double d = cost_d_[j];
        double scale = std::fabs(d);
        for_each_entry_d(j, [&](std::size_t i, double v) {
            const double t = y_d_[i] * v;
            d -= t;
            scale += std::fabs(t);
        });
        if (!std::isfinite(d) || !std::isfinite(scale)) return {0.0, Sign::unsure};
        const double tol = 1e-9 * scale;
        if (d > tol) return {d, Sign::nonnegative};
        if (d < -tol) return {d, Sign::negative};
        return {d, Sign::unsure};
    }

    [[nodiscard]] bool improving(std::size_t j) const {
        const auto [d, sign] = filtered_reduced_cost(j);
        if (sign == Sign::unsure) return exact_reduced_cost(j) < 0;
        return sign == Sign::negative;
    }

    /// Bland: smallest-index column with negative reduced cost, or kNone.
    std::size_t price_bland() {
        for (std::size_t j = 0; j < first_artificial_; ++j) {
            if (is_basic_[j]) continue;
            deadline_.poll("simplex pricing");
            if (improving(j)) return j;
        }
        return kNone;
    }

    /// Dantzig over the columns the filter certifies negative, confirmed
    /// exactly. Unsure columns are resolved exactly only when no certified
    /// column exists; any failed confirmation falls back to Bland.
    std::size_t price_dantzig() {
        std::size_t best = kNone;
        double best_d = 0.0;
        unsure_.clear();
        for (std::size_t j = 0; j < first_artificial_; ++j) {
            if (is_basic_[j]) continue;
            deadline_.poll("simplex pricing");
            const auto [d, sign] = filtered_reduced_cost(j);
            if (sign == Sign::unsure) {
                unsure_.push_back(j);
            } else if (sign == Sign::negative && (best == kNone || d < best_d)) {
                best = j;
                best_d = d;
            }
        }
        if (best != kNone) return exact_reduced_cost(best) < 0 ? best : price_bland();
        for (std::size_t j : unsure_)
            if (exact_reduced_cost(j) < 0) return j;
        return kNone;
    }

    /// Dantzig pricing, switching to Bland's rule after a run of degenerate
    /// pivots until the next pivot that moves; false when unbounded.
    bool optimise(std::size_t& iterations) {
        std::vector<Rational> alpha(m_);
        std::size_t degenerate_run = 0;
        for (;;) {
            compute_duals();
            const std::size_t q = degenerate_run >= kDegenerateRunLimit ? price_bland() : price_dantzig();
            if (q == kNone) return true;

            for (std::size_t i = 0; i < m_; ++i) alpha[i] = 0;
            for_each_entry(q, [&](std::size_t r, const Rational& v, double) {
                for (std::size_t i = 0; i < m_; ++i) {
                    const Rational& bi = binv_[i * m_ + r];
                    if (bi != 0) alpha[i] += bi * v;
                }
            });

            std::size_t leave = kNone;
            Rational best;
            for (std::size_t i = 0; i < m_; ++i) {
                if (alpha[i] <= 0) continue;
                Rational ratio = xb_[i] / alpha[i];
                if (leave == kNone || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
                    leave = i;
                    best = std::move(ratio);
                }
            }
            if (leave == kNone) return false;
            degenerate_run = best == 0 ? degenerate_run + 1 : 0;
            pivot(leave, q, alpha);
            ++iterations;
        }
    }

    static constexpr std::size_t kDegenerateRunLimit = 50;

    void pivot(std::size_t p, std::size_t q, const std::vector<Rational>& alpha) {
        const Rational pivot_value = alpha[p];
        Rational* prow = &binv_[p * m_];
        for (std::size_t k = 0; k < m_; ++k)
            if (prow[k] != 0) prow[k] /= pivot_value;
        xb_[p] /= pivot_value;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == p || alpha[i] == 0) continue;
            const Rational& factor = alpha[i];
            Rational* row = &binv_[i * m_];
            for (std::size_t k = 0; k < m_; ++k)
                if (prow[k] != 0) row[k] -= factor * prow[k];
            if (xb_[p] != 0) xb_[i] -= factor * xb_[p];
        }
        is_basic_[basis_[p]] = 0;
        basis_[p] = q;
        is_basic_[q] = 1;
    }

    /// After phase 1, replaces zero-level artificials by structural columns
    /// where the row allows it; rows that stay artificial are redundant.
    void drive_out_artificials() {
        std::vector<Rational> alpha(m_);
        for (std::size_t p = 0; p < m_; ++p) {
            if (!is_artificial(basis_[p])) continue;
            for (std::size_t j = 0; j < first_artificial_; ++j) {
                if (is_basic_[j]) continue;
                Rational entry = 0;
                for_each_entry(j, [&](std::size_t r, const Rational& v, double) {
                    const Rational& bpr = binv_[p * m_ + r];
                    if (bpr != 0) entry += bpr * v;
                });
                if (entry == 0) continue;
                for (std::size_t i = 0; i < m_; ++i) alpha[i] = 0;
                for_each_entry(j, [&](std::size_t r, const Rational& v, double) {
                    for (std::size_t i = 0; i < m_; ++i) {
                        const Rational& bi = binv_[i * m_ + r];
                        if (bi != 0) alpha[i] += bi * v;
                    }
                });
                pivot(p, j, alpha);
                break;
            }
        }
    }

    const LinearProgram& lp_;
    const Deadline& deadline_;
    std::size_t m_ = 0, n_ = 0;
    std::vector<int> row_sign_;
    std::vector<Relation> relation_;
    std::vector<Rational> b_;
    std::vector<ColumnRef> columns_;
    std::vector<std::size_t> free_slot_;
    std::size_t first_artificial_ = 0;
    std::size_t n_artificial_ = 0;
    std::size_t total_cols_ = 0;
    std::vector<std::size_t> basis_;
    std::vector<char> is_basic_;
    std::vector<Rational> binv_;
    std::vector<Rational> xb_;
    std::vector<Rational> cost_;
    std::vector<double> cost_d_;
    std::vector<Rational> y_;
    std::vector<double> y_d_;
    std::vector<std::size_t> unsure_;
};

}  // namespace detail

inline LpResult simplex_solve(const LinearProgram& lp, const Deadline& deadline = {}) {
    return detail::RevisedSimplex(lp, deadline).run();
}

/// Dense convenience form.
inline LpResult simplex_solve(const std::vector<std::vector<Rational>>& a, const std::vector<Rational>& b,
                              const std::vector<Rational>& c, Sense sense, const std::vector<Relation>& relations,
                              const std::vector<bool>& free = {}) {
    LinearProgram lp;
    lp.a = SparseColumns(a.size());
    for (const auto& row : a)
        if (row.size() != c.size()) throw std::invalid_argument("simplex: every row of A needs |c| entries");
    for (std::size_t j = 0; j < c.size(); ++j) {
        std::vector<std::uint32_t> rows;
        std::vector<Rational> values;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i][j] != 0) {
                rows.push_back(static_cast<std::uint32_t>(i));
                values.push_back(a[i][j]);
            }
        }
        lp.a.add_column(rows, values);
    }
    lp.b = b;
    lp.c = c;
    lp.sense = sense;
    lp.relations = relations;
    lp.free = free;
    return simplex_solve(lp);
}

}  // namespace fracsched
