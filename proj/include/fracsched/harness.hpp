#pragma once

// Parameter sweeps over (node count, side length): generate, filter,
// classify, aggregate, and write CSV.
//
// Instance seeds are a pure function of (master seed, node count, side in
// micrometres, instance index), so a cell's results do not depend on which
// other cells are in the sweep or on how many threads run it.

#include "fracsched/chromatic.hpp"
#include "fracsched/errors.hpp"
#include "fracsched/filter.hpp"
#include "fracsched/network.hpp"
#include "fracsched/pcg64.hpp"
#include "fracsched/rational.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace fracsched {

struct SweepConfig {
    std::vector<std::size_t> node_counts;
    std::vector<Rational> side_lengths_km;
    std::size_t instances_per_cell = 100;
    std::uint64_t master_seed = 1;
    InstanceLimits limits;
    PhysParams params;
    double budget_s = 300.0;  // per instance; <= 0 disables
    unsigned jobs = 1;

    void validate() const {
        if (node_counts.empty() || side_lengths_km.empty()) throw std::invalid_argument("sweep grid is empty");
        for (std::size_t n : node_counts)
            if (n < 2) throw std::invalid_argument("node counts must be at least 2");
        for (const Rational& d : side_lengths_km)
            if (d <= 0) throw std::invalid_argument("side lengths must be positive");
        if (instances_per_cell == 0) throw std::invalid_argument("instances per cell must be positive");
        if (limits.max_links == 0 || limits.max_matchings == 0) throw std::invalid_argument("limits must be positive");
        if (jobs == 0) throw std::invalid_argument("jobs must be positive");
        params.validate();
    }
};

enum class InstanceOutcomeKind { pass, empty, too_many_links, too_many_matchings, budget_exceeded };

inline const char* to_string(InstanceOutcomeKind k) {
    switch (k) {
        case InstanceOutcomeKind::pass: return "pass";
        case InstanceOutcomeKind::empty: return "empty";
        case InstanceOutcomeKind::too_many_links: return "too_many_links";
        case InstanceOutcomeKind::too_many_matchings: return "too_many_matchings";
        case InstanceOutcomeKind::budget_exceeded: return "budget_exceeded";
    }
    return "?";
}

struct InstanceOutcome {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    InstanceOutcomeKind kind = InstanceOutcomeKind::pass;
    std::size_t n_links = 0;
    std::optional<std::size_t> n_matchings;
    std::optional<Rational> chi_star;
    std::optional<std::size_t> chi_int;
    std::optional<Verdict> verdict;
    bool ilp_solved = false;
    double enum_ms = 0.0;
    double lp_ms = 0.0;
    double ilp_ms = 0.0;
};

struct CellStats {
    std::size_t n_nodes = 0;
    Rational side_km;
    std::size_t n_instances = 0;
    std::size_t n_pass = 0;
    std::size_t n_fail_empty = 0;
    std::size_t n_fail_links = 0;
    std::size_t n_fail_matchings = 0;
    std::size_t n_budget_exceeded = 0;
    std::size_t n_strict = 0;
    std::vector<Rational> ratios;  // chi_int / chi_star over strict instances
    std::optional<double> mean_ratio;
    std::optional<double> ci95_halfwidth;
    std::optional<double> mean_enum_ms;
    std::optional<double> mean_lp_ms;
    std::optional<double> mean_ilp_ms;
    std::vector<InstanceOutcome> instances;  // index order
};

inline std::uint64_t instance_seed(std::uint64_t master_seed, std::size_t n_nodes, std::int64_t side_um,
                                   std::size_t index) {
    std::uint64_t h = mix64(master_seed ^ mix64(streams::kSweepSeeds));
    h = mix64(h ^ static_cast<std::uint64_t>(n_nodes));
    h = mix64(h ^ static_cast<std::uint64_t>(side_um));
    return mix64(h ^ static_cast<std::uint64_t>(index));
}

/// Full pipeline for one instance; budget exhaustion is an outcome.
inline InstanceOutcome run_instance(std::size_t n_nodes, const Rational& side_km, std::size_t index,
                                    const SweepConfig& config) {
    InstanceOutcome out;
    out.index = index;
    const Rational side_m = side_km * 1000;
    out.seed = instance_seed(config.master_seed, n_nodes, metres_to_um(side_m), index);
    const Network net = generate_network(n_nodes, side_m, config.params, out.seed);
    out.n_links = net.link_count();
    const Deadline deadline = config.budget_s > 0 ? Deadline(std::chrono::duration<double>(config.budget_s)) : Deadline();
    try {
        InstanceCheck check = classify_instance(net, config.limits, deadline);
        out.enum_ms = check.enum_ms;
        switch (check.status) {
            case InstanceStatus::empty: out.kind = InstanceOutcomeKind::empty; return out;
            case InstanceStatus::too_many_links: out.kind = InstanceOutcomeKind::too_many_links; return out;
            case InstanceStatus::too_many_matchings: out.kind = InstanceOutcomeKind::too_many_matchings; return out;
            case InstanceStatus::pass: break;
        }
        out.n_matchings = check.family->size();
        const Classification c = classify(*check.family, deadline);
        out.kind = InstanceOutcomeKind::pass;
        out.chi_star = c.chi_star;
        out.chi_int = c.chi_int;
        out.verdict = c.verdict;
        out.ilp_solved = c.ilp_solved;
        out.lp_ms = c.lp_ms;
        out.ilp_ms = c.ilp_ms;
    } catch (const BudgetExceeded&) {
        out.kind = InstanceOutcomeKind::budget_exceeded;
        out.chi_star.reset();
        out.chi_int.reset();
        out.verdict.reset();
    }
    return out;
}

struct RatioStats {
    std::optional<double> mean;
    std::optional<double> ci95_halfwidth;
};

/// Mean and normal-approximation 95% halfwidth 1.96·s/sqrt(n), s the sample
/// standard deviation; n = 1 gives halfwidth 0, n = 0 leaves both empty.
inline RatioStats ratio_stats(const std::vector<Rational>& ratios) {
    RatioStats r;
    const std::size_t n = ratios.size();
    if (n == 0) return r;
    std::vector<double> v;
    v.reserve(n);
    for (const Rational& x : ratios) v.push_back(to_double(x));
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    r.mean = mean;
    if (n == 1) {
        r.ci95_halfwidth = 0.0;
        return r;
    }
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double s = std::sqrt(ss / static_cast<double>(n - 1));
    r.ci95_halfwidth = 1.96 * s / std::sqrt(static_cast<double>(n));
    return r;
}

/// Aggregates per-instance outcomes (already in index order) into a cell.
inline CellStats aggregate_cell(std::size_t n_nodes, const Rational& side_km, std::vector<InstanceOutcome> outcomes) {
    CellStats c;
    c.n_nodes = n_nodes;
    c.side_km = side_km;
    c.n_instances = outcomes.size();
    double enum_sum = 0, lp_sum = 0, ilp_sum = 0;
    std::size_t enum_n = 0, ilp_n = 0;
    for (const InstanceOutcome& o : outcomes) {
        switch (o.kind) {
            case InstanceOutcomeKind::pass: ++c.n_pass; break;
            case InstanceOutcomeKind::empty: ++c.n_fail_empty; break;
            case InstanceOutcomeKind::too_many_links: ++c.n_fail_links; break;
            case InstanceOutcomeKind::too_many_matchings: ++c.n_fail_matchings; break;
            case InstanceOutcomeKind::budget_exceeded: ++c.n_budget_exceeded; break;
        }
        if (o.kind == InstanceOutcomeKind::pass || o.kind == InstanceOutcomeKind::too_many_matchings) {
            enum_sum += o.enum_ms;
            ++enum_n;
        }
        if (o.kind != InstanceOutcomeKind::pass) continue;
        lp_sum += o.lp_ms;
        if (o.ilp_solved) {
            ilp_sum += o.ilp_ms;
            ++ilp_n;
        }
        if (o.verdict == Verdict::strict) {
            ++c.n_strict;
            c.ratios.push_back(Rational(*o.chi_int) / *o.chi_star);
        }
    }
    const RatioStats rs = ratio_stats(c.ratios);
    c.mean_ratio = rs.mean;
    c.ci95_halfwidth = rs.ci95_halfwidth;
    if (enum_n > 0) c.mean_enum_ms = enum_sum / static_cast<double>(enum_n);
    if (c.n_pass > 0) c.mean_lp_ms = lp_sum / static_cast<double>(c.n_pass);
    if (ilp_n > 0) c.mean_ilp_ms = ilp_sum / static_cast<double>(ilp_n);
    c.instances = std::move(outcomes);
    return c;
}

/// Runs one cell with config.jobs worker threads; outcomes are merged in
/// instance order.
inline CellStats run_cell(std::size_t n_nodes, const Rational& side_km, const SweepConfig& config) {
    config.validate();
    std::vector<InstanceOutcome> outcomes(config.instances_per_cell);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= outcomes.size()) return;
            try {
                outcomes[i] = run_instance(n_nodes, side_km, i, config);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = outcomes.size();
                return;
            }
        }
    };
    const unsigned threads = std::min<unsigned>(config.jobs, static_cast<unsigned>(outcomes.size()));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return aggregate_cell(n_nodes, side_km, std::move(outcomes));
}

/// All cells, node counts outermost.
inline std::vector<CellStats> run_sweep(const SweepConfig& config,
                                        const std::function<void(const CellStats&)>& on_cell = {}) {
    config.validate();
    std::vector<CellStats> cells;
    for (std::size_t n : config.node_counts) {
        for (const Rational& d : config.side_lengths_km) {
            cells.push_back(run_cell(n, d, config));
            if (on_cell) on_cell(cells.back());
        }
    }
    return cells;
}

// ---------------------------------------------------------------------------
// Derived tables.

struct CellSummary {
    std::size_t n_nodes = 0;
    Rational side_km;
    double density_per_km2 = 0.0;
    std::optional<double> pct_strict;  // 100·n_strict/n_pass
    std::optional<double> mean_ratio;
    std::optional<double> ci95_rel;  // halfwidth / mean
};

inline CellSummary summarize(const CellStats& c) {
    CellSummary s;
    s.n_nodes = c.n_nodes;
    s.side_km = c.side_km;
    s.density_per_km2 = static_cast<double>(c.n_nodes) / to_double(c.side_km * c.side_km);
    if (c.n_pass > 0) s.pct_strict = 100.0 * static_cast<double>(c.n_strict) / static_cast<double>(c.n_pass);
    s.mean_ratio = c.mean_ratio;
    if (c.mean_ratio && c.ci95_halfwidth) s.ci95_rel = *c.ci95_halfwidth / *c.mean_ratio;
    return s;
}

inline std::vector<CellSummary> aggregate_stats(const std::vector<CellStats>& cells) {
    std::vector<CellSummary> out;
    out.reserve(cells.size());
    for (const CellStats& c : cells) out.push_back(summarize(c));
    return out;
}

/// Average ranks (1-based), ties sharing the mean of their positions.
inline std::vector<double> average_ranks(const std::vector<double>& v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> rank(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
        i = j + 1;
    }
    return rank;
}

/// Spearman rank correlation; empty when undefined (n < 2 or a constant
/// series).
inline std::optional<double> spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: series differ in length");
    if (x.size() < 2) return std::nullopt;
    const std::vector<double> rx = average_ranks(x), ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

// ---------------------------------------------------------------------------
// CSV output.

/// Exact decimal when the value has a terminating expansion, else "p/q".
inline std::string decimal_string(const Rational& v) {
    BigInt den = denominator(v);
    unsigned twos = 0, fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    if (den != 1) return to_string(v);
    const unsigned digits = std::max(twos, fives);
    const BigInt scaled = numerator(v) * pow10(digits) / denominator(v);
    return to_fixed_decimal(scaled, digits);
}

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

inline std::string optional_field(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

inline const char* kSweepCsvHeader =
    "n_nodes,side_km,n_instances,n_pass,n_fail_empty,n_fail_links,n_fail_matchings,n_budget_exceeded,n_strict,"
    "pct_strict,mean_ratio,ci95_rel,mean_enum_ms,mean_lp_ms,mean_ilp_ms";

/// One row per cell. Timing columns are blank unless record_timings is set,
/// which keeps repeated runs byte-identical.
inline std::string sweep_csv(const std::vector<CellStats>& cells, const std::string& provenance,
                             bool record_timings) {
    std::ostringstream out;
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << kSweepCsvHeader << "\n";
    for (const CellStats& c : cells) {
        const CellSummary s = summarize(c);
        out << c.n_nodes << ',' << decimal_string(c.side_km) << ',' << c.n_instances << ',' << c.n_pass << ','
            << c.n_fail_empty << ',' << c.n_fail_links << ',' << c.n_fail_matchings << ',' << c.n_budget_exceeded
            << ',' << c.n_strict << ',' << optional_field(s.pct_strict) << ',' << optional_field(s.mean_ratio) << ','
            << optional_field(s.ci95_rel) << ',';
        if (record_timings)
            out << optional_field(c.mean_enum_ms) << ',' << optional_field(c.mean_lp_ms) << ','
                << optional_field(c.mean_ilp_ms);
        else
            out << ",,";
        out << "\n";
    }
    return out.str();
}

inline std::string instances_csv(const std::vector<CellStats>& cells, const std::string& provenance) {
    std::ostringstream out;
    if (!provenance.empty()) out << "# " << provenance << "\n";
    out << "n_nodes,side_km,index,seed,outcome,n_links,n_matchings,chi_star,chi_int,verdict\n";
    for (const CellStats& c : cells) {
        for (const InstanceOutcome& o : c.instances) {
            out << c.n_nodes << ',' << decimal_string(c.side_km) << ',' << o.index << ',' << o.seed << ','
                << to_string(o.kind) << ',' << o.n_links << ','
                << (o.n_matchings ? std::to_string(*o.n_matchings) : std::string()) << ','
                << (o.chi_star ? to_string(*o.chi_star) : std::string()) << ','
                << (o.chi_int ? std::to_string(*o.chi_int) : std::string()) << ','
                << (o.verdict ? to_string(*o.verdict) : "") << "\n";
        }
    }
    return out.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed: '" + path + "'");
}

}  // namespace fracsched
