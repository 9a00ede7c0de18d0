#pragma once

// STDMA schedules from an exact fractional solution. With q* the lcm of the
// support denominators, matching M is active in T_M = q*·x_M slots and every
// link in exactly q* of the T* = sum T_M slots, so q*/T* = 1/chi*.
//
// Text format:
//   T <t_star> q <q_star>
//   <slot index> <link id> <link id> ...     (one line per slot)

#include "fracsched/chromatic.hpp"
#include "fracsched/errors.hpp"
#include "fracsched/link_set.hpp"
#include "fracsched/matching.hpp"
#include "fracsched/network.hpp"
#include "fracsched/rational.hpp"

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fracsched {

/// `count` consecutive slots activating `matching`.
struct ScheduleRun {
    LinkSet matching;
    BigInt count;
};

/// Multiplicity form; slots are materialised only on request.
struct Schedule {
    Rational chi_star;  // claimed value, checked by verify_schedule
    BigInt t_star;
    BigInt q_star;
    std::vector<ScheduleRun> runs;  // canonical matching order

    /// Explicit slot list. Throws CapacityError past max_slots.
    [[nodiscard]] std::vector<LinkSet> slots(std::size_t max_slots = 10'000'000) const {
        BigInt total = 0;
        for (const ScheduleRun& r : runs) total += r.count;
        if (total > max_slots) throw CapacityError("schedule has more slots than the materialisation limit");
        std::vector<LinkSet> out;
        out.reserve(total.convert_to<std::size_t>());
        for (const ScheduleRun& r : runs)
            for (BigInt k = 0; k < r.count; ++k) out.push_back(r.matching);
        return out;
    }
};

inline Schedule build_schedule(const FractionalResult& result, const MatchingFamily& family) {
    if (result.support.empty()) throw std::invalid_argument("fractional result has an empty support");
    std::vector<Rational> weights;
    weights.reserve(result.support.size());
    for (const SupportEntry& s : result.support) weights.push_back(s.x);
    Schedule out;
    out.chi_star = result.chi_star;
    out.q_star = lcm_of_denominators(weights);
    out.t_star = 0;
    for (const SupportEntry& s : result.support) {
        if (s.position >= family.size()) throw std::invalid_argument("support refers to a position outside the family");
        const Rational t = s.x * out.q_star;
        if (denominator(t) != 1 || t <= 0) throw std::logic_error("multiplicity is not a positive integer");
        out.runs.push_back({family[s.position], numerator(t)});
        out.t_star += numerator(t);
    }
    return out;
}

enum class ScheduleViolation {
    none,
    empty_slot,
    unknown_link,
    slot_infeasible,
    link_count_mismatch,
    slot_count_mismatch,
    ratio_mismatch,
};

inline const char* to_string(ScheduleViolation v) {
    switch (v) {
        case ScheduleViolation::none: return "none";
        case ScheduleViolation::empty_slot: return "empty_slot";
        case ScheduleViolation::unknown_link: return "unknown_link";
        case ScheduleViolation::slot_infeasible: return "slot_infeasible";
        case ScheduleViolation::link_count_mismatch: return "link_count_mismatch";
        case ScheduleViolation::slot_count_mismatch: return "slot_count_mismatch";
        case ScheduleViolation::ratio_mismatch: return "ratio_mismatch";
    }
    return "?";
}

/// First violation found; slot and link are set where they apply.
struct ScheduleCheck {
    ScheduleViolation kind = ScheduleViolation::none;
    std::optional<BigInt> slot;
    std::optional<std::size_t> link;
    std::string message;

    [[nodiscard]] bool ok() const { return kind == ScheduleViolation::none; }
};

namespace detail {

/// Checks in order: every slot admissible, every link active exactly q*
/// times, t* equal to the slot count, t*/q* equal to the claimed chi*.
template <class Admissible>
ScheduleCheck verify_runs(const Schedule& s, std::size_t n_links, Admissible&& admissible) {
    ScheduleCheck out;
    BigInt slot = 0;
    std::vector<BigInt> count(n_links, BigInt(0));
    for (const ScheduleRun& run : s.runs) {
        if (run.count <= 0) {
            out.kind = ScheduleViolation::slot_count_mismatch;
            out.slot = slot;
            out.message = "run with non-positive multiplicity";
            return out;
        }
        if (run.matching.empty()) {
            out.kind = ScheduleViolation::empty_slot;
            out.slot = slot;
            out.message = "slot activates no link";
            return out;
        }
        if (run.matching.back() >= n_links) {
            out.kind = ScheduleViolation::unknown_link;
            out.slot = slot;
            out.link = run.matching.back();
            out.message = "slot references an unknown link";
            return out;
        }
        if (auto bad = admissible(run.matching)) {
            out.kind = ScheduleViolation::slot_infeasible;
            out.slot = slot;
            out.link = *bad;
            out.message = "slot " + slot.str() + " is not a feasible matching";
            return out;
        }
        run.matching.for_each([&](std::size_t e) { count[e] += run.count; });
        slot += run.count;
    }
    for (std::size_t e = 0; e < n_links; ++e) {
        if (count[e] != s.q_star) {
            out.kind = ScheduleViolation::link_count_mismatch;
            out.link = e;
            out.message = "link " + std::to_string(e) + " is active in " + count[e].str() + " slots, expected " +
                          s.q_star.str();
            return out;
        }
    }
    if (slot != s.t_star) {
        out.kind = ScheduleViolation::slot_count_mismatch;
        out.message = "schedule has " + slot.str() + " slots but declares T = " + s.t_star.str();
        return out;
    }
    if (s.q_star <= 0 || Rational(s.t_star, s.q_star) != s.chi_star) {
        out.kind = ScheduleViolation::ratio_mismatch;
        out.message = "T/q differs from the claimed fractional index " + to_string(s.chi_star);
        return out;
    }
    return out;
}

}  // namespace detail

/// Against the physical model: each slot node-disjoint and SINR-feasible.
inline ScheduleCheck verify_schedule(const Schedule& s, const Network& net) {
    return detail::verify_runs(s, net.link_count(), [&](const LinkSet& m) -> std::optional<std::size_t> {
        if (is_feasible(net, m)) return std::nullopt;
        // Report the first link that shares a node or misses the threshold.
        std::optional<std::size_t> culprit;
        m.for_each([&](std::size_t e) {
            if (culprit) return;
            const Link& l = net.link(e);
            bool clash = false;
            m.for_each([&](std::size_t f) {
                if (f == e) return;
                const Link& g = net.link(f);
                clash = clash || l.sender == g.sender || l.sender == g.receiver || l.receiver == g.sender ||
                        l.receiver == g.receiver;
            });
            if (clash) {
                culprit = e;
                return;
            }
            const SinrValue v = sinr(net, e, m);
            const bool meets = v.exact ? *v.exact >= net.params().beta : v.approx >= to_double(net.params().beta);
            if (!meets) culprit = e;
        });
        return culprit ? culprit : std::optional<std::size_t>(m.front());
    });
}

/// Against an explicit family: each slot must be a member.
inline ScheduleCheck verify_schedule(const Schedule& s, const MatchingFamily& family) {
    return detail::verify_runs(s, family.n_links(), [&](const LinkSet& m) -> std::optional<std::size_t> {
        if (family.contains(m)) return std::nullopt;
        return m.front();
    });
}

struct ScheduleComparison {
    BigInt t_star;
    BigInt t1_times_qstar;
    bool preferable = false;  // fractional schedule strictly shorter
};

inline ScheduleComparison compare_integer_schedule(const Schedule& frac, const IntegerResult& integer) {
    ScheduleComparison c;
    c.t_star = frac.t_star;
    c.t1_times_qstar = BigInt(integer.chi_int) * frac.q_star;
    c.preferable = c.t_star < c.t1_times_qstar;
    return c;
}

/// Same comparison when only the integer index is known.
inline ScheduleComparison compare_integer_schedule(const Schedule& frac, std::size_t chi_int) {
    IntegerResult r;
    r.chi_int = chi_int;
    return compare_integer_schedule(frac, r);
}

inline std::string schedule_to_string(const Schedule& s, std::size_t max_slots = 10'000'000) {
    std::ostringstream out;
    out << "T " << s.t_star << " q " << s.q_star << "\n";
    std::size_t index = 0;
    for (const LinkSet& slot : s.slots(max_slots)) {
        out << index++;
        slot.for_each([&](std::size_t e) { out << ' ' << e; });
        out << "\n";
    }
    return out.str();
}

/// Parses the text format; consecutive identical slots become one run and
/// the claimed chi* is T/q.
inline Schedule schedule_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    Schedule s;
    bool have_header = false;
    std::size_t expected_index = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        if (!have_header) {
            std::string t_key, q_key, t_val, q_val;
            if (!(fields >> t_key >> t_val >> q_key >> q_val) || t_key != "T" || q_key != "q")
                throw std::invalid_argument("schedule file: expected 'T <t> q <q>' header");
            s.t_star = parse_bigint_digits(t_val);
            s.q_star = parse_bigint_digits(q_val);
            if (s.q_star <= 0) throw std::invalid_argument("schedule file: q must be positive");
            have_header = true;
            continue;
        }
        std::size_t index = 0;
        if (!(fields >> index) || index != expected_index)
            throw std::invalid_argument("schedule file: slot lines must be numbered 0, 1, 2, ...");
        ++expected_index;
        LinkSet slot;
        long long id = 0;
        while (fields >> id) {
            if (id < 0 || static_cast<std::size_t>(id) >= LinkSet::kCapacity)
                throw std::invalid_argument("schedule file: link id out of range");
            slot.insert(static_cast<std::size_t>(id));
        }
        if (!fields.eof()) throw std::invalid_argument("schedule file: bad token");
        if (!s.runs.empty() && s.runs.back().matching == slot)
            s.runs.back().count += 1;
        else
            s.runs.push_back({slot, BigInt(1)});
    }
    if (!have_header) throw std::invalid_argument("schedule file: missing header");
    s.chi_star = Rational(s.t_star, s.q_star);
    return s;
}

inline void write_schedule_file(const Schedule& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << schedule_to_string(s);
}

inline Schedule read_schedule_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return schedule_from_string(buffer.str());
}

}  // namespace fracsched
