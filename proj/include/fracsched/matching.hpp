#pragma once

// Families of feasible matchings: exhaustive enumeration from a network,
// explicit construction for geometry-free fixtures, and the text file format
//   n_links <k>
//   <id> <id> ...        (one matching per line, canonical order)

#include "fracsched/errors.hpp"
#include "fracsched/link_set.hpp"
#include "fracsched/network.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace fracsched {

enum class FamilySource { enumerated, explicit_list };

/// Matchings over links 0..n_links-1 in canonical order (cardinality, then
/// lexicographic), each link covered by at least its singleton.
class MatchingFamily {
public:
    MatchingFamily() = default;

    /// Sorts into canonical order and indexes. Throws on duplicates, empty
    /// sets, out-of-range ids, or links not covered by any member.
    MatchingFamily(std::size_t n_links, std::vector<LinkSet> matchings, FamilySource source)
        : n_links_(n_links), matchings_(std::move(matchings)), source_(source) {
        if (n_links_ > LinkSet::kCapacity)
            throw CapacityError("at most " + std::to_string(LinkSet::kCapacity) + " links are supported");
        std::sort(matchings_.begin(), matchings_.end(), canonical_less);
        for (std::size_t i = 0; i < matchings_.size(); ++i) {
            const LinkSet& m = matchings_[i];
            if (m.empty()) throw std::invalid_argument("a matching family cannot contain the empty set");
            if (m.back() >= n_links_) throw std::invalid_argument("matching " + m.to_string() + " uses an unknown link");
            if (i > 0 && matchings_[i - 1] == m) throw std::invalid_argument("duplicate matching " + m.to_string());
        }
        per_link_.assign(n_links_, {});
        for (std::size_t i = 0; i < matchings_.size(); ++i)
            matchings_[i].for_each([&](std::size_t e) { per_link_[e].push_back(static_cast<std::uint32_t>(i)); });
        for (std::size_t e = 0; e < n_links_; ++e)
            if (per_link_[e].empty()) throw std::invalid_argument("link " + std::to_string(e) + " is in no matching");
    }

    [[nodiscard]] std::size_t n_links() const { return n_links_; }
    [[nodiscard]] std::size_t size() const { return matchings_.size(); }
    [[nodiscard]] const LinkSet& operator[](std::size_t i) const { return matchings_[i]; }
    [[nodiscard]] std::span<const LinkSet> matchings() const { return matchings_; }
    /// Positions of the members containing link e, ascending.
    [[nodiscard]] std::span<const std::uint32_t> containing(std::size_t e) const { return per_link_[e]; }
    [[nodiscard]] FamilySource source() const { return source_; }

    /// Position of `m`, or size() when absent.
    [[nodiscard]] std::size_t find(const LinkSet& m) const {
        auto it = std::lower_bound(matchings_.begin(), matchings_.end(), m, canonical_less);
        if (it != matchings_.end() && *it == m) return static_cast<std::size_t>(it - matchings_.begin());
        return matchings_.size();
    }
    [[nodiscard]] bool contains(const LinkSet& m) const { return find(m) != size(); }

    [[nodiscard]] std::size_t max_cardinality() const { return matchings_.empty() ? 0 : matchings_.back().size(); }

private:
    std::size_t n_links_ = 0;
    std::vector<LinkSet> matchings_;
    std::vector<std::vector<std::uint32_t>> per_link_;
    FamilySource source_ = FamilySource::explicit_list;
};

namespace detail {

/// Depth-first walk over feasible sets in increasing link order. Supersets
/// of an infeasible set are never visited (feasibility is hereditary).
template <class Visit>
void walk_feasible_sets(const Network& net, const Deadline& deadline, Visit&& visit) {
    const auto n = static_cast<std::uint32_t>(net.link_count());
    IncrementalFeasibility state(net);
    std::vector<std::uint32_t> next;  // next candidate per depth
    next.reserve(64);
    next.push_back(0);
    while (!next.empty()) {
        std::uint32_t& f = next.back();
        if (f >= n) {
            next.pop_back();
            if (state.depth() > 0) state.pop();
            continue;
        }
        const std::uint32_t candidate = f++;
        deadline.poll("matching enumeration");
        if (state.try_push(candidate)) {
            visit(state.members());
            next.push_back(candidate + 1);
        }
    }
}

}  // namespace detail

/// Every non-empty feasible matching, in canonical order. Throws
/// MatchingOverflow as soon as the count would pass max_matchings.
inline MatchingFamily enumerate_feasible_matchings(const Network& net, std::uint64_t max_matchings,
                                                   const Deadline& deadline = {}) {
    if (net.link_count() == 0) throw PreconditionError("cannot enumerate matchings of a network without links");
    if (net.link_count() > LinkSet::kCapacity)
        throw CapacityError("enumeration supports at most " + std::to_string(LinkSet::kCapacity) + " links");
    std::vector<LinkSet> found;
    detail::walk_feasible_sets(net, deadline, [&](const LinkSet& s) {
        if (found.size() >= max_matchings) throw MatchingOverflow(max_matchings);
        found.push_back(s);
    });
    // Depth-first order is already lexicographic; a stable bucket by size
    // gives canonical order without comparisons.
    std::vector<std::size_t> bucket_start(LinkSet::kCapacity + 2, 0);
    for (const LinkSet& s : found) ++bucket_start[s.size() + 1];
    for (std::size_t k = 1; k < bucket_start.size(); ++k) bucket_start[k] += bucket_start[k - 1];
    std::vector<LinkSet> ordered(found.size());
    for (const LinkSet& s : found) ordered[bucket_start[s.size()]++] = s;
    return MatchingFamily(net.link_count(), std::move(ordered), FamilySource::enumerated);
}

/// Number of feasible matchings, aborting with MatchingOverflow past the limit.
inline std::uint64_t count_feasible_matchings(const Network& net, std::uint64_t max_matchings,
                                              const Deadline& deadline = {}) {
    if (net.link_count() > LinkSet::kCapacity)
        throw CapacityError("enumeration supports at most " + std::to_string(LinkSet::kCapacity) + " links");
    std::uint64_t count = 0;
    detail::walk_feasible_sets(net, deadline, [&](const LinkSet&) {
        if (count >= max_matchings) throw MatchingOverflow(max_matchings);
        ++count;
    });
    return count;
}

/// Family from caller-supplied sets; admissibility is the caller's claim.
/// Missing singletons are added.
inline MatchingFamily family_from_explicit_list(std::size_t n_links, const std::vector<LinkSet>& sets) {
    if (n_links > LinkSet::kCapacity)
        throw CapacityError("at most " + std::to_string(LinkSet::kCapacity) + " links are supported");
    std::unordered_set<LinkSet, LinkSetHash> seen;
    std::vector<LinkSet> all;
    for (const LinkSet& s : sets) {
        if (s.empty()) throw std::invalid_argument("explicit family contains an empty matching");
        if (s.back() >= n_links) throw std::invalid_argument("matching " + s.to_string() + " uses an unknown link");
        if (!seen.insert(s).second) throw std::invalid_argument("duplicate matching " + s.to_string());
        all.push_back(s);
    }
    for (std::size_t e = 0; e < n_links; ++e) {
        LinkSet single;
        single.insert(e);
        if (seen.insert(single).second) all.push_back(single);
    }
    return MatchingFamily(n_links, std::move(all), FamilySource::explicit_list);
}

inline std::string family_to_string(const MatchingFamily& family) {
    std::ostringstream out;
    out << "n_links " << family.n_links() << "\n";
    for (const LinkSet& m : family.matchings()) {
        bool first = true;
        m.for_each([&](std::size_t e) {
            out << (first ? "" : " ") << e;
            first = false;
        });
        out << "\n";
    }
    return out.str();
}

inline MatchingFamily family_from_string(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t n_links = 0;
    bool have_header = false;
    std::vector<LinkSet> sets;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        std::istringstream fields(line);
        if (!have_header) {
            std::string keyword;
            long long k = -1;
            if (!(fields >> keyword >> k) || keyword != "n_links" || k < 0)
                throw std::invalid_argument("family file: expected 'n_links <k>' header");
            n_links = static_cast<std::size_t>(k);
            have_header = true;
            continue;
        }
        LinkSet s;
        long long id = 0;
        while (fields >> id) {
            if (id < 0 || static_cast<std::size_t>(id) >= n_links)
                throw std::invalid_argument("family file line " + std::to_string(line_no) + ": link id out of range");
            s.insert(static_cast<std::size_t>(id));
        }
        if (!fields.eof()) throw std::invalid_argument("family file line " + std::to_string(line_no) + ": bad token");
        sets.push_back(s);
    }
    if (!have_header) throw std::invalid_argument("family file: missing 'n_links' header");
    return family_from_explicit_list(n_links, sets);
}

inline void write_family_file(const MatchingFamily& family, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << family_to_string(family);
}

inline MatchingFamily read_family_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return family_from_string(buffer.str());
}

}  // namespace fracsched
