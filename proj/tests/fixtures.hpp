#pragma once

// Shared instances for the unit and acceptance tests.
//
// Link letters a..j stand for ids 0..9 throughout.

#include "fracsched/fracsched.hpp"

#include <string>
#include <vector>

#ifndef FRACSCHED_DATA_DIR
#error "FRACSCHED_DATA_DIR must point at the data/ directory"
#endif

namespace fixtures {

using namespace fracsched;

inline std::string data_path(const std::string& name) { return std::string(FRACSCHED_DATA_DIR) + "/" + name; }

inline LinkSet ids(std::vector<std::uint32_t> v) { return LinkSet::from_ids(v); }

inline std::int64_t m(std::int64_t metres) { return metres * kCoordinateScale; }

/// Network with nodes at whole-metre positions and links given as
/// (sender, receiver) node pairs.
inline Network hand_network(const std::vector<std::pair<std::int64_t, std::int64_t>>& points,
                            const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs,
                            std::int64_t side_metres, PhysParams params = {}) {
    std::vector<Node> nodes;
    for (std::uint32_t i = 0; i < points.size(); ++i) nodes.push_back(Node{i, m(points[i].first), m(points[i].second)});
    std::vector<Link> links;
    for (std::uint32_t i = 0; i < pairs.size(); ++i) links.push_back(Link{i, pairs[i].first, pairs[i].second});
    return Network(std::move(params), m(side_metres), std::move(nodes), std::move(links));
}

// ---------------------------------------------------------------------------
// Seven links; the only compatible pairs are {a,d}, {a,g}, {d,g} and the
// three together are not.

inline MatchingFamily triangle7_family() {
    return family_from_explicit_list(7, {ids({0, 3}), ids({0, 6}), ids({3, 6})});
}

/// Generated 10-node, 1 km instance whose enumerated family equals
/// triangle7_family().
inline Network triangle7_network() { return read_network_file(data_path("triangle7.json")); }

// ---------------------------------------------------------------------------
// Ten links with two compatible triples {c,e,i} and {f,h,i} sharing i.

/// Downward closure of {a},{d},{g},{b,j},{e,f},{c,h},{c,e,i},{f,h,i}.
inline MatchingFamily twin_triples10_family() {
    return family_from_explicit_list(10, {ids({1, 9}), ids({4, 5}), ids({2, 7}), ids({2, 4, 8}), ids({5, 7, 8}),
                                          ids({2, 4}), ids({2, 8}), ids({4, 8}), ids({5, 7}), ids({5, 8}),
                                          ids({7, 8})});
}

/// Optimal LP vertex with four unit and four half weights over
/// twin_triples10_family().
inline FractionalResult twin_triples10_half_vertex(const MatchingFamily& family) {
    const std::vector<std::pair<LinkSet, Rational>> weights = {
        {ids({0}), Rational(1)},          {ids({3}), Rational(1)},          {ids({6}), Rational(1)},
        {ids({1, 9}), Rational(1)},       {ids({4, 5}), Rational(1, 2)},    {ids({2, 7}), Rational(1, 2)},
        {ids({2, 4, 8}), Rational(1, 2)}, {ids({5, 7, 8}), Rational(1, 2)},
    };
    FractionalResult r;
    r.chi_star = 0;
    r.all_unit = false;
    for (const auto& [set, x] : weights) {
        r.support.push_back({family.find(set), x});
        r.chi_star += x;
    }
    std::sort(r.support.begin(), r.support.end(),
              [](const SupportEntry& a, const SupportEntry& b) { return a.position < b.position; });
    return r;
}

/// Generated 20-node, 2 km instance with 29 feasible matchings that include
/// every set of twin_triples10_family().
inline Network twin_triples10_network() { return read_network_file(data_path("twin_triples10.json")); }

// ---------------------------------------------------------------------------
// Three node-disjoint 100 m links around a 340 m triangle: every pair is
// feasible (SINR about 337), the triple is not (about 167).

inline Network three_pairs_network() {
    return hand_network({{1000, 1296}, {1000, 1196}, {743, 852}, {830, 902}, {1257, 852}, {1170, 902}},
                        {{0, 1}, {2, 3}, {4, 5}}, 1500);
}

inline MatchingFamily three_pairs_family() {
    return family_from_explicit_list(3, {ids({0, 1}), ids({0, 2}), ids({1, 2})});
}

}  // namespace fixtures
