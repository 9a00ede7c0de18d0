#pragma once

// JSON result documents. Rationals are "p/q" strings; matchings are arrays of
// link ids. timings_ms is null unless the caller asks for it, so that result
// files are reproducible byte for byte.

#include "fracsched/chromatic.hpp"
#include "fracsched/matching.hpp"
#include "fracsched/rational.hpp"

#include <json.hpp>

#include <optional>

namespace fracsched {

struct Timings {
    double enum_ms = 0.0;
    double lp_ms = 0.0;
    double ilp_ms = 0.0;
    double dual_ms = 0.0;
};

inline nlohmann::json link_set_to_json(const LinkSet& s) {
    auto ids = nlohmann::json::array();
    s.for_each([&](std::size_t e) { ids.push_back(e); });
    return ids;
}

inline nlohmann::json support_to_json(const FractionalResult& r, const MatchingFamily& family) {
    auto support = nlohmann::json::array();
    for (const SupportEntry& s : r.support)
        support.push_back({{"matching", link_set_to_json(family[s.position])}, {"x", to_string(s.x)}});
    return support;
}

inline nlohmann::json partition_to_json(const IntegerResult& r, const MatchingFamily& family) {
    auto parts = nlohmann::json::array();
    for (std::size_t pos : r.partition) parts.push_back(link_set_to_json(family[pos]));
    return parts;
}

inline nlohmann::json timings_to_json(const std::optional<Timings>& t) {
    if (!t) return nullptr;
    return {{"enum", t->enum_ms}, {"lp", t->lp_ms}, {"ilp", t->ilp_ms}, {"dual", t->dual_ms}};
}

inline nlohmann::json fractional_to_json(const FractionalResult& r, const MatchingFamily& family,
                                         const std::optional<Timings>& timings = {}) {
    return {{"mode", "frac"},
            {"chi_star", to_string(r.chi_star)},
            {"chi_int", nullptr},
            {"verdict", nullptr},
            {"ilp_solved", false},
            {"all_unit", r.all_unit},
            {"support", support_to_json(r, family)},
            {"timings_ms", timings_to_json(timings)}};
}

inline nlohmann::json integer_to_json(const IntegerResult& r, const MatchingFamily& family,
                                      const std::optional<Timings>& timings = {}) {
    return {{"mode", "int"},
            {"chi_star", nullptr},
            {"chi_int", r.chi_int},
            {"verdict", nullptr},
            {"ilp_solved", true},
            {"partition", partition_to_json(r, family)},
            {"support", nlohmann::json::array()},
            {"timings_ms", timings_to_json(timings)}};
}

inline nlohmann::json classification_to_json(const Classification& c, const MatchingFamily& family,
                                             const std::optional<Timings>& timings = {}) {
    nlohmann::json j = {{"mode", "classify"},
                        {"chi_star", to_string(c.chi_star)},
                        {"chi_int", c.chi_int ? nlohmann::json(*c.chi_int) : nlohmann::json(nullptr)},
                        {"verdict", to_string(c.verdict)},
                        {"ilp_solved", c.ilp_solved},
                        {"support", support_to_json(c.fractional, family)},
                        {"timings_ms", timings_to_json(timings)}};
    if (c.integer) j["partition"] = partition_to_json(*c.integer, family);
    return j;
}

inline nlohmann::json dual_to_json(const DualResult& d, const std::optional<Timings>& timings = {}) {
    auto y = nlohmann::json::array();
    for (const Rational& v : d.y) y.push_back(to_string(v));
    auto cuts = nlohmann::json::array();
    for (std::size_t i = d.y.size(); i < d.constraints.size(); ++i) cuts.push_back(link_set_to_json(d.constraints[i]));
    return {{"mode", "dual"},
            {"chi_star", to_string(d.z_star)},
            {"z_star", to_string(d.z_star)},
            {"chi_int", nullptr},
            {"verdict", nullptr},
            {"ilp_solved", false},
            {"y", y},
            {"cuts_added", d.cuts_added},
            {"cuts", cuts},
            {"support", nlohmann::json::array()},
            {"timings_ms", timings_to_json(timings)}};
}

}  // namespace fracsched
