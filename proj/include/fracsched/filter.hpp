#pragma once

// Instance filters applied before any solve: no links, too many links, or
// too many feasible matchings.

#include "fracsched/errors.hpp"
#include "fracsched/matching.hpp"
#include "fracsched/network.hpp"

#include <chrono>
#include <cstdint>
#include <optional>
#include <stdexcept>

namespace fracsched {

enum class InstanceStatus { pass, empty, too_many_links, too_many_matchings };

inline const char* to_string(InstanceStatus s) {
    switch (s) {
        case InstanceStatus::pass: return "pass";
        case InstanceStatus::empty: return "empty";
        case InstanceStatus::too_many_links: return "too_many_links";
        case InstanceStatus::too_many_matchings: return "too_many_matchings";
    }
    return "?";
}

struct InstanceLimits {
    std::size_t max_links = 128;
    std::uint64_t max_matchings = 50'000'000;
};

struct InstanceCheck {
    InstanceStatus status = InstanceStatus::pass;
    std::optional<MatchingFamily> family;  // present iff status == pass
    double enum_ms = 0.0;
};

/// Applies the filters in order; a passing instance carries its family so
/// enumeration is never repeated.
inline InstanceCheck classify_instance(const Network& net, const InstanceLimits& limits,
                                       const Deadline& deadline = {}) {
    if (limits.max_links == 0 || limits.max_matchings == 0) throw std::invalid_argument("limits must be positive");
    if (limits.max_links > LinkSet::kCapacity)
        throw CapacityError("max_links above " + std::to_string(LinkSet::kCapacity) + " is not supported");
    InstanceCheck out;
    if (net.link_count() == 0) {
        out.status = InstanceStatus::empty;
        return out;
    }
    if (net.link_count() > limits.max_links) {
        out.status = InstanceStatus::too_many_links;
        return out;
    }
    const auto start = std::chrono::steady_clock::now();
    try {
        out.family = enumerate_feasible_matchings(net, limits.max_matchings, deadline);
    } catch (const MatchingOverflow&) {
        out.status = InstanceStatus::too_many_matchings;
    }
    out.enum_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace fracsched
