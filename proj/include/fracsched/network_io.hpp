#pragma once

// JSON network files:
//   {"params": {"power_mw", "noise_mw", "beta", "alpha"}, "side_m", "seed"?,
//    "nodes": [{"id", "x", "y"}], "links": [{"id", "sender", "receiver"}]}
// Coordinates are decimal strings with six fractional digits. Numeric fields
// are written as JSON numbers when their shortest decimal form is exact and
// as "p/q" strings otherwise; both forms are accepted on input.

#include "fracsched/network.hpp"
#include "fracsched/rational.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace fracsched {

namespace detail {

inline nlohmann::json rational_to_json(const Rational& value) {
    const double d = to_double(value);
    if (std::isfinite(d) && rational_from_double(d) == value) {
        if (denominator(value) == 1 && abs(numerator(value)) < BigInt(1) << 53)
            return numerator(value).convert_to<std::int64_t>();
        return d;
    }
    return to_string(value);
}

inline Rational rational_from_json(const nlohmann::json& j, const char* field) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_number_float()) return rational_from_double(j.get<double>());
    throw std::invalid_argument(std::string("field '") + field + "' must be a number or a string");
}

inline std::int64_t coordinate_from_json(const nlohmann::json& j) {
    if (j.is_string()) return metres_to_um(parse_decimal(j.get<std::string>()));
    if (j.is_number_integer()) return metres_to_um(Rational(j.get<std::int64_t>()));
    throw std::invalid_argument("coordinates must be decimal strings");
}

inline const nlohmann::json& require(const nlohmann::json& j, const char* field) {
    if (!j.is_object() || !j.contains(field))
        throw std::invalid_argument(std::string("network file: missing field '") + field + "'");
    return j.at(field);
}

}  // namespace detail

inline std::string coordinate_string(std::int64_t um) { return to_fixed_decimal(BigInt(um), kCoordinateDigits); }

inline nlohmann::json params_to_json(const PhysParams& p) {
    nlohmann::json j;
    j["power_mw"] = detail::rational_to_json(p.power_mw);
    j["noise_mw"] = detail::rational_to_json(p.noise_mw);
    j["beta"] = detail::rational_to_json(p.beta);
    j["alpha"] = detail::rational_to_json(p.alpha);
    return j;
}

inline PhysParams params_from_json(const nlohmann::json& j) {
    PhysParams p;
    p.power_mw = detail::rational_from_json(detail::require(j, "power_mw"), "power_mw");
    p.noise_mw = detail::rational_from_json(detail::require(j, "noise_mw"), "noise_mw");
    p.beta = detail::rational_from_json(detail::require(j, "beta"), "beta");
    p.alpha = detail::rational_from_json(detail::require(j, "alpha"), "alpha");
    p.validate();
    return p;
}

inline nlohmann::json network_to_json(const Network& net) {
    nlohmann::json j;
    j["params"] = params_to_json(net.params());
    j["side_m"] = detail::rational_to_json(net.side_m());
    if (net.seed()) j["seed"] = *net.seed();
    auto nodes = nlohmann::json::array();
    for (const Node& v : net.nodes())
        nodes.push_back({{"id", v.id}, {"x", coordinate_string(v.x_um)}, {"y", coordinate_string(v.y_um)}});
    j["nodes"] = std::move(nodes);
    auto links = nlohmann::json::array();
    for (const Link& l : net.links())
        links.push_back({{"id", l.id}, {"sender", l.sender}, {"receiver", l.receiver}});
    j["links"] = std::move(links);
    return j;
}

inline Network network_from_json(const nlohmann::json& j) {
    PhysParams params = params_from_json(detail::require(j, "params"));
    const std::int64_t side_um = metres_to_um(detail::rational_from_json(detail::require(j, "side_m"), "side_m"));
    std::optional<std::uint64_t> seed;
    if (j.contains("seed") && !j.at("seed").is_null()) seed = j.at("seed").get<std::uint64_t>();

    std::vector<Node> nodes;
    for (const auto& n : detail::require(j, "nodes")) {
        nodes.push_back(Node{detail::require(n, "id").get<std::uint32_t>(),
                             detail::coordinate_from_json(detail::require(n, "x")),
                             detail::coordinate_from_json(detail::require(n, "y"))});
    }
    std::vector<Link> links;
    for (const auto& l : detail::require(j, "links")) {
        links.push_back(Link{detail::require(l, "id").get<std::uint32_t>(),
                             detail::require(l, "sender").get<std::uint32_t>(),
                             detail::require(l, "receiver").get<std::uint32_t>()});
    }
    return Network(std::move(params), side_um, std::move(nodes), std::move(links), seed);
}

inline std::string network_to_string(const Network& net) { return network_to_json(net).dump(2) + "\n"; }

inline void write_network_file(const Network& net, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << network_to_string(net);
    if (!out) throw std::runtime_error("write failed: '" + path + "'");
}

inline Network read_network_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("network file '" + path + "': " + e.what());
    }
    try {
        return network_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("network file '" + path + "': " + e.what());
    }
}

}  // namespace fracsched
