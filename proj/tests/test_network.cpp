#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <set>

using namespace fracsched;
using fixtures::hand_network;
using fixtures::ids;
using fixtures::m;

namespace {

/// Independent SINR oracle: straight from the definition over rationals.
Rational sinr_oracle(const Network& net, std::size_t e, const LinkSet& active) {
    const PhysParams& p = net.params();
    const unsigned alpha = numerator(p.alpha).convert_to<unsigned>();
    auto received = [&](std::uint32_t from, std::uint32_t to) -> Rational {
        const Node& a = net.nodes()[from];
        const Node& b = net.nodes()[to];
        const Rational dx(BigInt(a.x_um - b.x_um), kCoordinateScale);
        const Rational dy(BigInt(a.y_um - b.y_um), kCoordinateScale);
        Rational d2 = dx * dx + dy * dy;
        Rational dpow = 1;
        for (unsigned k = 0; k < alpha / 2; ++k) dpow *= d2;
        return p.power_mw / dpow;
    };
    const Link& l = net.link(e);
    bool colocated = false;
    active.for_each([&](std::size_t f) { colocated = colocated || (f != e && net.link(f).sender == l.receiver); });
    if (colocated) return Rational(0);
    Rational interference = 0;
    active.for_each([&](std::size_t f) {
        if (f != e) interference += received(net.link(f).sender, l.receiver);
    });
    return received(l.sender, l.receiver) / (p.noise_mw + interference);
}

bool feasible_oracle(const Network& net, const LinkSet& s) {
    std::set<std::uint32_t> used;
    bool disjoint = true;
    s.for_each([&](std::size_t e) {
        disjoint = disjoint && used.insert(net.link(e).sender).second && used.insert(net.link(e).receiver).second;
    });
    if (!disjoint) return false;
    bool ok = true;
    s.for_each([&](std::size_t e) { ok = ok && sinr_oracle(net, e, s) >= net.params().beta; });
    return ok;
}

LinkSet random_subset(Pcg64& g, std::size_t n, std::size_t max_size) {
    LinkSet s;
    const std::uint64_t k = 1 + g.below(max_size);
    while (s.size() < std::min<std::size_t>(k, n)) s.insert(g.below(n));
    return s;
}

}  // namespace

TEST(PhysParams, DefaultsAndRadius) {
    const PhysParams p;
    EXPECT_EQ(p.power_mw, 300);
    EXPECT_EQ(p.noise_mw, parse_decimal("8e-11"));
    EXPECT_EQ(p.beta, parse_decimal("316.23"));
    EXPECT_EQ(p.alpha, 4);
    // (300 / (316.23 * 8e-11))^(1/4) evaluated independently.
    EXPECT_NEAR(p.connection_radius_m(), std::pow(300.0 / (316.23 * 8e-11), 0.25), 1e-9);
    EXPECT_NEAR(p.connection_radius_m(), 330.0, 0.05);
}

TEST(PhysParams, ValidationRejectsOutOfRangeValues) {
    PhysParams p;
    p.beta = 1;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = PhysParams{};
    p.alpha = 2;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = PhysParams{};
    p.noise_mw = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = PhysParams{};
    p.power_mw = -1;
    EXPECT_THROW(p.validate(), std::invalid_argument);
}

TEST(Sinr, SingleLinkAtHundredMetres) {
    const Network net = hand_network({{0, 0}, {0, 100}}, {{0, 1}}, 200);
    const SinrValue v = sinr(net, 0, ids({0}));
    ASSERT_TRUE(v.exact);
    // 300 / (8e-11 * 100^4)
    EXPECT_EQ(*v.exact, Rational(37500));
    EXPECT_NEAR(v.approx, 37500.0, 1e-6);
}

TEST(Sinr, TwoCollinearLinks) {
    const Network net = hand_network({{0, 0}, {0, 100}, {0, 300}, {0, 400}}, {{0, 1}, {2, 3}}, 500);
    const SinrValue v = sinr(net, 0, ids({0, 1}));
    ASSERT_TRUE(v.exact);
    // 3e-6 / (8e-11 + 300/200^4) = 3e-6 / 1.8758e-7
    EXPECT_EQ(*v.exact, Rational(150000, 9379));
    EXPECT_NEAR(to_double(*v.exact), 15.99, 0.005);
    EXPECT_FALSE(is_feasible(net, ids({0, 1})));
    EXPECT_TRUE(is_feasible(net, ids({0})));
    EXPECT_TRUE(is_feasible(net, ids({1})));
}

TEST(Sinr, ThresholdIsInclusive) {
    PhysParams p;
    p.power_mw = parse_decimal("2.52984");  // 316.23 * 8e-11 * 100^4
    const Network net = hand_network({{0, 0}, {0, 100}}, {{0, 1}}, 200, p);
    EXPECT_EQ(*sinr(net, 0, ids({0})).exact, parse_decimal("316.23"));
    EXPECT_TRUE(is_feasible(net, ids({0})));

    p.power_mw = parse_decimal("2.529839");
    EXPECT_THROW(hand_network({{0, 0}, {0, 100}}, {{0, 1}}, 200, p), std::invalid_argument);
}

TEST(Sinr, PreconditionsAreEnforced) {
    const Network net = hand_network({{0, 0}, {0, 100}, {0, 300}, {0, 400}}, {{0, 1}, {2, 3}}, 500);
    EXPECT_THROW(sinr(net, 0, ids({1})), PreconditionError);
    EXPECT_THROW(sinr(net, 5, ids({5})), std::invalid_argument);
    EXPECT_THROW(is_feasible(net, LinkSet{}), PreconditionError);
    EXPECT_THROW(is_feasible(net, ids({0, 7})), std::invalid_argument);
}

TEST(Feasibility, SharedNodeIsNeverFeasible) {
    // Star: the two links share node 0 and are far from everything else.
    const Network net = hand_network({{500, 500}, {500, 600}, {600, 500}}, {{0, 1}, {0, 2}}, 1000);
    EXPECT_FALSE(is_feasible(net, ids({0, 1})));
    const Network net2 = hand_network({{500, 500}, {500, 600}, {600, 500}}, {{1, 0}, {2, 0}}, 1000);
    EXPECT_FALSE(is_feasible(net2, ids({0, 1})));
}

TEST(Feasibility, ThreePairsFixture) {
    const Network net = fixtures::three_pairs_network();
    EXPECT_TRUE(is_feasible(net, ids({0, 1})));
    EXPECT_TRUE(is_feasible(net, ids({0, 2})));
    EXPECT_TRUE(is_feasible(net, ids({1, 2})));
    EXPECT_FALSE(is_feasible(net, ids({0, 1, 2})));
}

TEST(Network, ConstructorRejectsInvalidInstances) {
    EXPECT_THROW(hand_network({{0, 0}, {0, 100}}, {{0, 0}}, 200), std::invalid_argument);
    EXPECT_THROW(hand_network({{0, 0}, {0, 100}}, {{0, 1}, {1, 0}}, 200), std::invalid_argument);
    EXPECT_THROW(hand_network({{0, 0}, {0, 100}}, {{0, 2}}, 200), std::invalid_argument);
    EXPECT_THROW(hand_network({{0, 0}, {0, 300}}, {}, 200), std::invalid_argument);
    EXPECT_THROW(hand_network({{5, 5}, {5, 5}}, {}, 200), std::invalid_argument);
    EXPECT_THROW(hand_network({{0, 0}, {0, 331}}, {{0, 1}}, 400), std::invalid_argument);
}

TEST(Network, RangeBoundaryNearRadius) {
    const Network net = hand_network({{0, 0}, {0, 331}, {1000, 0}, {1000, 329}}, {}, 2000);
    EXPECT_FALSE(net.pair_in_range(0, 1));
    EXPECT_TRUE(net.pair_in_range(2, 3));
}

TEST(Network, MaxDegree) {
    const Network net = hand_network({{500, 500}, {500, 600}, {600, 500}, {400, 500}}, {{0, 1}, {2, 0}, {0, 3}}, 1000);
    EXPECT_EQ(net.max_degree(), 3u);
}

TEST(Network, NonEvenAlphaFallsBackToDoubles) {
    PhysParams p;
    p.alpha = 3;
    p.power_mw = 1;
    const Network net = hand_network({{0, 0}, {0, 10}, {0, 500}, {0, 510}}, {{0, 1}, {2, 3}}, 1000, p);
    EXPECT_FALSE(net.exact_model());
    const SinrValue v = sinr(net, 0, ids({0, 1}));
    EXPECT_FALSE(v.exact);
    const double expected = (1.0 / 1000.0) / (8e-11 + 1.0 / std::pow(490.0, 3));
    EXPECT_NEAR(v.approx, expected, expected * 1e-12);
    EXPECT_EQ(is_feasible(net, ids({0, 1})), expected >= 316.23);
}

TEST(SinrProperties, ExactValueMatchesOracleOnGeneratedNetworks) {
    Pcg64 g(3, 77);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Network net = generate_network(20, Rational(1500), PhysParams{}, seed);
        if (net.link_count() == 0) continue;
        for (int k = 0; k < 20; ++k) {
            const LinkSet s = random_subset(g, net.link_count(), 4);
            s.for_each([&](std::size_t e) { EXPECT_EQ(*sinr(net, e, s).exact, sinr_oracle(net, e, s)); });
        }
    }
}

TEST(SinrProperties, RemovingInterferersNeverLowersSinr) {
    Pcg64 g(8, 1);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        const Network net = generate_network(25, Rational(1200), PhysParams{}, seed);
        if (net.link_count() < 2) continue;
        for (int k = 0; k < 30; ++k) {
            const LinkSet s = random_subset(g, net.link_count(), 6);
            const std::size_t e = s.front();
            LinkSet sub = s;
            s.for_each([&](std::size_t f) {
                if (f != e && g.coin()) sub.erase(f);
            });
            EXPECT_GE(*sinr(net, e, sub).exact, *sinr(net, e, s).exact);
        }
    }
}

TEST(SinrProperties, FilteredFeasibilityMatchesExactOracle) {
    Pcg64 g(12, 5);
    std::size_t feasible_multi = 0;
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const Network net = generate_network(15, Rational(1500), PhysParams{}, seed);
        if (net.link_count() == 0) continue;
        for (int k = 0; k < 50; ++k) {
            const LinkSet s = random_subset(g, net.link_count(), 4);
            const bool got = is_feasible(net, s);
            EXPECT_EQ(got, feasible_oracle(net, s)) << "seed " << seed << " set " << s.to_string();
            feasible_multi += got && s.size() > 1;
        }
    }
    EXPECT_GT(feasible_multi, 0u);
}

TEST(IncrementalFeasibility, AgreesWithBatchTestAndUndoesExactly) {
    Pcg64 g(21, 2);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const Network net = generate_network(20, Rational(1200), PhysParams{}, seed);
        if (net.link_count() < 3) continue;
        IncrementalFeasibility state(net);
        for (int step = 0; step < 300; ++step) {
            if (state.depth() > 0 && g.below(3) == 0) {
                state.pop();
                continue;
            }
            const std::size_t f = g.below(net.link_count());
            if (state.members().contains(f)) continue;
            LinkSet candidate = state.members();
            candidate.insert(f);
            const bool expected = feasible_oracle(net, candidate);
            EXPECT_EQ(state.try_push(static_cast<std::uint32_t>(f)), expected);
            if (!state.members().empty()) {
                EXPECT_TRUE(is_feasible(net, state.members()));
            }
        }
    }
}

TEST(Generator, IsDeterministic) {
    const Network a = generate_network(30, Rational(2000), PhysParams{}, 12345);
    const Network b = generate_network(30, Rational(2000), PhysParams{}, 12345);
    EXPECT_EQ(network_to_string(a), network_to_string(b));
    const Network c = generate_network(30, Rational(2000), PhysParams{}, 12346);
    EXPECT_NE(network_to_string(a), network_to_string(c));
}

TEST(Generator, EdgesAreExactlyThePairsWithinRange) {
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const Network net = generate_network(25, Rational(1000), PhysParams{}, seed);
        const PhysParams& p = net.params();
        std::set<std::pair<std::uint32_t, std::uint32_t>> pairs;
        for (const Link& l : net.links()) {
            pairs.insert({std::min(l.sender, l.receiver), std::max(l.sender, l.receiver)});
            EXPECT_TRUE(is_feasible(net, ids({l.id})));
        }
        EXPECT_EQ(pairs.size(), net.link_count());
        for (std::uint32_t a = 0; a < net.node_count(); ++a) {
            const Node& na = net.nodes()[a];
            EXPECT_GE(na.x_um, 0);
            EXPECT_LE(na.x_um, m(1000));
            EXPECT_GE(na.y_um, 0);
            EXPECT_LE(na.y_um, m(1000));
            for (std::uint32_t b = a + 1; b < net.node_count(); ++b) {
                const Node& nb = net.nodes()[b];
                const Rational dx(BigInt(na.x_um - nb.x_um), kCoordinateScale);
                const Rational dy(BigInt(na.y_um - nb.y_um), kCoordinateScale);
                const Rational d2 = dx * dx + dy * dy;
                const bool in_range = p.power_mw >= p.beta * p.noise_mw * d2 * d2;
                EXPECT_EQ(pairs.count({a, b}) == 1, in_range);
            }
        }
    }
}

TEST(Generator, SendersAreRoughlyBalanced) {
    std::size_t lower_sends = 0, total = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        const Network net = generate_network(30, Rational(1500), PhysParams{}, seed);
        for (const Link& l : net.links()) {
            lower_sends += l.sender < l.receiver;
            ++total;
        }
    }
    ASSERT_GT(total, 500u);
    EXPECT_NEAR(static_cast<double>(lower_sends) / static_cast<double>(total), 0.5, 0.06);
}

TEST(Generator, CoincidentPositionsAreResampled) {
    // A 1 um square has four grid points; four nodes must take all of them.
    const Network net = generate_network(4, Rational(1, 1000000), PhysParams{}, 3);
    std::set<std::pair<std::int64_t, std::int64_t>> positions;
    for (const Node& v : net.nodes()) positions.insert({v.x_um, v.y_um});
    EXPECT_EQ(positions.size(), 4u);
    EXPECT_THROW(generate_network(5, Rational(1, 1000000), PhysParams{}, 3), std::invalid_argument);
}

TEST(Generator, RejectsBadArguments) {
    EXPECT_THROW(generate_network(1, Rational(1000), PhysParams{}, 1), std::invalid_argument);
    EXPECT_THROW(generate_network(5, Rational(0), PhysParams{}, 1), std::invalid_argument);
}

TEST(NetworkJson, RoundTripIsLossless) {
    const Network net = generate_network(20, Rational(1500), PhysParams{}, 42);
    const std::string text = network_to_string(net);
    const auto path = std::filesystem::temp_directory_path() / "fracsched_roundtrip.json";
    write_network_file(net, path.string());
    const Network back = read_network_file(path.string());
    std::filesystem::remove(path);
    EXPECT_EQ(network_to_string(back), text);
    ASSERT_EQ(back.node_count(), net.node_count());
    for (std::size_t i = 0; i < net.node_count(); ++i) {
        EXPECT_EQ(back.nodes()[i].x_um, net.nodes()[i].x_um);
        EXPECT_EQ(back.nodes()[i].y_um, net.nodes()[i].y_um);
    }
    EXPECT_EQ(back.seed(), net.seed());
    EXPECT_EQ(back.params().noise_mw, net.params().noise_mw);
}

TEST(NetworkJson, CoordinatesAreSixDigitDecimalStrings) {
    const Network net = hand_network({{0, 0}, {0, 100}}, {{0, 1}}, 200);
    const nlohmann::json j = network_to_json(net);
    EXPECT_EQ(j["nodes"][1]["y"], "100.000000");
    EXPECT_EQ(j["params"]["beta"], 316.23);
    EXPECT_EQ(coordinate_string(1), "0.000001");
}

TEST(NetworkJson, AcceptsRationalStringsAndRejectsMissingFields) {
    nlohmann::json j = network_to_json(fixtures::three_pairs_network());
    j["params"]["beta"] = "31623/100";
    j["side_m"] = "1500";
    EXPECT_NO_THROW(network_from_json(j));
    j["params"].erase("alpha");
    EXPECT_THROW(network_from_json(j), std::invalid_argument);
    nlohmann::json k = network_to_json(fixtures::three_pairs_network());
    k["nodes"][0]["x"] = "1000.0000001";
    EXPECT_THROW(network_from_json(k), std::invalid_argument);
}
