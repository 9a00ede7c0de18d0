#include "fracsched/link_set.hpp"
#include "fracsched/pcg64.hpp"

#include <gtest/gtest.h>

#include <array>
#include <set>
#include <vector>

using namespace fracsched;

TEST(Pcg64, MatchesReferenceVector) {
    // Published output of the reference implementation, seed 42, stream 54.
    Pcg64 g(42, 54);
    const std::array<std::uint64_t, 6> expected = {0x86b1da1d72062b68ULL, 0x1304aa46c9853d39ULL,
                                                   0xa3670e9e0dd50358ULL, 0xf9090e529a7dae00ULL,
                                                   0xc85b9fd837996f2cULL, 0x606121f8e3919196ULL};
    for (std::uint64_t want : expected) EXPECT_EQ(g(), want);
}

TEST(Pcg64, StreamsDiffer) {
    Pcg64 a(7, streams::kNodePlacement), b(7, streams::kSenderCoins);
    int same = 0;
    for (int i = 0; i < 64; ++i) same += a() == b();
    EXPECT_EQ(same, 0);
}

TEST(Pcg64, BelowStaysInRangeAndCoversIt) {
    Pcg64 g(1, 2);
    std::vector<int> hits(7, 0);
    for (int i = 0; i < 7000; ++i) {
        const std::uint64_t v = g.below(7);
        ASSERT_LT(v, 7u);
        ++hits[v];
    }
    for (int h : hits) EXPECT_GT(h, 800);
    EXPECT_EQ(g.below(1), 0u);
}

TEST(Pcg64, CoinIsRoughlyFair) {
    Pcg64 g(99, 3);
    int heads = 0;
    for (int i = 0; i < 10000; ++i) heads += g.coin();
    EXPECT_NEAR(heads, 5000, 300);
}

TEST(Mix64, IsInjectiveOnSmallInputs) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t x = 0; x < 10000; ++x) seen.insert(mix64(x));
    EXPECT_EQ(seen.size(), 10000u);
}

// ---------------------------------------------------------------------------

TEST(LinkSet, BasicOperations) {
    LinkSet s;
    EXPECT_TRUE(s.empty());
    s.insert(3);
    s.insert(70);
    s.insert(127);
    EXPECT_EQ(s.size(), 3u);
    EXPECT_TRUE(s.contains(70));
    EXPECT_FALSE(s.contains(4));
    EXPECT_EQ(s.front(), 3u);
    EXPECT_EQ(s.back(), 127u);
    s.erase(3);
    EXPECT_EQ(s.front(), 70u);
    EXPECT_EQ(s.to_string(), "{70,127}");
}

TEST(LinkSet, AlgebraAgreesWithStdSet) {
    Pcg64 g(5, 9);
    for (int round = 0; round < 200; ++round) {
        LinkSet a, b;
        std::set<std::uint32_t> sa, sb;
        for (int k = 0; k < 20; ++k) {
            const auto x = static_cast<std::uint32_t>(g.below(128));
            const auto y = static_cast<std::uint32_t>(g.below(128));
            a.insert(x);
            sa.insert(x);
            b.insert(y);
            sb.insert(y);
        }
        std::set<std::uint32_t> u = sa, i, d;
        u.insert(sb.begin(), sb.end());
        for (auto x : sa) (sb.count(x) ? i : d).insert(x);
        EXPECT_EQ((a | b).to_vector(), std::vector<std::uint32_t>(u.begin(), u.end()));
        EXPECT_EQ((a & b).to_vector(), std::vector<std::uint32_t>(i.begin(), i.end()));
        EXPECT_EQ((a - b).to_vector(), std::vector<std::uint32_t>(d.begin(), d.end()));
        EXPECT_EQ(a.intersects(b), !i.empty());
        EXPECT_TRUE((a & b).is_subset_of(a));
    }
}

TEST(LinkSet, CanonicalOrderIsSizeThenLexicographic) {
    const auto s = [](std::vector<std::uint32_t> v) { return LinkSet::from_ids(v); };
    EXPECT_TRUE(canonical_less(s({9}), s({0, 1})));
    EXPECT_TRUE(canonical_less(s({0, 2}), s({0, 3})));
    EXPECT_TRUE(canonical_less(s({1, 5}), s({2, 3})));
    EXPECT_TRUE(canonical_less(s({0, 100}), s({1, 2})));
    EXPECT_FALSE(canonical_less(s({2, 3}), s({2, 3})));
}

TEST(LinkSet, CanonicalOrderMatchesVectorComparison) {
    Pcg64 g(11, 4);
    for (int round = 0; round < 2000; ++round) {
        LinkSet a, b;
        const std::uint64_t k = 1 + g.below(4);
        while (a.size() < k) a.insert(g.below(128));
        while (b.size() < k) b.insert(g.below(128));
        EXPECT_EQ(canonical_less(a, b), a.to_vector() < b.to_vector());
    }
}
