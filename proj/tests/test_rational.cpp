#include "fracsched/rational.hpp"

#include <gtest/gtest.h>

#include <vector>

using namespace fracsched;

TEST(ParseDecimal, AcceptsPlainAndScientificForms) {
    EXPECT_EQ(parse_decimal("316.23"), Rational(31623, 100));
    EXPECT_EQ(parse_decimal("8e-11"), Rational(8, BigInt("100000000000")));
    EXPECT_EQ(parse_decimal("1.5E+2"), Rational(150));
    EXPECT_EQ(parse_decimal("-0.25"), Rational(-1, 4));
    EXPECT_EQ(parse_decimal(".5"), Rational(1, 2));
    EXPECT_EQ(parse_decimal("7."), Rational(7));
}

TEST(ParseDecimal, LeadingZerosAreDecimalNotOctal) {
    EXPECT_EQ(parse_decimal("010"), Rational(10));
    EXPECT_EQ(parse_decimal("0.089"), Rational(89, 1000));
    EXPECT_EQ(parse_rational("010/08"), Rational(10, 8));
}

TEST(ParseDecimal, RejectsMalformedInput) {
    for (const char* bad : {"", "-", ".", "1.2.3", "e5", "1e", "1x", "--1", "1e99999"})
        EXPECT_THROW(parse_decimal(bad), std::invalid_argument) << bad;
}

TEST(ParseRational, FractionsAreReduced) {
    const Rational r = parse_rational("6/4");
    EXPECT_EQ(numerator(r), 3);
    EXPECT_EQ(denominator(r), 2);
    EXPECT_EQ(parse_rational("-11/2"), Rational(-11, 2));
    EXPECT_THROW(parse_rational("1/0"), std::invalid_argument);
    EXPECT_THROW(parse_rational("1/"), std::invalid_argument);
}

TEST(RationalText, AlwaysNumeratorSlashDenominator) {
    EXPECT_EQ(to_string(Rational(11, 2)), "11/2");
    EXPECT_EQ(to_string(Rational(6)), "6/1");
    EXPECT_EQ(to_string(Rational(-3, 9)), "-1/3");
    EXPECT_EQ(to_string(Rational(0)), "0/1");
}

TEST(RationalText, RoundTripsThroughParse) {
    for (const Rational& r : {Rational(11, 2), Rational(-7, 3), Rational(0), Rational(BigInt("123456789012345678901"), 7)})
        EXPECT_EQ(parse_rational(to_string(r)), r);
}

TEST(RationalFromDouble, UsesShortestDecimal) {
    EXPECT_EQ(rational_from_double(0.1), Rational(1, 10));
    EXPECT_EQ(rational_from_double(316.23), Rational(31623, 100));
    EXPECT_EQ(rational_from_double(8e-11), parse_decimal("8e-11"));
    EXPECT_EQ(rational_from_double(-2.5), Rational(-5, 2));
}

TEST(FixedDecimal, PadsAndSigns) {
    EXPECT_EQ(to_fixed_decimal(BigInt(1234567), 6), "1.234567");
    EXPECT_EQ(to_fixed_decimal(BigInt(5), 6), "0.000005");
    EXPECT_EQ(to_fixed_decimal(BigInt(-5), 2), "-0.05");
    EXPECT_EQ(to_fixed_decimal(BigInt(42), 0), "42");
}

TEST(LcmOfDenominators, Examples) {
    const std::vector<Rational> ones{1, 1, 1};
    EXPECT_EQ(lcm_of_denominators(ones), 1);
    const std::vector<Rational> halves{1, 1, Rational(1, 2), Rational(1, 2), Rational(1, 2)};
    EXPECT_EQ(lcm_of_denominators(halves), 2);
    const std::vector<Rational> mixed{Rational(1, 3), Rational(1, 4)};
    EXPECT_EQ(lcm_of_denominators(mixed), 12);
    const std::vector<Rational> with_zero{0, Rational(2, 5)};
    EXPECT_EQ(lcm_of_denominators(with_zero), 5);
}

TEST(LcmOfDenominators, EmptyListIsAnError) {
    const std::vector<Rational> none;
    EXPECT_THROW(lcm_of_denominators(none), std::invalid_argument);
}

TEST(LcmOfDenominators, MatchesPairwiseOracle) {
    // Oracle: smallest positive integer k with k*v integral for every v.
    const std::vector<std::vector<Rational>> cases = {
        {Rational(1, 6), Rational(3, 10)}, {Rational(5, 7)}, {Rational(1, 2), Rational(1, 3), Rational(1, 5)}};
    for (const auto& values : cases) {
        BigInt k = 1;
        for (;; ++k) {
            bool all = true;
            for (const Rational& v : values) all = all && denominator(Rational(v * k)) == 1;
            if (all) break;
        }
        EXPECT_EQ(lcm_of_denominators(values), k);
    }
}
