#pragma once

// Exact rational numbers backed by GMP, plus the text conversions used by
// every file format in the toolkit ("p/q" strings, decimal strings).

#include <boost/multiprecision/gmp.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <tuple>

namespace fracsched {

using Rational = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline BigInt pow10(unsigned exponent) {
    return boost::multiprecision::pow(BigInt(10), exponent);
}

/// Base-10 digits only; leading zeros are stripped because the GMP backend
/// reads a leading "0" as an octal prefix.
inline BigInt parse_bigint_digits(std::string_view digits) {
    const auto first = digits.find_first_not_of('0');
    if (first == std::string_view::npos) return BigInt(0);
    return BigInt(std::string(digits.substr(first)));
}

/// Parses a decimal literal such as "-12.5", "8e-11" or "316.23" exactly.
inline Rational parse_decimal(std::string_view text) {
    auto fail = [&] {
        throw std::invalid_argument("malformed decimal: '" + std::string(text) + "'");
    };
    std::size_t pos = 0;
    bool negative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        negative = text[pos] == '-';
        ++pos;
    }
    std::string digits;
    long long exponent = 0;
    bool seen_digit = false;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        digits.push_back(text[pos++]);
        seen_digit = true;
    }
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            digits.push_back(text[pos++]);
            --exponent;
            seen_digit = true;
        }
    }
    if (!seen_digit) fail();
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
        ++pos;
        long long e = 0;
        if (pos < text.size() && text[pos] == '+') ++pos;
        auto result = std::from_chars(text.data() + pos, text.data() + text.size(), e);
        if (result.ec != std::errc{}) fail();
        pos = static_cast<std::size_t>(result.ptr - text.data());
        exponent += e;
    }
    if (pos != text.size()) fail();
    if (exponent > 4000 || exponent < -4000) fail();

    BigInt mantissa = parse_bigint_digits(digits);
    if (negative) mantissa = -mantissa;
    if (exponent >= 0) return Rational(mantissa * pow10(static_cast<unsigned>(exponent)));
    return Rational(mantissa, pow10(static_cast<unsigned>(-exponent)));
}

/// Accepts "p/q", an integer, or a decimal literal.
inline Rational parse_rational(std::string_view text) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_decimal(text);
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    auto is_integer = [](std::string_view s) {
        if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
        if (s.empty()) return false;
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    };
    if (!is_integer(num) || !is_integer(den))
        throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
    auto signed_value = [](std::string_view s) {
        const bool neg = s.front() == '-';
        if (s.front() == '-' || s.front() == '+') s.remove_prefix(1);
        BigInt v = parse_bigint_digits(s);
        return neg ? BigInt(-v) : v;
    };
    BigInt p = signed_value(num);
    BigInt q = signed_value(den);
    if (q == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
    return Rational(p, q);
}

/// Always "p/q", including integers ("6/1").
inline std::string to_string(const Rational& value) {
    return numerator(value).str() + "/" + denominator(value).str();
}

/// The exact value of the shortest decimal that round-trips to `value`,
/// so 8e-11 read from JSON becomes 8/10^11 and not its binary neighbour.
inline Rational rational_from_double(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("non-finite number");
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc{}) throw std::invalid_argument("cannot format number");
    return parse_decimal(std::string_view(buffer, static_cast<std::size_t>(ptr - buffer)));
}

inline double to_double(const Rational& value) { return value.convert_to<double>(); }

/// Renders scaled / 10^digits as a fixed-point decimal ("12.000500" for
/// scaled = 12000500, digits = 6).
inline std::string to_fixed_decimal(const BigInt& scaled, unsigned digits) {
    BigInt magnitude = scaled < 0 ? BigInt(-scaled) : scaled;
    std::string s = magnitude.str();
    if (s.size() <= digits) s.insert(0, digits + 1 - s.size(), '0');
    if (digits > 0) s.insert(s.size() - digits, 1, '.');
    if (scaled < 0) s.insert(0, 1, '-');
    return s;
}

/// Least common multiple of the denominators; zero values contribute 1.
inline BigInt lcm_of_denominators(std::span<const Rational> values) {
    if (values.empty()) throw std::invalid_argument("lcm_of_denominators: empty list");
    BigInt result = 1;
    for (const Rational& v : values) {
        result = boost::multiprecision::lcm(result, BigInt(denominator(v)));
    }
    return result;
}

}  // namespace fracsched
