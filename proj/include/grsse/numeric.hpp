// Exact big-integer / big-rational arithmetic plus the dual numeric backend
// (exact rationals or binary64) used throughout the library.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace grsse {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(double x) { return x; }
inline double to_double(const BigInt& x) { return x.convert_to<double>(); }
inline double to_double(const Rational& x) { return x.convert_to<double>(); }

// log2 of a positive big integer; handles values far beyond double range.
inline double log2_big(const BigInt& x) {
    if (x <= 0) throw std::domain_error("log2_big: nonpositive argument");
    const auto bits = boost::multiprecision::msb(x);
    if (bits <= 900) return std::log2(x.convert_to<double>());
    BigInt top = x >> (bits - 52);
    return std::log2(top.convert_to<double>()) + static_cast<double>(bits - 52);
}

inline double log2_rational(const Rational& x) {
    if (x <= 0) throw std::domain_error("log2_rational: nonpositive argument");
    return log2_big(boost::multiprecision::numerator(x)) -
           log2_big(boost::multiprecision::denominator(x));
}

inline BigInt factorial(unsigned n) {
    BigInt r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

inline BigInt binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (unsigned i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

inline BigInt int_pow(const BigInt& base, unsigned e) {
    BigInt r = 1, b = base;
    for (; e; e >>= 1) {
        if (e & 1) r *= b;
        if (e > 1) b *= b;
    }
    return r;
}

// Number of vectors in F_q^n with Hamming weight exactly w.
inline BigInt sphere_size(unsigned n, unsigned w, unsigned q) {
    return binomial(n, w) * int_pow(q - 1, w);
}

// Number of vectors in F_q^n with Hamming weight at most w.
inline BigInt ball_size(unsigned n, unsigned w, unsigned q) {
    BigInt r = 0;
    for (unsigned j = 0; j <= w && j <= n; ++j) r += sphere_size(n, j, q);
    return r;
}

// Numeric backend abstraction. S is either Rational (exact) or double.
template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_ratio(const BigInt& num, const BigInt& den) {
        return to_double(num) / to_double(den);
    }
    static double from_rational(const Rational& r) { return to_double(r); }
    // residual capacity below this is treated as saturated by the flow solver
    static double flow_eps() { return 1e-15; }
    // acceptance probability close enough to 1 to end the plan
    static bool is_terminal(double f) { return f >= 1.0 - 1e-12; }
    static const char* name() { return "float64"; }
};

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_ratio(const BigInt& num, const BigInt& den) {
        return Rational(num, den);
    }
    static Rational from_rational(const Rational& r) { return r; }
    static Rational flow_eps() { return Rational(0); }
    static bool is_terminal(const Rational& f) { return f == 1; }
    static const char* name() { return "rational"; }
};

// Decimal-only big integer parse (cpp_int's own string constructor reads a
// leading zero as octal).
inline BigInt parse_bigint_decimal(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("bad integer: ''");
    size_t i = 0;
    bool neg = false;
    if (text[i] == '+' || text[i] == '-') neg = (text[i++] == '-');
    if (i == text.size()) throw std::invalid_argument("bad integer: '" + text + "'");
    BigInt v = 0;
    for (; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9')
            throw std::invalid_argument("bad integer: '" + text + "'");
        v = v * 10 + (text[i] - '0');
    }
    return neg ? -v : v;
}

// Parses "a/b", plain integers, and finite decimals ("0.11" -> 11/100),
// including a decimal exponent suffix ("1e-9").
inline Rational parse_rational(const std::string& text) {
    auto fail = [&] { throw std::invalid_argument("bad rational: '" + text + "'"); };
    if (text.empty()) fail();
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num = parse_bigint_decimal(text.substr(0, slash));
        BigInt den = parse_bigint_decimal(text.substr(slash + 1));
        if (den == 0) fail();
        return Rational(num, den);
    }
    std::string s = text;
    bool neg = false;
    size_t i = 0;
    if (s[i] == '+' || s[i] == '-') neg = (s[i++] == '-');
    std::string digits;
    long long scale10 = 0;
    bool saw_dot = false, saw_digit = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (saw_dot) fail();
            saw_dot = true;
        } else if (c >= '0' && c <= '9') {
            digits += c;
            saw_digit = true;
            if (saw_dot) --scale10;
        } else if (c == 'e' || c == 'E') {
            scale10 += std::stoll(s.substr(i + 1));
            break;
        } else {
            fail();
        }
    }
    if (!saw_digit) fail();
    BigInt num = parse_bigint_decimal(digits.empty() ? "0" : digits);
    if (neg) num = -num;
    Rational r(num);
    if (scale10 > 0) r *= Rational(int_pow(10, static_cast<unsigned>(scale10)));
    if (scale10 < 0) r /= Rational(int_pow(10, static_cast<unsigned>(-scale10)));
    return r;
}

inline std::string format_rational(const Rational& r) {
    return boost::multiprecision::numerator(r).str() + "/" +
           boost::multiprecision::denominator(r).str();
}

// Shortest decimal that round-trips to the same binary64 value.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

template <class S>
std::string format_scalar(const S& x) {
    if constexpr (scalar_traits<S>::exact)
        return format_rational(x);
    else
        return format_double(x);
}

}  // namespace grsse
