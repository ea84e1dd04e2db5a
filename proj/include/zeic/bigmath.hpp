#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace zeic {

using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

inline cpp_int binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    cpp_int r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

inline cpp_int factorial(int n) {
    cpp_int r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

inline cpp_int pow_int(const cpp_int& base, int exp) {
    if (exp < 0) throw std::invalid_argument("pow_int: negative exponent");
    cpp_int r = 1, b = base;
    int e = exp;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

// Number of words in [Q]^n within Hamming distance `radius` of a fixed word.
inline cpp_int hamming_ball_volume(int q_size, int n, int radius) {
    cpp_int total = 0;
    for (int i = 0; i <= radius && i <= n; ++i)
        total += binomial(n, i) * pow_int(q_size - 1, i);
    return total;
}

// log2 of a positive cpp_int, accurate to ~1 ulp of double.
inline double log2_big(const cpp_int& x) {
    if (x <= 0) throw std::invalid_argument("log2_big: non-positive argument");
    const unsigned bits = boost::multiprecision::msb(x);
    if (bits <= 52) return std::log2(x.convert_to<double>());
    const unsigned shift = bits - 52;
    const double mant = cpp_int(x >> shift).convert_to<double>();
    return std::log2(mant) + static_cast<double>(shift);
}

// floor(r) for a non-negative rational.
inline long long floor_rational(const cpp_rational& r) {
    cpp_int q = numerator(r) / denominator(r);
    if (r < 0 && q * denominator(r) != numerator(r)) --q;
    return q.convert_to<long long>();
}

// Binary entropy, base-2 logs, with 0 log 0 = 0.
inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0))
        throw std::invalid_argument("binary_entropy: p must lie in [0, 1]");
    double h = 0.0;
    if (p > 0.0) h -= p * std::log2(p);
    if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
    return h;
}

// floor(d * n) as an index count. d arrives as a double that frequently
// carries representation error (1.0/3.0 is just under a third), so a tiny
// upward nudge restores the intended integer before flooring. Used for the
// paper's dn-style counts; radii use exact rational floors instead.
inline int floor_count(double d, int n) {
    return static_cast<int>(std::floor(d * static_cast<double>(n) + 1e-9));
}

} // namespace zeic
