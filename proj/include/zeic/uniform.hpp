#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "zeic/bigmath.hpp"
#include "zeic/bpis.hpp"
#include "zeic/channel.hpp"
#include "zeic/errors.hpp"
#include "zeic/set_family.hpp"

namespace zeic {

// Q x Q occurrence counts of symbol pairs across the coordinates of a word
// pair; entries sum to n.
struct TypeMatrix {
    int q_size = 0;
    int n = 0;
    std::vector<int> counts; // row-major [alpha][beta]

    int at(Symbol alpha, Symbol beta) const {
        return counts[static_cast<std::size_t>(alpha) * q_size + beta];
    }
};

inline TypeMatrix type_of(const Word& x, const Word& y, int q_size) {
    if (x.size() != y.size())
        throw std::invalid_argument("type_of: mismatched blocklengths");
    TypeMatrix t;
    t.q_size = q_size;
    t.n = static_cast<int>(x.size());
    t.counts.assign(static_cast<std::size_t>(q_size) * q_size, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] < 0 || x[i] >= q_size || y[i] < 0 || y[i] >= q_size)
            throw std::invalid_argument("type_of: symbol outside [0, Q)");
        ++t.counts[static_cast<std::size_t>(x[i]) * q_size + y[i]];
    }
    return t;
}

// Closed interval [(1-gamma) n/Q^2, (1+gamma) n/Q^2] kept as exact
// rationals; gamma is taken at its exact binary value.
struct UniformPairSpec {
    double gamma = 0.0;
    cpp_rational lower;
    cpp_rational upper;

    static UniformPairSpec make(double gamma, int n, int q_size) {
        UniformPairSpec s;
        s.gamma = gamma;
        const cpp_rational g(gamma);
        const cpp_rational base(n, q_size * q_size);
        s.lower = (1 - g) * base;
        s.upper = (1 + g) * base;
        return s;
    }
};

// Every type entry must lie inside the closed interval; comparisons are
// exact rationals, so boundary counts are never float-flaky.
inline bool is_gamma_uniform_pair(const Word& x, const Word& y, double gamma, int q_size) {
    const TypeMatrix t = type_of(x, y, q_size);
    const UniformPairSpec spec = UniformPairSpec::make(gamma, t.n, q_size);
    for (int c : t.counts) {
        const cpp_rational cr(c);
        if (cr < spec.lower || cr > spec.upper) return false;
    }
    return true;
}

struct UniformVerdict {
    enum class Kind { proved, audited, refuted };
    Kind kind = Kind::proved;
    std::uint64_t samples = 0;
    std::optional<std::pair<Word, Word>> witness;
};

// Exhaustive cross check when |A||B| fits the audit budget, otherwise a
// seeded randomized audit of budget cross pairs.
inline UniformVerdict is_gamma_uniform_sets(const SetFamily& a, const SetFamily& b, double gamma,
                                            std::uint64_t audit_budget, std::uint64_t seed) {
    UniformVerdict v;
    if (a.cardinality() * b.cardinality() <= audit_budget) {
        v.kind = UniformVerdict::Kind::proved;
        const std::vector<Word> bw = b.materialize(audit_budget);
        std::optional<std::pair<Word, Word>> bad;
        a.visit([&](const Word& x) {
            if (bad) return;
            for (const Word& y : bw) {
                ++v.samples;
                if (!is_gamma_uniform_pair(x, y, gamma, a.q_size())) {
                    bad = std::make_pair(x, y);
                    return;
                }
            }
        });
        if (bad) {
            v.kind = UniformVerdict::Kind::refuted;
            v.witness = std::move(bad);
        }
        return v;
    }
    Rng rng(seed);
    for (std::uint64_t i = 0; i < audit_budget; ++i) {
        const Word x = a.sample(rng);
        const Word y = b.sample(rng);
        ++v.samples;
        if (!is_gamma_uniform_pair(x, y, gamma, a.q_size())) {
            v.kind = UniformVerdict::Kind::refuted;
            v.witness = std::make_pair(x, y);
            return v;
        }
    }
    v.kind = UniformVerdict::Kind::audited;
    return v;
}

// (d, eps)-diversity in closed form. The adversary minimizing the number of
// distinct pairs hit by an index set of size floor(dn) concentrates it on
// the most frequent pairs, so sorting the type entries descending and
// covering greedily yields the exact minimum. floor(dn) = 0 is vacuously
// true (empty index family).
inline bool is_diverse_pair(const Word& x, const Word& y, double d, double eps, int q_size) {
    if (!(d > 0.0 && d <= 1.0))
        throw std::invalid_argument("is_diverse_pair: d must lie in (0, 1]");
    const TypeMatrix t = type_of(x, y, q_size);
    const int m = floor_count(d, t.n);
    if (m == 0) return true;
    std::vector<int> counts = t.counts;
    std::sort(counts.begin(), counts.end(), std::greater<int>());
    int covered = 0, used = 0;
    while (covered < m) {
        covered += counts[used];
        ++used;
    }
    return cpp_rational(used) > cpp_rational(eps) * (q_size * q_size);
}

// Hypothesis gate of the uniform => diverse implication: d > (1+gamma) eps,
// strict, evaluated exactly.
inline bool uniform_implies_diverse_check(double gamma, double d, double eps) {
    return cpp_rational(d) > (1 + cpp_rational(gamma)) * cpp_rational(eps);
}

// Floored variant that makes the implication airtight for integer index
// sets: floor(dn) > (1+gamma) eps n guarantees every gamma-uniform pair is
// (d, eps)-diverse under the floor(dn) reading.
inline bool uniform_implies_diverse_check_floored(double gamma, double d, double eps, int n) {
    return cpp_rational(floor_count(d, n)) >
           (1 + cpp_rational(gamma)) * cpp_rational(eps) * n;
}

// --- explicit gamma-uniform constructions ------------------------------------

struct ConstructedPair {
    FamilyPtr a;
    FamilyPtr b;
    bool hypotheses_ok = true; // L11 only: n >= Q^3 feeds the bound, not the construction
};

// Binary construction: A is the union of Hamming balls of radius
// floor(gamma n / 4) around 0^{n/2} 1^{n/2} and its complement; B is every
// binary word with exactly n/4 ones in each half.
inline ConstructedPair construct_lemma10(int n, double gamma) {
    if (n < 4 || n % 4 != 0)
        throw std::invalid_argument("construct_lemma10: n must be a positive multiple of 4");
    if (!(gamma > 0.0 && gamma < 2.0))
        throw std::invalid_argument("construct_lemma10: gamma must lie in (0, 2)");
    const int radius =
        static_cast<int>(floor_rational(cpp_rational(gamma) * n / 4));
    Word a(n), abar(n);
    for (int i = 0; i < n; ++i) {
        a[i] = i < n / 2 ? 0 : 1;
        abar[i] = 1 - a[i];
    }
    ConstructedPair out;
    out.a = std::make_shared<HammingBallFamily>(2, std::vector<Word>{a, abar}, radius);
    out.b = std::make_shared<BlockBalancedFamily>(2, n);
    return out;
}

// log2 of the L10 size guarantee (2/(n(n+1))) 2^{(1+H(gamma/4)) n}.
inline double lemma10_lower_bound_log2(int n, double gamma) {
    return std::log2(2.0 / (static_cast<double>(n) * (n + 1))) +
           (1.0 + binary_entropy(gamma / 4.0)) * n;
}

// General-alphabet construction: A is the Hamming ball of radius
// floor(gamma n / Q^2) around the staircase word 0^{n/Q} 1^{n/Q} ... ;
// B is the block-balanced family.
inline ConstructedPair construct_lemma11(int q_size, int n, double gamma) {
    if (q_size < 3)
        throw std::invalid_argument("construct_lemma11: q_size must be >= 3");
    if (n % (q_size * q_size) != 0)
        throw std::invalid_argument("construct_lemma11: Q^2 must divide n");
    if (!(gamma >= 0.0 && gamma <= static_cast<double>(q_size) * q_size))
        throw std::invalid_argument("construct_lemma11: gamma must lie in [0, Q^2]");
    const int radius =
        static_cast<int>(floor_rational(cpp_rational(gamma) * n / (q_size * q_size)));
    Word a(n);
    const int block = n / q_size;
    for (int i = 0; i < n; ++i) a[i] = i / block;
    ConstructedPair out;
    out.a = std::make_shared<HammingBallFamily>(q_size, std::vector<Word>{a}, radius);
    out.b = std::make_shared<BlockBalancedFamily>(q_size, n);
    out.hypotheses_ok = cpp_int(n) >= pow_int(cpp_int(q_size), 3);
    return out;
}

// log2 of the L11 size guarantee
// (1/n)^{Q^2/2} 2^{H(gamma/Q^2) n} (Q-1)^{gamma n / Q^2} Q^n; valid for n >= Q^3.
inline double lemma11_lower_bound_log2(int q_size, int n, double gamma) {
    const double q2 = static_cast<double>(q_size) * q_size;
    return -(q2 / 2.0) * std::log2(static_cast<double>(n)) +
           binary_entropy(gamma / q2) * n +
           (gamma * n / q2) * std::log2(static_cast<double>(q_size) - 1.0) +
           n * std::log2(static_cast<double>(q_size));
}

// Symbol-wise binary expansion of both families; each bit position of the
// expansion takes value 1 on exactly Q/2 symbols, which is what preserves
// gamma-uniformity.
inline std::pair<FamilyPtr, FamilyPtr> binary_reduction(FamilyPtr a, FamilyPtr b) {
    if (a->q_size() != b->q_size())
        throw std::invalid_argument("binary_reduction: mismatched alphabets");
    const int q_size = a->q_size();
    if (q_size < 2 || (q_size & (q_size - 1)) != 0)
        throw std::invalid_argument("binary_reduction: Q must be a power of two");
    int q_bits = 0;
    while ((1 << q_bits) < q_size) ++q_bits;
    return {std::make_shared<BinaryImageFamily>(std::move(a), q_bits),
            std::make_shared<BinaryImageFamily>(std::move(b), q_bits)};
}

struct UniformBiclique {
    std::vector<Word> a;
    std::vector<Word> b;
    std::uint64_t size = 0;
};

// Exact maximum |A||B| over set pairs whose every cross pair is
// gamma-uniform, for Q^n small. Same rectangle search as the BPIS oracle,
// with conflict = "not gamma-uniform".
inline UniformBiclique max_uniform_biclique_exact(int q_size, int n, double gamma,
                                                  std::uint64_t budget_words = 16) {
    const std::uint64_t nw = word_count(q_size, n);
    if (nw > budget_words || nw > 32)
        throw BudgetError("max_uniform_biclique_exact: Q^n exceeds the search budget");
    const int nwords = static_cast<int>(nw);
    std::vector<Word> words(nwords);
    for (int i = 0; i < nwords; ++i) words[i] = word_from_index(i, q_size, n);

    std::vector<std::uint32_t> conflict(nwords, 0);
    for (int i = 0; i < nwords; ++i)
        for (int j = 0; j < nwords; ++j)
            if (!is_gamma_uniform_pair(words[i], words[j], gamma, q_size))
                conflict[i] |= 1u << j;

    const detail::Rectangle r = detail::max_edgeless_rectangle(conflict, nwords, nwords);
    UniformBiclique out;
    out.size = r.size;
    for (int i : detail::mask_to_indices(r.left)) out.a.push_back(words[i]);
    for (int i : detail::mask_to_indices(r.right)) out.b.push_back(words[i]);
    return out;
}

// Upper bounds on gamma-uniform systems, reported in log2.
// The binomial form C(n, floor(gamma n / 2)) 2^{n(1+gamma/2)} applies at
// q = 1; the smooth form 2^{nq(1+gamma/2+H(gamma/2))} dominates it whenever
// gamma <= 1 or gamma n / 2 is integral (the floor can overshoot the smooth
// exponent for fractional gamma n / 2 with gamma > 1).
struct Lemma12Bound {
    double log2_binomial_form = 0.0;
    double log2_smooth_form = 0.0;
};

inline Lemma12Bound lemma12_upper_bound(int n, int q, double gamma) {
    if (!(gamma >= 0.0 && gamma <= 2.0))
        throw std::invalid_argument("lemma12_upper_bound: gamma must lie in [0, 2]");
    Lemma12Bound b;
    const int k = static_cast<int>(floor_rational(cpp_rational(gamma) * n / 2));
    b.log2_binomial_form = log2_big(binomial(n, k)) + n * (1.0 + gamma / 2.0);
    b.log2_smooth_form =
        static_cast<double>(n) * q * (1.0 + gamma / 2.0 + binary_entropy(gamma / 2.0));
    return b;
}

} // namespace zeic
