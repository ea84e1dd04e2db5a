#include "zeic/uniform.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

using namespace zeic;

namespace {

// Independent diversity oracle: enumerate every index subset of size m and
// take the true minimum of distinct pairs hit.
bool brute_force_diverse(const Word& x, const Word& y, double d, double eps, int q_size) {
    const int n = static_cast<int>(x.size());
    const int m = floor_count(d, n);
    if (m == 0) return true;
    int min_distinct = q_size * q_size + 1;
    std::vector<int> idx(m);
    std::function<void(int, int)> rec = [&](int from, int k) {
        if (k == m) {
            std::set<std::pair<Symbol, Symbol>> seen;
            for (int i : idx) seen.insert({x[i], y[i]});
            min_distinct = std::min(min_distinct, static_cast<int>(seen.size()));
            return;
        }
        for (int i = from; i <= n - (m - k); ++i) {
            idx[k] = i;
            rec(i + 1, k + 1);
        }
    };
    rec(0, 0);
    return cpp_rational(min_distinct) > cpp_rational(eps) * (q_size * q_size);
}

// Smallest gamma for which (x, y) is gamma-uniform: the largest relative
// deviation of a type entry from n/Q^2.
double minimal_gamma(const Word& x, const Word& y, int q_size) {
    const TypeMatrix t = type_of(x, y, q_size);
    double worst = 0.0;
    for (int c : t.counts)
        worst = std::max(worst, std::abs(static_cast<double>(c) * q_size * q_size / t.n - 1.0));
    return worst;
}

TEST(TypeOf, ConstantPair) {
    const TypeMatrix t = type_of({0, 0, 0}, {0, 0, 0}, 2);
    EXPECT_EQ(t.at(0, 0), 3);
    EXPECT_EQ(t.at(0, 1), 0);
    EXPECT_EQ(t.at(1, 0), 0);
    EXPECT_EQ(t.at(1, 1), 0);
}

TEST(TypeOf, PerfectlyUniform) {
    const TypeMatrix t = type_of({0, 0, 1, 1}, {0, 1, 0, 1}, 2);
    for (int c : t.counts) EXPECT_EQ(c, 1);
}

TEST(TypeOf, CoordinatewiseTally) {
    const TypeMatrix t = type_of({0, 1, 0, 1}, {1, 1, 0, 0}, 2);
    EXPECT_EQ(t.at(0, 1), 1);
    EXPECT_EQ(t.at(1, 1), 1);
    EXPECT_EQ(t.at(0, 0), 1);
    EXPECT_EQ(t.at(1, 0), 1);
}

TEST(TypeOf, LengthMismatch) {
    EXPECT_THROW(type_of({0, 1}, {0}, 2), std::invalid_argument);
}

TEST(UniformPair, UniformTypeAlwaysPasses) {
    const Word x{0, 0, 1, 1}, y{0, 1, 0, 1};
    EXPECT_TRUE(is_gamma_uniform_pair(x, y, 0.0, 2));
    EXPECT_TRUE(is_gamma_uniform_pair(x, y, 1.0, 2));
}

TEST(UniformPair, ConstantPairFailsAtGammaOne) {
    const Word z{0, 0, 0, 0};
    EXPECT_FALSE(is_gamma_uniform_pair(z, z, 1.0, 2));
}

TEST(UniformPair, LargeGammaIsVacuous) {
    // gamma >= Q^2 - 1 pushes the upper bound to n and the lower below 0.
    Rng rng(5);
    for (int rep = 0; rep < 50; ++rep) {
        Word x(6), y(6);
        for (int i = 0; i < 6; ++i) {
            x[i] = static_cast<Symbol>(rng.next_below(2));
            y[i] = static_cast<Symbol>(rng.next_below(2));
        }
        EXPECT_TRUE(is_gamma_uniform_pair(x, y, 3.0, 2));
    }
}

TEST(UniformPair, ClosedIntervalBoundary) {
    // Type (3,1,1,3) at n = 8: bounds (1 +- gamma) * 2. Exactly 3 passes at
    // gamma = 0.5 (upper = 3) and fails just below.
    const Word x{0, 0, 0, 0, 1, 1, 1, 1};
    const Word y{0, 0, 0, 1, 0, 1, 1, 1};
    const TypeMatrix t = type_of(x, y, 2);
    EXPECT_EQ(t.at(0, 0), 3);
    EXPECT_EQ(t.at(1, 1), 3);
    EXPECT_TRUE(is_gamma_uniform_pair(x, y, 0.5, 2));
    EXPECT_FALSE(is_gamma_uniform_pair(x, y, 0.49, 2));
}

TEST(UniformPairSpec, BracketsTheMean) {
    const UniformPairSpec s = UniformPairSpec::make(0.5, 8, 2);
    EXPECT_LE(s.lower, cpp_rational(8, 4));
    EXPECT_GE(s.upper, cpp_rational(8, 4));
    EXPECT_EQ(s.lower, cpp_rational(1));
    EXPECT_EQ(s.upper, cpp_rational(3));
}

TEST(UniformSets, SingletonRefuted) {
    const auto fam = std::make_shared<ExplicitFamily>(2, 4, std::vector<Word>{{0, 0, 0, 0}});
    const UniformVerdict v = is_gamma_uniform_sets(*fam, *fam, 1.0, 1000, 1);
    EXPECT_EQ(v.kind, UniformVerdict::Kind::refuted);
    ASSERT_TRUE(v.witness.has_value());
    EXPECT_EQ(v.witness->first, (Word{0, 0, 0, 0}));
}

TEST(DiversePair, ConstantPairNotDiverse) {
    const Word z{0, 0, 0, 0};
    EXPECT_FALSE(is_diverse_pair(z, z, 0.5, 0.25, 2));
    EXPECT_FALSE(is_diverse_pair(z, z, 1.0, 0.25, 2));
}

TEST(DiversePair, UniformTypeFullWindow) {
    // 4 distinct pairs against eps Q^2 = 3: diverse.
    const Word x{0, 0, 1, 1}, y{0, 1, 0, 1};
    EXPECT_TRUE(is_diverse_pair(x, y, 1.0, 0.75, 2));
    EXPECT_FALSE(is_diverse_pair(x, y, 1.0, 1.0, 2));
}

TEST(DiversePair, EmptyWindowIsVacuous) {
    const Word z{0, 0, 0, 0};
    EXPECT_TRUE(is_diverse_pair(z, z, 0.1, 0.99, 2)); // floor(0.4) = 0
}

TEST(DiversePair, FlooredThresholdFromRepresentationError) {
    // d = 1/3 at n = 3 must give window 1, not 0.
    const Word x{0, 1, 2}, y{1, 2, 0};
    EXPECT_TRUE(is_diverse_pair(x, y, 1.0 / 3.0, 0.1, 3));
    // Strict boundary with a dyadic-exact eps: distinct = 1 vs eps Q^2 = 1.
    EXPECT_FALSE(is_diverse_pair({0, 0, 0, 0}, {1, 1, 1, 1}, 0.25, 0.25, 2));
}

TEST(DiversePair, GreedyMatchesBruteForce) {
    Rng rng(11);
    int instances = 0;
    while (instances < 100) {
        const int q_size = 2 + static_cast<int>(rng.next_below(2));
        const int n = 4 + static_cast<int>(rng.next_below(9)); // up to 12
        Word x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = static_cast<Symbol>(rng.next_below(q_size));
            y[i] = static_cast<Symbol>(rng.next_below(q_size));
        }
        const double d = 0.05 + 0.95 * rng.next_unit();
        const double eps = rng.next_unit();
        EXPECT_EQ(is_diverse_pair(x, y, d, eps, q_size),
                  brute_force_diverse(x, y, d, eps, q_size))
            << "n=" << n << " q=" << q_size << " d=" << d << " eps=" << eps;
        ++instances;
    }
}

TEST(DiverseGate, Arithmetic) {
    EXPECT_TRUE(uniform_implies_diverse_check(1.0, 0.25, 0.1));    // 0.25 > 0.2
    EXPECT_FALSE(uniform_implies_diverse_check(1.0, 0.25, 0.125)); // boundary is strict
    EXPECT_TRUE(uniform_implies_diverse_check(0.0, 0.5, 0.0));
}

TEST(DiverseGate, FlooredVariantIsStronger) {
    // If the floored gate holds, so does the real one.
    Rng rng(17);
    for (int rep = 0; rep < 200; ++rep) {
        const double gamma = 2.0 * rng.next_unit();
        const double eps = 0.2 * rng.next_unit();
        const double d = rng.next_unit();
        const int n = 4 + static_cast<int>(rng.next_below(60));
        if (uniform_implies_diverse_check_floored(gamma, d, eps, n))
            EXPECT_TRUE(uniform_implies_diverse_check(gamma, d, eps));
    }
}

TEST(Lemma9, UniformPlusGateImpliesDiverse) {
    // Randomized instances honoring the floored gate; zero failures.
    Rng rng(23);
    int instances = 0;
    while (instances < 2000) {
        const int q_size = 2 + static_cast<int>(rng.next_below(2));
        const int n = q_size * q_size * (1 + static_cast<int>(rng.next_below(6)));
        Word x(n), y(n);
        for (int i = 0; i < n; ++i) {
            x[i] = static_cast<Symbol>(rng.next_below(q_size));
            y[i] = static_cast<Symbol>(rng.next_below(q_size));
        }
        const double gamma =
            std::min(minimal_gamma(x, y, q_size) + 2.0 * rng.next_unit(),
                     static_cast<double>(q_size * q_size));
        ASSERT_TRUE(is_gamma_uniform_pair(x, y, gamma, q_size));
        // eps small enough to leave room for a d <= 1 satisfying the gate
        const double eps_cap = std::max(0.0, (n - 3.0) / ((1.0 + gamma) * n));
        const double eps = eps_cap * rng.next_unit() / (q_size * q_size);
        const int window = static_cast<int>(std::floor((1.0 + gamma) * eps * n)) + 1;
        const double d = std::min(1.0, (window + rng.next_unit()) / n);
        if (!uniform_implies_diverse_check_floored(gamma, d, eps, n)) continue;
        EXPECT_TRUE(is_diverse_pair(x, y, d, eps, q_size))
            << "n=" << n << " q=" << q_size << " gamma=" << gamma << " d=" << d
            << " eps=" << eps;
        ++instances;
    }
}

TEST(Lemma10, TinyRadius) {
    const ConstructedPair p = construct_lemma10(4, 1e-9);
    EXPECT_EQ(p.a->cardinality(), cpp_int(2));
    EXPECT_EQ(p.b->cardinality(), cpp_int(4));
}

TEST(Lemma10, CardinalitiesAtN8Gamma1) {
    const ConstructedPair p = construct_lemma10(8, 1.0);
    EXPECT_EQ(p.a->cardinality(), cpp_int(74)); // 2 (1 + 8 + 28)
    EXPECT_EQ(p.b->cardinality(), cpp_int(36)); // C(4,2)^2
}

TEST(Lemma10, EnumerationMatchesCardinality) {
    const ConstructedPair p = construct_lemma10(8, 1.0);
    EXPECT_EQ(cpp_int(p.a->materialize(1000).size()), p.a->cardinality());
    EXPECT_EQ(cpp_int(p.b->materialize(1000).size()), p.b->cardinality());
}

TEST(Lemma10, ExhaustivelyUniformAtN8) {
    const ConstructedPair p = construct_lemma10(8, 1.0);
    const UniformVerdict v = is_gamma_uniform_sets(*p.a, *p.b, 1.0, 5000, 1);
    EXPECT_EQ(v.kind, UniformVerdict::Kind::proved);
}

TEST(Lemma10, SizeBeatsTheBound) {
    for (int n : {8, 16, 32})
        for (double gamma : {0.5, 1.0}) {
            const ConstructedPair p = construct_lemma10(n, gamma);
            const double log2_product =
                p.a->log2_cardinality() + p.b->log2_cardinality();
            EXPECT_GT(log2_product, lemma10_lower_bound_log2(n, gamma))
                << "n=" << n << " gamma=" << gamma;
        }
}

TEST(Lemma10, DivisibilityAndRangeErrors) {
    EXPECT_THROW(construct_lemma10(6, 1.0), std::invalid_argument);
    EXPECT_THROW(construct_lemma10(8, 0.0), std::invalid_argument);
    EXPECT_THROW(construct_lemma10(8, 2.0), std::invalid_argument);
}

TEST(Lemma11, TinyRadiusQ3) {
    const ConstructedPair p = construct_lemma11(3, 9, 0.0);
    EXPECT_EQ(p.a->cardinality(), cpp_int(1));
    EXPECT_EQ(p.b->cardinality(), cpp_int(216)); // (3!)^3
    EXPECT_EQ(cpp_int(p.b->materialize(300).size()), p.b->cardinality());
}

TEST(Lemma11, BinomialSumAtN27) {
    const ConstructedPair p = construct_lemma11(3, 27, 1.0);
    // radius 3: 1 + 54 + 1404 + 23400
    EXPECT_EQ(p.a->cardinality(), cpp_int(24859));
}

TEST(Lemma11, StaircaseIsMember) {
    const ConstructedPair p = construct_lemma11(3, 9, 1.0);
    const Word staircase{0, 0, 0, 1, 1, 1, 2, 2, 2};
    EXPECT_TRUE(p.a->contains(staircase));
}

TEST(Lemma11, ProvedAtSmallScale) {
    const ConstructedPair p = construct_lemma11(3, 9, 1.0);
    const UniformVerdict v = is_gamma_uniform_sets(*p.a, *p.b, 1.0, 200000, 1);
    EXPECT_EQ(v.kind, UniformVerdict::Kind::proved);
}

TEST(Lemma11, AuditedAtN27) {
    const ConstructedPair p = construct_lemma11(3, 27, 1.0);
    const UniformVerdict v = is_gamma_uniform_sets(*p.a, *p.b, 1.0, 20000, 7);
    EXPECT_EQ(v.kind, UniformVerdict::Kind::audited);
    EXPECT_EQ(v.samples, 20000u);
}

TEST(Lemma11, HypothesisFlagTracksN) {
    EXPECT_FALSE(construct_lemma11(3, 9, 1.0).hypotheses_ok); // 9 < 27
    EXPECT_TRUE(construct_lemma11(3, 27, 1.0).hypotheses_ok); // 27 >= 27
    EXPECT_TRUE(construct_lemma11(4, 64, 1.0).hypotheses_ok); // 64 >= 64
}

TEST(Lemma11, DivisibilityErrors) {
    EXPECT_THROW(construct_lemma11(3, 10, 1.0), std::invalid_argument);
    EXPECT_THROW(construct_lemma11(2, 8, 1.0), std::invalid_argument);
    EXPECT_THROW(construct_lemma11(3, 9, 10.0), std::invalid_argument);
}

TEST(BinaryReduction, ExpansionIsBalanced) {
    // Each bit position of the binary expansion takes value 1 on exactly
    // Q/2 symbols.
    for (int q_bits = 1; q_bits <= 3; ++q_bits) {
        const int q_size = 1 << q_bits;
        for (int bit = 0; bit < q_bits; ++bit) {
            int ones = 0;
            for (Symbol s = 0; s < q_size; ++s) ones += (s >> (q_bits - 1 - bit)) & 1;
            EXPECT_EQ(ones, q_size / 2);
        }
    }
}

TEST(BinaryReduction, PreservesCardinalityAndMembership) {
    const ConstructedPair p = construct_lemma11(4, 16, 1.0);
    const auto [a2, b2] = binary_reduction(p.a, p.b);
    EXPECT_EQ(a2->cardinality(), p.a->cardinality());
    EXPECT_EQ(b2->cardinality(), p.b->cardinality());
    EXPECT_EQ(a2->q_size(), 2);
    EXPECT_EQ(a2->length(), 32);
    Rng rng(9);
    for (int i = 0; i < 50; ++i) {
        EXPECT_TRUE(a2->contains(a2->sample(rng)));
        EXPECT_TRUE(b2->contains(b2->sample(rng)));
    }
}

TEST(BinaryReduction, TransportsUniformity) {
    const ConstructedPair p = construct_lemma11(4, 16, 1.0);
    const auto [a2, b2] = binary_reduction(p.a, p.b);
    const UniformVerdict v = is_gamma_uniform_sets(*a2, *b2, 1.0, 3000, 3);
    EXPECT_NE(v.kind, UniformVerdict::Kind::refuted);
}

TEST(BinaryReduction, SingletonImage) {
    const auto fam = std::make_shared<ExplicitFamily>(4, 2, std::vector<Word>{{1, 2}});
    const auto [a2, b2] = binary_reduction(fam, fam);
    EXPECT_EQ(a2->cardinality(), cpp_int(1));
    EXPECT_TRUE(a2->contains({0, 1, 1, 0})); // 1 -> 01, 2 -> 10
}

TEST(BinaryReduction, RejectsNonPowerOfTwo) {
    const ConstructedPair p = construct_lemma11(3, 9, 1.0);
    EXPECT_THROW(binary_reduction(p.a, p.b), std::invalid_argument);
}

TEST(UniformBiclique, VacuousGammaGivesFullSquare) {
    const UniformBiclique r = max_uniform_biclique_exact(2, 4, 3.0);
    EXPECT_EQ(r.size, 256u);
}

TEST(UniformBiclique, GammaZeroRespectsTheBound) {
    const UniformBiclique r = max_uniform_biclique_exact(2, 4, 0.0);
    EXPECT_LE(static_cast<double>(r.size), 16.0 + 1e-9); // 2^{4(1+0+H(0))}
    EXPECT_GE(r.size, 8u); // e.g. {0011,1100,0101,1010} x {0110,1001}
    for (const Word& x : r.a)
        for (const Word& y : r.b) EXPECT_TRUE(is_gamma_uniform_pair(x, y, 0.0, 2));
}

TEST(UniformBiclique, WitnessPairsAreUniform) {
    for (double gamma : {0.5, 1.0, 2.0}) {
        const UniformBiclique r = max_uniform_biclique_exact(2, 4, gamma);
        for (const Word& x : r.a)
            for (const Word& y : r.b)
                EXPECT_TRUE(is_gamma_uniform_pair(x, y, gamma, 2));
    }
}

TEST(UniformBiclique, BudgetError) {
    EXPECT_THROW(max_uniform_biclique_exact(2, 5, 1.0), BudgetError);
}

TEST(Lemma12, ClosedFormValues) {
    EXPECT_DOUBLE_EQ(lemma12_upper_bound(8, 1, 0.0).log2_smooth_form, 8.0);
    EXPECT_DOUBLE_EQ(lemma12_upper_bound(8, 1, 1.0).log2_smooth_form, 20.0); // H(1/2) = 1
    EXPECT_DOUBLE_EQ(lemma12_upper_bound(8, 1, 2.0).log2_smooth_form, 16.0); // H(1) = 0
    EXPECT_DOUBLE_EQ(lemma12_upper_bound(5, 3, 0.0).log2_smooth_form, 15.0);
}

TEST(Lemma12, SmoothDominatesBinomialInRegime) {
    // Guaranteed for gamma <= 1 or integral gamma n / 2.
    for (int n : {4, 8, 10, 16})
        for (double gamma : {0.0, 0.25, 0.5, 1.0}) {
            const Lemma12Bound b = lemma12_upper_bound(n, 1, gamma);
            EXPECT_LE(b.log2_binomial_form, b.log2_smooth_form + 1e-9)
                << "n=" << n << " gamma=" << gamma;
        }
    const Lemma12Bound b = lemma12_upper_bound(8, 1, 2.0); // gamma n/2 = 8 integral
    EXPECT_LE(b.log2_binomial_form, b.log2_smooth_form + 1e-9);
}

TEST(Lemma12, ConstructionSatisfiesTheBound) {
    for (int n : {8, 16})
        for (double gamma : {0.5, 1.0}) {
            const ConstructedPair p = construct_lemma10(n, gamma);
            const double log2_product = p.a->log2_cardinality() + p.b->log2_cardinality();
            EXPECT_LE(log2_product, lemma12_upper_bound(n, 1, gamma).log2_smooth_form + 1e-9);
        }
}

TEST(Families, SamplesSatisfyMembership) {
    const ConstructedPair p10 = construct_lemma10(16, 1.0);
    const ConstructedPair p11 = construct_lemma11(3, 18, 1.0);
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        EXPECT_TRUE(p10.a->contains(p10.a->sample(rng)));
        EXPECT_TRUE(p10.b->contains(p10.b->sample(rng)));
        EXPECT_TRUE(p11.a->contains(p11.a->sample(rng)));
        EXPECT_TRUE(p11.b->contains(p11.b->sample(rng)));
    }
}

TEST(Families, TwoCenterSamplerCoversBothBalls) {
    const ConstructedPair p = construct_lemma10(8, 1.0);
    const auto* balls = dynamic_cast<const HammingBallFamily*>(p.a.get());
    ASSERT_NE(balls, nullptr);
    Rng rng(21);
    int near_first = 0, near_second = 0;
    for (int i = 0; i < 200; ++i) {
        const Word w = balls->sample(rng);
        int d0 = 0, d1 = 0;
        for (int k = 0; k < 8; ++k) {
            d0 += w[k] != balls->centers()[0][k];
            d1 += w[k] != balls->centers()[1][k];
        }
        (d0 <= d1 ? near_first : near_second) += 1;
    }
    EXPECT_GT(near_first, 0);
    EXPECT_GT(near_second, 0);
}

TEST(Families, HammingBallRejectsOverlap) {
    EXPECT_THROW(HammingBallFamily(2, {{0, 0, 0, 0}, {0, 0, 0, 1}}, 1), std::invalid_argument);
}

} // namespace
