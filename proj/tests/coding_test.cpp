#include "zeic/coding.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace zeic;

namespace {

Channel erase_entries(int q_size, const std::set<std::pair<Symbol, Symbol>>& erased) {
    std::vector<ChannelOutput> t;
    for (Symbol x = 0; x < q_size; ++x)
        for (Symbol y = 0; y < q_size; ++y)
            t.push_back(erased.count({x, y}) ? ChannelOutput::erasure()
                                             : ChannelOutput::pair(x, y));
    return Channel(q_size, q_size, std::move(t));
}

// n = 1 code over [2] with identity encoders and per-symbol decoders.
Code identity_code_q2(const std::map<OutputWord, int>& dec1, const std::map<OutputWord, int>& dec2) {
    Code c;
    c.m1 = c.m2 = 2;
    c.n = 1;
    c.enc1 = {{0}, {1}};
    c.enc2 = {{0}, {1}};
    c.dec1 = dec1;
    c.dec2 = dec2;
    return c;
}

const std::map<OutputWord, int> kSymbolDecoder = {{{0}, 0}, {{1}, 1}};

// Independent oracle: enumerate the four message pairs by hand against the
// channel table and count joint successes.
double enumerate_success_q2(const Channel& w, const Code& c) {
    int good = 0;
    for (int m1 = 0; m1 < 2; ++m1)
        for (int m2 = 0; m2 < 2; ++m2) {
            const ChannelOutput e = apply(w, c.enc1[m1][0], c.enc2[m2][0]);
            const OutputWord o1{e.erased ? kErased : e.a};
            const OutputWord o2{e.erased ? kErased : e.b};
            const auto d1 = c.dec1.find(o1);
            const auto d2 = c.dec2.find(o2);
            if (d1 != c.dec1.end() && d1->second == m1 && d2 != c.dec2.end() && d2->second == m2)
                ++good;
        }
    return good / 4.0;
}

TEST(SuccessProbability, IdentityChannelPerfectCode) {
    const Code c = identity_code_q2(kSymbolDecoder, kSymbolDecoder);
    EXPECT_DOUBLE_EQ(success_probability(Channel::identity(2), c), 1.0);
}

TEST(SuccessProbability, MinmaxIdentityCode) {
    // Terminal 1 sees max(x,y) and misdecodes only at (m1,m2) = (0,1);
    // (1,0) delivers (1,0) and both terminals are correct, so 3/4 succeed.
    const Code c = identity_code_q2(kSymbolDecoder, kSymbolDecoder);
    const Channel w = builtin("minmax");
    const double expected = enumerate_success_q2(w, c);
    EXPECT_DOUBLE_EQ(expected, 0.75);
    EXPECT_DOUBLE_EQ(success_probability(w, c), expected);
}

TEST(SuccessProbability, ErasureAwareDecoder) {
    // Erasing only (1,1): mapping the erasure to message 1 decodes perfectly.
    const std::map<OutputWord, int> dec = {{{0}, 0}, {{1}, 1}, {{kErased}, 1}};
    const Code c = identity_code_q2(dec, dec);
    const Channel w = erase_entries(2, {{1, 1}});
    EXPECT_DOUBLE_EQ(success_probability(w, c), 1.0);
}

TEST(SuccessProbability, UndefinedOutputCountsAsFailure) {
    const Code c = identity_code_q2(kSymbolDecoder, kSymbolDecoder);
    const Channel w = erase_entries(2, {{1, 1}});
    EXPECT_DOUBLE_EQ(success_probability(w, c), 0.75);
}

TEST(SuccessProbability, BudgetError) {
    const Code c = identity_code_q2(kSymbolDecoder, kSymbolDecoder);
    EXPECT_THROW(success_probability(Channel::identity(2), c, 3), BudgetError);
}

TEST(IsZeroError, IdentityFullSquare) {
    const Channel w = Channel::identity(2);
    const CodebookPair p{{{0}, {1}}, {{0}, {1}}};
    EXPECT_TRUE(is_zero_error(w, p));
}

TEST(IsZeroError, MinmaxFullSquareFails) {
    const Channel w = builtin("minmax");
    const CodebookPair p{{{0}, {1}}, {{0}, {1}}};
    EXPECT_FALSE(is_zero_error(w, p));
    const auto witness = find_collision(w, p);
    ASSERT_TRUE(witness.has_value());
    // The witness must be a genuine collision: same output at the named
    // terminal, different input word for that terminal.
    const auto [o1a, o2a] = apply_block(w, witness->x, witness->y);
    const auto [o1b, o2b] = apply_block(w, witness->x2, witness->y2);
    if (witness->terminal == 1) {
        EXPECT_EQ(o1a, o1b);
        EXPECT_NE(witness->x, witness->x2);
    } else {
        EXPECT_EQ(o2a, o2b);
        EXPECT_NE(witness->y, witness->y2);
    }
}

TEST(IsZeroError, MinmaxOneSidedWorks) {
    const Channel w = builtin("minmax");
    const CodebookPair p{{{0}, {1}}, {{0}}};
    EXPECT_TRUE(is_zero_error(w, p));
}

TEST(IsZeroError, ErasurePositionIsInformative) {
    const Channel w = erase_entries(2, {{1, 1}});
    const CodebookPair p{{{0}, {1}}, {{0}, {1}}};
    EXPECT_TRUE(is_zero_error(w, p));
}

TEST(IsZeroError, DecoderExistenceEquivalence) {
    // is_zero_error(W, pair) iff explicit first-seen decoders reach
    // success probability 1 on the induced uncoded code.
    for (std::uint32_t mask = 0; mask < 16; ++mask) {
        std::set<std::pair<Symbol, Symbol>> erased;
        for (int bit = 0; bit < 4; ++bit)
            if (mask & (1u << bit)) erased.insert({bit / 2, bit % 2});
        const Channel w = erase_entries(2, erased);
        for (std::uint32_t amask = 1; amask < 4; ++amask)
            for (std::uint32_t bmask = 1; bmask < 4; ++bmask) {
                CodebookPair p;
                for (int i = 0; i < 2; ++i) {
                    if (amask & (1u << i)) p.a.push_back({i});
                    if (bmask & (1u << i)) p.b.push_back({i});
                }
                const Code c = code_from_pair(w, p);
                const bool zero_error = is_zero_error(w, p);
                const bool perfect = success_probability(w, c) == 1.0;
                EXPECT_EQ(zero_error, perfect);
            }
    }
}

TEST(IsZeroError, Monotonicity) {
    // Adding a codeword can never repair a collision.
    Rng rng(31);
    int checked = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const Channel w = sample_erasure_identity(2, 0.4, rep);
        CodebookPair p;
        std::set<Word> used_a, used_b;
        for (int i = 0; i < 2; ++i) {
            Word wa = {static_cast<Symbol>(rng.next_below(2)), static_cast<Symbol>(rng.next_below(2))};
            Word wb = {static_cast<Symbol>(rng.next_below(2)), static_cast<Symbol>(rng.next_below(2))};
            used_a.insert(wa);
            used_b.insert(wb);
        }
        p.a.assign(used_a.begin(), used_a.end());
        p.b.assign(used_b.begin(), used_b.end());
        if (is_zero_error(w, p)) continue;
        ++checked;
        for (std::uint64_t idx = 0; idx < 4; ++idx) {
            CodebookPair bigger = p;
            const Word extra = word_from_index(idx, 2, 2);
            bigger.a.push_back(extra);
            EXPECT_FALSE(is_zero_error(w, bigger));
        }
    }
    EXPECT_GT(checked, 0);
}

TEST(ExactRate, IdentityQ2) {
    const ExactRateResult r = exact_zero_error_sum_rate(Channel::identity(2), 1);
    EXPECT_DOUBLE_EQ(r.rate.sum, 2.0);
    EXPECT_EQ(r.witness.a.size(), 2u);
    EXPECT_EQ(r.witness.b.size(), 2u);
}

TEST(ExactRate, Minmax) {
    const ExactRateResult r = exact_zero_error_sum_rate(builtin("minmax"), 1);
    EXPECT_DOUBLE_EQ(r.rate.sum, 1.0);
    EXPECT_TRUE(is_zero_error(builtin("minmax"), r.witness));
}

TEST(ExactRate, ErasureInformative) {
    const Channel w = erase_entries(2, {{1, 1}});
    const ExactRateResult r = exact_zero_error_sum_rate(w, 1);
    EXPECT_DOUBLE_EQ(r.rate.sum, 2.0);
}

TEST(ExactRate, AllErased) {
    const Channel w = erase_entries(2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    const ExactRateResult r = exact_zero_error_sum_rate(w, 1);
    EXPECT_DOUBLE_EQ(r.rate.sum, 0.0);
    EXPECT_EQ(r.witness.a.size(), 1u);
    EXPECT_EQ(r.witness.b.size(), 1u);
}

TEST(ExactRate, RatePointInvariant) {
    const ExactRateResult r = exact_zero_error_sum_rate(builtin("minmax"), 1);
    EXPECT_DOUBLE_EQ(r.rate.sum, r.rate.r1 + r.rate.r2);
}

TEST(ExactRate, BudgetError) {
    EXPECT_THROW(exact_zero_error_sum_rate(Channel::identity(2), 5), BudgetError);
    EXPECT_THROW(exact_zero_error_sum_rate(Channel::identity(16), 2, 16), BudgetError);
}

TEST(ExactRate, ExhaustivenessAgainstBruteForce) {
    // Every (A, B) pair of subsets, every Q = 2 erasure/identity channel,
    // n in {1, 2}: the oracle's product is the true maximum.
    for (int n = 1; n <= 2; ++n) {
        const int nwords = n == 1 ? 2 : 4;
        std::vector<Word> words;
        for (int i = 0; i < nwords; ++i) words.push_back(word_from_index(i, 2, n));
        for (std::uint32_t mask = 0; mask < 16; ++mask) {
            std::set<std::pair<Symbol, Symbol>> erased;
            for (int bit = 0; bit < 4; ++bit)
                if (mask & (1u << bit)) erased.insert({bit / 2, bit % 2});
            const Channel w = erase_entries(2, erased);

            std::uint64_t best = 0;
            for (std::uint32_t amask = 1; amask < (1u << nwords); ++amask)
                for (std::uint32_t bmask = 1; bmask < (1u << nwords); ++bmask) {
                    CodebookPair p;
                    for (int i = 0; i < nwords; ++i) {
                        if (amask & (1u << i)) p.a.push_back(words[i]);
                        if (bmask & (1u << i)) p.b.push_back(words[i]);
                    }
                    if (is_zero_error(w, p))
                        best = std::max(best, static_cast<std::uint64_t>(p.a.size()) * p.b.size());
                }

            const ExactRateResult r = exact_zero_error_sum_rate(w, n);
            EXPECT_TRUE(is_zero_error(w, r.witness));
            const std::uint64_t got = r.witness.a.size() * r.witness.b.size();
            EXPECT_EQ(got, best) << "channel mask " << mask << " n " << n;
        }
    }
}

TEST(TimeShare, PerfectCodeKeepsEverything) {
    const Code c = identity_code_q2(kSymbolDecoder, kSymbolDecoder);
    const TimeShareResult r = time_share(Channel::identity(2), c);
    EXPECT_EQ(r.kept_messages.size(), 2u);
    EXPECT_DOUBLE_EQ(r.measured_error, 0.0);
    EXPECT_DOUBLE_EQ(r.sum_rate, 1.0); // R1 = 1, the fixed side contributes 0
    EXPECT_TRUE(is_zero_error(Channel::identity(2), r.pair));
}

TEST(TimeShare, MinmaxIdentityCode) {
    // Fixing m* = 0 keeps S = {0, 1}: both (0,0) and (1,0) decode at both
    // terminals, giving the one-sided rate-1 zero-error pair.
    const Code c = identity_code_q2(kSymbolDecoder, kSymbolDecoder);
    const Channel w = builtin("minmax");
    const TimeShareResult r = time_share(w, c);
    EXPECT_DOUBLE_EQ(r.measured_error, 0.25);
    EXPECT_EQ(r.fixed_message, 0);
    EXPECT_EQ(r.kept_messages.size(), 2u);
    EXPECT_DOUBLE_EQ(r.sum_rate, 1.0);
    EXPECT_TRUE(is_zero_error(w, r.pair));
    EXPECT_GE(r.sum_rate, 1.0 + std::log2(1.0 - r.measured_error));
}

TEST(TimeShare, FailsWhenNothingDecodes) {
    Code c = identity_code_q2({}, {});
    EXPECT_THROW(time_share(Channel::identity(2), c), ConstructionError);
}

TEST(TimeShare, SwapsRolesWhenR2Larger) {
    // M1 = 1, M2 = 2 on the identity channel: user 2 carries the rate.
    Code c;
    c.m1 = 1;
    c.m2 = 2;
    c.n = 1;
    c.enc1 = {{0}};
    c.enc2 = {{0}, {1}};
    c.dec1 = {{{0}, 0}};
    c.dec2 = kSymbolDecoder;
    const TimeShareResult r = time_share(Channel::identity(2), c);
    EXPECT_TRUE(r.roles_swapped);
    EXPECT_EQ(r.pair.a.size(), 1u);
    EXPECT_EQ(r.pair.b.size(), 2u);
    EXPECT_DOUBLE_EQ(r.sum_rate, 1.0);
}

TEST(TimeShare, Lemma1Inequality) {
    // sum rate >= (R1+R2)/2 + log2(1-eps)/n on every instance that builds.
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Channel w = sample_erasure_identity(2, 0.35, seed);
        std::map<OutputWord, int> dec = {{{0}, 0}, {{1}, 1}, {{kErased}, 0}};
        const Code c = identity_code_q2(dec, dec);
        const double eps = 1.0 - success_probability(w, c);
        if (eps >= 1.0) continue;
        const TimeShareResult r = time_share(w, c);
        const double claim = (1.0 + 1.0) / 2.0 + std::log2(1.0 - eps);
        EXPECT_GE(r.sum_rate + 1e-12, claim) << "seed " << seed;
        EXPECT_TRUE(is_zero_error(w, r.pair));
    }
}

TEST(CodeFormat, RoundTrip) {
    Code c;
    c.m1 = 2;
    c.m2 = 3;
    c.n = 2;
    c.enc1 = {{0, 1}, {1, 0}};
    c.enc2 = {{0, 0}, {1, 1}, {2, 2}};
    std::stringstream ss;
    write_code(ss, c);
    const Code back = read_code(ss);
    EXPECT_EQ(back.m1, c.m1);
    EXPECT_EQ(back.m2, c.m2);
    EXPECT_EQ(back.n, c.n);
    EXPECT_EQ(back.enc1, c.enc1);
    EXPECT_EQ(back.enc2, c.enc2);
}

TEST(CodeFormat, Malformed) {
    {
        std::stringstream ss("M1 2\nM2 2\n");
        EXPECT_THROW(read_code(ss), ParseError);
    }
    {
        std::stringstream ss("M1 2\nM2 2\nN 1\nE1 0 0 1\n");
        EXPECT_THROW(read_code(ss), ParseError);
    }
    {
        std::stringstream ss("M1 1\nM2 1\nN 1\nE1 0 0\nE2 5 0\n");
        EXPECT_THROW(read_code(ss), ParseError);
    }
}

} // namespace
