#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "zeic/channel.hpp"
#include "zeic/errors.hpp"

namespace zeic {

struct RatePoint {
    double r1 = 0.0;
    double r2 = 0.0;
    double sum = 0.0;

    static RatePoint from_counts(std::uint64_t m1, std::uint64_t m2, int n) {
        RatePoint r;
        r.r1 = std::log2(static_cast<double>(m1)) / n;
        r.r2 = std::log2(static_cast<double>(m2)) / n;
        r.sum = r.r1 + r.r2;
        return r;
    }
};

// Uncoded code: the messages are the codewords themselves.
struct CodebookPair {
    std::vector<Word> a;
    std::vector<Word> b;
};

inline double pair_sum_rate(const CodebookPair& p) {
    const int n = static_cast<int>(p.a.at(0).size());
    return (std::log2(static_cast<double>(p.a.size())) +
            std::log2(static_cast<double>(p.b.size()))) / n;
}

// Explicit code: encoder tables plus finite decoder maps. Outputs missing
// from a decoder map count as decoding failure.
struct Code {
    int m1 = 0;
    int m2 = 0;
    int n = 0;
    std::vector<Word> enc1;
    std::vector<Word> enc2;
    std::map<OutputWord, int> dec1;
    std::map<OutputWord, int> dec2;
};

inline constexpr std::uint64_t kDefaultEnumerationBudget = 1u << 20;

// Exact success probability: the fraction of message pairs (m1, m2) for
// which both terminals decode correctly. Exhaustive, no sampling.
inline double success_probability(const Channel& w, const Code& code,
                                  std::uint64_t budget = kDefaultEnumerationBudget) {
    const std::uint64_t total = static_cast<std::uint64_t>(code.m1) * code.m2;
    if (total > budget)
        throw BudgetError("success_probability: M1*M2 exceeds enumeration budget");
    std::uint64_t good = 0;
    for (int m1 = 0; m1 < code.m1; ++m1)
        for (int m2 = 0; m2 < code.m2; ++m2) {
            const auto [o1, o2] = apply_block(w, code.enc1[m1], code.enc2[m2]);
            const auto d1 = code.dec1.find(o1);
            if (d1 == code.dec1.end() || d1->second != m1) continue;
            const auto d2 = code.dec2.find(o2);
            if (d2 == code.dec2.end() || d2->second != m2) continue;
            ++good;
        }
    return static_cast<double>(good) / static_cast<double>(total);
}

// Colliding 4-tuple (x, y, x', y') witnessing a zero-error failure.
struct Collision {
    Word x, y, x2, y2;
    int terminal = 0; // 1 or 2
};

// Zero-error test for an uncoded pair: every pair of inputs producing the
// same terminal-1 output must share x, and the same for terminal 2 and y.
// Outputs are grouped by value; the stored first input per group supplies
// the witness on failure.
inline std::optional<Collision> find_collision(const Channel& w, const CodebookPair& pair) {
    std::map<OutputWord, std::pair<const Word*, const Word*>> seen1, seen2;
    for (const Word& x : pair.a)
        for (const Word& y : pair.b) {
            const auto [o1, o2] = apply_block(w, x, y);
            auto [it1, fresh1] = seen1.try_emplace(o1, &x, &y);
            if (!fresh1 && *it1->second.first != x)
                return Collision{*it1->second.first, *it1->second.second, x, y, 1};
            auto [it2, fresh2] = seen2.try_emplace(o2, &x, &y);
            if (!fresh2 && *it2->second.second != y)
                return Collision{*it2->second.first, *it2->second.second, x, y, 2};
        }
    return std::nullopt;
}

inline bool is_zero_error(const Channel& w, const CodebookPair& pair) {
    return !find_collision(w, pair).has_value();
}

// Builds the explicit code induced by an uncoded pair, with decoders that
// map each reachable output to the first message producing it. If the pair
// is zero-error these decoders are correct everywhere.
inline Code code_from_pair(const Channel& w, const CodebookPair& pair) {
    Code c;
    c.m1 = static_cast<int>(pair.a.size());
    c.m2 = static_cast<int>(pair.b.size());
    c.n = static_cast<int>(pair.a.at(0).size());
    c.enc1 = pair.a;
    c.enc2 = pair.b;
    for (int i = 0; i < c.m1; ++i)
        for (int j = 0; j < c.m2; ++j) {
            const auto [o1, o2] = apply_block(w, pair.a[i], pair.b[j]);
            c.dec1.try_emplace(o1, i);
            c.dec2.try_emplace(o2, j);
        }
    return c;
}

struct ExactRateResult {
    RatePoint rate;
    CodebookPair witness;
};

namespace detail {

// Encodes an output word over [0,OUTQ) u {erased} as a base-(OUTQ+1) integer.
inline std::uint64_t encode_output(const OutputWord& o, int out_q) {
    std::uint64_t v = 0;
    for (Symbol s : o) v = v * static_cast<std::uint64_t>(out_q + 1) + static_cast<std::uint64_t>(s == kErased ? out_q : s);
    return v;
}

// Exact maximum independent set on <= 32 vertices, include-first DFS in
// increasing vertex order so the first maximum found is reproducible.
inline void max_independent_set(const std::vector<std::uint32_t>& adj, std::uint32_t candidates,
                                std::uint32_t chosen, std::uint32_t& best) {
    if (candidates == 0) {
        if (std::popcount(chosen) > std::popcount(best)) best = chosen;
        return;
    }
    if (std::popcount(chosen) + std::popcount(candidates) <= std::popcount(best)) return;
    const int v = std::countr_zero(candidates);
    // include v
    max_independent_set(adj, candidates & ~(adj[v] | (1u << v)), chosen | (1u << v), best);
    // exclude v
    max_independent_set(adj, candidates & ~(1u << v), chosen, best);
}

} // namespace detail

// Brute-force zero-error sum-rate oracle for tiny instances (Q^n <= budget,
// intended 16). Enumerates A over subsets of [Q]^n in increasing bitmask
// order; for each A the maximal compatible B is found by exact
// branch-and-bound over the per-A conflict graph; the best |A||B| prunes.
// Ties keep the first witness found (smallest A mask, then the first
// maximum B from include-first DFS).
inline ExactRateResult exact_zero_error_sum_rate(const Channel& w, int n,
                                                 std::uint64_t budget_words = 16) {
    const std::uint64_t nw = word_count(w.q_size(), n);
    if (nw > budget_words || nw > 32)
        throw BudgetError("exact_zero_error_sum_rate: Q^n exceeds the search budget");
    const int nwords = static_cast<int>(nw);

    std::vector<Word> words(nwords);
    for (int i = 0; i < nwords; ++i) words[i] = word_from_index(i, w.q_size(), n);

    // out1[x][y], out2[x][y] as encoded integers
    std::vector<std::vector<std::uint64_t>> out1(nwords, std::vector<std::uint64_t>(nwords));
    std::vector<std::vector<std::uint64_t>> out2 = out1;
    for (int x = 0; x < nwords; ++x)
        for (int y = 0; y < nwords; ++y) {
            const auto [o1, o2] = apply_block(w, words[x], words[y]);
            out1[x][y] = detail::encode_output(o1, w.out_q_size());
            out2[x][y] = detail::encode_output(o2, w.out_q_size());
        }

    std::uint64_t best = 0;
    std::uint32_t best_a = 0, best_b = 0;
    std::vector<int> xs;
    xs.reserve(nwords);

    const std::uint32_t full = nwords == 32 ? ~0u : ((1u << nwords) - 1);
    for (std::uint32_t a_mask = 1; a_mask <= full; ++a_mask) {
        const int a_count = std::popcount(a_mask);
        if (static_cast<std::uint64_t>(a_count) * nwords <= best) continue;

        xs.clear();
        for (int x = 0; x < nwords; ++x)
            if (a_mask & (1u << x)) xs.push_back(x);

        // y is feasible iff the terminal-1 outputs across A are distinct.
        std::vector<int> feas;
        for (int y = 0; y < nwords; ++y) {
            bool ok = true;
            for (std::size_t i = 0; i < xs.size() && ok; ++i)
                for (std::size_t j = i + 1; j < xs.size() && ok; ++j)
                    if (out1[xs[i]][y] == out1[xs[j]][y]) ok = false;
            if (ok) feas.push_back(y);
        }
        if (static_cast<std::uint64_t>(a_count) * feas.size() <= best) continue;

        // Conflict between feasible y and y': a shared terminal-2 output, or
        // a shared terminal-1 output produced by different x.
        const int fcount = static_cast<int>(feas.size());
        std::vector<std::uint32_t> adj(fcount, 0);
        for (int i = 0; i < fcount; ++i)
            for (int j = i + 1; j < fcount; ++j) {
                bool conflict = false;
                for (std::size_t p = 0; p < xs.size() && !conflict; ++p)
                    for (std::size_t q = 0; q < xs.size() && !conflict; ++q) {
                        if (out2[xs[p]][feas[i]] == out2[xs[q]][feas[j]]) conflict = true;
                        else if (xs[p] != xs[q] && out1[xs[p]][feas[i]] == out1[xs[q]][feas[j]]) conflict = true;
                    }
                if (conflict) {
                    adj[i] |= 1u << j;
                    adj[j] |= 1u << i;
                }
            }

        std::uint32_t mis = 0;
        const std::uint32_t cand = fcount == 32 ? ~0u : ((1u << fcount) - 1);
        detail::max_independent_set(adj, cand, 0, mis);
        const std::uint64_t product = static_cast<std::uint64_t>(a_count) * std::popcount(mis);
        if (product > best) {
            best = product;
            best_a = a_mask;
            best_b = 0;
            for (int i = 0; i < fcount; ++i)
                if (mis & (1u << i)) best_b |= 1u << feas[i];
        }
    }

    ExactRateResult res;
    for (int i = 0; i < nwords; ++i) {
        if (best_a & (1u << i)) res.witness.a.push_back(words[i]);
        if (best_b & (1u << i)) res.witness.b.push_back(words[i]);
    }
    res.rate = RatePoint::from_counts(res.witness.a.size(), res.witness.b.size(), n);
    return res;
}

// Lemma-1-style time sharing: fix the lower-rate user's message m* and keep
// the subset S of the other user's messages that decode correctly against
// it. Scans m* in increasing order; the first maximal-|S| winner is kept.
struct TimeShareResult {
    CodebookPair pair;
    bool roles_swapped = false; // true when R2 > R1 and user 2 kept the rate
    int fixed_message = 0;
    std::vector<int> kept_messages;
    double measured_error = 0.0;
    double sum_rate = 0.0;
};

inline TimeShareResult time_share(const Channel& w, const Code& code) {
    TimeShareResult res;
    res.measured_error = 1.0 - success_probability(w, code);
    const double r1 = std::log2(static_cast<double>(code.m1)) / code.n;
    const double r2 = std::log2(static_cast<double>(code.m2)) / code.n;
    res.roles_swapped = r2 > r1;

    const int fixed_count = res.roles_swapped ? code.m1 : code.m2;
    const int free_count = res.roles_swapped ? code.m2 : code.m1;

    auto succeeds = [&](int m_free, int m_fixed) {
        const int m1 = res.roles_swapped ? m_fixed : m_free;
        const int m2 = res.roles_swapped ? m_free : m_fixed;
        const auto [o1, o2] = apply_block(w, code.enc1[m1], code.enc2[m2]);
        const auto d1 = code.dec1.find(o1);
        if (d1 == code.dec1.end() || d1->second != m1) return false;
        const auto d2 = code.dec2.find(o2);
        return d2 != code.dec2.end() && d2->second == m2;
    };

    std::vector<int> best_s;
    int best_fixed = -1;
    for (int mf = 0; mf < fixed_count; ++mf) {
        std::vector<int> s;
        for (int m = 0; m < free_count; ++m)
            if (succeeds(m, mf)) s.push_back(m);
        if (static_cast<int>(s.size()) > static_cast<int>(best_s.size())) {
            best_s = std::move(s);
            best_fixed = mf;
        }
    }
    if (best_fixed < 0 || best_s.empty())
        throw ConstructionError("time_share: no message of the fixed user decodes anywhere");

    res.fixed_message = best_fixed;
    res.kept_messages = best_s;

    std::set<Word> free_words, fixed_words;
    for (int m : best_s)
        free_words.insert(res.roles_swapped ? code.enc2[m] : code.enc1[m]);
    fixed_words.insert(res.roles_swapped ? code.enc1[best_fixed] : code.enc2[best_fixed]);

    if (res.roles_swapped) {
        res.pair.a.assign(fixed_words.begin(), fixed_words.end());
        res.pair.b.assign(free_words.begin(), free_words.end());
    } else {
        res.pair.a.assign(free_words.begin(), free_words.end());
        res.pair.b.assign(fixed_words.begin(), fixed_words.end());
    }
    res.sum_rate = pair_sum_rate(res.pair);
    return res;
}

// --- code text format -------------------------------------------------------
//
//   M1 <int>
//   M2 <int>
//   N <int>
//   E1 <m> <w_1> ... <w_n>
//   E2 <m> <w_1> ... <w_n>
//
// Decoders are not serialized; they are reconstructed against a channel.

inline void write_code(std::ostream& os, const Code& code) {
    os << "M1 " << code.m1 << "\n" << "M2 " << code.m2 << "\n" << "N " << code.n << "\n";
    for (int m = 0; m < code.m1; ++m) {
        os << "E1 " << m;
        for (Symbol s : code.enc1[m]) os << " " << s;
        os << "\n";
    }
    for (int m = 0; m < code.m2; ++m) {
        os << "E2 " << m;
        for (Symbol s : code.enc2[m]) os << " " << s;
        os << "\n";
    }
}

inline Code read_code(std::istream& is) {
    Code code;
    std::string line;
    int lineno = 0;
    bool saw_m1 = false, saw_m2 = false, saw_n = false;
    auto fail = [&](const std::string& what) {
        throw ParseError("code file line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "M1") {
            if (!(ls >> code.m1) || code.m1 < 1) fail("bad M1");
            code.enc1.assign(code.m1, {});
            saw_m1 = true;
        } else if (tag == "M2") {
            if (!(ls >> code.m2) || code.m2 < 1) fail("bad M2");
            code.enc2.assign(code.m2, {});
            saw_m2 = true;
        } else if (tag == "N") {
            if (!(ls >> code.n) || code.n < 1) fail("bad N");
            saw_n = true;
        } else if (tag == "E1" || tag == "E2") {
            if (!saw_m1 || !saw_m2 || !saw_n) fail("encoder line before header");
            int m;
            if (!(ls >> m)) fail("bad encoder line");
            Word wd;
            int s;
            while (ls >> s) wd.push_back(s);
            if (static_cast<int>(wd.size()) != code.n) fail("codeword length != N");
            auto& enc = tag == "E1" ? code.enc1 : code.enc2;
            if (m < 0 || m >= static_cast<int>(enc.size())) fail("message index out of range");
            enc[m] = std::move(wd);
        } else {
            fail("unknown tag '" + tag + "'");
        }
    }
    if (!saw_m1 || !saw_m2 || !saw_n) throw ParseError("code file: missing header lines");
    for (const Word& wd : code.enc1)
        if (static_cast<int>(wd.size()) != code.n) throw ParseError("code file: missing E1 line");
    for (const Word& wd : code.enc2)
        if (static_cast<int>(wd.size()) != code.n) throw ParseError("code file: missing E2 line");
    return code;
}

} // namespace zeic
