#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "zeic/bigmath.hpp"
#include "zeic/channel.hpp"
#include "zeic/coding.hpp"
#include "zeic/errors.hpp"

namespace zeic {

// Bipartite conflict graph of a single-letter erasure/identity channel:
// edge (x, y) iff the entry is erased. Rows are bitsets over y.
struct ConflictGraph {
    int q_size = 0;
    std::vector<std::uint32_t> rows; // rows[x] bit y set iff edge (x, y)

    bool edge(int x, int y) const { return (rows[x] >> y) & 1u; }
};

inline ConflictGraph build_conflict_graph(const Channel& w) {
    if (!w.is_erasure_identity())
        throw std::invalid_argument("build_conflict_graph: channel is not erasure/identity");
    if (w.q_size() > 32)
        throw BudgetError("build_conflict_graph: Q exceeds the bitset width");
    ConflictGraph g;
    g.q_size = w.q_size();
    g.rows.assign(w.q_size(), 0);
    for (Symbol x = 0; x < w.q_size(); ++x)
        for (Symbol y = 0; y < w.q_size(); ++y)
            if (w.entry(x, y).erased) g.rows[x] |= 1u << y;
    return g;
}

struct Bpis {
    std::vector<int> a;
    std::vector<int> b;
    std::uint64_t size = 0; // |A| * |B|; 0 when either side is empty
};

namespace detail {

struct Rectangle {
    std::uint32_t left = 0;
    std::uint32_t right = 0;
    std::uint64_t size = 0;
};

// Largest |A|*|B| rectangle with no conflict edge inside A x B.
// DFS over left vertices in increasing order, include branch first; the
// candidate B shrinks to the common non-neighborhood, which is the optimal
// B for any fixed A. Bound: (|A| + remaining) * |candidates| prunes.
inline void rectangle_dfs(const std::vector<std::uint32_t>& conflict, int idx, int left_n,
                          std::uint32_t chosen, std::uint32_t candidates, Rectangle& best) {
    const int remaining = left_n - idx;
    const std::uint64_t ub =
        static_cast<std::uint64_t>(std::popcount(chosen) + remaining) * std::popcount(candidates);
    if (ub <= best.size) return;
    if (idx == left_n) {
        const std::uint64_t size =
            static_cast<std::uint64_t>(std::popcount(chosen)) * std::popcount(candidates);
        if (chosen != 0 && candidates != 0 && size > best.size)
            best = {chosen, candidates, size};
        return;
    }
    rectangle_dfs(conflict, idx + 1, left_n, chosen | (1u << idx),
                  candidates & ~conflict[idx], best);
    rectangle_dfs(conflict, idx + 1, left_n, chosen, candidates, best);
}

inline Rectangle max_edgeless_rectangle(const std::vector<std::uint32_t>& conflict, int left_n,
                                        int right_n) {
    Rectangle best;
    const std::uint32_t full = right_n == 32 ? ~0u : ((1u << right_n) - 1);
    rectangle_dfs(conflict, 0, left_n, 0, full, best);
    return best;
}

inline std::vector<int> mask_to_indices(std::uint32_t mask) {
    std::vector<int> out;
    while (mask) {
        out.push_back(std::countr_zero(mask));
        mask &= mask - 1;
    }
    return out;
}

} // namespace detail

inline constexpr int kMaxBpisExactQ = 24;

// Exact maximum BPIS of the single-letter conflict graph.
// The empty-side convention gives the complete graph size 0.
inline Bpis max_bpis(const ConflictGraph& g) {
    if (g.q_size > kMaxBpisExactQ)
        throw BudgetError("max_bpis: Q exceeds the exact-search budget");
    const detail::Rectangle r =
        detail::max_edgeless_rectangle(g.rows, g.q_size, g.q_size);
    return Bpis{detail::mask_to_indices(r.left), detail::mask_to_indices(r.right), r.size};
}

// Product witness (A^n, B^n), kept intensionally as the n = 1 sides plus
// the exponent.
struct BlocklengthBpis {
    cpp_int size;
    Bpis base;
    int exponent = 1;
};

// s is the max BPIS size of G_{W,1} iff s^n is the max BPIS size of G_{W,n}.
inline BlocklengthBpis max_bpis_blocklength(const ConflictGraph& g, int n) {
    if (n < 1) throw std::invalid_argument("max_bpis_blocklength: n must be >= 1");
    BlocklengthBpis out;
    out.base = max_bpis(g);
    out.exponent = n;
    out.size = pow_int(cpp_int(out.base.size), n);
    return out;
}

struct DirectBpis {
    CodebookPair pair;
    std::uint64_t size = 0;
};

// Validation oracle for the product law: the blocklength-n conflict graph
// on [Q]^n x [Q]^n is built explicitly (edge iff any coordinate erased) and
// searched exactly. Budget: Q^n <= 16.
inline DirectBpis max_bpis_direct(const Channel& w, int n, std::uint64_t budget_words = 16) {
    if (!w.is_erasure_identity())
        throw std::invalid_argument("max_bpis_direct: channel is not erasure/identity");
    const std::uint64_t nw = word_count(w.q_size(), n);
    if (nw > budget_words || nw > 32)
        throw BudgetError("max_bpis_direct: Q^n exceeds the search budget");
    const int nwords = static_cast<int>(nw);

    std::vector<Word> words(nwords);
    for (int i = 0; i < nwords; ++i) words[i] = word_from_index(i, w.q_size(), n);

    std::vector<std::uint32_t> conflict(nwords, 0);
    for (int i = 0; i < nwords; ++i)
        for (int j = 0; j < nwords; ++j) {
            bool edge = false;
            for (int k = 0; k < n && !edge; ++k)
                edge = w.entry(words[i][k], words[j][k]).erased;
            if (edge) conflict[i] |= 1u << j;
        }

    const detail::Rectangle r = detail::max_edgeless_rectangle(conflict, nwords, nwords);
    DirectBpis out;
    out.size = r.size;
    for (int i : detail::mask_to_indices(r.left)) out.pair.a.push_back(words[i]);
    for (int i : detail::mask_to_indices(r.right)) out.pair.b.push_back(words[i]);
    return out;
}

// Displayed lower bound on the BPIS size forced by a zero-error sum rate r:
//   2^{rn} - 2^{rn/2} ((1 + 2^q)^n - 2^{nq})
// May be negative, in which case it is vacuous.
inline double prop4_min_bpis_size(double r, int n, double q) {
    const double rn = r * static_cast<double>(n);
    return std::pow(2.0, rn) -
           std::pow(2.0, rn / 2.0) *
               (std::pow(1.0 + std::pow(2.0, q), static_cast<double>(n)) -
                std::pow(2.0, static_cast<double>(n) * q));
}

// One Monte Carlo trial of the high-probability BPIS bound: sample a channel,
// take s = max BPIS size of its conflict graph, and compare the normalized
// log rate against q + log2(3/eps). By the product law the per-blocklength
// value (1/n) log s^n equals log2 s, so the n = 1 number is reported.
// log2(0) is treated as -infinity and satisfies the bound vacuously.
struct Prop5Trial {
    std::uint64_t seed = 0;
    double q = 0.0;
    double eps = 0.0;
    int erased_count = 0;
    std::uint64_t bpis_size = 0;
    double log_rate = 0.0;
    double bound = 0.0;
    bool satisfied = false;
};

inline Prop5Trial prop5_trial(int q_size, double eps, std::uint64_t seed) {
    if (!(eps > 0.0))
        throw std::invalid_argument("prop5_trial: eps must be positive");
    Prop5Trial t;
    t.seed = seed;
    t.q = std::log2(static_cast<double>(q_size));
    t.eps = eps;
    const Channel w = sample_erasure_identity(q_size, eps, seed);
    t.erased_count = w.erased_count();
    const Bpis b = max_bpis(build_conflict_graph(w));
    t.bpis_size = b.size;
    t.log_rate = b.size == 0 ? -std::numeric_limits<double>::infinity()
                             : std::log2(static_cast<double>(b.size));
    t.bound = t.q + std::log2(3.0 / eps);
    t.satisfied = t.log_rate <= t.bound;
    return t;
}

// Diagnostics behind the 3/4-probability argument: a BPIS of size
// s >= (2Q+2)/eps exists with probability at most 2^{2Q - eps*s}.
struct Prop5Diagnostic {
    double size_threshold = 0.0;
    double log2_failure_probability = 0.0;
};

inline Prop5Diagnostic prop5_diagnostic(int q_size, double eps) {
    if (!(eps > 0.0))
        throw std::invalid_argument("prop5_diagnostic: eps must be positive");
    Prop5Diagnostic d;
    d.size_threshold = (2.0 * q_size + 2.0) / eps;
    d.log2_failure_probability = 2.0 * q_size - eps * d.size_threshold;
    return d;
}

} // namespace zeic
