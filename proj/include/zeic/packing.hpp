#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "zeic/bigmath.hpp"
#include "zeic/channel.hpp"
#include "zeic/coding.hpp"
#include "zeic/errors.hpp"
#include "zeic/set_family.hpp"

namespace zeic {

inline int hamming_distance(const Word& x, const Word& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("hamming_distance: mismatched lengths");
    int d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) d += x[i] != y[i];
    return d;
}

// Greedy scan in the given order: a word is kept iff its distance to every
// kept word strictly exceeds floor(dn). The output is a maximal independent
// set of the distance-<=floor(dn) graph restricted to the input. d = 0
// degenerates to dedup.
inline std::vector<Word> greedy_pack(std::span<const Word> words, double d) {
    if (!(d >= 0.0 && d <= 1.0))
        throw std::invalid_argument("greedy_pack: d must lie in [0, 1]");
    std::vector<Word> kept;
    if (words.empty()) return kept;
    const int threshold = floor_count(d, static_cast<int>(words.front().size()));
    for (const Word& w : words) {
        bool ok = true;
        for (const Word& k : kept)
            if (hamming_distance(w, k) <= threshold) {
                ok = false;
                break;
            }
        if (ok) kept.push_back(w);
    }
    return kept;
}

// Size guarantees for packing a fully enumerated family of `total` words:
// the max-degree bound |S| / (C(n, floor(dn)) Q^{floor(dn)} + 1) the greedy
// scan always meets, and the cruder |S| / (2^n Q^{dn}) form quoted with the
// packing lemma. Reported in log2.
struct PackGuarantee {
    double log2_greedy_floor = 0.0;
    double log2_lemma_floor = 0.0;
};

inline PackGuarantee pack_guarantees(const cpp_int& total, int n, int q_size, double d) {
    PackGuarantee g;
    const int t = floor_count(d, n);
    const cpp_int degree = binomial(n, t) * pow_int(q_size, t) + 1;
    g.log2_greedy_floor = log2_big(total) - log2_big(degree);
    g.log2_lemma_floor =
        log2_big(total) - n - d * n * std::log2(static_cast<double>(q_size));
    return g;
}

// Zero-error code extracted from a gamma-uniform family pair: subsets with
// pairwise distance above floor(dn) on both sides plus the provenance
// needed to rebuild them.
struct PackedCode {
    std::vector<Word> a;
    std::vector<Word> b;
    int n = 0;
    int q_size = 0;
    double d = 0.0;
    int distance_threshold = 0;
    std::uint64_t seed = 0;
    int drawn_a = 0;
    int drawn_b = 0;
    std::string family_a_desc;
    std::string family_b_desc;

    double rate_a() const { return std::log2(static_cast<double>(a.size())) / n; }
    double rate_b() const { return std::log2(static_cast<double>(b.size())) / n; }
    double sum_rate() const { return rate_a() + rate_b(); }
};

namespace detail {

inline std::vector<Word> draw_side(const SetFamily& fam, std::uint64_t cap, Rng& rng) {
    if (fam.cardinality() <= cap) return fam.materialize(cap);
    std::vector<Word> out;
    out.reserve(cap);
    for (std::uint64_t i = 0; i < cap; ++i) out.push_back(fam.sample(rng));
    return out;
}

} // namespace detail

// Builds the packed code. d defaults to 2 eps (1+gamma) + slack so the
// uniform => diverse gate d > (1+gamma)(2 eps) holds; d_override bypasses
// the derivation for experiments. Families larger than sample_cap are
// subsampled with the seeded sampler (side A uses stream 0 of the seed,
// side B stream 1); a subsample of a valid family still packs into a valid
// zero-error code, only smaller.
inline PackedCode build_zero_error_code(const SetFamily& a, const SetFamily& b, double gamma,
                                        double eps, double slack, std::uint64_t sample_cap,
                                        std::uint64_t seed,
                                        std::optional<double> d_override = std::nullopt) {
    if (a.length() != b.length() || a.q_size() != b.q_size())
        throw std::invalid_argument("build_zero_error_code: mismatched families");
    if (!d_override && !(slack > 0.0))
        throw std::invalid_argument("build_zero_error_code: slack must be positive");
    PackedCode code;
    code.n = a.length();
    code.q_size = a.q_size();
    code.d = d_override ? *d_override : 2.0 * eps * (1.0 + gamma) + slack;
    if (!(code.d >= 0.0 && code.d <= 1.0))
        throw std::invalid_argument("build_zero_error_code: derived d outside [0, 1]");
    code.distance_threshold = floor_count(code.d, code.n);
    code.seed = seed;
    code.family_a_desc = a.descriptor();
    code.family_b_desc = b.descriptor();

    Rng rng_a(derive_seed(seed, 0));
    Rng rng_b(derive_seed(seed, 1));
    const std::vector<Word> drawn_a = detail::draw_side(a, sample_cap, rng_a);
    const std::vector<Word> drawn_b = detail::draw_side(b, sample_cap, rng_b);
    code.drawn_a = static_cast<int>(drawn_a.size());
    code.drawn_b = static_cast<int>(drawn_b.size());
    code.a = greedy_pack(drawn_a, code.d);
    code.b = greedy_pack(drawn_b, code.d);
    if (code.a.empty() || code.b.empty()) {
        std::ostringstream os;
        os << "build_zero_error_code: empty pack (drawn_a=" << code.drawn_a
           << ", drawn_b=" << code.drawn_b << ", d=" << code.d
           << ", threshold=" << code.distance_threshold << ")";
        throw ConstructionError(os.str());
    }
    return code;
}

struct VerifyVerdict {
    bool ok = true;
    std::optional<Collision> witness;
};

// Zero-error check of the packed code against a concrete erasure/identity
// channel; a failure carries the colliding 4-tuple.
inline VerifyVerdict verify_zero_error_against(const PackedCode& code, const Channel& w) {
    if (!w.is_erasure_identity())
        throw std::invalid_argument("verify_zero_error_against: channel is not erasure/identity");
    if (!code.a.empty() && static_cast<int>(code.a.front().size()) != code.n)
        throw std::invalid_argument("verify_zero_error_against: inconsistent code");
    VerifyVerdict v;
    CodebookPair pair{code.a, code.b};
    v.witness = find_collision(w, pair);
    v.ok = !v.witness.has_value();
    return v;
}

// --- packed code serialization ------------------------------------------------
//
//   PACKEDCODE
//   Q <int>
//   N <int>
//   SEED <u64>
//   D <real>
//   THRESHOLD <int>
//   FAMILY ...            (A provenance)
//   FAMILY ...            (B provenance)
//   A <count> / word lines
//   B <count> / word lines

inline void write_packed_code(std::ostream& os, const PackedCode& code) {
    os << "PACKEDCODE\n";
    os << "Q " << code.q_size << "\n";
    os << "N " << code.n << "\n";
    os << "SEED " << code.seed << "\n";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", code.d);
    os << "D " << buf << "\n";
    os << "THRESHOLD " << code.distance_threshold << "\n";
    os << code.family_a_desc << "\n";
    os << code.family_b_desc << "\n";
    os << "A " << code.a.size() << "\n";
    for (const Word& w : code.a) os << word_to_string(w) << "\n";
    os << "B " << code.b.size() << "\n";
    for (const Word& w : code.b) os << word_to_string(w) << "\n";
}

inline PackedCode read_packed_code(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != "PACKEDCODE")
        throw ParseError("packed code: missing PACKEDCODE header");
    PackedCode code;
    auto expect_kv = [&](const std::string& key) -> std::string {
        if (!std::getline(is, line)) throw ParseError("packed code: truncated at " + key);
        std::istringstream ls(line);
        std::string tag, value;
        if (!(ls >> tag >> value) || tag != key)
            throw ParseError("packed code: expected '" + key + "', got '" + line + "'");
        return value;
    };
    code.q_size = std::stoi(expect_kv("Q"));
    code.n = std::stoi(expect_kv("N"));
    code.seed = std::stoull(expect_kv("SEED"));
    code.d = std::stod(expect_kv("D"));
    code.distance_threshold = std::stoi(expect_kv("THRESHOLD"));
    code.family_a_desc = read_family(is)->descriptor();
    code.family_b_desc = read_family(is)->descriptor();
    auto read_words = [&](const std::string& key) {
        const std::size_t count = std::stoull(expect_kv(key));
        std::vector<Word> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            if (!std::getline(is, line)) throw ParseError("packed code: truncated word list");
            out.push_back(parse_word(line));
        }
        return out;
    };
    code.a = read_words("A");
    code.b = read_words("B");
    code.drawn_a = static_cast<int>(code.a.size());
    code.drawn_b = static_cast<int>(code.b.size());
    return code;
}

} // namespace zeic
