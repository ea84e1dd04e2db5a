#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zeic/bigmath.hpp"
#include "zeic/errors.hpp"
#include "zeic/rng.hpp"

namespace zeic {

// Alphabet element, 0-based: valid values are [0, Q).
using Symbol = int;

// Erasure marker in per-terminal output words. The erasure symbol is
// delivered to both terminals at once; there is no half-erased output.
inline constexpr Symbol kErased = -1;

// Length-n input word over [Q].
using Word = std::vector<Symbol>;

// Per-terminal view of a block output: entries in [0, OUTQ) or kErased.
using OutputWord = std::vector<Symbol>;

// Single-letter channel output: either a pair of symbols, one per terminal,
// or a joint erasure.
struct ChannelOutput {
    bool erased = false;
    Symbol a = kErased; // delivered to terminal 1
    Symbol b = kErased; // delivered to terminal 2

    static ChannelOutput pair(Symbol a, Symbol b) { return {false, a, b}; }
    static ChannelOutput erasure() { return {true, kErased, kErased}; }

    bool operator==(const ChannelOutput& o) const {
        if (erased != o.erased) return false;
        return erased || (a == o.a && b == o.b);
    }
};

// Deterministic 2-input/2-output single-letter channel: a Q x Q table of
// outputs, immutable after construction. The output alphabet may be larger
// than the input alphabet for named non-erasure channels (butterfly).
class Channel {
public:
    Channel(int q_size, int out_q_size, std::vector<ChannelOutput> table, std::string name = "")
        : q_(q_size), out_q_(out_q_size), table_(std::move(table)), name_(std::move(name)) {
        if (q_ < 2) throw std::invalid_argument("Channel: q_size must be >= 2");
        if (out_q_ < q_) throw std::invalid_argument("Channel: output alphabet smaller than input");
        if (table_.size() != static_cast<std::size_t>(q_) * q_)
            throw std::invalid_argument("Channel: table must have exactly Q^2 entries");
        for (const ChannelOutput& e : table_) {
            if (e.erased) continue;
            if (e.a < 0 || e.a >= out_q_ || e.b < 0 || e.b >= out_q_)
                throw std::invalid_argument("Channel: table entry outside output alphabet");
        }
    }

    static Channel identity(int q_size) {
        std::vector<ChannelOutput> t;
        t.reserve(static_cast<std::size_t>(q_size) * q_size);
        for (Symbol x = 0; x < q_size; ++x)
            for (Symbol y = 0; y < q_size; ++y) t.push_back(ChannelOutput::pair(x, y));
        std::ostringstream name;
        name << "identity(" << q_size << ")";
        return Channel(q_size, q_size, std::move(t), name.str());
    }

    int q_size() const { return q_; }
    int out_q_size() const { return out_q_; }
    const std::string& name() const { return name_; }

    const ChannelOutput& entry(Symbol x, Symbol y) const {
        return table_[static_cast<std::size_t>(x) * q_ + y];
    }

    bool is_erasure_identity() const {
        if (out_q_ != q_) return false;
        for (Symbol x = 0; x < q_; ++x)
            for (Symbol y = 0; y < q_; ++y) {
                const ChannelOutput& e = entry(x, y);
                if (!e.erased && !(e.a == x && e.b == y)) return false;
            }
        return true;
    }

    int erased_count() const {
        int c = 0;
        for (const ChannelOutput& e : table_) c += e.erased ? 1 : 0;
        return c;
    }

    bool operator==(const Channel& o) const {
        return q_ == o.q_ && out_q_ == o.out_q_ && table_ == o.table_;
    }

private:
    int q_;
    int out_q_;
    std::vector<ChannelOutput> table_;
    std::string name_;
};

inline ChannelOutput apply(const Channel& w, Symbol x, Symbol y) {
    if (x < 0 || x >= w.q_size() || y < 0 || y >= w.q_size())
        throw std::invalid_argument("apply: symbol outside [0, Q)");
    return w.entry(x, y);
}

// Coordinatewise blocklength-n extension; erased coordinates carry the
// erasure marker in both per-terminal outputs.
inline std::pair<OutputWord, OutputWord> apply_block(const Channel& w, const Word& x, const Word& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("apply_block: mismatched blocklengths");
    OutputWord o1(x.size()), o2(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const ChannelOutput e = apply(w, x[i], y[i]);
        o1[i] = e.erased ? kErased : e.a;
        o2[i] = e.erased ? kErased : e.b;
    }
    return {std::move(o1), std::move(o2)};
}

// Channel drawn from the erasure/identity ensemble: each of the Q^2 entries
// is independently erased with probability eps. Fully determined by
// (q_size, eps, seed): entries are visited row-major over (x, y), one
// mt19937_64 unit draw per entry, erase iff draw < eps.
inline Channel sample_erasure_identity(int q_size, double eps, std::uint64_t seed) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw std::invalid_argument("sample_erasure_identity: eps must lie in [0, 1]");
    if (q_size < 2) throw std::invalid_argument("sample_erasure_identity: q_size must be >= 2");
    Rng rng(seed);
    std::vector<ChannelOutput> t;
    t.reserve(static_cast<std::size_t>(q_size) * q_size);
    for (Symbol x = 0; x < q_size; ++x)
        for (Symbol y = 0; y < q_size; ++y) {
            if (rng.next_unit() < eps)
                t.push_back(ChannelOutput::erasure());
            else
                t.push_back(ChannelOutput::pair(x, y));
        }
    std::ostringstream name;
    name << "sampled(q_size=" << q_size << ",eps=" << eps << ",seed=" << seed << ")";
    return Channel(q_size, q_size, std::move(t), name.str());
}

inline cpp_rational erased_fraction(const Channel& w) {
    return cpp_rational(w.erased_count(), w.q_size() * w.q_size());
}

// Named channels. minmax is the binary channel with W1 = max, W2 = min.
// butterfly models the classic network-coded butterfly: terminal 1 receives
// the 2-bit vector (y, x^y) and terminal 2 receives (x, x^y), each encoded
// as a symbol in [4] (high bit first).
inline Channel builtin(const std::string& name) {
    if (name == "minmax") {
        std::vector<ChannelOutput> t;
        for (Symbol x = 0; x < 2; ++x)
            for (Symbol y = 0; y < 2; ++y)
                t.push_back(ChannelOutput::pair(std::max(x, y), std::min(x, y)));
        return Channel(2, 2, std::move(t), "minmax");
    }
    if (name == "butterfly") {
        std::vector<ChannelOutput> t;
        for (Symbol x = 0; x < 2; ++x)
            for (Symbol y = 0; y < 2; ++y)
                t.push_back(ChannelOutput::pair(2 * y + (x ^ y), 2 * x + (x ^ y)));
        return Channel(2, 4, std::move(t), "butterfly");
    }
    if (name.rfind("identity(", 0) == 0 && name.back() == ')') {
        const std::string inner = name.substr(9, name.size() - 10);
        std::size_t pos = 0;
        int q = 0;
        try {
            q = std::stoi(inner, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("builtin: bad identity(Q) argument: " + name);
        }
        if (pos != inner.size() || q < 2)
            throw std::invalid_argument("builtin: bad identity(Q) argument: " + name);
        return Channel::identity(q);
    }
    throw std::invalid_argument("builtin: unknown channel name: " + name);
}

// --- channel text format ------------------------------------------------
//
//   Q <int>
//   OUTQ <int>            (optional; defaults to Q)
//   ERASE <x> <y>         (entry (x,y) erased)
//   MAP <x> <y> <a> <b>   (entry (x,y) -> (a,b))
//
// Unlisted entries default to identity. Round-trips losslessly.

inline void write_channel(std::ostream& os, const Channel& w) {
    os << "Q " << w.q_size() << "\n";
    if (w.out_q_size() != w.q_size()) os << "OUTQ " << w.out_q_size() << "\n";
    for (Symbol x = 0; x < w.q_size(); ++x)
        for (Symbol y = 0; y < w.q_size(); ++y) {
            const ChannelOutput& e = w.entry(x, y);
            if (e.erased)
                os << "ERASE " << x << " " << y << "\n";
            else if (!(e.a == x && e.b == y))
                os << "MAP " << x << " " << y << " " << e.a << " " << e.b << "\n";
        }
}

inline Channel read_channel(std::istream& is) {
    std::string line;
    int q = -1, out_q = -1;
    std::vector<ChannelOutput> table;
    bool saw_q = false;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw ParseError("channel file line " + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tag;
        if (!(ls >> tag)) continue;
        if (tag == "Q") {
            if (saw_q) fail("duplicate Q line");
            if (!(ls >> q) || q < 2) fail("bad Q value");
            out_q = q;
            saw_q = true;
            table.resize(static_cast<std::size_t>(q) * q);
            for (Symbol x = 0; x < q; ++x)
                for (Symbol y = 0; y < q; ++y)
                    table[static_cast<std::size_t>(x) * q + y] = ChannelOutput::pair(x, y);
        } else if (tag == "OUTQ") {
            if (!saw_q) fail("OUTQ before Q");
            if (!(ls >> out_q) || out_q < q) fail("bad OUTQ value");
        } else if (tag == "ERASE") {
            if (!saw_q) fail("ERASE before Q");
            int x, y;
            if (!(ls >> x >> y)) fail("bad ERASE line");
            if (x < 0 || x >= q || y < 0 || y >= q) fail("ERASE entry outside [0, Q)");
            table[static_cast<std::size_t>(x) * q + y] = ChannelOutput::erasure();
        } else if (tag == "MAP") {
            if (!saw_q) fail("MAP before Q");
            int x, y, a, b;
            if (!(ls >> x >> y >> a >> b)) fail("bad MAP line");
            if (x < 0 || x >= q || y < 0 || y >= q) fail("MAP entry outside [0, Q)");
            table[static_cast<std::size_t>(x) * q + y] = ChannelOutput::pair(a, b);
        } else {
            fail("unknown tag '" + tag + "'");
        }
    }
    if (!saw_q) throw ParseError("channel file: missing Q line");
    return Channel(q, out_q, std::move(table));
}

// --- word helpers ---------------------------------------------------------

inline std::string word_to_string(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w[i]);
    }
    return s;
}

inline Word parse_word(const std::string& s) {
    Word w;
    std::string tok;
    std::istringstream is(s);
    while (std::getline(is, tok, ',')) {
        try {
            w.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw ParseError("bad word token '" + tok + "'");
        }
    }
    if (w.empty()) throw ParseError("empty word");
    return w;
}

// Word with index `idx` in the lexicographic enumeration of [Q]^n
// (most significant coordinate first).
inline Word word_from_index(std::uint64_t idx, int q_size, int n) {
    Word w(n);
    for (int i = n - 1; i >= 0; --i) {
        w[i] = static_cast<Symbol>(idx % q_size);
        idx /= q_size;
    }
    return w;
}

inline std::uint64_t word_count(int q_size, int n) {
    std::uint64_t c = 1;
    for (int i = 0; i < n; ++i) {
        if (c > (1ULL << 62) / static_cast<std::uint64_t>(q_size))
            throw BudgetError("word_count: Q^n overflows the enumeration budget");
        c *= static_cast<std::uint64_t>(q_size);
    }
    return c;
}

} // namespace zeic
