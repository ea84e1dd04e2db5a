#pragma once

#include <algorithm>
#include <functional>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "zeic/bigmath.hpp"
#include "zeic/channel.hpp"
#include "zeic/errors.hpp"
#include "zeic/rng.hpp"

namespace zeic {

// Intensionally represented subset of [Q]^n: membership predicate, exact
// cardinality, seeded uniform sampler, and (always available, budget-gated
// by the caller) exhaustive enumeration in a deterministic order.
class SetFamily {
public:
    SetFamily(int q_size, int n, cpp_int cardinality)
        : q_(q_size), n_(n), card_(std::move(cardinality)) {}
    virtual ~SetFamily() = default;

    int q_size() const { return q_; }
    int length() const { return n_; }
    const cpp_int& cardinality() const { return card_; }
    double log2_cardinality() const { return log2_big(card_); }

    virtual bool contains(const Word& w) const = 0;
    virtual Word sample(Rng& rng) const = 0;
    virtual void visit(const std::function<void(const Word&)>& fn) const = 0;
    virtual std::string descriptor() const = 0;

    std::vector<Word> materialize(std::uint64_t cap) const {
        if (card_ > cap)
            throw BudgetError("SetFamily::materialize: cardinality exceeds cap");
        std::vector<Word> out;
        out.reserve(card_.convert_to<std::size_t>());
        visit([&](const Word& w) { out.push_back(w); });
        return out;
    }

private:
    int q_;
    int n_;
    cpp_int card_;
};

using FamilyPtr = std::shared_ptr<const SetFamily>;

// Union of Hamming balls of a common radius around pairwise far centers
// (centers must be farther than 2*radius apart, so the union is disjoint
// and the cardinality is exact).
class HammingBallFamily : public SetFamily {
public:
    HammingBallFamily(int q_size, std::vector<Word> centers, int radius)
        : SetFamily(q_size, static_cast<int>(centers.at(0).size()),
                    cpp_int(centers.size()) *
                        hamming_ball_volume(q_size, static_cast<int>(centers.at(0).size()), radius)),
          centers_(std::move(centers)), radius_(radius) {
        for (const Word& c : centers_) {
            if (static_cast<int>(c.size()) != length())
                throw std::invalid_argument("HammingBallFamily: centers of unequal length");
            for (Symbol s : c)
                if (s < 0 || s >= q_size)
                    throw std::invalid_argument("HammingBallFamily: center symbol outside [0, Q)");
        }
        for (std::size_t i = 0; i < centers_.size(); ++i)
            for (std::size_t j = i + 1; j < centers_.size(); ++j) {
                int dist = 0;
                for (int k = 0; k < length(); ++k) dist += centers_[i][k] != centers_[j][k];
                if (dist <= 2 * radius_)
                    throw std::invalid_argument("HammingBallFamily: balls overlap");
            }
        shell_ = {cpp_int(1)};
        for (int i = 1; i <= radius_; ++i)
            shell_.push_back(binomial(length(), i) * pow_int(q_size - 1, i));
    }

    int radius() const { return radius_; }
    const std::vector<Word>& centers() const { return centers_; }

    bool contains(const Word& w) const override {
        if (static_cast<int>(w.size()) != length()) return false;
        for (const Word& c : centers_) {
            int dist = 0;
            for (int k = 0; k < length(); ++k) dist += w[k] != c[k];
            if (dist <= radius_) return true;
        }
        return false;
    }

    // Uniform: pick (center, shell distance) weighted by exact shell sizes,
    // then distinct flip positions, then a replacement symbol per position.
    Word sample(Rng& rng) const override {
        cpp_int per_center = 0;
        for (const cpp_int& s : shell_) per_center += s;
        cpp_int t = rng.next_below_big(cpp_int(centers_.size()) * per_center);
        const std::size_t which = (t / per_center).convert_to<std::size_t>();
        t %= per_center;
        int dist = 0;
        while (t >= shell_[dist]) {
            t -= shell_[dist];
            ++dist;
        }
        Word w = centers_[which];
        std::vector<int> pos(length());
        for (int i = 0; i < length(); ++i) pos[i] = i;
        for (int i = 0; i < dist; ++i) {
            const std::uint64_t j =
                i + rng.next_below(static_cast<std::uint64_t>(length() - i));
            std::swap(pos[i], pos[j]);
        }
        for (int i = 0; i < dist; ++i) {
            const Symbol skip = w[pos[i]];
            Symbol s = static_cast<Symbol>(rng.next_below(q_size() - 1));
            if (s >= skip) ++s;
            w[pos[i]] = s;
        }
        return w;
    }

    void visit(const std::function<void(const Word&)>& fn) const override {
        for (const Word& c : centers_)
            for (int dist = 0; dist <= radius_; ++dist) {
                Word scratch = c;
                visit_rec(c, scratch, 0, dist, fn);
            }
    }

    std::string descriptor() const override {
        std::ostringstream os;
        os << "FAMILY hamming_ball " << q_size() << " " << length();
        for (const Word& c : centers_) os << " center " << word_to_string(c);
        os << " radius " << radius_;
        return os.str();
    }

private:
    void visit_rec(const Word& center, Word& scratch, int from, int flips_left,
                   const std::function<void(const Word&)>& fn) const {
        if (flips_left == 0) {
            fn(scratch);
            return;
        }
        for (int i = from; i + flips_left <= length(); ++i) {
            for (Symbol s = 0; s < q_size(); ++s) {
                if (s == center[i]) continue;
                scratch[i] = s;
                visit_rec(center, scratch, i + 1, flips_left - 1, fn);
            }
            scratch[i] = center[i];
        }
    }

    std::vector<Word> centers_;
    int radius_;
    std::vector<cpp_int> shell_; // words at each exact distance from one center
};

// Words split into Q blocks of length n/Q, each block containing every
// symbol exactly n/Q^2 times.
class BlockBalancedFamily : public SetFamily {
public:
    BlockBalancedFamily(int q_size, int n)
        : SetFamily(q_size, n, block_card(q_size, n)) {
        if (n % (q_size * q_size) != 0)
            throw std::invalid_argument("BlockBalancedFamily: Q^2 must divide n");
    }

    bool contains(const Word& w) const override {
        if (static_cast<int>(w.size()) != length()) return false;
        const int block = length() / q_size();
        const int per = block / q_size();
        for (int b = 0; b < q_size(); ++b) {
            std::vector<int> counts(q_size(), 0);
            for (int i = 0; i < block; ++i) {
                const Symbol s = w[b * block + i];
                if (s < 0 || s >= q_size()) return false;
                ++counts[s];
            }
            for (int c : counts)
                if (c != per) return false;
        }
        return true;
    }

    Word sample(Rng& rng) const override {
        const int block = length() / q_size();
        const int per = block / q_size();
        Word w(length());
        std::vector<Symbol> arrangement(block);
        for (int b = 0; b < q_size(); ++b) {
            int k = 0;
            for (Symbol s = 0; s < q_size(); ++s)
                for (int i = 0; i < per; ++i) arrangement[k++] = s;
            rng.shuffle(arrangement.begin(), arrangement.end());
            std::copy(arrangement.begin(), arrangement.end(), w.begin() + b * block);
        }
        return w;
    }

    void visit(const std::function<void(const Word&)>& fn) const override {
        const int block = length() / q_size();
        const int per = block / q_size();
        std::vector<Symbol> sorted(block);
        int k = 0;
        for (Symbol s = 0; s < q_size(); ++s)
            for (int i = 0; i < per; ++i) sorted[k++] = s;
        Word scratch(length());
        visit_rec(sorted, scratch, 0, fn);
    }

    std::string descriptor() const override {
        std::ostringstream os;
        os << "FAMILY block_balanced " << q_size() << " " << length();
        return os.str();
    }

private:
    static cpp_int block_card(int q_size, int n) {
        if (n % (q_size * q_size) != 0)
            throw std::invalid_argument("BlockBalancedFamily: Q^2 must divide n");
        const int block = n / q_size;
        const int per = block / q_size;
        cpp_int arrangements = factorial(block) / pow_int(factorial(per), q_size);
        return pow_int(arrangements, q_size);
    }

    void visit_rec(const std::vector<Symbol>& sorted, Word& scratch, int b,
                   const std::function<void(const Word&)>& fn) const {
        if (b == q_size()) {
            fn(scratch);
            return;
        }
        const int block = length() / q_size();
        std::vector<Symbol> arrangement = sorted;
        do {
            std::copy(arrangement.begin(), arrangement.end(), scratch.begin() + b * block);
            visit_rec(sorted, scratch, b + 1, fn);
        } while (std::next_permutation(arrangement.begin(), arrangement.end()));
    }
};

class ExplicitFamily : public SetFamily {
public:
    ExplicitFamily(int q_size, int n, std::vector<Word> words)
        : ExplicitFamily(q_size, n, sanitize(q_size, n, std::move(words)), 0) {}

    bool contains(const Word& w) const override {
        return std::binary_search(words_.begin(), words_.end(), w);
    }

    Word sample(Rng& rng) const override {
        return words_[rng.next_below(words_.size())];
    }

    void visit(const std::function<void(const Word&)>& fn) const override {
        for (const Word& w : words_) fn(w);
    }

    std::string descriptor() const override {
        std::ostringstream os;
        os << "FAMILY explicit " << q_size() << " " << length() << " " << words_.size();
        for (const Word& w : words_) os << "\n" << word_to_string(w);
        return os.str();
    }

private:
    ExplicitFamily(int q_size, int n, std::vector<Word> words, int)
        : SetFamily(q_size, n, cpp_int(words.size())), words_(std::move(words)) {}

    static std::vector<Word> sanitize(int q_size, int n, std::vector<Word> words) {
        std::sort(words.begin(), words.end());
        words.erase(std::unique(words.begin(), words.end()), words.end());
        if (words.empty()) throw std::invalid_argument("ExplicitFamily: empty word list");
        for (const Word& w : words) {
            if (static_cast<int>(w.size()) != n)
                throw std::invalid_argument("ExplicitFamily: word length != n");
            for (Symbol s : w)
                if (s < 0 || s >= q_size)
                    throw std::invalid_argument("ExplicitFamily: symbol outside [0, Q)");
        }
        return words;
    }

    std::vector<Word> words_;
};

// Image of a family over [2^q]^n under the symbol-wise binary expansion
// (most significant bit first). The map is injective, so the cardinality is
// preserved.
class BinaryImageFamily : public SetFamily {
public:
    BinaryImageFamily(FamilyPtr inner, int q_bits)
        : SetFamily(2, inner->length() * q_bits, inner->cardinality()),
          inner_(std::move(inner)), q_bits_(q_bits) {
        if (q_bits_ < 1 || inner_->q_size() != (1 << q_bits_))
            throw std::invalid_argument("BinaryImageFamily: inner alphabet is not 2^q");
    }

    Word map(const Word& w) const {
        Word out;
        out.reserve(w.size() * q_bits_);
        for (Symbol s : w)
            for (int b = q_bits_ - 1; b >= 0; --b) out.push_back((s >> b) & 1);
        return out;
    }

    bool contains(const Word& w) const override {
        if (static_cast<int>(w.size()) != length()) return false;
        Word pre(inner_->length());
        for (int i = 0; i < inner_->length(); ++i) {
            Symbol s = 0;
            for (int b = 0; b < q_bits_; ++b) {
                const Symbol bit = w[i * q_bits_ + b];
                if (bit != 0 && bit != 1) return false;
                s = (s << 1) | bit;
            }
            pre[i] = s;
        }
        return inner_->contains(pre);
    }

    Word sample(Rng& rng) const override { return map(inner_->sample(rng)); }

    void visit(const std::function<void(const Word&)>& fn) const override {
        inner_->visit([&](const Word& w) { fn(map(w)); });
    }

    std::string descriptor() const override {
        return "FAMILY binary_image " + std::to_string(q_bits_) + "\n" + inner_->descriptor();
    }

private:
    FamilyPtr inner_;
    int q_bits_;
};

// --- family descriptor I/O --------------------------------------------------

inline FamilyPtr read_family(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        break;
    }
    std::istringstream ls(line);
    std::string tag, kind;
    if (!(ls >> tag >> kind) || tag != "FAMILY")
        throw ParseError("family descriptor: expected 'FAMILY <kind> ...', got '" + line + "'");
    if (kind == "hamming_ball") {
        int q, n;
        if (!(ls >> q >> n)) throw ParseError("hamming_ball: bad Q/n");
        std::vector<Word> centers;
        int radius = -1;
        std::string tok;
        while (ls >> tok) {
            if (tok == "center") {
                std::string wtok;
                if (!(ls >> wtok)) throw ParseError("hamming_ball: missing center word");
                centers.push_back(parse_word(wtok));
            } else if (tok == "radius") {
                if (!(ls >> radius)) throw ParseError("hamming_ball: missing radius");
            } else {
                throw ParseError("hamming_ball: unknown token '" + tok + "'");
            }
        }
        if (centers.empty() || radius < 0)
            throw ParseError("hamming_ball: need at least one center and a radius");
        return std::make_shared<HammingBallFamily>(q, std::move(centers), radius);
    }
    if (kind == "block_balanced") {
        int q, n;
        if (!(ls >> q >> n)) throw ParseError("block_balanced: bad Q/n");
        return std::make_shared<BlockBalancedFamily>(q, n);
    }
    if (kind == "explicit") {
        int q, n;
        std::size_t count;
        if (!(ls >> q >> n >> count)) throw ParseError("explicit: bad Q/n/count");
        std::vector<Word> words;
        words.reserve(count);
        for (std::size_t i = 0; i < count; ++i) {
            if (!std::getline(is, line)) throw ParseError("explicit: truncated word list");
            words.push_back(parse_word(line));
        }
        return std::make_shared<ExplicitFamily>(q, n, std::move(words));
    }
    if (kind == "binary_image") {
        int q_bits;
        if (!(ls >> q_bits)) throw ParseError("binary_image: bad bit count");
        FamilyPtr inner = read_family(is);
        return std::make_shared<BinaryImageFamily>(std::move(inner), q_bits);
    }
    throw ParseError("family descriptor: unknown kind '" + kind + "'");
}

inline void write_family(std::ostream& os, const SetFamily& fam) {
    os << fam.descriptor() << "\n";
}

} // namespace zeic
