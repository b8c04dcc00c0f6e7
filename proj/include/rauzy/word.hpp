#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rauzy/errors.hpp"

namespace rauzy {

/// A finite word; letters are single characters.
using Word = std::string;

/// Letter occurrence counts, indexed by alphabet position.
using AbelianVector = std::vector<std::int64_t>;

/// Ordered set of distinct single-character letters. The order fixes the
/// coordinate indices used by abelianization and incidence matrices.
class Alphabet {
public:
    Alphabet() { index_.fill(-1); }

    explicit Alphabet(std::string letters) : letters_(std::move(letters)) {
        index_.fill(-1);
        for (std::size_t i = 0; i < letters_.size(); ++i) {
            unsigned char c = static_cast<unsigned char>(letters_[i]);
            if (index_[c] >= 0)
                throw validation_error(std::string("duplicate letter '") + letters_[i] + "' in alphabet");
            if (std::isspace(c) || c == '\0')
                throw validation_error("whitespace is not a valid letter");
            index_[c] = static_cast<int>(i);
        }
    }

    int size() const { return static_cast<int>(letters_.size()); }
    char letter(int i) const { return letters_[static_cast<std::size_t>(i)]; }
    const std::string& letters() const { return letters_; }

    /// Index of a letter, or -1 when absent.
    int index(char c) const { return index_[static_cast<unsigned char>(c)]; }

    int require_index(char c) const {
        int i = index(c);
        if (i < 0) throw validation_error(std::string("letter '") + c + "' is not in the alphabet");
        return i;
    }

    bool contains(char c) const { return index(c) >= 0; }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.letters_ == b.letters_; }

private:
    std::string letters_;
    std::array<int, 256> index_{};
};

/// l(w): the vector of per-letter occurrence counts. l(uv) = l(u) + l(v).
inline AbelianVector abelianize(const Alphabet& alphabet, std::string_view w) {
    AbelianVector v(static_cast<std::size_t>(alphabet.size()), 0);
    for (char c : w) ++v[static_cast<std::size_t>(alphabet.require_index(c))];
    return v;
}

/// d x d nonnegative integer matrix; entry (i, j) counts letter i in the
/// image of letter j, so column j sums to the image length of letter j.
struct IncidenceMatrix {
    int d = 0;
    std::vector<std::int64_t> a; // row-major

    IncidenceMatrix() = default;
    explicit IncidenceMatrix(int dim) : d(dim), a(static_cast<std::size_t>(dim) * dim, 0) {}

    std::int64_t& at(int i, int j) { return a[static_cast<std::size_t>(i) * d + j]; }
    std::int64_t at(int i, int j) const { return a[static_cast<std::size_t>(i) * d + j]; }

    friend bool operator==(const IncidenceMatrix& x, const IncidenceMatrix& y) {
        return x.d == y.d && x.a == y.a;
    }

    AbelianVector mul(const AbelianVector& v) const {
        AbelianVector r(static_cast<std::size_t>(d), 0);
        for (int i = 0; i < d; ++i) {
            std::int64_t s = 0;
            for (int j = 0; j < d; ++j) s += at(i, j) * v[static_cast<std::size_t>(j)];
            r[static_cast<std::size_t>(i)] = s;
        }
        return r;
    }
};

/// A morphism of the free monoid sending every letter to a nonempty word.
class Substitution {
public:
    Substitution() = default;

    Substitution(Alphabet alphabet, std::vector<Word> images)
        : alphabet_(std::move(alphabet)), images_(std::move(images)) {
        if (static_cast<int>(images_.size()) != alphabet_.size())
            throw validation_error("substitution needs exactly one image per letter");
        for (const Word& w : images_) {
            if (w.empty()) throw validation_error("substitution image must be nonempty");
            for (char c : w) alphabet_.require_index(c);
        }
    }

    /// Convenience constructor from rules like {{'a',"ab"},{'b',"ac"}};
    /// alphabet order is the order of the rules.
    Substitution(std::initializer_list<std::pair<char, const char*>> rules) {
        std::string letters;
        std::vector<Word> images;
        for (const auto& [c, w] : rules) {
            letters.push_back(c);
            images.emplace_back(w);
        }
        *this = Substitution(Alphabet(std::move(letters)), std::move(images));
    }

    const Alphabet& alphabet() const { return alphabet_; }
    const Word& image(int letter_index) const { return images_[static_cast<std::size_t>(letter_index)]; }
    const Word& image_of(char c) const { return images_[static_cast<std::size_t>(alphabet_.require_index(c))]; }
    const std::vector<Word>& images() const { return images_; }

    /// sigma(w): concatenation of the letter images.
    Word apply(std::string_view w) const {
        Word out;
        std::size_t total = 0;
        for (char c : w) total += image_of(c).size();
        out.reserve(total);
        for (char c : w) out += image_of(c);
        return out;
    }

    friend bool operator==(const Substitution& x, const Substitution& y) {
        return x.alphabet_ == y.alphabet_ && x.images_ == y.images_;
    }

private:
    Alphabet alphabet_;
    std::vector<Word> images_;
};

/// sigma^k as a substitution over the same alphabet. k >= 1.
inline Substitution power(const Substitution& sigma, int k) {
    if (k < 1) throw validation_error("substitution power needs k >= 1");
    std::vector<Word> images(sigma.images());
    for (int step = 1; step < k; ++step)
        for (Word& w : images) w = sigma.apply(w);
    return Substitution(sigma.alphabet(), std::move(images));
}

inline IncidenceMatrix incidence_matrix(const Substitution& sigma) {
    const Alphabet& al = sigma.alphabet();
    IncidenceMatrix m(al.size());
    for (int j = 0; j < al.size(); ++j)
        for (char c : sigma.image(j)) ++m.at(al.require_index(c), j);
    return m;
}

/// True iff some power M^k, k <= cap, is entrywise positive.
/// cap == 0 selects the Wielandt bound (d-1)^2 + 1, after which a primitive
/// matrix is guaranteed positive.
inline bool is_primitive(const IncidenceMatrix& m, int cap = 0) {
    const int d = m.d;
    if (cap <= 0) cap = (d - 1) * (d - 1) + 1;
    std::vector<char> p(static_cast<std::size_t>(d) * d), base(p.size()), next(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) base[i] = p[i] = m.a[i] > 0;
    auto all_positive = [&](const std::vector<char>& x) {
        return std::all_of(x.begin(), x.end(), [](char v) { return v != 0; });
    };
    for (int k = 1; k <= cap; ++k) {
        if (all_positive(p)) return true;
        if (k == cap) break;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                char s = 0;
                for (int l = 0; l < d && !s; ++l)
                    s = p[static_cast<std::size_t>(i) * d + l] & base[static_cast<std::size_t>(l) * d + j];
                next[static_cast<std::size_t>(i) * d + j] = s;
            }
        std::swap(p, next);
    }
    return false;
}

/// One edge of the prefix-suffix automaton: sigma(to) = prefix . from . suffix.
/// The edge runs from the marked letter to the letter whose image contains it.
struct PsEdge {
    char from = 0;
    char to = 0;
    Word prefix;
    Word suffix;

    friend bool operator==(const PsEdge& a, const PsEdge& b) {
        return a.from == b.from && a.to == b.to && a.prefix == b.prefix && a.suffix == b.suffix;
    }
};

struct PrefixSuffixAutomaton {
    Alphabet alphabet;
    std::vector<PsEdge> edges; // grouped by target letter, positions ascending
};

/// Exactly one edge per (letter b, position in sigma(b)).
inline PrefixSuffixAutomaton prefix_suffix_automaton(const Substitution& sigma) {
    PrefixSuffixAutomaton out{sigma.alphabet(), {}};
    for (int j = 0; j < sigma.alphabet().size(); ++j) {
        const Word& w = sigma.image(j);
        for (std::size_t pos = 0; pos < w.size(); ++pos)
            out.edges.push_back(PsEdge{w[pos], sigma.alphabet().letter(j),
                                       w.substr(0, pos), w.substr(pos + 1)});
    }
    return out;
}

/// Lazily extendable prefix of the one-sided fixed point of sigma^k seeded at
/// a letter `seed` with sigma^k(seed) starting with seed. Extending appends
/// only; emitted letters are never rewritten.
class FixedPointStream {
public:
    FixedPointStream() = default;

    FixedPointStream(Substitution sigma_power, int exponent, char seed)
        : power_(std::move(sigma_power)), exponent_(exponent), seed_(seed) {
        const Word& im = power_.image_of(seed);
        if (im.empty() || im[0] != seed || im.size() < 2)
            throw validation_error("seed letter does not generate a growing fixed point");
        buf_ = im;
        expanded_ = 1; // buf_ == sigma^k(first expanded_ letters of buf_)
    }

    int exponent() const { return exponent_; }
    char seed() const { return seed_; }
    const Substitution& substitution_power() const { return power_; }

    /// Reference to the internal buffer, guaranteed to hold at least n letters.
    const std::string& prefix(std::size_t n) {
        ensure(n);
        return buf_;
    }

    char at(std::size_t i) {
        ensure(i + 1);
        return buf_[i];
    }

    std::size_t grown() const { return buf_.size(); }

private:
    void ensure(std::size_t n) {
        while (buf_.size() < n) {
            char c = buf_[expanded_++];
            buf_ += power_.image_of(c);
        }
    }

    Substitution power_;
    int exponent_ = 0;
    char seed_ = 0;
    std::string buf_;
    std::size_t expanded_ = 0;
};

/// Smallest k <= kcap (ties: smallest seed letter in alphabet order) with
/// sigma^k(seed) starting at seed and growing; returns the stream of the
/// fixed point of sigma^k. kcap == 0 selects d!.
///
/// The first letter of sigma^k(a) is f^k(a) where f maps a letter to the
/// first letter of its image, so candidates are read off the cycles of f;
/// growth is checked on exact image lengths (saturated, order only matters).
inline FixedPointStream periodic_point(const Substitution& sigma, int kcap = 0) {
    const Alphabet& al = sigma.alphabet();
    const int d = al.size();
    if (kcap <= 0) {
        kcap = 1;
        for (int i = 2; i <= d; ++i) kcap *= i;
    }
    std::vector<int> first(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) first[static_cast<std::size_t>(j)] = al.require_index(sigma.image(j)[0]);

    constexpr std::int64_t kSat = std::int64_t(1) << 62;
    std::vector<std::int64_t> len(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) len[static_cast<std::size_t>(j)] = static_cast<std::int64_t>(sigma.image(j).size());

    std::vector<int> fk(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) fk[static_cast<std::size_t>(j)] = j;
    std::vector<std::int64_t> lenk(static_cast<std::size_t>(d), 1);

    for (int k = 1; k <= kcap; ++k) {
        // advance f^k and |sigma^k(.)| one step
        std::vector<int> nfk(static_cast<std::size_t>(d));
        std::vector<std::int64_t> nlenk(static_cast<std::size_t>(d));
        for (int j = 0; j < d; ++j) {
            nfk[static_cast<std::size_t>(j)] = first[static_cast<std::size_t>(fk[static_cast<std::size_t>(j)])];
            std::int64_t s = 0;
            for (char c : sigma.image(j)) {
                s += lenk[static_cast<std::size_t>(al.require_index(c))];
                if (s > kSat) { s = kSat; break; }
            }
            nlenk[static_cast<std::size_t>(j)] = s;
        }
        fk = std::move(nfk);
        lenk = std::move(nlenk);
        for (int j = 0; j < d; ++j) {
            if (fk[static_cast<std::size_t>(j)] == j && lenk[static_cast<std::size_t>(j)] >= 2)
                return FixedPointStream(power(sigma, k), k, al.letter(j));
        }
    }
    throw validation_error("no periodic seed within the power cap (is the substitution primitive?)");
}

/// Witness for one letter pair of the strong coincidence condition.
struct CoincidenceWitness {
    int k = 0;
    char letter = 0;
    std::size_t position = 0; // matched index (from the front or the back)
    bool via_prefix = true;   // false: equal suffix abelianizations instead
};

struct CoincidenceReport {
    bool holds = false;
    bool inconclusive = false; // a pair ran out of cap/budget without a witness
    std::map<std::pair<char, char>, CoincidenceWitness> witnesses;
};

/// Searches k <= kcap for every unordered letter pair; both the equal-prefix
/// and equal-suffix variants count. Since equal abelianizations force equal
/// lengths, matches can only happen at equal offsets from the word ends.
inline CoincidenceReport strong_coincidence(const Substitution& sigma, int kcap = 20,
                                            std::size_t word_budget = 4'000'000) {
    const Alphabet& al = sigma.alphabet();
    const int d = al.size();
    CoincidenceReport report;

    std::vector<std::pair<int, int>> pending;
    for (int b1 = 0; b1 < d; ++b1) {
        report.witnesses[{al.letter(b1), al.letter(b1)}] = CoincidenceWitness{0, al.letter(b1), 0, true};
        for (int b2 = b1 + 1; b2 < d; ++b2) pending.emplace_back(b1, b2);
    }

    std::vector<Word> im(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) im[static_cast<std::size_t>(j)] = Word(1, al.letter(j));

    for (int k = 1; k <= kcap && !pending.empty(); ++k) {
        std::size_t total = 0;
        for (int j = 0; j < d; ++j) {
            im[static_cast<std::size_t>(j)] = sigma.apply(im[static_cast<std::size_t>(j)]);
            total += im[static_cast<std::size_t>(j)].size();
        }
        if (total > word_budget) break;

        auto scan = [&](const Word& w1, const Word& w2, bool from_front,
                        char& letter, std::size_t& pos) {
            std::vector<std::int64_t> diff(static_cast<std::size_t>(d), 0);
            int nonzero = 0;
            auto bump = [&](std::size_t idx, std::int64_t delta) {
                std::int64_t& e = diff[idx];
                if (e == 0) ++nonzero;
                e += delta;
                if (e == 0) --nonzero;
            };
            const std::size_t n = std::min(w1.size(), w2.size());
            for (std::size_t t = 0; t < n; ++t) {
                char c1 = from_front ? w1[t] : w1[w1.size() - 1 - t];
                char c2 = from_front ? w2[t] : w2[w2.size() - 1 - t];
                if (nonzero == 0 && c1 == c2) {
                    letter = c1;
                    pos = t;
                    return true;
                }
                bump(static_cast<std::size_t>(al.require_index(c1)), 1);
                bump(static_cast<std::size_t>(al.require_index(c2)), -1);
            }
            return false;
        };

        std::vector<std::pair<int, int>> still;
        for (auto [b1, b2] : pending) {
            char letter = 0;
            std::size_t pos = 0;
            const Word& w1 = im[static_cast<std::size_t>(b1)];
            const Word& w2 = im[static_cast<std::size_t>(b2)];
            if (scan(w1, w2, true, letter, pos))
                report.witnesses[{al.letter(b1), al.letter(b2)}] = CoincidenceWitness{k, letter, pos, true};
            else if (scan(w1, w2, false, letter, pos))
                report.witnesses[{al.letter(b1), al.letter(b2)}] = CoincidenceWitness{k, letter, pos, false};
            else
                still.emplace_back(b1, b2);
        }
        pending = std::move(still);
    }

    report.holds = pending.empty();
    report.inconclusive = !pending.empty();
    return report;
}

} // namespace rauzy
