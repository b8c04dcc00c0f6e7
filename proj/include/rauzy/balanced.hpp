#pragma once

#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rauzy/errors.hpp"
#include "rauzy/fractal.hpp"
#include "rauzy/spectral.hpp"
#include "rauzy/word.hpp"

namespace rauzy {

/// Pair of words with equal abelianization (so also equal length).
struct BalancedBlock {
    Word top;
    Word bottom;

    friend bool operator==(const BalancedBlock& a, const BalancedBlock& b) {
        return a.top == b.top && a.bottom == b.bottom;
    }
    friend bool operator<(const BalancedBlock& a, const BalancedBlock& b) {
        return a.top != b.top ? a.top < b.top : a.bottom < b.bottom;
    }
};

inline bool is_balanced(const Alphabet& al, std::string_view top, std::string_view bottom) {
    return abelianize(al, top) == abelianize(al, bottom);
}

namespace detail {

// Tracks l(top prefix) - l(bottom prefix); zero iff the prefixes balance.
class DiffWalk {
public:
    explicit DiffWalk(int d) : diff_(static_cast<std::size_t>(d), 0) {}

    void step(int top_letter, int bottom_letter) {
        bump(top_letter, +1);
        bump(bottom_letter, -1);
    }

    bool zero() const { return nonzero_ == 0; }

    void reset() {
        std::fill(diff_.begin(), diff_.end(), 0);
        nonzero_ = 0;
    }

private:
    void bump(int idx, std::int64_t delta) {
        std::int64_t& e = diff_[static_cast<std::size_t>(idx)];
        if (e == 0) ++nonzero_;
        e += delta;
        if (e == 0) --nonzero_;
    }

    std::vector<std::int64_t> diff_;
    int nonzero_ = 0;
};

} // namespace detail

/// Appends the cut positions (1-based prefix lengths, final one == length)
/// of the greedy leftmost decomposition into minimal balanced blocks. The
/// input must be balanced; the cuts are exactly the balanced prefix lengths,
/// which makes the decomposition unique.
inline void decompose_cuts(const Alphabet& al, std::string_view top, std::string_view bottom,
                           std::vector<std::size_t>& cuts) {
    if (top.size() != bottom.size())
        throw validation_error("decompose_cuts: words of different length cannot balance");
    detail::DiffWalk walk(al.size());
    for (std::size_t k = 0; k < top.size(); ++k) {
        walk.step(al.require_index(top[k]), al.require_index(bottom[k]));
        if (walk.zero()) cuts.push_back(k + 1);
    }
    if (cuts.empty() || cuts.back() != top.size())
        throw validation_error("decompose_cuts: input pair is not balanced");
}

/// No proper nonempty prefix pair balances.
inline bool is_minimal_balanced(const Alphabet& al, const BalancedBlock& b) {
    if (b.top.size() != b.bottom.size() || b.top.empty()) return false;
    std::vector<std::size_t> cuts;
    detail::DiffWalk walk(al.size());
    for (std::size_t k = 0; k < b.top.size(); ++k) {
        walk.step(al.require_index(b.top[k]), al.require_index(b.bottom[k]));
        if (walk.zero() && k + 1 < b.top.size()) return false;
    }
    return walk.zero();
}

/// Greedy leftmost decomposition; concatenating the pieces reproduces the
/// input and every piece is minimal.
inline std::vector<BalancedBlock> decompose_minimal(const Alphabet& al, const BalancedBlock& b) {
    std::vector<std::size_t> cuts;
    decompose_cuts(al, b.top, b.bottom, cuts);
    std::vector<BalancedBlock> out;
    out.reserve(cuts.size());
    std::size_t start = 0;
    for (std::size_t cut : cuts) {
        out.push_back(BalancedBlock{b.top.substr(start, cut - start), b.bottom.substr(start, cut - start)});
        start = cut;
    }
    return out;
}

/// Block letters are named A..Z in discovery order, then B26, B27, ...
inline std::string block_name(int index) {
    if (index < 26) return std::string(1, static_cast<char>('A' + index));
    return "B" + std::to_string(index);
}

/// Smallest k <= cap with equal prefix abelianizations of the two streams;
/// minimal by construction. Absence within the cap is a value, not an error.
inline std::optional<BalancedBlock> seed_balanced_prefix(FixedPointStream& u, FixedPointStream& v,
                                                         std::size_t cap) {
    const Alphabet& al = u.substitution_power().alphabet();
    detail::DiffWalk walk(al.size());
    for (std::size_t k = 0; k < cap; ++k) {
        walk.step(al.require_index(u.at(k)), al.require_index(v.at(k)));
        if (walk.zero())
            return BalancedBlock{Word(u.prefix(k + 1).substr(0, k + 1)), Word(v.prefix(k + 1).substr(0, k + 1))};
    }
    return std::nullopt;
}

struct IntersectionCaps {
    std::size_t seed = 10'000;        // prefix letters scanned for the seed block
    std::size_t block_length = 1'000; // longest admissible minimal block
    std::size_t block_count = 10'000; // largest admissible block alphabet
};

/// The substitution phi on the alphabet of minimal balanced blocks, with the
/// projection pi back to word pairs. Satisfies, for every block X,
/// flatten(phi(X)) == (sigma1(pi(X).top), sigma2(pi(X).bottom)).
struct BlockMorphism {
    Substitution sigma1, sigma2; // already raised to the common power
    int applied_power = 1;
    std::vector<BalancedBlock> blocks; // pi, in discovery order
    std::vector<std::string> names;
    std::vector<std::vector<int>> phi;

    const Alphabet& alphabet() const { return sigma1.alphabet(); }

    int index_of(const BalancedBlock& b) const {
        auto it = lookup_.find(b);
        return it == lookup_.end() ? -1 : it->second;
    }

    int add_block(const BalancedBlock& b) {
        auto [it, inserted] = lookup_.emplace(b, static_cast<int>(blocks.size()));
        if (inserted) {
            blocks.push_back(b);
            names.push_back(block_name(it->second));
            phi.emplace_back();
        }
        return it->second;
    }

    std::string phi_word(int block) const {
        std::string s;
        for (int b : phi[static_cast<std::size_t>(block)]) s += names[static_cast<std::size_t>(b)];
        return s;
    }

private:
    std::map<BalancedBlock, int> lookup_;
};

enum class IntersectionStatus {
    success,
    empty_intersection_suspected, // no balanced prefix within the seed cap
    cap_exceeded,                 // block length/count blew the caps
};

struct IntersectionReport {
    IntersectionStatus status = IntersectionStatus::success;
    std::optional<BlockMorphism> morphism;
    IntersectionCaps caps;
    int power = 1; // common substitution power consumed by the algorithm
    std::size_t block_count = 0;
    std::size_t max_block_length = 0;
    std::string message;
};

/// Worklist closure over minimal balanced blocks: seed with the smallest
/// balanced prefix pair of the two fixed points, then repeatedly push each
/// block through (sigma1, sigma2) and decompose the image. Blocks are named
/// in discovery order (breadth-first, images read left to right).
///
/// Termination is enforced by caps: the mathematical termination argument
/// needs 0 to be an interior point of the first Rauzy fractal, which the
/// library does not decide. A cap hit therefore reports, it never asserts.
inline IntersectionReport intersection_morphism(const Substitution& sigma1, const Substitution& sigma2,
                                                IntersectionCaps caps = {}) {
    IntersectionReport report;
    report.caps = caps;

    if (!(sigma1.alphabet() == sigma2.alphabet()))
        throw validation_error("the two substitutions use different alphabets");
    const IncidenceMatrix m1 = incidence_matrix(sigma1);
    if (!(m1 == incidence_matrix(sigma2)))
        throw validation_error("the two substitutions have different incidence matrices");
    const Classification cls = classify(m1);
    if (!cls.irreducible || !cls.unimodular || !cls.pisot)
        throw validation_error("incidence matrix is not irreducible unimodular Pisot: " + cls.reasons);
    if (!is_primitive(m1)) throw validation_error("substitution is not primitive");

    FixedPointStream probe1 = periodic_point(sigma1);
    FixedPointStream probe2 = periodic_point(sigma2);
    const int common = std::lcm(probe1.exponent(), probe2.exponent());
    report.power = common;

    const Substitution s1 = common == 1 ? sigma1 : power(sigma1, common);
    const Substitution s2 = common == 1 ? sigma2 : power(sigma2, common);
    FixedPointStream u(s1, common, probe1.seed());
    FixedPointStream v(s2, common, probe2.seed());

    std::optional<BalancedBlock> seed = seed_balanced_prefix(u, v, caps.seed);
    if (!seed) {
        report.status = IntersectionStatus::empty_intersection_suspected;
        report.message = "no balanced prefix within the first " + std::to_string(caps.seed) +
                         " letters; the stepped lines appear to share only the origin";
        return report;
    }

    if (seed->top.size() > caps.block_length) {
        report.status = IntersectionStatus::cap_exceeded;
        report.max_block_length = seed->top.size();
        report.message = "seed block alone exceeds the block-length cap (" +
                         std::to_string(caps.block_length) + ")";
        return report;
    }

    BlockMorphism morphism;
    morphism.sigma1 = s1;
    morphism.sigma2 = s2;
    morphism.applied_power = common;
    morphism.add_block(*seed);
    report.max_block_length = seed->top.size();

    std::vector<std::size_t> cuts;
    for (std::size_t next = 0; next < morphism.blocks.size(); ++next) {
        const BalancedBlock image{s1.apply(morphism.blocks[next].top),
                                  s2.apply(morphism.blocks[next].bottom)};
        cuts.clear();
        decompose_cuts(sigma1.alphabet(), image.top, image.bottom, cuts);
        std::vector<int> word;
        word.reserve(cuts.size());
        std::size_t start = 0;
        for (std::size_t cut : cuts) {
            const std::size_t len = cut - start;
            if (len > caps.block_length) {
                report.status = IntersectionStatus::cap_exceeded;
                report.block_count = morphism.blocks.size();
                report.max_block_length = std::max(report.max_block_length, len);
                report.message =
                    "minimal block length exceeded the cap (" + std::to_string(caps.block_length) +
                    "); without 0 interior to the first Rauzy fractal the block alphabet need not be finite";
                return report;
            }
            const int idx = morphism.add_block(
                BalancedBlock{image.top.substr(start, len), image.bottom.substr(start, len)});
            report.max_block_length = std::max(report.max_block_length, len);
            word.push_back(idx);
            start = cut;
            if (morphism.blocks.size() > caps.block_count) {
                report.status = IntersectionStatus::cap_exceeded;
                report.block_count = morphism.blocks.size();
                report.message =
                    "block alphabet exceeded the cap (" + std::to_string(caps.block_count) +
                    "); without 0 interior to the first Rauzy fractal the block alphabet need not be finite";
                return report;
            }
        }
        morphism.phi[next] = std::move(word);
    }

    report.block_count = morphism.blocks.size();
    report.message = "intersection morphism on " + std::to_string(report.block_count) + " blocks";
    report.morphism = std::move(morphism);
    return report;
}

/// pi extended to block words: concatenate tops and bottoms.
inline BalancedBlock flatten(const BlockMorphism& m, const std::vector<int>& blockword) {
    BalancedBlock out;
    for (int b : blockword) {
        if (b < 0 || b >= static_cast<int>(m.blocks.size()))
            throw validation_error("unknown block index in flatten");
        out.top += m.blocks[static_cast<std::size_t>(b)].top;
        out.bottom += m.blocks[static_cast<std::size_t>(b)].bottom;
    }
    return out;
}

/// phi extended to block words.
inline std::vector<int> apply_phi(const BlockMorphism& m, const std::vector<int>& blockword) {
    std::vector<int> out;
    for (int b : blockword) {
        if (b < 0 || b >= static_cast<int>(m.blocks.size()))
            throw validation_error("unknown block index in apply_phi");
        const auto& img = m.phi[static_cast<std::size_t>(b)];
        out.insert(out.end(), img.begin(), img.end());
    }
    return out;
}

/// Projections of the common stepped-line points up to prefix length N: the
/// origin plus every balanced prefix position, labeled by the block ending
/// there (the origin carries the seed block's label).
inline PointCloud common_points(const BlockMorphism& m, std::size_t n_letters, const PerronData& pd) {
    const Alphabet& al = m.alphabet();
    // the seed block is a prefix pair of the two fixed points, so its first
    // letters are the stream seeds
    FixedPointStream u(m.sigma1, m.applied_power, m.blocks[0].top[0]);
    FixedPointStream v(m.sigma2, m.applied_power, m.blocks[0].bottom[0]);

    PointCloud cloud;
    cloud.dim = pd.stable_dim();
    cloud.source = "common-points";
    cloud.label_names = m.names;

    const StablePoint origin(static_cast<std::size_t>(pd.stable_dim()), 0.0);
    cloud.add(origin.data(), 0);

    const std::string& top = u.prefix(n_letters);
    const std::string& bottom = v.prefix(n_letters);
    detail::DiffWalk walk(al.size());
    std::vector<double> vertex(static_cast<std::size_t>(al.size()), 0.0);
    std::size_t block_start = 0;
    for (std::size_t k = 0; k < n_letters; ++k) {
        walk.step(al.require_index(top[k]), al.require_index(bottom[k]));
        vertex[static_cast<std::size_t>(al.require_index(top[k]))] += 1.0;
        if (!walk.zero()) continue;
        const BalancedBlock block{Word(top.substr(block_start, k + 1 - block_start)),
                                  Word(bottom.substr(block_start, k + 1 - block_start))};
        const int idx = m.index_of(block);
        if (idx < 0) throw numeric_error("balanced prefix produced a block outside the morphism closure");
        const StablePoint p = project_stable(pd, vertex);
        cloud.add(p.data(), idx);
        block_start = k + 1;
    }
    return cloud;
}

/// Positions k < N at which both fixed points carry `letter`.
inline std::vector<std::size_t> aligned_letter_check(const Substitution& sigma1, const Substitution& sigma2,
                                                     char letter, std::size_t n_letters) {
    if (!(sigma1.alphabet() == sigma2.alphabet()))
        throw validation_error("the two substitutions use different alphabets");
    sigma1.alphabet().require_index(letter);
    FixedPointStream u = periodic_point(sigma1);
    FixedPointStream v = periodic_point(sigma2);
    const std::string& a = u.prefix(n_letters);
    const std::string& b = v.prefix(n_letters);
    std::vector<std::size_t> positions;
    for (std::size_t k = 0; k < n_letters; ++k)
        if (a[k] == letter && b[k] == letter) positions.push_back(k);
    return positions;
}

} // namespace rauzy
