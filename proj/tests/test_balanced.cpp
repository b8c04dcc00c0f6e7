#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "rauzy/balanced.hpp"
#include "rauzy/io.hpp"

using namespace rauzy;

namespace {

const Substitution kTau1{{'a', "aba"}, {'b', "ab"}};
const Substitution kTau2{{'a', "aab"}, {'b', "ba"}};
const Substitution kTrib1{{'a', "ab"}, {'b', "ac"}, {'c', "a"}};
const Substitution kTrib2{{'a', "ab"}, {'b', "ca"}, {'c', "a"}};
const Substitution kChi1{{'a', "aab"}, {'b', "ab"}};
const Substitution kChi2{{'a', "baa"}, {'b', "ba"}};
const Alphabet kAb("ab");
const Alphabet kAbc("abc");

// random balanced pair: a word plus a shuffle of it
BalancedBlock random_balanced(oracles::Rng& rng, const std::string& letters, std::size_t max_len) {
    Word top = oracles::random_word(rng, letters, max_len);
    if (top.empty()) top.push_back(letters[0]);
    Word bottom = top;
    for (std::size_t i = bottom.size(); i > 1; --i) std::swap(bottom[i - 1], bottom[rng.below(i)]);
    return BalancedBlock{top, bottom};
}

} // namespace

TEST_CASE("balance predicate") {
    REQUIRE(is_balanced(kAb, "ab", "ba"));
    REQUIRE_FALSE(is_balanced(kAb, "a", "b"));
    REQUIRE(is_balanced(kAb, "aba", "aab"));
    REQUIRE(is_balanced(kAb, "", ""));
}

TEST_CASE("minimal decomposition of the worked pairs") {
    const auto d1 = decompose_minimal(kAb, BalancedBlock{"aba", "aab"});
    REQUIRE(d1 == std::vector<BalancedBlock>{{"a", "a"}, {"ba", "ab"}});

    const auto d2 = decompose_minimal(kAb, BalancedBlock{"ababa", "aabba"});
    REQUIRE(d2 == std::vector<BalancedBlock>{{"a", "a"}, {"ba", "ab"}, {"b", "b"}, {"a", "a"}});

    const auto d3 = decompose_minimal(kAb, BalancedBlock{"a", "a"});
    REQUIRE(d3 == std::vector<BalancedBlock>{{"a", "a"}});

    REQUIRE_THROWS_AS(decompose_minimal(kAb, BalancedBlock{"ab", "aa"}), validation_error);
}

TEST_CASE("decomposition soundness on random balanced pairs") {
    oracles::Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        const std::string letters = trial % 2 ? "ab" : "abc";
        const Alphabet al(letters);
        const BalancedBlock b = random_balanced(rng, letters, 40);
        const auto pieces = decompose_minimal(al, b);
        Word top, bottom;
        for (const BalancedBlock& piece : pieces) {
            REQUIRE(is_balanced(al, piece.top, piece.bottom));
            REQUIRE(is_minimal_balanced(al, piece));
            top += piece.top;
            bottom += piece.bottom;
        }
        REQUIRE(top == b.top);
        REQUIRE(bottom == b.bottom);
    }
}

TEST_CASE("greedy decomposition matches the exhaustive oracle on short pairs") {
    oracles::Rng rng(1234);
    for (int trial = 0; trial < 400; ++trial) {
        const std::string letters = trial % 2 ? "ab" : "abc";
        const Alphabet al(letters);
        const BalancedBlock b = random_balanced(rng, letters, 8);
        const auto all = oracles::all_minimal_decompositions(b.top, b.bottom, letters);
        REQUIRE(all.size() == 1); // the minimal decomposition is unique
        std::vector<std::size_t> cuts;
        decompose_cuts(al, b.top, b.bottom, cuts);
        REQUIRE(cuts == all[0]);
    }
}

TEST_CASE("seed balanced prefix") {
    SECTION("tau pair seeds at the shared first letter") {
        FixedPointStream u = periodic_point(kTau1), v = periodic_point(kTau2);
        const auto seed = seed_balanced_prefix(u, v, 10'000);
        REQUIRE(seed.has_value());
        REQUIRE(*seed == BalancedBlock{"a", "a"});
    }
    SECTION("chi pair never balances") {
        FixedPointStream u = periodic_point(kChi1), v = periodic_point(kChi2);
        REQUIRE_FALSE(seed_balanced_prefix(u, v, 10'000).has_value());
    }
    SECTION("identical streams seed at the first letter") {
        FixedPointStream u = periodic_point(kTrib1), v = periodic_point(kTrib1);
        REQUIRE(*seed_balanced_prefix(u, v, 10) == BalancedBlock{"a", "a"});
    }
}

TEST_CASE("intersection morphism golden tables") {
    SECTION("tau pair") {
        const IntersectionReport rep = intersection_morphism(kTau1, kTau2);
        REQUIRE(rep.status == IntersectionStatus::success);
        const BlockMorphism& m = *rep.morphism;
        REQUIRE(m.blocks == std::vector<BalancedBlock>{{"a", "a"}, {"ba", "ab"}, {"b", "b"}, {"ab", "ba"}});
        REQUIRE(m.names == std::vector<std::string>{"A", "B", "C", "D"});
        REQUIRE(m.phi_word(0) == "AB");
        REQUIRE(m.phi_word(1) == "ABCA");
        REQUIRE(m.phi_word(2) == "D");
        REQUIRE(m.phi_word(3) == "DAAC");
    }
    SECTION("tribonacci pair: eleven blocks") {
        const IntersectionReport rep = intersection_morphism(kTrib1, kTrib2);
        REQUIRE(rep.status == IntersectionStatus::success);
        const BlockMorphism& m = *rep.morphism;
        REQUIRE(m.blocks.size() == 11);
        REQUIRE(m.blocks[4] == BalancedBlock{"cab", "bca"});  // E
        REQUIRE(m.blocks[10] == BalancedBlock{"ababac", "bcaaab"}); // K
        REQUIRE(m.phi_word(10) == "IDGA");
    }
    SECTION("chi pair is flagged empty") {
        const IntersectionReport rep = intersection_morphism(kChi1, kChi2);
        REQUIRE(rep.status == IntersectionStatus::empty_intersection_suspected);
        REQUIRE_FALSE(rep.morphism.has_value());
    }
    SECTION("mismatched matrices are a validation error") {
        REQUIRE_THROWS_AS(intersection_morphism(kTrib1, Substitution{{'a', "aab"}, {'b', "ac"}, {'c', "a"}}),
                          validation_error);
    }
    SECTION("mismatched alphabets are a validation error") {
        REQUIRE_THROWS_AS(intersection_morphism(kTau1, Substitution{{'x', "xyx"}, {'y', "xy"}}),
                          validation_error);
    }
    SECTION("a non-unimodular pair is rejected") {
        const Substitution s1{{'a', "ab"}, {'b', "ab"}};
        REQUIRE_THROWS_AS(intersection_morphism(s1, s1), validation_error);
    }
    SECTION("tight caps end in cap_exceeded") {
        IntersectionCaps caps;
        caps.block_count = 4;
        const IntersectionReport rep = intersection_morphism(kTrib1, kTrib2, caps);
        REQUIRE(rep.status == IntersectionStatus::cap_exceeded);
    }
}

TEST_CASE("morphism commutation and generation") {
    for (const auto& [s1, s2] : {std::pair{kTau1, kTau2}, std::pair{kTrib1, kTrib2}}) {
        const IntersectionReport rep = intersection_morphism(s1, s2);
        REQUIRE(rep.status == IntersectionStatus::success);
        const BlockMorphism& m = *rep.morphism;

        // flatten(phi(X)) == (sigma1(top), sigma2(bottom)) for every block
        for (std::size_t i = 0; i < m.blocks.size(); ++i) {
            const BalancedBlock lhs = flatten(m, m.phi[i]);
            REQUIRE(lhs.top == m.sigma1.apply(m.blocks[i].top));
            REQUIRE(lhs.bottom == m.sigma2.apply(m.blocks[i].bottom));
        }

        // flatten(phi^n(seed)) == (sigma1^n(v1), sigma2^n(v2)) for n <= 8
        std::vector<int> word{0};
        Word top = m.blocks[0].top, bottom = m.blocks[0].bottom;
        for (int n = 1; n <= 8; ++n) {
            word = apply_phi(m, word);
            top = m.sigma1.apply(top);
            bottom = m.sigma2.apply(bottom);
            const BalancedBlock flat = flatten(m, word);
            REQUIRE(flat.top == top);
            REQUIRE(flat.bottom == bottom);
        }
    }
}

TEST_CASE("block abelianization is conserved by phi") {
    const IntersectionReport rep = intersection_morphism(kTrib1, kTrib2);
    const BlockMorphism& m = *rep.morphism;
    for (std::size_t i = 0; i < m.blocks.size(); ++i) {
        std::size_t flat_len = 0;
        for (int b : m.phi[i]) flat_len += m.blocks[static_cast<std::size_t>(b)].top.size();
        std::size_t image_len = 0;
        for (char c : m.blocks[i].top) image_len += m.sigma1.image_of(c).size();
        REQUIRE(flat_len == image_len);
    }
}

TEST_CASE("common points") {
    const PerronData pd = perron_data(incidence_matrix(kTrib1));
    const IntersectionReport rep = intersection_morphism(kTrib1, kTrib2);
    const BlockMorphism& m = *rep.morphism;
    const std::size_t N = 10'000;
    const PointCloud cloud = common_points(m, N, pd);

    SECTION("origin is always present") {
        REQUIRE(cloud.size() >= 1);
        REQUIRE(cloud.point(0)[0] == 0.0);
        REQUIRE(cloud.point(0)[1] == 0.0);
    }
    SECTION("positions agree with a direct prefix scan") {
        // independent route: compare abelianization vectors of both prefixes
        FixedPointStream u = periodic_point(kTrib1), v = periodic_point(kTrib2);
        const std::string& a = u.prefix(N);
        const std::string& b = v.prefix(N);
        std::size_t balanced_positions = 1; // k = 0
        std::vector<std::size_t> boundary;
        for (std::size_t k = 1; k <= N; ++k) {
            if (oracles::counts(a.substr(0, k), "abc") == oracles::counts(b.substr(0, k), "abc")) {
                ++balanced_positions;
                boundary.push_back(k);
            }
        }
        REQUIRE(cloud.size() == balanced_positions);

        // and with the block decomposition of the prefix pair
        if (!boundary.empty()) {
            std::vector<std::size_t> cuts;
            decompose_cuts(kAbc, a.substr(0, boundary.back()), b.substr(0, boundary.back()), cuts);
            REQUIRE(cuts == boundary);
            REQUIRE(cloud.size() == cuts.size() + 1);
        }
    }
    SECTION("labels are valid block indices") {
        for (std::int32_t l : cloud.labels) {
            REQUIRE(l >= 0);
            REQUIRE(l < static_cast<std::int32_t>(m.blocks.size()));
        }
        REQUIRE(cloud.labels[0] == 0);
    }
}

TEST_CASE("aligned letter positions") {
    SECTION("both tribonacci fixed points start with a") {
        const auto pos = aligned_letter_check(kTrib1, kTrib2, 'a', 1);
        REQUIRE(pos == std::vector<std::size_t>{0});
    }
    SECTION("tau pair, letter b, against a direct scan") {
        const auto pos = aligned_letter_check(kTau1, kTau2, 'b', 10);
        FixedPointStream u = periodic_point(kTau1), v = periodic_point(kTau2);
        std::vector<std::size_t> expect;
        for (std::size_t k = 0; k < 10; ++k)
            if (u.at(k) == 'b' && v.at(k) == 'b') expect.push_back(k);
        REQUIRE(pos == expect);
    }
    SECTION("foreign letter is rejected") {
        REQUIRE_THROWS_AS(aligned_letter_check(kTau1, kTau2, 'z', 10), validation_error);
    }
}

TEST_CASE("block names run A..Z then B26 onward") {
    REQUIRE(block_name(0) == "A");
    REQUIRE(block_name(10) == "K");
    REQUIRE(block_name(25) == "Z");
    REQUIRE(block_name(26) == "B26");
    REQUIRE(block_name(31) == "B31");
}
