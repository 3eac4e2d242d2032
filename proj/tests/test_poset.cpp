#include <gtest/gtest.h>

#include <bit>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "kpat/enumerate.hpp"
#include "kpat/io.hpp"
#include "kpat/poset.hpp"
#include "support.hpp"

using namespace kpat;

namespace {

ElementSet set_of(std::initializer_list<Element> xs) {
    ElementSet s;
    for (Element x : xs) s.set(x);
    return s;
}

/// 1 < 2 < 3 < 4 and 2 < 5, 0-based.
Poset pattern_example() { return Poset::from_relations(5, {{0, 1}, {1, 2}, {2, 3}, {1, 4}}); }

/// Covers 1-2, 1-3, 2-4, 3-4, 4-5, 0-based.
Poset pictorial() { return Poset::from_relations(5, {{0, 1}, {0, 2}, {1, 3}, {2, 3}, {3, 4}}); }

}  // namespace

TEST(ElementSet, BasicOperations) {
    ElementSet s = set_of({0, 5, 64, 127});
    EXPECT_EQ(s.count(), 4u);
    EXPECT_TRUE(s.test(64));
    EXPECT_FALSE(s.test(63));
    EXPECT_EQ(s.elements(), (std::vector<std::size_t>{0, 5, 64, 127}));
    s.reset(5);
    EXPECT_EQ(s.front(), 0u);
    EXPECT_EQ(s.next(1), 64u);
    EXPECT_TRUE(set_of({1}).is_subset_of(set_of({1, 2})));
    EXPECT_EQ(ElementSet::first(70).count(), 70u);
    EXPECT_EQ((set_of({1, 2}) - set_of({2})), set_of({1}));
}

TEST(Poset, TransitiveClosureExamples) {
    const Poset c3 = Poset::from_relations(3, {{0, 1}, {1, 2}});
    EXPECT_EQ(c3, Poset::chain(3));
    EXPECT_EQ(c3.relation_count(), 3u);
    EXPECT_EQ(pattern_example().relation_count(), 8u);
    const Poset a4 = Poset::from_relations(4, {});
    EXPECT_EQ(a4, Poset::antichain(4));
    EXPECT_EQ(a4.relation_count(), 0u);
}

TEST(Poset, ClosureRejectsNonIncreasingPairs) {
    EXPECT_THROW(Poset::from_relations(3, {{1, 0}}), std::invalid_argument);
    EXPECT_THROW(Poset::from_relations(3, {{1, 1}}), std::invalid_argument);
    EXPECT_THROW(Poset::from_relations(3, {{0, 3}}), std::invalid_argument);
}

TEST(Poset, ClosureIsIdempotent) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const Poset p = testkit::random_poset(rng, 1 + trial % 9);
        const auto rel = p.relations();
        EXPECT_EQ(transitive_closure(p.size(), rel), p);
        EXPECT_NO_THROW(p.check_invariants());
        EXPECT_EQ(transitive_closure(p.size(), p.covers()), p);
    }
}

TEST(Poset, DualExamples) {
    EXPECT_EQ(dual(Poset::chain(3)), Poset::chain(3));
    EXPECT_EQ(dual(Poset::antichain(4)), Poset::antichain(4));
    const Poset p = pattern_example();
    const Poset d = dual(p);
    EXPECT_EQ(d.relation_count(), 8u);
    for (const auto& [i, j] : p.relations()) EXPECT_TRUE(d.less(4 - j, 4 - i));
}

TEST(Poset, DualIsInvolutionAndKeepsRelationCount) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const Poset p = testkit::random_poset(rng, 1 + trial % 10);
        EXPECT_EQ(dual(dual(p)), p);
        EXPECT_EQ(dual(p).relation_count(), p.relation_count());
    }
}

TEST(Poset, UnionAndSumExamples) {
    const Poset u = disjoint_union(Poset::chain(2), Poset::chain(2));
    EXPECT_EQ(u.size(), 4u);
    EXPECT_EQ(u.relations(), (std::vector<Relation>{{0, 1}, {2, 3}}));
    EXPECT_EQ(lex_sum(Poset::chain(1), Poset::chain(2)), Poset::chain(3));
    const Poset c3s = disjoint_union(disjoint_union(Poset::chain(3), Poset::chain(3)), Poset::chain(3));
    Poset c4s = Poset::chain(4);
    for (int k = 0; k < 3; ++k) c4s = disjoint_union(c4s, Poset::chain(4));
    const Poset prime = lex_sum(lex_sum(c3s, Poset::antichain(6)), c4s);
    EXPECT_EQ(prime.size(), 31u);
    EXPECT_NO_THROW(prime.check_invariants());
}

TEST(Poset, UnionAndSumRelationCounts) {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 200; ++trial) {
        const Poset p = testkit::random_poset(rng, trial % 7), q = testkit::random_poset(rng, (trial / 7) % 6);
        EXPECT_EQ(disjoint_union(p, q).relation_count(), p.relation_count() + q.relation_count());
        EXPECT_EQ(lex_sum(p, q).relation_count(), p.relation_count() + q.relation_count() + p.size() * q.size());
        EXPECT_NO_THROW(lex_sum(p, q).check_invariants());
    }
}

TEST(Poset, InducedExamples) {
    EXPECT_EQ(remove(Poset::chain(5), 4), Poset::chain(4));
    EXPECT_EQ(induced(pattern_example(), set_of({0, 1, 4})), Poset::chain(3));
    EXPECT_EQ(induced(pattern_example(), ElementSet{}).size(), 0u);
}

TEST(Poset, BoundsExamples) {
    EXPECT_EQ(lb(pictorial(), 4), set_of({0, 1, 2, 3}));
    for (Element x = 0; x < 5; ++x) EXPECT_TRUE(lb(Poset::antichain(5), x).empty());
    EXPECT_EQ(ub(Poset::chain(4), 1), set_of({2, 3}));
    EXPECT_EQ(pattern_example().maximal(), set_of({3, 4}));
    EXPECT_EQ(pattern_example().minimal(), set_of({0}));
}

TEST(Poset, AntichainExamples) {
    const auto ac = antichains_in(pictorial(), lb(pictorial(), 4));
    const std::vector<ElementSet> want{{}, set_of({0}), set_of({1}), set_of({2}), set_of({3}), set_of({1, 2})};
    EXPECT_EQ(ac, want);
    EXPECT_EQ(antichains_in(Poset::antichain(5), set_of({0, 2, 4})).size(), 8u);
    EXPECT_EQ(antichains_in(Poset::chain(3), set_of({0, 1})), (std::vector<ElementSet>{{}, set_of({0}), set_of({1})}));
}

TEST(Poset, AntichainsAreExactlyTheIncomparableSubsets) {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 60; ++trial) {
        const Poset p = testkit::random_poset(rng, 1 + trial % 8);
        std::size_t brute = 0;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << p.size()); ++mask) {
            ElementSet s;
            for (Element x = 0; x < p.size(); ++x)
                if (mask >> x & 1) s.set(x);
            brute += is_antichain(p, s);
        }
        EXPECT_EQ(antichains_in(p, p.all()).size(), brute);
    }
}

TEST(Poset, YFreeAndIntervalExamples) {
    for (std::size_t n = 1; n <= 6; ++n) {
        EXPECT_TRUE(is_y_free_below(Poset::chain(n), n - 1));
        EXPECT_TRUE(is_interval(Poset::chain(n)));
    }
    EXPECT_FALSE(is_y_free_below(y_poset(), 3));
    EXPECT_FALSE(is_interval(disjoint_union(Poset::chain(2), Poset::chain(2))));
}

TEST(Poset, YFreeBelowMatchesInducedSubposetSearch) {
    const Poset y = y_poset();
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 150; ++trial) {
        const Poset p = testkit::random_poset(rng, 1 + trial % 7, 0.5);
        p.maximal().for_each([&](Element m) {
            ElementSet down = p.lower(m);
            down.set(m);
            const auto elems = down.elements();
            bool found = false;
            const std::size_t k = elems.size();
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k) && !found; ++mask) {
                if (std::popcount(mask) != 4) continue;
                ElementSet s;
                for (std::size_t b = 0; b < k; ++b)
                    if (mask >> b & 1) s.set(elems[b]);
                found = testkit::brute_isomorphic(induced(p, s), y);
            }
            EXPECT_EQ(is_y_free_below(p, m), !found);
        });
    }
}

TEST(Poset, IntervalCharacterizationsAgreeOnAllSmallPosets) {
    for (std::size_t n = 0; n <= 7; ++n)
        for (const Poset& p : posets_of_size(n)) EXPECT_EQ(is_c2c2_free(p), lower_sets_nested(p));
}

TEST(Poset, ComponentExamples) {
    const auto c = components(disjoint_union(Poset::chain(2), Poset::chain(3)));
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0], Poset::chain(2));
    EXPECT_EQ(c[1], Poset::chain(3));
    EXPECT_EQ(components(pictorial()).size(), 1u);
    const auto a3 = components(Poset::antichain(3));
    ASSERT_EQ(a3.size(), 3u);
    for (const auto& x : a3) EXPECT_EQ(x, Poset::antichain(1));
}

TEST(Poset, ComponentsReassembleToTheOriginal) {
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 100; ++trial) {
        const Poset p = testkit::random_poset(rng, 1 + trial % 7, 0.2);
        Poset glued;
        for (const auto& c : components(p)) glued = disjoint_union(glued, c);
        EXPECT_TRUE(testkit::brute_isomorphic(glued, p));
    }
}

TEST(PosetText, ParsesCommentsAndClosesTransitively) {
    const Poset p = parse_poset("# a chain\n\n3\n1 2\n# inner comment\n2 3\n");
    EXPECT_EQ(p, Poset::chain(3));
    EXPECT_EQ(parse_poset(format_poset(pattern_example())), pattern_example());
}

TEST(PosetText, ReportsLineNumbers) {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_poset(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("3\n1 2\n2 x\n"), 3u);
    EXPECT_EQ(line_of("# c\n3\n2 1\n"), 3u);
    EXPECT_EQ(line_of("3\n1 4\n"), 2u);
    EXPECT_EQ(line_of("3 4\n"), 1u);
    EXPECT_EQ(line_of("3\n1 2 3\n"), 2u);
    EXPECT_EQ(line_of("# only comments\n"), 1u);
}

TEST(PosetText, InlineDescriptions) {
    EXPECT_EQ(poset_from_spec("chain 6"), Poset::chain(6));
    EXPECT_EQ(poset_from_spec("antichain 4"), Poset::antichain(4));
    EXPECT_THROW(poset_from_spec("chain x"), ParseError);
    EXPECT_THROW(poset_from_spec("tree 3"), ParseError);
    const std::string path = ::testing::TempDir() + "kpat_spec.poset";
    {
        std::ofstream out(path);
        out << "2\n1 2\n";
    }
    EXPECT_EQ(poset_from_spec("file " + path), Poset::chain(2));
    EXPECT_EQ(poset_from_spec(path), Poset::chain(2));
}

TEST(PosetText, DataFilesParse) {
    const Poset fig = read_poset_file(std::string(KPAT_DATA_DIR) + "/pattern_example.poset");
    EXPECT_EQ(fig, pattern_example());
    const Poset pd = read_poset_file(std::string(KPAT_DATA_DIR) + "/p_diamond.poset");
    EXPECT_EQ(pd.size(), 13u);
    EXPECT_EQ(pd.relation_count(), 36u);
}

TEST(Enumerate, KnownCounts) {
    const std::vector<std::size_t> want{1, 1, 2, 5, 16, 63, 318, 2045};
    for (std::size_t n = 0; n < want.size(); ++n) EXPECT_EQ(posets_of_size(n).size(), want[n]) << "n = " << n;
}

TEST(Enumerate, MatchesBruteForceGenerator) {
    for (std::size_t n = 0; n <= 5; ++n) EXPECT_EQ(posets_of_size(n).size(), testkit::brute_poset_count(n));
}

TEST(Enumerate, RepresentativesArePairwiseNonIsomorphic) {
    const auto ps = posets_of_size(5);
    std::set<std::vector<bool>> codes;
    for (const auto& p : ps) codes.insert(testkit::brute_canonical(p));
    EXPECT_EQ(codes.size(), ps.size());
}
