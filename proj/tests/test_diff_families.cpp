#include "support.hpp"

#include <gtest/gtest.h>

using namespace nestkit;
namespace nt = nestkit::testing;

namespace {

std::vector<Residue> ints(const std::vector<GroupElement> &xs)
{
    std::vector<Residue> out;
    for (const auto &x : xs)
        out.push_back(x.residues.at(0));
    return out;
}

DifferenceFamily z13_bdf() { return nt::cyclic_family(13, 1, {{7, 8, 11}, {4, 10, 12}}); }

} // namespace

TEST(DeltaList, Examples)
{
    std::vector<Residue> all(12);
    std::iota(all.begin(), all.end(), 1);
    auto d = ints(delta_list(z13_bdf()));
    std::sort(d.begin(), d.end());
    EXPECT_EQ(d, all);

    EXPECT_EQ(ints(delta_list(nt::cyclic_family(5, 1, {{0, 1}}))), (std::vector<Residue>{1, 4}));
    EXPECT_EQ(ints(delta_list(nt::cyclic_family(7, 1, {{0, 1, 3}}))), (std::vector<Residue>{1, 6, 3, 4, 2, 5}));
}

TEST(DeltaList, TranslationInvariant)
{
    std::mt19937_64 rng(23);
    for (const auto &F : nt::corpus_families()) {
        const auto &G = F.group();
        std::vector<GroupSubset> moved;
        for (const auto &b : F.blocks())
            moved.push_back(translate(b, G.element_at(static_cast<Residue>(rng() % G.order()))));
        DifferenceFamily T(G, F.k(), F.lambda(), moved);
        auto a = delta_list(F), b = delta_list(T);
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        EXPECT_EQ(a, b) << F.to_string();
        EXPECT_TRUE(verify_df(T).ok);
    }
}

TEST(VerifyDf, Examples)
{
    auto F = z13_bdf();
    auto r = verify_bdf(F);
    EXPECT_TRUE(r.df.ok);
    EXPECT_TRUE(r.ok);
    EXPECT_EQ(negate(F.block(0)), GroupSubset::of_integers(F.group(), {6, 5, 2}));
    EXPECT_EQ(negate(F.block(1)), GroupSubset::of_integers(F.group(), {9, 3, 1}));

    auto with_zero = verify_bdf(nt::cyclic_family(7, 1, {{0, 1, 3}}));
    EXPECT_TRUE(with_zero.df.ok);
    EXPECT_FALSE(with_zero.ok);
    ASSERT_TRUE(with_zero.shared);
    EXPECT_EQ(*with_zero.shared, AbelianGroup::cyclic(7).make(0));

    auto fano = verify_bdf(nt::cyclic_family(7, 1, {{1, 2, 4}}));
    EXPECT_TRUE(fano.ok);

    auto not_df = verify_df(nt::cyclic_family(7, 1, {{0, 1, 2}}));
    EXPECT_FALSE(not_df.ok);
    ASSERT_TRUE(not_df.witness);
}

TEST(VerifyBdf, ReportsCollidingSets)
{
    // Both blocks are fine alone; F1 meets -F0.
    auto F = nt::cyclic_family(13, 1, {{7, 8, 11}, {5, 10, 12}});
    auto r = verify_bdf(F);
    EXPECT_FALSE(r.ok);
    ASSERT_TRUE(r.collision);
    EXPECT_EQ(r.collision->first.block, 0u);
    EXPECT_TRUE(r.collision->first.negated);
    EXPECT_EQ(r.collision->second.block, 1u);
    EXPECT_FALSE(r.collision->second.negated);
}

TEST(Develop, Examples)
{
    auto fano = develop(nt::cyclic_family(7, 1, {{1, 2, 4}}));
    EXPECT_EQ(fano.block_count(), 7u);
    EXPECT_TRUE(verify_bibd(fano).ok);

    auto d13 = develop(z13_bdf());
    EXPECT_EQ(d13.block_count(), 26u);
    EXPECT_TRUE(nt::oracle_is_bibd(13, 1, nt::plain_blocks(d13)));

    auto empty = develop(DifferenceFamily(AbelianGroup::cyclic(7), 3, 0, {}));
    EXPECT_EQ(empty.block_count(), 0u);

    EXPECT_THROW(develop(nt::cyclic_family(7, 1, {{0, 1, 2}})), PreconditionError);
}

TEST(Develop, CorpusCoverageIsExactlyLambda)
{
    ASSERT_GE(nt::corpus_designs().size(), 20u);
    for (const auto &d : nt::corpus_designs()) {
        EXPECT_LE(d.v(), 31);
        EXPECT_TRUE(nt::oracle_is_bibd(d.v(), d.lambda(), nt::plain_blocks(d))) << d.v() << " " << d.k();
    }
}

TEST(DevelopWithAnchor, Examples)
{
    auto fano = develop_with_anchor(nt::cyclic_family(7, 1, {{1, 2, 4}}));
    EXPECT_TRUE(nt::oracle_is_bibd(7, 2, nt::plain_blocks(fano.nested())));

    auto c13 = develop_with_anchor(z13_bdf());
    EXPECT_EQ(c13.nested().block_count(), 26u);
    EXPECT_EQ(c13.nested().k(), 4);
    EXPECT_LE(nt::oracle_max_pair(nt::plain_blocks(c13.nested())), 2);
    // 26 blocks of size 4 cover 156 = 2 * C(13,2) pairs, so the packing is a BIBD.
    EXPECT_TRUE(is_perfect_nesting(c13));
    EXPECT_TRUE(nt::oracle_is_bibd(13, 2, nt::plain_blocks(c13.nested())));

    auto F = nt::cyclic_family(13, 1, {{1, 2, 4, 10}});
    ASSERT_TRUE(verify_bdf(F).ok);
    EXPECT_FALSE(bad_translations(F.block(0)).contains(F.group().zero()));
    auto c = develop_with_anchor(F);
    EXPECT_EQ(c.nested().k(), 5);
    EXPECT_LE(nt::oracle_max_pair(nt::plain_blocks(c.nested())), 2);
    EXPECT_TRUE(nt::oracle_is_bibd(13, 1, nt::plain_blocks(c.base())));

    EXPECT_THROW(develop_with_anchor(nt::cyclic_family(7, 1, {{0, 1, 3}})), PreconditionError);
}

TEST(DevelopWithAnchor, AnchorOfTranslateIsTheShift)
{
    auto F = z13_bdf();
    auto c = develop_with_anchor(F);
    const auto &G = F.group();
    for (std::size_t i = 0; i < c.base().block_count(); ++i) {
        auto g = G.element_at(static_cast<Residue>(i % G.order()));
        auto expected = translate(F.block(i / G.order()), g);
        Block b;
        for (auto idx : expected.indices())
            b.push_back(static_cast<Point>(idx));
        EXPECT_EQ(c.base().block(i), b);
        EXPECT_EQ(c.anchor(i), static_cast<Point>(G.index_of(g)));
    }
}

TEST(SearchDf, Examples)
{
    auto z7 = search_df(AbelianGroup::cyclic(7), 3, 1, 100'000);
    ASSERT_EQ(z7.outcome, Outcome::found);
    EXPECT_EQ(z7.family->size(), 1u);
    EXPECT_TRUE(verify_df(*z7.family).ok);

    auto z13 = search_df(AbelianGroup::cyclic(13), 3, 1, 100'000);
    ASSERT_EQ(z13.outcome, Outcome::found);
    EXPECT_EQ(z13.family->size(), 2u);

    EXPECT_THROW(search_df(AbelianGroup::cyclic(8), 3, 1, 1000), PreconditionError);
}

TEST(SearchDf, ExhaustionAndBudgetAreDistinct)
{
    // No (Z10,3,2)-DF exists; the search proves it.
    auto none = search_df(AbelianGroup::cyclic(10), 3, 2, 1'000'000);
    EXPECT_EQ(none.outcome, Outcome::nonexistent);
    EXPECT_FALSE(none.family);

    auto starved = search_df(AbelianGroup::cyclic(31), 3, 1, 3);
    EXPECT_EQ(starved.outcome, Outcome::budget);
    EXPECT_FALSE(starved.family);
}

TEST(SearchDf, DeterministicAndSeedable)
{
    auto G = AbelianGroup::cyclic(25);
    auto a = search_df(G, 3, 1, 1'000'000), b = search_df(G, 3, 1, 1'000'000);
    ASSERT_TRUE(a.family && b.family);
    EXPECT_EQ(*a.family, *b.family);
    EXPECT_EQ(a.nodes, b.nodes);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto r = search_df(G, 3, 1, 1'000'000, seed);
        ASSERT_TRUE(r.family);
        EXPECT_TRUE(verify_df(*r.family).ok);
    }
}

TEST(DfToBdf, Examples)
{
    auto z7 = df_to_bdf(nt::cyclic_family(7, 1, {{0, 1, 3}}));
    ASSERT_TRUE(z7.found);
    EXPECT_TRUE(verify_bdf(*z7.bdf).ok);

    auto src = nt::cyclic_family(13, 1, {{0, 1, 4}, {0, 2, 7}});
    auto z13 = df_to_bdf(src);
    ASSERT_TRUE(z13.found);
    EXPECT_TRUE(verify_bdf(*z13.bdf).ok);
    for (std::size_t i = 0; i < src.size(); ++i)
        EXPECT_EQ(translate(src.block(i), z13.translations[i]), z13.bdf->block(i));

    auto G = AbelianGroup::parse("Z2xZ2xZ2");
    auto F = search_df(G, 7, 6, 100'000);
    ASSERT_TRUE(F.family);
    auto r = df_to_bdf(*F.family);
    EXPECT_FALSE(r.found);
    EXPECT_EQ(build_bdf_hypergraph(*F.family).edge_count(), 0u);
}

TEST(DfToBdf, BruteForceAgreesOnSmallCyclicFamilies)
{
    for (const auto &F : nt::corpus_families()) {
        if (!F.group().is_cyclic() || F.size() > 3)
            continue;
        const auto v = F.group().order();
        // Try every translation tuple.
        bool exists = false;
        std::vector<Residue> t(F.size(), 0);
        while (!exists) {
            std::vector<GroupSubset> moved;
            for (std::size_t i = 0; i < F.size(); ++i)
                moved.push_back(translate(F.block(i), F.group().make(t[i])));
            exists = verify_bdf(DifferenceFamily(F.group(), F.k(), F.lambda(), moved)).ok;
            std::size_t i = 0;
            while (i < t.size() && ++t[i] == v)
                t[i++] = 0;
            if (i == t.size())
                break;
        }
        auto r = df_to_bdf(F);
        EXPECT_EQ(r.found, exists) << F.to_string();
        if (r.found) {
            auto rep = verify_bdf(*r.bdf);
            EXPECT_TRUE(rep.ok);
            for (std::size_t i = 0; i < r.bdf->size(); ++i)
                for (std::size_t j = 0; j < r.bdf->size(); ++j) {
                    EXPECT_FALSE(negate(r.bdf->block(i)).intersects(r.bdf->block(j)));
                    if (i != j) {
                        EXPECT_FALSE(r.bdf->block(i).intersects(r.bdf->block(j)));
                    }
                }
        }
    }
}
