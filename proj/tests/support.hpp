#pragma once

// Shared fixtures and independent oracles for the test binaries. The oracles
// deliberately avoid the library's own counting code: they work on plain
// integers with std::map / std::set so that a bug in one side shows up as a
// disagreement.

#include <nestkit/nestkit.hpp>

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace nestkit::testing {

#ifndef NESTKIT_DATA_DIR
#define NESTKIT_DATA_DIR "data"
#endif

inline std::string data_path(const std::string &name) { return std::string(NESTKIT_DATA_DIR) + "/" + name; }

// ---------------------------------------------------------------------------
// Corpus: difference families found by search_df, developed into BIBDs.

struct CorpusSpec
{
    const char *group;
    int k;
    int lambda;
};

inline const std::vector<CorpusSpec> &corpus_specs()
{
    static const std::vector<CorpusSpec> specs = {
        {"Z5", 2, 1},      {"Z7", 3, 1},      {"Z13", 3, 1},      {"Z19", 3, 1},        {"Z25", 3, 1},
        {"Z31", 3, 1},     {"Z13", 4, 1},     {"Z21", 5, 1},      {"Z31", 6, 1},        {"Z7", 3, 2},
        {"Z13", 3, 2},     {"Z7", 4, 2},      {"Z13", 4, 2},      {"Z11", 5, 2},        {"Z9", 3, 3},
        {"Z11", 3, 3},     {"Z15", 3, 3},     {"Z9", 4, 3},       {"Z15", 7, 3},        {"Z19", 9, 4},
        {"Z3xZ3", 3, 3},   {"Z3xZ3", 4, 3},   {"Z4xZ4", 6, 2},    {"Z5xZ5", 4, 1},      {"Z2xZ2xZ2", 7, 6},
        {"Z2xZ2xZ2xZ2", 6, 2},
    };
    return specs;
}

inline const std::vector<DifferenceFamily> &corpus_families()
{
    static const std::vector<DifferenceFamily> families = [] {
        std::vector<DifferenceFamily> out;
        for (const auto &s : corpus_specs()) {
            auto r = search_df(AbelianGroup::parse(s.group), s.k, s.lambda, 1'000'000);
            if (r.family)
                out.push_back(*r.family);
        }
        return out;
    }();
    return families;
}

inline const std::vector<Design> &corpus_designs()
{
    static const std::vector<Design> designs = [] {
        std::vector<Design> out;
        for (const auto &F : corpus_families())
            out.push_back(develop(F));
        return out;
    }();
    return designs;
}

inline Design fano()
{
    return Design(7, 3, 1, {{0, 1, 3}, {1, 2, 4}, {2, 3, 5}, {3, 4, 6}, {0, 4, 5}, {1, 5, 6}, {0, 2, 6}});
}

inline Design pg2_3()
{
    std::vector<Block> blocks;
    for (int a = 0; a < 13; ++a) {
        Block b;
        for (int x : {0, 1, 3, 9})
            b.push_back((x + a) % 13);
        blocks.push_back(b);
    }
    return Design(13, 4, 1, std::move(blocks));
}

inline DifferenceFamily cyclic_family(int v, int lambda, const std::vector<std::vector<Residue>> &blocks)
{
    auto G = AbelianGroup::cyclic(v);
    std::vector<GroupSubset> subsets;
    for (const auto &b : blocks)
        subsets.push_back(GroupSubset::of_integers(G, std::span<const Residue>(b)));
    int k = static_cast<int>(blocks.front().size());
    return DifferenceFamily(G, k, lambda, std::move(subsets));
}

// ---------------------------------------------------------------------------
// Oracles

using PairMap = std::map<std::pair<int, int>, int>;

inline PairMap oracle_pair_counts(const std::vector<std::vector<int>> &blocks)
{
    PairMap m;
    for (const auto &b : blocks)
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = 0; j < b.size(); ++j)
                if (b[i] < b[j])
                    ++m[{b[i], b[j]}];
    return m;
}

inline std::vector<std::vector<int>> plain_blocks(const Design &d)
{
    return {d.blocks().begin(), d.blocks().end()};
}

/// Every pair of 0..v-1 covered exactly `lambda` times.
inline bool oracle_is_bibd(int v, int lambda, const std::vector<std::vector<int>> &blocks)
{
    auto m = oracle_pair_counts(blocks);
    for (int p = 0; p < v; ++p)
        for (int q = p + 1; q < v; ++q) {
            auto it = m.find({p, q});
            if ((it == m.end() ? 0 : it->second) != lambda)
                return false;
        }
    return true;
}

inline int oracle_max_pair(const std::vector<std::vector<int>> &blocks)
{
    int best = 0;
    for (const auto &[pair, c] : oracle_pair_counts(blocks))
        best = std::max(best, c);
    return best;
}

/// Least t > 0 with (k1-1) | t l1 and (k2-1) | t l2, by linear scan.
inline std::int64_t oracle_alpha(std::int64_t k1, std::int64_t l1, std::int64_t k2, std::int64_t l2,
                                 std::int64_t limit = 10'000)
{
    for (std::int64_t t = 1; t <= limit; ++t)
        if ((t * l1) % (k1 - 1) == 0 && (t * l2) % (k2 - 1) == 0)
            return t;
    return -1;
}

/// Least m > 0 with k1(k1-1) | m l1, by linear scan.
inline std::int64_t oracle_beta(std::int64_t k1, std::int64_t l1, std::int64_t limit = 10'000)
{
    for (std::int64_t m = 1; m <= limit; ++m)
        if ((m * l1) % (k1 * (k1 - 1)) == 0)
            return m;
    return -1;
}

/// Group elements as index vectors; arithmetic done componentwise by hand.
struct PlainGroup
{
    std::vector<std::int64_t> orders;

    std::vector<std::vector<std::int64_t>> all() const
    {
        std::vector<std::vector<std::int64_t>> out{{}};
        for (auto n : orders) {
            std::vector<std::vector<std::int64_t>> next;
            for (const auto &p : out)
                for (std::int64_t x = 0; x < n; ++x) {
                    auto q = p;
                    q.push_back(x);
                    next.push_back(q);
                }
            out = std::move(next);
        }
        return out;
    }
    std::vector<std::int64_t> add(std::vector<std::int64_t> a, const std::vector<std::int64_t> &b) const
    {
        for (std::size_t i = 0; i < a.size(); ++i)
            a[i] = (a[i] + b[i]) % orders[i];
        return a;
    }
    std::vector<std::int64_t> neg(std::vector<std::int64_t> a) const
    {
        for (std::size_t i = 0; i < a.size(); ++i)
            a[i] = (orders[i] - a[i]) % orders[i];
        return a;
    }
};

/// Number of a with -(B+a) meeting B+a, straight from the definition.
inline std::size_t oracle_bad_count(const PlainGroup &G, const std::vector<std::vector<std::int64_t>> &B)
{
    std::size_t bad = 0;
    for (const auto &a : G.all()) {
        std::set<std::vector<std::int64_t>> shifted, negs;
        for (const auto &b : B) {
            shifted.insert(G.add(b, a));
            negs.insert(G.neg(G.add(b, a)));
        }
        bool meet = std::any_of(negs.begin(), negs.end(), [&](const auto &x) { return shifted.count(x) > 0; });
        bad += meet;
    }
    return bad;
}

/// Number of involutions, from the definition.
inline std::int64_t oracle_involutions(const PlainGroup &G)
{
    std::int64_t c = 0;
    for (const auto &g : G.all()) {
        bool zero = std::all_of(g.begin(), g.end(), [](auto x) { return x == 0; });
        if (!zero && G.add(g, g) == std::vector<std::int64_t>(g.size(), 0))
            ++c;
    }
    return c;
}

// ---------------------------------------------------------------------------
// Random instances

inline BipartiteHypergraph random_hypergraph(std::mt19937_64 &rng, int max_left = 6)
{
    std::uniform_int_distribution<int> left_d(1, max_left), right_d(2, 9), arity_d(1, 3), edges_d(0, 4);
    int left = left_d(rng);
    int right = right_d(rng);
    int arity = std::min(arity_d(rng), right);
    std::vector<int> pool(right);
    std::iota(pool.begin(), pool.end(), 0);
    std::vector<HyperEdge> edges;
    for (int a = 0; a < left; ++a) {
        int n = edges_d(rng);
        for (int e = 0; e < n; ++e) {
            std::shuffle(pool.begin(), pool.end(), rng);
            std::vector<int> r(pool.begin(), pool.begin() + arity);
            std::sort(r.begin(), r.end());
            edges.push_back({a, r, {static_cast<std::size_t>(a), e}});
        }
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    return BipartiteHypergraph(left, right, arity, std::move(edges));
}

} // namespace nestkit::testing
