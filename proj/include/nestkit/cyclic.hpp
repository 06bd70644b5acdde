#pragma once

#include "designs.hpp"
#include "diff_families.hpp"
#include "errors.hpp"
#include "groups.hpp"
#include "hypergraph.hpp"
#include "matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace nestkit {

/// Lexicographically least translate of a block over Z_v.
inline Block canonical_translate(int v, std::span<const Point> block)
{
    Block best(block.begin(), block.end());
    std::sort(best.begin(), best.end());
    for (int a = 1; a < v; ++a) {
        auto t = cyclic_translate(v, block, a);
        if (t < best)
            best = std::move(t);
    }
    return best;
}

/// Cyclic BIBD over Z_v given by one base block per block orbit. Bases are
/// stored as their least translates.
class CyclicBibd
{
public:
    CyclicBibd(int v, int k, int lambda, std::vector<Block> bases) : v_(v), k_(k), lambda_(lambda)
    {
        if (v_ < 1 || k_ < 1 || k_ > v_ || lambda_ < 1)
            throw StructureError("cyclic design needs v >= k >= 1 and lambda >= 1");
        for (std::size_t i = 0; i < bases.size(); ++i) {
            auto b = bases[i];
            std::sort(b.begin(), b.end());
            if (static_cast<int>(b.size()) != k_ || std::adjacent_find(b.begin(), b.end()) != b.end())
                throw StructureError("base block " + std::to_string(i) + " is not a " + std::to_string(k_) + "-set");
            if (b.front() < 0 || b.back() >= v_)
                throw StructureError("base block " + std::to_string(i) + " has a point outside Z_" +
                                     std::to_string(v_));
            bases_.push_back(canonical_translate(v_, b));
        }
        for (std::size_t i = 0; i < bases_.size(); ++i)
            for (std::size_t j = i + 1; j < bases_.size(); ++j)
                if (bases_[i] == bases_[j])
                    throw StructureError("base blocks " + std::to_string(i) + " and " + std::to_string(j) +
                                         " lie in the same orbit");
        if (auto rep = verify_bibd(develop()); !rep.ok)
            throw StructureError("orbits do not form a (" + std::to_string(v_) + "," + std::to_string(k_) + "," +
                                 std::to_string(lambda_) + ")-BIBD: pair " + format_pair(*rep.witness) +
                                 " is covered " + std::to_string(rep.witness_count) + " times");
    }

    int v() const { return v_; }
    int k() const { return k_; }
    int lambda() const { return lambda_; }
    std::span<const Block> bases() const { return bases_; }

    /// All distinct translates of every base block, orbit by orbit.
    Design develop() const
    {
        std::vector<Block> blocks;
        for (const auto &b : bases_) {
            int length = v_ / cyclic_stabilizer_size(v_, b);
            for (int a = 0; a < length; ++a)
                blocks.push_back(cyclic_translate(v_, b, a));
        }
        return Design(v_, k_, lambda_, std::move(blocks));
    }

private:
    int v_, k_, lambda_;
    std::vector<Block> bases_;
};

enum class OrbitKind
{
    short_orbit,
    full,
};

struct Orbit
{
    Block base;
    int length = 0;
    OrbitKind kind = OrbitKind::full;
};

inline std::vector<Orbit> decompose_orbits(const CyclicBibd &c)
{
    std::vector<Orbit> out;
    for (const auto &b : c.bases()) {
        int length = c.v() / cyclic_stabilizer_size(c.v(), b);
        out.push_back({b, length, length == c.v() ? OrbitKind::full : OrbitKind::short_orbit});
    }
    return out;
}

/// h <= 2 lambda sqrt(k), and lambda(v-1)/(k(k-1)) - 2 lambda sqrt(k) <= m <= lambda(v-1)/(k(k-1)).
struct OrbitBoundsReport
{
    int h = 0, m = 0;
    double h_bound = 0;
    double m_low = 0, m_high = 0;
    bool h_ok = true, m_ok = true;
    bool ok = true;

    double h_slack() const { return h_bound - h; }
    double m_low_slack() const { return m - m_low; }
    double m_high_slack() const { return m_high - m; }
};

inline OrbitBoundsReport check_orbit_bounds(const CyclicBibd &c)
{
    OrbitBoundsReport r;
    for (const auto &o : decompose_orbits(c))
        (o.kind == OrbitKind::full ? r.m : r.h)++;
    double lam = c.lambda(), k = c.k(), v = c.v();
    r.h_bound = 2 * lam * std::sqrt(k);
    r.m_high = k > 1 ? lam * (v - 1) / (k * (k - 1)) : 0;
    r.m_low = r.m_high - r.h_bound;
    constexpr double eps = 1e-9;
    r.h_ok = r.h <= r.h_bound + eps;
    r.m_ok = r.m >= r.m_low - eps && r.m <= r.m_high + eps;
    r.ok = r.h_ok && r.m_ok;
    return r;
}

struct ShortPlacement
{
    bool ok = true;
    std::vector<std::int64_t> translations;  ///< a_i for each placed short base, in input order
    std::vector<Point> T;                    ///< union of the placed blocks, sorted
    std::vector<std::size_t> blocking_sizes; ///< number of translations blocked at each step
    std::optional<std::size_t> failed_at;    ///< index of the base that found no free translate
};

/// Greedy: a_1 = 0, then each a_i is the least translation with B_i + a_i
/// avoiding all blocks placed so far.
inline ShortPlacement place_short_orbits(std::span<const Block> short_bases, int v)
{
    ShortPlacement r;
    auto Zv = AbelianGroup::cyclic(v);
    std::vector<Point> T;
    for (std::size_t i = 0; i < short_bases.size(); ++i) {
        std::vector<Residue> b(short_bases[i].begin(), short_bases[i].end());
        std::vector<Residue> t(T.begin(), T.end());
        auto blocked = blocking_translations(GroupSubset::of_integers(Zv, b), GroupSubset::of_integers(Zv, t));
        r.blocking_sizes.push_back(blocked.size());
        std::optional<int> pick;
        for (int a = 0; a < v && !pick; ++a)
            if (!blocked.contains(Zv.make(a)))
                pick = a;
        if (!pick) {
            r.ok = false;
            r.failed_at = i;
            break;
        }
        r.translations.push_back(*pick);
        for (auto x : cyclic_translate(v, short_bases[i], *pick))
            T.push_back(x);
        std::sort(T.begin(), T.end());
    }
    r.T = std::move(T);
    return r;
}

struct SelectionReport
{
    bool ok = true;
    std::optional<std::size_t> not_in_orbit;                    ///< selected block that is not a translate of its base
    std::optional<std::pair<std::size_t, std::size_t>> overlap; ///< two selected blocks sharing a point
};

/// One block per orbit (in base order): each must be a translate of its base,
/// and all must be pairwise disjoint.
inline SelectionReport verify_disjoint_selection(const CyclicBibd &c, std::span<const Block> selection)
{
    if (selection.size() != c.bases().size())
        throw StructureError("selection has " + std::to_string(selection.size()) + " blocks for " +
                             std::to_string(c.bases().size()) + " orbits");
    SelectionReport r;
    std::vector<int> owner(c.v(), -1);
    for (std::size_t i = 0; i < selection.size(); ++i) {
        Block b = selection[i];
        std::sort(b.begin(), b.end());
        bool in_range = static_cast<int>(b.size()) == c.k() && !b.empty() && b.front() >= 0 && b.back() < c.v() &&
                        std::adjacent_find(b.begin(), b.end()) == b.end();
        if (!in_range || canonical_translate(c.v(), b) != c.bases()[i]) {
            r.not_in_orbit = i;
            r.ok = false;
            return r;
        }
        for (auto x : b) {
            if (owner[x] >= 0 && !r.overlap)
                r.overlap = std::pair{static_cast<std::size_t>(owner[x]), i};
            owner[x] = static_cast<int>(i);
        }
    }
    r.ok = !r.overlap;
    return r;
}

enum class NovakOutcome
{
    found,
    placement_failed,     ///< greedy could not place the short orbits
    matching_nonexistent, ///< exhaustive search: no matching for the placement tried
    budget,
};

inline std::string_view to_string(NovakOutcome o)
{
    switch (o) {
    case NovakOutcome::found:
        return "found";
    case NovakOutcome::placement_failed:
        return "short-orbit placement failed";
    case NovakOutcome::matching_nonexistent:
        return "no matching for this short-orbit placement";
    case NovakOutcome::budget:
        return "budget exhausted";
    }
    return "?";
}

struct NovakResult
{
    NovakOutcome outcome = NovakOutcome::budget;
    std::vector<std::int64_t> translations; ///< per orbit: selected block = base + translation
    std::vector<Block> selection;           ///< per orbit, in base order
    ShortPlacement placement;
    SolveResult solve;
    int placement_attempts = 0;
};

/// Greedy placement of short orbits, then an A-perfect matching over the
/// full-orbit bases in the points left free. `placement_attempts` > 1 retries
/// with further permutations of the short orbits (lexicographic order of
/// permutations) whenever an attempt fails.
inline NovakResult novak_select(const CyclicBibd &c, const SolverConfig &cfg = {}, int placement_attempts = 1)
{
    if (placement_attempts < 1)
        throw PreconditionError("placement_attempts must be positive");
    auto orbits = decompose_orbits(c);
    std::vector<std::size_t> short_idx, full_idx;
    for (std::size_t i = 0; i < orbits.size(); ++i)
        (orbits[i].kind == OrbitKind::full ? full_idx : short_idx).push_back(i);
    std::vector<Block> full_bases;
    for (auto i : full_idx)
        full_bases.push_back(orbits[i].base);

    NovakResult res;
    auto perm = short_idx;
    for (int attempt = 0; attempt < placement_attempts; ++attempt) {
        res.placement_attempts = attempt + 1;
        std::vector<Block> short_bases;
        for (auto i : perm)
            short_bases.push_back(orbits[i].base);
        res.placement = place_short_orbits(short_bases, c.v());
        if (!res.placement.ok) {
            res.outcome = NovakOutcome::placement_failed;
        } else {
            auto H = build_novak_hypergraph(c.v(), full_bases, res.placement.T);
            res.solve = solve(H, cfg);
            if (res.solve.outcome == Outcome::found) {
                res.translations.assign(orbits.size(), 0);
                for (std::size_t j = 0; j < perm.size(); ++j)
                    res.translations[perm[j]] = res.placement.translations[j];
                for (auto e : *res.solve.matching) {
                    const auto &p = H.edge(e).payload;
                    res.translations[full_idx[p.block]] = p.translation;
                }
                for (std::size_t i = 0; i < orbits.size(); ++i)
                    res.selection.push_back(cyclic_translate(c.v(), orbits[i].base, res.translations[i]));
                if (!verify_disjoint_selection(c, res.selection).ok)
                    throw std::logic_error("decoded Novak selection is not disjoint");
                res.outcome = NovakOutcome::found;
                return res;
            }
            res.outcome = res.solve.outcome == Outcome::nonexistent ? NovakOutcome::matching_nonexistent
                                                                    : NovakOutcome::budget;
            if (res.outcome == NovakOutcome::budget)
                return res;
        }
        if (!std::next_permutation(perm.begin(), perm.end()))
            break;
    }
    return res;
}

struct CyclicSearchResult
{
    Outcome outcome = Outcome::budget;
    std::optional<CyclicBibd> design;
    std::uint64_t nodes = 0;
};

/// Completes the given short-orbit bases to a cyclic (v, k, lambda)-BIBD by
/// searching for full-orbit bases. Deterministic for fixed budget and seed.
inline CyclicSearchResult search_cyclic_bibd(int v, int k, int lambda, std::span<const Block> short_bases,
                                             std::uint64_t budget, std::uint64_t seed = 0)
{
    if (k < 2 || k > v || lambda < 1)
        throw PreconditionError("search_cyclic_bibd needs 2 <= k <= v and lambda >= 1");
    // A short orbit of length L covers each of its differences (count in the
    // base block) * L / v times.
    std::vector<std::int64_t> target(v, lambda);
    target[0] = 0;
    for (const auto &b : short_bases) {
        if (static_cast<int>(b.size()) != k)
            throw StructureError("short base " + format_block(b) + " is not a " + std::to_string(k) + "-set");
        int stab = cyclic_stabilizer_size(v, b);
        std::vector<std::int64_t> cnt(v, 0);
        for (auto x : b)
            for (auto y : b)
                if (x != y)
                    ++cnt[((x - y) % v + v) % v];
        for (int d = 1; d < v; ++d) {
            if (cnt[d] % stab)
                throw StructureError("inconsistent short orbit " + format_block(b));
            target[d] -= cnt[d] / stab;
        }
    }
    CyclicSearchResult r;
    if (std::any_of(target.begin(), target.end(), [](auto t) { return t < 0; })) {
        r.outcome = Outcome::nonexistent;
        return r;
    }
    std::int64_t remaining = std::accumulate(target.begin(), target.end(), std::int64_t{0});
    std::int64_t per_block = static_cast<std::int64_t>(k) * (k - 1);
    if (remaining % per_block) {
        r.outcome = Outcome::nonexistent;
        return r;
    }
    detail::BaseBlockSearch search(AbelianGroup::cyclic(v), k, std::move(target), budget, seed);
    r.outcome = search.run(static_cast<std::size_t>(remaining / per_block));
    r.nodes = search.nodes();
    if (r.outcome == Outcome::found) {
        std::vector<Block> bases(short_bases.begin(), short_bases.end());
        for (const auto &b : search.blocks())
            bases.emplace_back(b.begin(), b.end());
        try {
            r.design.emplace(v, k, lambda, std::move(bases));
        } catch (const StructureError &) {
            // The blocks found repeat an orbit or have a short orbit; that is
            // no proof of nonexistence.
            r.outcome = Outcome::budget;
            r.design.reset();
        }
    }
    return r;
}

} // namespace nestkit
