#pragma once

#include "diff_families.hpp"
#include "hypergraph.hpp"
#include "matching.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace nestkit {

struct NestingSearch
{
    std::optional<NestingCertificate> certificate;
    SolveResult solve;
};

/// Looks for a nesting of a BIBD through an A-perfect matching of its nesting
/// hypergraph; each matched edge (B, a) anchors B at a.
inline NestingSearch find_nesting(const Design &d, const SolverConfig &cfg = {})
{
    auto H = build_nesting_hypergraph(d);
    NestingSearch out;
    out.solve = solve(H, cfg);
    if (out.solve.outcome != Outcome::found)
        return out;
    std::vector<Point> anchors(d.block_count());
    for (auto e : *out.solve.matching) {
        const auto &p = H.edge(e).payload;
        anchors[p.block] = static_cast<Point>(p.translation);
    }
    out.certificate = apply_nesting(d, anchors);
    return out;
}

struct BdfConversion
{
    bool found = false;
    std::optional<DifferenceFamily> bdf;
    std::vector<GroupElement> translations; ///< one per base block, in input order
    SolveResult solve;                      ///< solver statistics; an exhaustive miss is still only "not found"
};

/// Replaces each base block of a difference family by a translate so that the
/// result is a Banff difference family, via an A-perfect matching of the
/// Banff hypergraph.
inline BdfConversion df_to_bdf(const DifferenceFamily &F, const SolverConfig &cfg = {})
{
    auto H = build_bdf_hypergraph(F);
    BdfConversion out;
    out.solve = solve(H, cfg);
    if (out.solve.outcome != Outcome::found)
        return out;

    const auto &G = F.group();
    std::vector<GroupSubset> blocks;
    for (auto e : *out.solve.matching) {
        const auto &p = H.edge(e).payload;
        auto a = G.element_at(p.translation);
        blocks.push_back(translate(F.block(p.block), a));
        out.translations.push_back(std::move(a));
    }
    DifferenceFamily bdf(G, F.k(), F.lambda(), std::move(blocks));
    if (!verify_bdf(bdf).ok)
        throw std::logic_error("decoded matching is not a Banff difference family");
    out.bdf = std::move(bdf);
    out.found = true;
    return out;
}

} // namespace nestkit
