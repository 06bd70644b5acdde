#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nestkit {

using Point = int;
using Block = std::vector<Point>;
using PointPair = std::pair<Point, Point>;

inline std::string format_block(std::span<const Point> b)
{
    std::string s = "{";
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(b[i]);
    }
    return s + "}";
}

inline std::string format_pair(const PointPair &p)
{
    return "{" + std::to_string(p.first) + "," + std::to_string(p.second) + "}";
}

/// Points 0..v-1 and a multiset of k-blocks with nominal pair index lambda.
/// Blocks are stored sorted; block order is preserved.
class Design
{
public:
    Design(int v, int k, int lambda, std::vector<Block> blocks)
        : v_(v), k_(k), lambda_(lambda), blocks_(std::move(blocks))
    {
        if (v_ < 1)
            throw StructureError("v must be positive");
        if (k_ < 1 || k_ > v_)
            throw StructureError("block size k=" + std::to_string(k_) + " must be in [1, v]");
        if (lambda_ < 0)
            throw StructureError("lambda must be nonnegative");
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            auto &b = blocks_[i];
            if (static_cast<int>(b.size()) != k_)
                throw StructureError("block " + std::to_string(i) + " has " + std::to_string(b.size()) +
                                     " points, expected k=" + std::to_string(k_));
            std::sort(b.begin(), b.end());
            if (b.front() < 0 || b.back() >= v_)
                throw StructureError("block " + std::to_string(i) + " has a point outside [0, " + std::to_string(v_) +
                                     ")");
            if (std::adjacent_find(b.begin(), b.end()) != b.end())
                throw StructureError("block " + std::to_string(i) + " repeats a point");
        }
    }

    int v() const { return v_; }
    int k() const { return k_; }
    int lambda() const { return lambda_; }
    std::span<const Block> blocks() const { return blocks_; }
    const Block &block(std::size_t i) const { return blocks_.at(i); }
    std::size_t block_count() const { return blocks_.size(); }

    /// lambda v(v-1) / (k(k-1)) when integral.
    static std::optional<std::int64_t> bibd_block_count(std::int64_t v, std::int64_t k, std::int64_t lambda)
    {
        if (k < 2)
            return std::nullopt;
        auto num = lambda * v * (v - 1);
        auto den = k * (k - 1);
        if (num % den)
            return std::nullopt;
        return num / den;
    }

    friend bool operator==(const Design &, const Design &) = default;

private:
    int v_, k_, lambda_;
    std::vector<Block> blocks_;
};

/// Number of blocks through each unordered pair of points.
class PairCoverage
{
public:
    explicit PairCoverage(int v) : v_(v), counts_(static_cast<std::size_t>(v) * v, 0) {}

    int v() const { return v_; }
    int count(Point p, Point q) const { return counts_[static_cast<std::size_t>(p) * v_ + q]; }

    void add_block(std::span<const Point> b)
    {
        for (std::size_t i = 0; i < b.size(); ++i)
            for (std::size_t j = i + 1; j < b.size(); ++j) {
                ++counts_[static_cast<std::size_t>(b[i]) * v_ + b[j]];
                ++counts_[static_cast<std::size_t>(b[j]) * v_ + b[i]];
            }
    }

private:
    int v_;
    std::vector<int> counts_;
};

inline PairCoverage pair_coverage(const Design &d)
{
    PairCoverage cov(d.v());
    for (const auto &b : d.blocks())
        cov.add_block(b);
    return cov;
}

struct PackingReport
{
    bool ok = true;
    std::optional<PointPair> worst_pair; ///< a pair of maximal coverage (first in lex order)
    int worst_count = 0;
};

inline PackingReport verify_packing(const Design &d)
{
    auto cov = pair_coverage(d);
    PackingReport r;
    for (Point p = 0; p < d.v(); ++p)
        for (Point q = p + 1; q < d.v(); ++q)
            if (!r.worst_pair || cov.count(p, q) > r.worst_count) {
                r.worst_pair = PointPair{p, q};
                r.worst_count = cov.count(p, q);
            }
    r.ok = r.worst_count <= d.lambda();
    return r;
}

struct BibdReport
{
    bool ok = true;
    std::optional<PointPair> witness; ///< first pair whose coverage differs from lambda
    int witness_count = 0;
};

inline BibdReport verify_bibd(const Design &d)
{
    auto cov = pair_coverage(d);
    for (Point p = 0; p < d.v(); ++p)
        for (Point q = p + 1; q < d.v(); ++q)
            if (cov.count(p, q) != d.lambda())
                return {false, PointPair{p, q}, cov.count(p, q)};
    return {};
}

// ---------------------------------------------------------------------------
// Nestings

class NestingError : public Error
{
public:
    NestingError(const std::string &what, std::optional<PointPair> pair = std::nullopt)
        : Error(what), pair_(pair)
    {
    }

    const std::optional<PointPair> &violating_pair() const { return pair_; }

private:
    std::optional<PointPair> pair_;
};

/// A design together with one extra point per block such that the enlarged
/// blocks form a (v, k+1, lambda+1)-packing. Only apply_nesting builds these,
/// so every instance has been verified.
class NestingCertificate
{
public:
    const Design &base() const { return base_; }
    std::span<const Point> anchors() const { return anchors_; }
    Point anchor(std::size_t block) const { return anchors_.at(block); }
    const Design &nested() const { return nested_; }

private:
    NestingCertificate(Design base, std::vector<Point> anchors, Design nested)
        : base_(std::move(base)), anchors_(std::move(anchors)), nested_(std::move(nested))
    {
    }

    friend NestingCertificate apply_nesting(const Design &, std::span<const Point>);

    Design base_;
    std::vector<Point> anchors_;
    Design nested_;
};

inline NestingCertificate apply_nesting(const Design &d, std::span<const Point> anchors)
{
    if (anchors.size() != d.block_count())
        throw NestingError("anchor map has " + std::to_string(anchors.size()) + " entries for " +
                           std::to_string(d.block_count()) + " blocks");
    if (d.k() + 1 > d.v())
        throw NestingError("no room to nest: k+1 exceeds v");

    std::vector<Block> enlarged;
    enlarged.reserve(d.block_count());
    for (std::size_t i = 0; i < d.block_count(); ++i) {
        const auto &b = d.block(i);
        Point a = anchors[i];
        if (a < 0 || a >= d.v())
            throw NestingError("anchor " + std::to_string(a) + " of block " + std::to_string(i) + " is not a point");
        if (std::binary_search(b.begin(), b.end(), a))
            throw NestingError("anchor " + std::to_string(a) + " lies inside block " + std::to_string(i) + " " +
                               format_block(b));
        auto e = b;
        e.insert(std::upper_bound(e.begin(), e.end(), a), a);
        enlarged.push_back(std::move(e));
    }

    Design nested(d.v(), d.k() + 1, d.lambda() + 1, std::move(enlarged));
    auto rep = verify_packing(nested);
    if (!rep.ok)
        throw NestingError("nested blocks cover pair " + format_pair(*rep.worst_pair) + " " +
                               std::to_string(rep.worst_count) + " times, more than lambda+1=" +
                               std::to_string(d.lambda() + 1),
                           rep.worst_pair);
    return NestingCertificate(d, std::vector<Point>(anchors.begin(), anchors.end()), std::move(nested));
}

/// Recomputes the BIBD property of the nested design.
inline bool is_perfect_nesting(const NestingCertificate &c) { return verify_bibd(c.nested()).ok; }

struct ConditionsReport
{
    bool ok = true;
    std::vector<std::string> failures;
};

/// Known necessary conditions: a nesting needs k >= 2 lambda + 1; a perfect
/// nesting additionally needs k = 2 lambda + 1 and v = 1 (mod 2k).
inline ConditionsReport nesting_necessary_conditions(std::int64_t v, std::int64_t k, std::int64_t lambda, bool perfect)
{
    ConditionsReport r;
    auto fail = [&](std::string s) {
        r.ok = false;
        r.failures.push_back(std::move(s));
    };
    if (k < 2 * lambda + 1)
        fail("k >= 2*lambda+1 fails: " + std::to_string(k) + " < " + std::to_string(2 * lambda + 1));
    if (perfect) {
        if (k != 2 * lambda + 1)
            fail("k = 2*lambda+1 fails: " + std::to_string(k) + " != " + std::to_string(2 * lambda + 1));
        if (k < 1 || v % (2 * k) != 1 % (2 * k))
            fail("v = 1 (mod 2k) fails: " + std::to_string(v) + " mod " + std::to_string(2 * k) + " = " +
                 std::to_string(k < 1 ? v : v % (2 * k)));
    }
    return r;
}

// ---------------------------------------------------------------------------
// Levi graph and colorings

/// Incidence graph. Vertices 0..v-1 are points, v+i is block i.
class LeviGraph
{
public:
    struct Edge
    {
        int point;
        int block_vertex;
    };

    explicit LeviGraph(const Design &d) : points_(d.v()), blocks_(static_cast<int>(d.block_count()))
    {
        degrees_.assign(static_cast<std::size_t>(points_ + blocks_), 0);
        for (std::size_t i = 0; i < d.block_count(); ++i)
            for (auto p : d.block(i)) {
                int bv = block_vertex(i);
                edges_.push_back({p, bv});
                ++degrees_[p];
                ++degrees_[bv];
            }
    }

    int point_count() const { return points_; }
    int block_count() const { return blocks_; }
    int vertex_count() const { return points_ + blocks_; }
    int block_vertex(std::size_t block) const { return points_ + static_cast<int>(block); }
    std::span<const Edge> edges() const { return edges_; }
    int degree(int vertex) const { return degrees_.at(vertex); }

private:
    int points_, blocks_;
    std::vector<Edge> edges_;
    std::vector<int> degrees_;
};

inline LeviGraph levi_graph(const Design &d) { return LeviGraph(d); }

struct Coloring
{
    int colors = 0;
    std::vector<int> assignment; ///< indexed by Levi vertex

    friend bool operator==(const Coloring &, const Coloring &) = default;
};

namespace detail {

inline bool well_formed(const LeviGraph &g, const Coloring &col)
{
    if (static_cast<int>(col.assignment.size()) != g.vertex_count())
        return false;
    return std::all_of(col.assignment.begin(), col.assignment.end(),
                       [&](int c) { return c >= 0 && c < col.colors; });
}

} // namespace detail

/// Proper, and no two edges share a color pair.
inline bool verify_harmonious(const LeviGraph &g, const Coloring &col)
{
    if (!detail::well_formed(g, col))
        return false;
    std::set<std::pair<int, int>> seen;
    for (const auto &e : g.edges()) {
        int a = col.assignment[e.point], b = col.assignment[e.block_vertex];
        if (a == b)
            return false;
        if (!seen.emplace(std::min(a, b), std::max(a, b)).second)
            return false;
    }
    return true;
}

/// Harmonious, and every pair of colors appears on exactly one edge.
inline bool verify_exact(const LeviGraph &g, const Coloring &col)
{
    if (!verify_harmonious(g, col))
        return false;
    auto pairs = static_cast<std::int64_t>(col.colors) * (col.colors - 1) / 2;
    return static_cast<std::int64_t>(g.edges().size()) == pairs;
}

/// Point x gets color x, block B gets the color of its anchor.
inline Coloring nesting_to_coloring(const NestingCertificate &c)
{
    const auto &d = c.base();
    Coloring col{d.v(), {}};
    col.assignment.resize(d.v() + d.block_count());
    std::iota(col.assignment.begin(), col.assignment.begin() + d.v(), 0);
    for (std::size_t i = 0; i < d.block_count(); ++i)
        col.assignment[d.v() + i] = c.anchor(i);
    return col;
}

/// Inverse of nesting_to_coloring: each block is anchored at the point sharing
/// its color. Requires a harmonious coloring with exactly v colors.
inline NestingCertificate coloring_to_nesting(const Design &d, const Coloring &col)
{
    LeviGraph g(d);
    if (col.colors != d.v())
        throw NestingError("coloring uses " + std::to_string(col.colors) + " colors, need v=" + std::to_string(d.v()));
    if (!detail::well_formed(g, col))
        throw NestingError("coloring is not a total assignment into [0, v)");
    std::vector<int> point_of_color(d.v(), -1);
    for (Point x = 0; x < d.v(); ++x) {
        auto &slot = point_of_color[col.assignment[x]];
        if (slot >= 0)
            throw NestingError("points " + std::to_string(slot) + " and " + std::to_string(x) + " share a color");
        slot = x;
    }
    if (!verify_harmonious(g, col))
        throw NestingError("coloring is not harmonious");
    std::vector<Point> anchors(d.block_count());
    for (std::size_t i = 0; i < d.block_count(); ++i)
        anchors[i] = point_of_color[col.assignment[g.block_vertex(i)]];
    return apply_nesting(d, anchors);
}

// ---------------------------------------------------------------------------
// (k2, lambda2; k1, lambda1)-nestings

struct SubblockNesting
{
    int v = 0;
    int k1 = 0, lambda1 = 0;
    int k2 = 0, lambda2 = 0;
    std::vector<std::pair<Block, Block>> blocks; ///< (outer block, distinguished inner subblock)

    /// Throws StructureError unless every inner block is a k1-subset of its k2-block.
    void validate() const
    {
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            auto outer = blocks[i].first, inner = blocks[i].second;
            std::sort(outer.begin(), outer.end());
            std::sort(inner.begin(), inner.end());
            if (static_cast<int>(outer.size()) != k2 || static_cast<int>(inner.size()) != k1)
                throw StructureError("block " + std::to_string(i) + " has wrong outer/inner size");
            if (!std::includes(outer.begin(), outer.end(), inner.begin(), inner.end()))
                throw StructureError("inner subblock " + format_block(inner) + " is not inside " + format_block(outer));
        }
    }
};

inline bool subblock_identity_holds(std::int64_t k1, std::int64_t lambda1, std::int64_t k2, std::int64_t lambda2)
{
    return lambda1 * k2 * (k2 - 1) == lambda2 * k1 * (k1 - 1);
}

struct SubblockReport
{
    bool ok = true;
    bool identity_ok = true;
    bool outer_ok = true;
    bool inner_ok = true;
    std::optional<PointPair> witness; ///< first failing pair of the first failing BIBD check
};

inline SubblockReport verify_subblock_nesting(const SubblockNesting &s)
{
    s.validate();
    SubblockReport r;
    r.identity_ok = subblock_identity_holds(s.k1, s.lambda1, s.k2, s.lambda2);

    std::vector<Block> outer, inner;
    for (const auto &[o, i] : s.blocks) {
        outer.push_back(o);
        inner.push_back(i);
    }
    auto outer_rep = verify_bibd(Design(s.v, s.k2, s.lambda2, std::move(outer)));
    auto inner_rep = verify_bibd(Design(s.v, s.k1, s.lambda1, std::move(inner)));
    r.outer_ok = outer_rep.ok;
    r.inner_ok = inner_rep.ok;
    r.witness = !outer_rep.ok ? outer_rep.witness : inner_rep.witness;
    r.ok = r.identity_ok && r.outer_ok && r.inner_ok;
    return r;
}

struct AlphaBeta
{
    std::int64_t alpha;
    std::int64_t beta;

    friend bool operator==(const AlphaBeta &, const AlphaBeta &) = default;
};

/// alpha: least t > 0 with (k1-1) | t lambda1 and (k2-1) | t lambda2.
/// beta:  least m > 0 with k1(k1-1) | m lambda1.
inline AlphaBeta alpha_beta(std::int64_t k1, std::int64_t lambda1, std::int64_t k2, std::int64_t lambda2)
{
    if (k1 < 2 || k2 < 2 || lambda1 < 1 || lambda2 < 1)
        throw PreconditionError("alpha_beta needs k1, k2 >= 2 and positive lambdas");
    if (!subblock_identity_holds(k1, lambda1, k2, lambda2))
        throw PreconditionError("parameters are not admissible: lambda1 k2(k2-1) != lambda2 k1(k1-1)");
    auto a1 = (k1 - 1) / std::gcd(lambda1, k1 - 1);
    auto a2 = (k2 - 1) / std::gcd(lambda2, k2 - 1);
    auto b = k1 * (k1 - 1);
    return {std::lcm(a1, a2), b / std::gcd(lambda1, b)};
}

} // namespace nestkit
