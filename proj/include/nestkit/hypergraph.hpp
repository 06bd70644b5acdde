#pragma once

#include "designs.hpp"
#include "diff_families.hpp"
#include "errors.hpp"
#include "groups.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace nestkit {

/// Which base block an edge came from and by how much it was translated
/// (or, for nesting hypergraphs, which point it adds to the block).
struct EdgePayload
{
    std::size_t block = 0;
    std::int64_t translation = 0;

    friend bool operator==(const EdgePayload &, const EdgePayload &) = default;
};

struct HyperEdge
{
    int left = 0;
    std::vector<int> right; ///< sorted, distinct
    EdgePayload payload;
};

/// Multi-hypergraph whose every edge holds exactly one left ("A") vertex and
/// the same number of right vertices.
class BipartiteHypergraph
{
public:
    BipartiteHypergraph(int left_count, int right_count, int right_arity, std::vector<HyperEdge> edges)
        : left_count_(left_count), right_count_(right_count), arity_(right_arity), edges_(std::move(edges))
    {
        if (left_count_ < 0 || right_count_ < 0 || arity_ < 0)
            throw StructureError("negative hypergraph dimensions");
        left_edges_.resize(left_count_);
        right_edges_.resize(right_count_);
        for (std::size_t e = 0; e < edges_.size(); ++e) {
            auto &edge = edges_[e];
            if (edge.left < 0 || edge.left >= left_count_)
                throw StructureError("edge " + std::to_string(e) + " has no valid left vertex");
            if (static_cast<int>(edge.right.size()) != arity_)
                throw StructureError("edge " + std::to_string(e) + " is not " + std::to_string(arity_ + 1) +
                                     "-uniform");
            std::sort(edge.right.begin(), edge.right.end());
            if (std::adjacent_find(edge.right.begin(), edge.right.end()) != edge.right.end())
                throw StructureError("edge " + std::to_string(e) + " repeats a right vertex");
            if (!edge.right.empty() && (edge.right.front() < 0 || edge.right.back() >= right_count_))
                throw StructureError("edge " + std::to_string(e) + " has a right vertex out of range");
            left_edges_[edge.left].push_back(static_cast<int>(e));
            for (int r : edge.right)
                right_edges_[r].push_back(static_cast<int>(e));
        }
    }

    int left_count() const { return left_count_; }
    int right_count() const { return right_count_; }
    int right_arity() const { return arity_; }
    std::size_t edge_count() const { return edges_.size(); }
    std::span<const HyperEdge> edges() const { return edges_; }
    const HyperEdge &edge(std::size_t e) const { return edges_.at(e); }
    std::span<const int> edges_at_left(int a) const { return left_edges_.at(a); }
    std::span<const int> edges_at_right(int r) const { return right_edges_.at(r); }

private:
    int left_count_, right_count_, arity_;
    std::vector<HyperEdge> edges_;
    std::vector<std::vector<int>> left_edges_;
    std::vector<std::vector<int>> right_edges_;
};

// ---------------------------------------------------------------------------
// Builders

/// Dense lexicographic index of the pair {p < q} among the 2-subsets of [0, v).
inline int pair_index(int v, int p, int q)
{
    if (p > q)
        std::swap(p, q);
    return p * v - p * (p + 1) / 2 + (q - p - 1);
}

/// Left: block instances. Right: all point pairs. One edge per (block B,
/// point a not in B), joining B to the pairs {a, b} for b in B. Payload
/// translation holds a.
inline BipartiteHypergraph build_nesting_hypergraph(const Design &d)
{
    if (auto rep = verify_bibd(d); !rep.ok)
        throw PreconditionError("nesting hypergraph needs a BIBD; pair " + format_pair(*rep.witness) + " is covered " +
                                std::to_string(rep.witness_count) + " times");
    int v = d.v();
    std::vector<HyperEdge> edges;
    edges.reserve(d.block_count() * static_cast<std::size_t>(v - d.k()));
    for (std::size_t i = 0; i < d.block_count(); ++i) {
        const auto &b = d.block(i);
        for (Point a = 0; a < v; ++a) {
            if (std::binary_search(b.begin(), b.end(), a))
                continue;
            HyperEdge e{static_cast<int>(i), {}, {i, a}};
            for (auto x : b)
                e.right.push_back(pair_index(v, a, x));
            edges.push_back(std::move(e));
        }
    }
    return BipartiteHypergraph(static_cast<int>(d.block_count()), v * (v - 1) / 2, d.k(), std::move(edges));
}

/// Right vertices of the Banff hypergraph: one per pair {x, -x} with x nonzero
/// and -x != x, in increasing index of the smaller member. Maps element index
/// to right id (-1 for 0 and involutions).
inline std::vector<int> bdf_pair_ids(const AbelianGroup &G)
{
    std::vector<int> id(static_cast<std::size_t>(G.order()), -1);
    int next = 0;
    for (Residue i = 1; i < G.order(); ++i) {
        if (id[i] >= 0)
            continue;
        auto j = G.index_of(G.neg(G.element_at(i)));
        if (j == i)
            continue;
        id[i] = id[j] = next++;
    }
    return id;
}

/// Left: base blocks. Right: pairs {x, -x}. One edge per (B, a) with
/// -(B+a) disjoint from B+a, joining B to the pairs through B+a.
inline BipartiteHypergraph build_bdf_hypergraph(const DifferenceFamily &F)
{
    if (auto rep = verify_df(F); !rep.ok)
        throw PreconditionError("Banff hypergraph needs a difference family");
    const auto &G = F.group();
    auto ids = bdf_pair_ids(G);
    int right = ids.empty() ? 0 : *std::max_element(ids.begin(), ids.end()) + 1;
    std::vector<HyperEdge> edges;
    for (std::size_t i = 0; i < F.size(); ++i)
        for (Residue a = 0; a < G.order(); ++a) {
            auto shifted = translate(F.block(i), G.element_at(a));
            if (negate(shifted).intersects(shifted))
                continue;
            HyperEdge e{static_cast<int>(i), {}, {i, a}};
            for (auto x : shifted.indices())
                e.right.push_back(ids[x]);
            edges.push_back(std::move(e));
        }
    return BipartiteHypergraph(static_cast<int>(F.size()), right, F.k(), std::move(edges));
}

/// Size of {a : B + a = B} in Z_v.
inline int cyclic_stabilizer_size(int v, std::span<const Point> block)
{
    int s = 0;
    Block shifted(block.size());
    for (int a = 0; a < v; ++a) {
        for (std::size_t i = 0; i < block.size(); ++i)
            shifted[i] = (block[i] + a) % v;
        std::sort(shifted.begin(), shifted.end());
        if (std::equal(shifted.begin(), shifted.end(), block.begin(), block.end()))
            ++s;
    }
    return s;
}

inline Block cyclic_translate(int v, std::span<const Point> block, std::int64_t a)
{
    Block out(block.size());
    auto shift = static_cast<Point>(((a % v) + v) % v);
    for (std::size_t i = 0; i < block.size(); ++i)
        out[i] = (block[i] + shift) % v;
    std::sort(out.begin(), out.end());
    return out;
}

/// Left: full-orbit base blocks over Z_v. Right: points of Z_v outside
/// `forbidden`, numbered in increasing order. One edge per (B, a) with B + a
/// avoiding `forbidden`, joining B to the points of B + a.
inline BipartiteHypergraph build_novak_hypergraph(int v, std::span<const Block> full_orbit_bases,
                                                  std::span<const Point> forbidden)
{
    if (v < 1)
        throw StructureError("v must be positive");
    std::vector<char> is_forbidden(v, 0);
    for (auto t : forbidden) {
        if (t < 0 || t >= v)
            throw StructureError("forbidden point " + std::to_string(t) + " outside Z_" + std::to_string(v));
        is_forbidden[t] = 1;
    }
    std::vector<int> right_id(v, -1);
    int right = 0;
    for (int x = 0; x < v; ++x)
        if (!is_forbidden[x])
            right_id[x] = right++;

    int arity = full_orbit_bases.empty() ? 0 : static_cast<int>(full_orbit_bases.front().size());
    std::vector<HyperEdge> edges;
    for (std::size_t i = 0; i < full_orbit_bases.size(); ++i) {
        Block base = full_orbit_bases[i];
        std::sort(base.begin(), base.end());
        if (static_cast<int>(base.size()) != arity)
            throw StructureError("base blocks have different sizes");
        if (!base.empty() && (base.front() < 0 || base.back() >= v))
            throw StructureError("base block " + format_block(base) + " has a point outside Z_" + std::to_string(v));
        if (cyclic_stabilizer_size(v, base) != 1)
            throw PreconditionError("base block " + format_block(base) + " has a short orbit");
        for (int a = 0; a < v; ++a) {
            auto shifted = cyclic_translate(v, base, a);
            if (std::any_of(shifted.begin(), shifted.end(), [&](Point x) { return is_forbidden[x]; }))
                continue;
            HyperEdge e{static_cast<int>(i), {}, {i, a}};
            for (auto x : shifted)
                e.right.push_back(right_id[x]);
            edges.push_back(std::move(e));
        }
    }
    return BipartiteHypergraph(static_cast<int>(full_orbit_bases.size()), right, arity, std::move(edges));
}

// ---------------------------------------------------------------------------
// Degree statistics

struct VertexRef
{
    enum class Side
    {
        left,
        right
    };
    Side side;
    int index;

    static VertexRef left(int i) { return {Side::left, i}; }
    static VertexRef right(int i) { return {Side::right, i}; }
};

namespace detail {

inline void check_vertex(const BipartiteHypergraph &H, VertexRef u)
{
    int bound = u.side == VertexRef::Side::left ? H.left_count() : H.right_count();
    if (u.index < 0 || u.index >= bound)
        throw StructureError("unknown hypergraph vertex");
}

inline bool edge_has(const HyperEdge &e, VertexRef u)
{
    if (u.side == VertexRef::Side::left)
        return e.left == u.index;
    return std::binary_search(e.right.begin(), e.right.end(), u.index);
}

} // namespace detail

inline std::int64_t degree(const BipartiteHypergraph &H, VertexRef u)
{
    detail::check_vertex(H, u);
    return u.side == VertexRef::Side::left ? static_cast<std::int64_t>(H.edges_at_left(u.index).size())
                                           : static_cast<std::int64_t>(H.edges_at_right(u.index).size());
}

/// Edges containing both u and w, counted with multiplicity.
inline std::int64_t codegree(const BipartiteHypergraph &H, VertexRef u, VertexRef w)
{
    detail::check_vertex(H, u);
    detail::check_vertex(H, w);
    if (u.side == w.side && u.index == w.index)
        throw PreconditionError("codegree needs two distinct vertices");
    auto candidates = u.side == VertexRef::Side::left ? H.edges_at_left(u.index) : H.edges_at_right(u.index);
    std::int64_t c = 0;
    for (int e : candidates)
        if (detail::edge_has(H.edge(e), w))
            ++c;
    return c;
}

struct DegreeReport
{
    std::int64_t left_min = 0, left_max = 0;
    std::int64_t right_min = 0, right_max = 0;
    std::int64_t max_codegree_left_right = 0;
    std::int64_t max_codegree_right_right = 0;

    std::int64_t max_codegree() const { return std::max(max_codegree_left_right, max_codegree_right_right); }
};

inline DegreeReport degree_report(const BipartiteHypergraph &H)
{
    DegreeReport r;
    auto span_minmax = [](auto get, int n, std::int64_t &lo, std::int64_t &hi) {
        if (n == 0)
            return;
        lo = std::numeric_limits<std::int64_t>::max();
        hi = 0;
        for (int i = 0; i < n; ++i) {
            auto d = get(i);
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
    };
    span_minmax([&](int i) { return static_cast<std::int64_t>(H.edges_at_left(i).size()); }, H.left_count(),
                r.left_min, r.left_max);
    span_minmax([&](int i) { return static_cast<std::int64_t>(H.edges_at_right(i).size()); }, H.right_count(),
                r.right_min, r.right_max);

    auto key = [](std::int64_t a, std::int64_t b) { return static_cast<std::uint64_t>(a) << 32 | static_cast<std::uint64_t>(b); };
    std::unordered_map<std::uint64_t, std::int64_t> lr, rr;
    for (const auto &e : H.edges()) {
        for (std::size_t i = 0; i < e.right.size(); ++i) {
            r.max_codegree_left_right = std::max(r.max_codegree_left_right, ++lr[key(e.left, e.right[i])]);
            for (std::size_t j = i + 1; j < e.right.size(); ++j)
                r.max_codegree_right_right = std::max(r.max_codegree_right_right, ++rr[key(e.right[i], e.right[j])]);
        }
    }
    return r;
}

/// Diagnostic for the degree/codegree hypotheses of the A-perfect matching
/// theorem: A-degrees >= (1 + D^-alpha) D, right degrees <= D, codegrees
/// <= D^(1-beta). Never used to gate a solver.
struct DpReport
{
    bool ok = false;
    bool left_degree_ok = false;
    bool right_degree_ok = false;
    bool codegree_ok = false;
    std::int64_t min_left_degree = 0;
    double left_threshold = 0;
    std::int64_t max_right_degree = 0;
    std::int64_t max_codegree = 0;
    double codegree_cap = 0;
};

inline DpReport dp_hypothesis_check(const BipartiteHypergraph &H, double D, double alpha, double beta)
{
    if (!(D > 0) || !(alpha > 0) || !(beta > 0))
        throw PreconditionError("dp_hypothesis_check needs D, alpha, beta > 0");
    auto deg = degree_report(H);
    DpReport r;
    r.min_left_degree = deg.left_min;
    r.left_threshold = (1.0 + std::pow(D, -alpha)) * D;
    r.max_right_degree = deg.right_max;
    r.max_codegree = deg.max_codegree();
    r.codegree_cap = std::pow(D, 1.0 - beta);
    r.left_degree_ok = H.left_count() == 0 || static_cast<double>(deg.left_min) >= r.left_threshold;
    r.right_degree_ok = static_cast<double>(deg.right_max) <= D;
    r.codegree_ok = static_cast<double>(r.max_codegree) <= r.codegree_cap;
    r.ok = r.left_degree_ok && r.right_degree_ok && r.codegree_ok;
    return r;
}

/// One edge per line: "left : r1,r2,... # block=i a=t".
inline std::string dump(const BipartiteHypergraph &H)
{
    std::ostringstream os;
    for (const auto &e : H.edges()) {
        os << e.left << " :";
        for (std::size_t i = 0; i < e.right.size(); ++i)
            os << (i ? "," : " ") << e.right[i];
        os << " # block=" << e.payload.block << " a=" << e.payload.translation << '\n';
    }
    return os.str();
}

} // namespace nestkit
