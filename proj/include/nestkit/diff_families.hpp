#pragma once

#include "designs.hpp"
#include "errors.hpp"
#include "groups.hpp"
#include "outcome.hpp"

#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace nestkit {

/// Base blocks of size k over an abelian group, with nominal index lambda.
class DifferenceFamily
{
public:
    DifferenceFamily(AbelianGroup group, int k, int lambda, std::vector<GroupSubset> blocks)
        : group_(std::move(group)), k_(k), lambda_(lambda), blocks_(std::move(blocks))
    {
        if (k_ < 1 || k_ > group_.order())
            throw StructureError("block size k=" + std::to_string(k_) + " must be in [1, |G|]");
        if (lambda_ < 0)
            throw StructureError("lambda must be nonnegative");
        for (std::size_t i = 0; i < blocks_.size(); ++i) {
            if (!(blocks_[i].group() == group_))
                throw GroupMismatch();
            if (static_cast<int>(blocks_[i].size()) != k_)
                throw StructureError("base block " + std::to_string(i) + " has " + std::to_string(blocks_[i].size()) +
                                     " elements, expected k=" + std::to_string(k_));
        }
    }

    const AbelianGroup &group() const { return group_; }
    int k() const { return k_; }
    int lambda() const { return lambda_; }
    std::span<const GroupSubset> blocks() const { return blocks_; }
    const GroupSubset &block(std::size_t i) const { return blocks_.at(i); }
    std::size_t size() const { return blocks_.size(); }

    std::string to_string() const
    {
        std::string s = group_.to_string() + " k=" + std::to_string(k_) + " lambda=" + std::to_string(lambda_) + ":";
        for (const auto &b : blocks_)
            s += " " + b.to_string();
        return s;
    }

    friend bool operator==(const DifferenceFamily &, const DifferenceFamily &) = default;

private:
    AbelianGroup group_;
    int k_, lambda_;
    std::vector<GroupSubset> blocks_;
};

/// All ordered differences f - f' (f != f') within each base block. For a
/// block {b0 < b1 < ...} the pairs are listed as (bj - bi, bi - bj) for i < j.
inline std::vector<GroupElement> delta_list(const DifferenceFamily &F)
{
    const auto &G = F.group();
    std::vector<GroupElement> out;
    for (const auto &B : F.blocks()) {
        auto e = B.elements();
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i + 1; j < e.size(); ++j) {
                out.push_back(G.sub(e[j], e[i]));
                out.push_back(G.sub(e[i], e[j]));
            }
    }
    return out;
}

/// Multiplicity of each element (by group index) in the difference list.
inline std::vector<std::int64_t> difference_counts(const DifferenceFamily &F)
{
    std::vector<std::int64_t> counts(static_cast<std::size_t>(F.group().order()), 0);
    for (const auto &d : delta_list(F))
        ++counts[F.group().index_of(d)];
    return counts;
}

struct DfReport
{
    bool ok = true;
    std::optional<GroupElement> witness; ///< first nonzero element with the wrong multiplicity
    std::int64_t count = 0;
};

inline DfReport verify_df(const DifferenceFamily &F)
{
    auto counts = difference_counts(F);
    for (Residue i = 1; i < F.group().order(); ++i)
        if (counts[i] != F.lambda())
            return {false, F.group().element_at(i), counts[i]};
    return {};
}

struct BdfReport
{
    struct SetRef
    {
        std::size_t block;
        bool negated;
    };

    bool ok = true;
    DfReport df;
    std::optional<std::pair<SetRef, SetRef>> collision; ///< first two of {F, -F} that meet
    std::optional<GroupElement> shared;
};

/// DF check plus: the sets F and -F, over all base blocks F, are pairwise disjoint.
inline BdfReport verify_bdf(const DifferenceFamily &F)
{
    BdfReport r;
    r.df = verify_df(F);
    const auto &G = F.group();
    std::vector<std::optional<BdfReport::SetRef>> owner(static_cast<std::size_t>(G.order()));
    for (std::size_t i = 0; i < F.size() && !r.collision; ++i)
        for (bool negated : {false, true}) {
            auto set = negated ? negate(F.block(i)) : F.block(i);
            BdfReport::SetRef me{i, negated};
            for (const auto &g : set.elements()) {
                auto &slot = owner[G.index_of(g)];
                if (slot) {
                    r.collision = std::pair{*slot, me};
                    r.shared = g;
                    break;
                }
                slot = me;
            }
            if (r.collision)
                break;
        }
    r.ok = r.df.ok && !r.collision;
    return r;
}

/// Blocks F + g for every base block F (outer loop) and every g in index order.
/// Points are group indices.
inline Design develop(const DifferenceFamily &F)
{
    if (auto rep = verify_df(F); !rep.ok)
        throw PreconditionError("develop needs a difference family; " + F.group().format(*rep.witness) +
                                " occurs " + std::to_string(rep.count) + " times");
    const auto &G = F.group();
    std::vector<Block> blocks;
    blocks.reserve(F.size() * static_cast<std::size_t>(G.order()));
    for (const auto &B : F.blocks())
        for (Residue g = 0; g < G.order(); ++g) {
            auto idx = translate(B, G.element_at(g)).indices();
            blocks.emplace_back(idx.begin(), idx.end());
        }
    return Design(static_cast<int>(G.order()), F.k(), F.lambda(), std::move(blocks));
}

/// develop(F) with block F + g anchored at g.
inline NestingCertificate develop_with_anchor(const DifferenceFamily &F)
{
    if (auto rep = verify_bdf(F); !rep.ok)
        throw PreconditionError("develop_with_anchor needs a Banff difference family");
    auto d = develop(F);
    auto n = static_cast<std::size_t>(F.group().order());
    std::vector<Point> anchors(d.block_count());
    for (std::size_t i = 0; i < anchors.size(); ++i)
        anchors[i] = static_cast<Point>(i % n);
    return apply_nesting(d, anchors);
}

struct DfSearchResult
{
    Outcome outcome = Outcome::budget;
    std::optional<DifferenceFamily> family;
    std::uint64_t nodes = 0;
};

namespace detail {

/// Complete backtracking search for base blocks whose differences hit each
/// nonzero element exactly `target[x]` times. Every new block is normalized to
/// contain 0 and the least element x that is still short of its target, which
/// loses no solutions because a base block may be replaced by any translate.
class BaseBlockSearch
{
public:
    BaseBlockSearch(const AbelianGroup &G, int k, std::vector<std::int64_t> target, std::uint64_t budget,
                    std::uint64_t seed)
        : G_(G), n_(G.order()), k_(k), target_(std::move(target)), budget_(budget)
    {
        diff_.resize(static_cast<std::size_t>(n_ * n_));
        for (Residue i = 0; i < n_; ++i)
            for (Residue j = 0; j < n_; ++j)
                diff_[i * n_ + j] = G.index_of(G.sub(G.element_at(i), G.element_at(j)));
        order_.resize(static_cast<std::size_t>(n_));
        std::iota(order_.begin(), order_.end(), Residue{0});
        if (seed != 0) {
            std::mt19937_64 rng(seed);
            std::shuffle(order_.begin() + 1, order_.end(), rng);
        }
        count_.assign(static_cast<std::size_t>(n_), 0);
    }

    Outcome run(std::size_t blocks_needed)
    {
        blocks_needed_ = blocks_needed;
        return next_block() ? Outcome::found : (out_of_budget_ ? Outcome::budget : Outcome::nonexistent);
    }

    std::uint64_t nodes() const { return nodes_; }
    const std::vector<std::vector<Residue>> &blocks() const { return blocks_; }

private:
    bool next_block()
    {
        if (blocks_.size() == blocks_needed_)
            return std::all_of(order_.begin() + 1, order_.end(), [&](Residue x) { return count_[x] == target_[x]; });
        Residue x = -1;
        for (Residue i = 1; i < n_; ++i)
            if (count_[i] < target_[i]) {
                x = i;
                break;
            }
        if (x < 0)
            return false;
        std::vector<Residue> block{0};
        if (!place(block, x))
            return false;
        bool ok = extend(block, 0);
        if (!ok)
            unplace(block);
        return ok;
    }

    // Adds point p to the block if no difference overshoots its target.
    bool place(std::vector<Residue> &block, Residue p)
    {
        for (auto q : block) {
            if (q == p)
                return false;
        }
        bool ok = true;
        for (auto q : block) {
            for (auto d : {diff_[p * n_ + q], diff_[q * n_ + p]}) {
                ++count_[d];
                if (count_[d] > target_[d])
                    ok = false;
            }
        }
        block.push_back(p);
        if (!ok) {
            unplace_last(block);
            return false;
        }
        return true;
    }

    void unplace_last(std::vector<Residue> &block)
    {
        auto p = block.back();
        block.pop_back();
        for (auto q : block) {
            --count_[diff_[p * n_ + q]];
            --count_[diff_[q * n_ + p]];
        }
    }

    void unplace(std::vector<Residue> &block)
    {
        while (block.size() > 1)
            unplace_last(block);
    }

    // Chooses the remaining k-2 points in increasing position of order_.
    bool extend(std::vector<Residue> &block, std::size_t from)
    {
        if (++nodes_ > budget_) {
            out_of_budget_ = true;
            return false;
        }
        if (static_cast<int>(block.size()) == k_) {
            blocks_.push_back(block);
            if (next_block())
                return true;
            blocks_.pop_back();
            return false;
        }
        for (std::size_t pos = std::max<std::size_t>(from, 1); pos < order_.size(); ++pos) {
            if (!place(block, order_[pos]))
                continue;
            if (extend(block, pos + 1))
                return true;
            unplace_last(block);
            if (out_of_budget_)
                return false;
        }
        return false;
    }

    const AbelianGroup &G_;
    Residue n_;
    int k_;
    std::vector<std::int64_t> target_;
    std::uint64_t budget_;
    std::vector<Residue> diff_;
    std::vector<Residue> order_;
    std::vector<std::int64_t> count_;
    std::vector<std::vector<Residue>> blocks_;
    std::size_t blocks_needed_ = 0;
    std::uint64_t nodes_ = 0;
    bool out_of_budget_ = false;
};

} // namespace detail

/// Backtracking search for a (G, k, lambda)-DF. Deterministic for a fixed
/// budget and seed; seed 0 explores elements in index order.
inline DfSearchResult search_df(const AbelianGroup &G, int k, int lambda, std::uint64_t budget,
                                std::uint64_t seed = 0)
{
    if (k < 2 || k > G.order())
        throw PreconditionError("search_df needs 2 <= k <= |G|");
    if (lambda < 1)
        throw PreconditionError("search_df needs lambda >= 1");
    std::int64_t diffs = static_cast<std::int64_t>(lambda) * (G.order() - 1);
    std::int64_t per_block = static_cast<std::int64_t>(k) * (k - 1);
    if (diffs % per_block)
        throw PreconditionError("lambda(|G|-1) = " + std::to_string(diffs) + " is not divisible by k(k-1) = " +
                                std::to_string(per_block));

    std::vector<std::int64_t> target(static_cast<std::size_t>(G.order()), lambda);
    target[0] = 0;
    detail::BaseBlockSearch search(G, k, std::move(target), budget, seed);
    DfSearchResult r;
    r.outcome = search.run(static_cast<std::size_t>(diffs / per_block));
    r.nodes = search.nodes();
    if (r.outcome == Outcome::found) {
        std::vector<GroupSubset> blocks;
        for (const auto &b : search.blocks()) {
            std::vector<GroupElement> elems;
            for (auto i : b)
                elems.push_back(G.element_at(i));
            blocks.emplace_back(G, std::move(elems));
        }
        r.family.emplace(G, k, lambda, std::move(blocks));
    }
    return r;
}

} // namespace nestkit
