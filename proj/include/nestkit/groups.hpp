#pragma once

#include "errors.hpp"

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nestkit {

using Residue = std::int64_t;

/// Element of a direct sum of cyclic groups, stored as its residue tuple.
/// Ordering is lexicographic on the tuple, which is also the order of
/// AbelianGroup::index_of.
struct GroupElement
{
    std::vector<Residue> residues;

    friend bool operator==(const GroupElement &, const GroupElement &) = default;
    friend auto operator<=>(const GroupElement &, const GroupElement &) = default;
};

/// Z_{n_1} + ... + Z_{n_t}.
class AbelianGroup
{
public:
    explicit AbelianGroup(std::vector<Residue> orders) : orders_(std::move(orders))
    {
        if (orders_.empty())
            throw StructureError("group needs at least one cyclic factor");
        order_ = 1;
        for (auto n : orders_) {
            if (n < 1)
                throw StructureError("cyclic factor order must be positive");
            if (order_ > kMaxOrder / n)
                throw StructureError("group order too large");
            order_ *= n;
        }
    }

    static AbelianGroup cyclic(Residue n) { return AbelianGroup({n}); }

    /// Parses "Z13", "Z2xZ4", "z3xz3xz7".
    static AbelianGroup parse(std::string_view spec)
    {
        std::vector<Residue> orders;
        std::size_t pos = 0;
        auto fail = [&] { return StructureError("bad group spec '" + std::string(spec) + "'"); };
        while (true) {
            if (pos >= spec.size() || std::tolower(static_cast<unsigned char>(spec[pos])) != 'z')
                throw fail();
            ++pos;
            std::size_t start = pos;
            Residue n = 0;
            while (pos < spec.size() && std::isdigit(static_cast<unsigned char>(spec[pos]))) {
                n = n * 10 + (spec[pos] - '0');
                if (n > kMaxOrder)
                    throw fail();
                ++pos;
            }
            if (pos == start)
                throw fail();
            orders.push_back(n);
            if (pos == spec.size())
                break;
            if (std::tolower(static_cast<unsigned char>(spec[pos])) != 'x')
                throw fail();
            ++pos;
        }
        return AbelianGroup(std::move(orders));
    }

    std::span<const Residue> orders() const { return orders_; }
    std::size_t rank() const { return orders_.size(); }
    Residue order() const { return order_; }
    bool is_cyclic() const { return orders_.size() == 1; }

    std::string to_string() const
    {
        std::string s;
        for (std::size_t i = 0; i < orders_.size(); ++i) {
            if (i)
                s += 'x';
            s += 'Z' + std::to_string(orders_[i]);
        }
        return s;
    }

    GroupElement zero() const { return GroupElement{std::vector<Residue>(orders_.size(), 0)}; }

    /// Reduces an arbitrary integer tuple (negatives allowed) into the group.
    GroupElement make(std::vector<Residue> residues) const
    {
        if (residues.size() != orders_.size())
            throw StructureError("element has " + std::to_string(residues.size()) + " components, group " +
                                 to_string() + " needs " + std::to_string(orders_.size()));
        for (std::size_t i = 0; i < residues.size(); ++i)
            residues[i] = reduce(residues[i], orders_[i]);
        return GroupElement{std::move(residues)};
    }

    GroupElement make(Residue x) const
    {
        if (!is_cyclic())
            throw StructureError("integer element given for non-cyclic group " + to_string());
        return make(std::vector<Residue>{x});
    }

    bool contains(const GroupElement &g) const
    {
        if (g.residues.size() != orders_.size())
            return false;
        for (std::size_t i = 0; i < orders_.size(); ++i)
            if (g.residues[i] < 0 || g.residues[i] >= orders_[i])
                return false;
        return true;
    }

    GroupElement add(const GroupElement &g, const GroupElement &h) const
    {
        check(g);
        check(h);
        GroupElement r = g;
        for (std::size_t i = 0; i < orders_.size(); ++i) {
            r.residues[i] += h.residues[i];
            if (r.residues[i] >= orders_[i])
                r.residues[i] -= orders_[i];
        }
        return r;
    }

    GroupElement neg(const GroupElement &g) const
    {
        check(g);
        GroupElement r = g;
        for (std::size_t i = 0; i < orders_.size(); ++i)
            r.residues[i] = r.residues[i] == 0 ? 0 : orders_[i] - r.residues[i];
        return r;
    }

    GroupElement sub(const GroupElement &g, const GroupElement &h) const { return add(g, neg(h)); }

    /// Mixed-radix index, first component most significant; preserves the
    /// lexicographic element order.
    Residue index_of(const GroupElement &g) const
    {
        check(g);
        Residue idx = 0;
        for (std::size_t i = 0; i < orders_.size(); ++i)
            idx = idx * orders_[i] + g.residues[i];
        return idx;
    }

    GroupElement element_at(Residue index) const
    {
        if (index < 0 || index >= order_)
            throw StructureError("element index out of range");
        GroupElement g{std::vector<Residue>(orders_.size())};
        for (std::size_t i = orders_.size(); i-- > 0;) {
            g.residues[i] = index % orders_[i];
            index /= orders_[i];
        }
        return g;
    }

    std::vector<GroupElement> elements() const
    {
        std::vector<GroupElement> all;
        all.reserve(static_cast<std::size_t>(order_));
        for (Residue i = 0; i < order_; ++i)
            all.push_back(element_at(i));
        return all;
    }

    /// Number of elements of order exactly 2.
    Residue order2_count() const
    {
        Residue involutions = 1;
        for (auto n : orders_)
            involutions *= std::gcd(Residue{2}, n);
        return involutions - 1;
    }

    std::string format(const GroupElement &g) const
    {
        if (is_cyclic())
            return std::to_string(g.residues.at(0));
        std::string s = "(";
        for (std::size_t i = 0; i < g.residues.size(); ++i) {
            if (i)
                s += ',';
            s += std::to_string(g.residues[i]);
        }
        return s + ")";
    }

    friend bool operator==(const AbelianGroup &a, const AbelianGroup &b) { return a.orders_ == b.orders_; }

private:
    static constexpr Residue kMaxOrder = Residue{1} << 31;

    static Residue reduce(Residue x, Residue n)
    {
        x %= n;
        return x < 0 ? x + n : x;
    }

    void check(const GroupElement &g) const
    {
        if (!contains(g))
            throw GroupMismatch();
    }

    std::vector<Residue> orders_;
    Residue order_ = 1;
};

inline GroupElement add(const AbelianGroup &G, const GroupElement &g, const GroupElement &h) { return G.add(g, h); }
inline GroupElement neg(const AbelianGroup &G, const GroupElement &g) { return G.neg(g); }
inline Residue order2_count(const AbelianGroup &G) { return G.order2_count(); }

/// A set of distinct elements of one group, kept in canonical (lexicographic) order.
class GroupSubset
{
public:
    explicit GroupSubset(AbelianGroup group) : group_(std::move(group)) {}

    GroupSubset(AbelianGroup group, std::vector<GroupElement> elements)
        : group_(std::move(group)), elements_(std::move(elements))
    {
        for (const auto &g : elements_)
            if (!group_.contains(g))
                throw StructureError("element " + describe(g) + " is not in " + group_.to_string());
        std::sort(elements_.begin(), elements_.end());
        if (std::adjacent_find(elements_.begin(), elements_.end()) != elements_.end())
            throw StructureError("repeated element in set over " + group_.to_string());
    }

    /// Cyclic convenience: integers are reduced mod |G|.
    static GroupSubset of_integers(const AbelianGroup &group, std::span<const Residue> xs)
    {
        std::vector<GroupElement> elems;
        elems.reserve(xs.size());
        for (auto x : xs)
            elems.push_back(group.make(x));
        return GroupSubset(group, std::move(elems));
    }

    static GroupSubset of_integers(const AbelianGroup &group, std::initializer_list<Residue> xs)
    {
        return of_integers(group, std::span<const Residue>(xs.begin(), xs.size()));
    }

    const AbelianGroup &group() const { return group_; }
    std::span<const GroupElement> elements() const { return elements_; }
    std::size_t size() const { return elements_.size(); }
    bool empty() const { return elements_.empty(); }

    bool contains(const GroupElement &g) const { return std::binary_search(elements_.begin(), elements_.end(), g); }

    bool intersects(const GroupSubset &other) const
    {
        same_group(other);
        auto i = elements_.begin();
        auto j = other.elements_.begin();
        while (i != elements_.end() && j != other.elements_.end()) {
            if (*i == *j)
                return true;
            if (*i < *j)
                ++i;
            else
                ++j;
        }
        return false;
    }

    /// First common element, if any.
    std::optional<GroupElement> common_element(const GroupSubset &other) const
    {
        same_group(other);
        for (const auto &g : elements_)
            if (other.contains(g))
                return g;
        return std::nullopt;
    }

    std::vector<Residue> indices() const
    {
        std::vector<Residue> idx;
        idx.reserve(elements_.size());
        for (const auto &g : elements_)
            idx.push_back(group_.index_of(g));
        return idx;
    }

    std::string to_string() const
    {
        std::string s = "{";
        for (std::size_t i = 0; i < elements_.size(); ++i) {
            if (i)
                s += ',';
            s += group_.format(elements_[i]);
        }
        return s + "}";
    }

    void same_group(const GroupSubset &other) const
    {
        if (!(group_ == other.group_))
            throw GroupMismatch();
    }

    friend bool operator==(const GroupSubset &a, const GroupSubset &b)
    {
        return a.group_ == b.group_ && a.elements_ == b.elements_;
    }

    friend bool operator<(const GroupSubset &a, const GroupSubset &b) { return a.elements_ < b.elements_; }

private:
    std::string describe(const GroupElement &g) const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < g.residues.size(); ++i)
            s += (i ? "," : "") + std::to_string(g.residues[i]);
        return s + ")";
    }

    AbelianGroup group_;
    std::vector<GroupElement> elements_;
};

/// B + a
inline GroupSubset translate(const GroupSubset &B, const GroupElement &a)
{
    std::vector<GroupElement> out;
    out.reserve(B.size());
    for (const auto &b : B.elements())
        out.push_back(B.group().add(b, a));
    return GroupSubset(B.group(), std::move(out));
}

/// -B
inline GroupSubset negate(const GroupSubset &B)
{
    std::vector<GroupElement> out;
    out.reserve(B.size());
    for (const auto &b : B.elements())
        out.push_back(B.group().neg(b));
    return GroupSubset(B.group(), std::move(out));
}

/// Every a with -(B+a) meeting B+a. Computed by scanning all of G, so the
/// result is exact; its size is at most 2^C |B|^2 with C the number of
/// involutions.
inline GroupSubset bad_translations(const GroupSubset &B)
{
    if (B.empty())
        throw PreconditionError("bad_translations needs a nonempty set");
    const auto &G = B.group();
    std::vector<GroupElement> bad;
    for (Residue i = 0; i < G.order(); ++i) {
        auto a = G.element_at(i);
        auto shifted = translate(B, a);
        if (negate(shifted).intersects(shifted))
            bad.push_back(std::move(a));
    }
    return GroupSubset(G, std::move(bad));
}

/// Every a with X meeting B+a, i.e. {x - b : x in X, b in B}. Size at most |B||X|.
inline GroupSubset blocking_translations(const GroupSubset &B, const GroupSubset &X)
{
    B.same_group(X);
    const auto &G = B.group();
    std::vector<GroupElement> hits;
    hits.reserve(B.size() * X.size());
    for (const auto &x : X.elements())
        for (const auto &b : B.elements())
            hits.push_back(G.sub(x, b));
    std::sort(hits.begin(), hits.end());
    hits.erase(std::unique(hits.begin(), hits.end()), hits.end());
    return GroupSubset(G, std::move(hits));
}

} // namespace nestkit
