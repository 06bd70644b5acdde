#pragma once

#include "errors.hpp"
#include "hypergraph.hpp"
#include "outcome.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace nestkit {

enum class SolverMode
{
    exact,
    heuristic,
};

struct SolverConfig
{
    SolverMode mode = SolverMode::exact;
    std::uint64_t seed = 1;
    std::uint64_t restart_budget = 1000;
    std::uint64_t node_budget = 10'000'000;
    int parallelism = 1;

    void validate() const
    {
        if (restart_budget == 0 || node_budget == 0 || parallelism < 1)
            throw PreconditionError("solver budgets and parallelism must be positive");
    }
};

/// Edge indices of a matching, listed in order of the left vertex they cover.
using Matching = std::vector<std::size_t>;

struct SolveResult
{
    Outcome outcome = Outcome::budget;
    std::optional<Matching> matching;
    std::uint64_t nodes = 0;
    std::uint64_t restarts = 0;
    double seconds = 0;
    /// Set when several threads raced, so which solution came back depends on scheduling.
    bool schedule_dependent = false;
};

struct MatchingReport
{
    bool ok = true;
    std::optional<std::pair<std::size_t, std::size_t>> collision; ///< two chosen edges sharing a vertex
    std::optional<int> uncovered;                                 ///< left vertex left unmatched
};

/// Pairwise vertex-disjoint edges covering every left vertex exactly once.
inline MatchingReport verify_matching(const BipartiteHypergraph &H, const Matching &M)
{
    for (auto e : M)
        if (e >= H.edge_count())
            throw StructureError("matching refers to edge " + std::to_string(e) + " of " +
                                 std::to_string(H.edge_count()));
    MatchingReport r;
    std::vector<std::optional<std::size_t>> left_owner(H.left_count()), right_owner(H.right_count());
    for (auto e : M) {
        const auto &edge = H.edge(e);
        auto claim = [&](std::optional<std::size_t> &slot) {
            if (slot && !r.collision)
                r.collision = std::pair{*slot, e};
            slot = e;
        };
        claim(left_owner[edge.left]);
        for (int x : edge.right)
            claim(right_owner[x]);
    }
    for (int a = 0; a < H.left_count() && !r.uncovered; ++a)
        if (!left_owner[a])
            r.uncovered = a;
    r.ok = !r.collision && !r.uncovered;
    return r;
}

namespace detail {

/// Right-vertex occupancy with incremental counts of still-usable edges per
/// left vertex.
class Occupancy
{
public:
    explicit Occupancy(const BipartiteHypergraph &H)
        : H_(H), occupied_(H.right_count(), 0), blocked_(H.edge_count(), 0), live_(H.left_count(), 0),
          chosen_(H.left_count(), kNone)
    {
        for (int a = 0; a < H.left_count(); ++a)
            live_[a] = static_cast<int>(H.edges_at_left(a).size());
    }

    bool usable(std::size_t e) const { return blocked_[e] == 0; }
    int live(int a) const { return live_[a]; }
    bool matched(int a) const { return chosen_[a] != kNone; }
    std::size_t chosen(int a) const { return chosen_[a]; }

    void take(std::size_t e)
    {
        const auto &edge = H_.edge(e);
        chosen_[edge.left] = e;
        for (int r : edge.right) {
            occupied_[r] = 1;
            for (int f : H_.edges_at_right(r))
                if (blocked_[f]++ == 0)
                    --live_[H_.edge(f).left];
        }
    }

    void release(std::size_t e)
    {
        const auto &edge = H_.edge(e);
        for (auto it = edge.right.rbegin(); it != edge.right.rend(); ++it) {
            occupied_[*it] = 0;
            for (int f : H_.edges_at_right(*it))
                if (--blocked_[f] == 0)
                    ++live_[H_.edge(f).left];
        }
        chosen_[edge.left] = kNone;
    }

    Matching matching() const { return Matching(chosen_.begin(), chosen_.end()); }

    static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

private:
    const BipartiteHypergraph &H_;
    std::vector<char> occupied_;
    std::vector<int> blocked_;
    std::vector<int> live_;
    std::vector<std::size_t> chosen_;
};

/// Depth-first search, fail-first on the unmatched left vertex with the
/// fewest usable edges (ties to the lowest index), edges tried in index order.
class ExactSearch
{
public:
    ExactSearch(const BipartiteHypergraph &H, std::uint64_t budget, std::atomic<std::uint64_t> &shared_nodes,
                const std::atomic<bool> &stop)
        : H_(H), occ_(H), budget_(budget), shared_nodes_(shared_nodes), stop_(stop)
    {
    }

    Occupancy &occupancy() { return occ_; }

    /// Picks the next left vertex; -1 when all are matched, -2 on a dead end.
    int pick() const
    {
        int best = -1;
        for (int a = 0; a < H_.left_count(); ++a) {
            if (occ_.matched(a))
                continue;
            if (best < 0 || occ_.live(a) < occ_.live(best))
                best = a;
            if (occ_.live(a) == 0)
                return -2;
        }
        return best;
    }

    bool solve()
    {
        int a = pick();
        if (a == -1)
            return true;
        if (a == -2)
            return false;
        for (int e : H_.edges_at_left(a)) {
            if (!occ_.usable(e))
                continue;
            if (shared_nodes_.fetch_add(1, std::memory_order_relaxed) >= budget_) {
                out_of_budget_ = true;
                return false;
            }
            if (stop_.load(std::memory_order_relaxed))
                return false;
            occ_.take(e);
            if (solve())
                return true;
            occ_.release(e);
            if (out_of_budget_)
                return false;
        }
        return false;
    }

    bool out_of_budget() const { return out_of_budget_; }

private:
    const BipartiteHypergraph &H_;
    Occupancy occ_;
    std::uint64_t budget_;
    std::atomic<std::uint64_t> &shared_nodes_;
    const std::atomic<bool> &stop_;
    bool out_of_budget_ = false;
};

inline SolveResult solve_exact(const BipartiteHypergraph &H, const SolverConfig &cfg)
{
    SolveResult res;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> stop{false};

    ExactSearch root(H, cfg.node_budget, nodes, stop);
    int first = root.pick();
    std::vector<int> branches;
    if (first >= 0)
        for (int e : H.edges_at_left(first))
            if (root.occupancy().usable(e))
                branches.push_back(e);

    if (cfg.parallelism == 1 || branches.size() < 2) {
        bool found = root.solve();
        res.nodes = std::min<std::uint64_t>(nodes.load(), cfg.node_budget);
        if (found) {
            res.outcome = Outcome::found;
            res.matching = root.occupancy().matching();
        } else {
            res.outcome = root.out_of_budget() ? Outcome::budget : Outcome::nonexistent;
        }
        return res;
    }

    // Root branches are dealt round-robin to workers; the first success wins.
    std::mutex mu;
    std::optional<Matching> winner;
    std::atomic<bool> any_budget{false};
    int workers = std::min<int>(cfg.parallelism, static_cast<int>(branches.size()));
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t b = w; b < branches.size() && !stop.load(); b += workers) {
                    ExactSearch s(H, cfg.node_budget, nodes, stop);
                    if (nodes.fetch_add(1) >= cfg.node_budget) {
                        any_budget = true;
                        return;
                    }
                    s.occupancy().take(branches[b]);
                    if (s.solve()) {
                        std::lock_guard lock(mu);
                        if (!winner)
                            winner = s.occupancy().matching();
                        stop = true;
                        return;
                    }
                    if (s.out_of_budget()) {
                        any_budget = true;
                        return;
                    }
                }
            });
    }
    res.nodes = std::min<std::uint64_t>(nodes.load(), cfg.node_budget);
    res.schedule_dependent = true;
    if (winner) {
        res.outcome = Outcome::found;
        res.matching = std::move(winner);
    } else {
        res.outcome = any_budget ? Outcome::budget : Outcome::nonexistent;
    }
    return res;
}

/// One randomized greedy pass: random order of left vertices, random usable
/// edge at each step, give up at the first dead end.
inline std::optional<Matching> greedy_attempt(const BipartiteHypergraph &H, std::mt19937_64 &rng,
                                              std::uint64_t &nodes)
{
    Occupancy occ(H);
    std::vector<int> order(H.left_count());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<int> usable;
    for (int a : order) {
        usable.clear();
        for (int e : H.edges_at_left(a))
            if (occ.usable(e))
                usable.push_back(e);
        if (usable.empty())
            return std::nullopt;
        ++nodes;
        occ.take(usable[std::uniform_int_distribution<std::size_t>(0, usable.size() - 1)(rng)]);
    }
    return occ.matching();
}

inline std::mt19937_64 restart_rng(std::uint64_t seed, std::uint64_t restart)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(restart), static_cast<std::uint32_t>(restart >> 32)};
    return std::mt19937_64(seq);
}

inline SolveResult solve_heuristic(const BipartiteHypergraph &H, const SolverConfig &cfg)
{
    SolveResult res;
    if (cfg.parallelism == 1) {
        for (std::uint64_t r = 0; r < cfg.restart_budget; ++r) {
            auto rng = restart_rng(cfg.seed, r);
            res.restarts = r + 1;
            if (auto m = greedy_attempt(H, rng, res.nodes)) {
                res.outcome = Outcome::found;
                res.matching = std::move(m);
                return res;
            }
        }
        res.outcome = Outcome::budget;
        return res;
    }

    std::atomic<bool> stop{false};
    std::atomic<std::uint64_t> nodes{0}, restarts{0};
    std::mutex mu;
    std::optional<Matching> winner;
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < cfg.parallelism; ++w)
            pool.emplace_back([&, w] {
                std::uint64_t local_nodes = 0;
                for (std::uint64_t r = w; r < cfg.restart_budget && !stop.load(); r += cfg.parallelism) {
                    auto rng = restart_rng(cfg.seed, r);
                    ++restarts;
                    if (auto m = greedy_attempt(H, rng, local_nodes)) {
                        std::lock_guard lock(mu);
                        if (!winner)
                            winner = std::move(m);
                        stop = true;
                        break;
                    }
                }
                nodes += local_nodes;
            });
    }
    res.nodes = nodes.load();
    res.restarts = restarts.load();
    res.schedule_dependent = true;
    res.outcome = winner ? Outcome::found : Outcome::budget;
    res.matching = std::move(winner);
    return res;
}

} // namespace detail

/// Looks for an A-perfect matching. Exact mode reports `nonexistent` only after
/// exhausting the search space; the heuristic never does.
inline SolveResult solve(const BipartiteHypergraph &H, const SolverConfig &cfg = {})
{
    cfg.validate();
    auto start = std::chrono::steady_clock::now();
    SolveResult res;
    if (H.left_count() == 0) {
        res.outcome = Outcome::found;
        res.matching = Matching{};
    } else {
        res = cfg.mode == SolverMode::exact ? detail::solve_exact(H, cfg) : detail::solve_heuristic(H, cfg);
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

/// Tries every combination of one edge per left vertex. Test oracle only.
inline std::optional<Matching> brute_force_matching(const BipartiteHypergraph &H, int max_left = 6)
{
    if (H.left_count() > max_left)
        throw PreconditionError("brute_force_matching is limited to " + std::to_string(max_left) + " left vertices");
    Matching pick(H.left_count());
    auto disjoint = [&] {
        std::vector<char> used(H.right_count(), 0);
        for (auto e : pick)
            for (int r : H.edge(e).right) {
                if (used[r])
                    return false;
                used[r] = 1;
            }
        return true;
    };
    auto rec = [&](auto &&self, int a) -> bool {
        if (a == H.left_count())
            return disjoint();
        for (int e : H.edges_at_left(a)) {
            pick[a] = static_cast<std::size_t>(e);
            if (self(self, a + 1))
                return true;
        }
        return false;
    };
    if (rec(rec, 0))
        return pick;
    return std::nullopt;
}

} // namespace nestkit
