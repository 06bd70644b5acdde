#pragma once

// Command-line front end. run() never prints; it returns the report text and
// exit code, and writes the certificate to --out when asked.
//
// Exit codes: 0 property verified / object found, 1 verification failed or
// object proven not to exist, 2 not found within budget, 3 input error.

#include "cyclic.hpp"
#include "designs.hpp"
#include "diff_families.hpp"
#include "errors.hpp"
#include "groups.hpp"
#include "hypergraph.hpp"
#include "io.hpp"
#include "matching.hpp"
#include "search.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace nestkit::cli {

enum ExitCode : int
{
    kOk = 0,
    kFailed = 1,
    kNotFound = 2,
    kInputError = 3,
};

struct CommandResult
{
    int exit_code = kOk;
    std::string report;
    std::optional<io::json> certificate;
};

namespace detail {

using io::json;

struct Options
{
    // solver / global
    std::string mode = "exact";
    std::uint64_t seed = 1;
    std::uint64_t budget = 10'000'000;
    std::uint64_t restarts = 1000;
    int parallelism = 1;
    std::string out;
    bool timing = false;

    // inputs
    std::string design_file, df_file, cyclic_file, cert_file, coloring_file;
    std::string group;
    std::vector<std::string> blocks;
    int v = 0, k = 0, lambda = 0;

    // command specific
    bool packing = false;
    bool perfect = false;
    int retries = 1;
    int sweep = 0;
    int k1 = 0, lambda1 = 0, k2 = 0, lambda2 = 0;
    double dp_D = 0, dp_alpha = 0.5, dp_beta = 0.5;
    std::string dump_file;
};

inline SolverConfig solver_config(const Options &o)
{
    SolverConfig cfg;
    cfg.mode = o.mode == "heuristic" ? SolverMode::heuristic : SolverMode::exact;
    cfg.seed = o.seed;
    cfg.node_budget = o.budget;
    cfg.restart_budget = o.restarts;
    cfg.parallelism = o.parallelism;
    return cfg;
}

inline json solver_json(const Options &o, const SolveResult &r)
{
    return {{"mode", o.mode},           {"seed", o.seed},   {"outcome", std::string(to_string(r.outcome))},
            {"nodes", r.nodes},         {"restarts", r.restarts}, {"parallelism", o.parallelism}};
}

inline std::string solver_line(const Options &o, const SolveResult &r)
{
    std::ostringstream os;
    os << "solver: mode=" << o.mode << " seed=" << o.seed << " outcome=" << to_string(r.outcome)
       << " nodes=" << r.nodes << " restarts=" << r.restarts;
    if (r.schedule_dependent)
        os << " (parallel: solution depends on scheduling)";
    if (o.timing)
        os << " time=" << std::fixed << std::setprecision(6) << r.seconds << "s";
    return os.str();
}

inline std::string params(int v, int k, int lambda)
{
    return "(" + std::to_string(v) + "," + std::to_string(k) + "," + std::to_string(lambda) + ")";
}

inline Design load_design(const Options &o)
{
    if (o.design_file.empty())
        throw StructureError("--design FILE is required");
    return io::parse_design(io::read_file(o.design_file));
}

/// --df FILE, --cert FILE (df or bdf certificate), or --group G --blocks ... [--lambda L].
inline DifferenceFamily load_family(const Options &o)
{
    if (!o.df_file.empty())
        return io::parse_family(io::read_file(o.df_file));
    if (!o.cert_file.empty()) {
        auto text = io::read_file(o.cert_file);
        auto j = json::parse(text, nullptr, false);
        auto kind = j.is_object() ? j.value("kind", "") : "";
        return io::family_from_json(io::load_certificate(text, kind == "bdf" ? "bdf" : "df"));
    }
    if (o.group.empty() || o.blocks.empty())
        throw StructureError("give --df FILE, --cert FILE, or --group G --blocks ...");
    return io::make_family(AbelianGroup::parse(o.group), o.blocks, o.lambda);
}

inline CyclicBibd load_cyclic(const Options &o)
{
    if (!o.cyclic_file.empty())
        return io::parse_cyclic(io::read_file(o.cyclic_file));
    if (o.v < 1 || o.blocks.empty())
        throw StructureError("give --cyclic FILE or --v V --k K --lambda L --blocks ...");
    std::vector<Block> bases;
    for (const auto &s : o.blocks) {
        Block b;
        for (const auto &t : io::detail::tokens(s))
            b.push_back(io::detail::narrow(io::detail::parse_int(t), "point"));
        bases.push_back(std::move(b));
    }
    int k = o.k > 0 ? o.k : static_cast<int>(bases.front().size());
    return CyclicBibd(o.v, k, o.lambda > 0 ? o.lambda : 1, std::move(bases));
}

inline std::string df_line(const DifferenceFamily &F, const DfReport &r)
{
    if (r.ok)
        return "df: ok (" + F.group().to_string() + ", k=" + std::to_string(F.k()) +
               ", lambda=" + std::to_string(F.lambda()) + ")";
    return "df: FAIL element " + F.group().format(*r.witness) + " occurs " + std::to_string(r.count) +
           " times, expected " + std::to_string(F.lambda());
}

inline std::string set_name(const BdfReport::SetRef &s)
{
    return std::string(s.negated ? "-F" : "F") + std::to_string(s.block);
}

inline void packing_summary(std::ostream &os, const NestingCertificate &c)
{
    const auto &n = c.nested();
    auto rep = verify_packing(n);
    os << "nested: " << params(n.v(), n.k(), n.lambda()) << "-packing, " << n.block_count()
       << " blocks, max pair count " << rep.worst_count << "\n";
    os << "perfect: " << (is_perfect_nesting(c) ? "yes" : "no") << "\n";
}

// --- commands ---------------------------------------------------------------

inline CommandResult verify_design(const Options &o)
{
    auto d = load_design(o);
    std::ostringstream os;
    os << "design: " << params(d.v(), d.k(), d.lambda()) << " with " << d.block_count() << " blocks\n";
    auto pk = verify_packing(d);
    auto bibd = verify_bibd(d);
    if (pk.ok)
        os << "packing: ok\n";
    else
        os << "packing: FAIL pair " << format_pair(*pk.worst_pair) << " covered " << pk.worst_count << " times\n";
    if (bibd.ok)
        os << "bibd: ok\n";
    else
        os << "bibd: FAIL pair " << format_pair(*bibd.witness) << " covered " << bibd.witness_count
           << " times, expected " << d.lambda() << "\n";
    bool ok = o.packing ? pk.ok : bibd.ok;
    return {ok ? kOk : kFailed, os.str(), std::nullopt};
}

inline CommandResult verify_df_cmd(const Options &o)
{
    auto F = load_family(o);
    auto r = verify_df(F);
    return {r.ok ? kOk : kFailed, df_line(F, r) + "\n", std::nullopt};
}

inline CommandResult verify_bdf_cmd(const Options &o)
{
    auto F = load_family(o);
    std::ostringstream os;
    bool ok = true;

    // A bdf certificate also records where each block came from.
    if (!o.cert_file.empty()) {
        auto j = io::load_certificate(io::read_file(o.cert_file), "bdf");
        if (j.contains("source_blocks")) {
            auto src = io::family_from_json(j, "source_blocks");
            const auto &ts = j.at("translations");
            bool match = ts.size() == F.size() && src.size() == F.size();
            for (std::size_t i = 0; match && i < F.size(); ++i)
                match = translate(src.block(i), io::element_from_json(F.group(), ts[i])) == F.block(i);
            os << "translations: " << (match ? "ok" : "FAIL blocks are not the stated translates") << "\n";
            ok = ok && match;
            if (auto sr = verify_df(src); !sr.ok) {
                os << "source df: FAIL\n";
                ok = false;
            }
        }
    }

    auto r = verify_bdf(F);
    os << df_line(F, r.df) << "\n";
    if (r.collision)
        os << "banff: FAIL " << set_name(r.collision->first) << " and " << set_name(r.collision->second)
           << " share " << F.group().format(*r.shared) << "\n";
    else
        os << "banff: ok (base blocks and negatives pairwise disjoint)\n";
    ok = ok && r.ok;
    if (r.ok)
        packing_summary(os, develop_with_anchor(F));
    return {ok ? kOk : kFailed, os.str(), std::nullopt};
}

inline CommandResult nest_find(const Options &o)
{
    Design d = !o.df_file.empty() ? develop(io::parse_family(io::read_file(o.df_file))) : load_design(o);
    std::ostringstream os;
    os << "design: " << params(d.v(), d.k(), d.lambda()) << " with " << d.block_count() << " blocks\n";
    auto res = find_nesting(d, solver_config(o));
    os << solver_line(o, res.solve) << "\n";
    if (!res.certificate) {
        if (res.solve.outcome == Outcome::nonexistent) {
            os << "nesting: none (exhaustive search)\n";
            return {kFailed, os.str(), std::nullopt};
        }
        os << "nesting: not found within budget\n";
        return {kNotFound, os.str(), std::nullopt};
    }
    const auto &c = *res.certificate;
    os << "anchors:";
    for (auto a : c.anchors())
        os << ' ' << a;
    os << "\n";
    packing_summary(os, c);
    auto cert = io::nesting_certificate_json(c);
    cert["solver"] = solver_json(o, res.solve);
    return {kOk, os.str(), std::move(cert)};
}

inline CommandResult nest_verify(const Options &o)
{
    if (o.cert_file.empty())
        throw StructureError("--cert FILE is required");
    auto j = io::load_certificate(io::read_file(o.cert_file), "nesting");
    auto d = io::design_from_json(j.at("design"));
    auto anchors = j.at("anchors").get<std::vector<Point>>();
    std::ostringstream os;
    os << "design: " << params(d.v(), d.k(), d.lambda()) << " with " << d.block_count() << " blocks\n";
    if (auto b = verify_bibd(d); !b.ok)
        os << "note: base design is not a BIBD\n";
    try {
        auto c = apply_nesting(d, anchors);
        os << "nesting: ok\n";
        packing_summary(os, c);
        bool ok = !o.perfect || is_perfect_nesting(c);
        return {ok ? kOk : kFailed, os.str(), std::nullopt};
    } catch (const NestingError &e) {
        os << "nesting: FAIL " << e.what() << "\n";
        return {kFailed, os.str(), std::nullopt};
    }
}

inline json bdf_certificate(const DifferenceFamily &src, const BdfConversion &r, const Options &o)
{
    auto cert = io::certificate("bdf");
    cert.update(io::family_json(*r.bdf));
    cert["source_blocks"] = io::family_json(src).at("blocks");
    json ts = json::array();
    for (const auto &t : r.translations)
        ts.push_back(io::element_json(src.group(), t));
    cert["translations"] = ts;
    cert["solver"] = solver_json(o, r.solve);
    return cert;
}

inline CommandResult bdf_sweep(const Options &o)
{
    if (o.k < 2)
        throw StructureError("--sweep needs --k >= 2");
    std::ostringstream os;
    int step = o.k * (o.k - 1);
    int lambda = o.lambda > 0 ? o.lambda : 1;
    os << "# cyclic (Z_v," << o.k << "," << lambda << ") difference families -> Banff, v <= " << o.sweep << "\n";
    for (int v = o.k + 1; v <= o.sweep; ++v) {
        if ((static_cast<std::int64_t>(lambda) * (v - 1)) % step)
            continue;
        auto G = AbelianGroup::cyclic(v);
        auto df = search_df(G, o.k, lambda, o.budget, o.seed);
        os << "v=" << v << " df=" << to_string(df.outcome);
        if (df.family) {
            auto r = df_to_bdf(*df.family, solver_config(o));
            os << " bdf=" << (r.found ? "found" : (r.solve.outcome == Outcome::nonexistent ? "none-for-this-df"
                                                                                          : "budget"));
            if (r.found)
                for (const auto &b : r.bdf->blocks())
                    os << ' ' << b.to_string();
        }
        os << "\n";
    }
    return {kOk, os.str(), std::nullopt};
}

inline CommandResult bdf_from_df(const Options &o)
{
    if (o.sweep > 0)
        return bdf_sweep(o);
    auto F = load_family(o);
    std::ostringstream os;
    auto dr = verify_df(F);
    os << df_line(F, dr) << "\n";
    if (!dr.ok)
        return {kFailed, os.str(), std::nullopt};
    auto r = df_to_bdf(F, solver_config(o));
    os << solver_line(o, r.solve) << "\n";
    if (!r.found) {
        if (r.solve.outcome == Outcome::nonexistent)
            os << "banff: not found (no translation choice works for this family; other families may)\n";
        else
            os << "banff: not found within budget\n";
        return {kNotFound, os.str(), std::nullopt};
    }
    os << "translations:";
    for (const auto &t : r.translations)
        os << ' ' << F.group().format(t);
    os << "\nbanff:";
    for (const auto &b : r.bdf->blocks())
        os << ' ' << b.to_string();
    os << "\n";
    return {kOk, os.str(), bdf_certificate(F, r, o)};
}

inline CommandResult novak_select_cmd(const Options &o)
{
    auto c = load_cyclic(o);
    std::ostringstream os;
    auto orbits = decompose_orbits(c);
    auto bounds = check_orbit_bounds(c);
    os << "design: cyclic " << params(c.v(), c.k(), c.lambda()) << " with " << orbits.size() << " orbits (h="
       << bounds.h << " short, m=" << bounds.m << " full)\n";
    auto res = novak_select(c, solver_config(o), o.retries);
    if (res.placement.ok)
        os << "short orbits placed: T=" << format_block(res.placement.T) << "\n";
    if (res.outcome == NovakOutcome::placement_failed) {
        os << "novak: " << to_string(res.outcome) << " at short base " << *res.placement.failed_at << "\n";
        return {kNotFound, os.str(), std::nullopt};
    }
    os << solver_line(o, res.solve) << "\n";
    if (res.outcome != NovakOutcome::found) {
        os << "novak: not found (" << to_string(res.outcome) << ")\n";
        return {kNotFound, os.str(), std::nullopt};
    }
    for (std::size_t i = 0; i < orbits.size(); ++i)
        os << "orbit " << i << ": base " << format_block(orbits[i].base) << " + " << res.translations[i] << " = "
           << format_block(res.selection[i]) << "\n";
    os << "novak: ok (pairwise disjoint, one block per orbit)\n";

    auto cert = io::certificate("novak");
    cert["v"] = c.v();
    cert["k"] = c.k();
    cert["lambda"] = c.lambda();
    cert["bases"] = std::vector<Block>(c.bases().begin(), c.bases().end());
    cert["translations"] = res.translations;
    cert["selection"] = res.selection;
    cert["solver"] = solver_json(o, res.solve);
    return {kOk, os.str(), std::move(cert)};
}

inline CommandResult novak_verify(const Options &o)
{
    if (o.cert_file.empty())
        throw StructureError("--cert FILE is required");
    auto j = io::load_certificate(io::read_file(o.cert_file), "novak");
    CyclicBibd c(j.at("v").get<int>(), j.at("k").get<int>(), j.at("lambda").get<int>(),
                 j.at("bases").get<std::vector<Block>>());
    auto ts = j.at("translations").get<std::vector<std::int64_t>>();
    if (ts.size() != c.bases().size())
        throw StructureError("certificate needs one translation per orbit");
    std::vector<Block> selection;
    for (std::size_t i = 0; i < ts.size(); ++i)
        selection.push_back(cyclic_translate(c.v(), c.bases()[i], ts[i]));
    std::ostringstream os;
    bool ok = true;
    if (j.contains("selection")) {
        auto listed = j.at("selection").get<std::vector<Block>>();
        for (auto &b : listed)
            std::sort(b.begin(), b.end());
        bool same = listed == selection;
        os << "selection matches translations: " << (same ? "yes" : "NO") << "\n";
        ok = same;
    }
    auto r = verify_disjoint_selection(c, selection);
    if (r.not_in_orbit)
        os << "novak: FAIL block " << *r.not_in_orbit << " is not in its orbit\n";
    else if (r.overlap)
        os << "novak: FAIL blocks " << r.overlap->first << " and " << r.overlap->second << " intersect\n";
    else
        os << "novak: ok (" << selection.size() << " pairwise disjoint blocks)\n";
    return {ok && r.ok ? kOk : kFailed, os.str(), std::nullopt};
}

inline CommandResult levi_color(const Options &o)
{
    std::ostringstream os;
    if (!o.coloring_file.empty()) {
        auto j = io::load_certificate(io::read_file(o.coloring_file), "coloring");
        auto d = io::design_from_json(j.at("design"));
        Coloring col{j.at("colors").get<int>(), j.at("assignment").get<std::vector<int>>()};
        auto g = levi_graph(d);
        bool harmonious = verify_harmonious(g, col);
        os << "levi graph: " << g.vertex_count() << " vertices, " << g.edges().size() << " edges\n";
        os << "harmonious: " << (harmonious ? "yes" : "no") << "\n";
        os << "exact: " << (verify_exact(g, col) ? "yes" : "no") << "\n";
        if (!harmonious)
            return {kFailed, os.str(), std::nullopt};
        try {
            auto c = coloring_to_nesting(d, col);
            os << "nesting: ok\n";
            packing_summary(os, c);
            return {kOk, os.str(), std::nullopt};
        } catch (const NestingError &e) {
            os << "nesting: FAIL " << e.what() << "\n";
            return {kFailed, os.str(), std::nullopt};
        }
    }
    if (o.cert_file.empty())
        throw StructureError("give --cert NESTING_CERT or --coloring COLORING_CERT");
    auto j = io::load_certificate(io::read_file(o.cert_file), "nesting");
    auto d = io::design_from_json(j.at("design"));
    NestingCertificate c = [&] {
        try {
            return apply_nesting(d, j.at("anchors").get<std::vector<Point>>());
        } catch (const NestingError &e) {
            throw StructureError(std::string("nesting certificate does not verify: ") + e.what());
        }
    }();
    auto col = nesting_to_coloring(c);
    auto g = levi_graph(d);
    bool harmonious = verify_harmonious(g, col);
    os << "levi graph: " << g.vertex_count() << " vertices, " << g.edges().size() << " edges\n";
    os << "colors: " << col.colors << "\n";
    os << "harmonious: " << (harmonious ? "yes" : "no") << "\n";
    os << "exact: " << (verify_exact(g, col) ? "yes" : "no") << "\n";
    auto cert = io::certificate("coloring");
    cert["design"] = io::design_json(d);
    cert["colors"] = col.colors;
    cert["assignment"] = col.assignment;
    return {harmonious ? kOk : kFailed, os.str(), std::move(cert)};
}

inline void degree_lines(std::ostream &os, const BipartiteHypergraph &H)
{
    auto r = degree_report(H);
    os << "left vertices: " << H.left_count() << "\nright vertices: " << H.right_count()
       << "\nedges: " << H.edge_count() << " (uniformity " << H.right_arity() + 1 << ")\n";
    os << "left degree: min " << r.left_min << " max " << r.left_max << "\n";
    os << "right degree: min " << r.right_min << " max " << r.right_max << "\n";
    os << "max codegree: left-right " << r.max_codegree_left_right << ", right-right " << r.max_codegree_right_right
       << "\n";
}

inline void dp_lines(std::ostream &os, const BipartiteHypergraph &H, double D, const Options &o)
{
    if (o.dp_D > 0)
        D = o.dp_D;
    os << std::setprecision(6);
    if (!(D > 0)) {
        os << "dp check: skipped (D = " << D << " is not positive at this size)\n";
        return;
    }
    auto r = dp_hypothesis_check(H, D, o.dp_alpha, o.dp_beta);
    os << "dp check: D=" << D << " alpha=" << o.dp_alpha << " beta=" << o.dp_beta << "\n";
    os << "  left degree " << r.min_left_degree << " >= " << r.left_threshold << ": "
       << (r.left_degree_ok ? "yes" : "no") << "\n";
    os << "  right degree " << r.max_right_degree << " <= " << D << ": " << (r.right_degree_ok ? "yes" : "no")
       << "\n";
    os << "  codegree " << r.max_codegree << " <= " << r.codegree_cap << ": " << (r.codegree_ok ? "yes" : "no")
       << "\n";
    os << "  (diagnostic only; asymptotic hypotheses, a matching may exist either way)\n";
}

inline CommandResult hypergraph_stats(const Options &o)
{
    std::ostringstream os;
    std::optional<BipartiteHypergraph> H;
    double D = 0;
    if (!o.design_file.empty()) {
        auto d = load_design(o);
        H = build_nesting_hypergraph(d);
        double v = d.v(), k = d.k(), lam = d.lambda();
        os << "hypergraph: nesting of " << params(d.v(), d.k(), d.lambda()) << "-BIBD\n";
        degree_lines(os, *H);
        os << "expected: left degree v-k = " << v - k << ", pair degree 2 lambda (v-k)/(k-1) = "
           << (k > 1 ? 2 * lam * (v - k) / (k - 1) : 0) << "\n";
        D = 4 * lam * (v - k) / (4 * lam + 1);
    } else if (!o.cyclic_file.empty() || o.v > 0) {
        auto c = load_cyclic(o);
        std::vector<Block> short_bases, full_bases;
        for (const auto &orb : decompose_orbits(c))
            (orb.kind == OrbitKind::full ? full_bases : short_bases).push_back(orb.base);
        auto place = place_short_orbits(short_bases, c.v());
        if (!place.ok)
            throw PreconditionError("short orbits could not be placed greedily");
        H = build_novak_hypergraph(c.v(), full_bases, place.T);
        double v = c.v(), k = c.k(), lam = c.lambda(), t = static_cast<double>(place.T.size());
        os << "hypergraph: Novak selection for cyclic " << params(c.v(), c.k(), c.lambda()) << ", |T|=" << t << "\n";
        degree_lines(os, *H);
        os << "bounds: left degree >= v-k|T| = " << v - k * t << ", point degree <= lambda(v-1)/(k-1) = "
           << (k > 1 ? lam * (v - 1) / (k - 1) : 0) << "\n";
        D = k > 1.5 ? 2 * lam * (v - k * t) / (2 * k - 3) : 0;
    } else {
        auto F = load_family(o);
        H = build_bdf_hypergraph(F);
        double v = static_cast<double>(F.group().order()), k = F.k(), lam = F.lambda();
        double C = static_cast<double>(F.group().order2_count());
        os << "hypergraph: Banff for " << F.to_string() << "\n";
        degree_lines(os, *H);
        double low = v - std::pow(2.0, C) * k * k;
        os << "bounds: left degree >= v-2^C k^2 = " << low << ", pair degree <= 2 lambda(v-1)/(k-1) = "
           << (k > 1 ? 2 * lam * (v - 1) / (k - 1) : 0) << "\n";
        D = k > 1.5 ? 4 * lam * low / (2 * k - 3) : 0;
    }
    dp_lines(os, *H, D, o);
    if (!o.dump_file.empty()) {
        std::ofstream f(o.dump_file);
        if (!(f << dump(*H)))
            throw StructureError("cannot write '" + o.dump_file + "'");
    }
    return {kOk, os.str(), std::nullopt};
}

inline CommandResult search_df_cmd(const Options &o)
{
    if (o.group.empty())
        throw StructureError("--group is required");
    auto G = AbelianGroup::parse(o.group);
    auto r = search_df(G, o.k, o.lambda > 0 ? o.lambda : 1, o.budget, o.seed);
    std::ostringstream os;
    os << "search: " << to_string(r.outcome) << " after " << r.nodes << " nodes\n";
    if (!r.family)
        return {r.outcome == Outcome::nonexistent ? kFailed : kNotFound, os.str(), std::nullopt};
    os << "df:";
    for (const auto &b : r.family->blocks())
        os << ' ' << b.to_string();
    os << "\n";
    auto cert = io::certificate("df");
    cert.update(io::family_json(*r.family));
    cert["search"] = {{"seed", o.seed}, {"budget", o.budget}, {"nodes", r.nodes}};
    return {kOk, os.str(), std::move(cert)};
}

inline CommandResult alpha_beta_cmd(const Options &o)
{
    std::ostringstream os;
    AlphaBeta ab{};
    try {
        ab = alpha_beta(o.k1, o.lambda1, o.k2, o.lambda2);
    } catch (const PreconditionError &e) {
        os << "alpha-beta: FAIL " << e.what() << "\n";
        return {kFailed, os.str(), std::nullopt};
    }
    os << "alpha: " << ab.alpha << "\nbeta: " << ab.beta << "\n";
    if (o.v > 0) {
        std::int64_t v = o.v;
        bool c1 = (o.lambda1 * (v - 1)) % (o.k1 - 1) == 0;
        bool c2 = (o.lambda1 * v * (v - 1)) % (static_cast<std::int64_t>(o.k1) * (o.k1 - 1)) == 0;
        bool c3 = (o.lambda2 * (v - 1)) % (o.k2 - 1) == 0;
        os << "v=" << v << ": lambda1(v-1) = 0 mod k1-1: " << (c1 ? "yes" : "no")
           << "; lambda1 v(v-1) = 0 mod k1(k1-1): " << (c2 ? "yes" : "no")
           << "; lambda2(v-1) = 0 mod k2-1: " << (c3 ? "yes" : "no") << "\n";
        os << "alpha | v-1: " << ((v - 1) % ab.alpha == 0 ? "yes" : "no")
           << "; beta | v(v-1): " << ((v * (v - 1)) % ab.beta == 0 ? "yes" : "no") << "\n";
    }
    return {kOk, os.str(), std::nullopt};
}

inline CommandResult conditions_cmd(const Options &o)
{
    auto r = nesting_necessary_conditions(o.v, o.k, o.lambda, o.perfect);
    std::ostringstream os;
    os << (o.perfect ? "perfect nesting" : "nesting") << " conditions for " << params(o.v, o.k, o.lambda) << ": "
       << (r.ok ? "pass" : "fail") << "\n";
    for (const auto &f : r.failures)
        os << "  " << f << "\n";
    return {r.ok ? kOk : kFailed, os.str(), std::nullopt};
}

} // namespace detail

/// Runs one command; `args` excludes the program name.
inline CommandResult run(std::vector<std::string> args)
{
    using namespace detail;
    Options o;
    CLI::App app{"Nested designs, Banff difference families and disjoint orbit representatives", "nestkit"};
    app.require_subcommand(1);
    app.fallthrough();

    app.add_option("--mode", o.mode, "solver mode")->check(CLI::IsMember({"exact", "heuristic"}));
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--budget", o.budget, "node budget")->check(CLI::PositiveNumber);
    app.add_option("--restarts", o.restarts, "restart budget (heuristic mode)")->check(CLI::PositiveNumber);
    app.add_option("--parallelism", o.parallelism, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", o.out, "write certificate to this file");
    app.add_flag("--timing", o.timing, "include wall time in solver lines");

    auto family_inputs = [&](CLI::App *c) {
        c->add_option("--df", o.df_file, "difference family file");
        c->add_option("--group", o.group, "group spec, e.g. Z13 or Z2xZ4");
        c->add_option("--blocks", o.blocks, "base blocks, e.g. 7,8,11 4,10,12");
        c->add_option("--lambda", o.lambda, "index (inferred when omitted)");
        c->add_option("--cert", o.cert_file, "df or bdf certificate");
    };
    auto cyclic_inputs = [&](CLI::App *c) {
        c->add_option("--cyclic", o.cyclic_file, "cyclic design file (base blocks)");
        c->add_option("--v", o.v, "order of Z_v");
        c->add_option("--k", o.k, "block size");
        c->add_option("--lambda", o.lambda, "index");
        c->add_option("--blocks", o.blocks, "base blocks");
    };

    auto *vd = app.add_subcommand("verify-design", "check a design file is a BIBD (or packing)");
    vd->add_option("--design", o.design_file, "design file")->required();
    vd->add_flag("--packing", o.packing, "only require a packing");

    auto *vdf = app.add_subcommand("verify-df", "check a difference family");
    family_inputs(vdf);
    auto *vbdf = app.add_subcommand("verify-bdf", "check a Banff difference family");
    family_inputs(vbdf);

    auto *nf = app.add_subcommand("nest-find", "find a nesting of a BIBD");
    nf->add_option("--design", o.design_file, "design file");
    nf->add_option("--df", o.df_file, "difference family to develop");

    auto *nv = app.add_subcommand("nest-verify", "verify a nesting certificate");
    nv->add_option("--cert", o.cert_file, "nesting certificate")->required();
    nv->add_flag("--perfect", o.perfect, "also require a perfect nesting");

    auto *bfd = app.add_subcommand("bdf-from-df", "translate base blocks into a Banff difference family");
    family_inputs(bfd);
    bfd->add_option("--sweep", o.sweep, "try every cyclic Z_v, v <= N (with --k)");
    bfd->add_option("--k", o.k, "block size for --sweep");

    auto *ns = app.add_subcommand("novak-select", "choose pairwise disjoint blocks, one per orbit");
    cyclic_inputs(ns);
    ns->add_option("--retries", o.retries, "short-orbit orders to try")->check(CLI::PositiveNumber);
    auto *nvv = app.add_subcommand("novak-verify", "verify a Novak selection certificate");
    nvv->add_option("--cert", o.cert_file, "novak certificate")->required();

    auto *lc = app.add_subcommand("levi-color", "Levi graph coloring from a nesting, or check a coloring");
    lc->add_option("--cert", o.cert_file, "nesting certificate");
    lc->add_option("--coloring", o.coloring_file, "coloring certificate to verify");

    auto *hs = app.add_subcommand("hypergraph-stats", "degree statistics of an auxiliary hypergraph");
    hs->add_option("--design", o.design_file, "BIBD (nesting hypergraph)");
    family_inputs(hs);
    hs->add_option("--cyclic", o.cyclic_file, "cyclic design (Novak hypergraph)");
    hs->add_option("--D", o.dp_D, "degree parameter D (default from the construction)");
    hs->add_option("--alpha", o.dp_alpha, "exponent alpha")->check(CLI::PositiveNumber);
    hs->add_option("--beta", o.dp_beta, "exponent beta")->check(CLI::PositiveNumber);
    hs->add_option("--dump", o.dump_file, "write edges, one per line");

    auto *sd = app.add_subcommand("search-df", "backtracking search for a difference family");
    sd->add_option("--group", o.group, "group spec")->required();
    sd->add_option("--k", o.k, "block size")->required();
    sd->add_option("--lambda", o.lambda, "index (default 1)");

    auto *ab = app.add_subcommand("alpha-beta", "divisibility parameters of a (k2,l2;k1,l1)-nesting");
    ab->add_option("--k1", o.k1)->required();
    ab->add_option("--lambda1", o.lambda1)->required();
    ab->add_option("--k2", o.k2)->required();
    ab->add_option("--lambda2", o.lambda2)->required();
    ab->add_option("--v", o.v, "also check the congruences for this v");

    auto *cd = app.add_subcommand("conditions", "necessary conditions for (perfect) nestings");
    cd->add_option("--v", o.v)->required();
    cd->add_option("--k", o.k)->required();
    cd->add_option("--lambda", o.lambda)->required();
    cd->add_flag("--perfect", o.perfect, "conditions for a perfect nesting");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp &) {
        auto subs = app.get_subcommands();
        return {kOk, subs.empty() ? app.help() : subs.front()->help(), std::nullopt};
    } catch (const CLI::ParseError &e) {
        return {kInputError, std::string("error: ") + e.what() + "\n", std::nullopt};
    }

    CommandResult res;
    try {
        auto *cmd = app.get_subcommands().front();
        const auto &name = cmd->get_name();
        if (name == "verify-design")
            res = verify_design(o);
        else if (name == "verify-df")
            res = verify_df_cmd(o);
        else if (name == "verify-bdf")
            res = verify_bdf_cmd(o);
        else if (name == "nest-find")
            res = nest_find(o);
        else if (name == "nest-verify")
            res = nest_verify(o);
        else if (name == "bdf-from-df")
            res = bdf_from_df(o);
        else if (name == "novak-select")
            res = novak_select_cmd(o);
        else if (name == "novak-verify")
            res = novak_verify(o);
        else if (name == "levi-color")
            res = levi_color(o);
        else if (name == "hypergraph-stats")
            res = hypergraph_stats(o);
        else if (name == "search-df")
            res = search_df_cmd(o);
        else if (name == "alpha-beta")
            res = alpha_beta_cmd(o);
        else
            res = conditions_cmd(o);
    } catch (const Error &e) {
        return {kInputError, std::string("error: ") + e.what() + "\n", std::nullopt};
    } catch (const io::json::exception &e) {
        return {kInputError, std::string("error: malformed certificate: ") + e.what() + "\n", std::nullopt};
    }

    if (res.certificate && !o.out.empty()) {
        std::ofstream f(o.out);
        if (!(f << res.certificate->dump(2) << '\n'))
            return {kInputError, res.report + "error: cannot write '" + o.out + "'\n", res.certificate};
        res.report += "certificate: " + o.out + "\n";
    }
    return res;
}

} // namespace nestkit::cli
