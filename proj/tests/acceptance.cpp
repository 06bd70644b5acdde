// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "roundtrip.hpp"

#include <chrono>
#include <cstdio>
#include <functional>

using namespace nestkit;
namespace nt = nestkit::testing;

namespace {

struct Verdict
{
    bool ok = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3fs", s);
    return buf;
}

Verdict tally_verdict(const nt::Tally &t, int min_instances)
{
    bool ok = t.clean() && t.instances >= min_instances;
    std::string d = std::to_string(t.instances) + " instances, " + std::to_string(t.violations) + " violations";
    if (!t.clean())
        d += " (first: " + t.first_violation + ")";
    return {ok, d};
}

Verdict z13_bdf()
{
    auto t0 = std::chrono::steady_clock::now();
    auto cmd = nt::run({"verify-bdf", "--group", "Z13", "--blocks", "7,8,11", "4,10,12"});
    auto F = nt::cyclic_family(13, 1, {{7, 8, 11}, {4, 10, 12}});
    bool df = verify_df(F).ok, bdf = verify_bdf(F).ok;
    auto nested = develop_with_anchor(F).nested();
    auto blocks = nt::plain_blocks(nested);
    int max_pair = nt::oracle_max_pair(blocks);
    double s = seconds_since(t0);
    bool ok = cmd.exit_code == cli::kOk && df && bdf && nested.k() == 4 && blocks.size() == 26 && max_pair <= 2 &&
              verify_packing(nested).ok && s < 1.0;
    return {ok, std::to_string(blocks.size()) + " blocks of size " + std::to_string(nested.k()) + ", max pair " +
                    std::to_string(max_pair) + ", " + fmt_seconds(s)};
}

Verdict fano_nesting()
{
    auto t0 = std::chrono::steady_clock::now();
    SolverConfig cfg;
    cfg.mode = SolverMode::exact;
    auto r = find_nesting(nt::fano(), cfg);
    double s = seconds_since(t0);
    if (!r.certificate)
        return {false, "no nesting found"};
    const auto &n = r.certificate->nested();
    bool bibd = n.v() == 7 && n.k() == 4 && nt::oracle_is_bibd(7, 2, nt::plain_blocks(n));
    auto col = nesting_to_coloring(*r.certificate);
    auto g = levi_graph(nt::fano());
    bool harm = verify_harmonious(g, col), exact = verify_exact(g, col);
    return {bibd && harm && exact && s < 1.0, std::string("(7,4,2)-BIBD ") + (bibd ? "yes" : "no") +
                                                  ", harmonious " + (harm ? "yes" : "no") + ", exact " +
                                                  (exact ? "yes" : "no") + ", " + fmt_seconds(s)};
}

Verdict pg2_3_nesting()
{
    auto t0 = std::chrono::steady_clock::now();
    SolverConfig cfg;
    cfg.mode = SolverMode::exact;
    auto r = find_nesting(nt::pg2_3(), cfg);
    double s = seconds_since(t0);
    if (!r.certificate)
        return {false, "no nesting found"};
    const auto &n = r.certificate->nested();
    auto blocks = nt::plain_blocks(n);
    bool ok = n.k() == 5 && verify_packing(n).ok && nt::oracle_max_pair(blocks) <= 2 && s < 10.0;
    return {ok, "(13,5,2)-packing with " + std::to_string(blocks.size()) + " blocks, " + fmt_seconds(s)};
}

Verdict degree_formulas()
{
    auto designs = nt::corpus_designs().size();
    auto v = tally_verdict(nt::degree_formula_suite(), 1);
    v.ok = v.ok && designs >= 20;
    v.detail = std::to_string(designs) + " designs, " + v.detail;
    return v;
}

Verdict bounds()
{
    nt::Tally all;
    auto add = [&](const nt::Tally &t) {
        all.instances += t.instances;
        if (!t.clean() && all.clean())
            all.first_violation = t.first_violation;
        all.violations += t.violations;
    };
    auto bad = nt::bad_translation_random(500, 31);
    auto blk = nt::blocking_random(500, 42);
    auto orb = nt::orbit_count_random(500, 41);
    add(bad);
    add(blk);
    add(orb);
    auto tight_bad = nt::bad_translation_tight();
    auto tight_blk = nt::blocking_tight(4);
    auto tight_orb = nt::orbit_count_tight();
    add(tight_bad);
    add(tight_blk);
    add(tight_orb);
    bool each = bad.instances >= 500 && blk.instances >= 500 && orb.instances >= 500 && tight_bad.instances > 0 &&
                tight_blk.instances > 0 && tight_orb.instances > 0;
    auto v = tally_verdict(all, 1500);
    v.ok = v.ok && each;
    v.detail = "bad " + std::to_string(bad.instances) + ", blocking " + std::to_string(blk.instances) + ", orbits " +
               std::to_string(orb.instances) + ", tight " +
               std::to_string(tight_bad.instances + tight_blk.instances + tight_orb.instances) + "; " + v.detail;
    return v;
}

Verdict novak()
{
    std::string detail;
    bool ok = true;
    for (auto name : {"sts13.cyclic", "sts15.cyclic", "sts19.cyclic", "sts21.cyclic"}) {
        auto t0 = std::chrono::steady_clock::now();
        auto c = io::parse_cyclic(io::read_file(nt::data_path(name)));
        SolverConfig cfg;
        cfg.mode = SolverMode::exact;
        auto r = novak_select(c, cfg);
        bool found = r.outcome == NovakOutcome::found && verify_disjoint_selection(c, r.selection).ok;
        double s = seconds_since(t0);
        ok = ok && found && s < 10.0;
        detail += std::string(detail.empty() ? "" : ", ") + "STS(" + std::to_string(c.v()) + ") " +
                  (found ? "ok" : "missing") + " " + fmt_seconds(s);
    }
    return {ok, detail};
}

Verdict alpha_beta_check()
{
    auto v = tally_verdict(nt::alpha_beta_suite(), 1);
    auto ab = alpha_beta(3, 1, 4, 2);
    v.ok = v.ok && ab.alpha == 6 && ab.beta == 6;
    v.detail += ", (3,1,4,2) -> alpha " + std::to_string(ab.alpha) + " beta " + std::to_string(ab.beta);
    return v;
}

Verdict round_trip()
{
    auto rt = nt::round_trip_suite();
    auto v = tally_verdict(rt.tally, 1);
    v.ok = v.ok && rt.certificates > 0;
    v.detail = std::to_string(rt.certificates) + " certificates, " + v.detail;
    return v;
}

} // namespace

int main()
{
    const std::vector<std::pair<const char *, std::function<Verdict()>>> criteria = {
        {"Z13 Banff difference family and (13,4,2) packing", z13_bdf},
        {"perfect nesting of the Fano plane", fano_nesting},
        {"nesting of the cyclic (13,4,1) design", pg2_3_nesting},
        {"nesting hypergraph degree formulas", degree_formulas},
        {"translation and orbit bounds", bounds},
        {"Novak selections on cyclic STS(13,15,19,21)", novak},
        {"exact matcher vs brute force",
         [] { return tally_verdict(nt::matching_oracle_suite(300, 7), 200); }},
        {"alpha/beta arithmetic", alpha_beta_check},
        {"certificate round trip", round_trip},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v;
        try {
            v = criteria[i].second();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        failures += !v.ok;
        std::printf("%s %zu %s: %s\n", v.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, v.detail.c_str());
    }
    return failures == 0 ? 0 : 1;
}
