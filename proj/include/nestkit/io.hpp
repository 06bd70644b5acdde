#pragma once

// Text formats and certificate documents.
//
// Design file:   "v k lambda" header, then one block per line ("0,1,3").
// Cyclic file:   same grammar; the lines are base blocks, one per orbit.
// DF file:       "<group> [lambda]" header ("Z13", "Z2xZ4 1"), then one base
//                block per line; elements are integers for cyclic groups and
//                "(a,b,...)" tuples otherwise.
// Blank lines and '#' comments are ignored everywhere.

#include "cyclic.hpp"
#include "designs.hpp"
#include "diff_families.hpp"
#include "errors.hpp"
#include "groups.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace nestkit::io {

inline constexpr std::string_view kSchema = "nestkit-cert/1";

namespace detail {

inline std::vector<std::string> content_lines(std::string_view text)
{
    std::vector<std::string> out;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos)
            continue;
        auto last = line.find_last_not_of(" \t\r");
        out.push_back(line.substr(first, last - first + 1));
    }
    return out;
}

inline std::int64_t parse_int(std::string_view tok)
{
    std::int64_t x = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
    if (ec != std::errc{} || p != tok.data() + tok.size())
        throw StructureError("expected an integer, got '" + std::string(tok) + "'");
    return x;
}

/// Splits on commas and whitespace, keeping "( ... )" groups together.
inline std::vector<std::string> tokens(std::string_view line)
{
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    auto flush = [&] {
        if (!cur.empty())
            out.push_back(std::move(cur));
        cur.clear();
    };
    for (char c : line) {
        if (c == '(')
            ++depth;
        if (c == ')' && --depth < 0)
            throw StructureError("unbalanced ')' in '" + std::string(line) + "'");
        if (depth == 0 && (c == ',' || std::isspace(static_cast<unsigned char>(c)))) {
            flush();
            continue;
        }
        if (depth > 0 && std::isspace(static_cast<unsigned char>(c)))
            continue;
        cur += c;
    }
    if (depth != 0)
        throw StructureError("unbalanced '(' in '" + std::string(line) + "'");
    flush();
    return out;
}

inline std::vector<std::int64_t> int_list(std::string_view line)
{
    std::vector<std::int64_t> xs;
    for (const auto &t : tokens(line))
        xs.push_back(parse_int(t));
    return xs;
}

inline int narrow(std::int64_t x, const char *what)
{
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw StructureError(std::string(what) + " out of range");
    return static_cast<int>(x);
}

struct Header
{
    int v, k, lambda;
};

inline Header design_header(const std::vector<std::string> &lines)
{
    if (lines.empty())
        throw StructureError("empty design file");
    auto h = int_list(lines[0]);
    if (h.size() != 3)
        throw StructureError("design header must be 'v k lambda'");
    return {narrow(h[0], "v"), narrow(h[1], "k"), narrow(h[2], "lambda")};
}

inline std::vector<Block> block_lines(const std::vector<std::string> &lines)
{
    std::vector<Block> blocks;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        Block b;
        for (auto x : int_list(lines[i]))
            b.push_back(narrow(x, "point"));
        blocks.push_back(std::move(b));
    }
    return blocks;
}

} // namespace detail

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw StructureError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Design parse_design(std::string_view text)
{
    auto lines = detail::content_lines(text);
    auto h = detail::design_header(lines);
    return Design(h.v, h.k, h.lambda, detail::block_lines(lines));
}

inline std::string format_design(const Design &d)
{
    std::ostringstream os;
    os << d.v() << ' ' << d.k() << ' ' << d.lambda() << '\n';
    for (const auto &b : d.blocks()) {
        for (std::size_t i = 0; i < b.size(); ++i)
            os << (i ? "," : "") << b[i];
        os << '\n';
    }
    return os.str();
}

inline CyclicBibd parse_cyclic(std::string_view text)
{
    auto lines = detail::content_lines(text);
    auto h = detail::design_header(lines);
    return CyclicBibd(h.v, h.k, h.lambda, detail::block_lines(lines));
}

inline GroupElement parse_element(const AbelianGroup &G, std::string_view tok)
{
    if (!tok.empty() && tok.front() == '(') {
        if (tok.back() != ')')
            throw StructureError("bad element '" + std::string(tok) + "'");
        auto inner = tok.substr(1, tok.size() - 2);
        std::vector<Residue> r;
        for (const auto &t : detail::tokens(inner))
            r.push_back(detail::parse_int(t));
        return G.make(std::move(r));
    }
    return G.make(detail::parse_int(tok));
}

inline GroupSubset parse_subset(const AbelianGroup &G, std::string_view line)
{
    std::vector<GroupElement> elems;
    for (const auto &t : detail::tokens(line))
        elems.push_back(parse_element(G, t));
    return GroupSubset(G, std::move(elems));
}

/// Builds a family from block strings; lambda <= 0 means "infer from the
/// number of differences".
inline DifferenceFamily make_family(const AbelianGroup &G, const std::vector<std::string> &block_strings, int lambda)
{
    std::vector<GroupSubset> blocks;
    for (const auto &s : block_strings)
        blocks.push_back(parse_subset(G, s));
    if (blocks.empty())
        throw StructureError("difference family has no base blocks");
    int k = static_cast<int>(blocks.front().size());
    if (lambda <= 0) {
        auto diffs = static_cast<std::int64_t>(blocks.size()) * k * (k - 1);
        lambda = G.order() > 1 ? static_cast<int>(diffs / (G.order() - 1)) : 0;
    }
    return DifferenceFamily(G, k, lambda, std::move(blocks));
}

inline DifferenceFamily parse_family(std::string_view text)
{
    auto lines = detail::content_lines(text);
    if (lines.empty())
        throw StructureError("empty difference family file");
    auto head = detail::tokens(lines[0]);
    if (head.empty() || head.size() > 2)
        throw StructureError("difference family header must be '<group> [lambda]'");
    auto G = AbelianGroup::parse(head[0]);
    int lambda = head.size() == 2 ? detail::narrow(detail::parse_int(head[1]), "lambda") : 0;
    if (head.size() == 2 && lambda < 1)
        throw StructureError("lambda must be positive");
    return make_family(G, std::vector<std::string>(lines.begin() + 1, lines.end()), lambda);
}

inline std::string format_family(const DifferenceFamily &F)
{
    std::ostringstream os;
    os << F.group().to_string() << ' ' << F.lambda() << '\n';
    for (const auto &b : F.blocks()) {
        auto e = b.elements();
        for (std::size_t i = 0; i < e.size(); ++i)
            os << (i ? "," : "") << F.group().format(e[i]);
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Certificates

using nlohmann::json;

inline json element_json(const AbelianGroup &G, const GroupElement &g)
{
    if (G.is_cyclic())
        return g.residues.at(0);
    return g.residues;
}

inline GroupElement element_from_json(const AbelianGroup &G, const json &j)
{
    if (j.is_number_integer())
        return G.make(j.get<Residue>());
    if (j.is_array())
        return G.make(j.get<std::vector<Residue>>());
    throw StructureError("bad element in certificate");
}

inline json subset_json(const GroupSubset &B)
{
    json arr = json::array();
    for (const auto &g : B.elements())
        arr.push_back(element_json(B.group(), g));
    return arr;
}

inline GroupSubset subset_from_json(const AbelianGroup &G, const json &j)
{
    std::vector<GroupElement> elems;
    for (const auto &e : j)
        elems.push_back(element_from_json(G, e));
    return GroupSubset(G, std::move(elems));
}

inline json family_json(const DifferenceFamily &F)
{
    json blocks = json::array();
    for (const auto &b : F.blocks())
        blocks.push_back(subset_json(b));
    return {{"group", F.group().to_string()}, {"k", F.k()}, {"lambda", F.lambda()}, {"blocks", blocks}};
}

inline DifferenceFamily family_from_json(const json &j, const char *key = "blocks")
{
    auto G = AbelianGroup::parse(j.at("group").get<std::string>());
    std::vector<GroupSubset> blocks;
    for (const auto &b : j.at(key))
        blocks.push_back(subset_from_json(G, b));
    return DifferenceFamily(G, j.at("k").get<int>(), j.at("lambda").get<int>(), std::move(blocks));
}

inline json design_json(const Design &d)
{
    return {{"v", d.v()}, {"k", d.k()}, {"lambda", d.lambda()}, {"blocks", std::vector<Block>(d.blocks().begin(), d.blocks().end())}};
}

inline Design design_from_json(const json &j)
{
    return Design(j.at("v").get<int>(), j.at("k").get<int>(), j.at("lambda").get<int>(),
                  j.at("blocks").get<std::vector<Block>>());
}

inline json certificate(std::string_view kind)
{
    return {{"schema", kSchema}, {"kind", kind}};
}

/// Parses a certificate and checks its schema and kind.
inline json load_certificate(std::string_view text, std::string_view kind)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception &e) {
        throw StructureError(std::string("certificate is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("schema", "") != kSchema)
        throw StructureError("certificate schema is not " + std::string(kSchema));
    if (j.value("kind", "") != kind)
        throw StructureError("expected a '" + std::string(kind) + "' certificate, got '" + j.value("kind", "") + "'");
    return j;
}

inline json nesting_certificate_json(const NestingCertificate &c)
{
    auto j = certificate("nesting");
    j["design"] = design_json(c.base());
    j["anchors"] = std::vector<Point>(c.anchors().begin(), c.anchors().end());
    return j;
}

} // namespace nestkit::io
