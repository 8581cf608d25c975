#include "pglayout/gfa.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace pglayout {

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> cols;
    std::size_t pos = 0;
    while (true) {
        const std::size_t tab = line.find('\t', pos);
        if (tab == std::string_view::npos) {
            cols.push_back(line.substr(pos));
            return cols;
        }
        cols.push_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
}

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
    throw MalformedLine("line " + std::to_string(line_no) + ": " + why);
}

std::uint64_t segment_length(const std::vector<std::string_view>& cols,
                             std::size_t line_no) {
    if (cols[2] != "*") return cols[2].size();
    for (std::size_t c = 3; c < cols.size(); ++c) {
        if (cols[c].substr(0, 5) != "LN:i:") continue;
        const std::string_view v = cols[c].substr(5);
        std::uint64_t len = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), len);
        if (ec != std::errc{} || ptr != v.data() + v.size() || len == 0)
            malformed(line_no, "bad LN tag value '" + std::string(v) + "'");
        return len;
    }
    malformed(line_no, "segment with '*' sequence needs an LN:i tag");
}

Orientation parse_orient_char(char c, std::size_t line_no) {
    if (c == '+') return Orientation::forward;
    if (c == '-') return Orientation::reverse;
    malformed(line_no, std::string("bad orientation '") + c + "'");
}

} // namespace

PangenomeGraph parse_gfa(std::istream& in, GfaParseStats* stats) {
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }

    std::unordered_map<std::string_view, NodeId> id_of;
    std::vector<std::uint64_t> lengths;
    GfaParseStats local_stats;

    // Pass 1: segments, so later records may reference segments declared
    // anywhere in the file.
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string& line = lines[ln];
        if (line.empty() || line[0] != 'S') continue;
        const auto cols = split_tabs(line);
        if (cols[0] != "S") continue;
        if (cols.size() < 3) malformed(ln + 1, "S record needs name and sequence");
        if (cols[1].empty()) malformed(ln + 1, "empty segment name");
        if (id_of.count(cols[1]))
            malformed(ln + 1, "duplicate segment '" + std::string(cols[1]) + "'");
        const std::uint64_t len = segment_length(cols, ln + 1);
        if (len == 0) malformed(ln + 1, "zero-length segment");
        id_of.emplace(cols[1], static_cast<NodeId>(lengths.size()));
        lengths.push_back(len);
    }

    const auto resolve = [&](std::string_view name, std::size_t line_no) {
        const auto it = id_of.find(name);
        if (it == id_of.end())
            throw UnknownSegment("line " + std::to_string(line_no) +
                                 " references undeclared segment '" +
                                 std::string(name) + "'");
        return it->second;
    };

    std::vector<Edge> edges;
    std::vector<NamedWalk> walks;

    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string& line = lines[ln];
        if (line.empty()) continue;
        const auto cols = split_tabs(line);
        const std::string_view type = cols[0];
        if (type == "S" || type == "H" || (!type.empty() && type[0] == '#'))
            continue;
        if (type == "W")
            malformed(ln + 1,
                      "W (walk) records are not supported; convert walks to "
                      "P lines first");
        if (type == "L") {
            if (cols.size() < 6)
                malformed(ln + 1, "L record needs 6 columns");
            if (cols[2].size() != 1 || cols[4].size() != 1)
                malformed(ln + 1, "bad orientation column");
            Edge e;
            e.from = resolve(cols[1], ln + 1);
            e.to = resolve(cols[3], ln + 1);
            // A forward source attaches at its end, a forward target at its
            // start; reverse flips the attachment.
            e.from_end = parse_orient_char(cols[2][0], ln + 1) ==
                                 Orientation::forward
                             ? Endpoint::end
                             : Endpoint::start;
            e.to_end = parse_orient_char(cols[4][0], ln + 1) ==
                               Orientation::forward
                           ? Endpoint::start
                           : Endpoint::end;
            edges.push_back(e);
            continue;
        }
        if (type == "P") {
            if (cols.size() < 4)
                malformed(ln + 1, "P record needs name, steps and overlaps");
            NamedWalk walk;
            walk.name = std::string(cols[1]);
            std::string_view steps = cols[2];
            while (!steps.empty()) {
                const std::size_t comma = steps.find(',');
                const std::string_view tok = steps.substr(0, comma);
                steps = comma == std::string_view::npos
                            ? std::string_view{}
                            : steps.substr(comma + 1);
                if (tok.size() < 2)
                    malformed(ln + 1, "bad path step '" + std::string(tok) + "'");
                const Orientation o = parse_orient_char(tok.back(), ln + 1);
                walk.steps.push_back(
                    {resolve(tok.substr(0, tok.size() - 1), ln + 1), o});
            }
            if (walk.steps.empty())
                throw EmptyPath("line " + std::to_string(ln + 1) + ": path '" +
                                walk.name + "' has no steps");
            walks.push_back(std::move(walk));
            continue;
        }
        ++local_stats.skipped_records;
    }

    if (walks.empty())
        throw NoPaths("no P records found; a layout needs at least one path");
    if (stats) *stats = local_stats;
    return build_graph(std::move(lengths), std::move(edges), std::move(walks));
}

void write_gfa(const PangenomeGraph& g, std::ostream& out) {
    out << "H\tVN:Z:1.0\n";
    for (std::size_t i = 0; i < g.node_count(); ++i)
        out << "S\t" << (i + 1) << "\t*\tLN:i:" << g.nodes[i].seq_len << "\n";
    for (const Edge& e : g.edges) {
        out << "L\t" << (e.from + 1) << '\t'
            << (e.from_end == Endpoint::end ? '+' : '-') << '\t' << (e.to + 1)
            << '\t' << (e.to_end == Endpoint::start ? '+' : '-') << "\t0M\n";
    }
    for (const Path& p : g.paths) {
        out << "P\t" << p.name << '\t';
        for (std::size_t k = 0; k < p.steps.size(); ++k) {
            if (k) out << ',';
            out << (p.steps[k].node_id + 1)
                << (p.steps[k].orient == Orientation::forward ? '+' : '-');
        }
        out << "\t*\n";
    }
}

} // namespace pglayout
