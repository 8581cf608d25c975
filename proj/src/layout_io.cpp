#include "pglayout/layout_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "pglayout/errors.hpp"

namespace pglayout {

namespace {

constexpr std::string_view kHeader = "node_id\tstart_x\tstart_y\tend_x\tend_y";

double parse_coord(std::string_view field, std::size_t line_no) {
    double v = 0.0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw MalformedRow("line " + std::to_string(line_no) +
                           ": bad coordinate '" + std::string(field) + "'");
    return v;
}

} // namespace

void write_layout_tsv(const Layout& layout, std::ostream& out) {
    out << kHeader << '\n';
    char buf[128];
    for (std::size_t i = 0; i < layout.node_count(); ++i) {
        const NodeId n = static_cast<NodeId>(i);
        const Vec2 s = layout.get(n, Endpoint::start);
        const Vec2 e = layout.get(n, Endpoint::end);
        if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(e.x) ||
            !std::isfinite(e.y))
            throw NonFiniteCoordinate("node " + std::to_string(i) +
                                      " has a non-finite coordinate");
        std::snprintf(buf, sizeof(buf), "%zu\t%.17g\t%.17g\t%.17g\t%.17g\n", i,
                      s.x, s.y, e.x, e.y);
        out << buf;
    }
}

Layout read_layout_tsv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw MalformedRow("empty layout file (missing header)");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader)
        throw MalformedRow("unexpected header '" + line + "'");

    struct Row {
        double sx, sy, ex, ey;
    };
    std::vector<Row> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::string_view rest = line;
        std::string_view fields[5];
        for (int f = 0; f < 5; ++f) {
            const std::size_t tab = rest.find('\t');
            if (tab == std::string_view::npos) {
                if (f != 4)
                    throw MalformedRow("line " + std::to_string(line_no) +
                                       ": expected 5 columns");
                fields[f] = rest;
                rest = {};
            } else {
                fields[f] = rest.substr(0, tab);
                rest = rest.substr(tab + 1);
            }
        }
        if (!rest.empty())
            throw MalformedRow("line " + std::to_string(line_no) +
                               ": expected 5 columns");

        std::uint64_t id = 0;
        const auto [ptr, ec] = std::from_chars(
            fields[0].data(), fields[0].data() + fields[0].size(), id);
        if (ec != std::errc{} || ptr != fields[0].data() + fields[0].size())
            throw MalformedRow("line " + std::to_string(line_no) +
                               ": bad node id '" + std::string(fields[0]) + "'");
        if (id != rows.size())
            throw CountMismatch("line " + std::to_string(line_no) +
                                ": node ids must be dense and ascending (got " +
                                std::to_string(id) + ", expected " +
                                std::to_string(rows.size()) + ")");
        rows.push_back({parse_coord(fields[1], line_no),
                        parse_coord(fields[2], line_no),
                        parse_coord(fields[3], line_no),
                        parse_coord(fields[4], line_no)});
    }

    Layout layout(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        layout.set(static_cast<NodeId>(i), Endpoint::start,
                   {rows[i].sx, rows[i].sy});
        layout.set(static_cast<NodeId>(i), Endpoint::end,
                   {rows[i].ex, rows[i].ey});
    }
    return layout;
}

} // namespace pglayout
