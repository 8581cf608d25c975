#include "pglayout/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <vector>

namespace pglayout {

namespace {

void append_fmt(std::string& out, const char* fmt, ...)
    __attribute__((format(printf, 2, 3)));

void append_fmt(std::string& out, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    out += buf;
}

// Spread hues by the golden angle; saturated mid-tone so neighbouring paths
// stay distinguishable on white.
std::string path_color(std::size_t index) {
    const double h = std::fmod(static_cast<double>(index) * 137.508, 360.0) / 60.0;
    const double s = 0.65, v = 0.75;
    const int sector = static_cast<int>(h) % 6;
    const double f = h - std::floor(h);
    const double p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
    double r, g, b;
    switch (sector) {
    case 0: r = v; g = t; b = p; break;
    case 1: r = q; g = v; b = p; break;
    case 2: r = p; g = v; b = t; break;
    case 3: r = p; g = q; b = v; break;
    case 4: r = t; g = p; b = v; break;
    default: r = v; g = p; b = q; break;
    }
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(r * 255),
                  static_cast<int>(g * 255), static_cast<int>(b * 255));
    return buf;
}

} // namespace

std::string render_svg(const PangenomeGraph& g, const Layout& layout,
                       const RenderOptions& opts) {
    if (layout.node_count() != g.node_count())
        throw CountMismatch("layout has " + std::to_string(layout.node_count()) +
                            " nodes but the graph has " +
                            std::to_string(g.node_count()));
    if (!(opts.width_px > 0.0))
        throw InvalidParameter("render width must be positive");

    double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
    bool first = true;
    std::vector<double> seg_lens;
    seg_lens.reserve(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const Vec2 s = layout.get(static_cast<NodeId>(i), Endpoint::start);
        const Vec2 e = layout.get(static_cast<NodeId>(i), Endpoint::end);
        if (first) {
            min_x = max_x = s.x;
            min_y = max_y = s.y;
            first = false;
        }
        min_x = std::min({min_x, s.x, e.x});
        max_x = std::max({max_x, s.x, e.x});
        min_y = std::min({min_y, s.y, e.y});
        max_y = std::max({max_y, s.y, e.y});
        seg_lens.push_back((e - s).norm());
    }

    const double span = std::max(max_x - min_x, max_y - min_y);
    const double margin = span > 0.0 ? 0.02 * span : 1.0;
    const double vb_x = min_x - margin;
    const double vb_y = min_y - margin;
    const double vb_w = (max_x - min_x) + 2 * margin;
    const double vb_h = (max_y - min_y) + 2 * margin;

    double median_len = 0.0;
    if (!seg_lens.empty()) {
        const std::size_t mid = seg_lens.size() / 2;
        std::nth_element(seg_lens.begin(), seg_lens.begin() + mid, seg_lens.end());
        median_len = seg_lens[mid];
    }
    // Keep the median segment's stroke at >= 0.5 rendered pixels.
    const double px_per_unit = opts.width_px / vb_w;
    const double stroke =
        std::max(opts.stroke_scale * median_len, 0.5 / px_per_unit);

    const double height_px = opts.width_px * (vb_h / vb_w);

    std::string out;
    out.reserve(128 * (g.node_count() + 2));
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    append_fmt(out,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.6g\" "
               "height=\"%.6g\" viewBox=\"%.6g %.6g %.6g %.6g\">\n",
               opts.width_px, height_px, vb_x, vb_y, vb_w, vb_h);

    append_fmt(out,
               "<g stroke=\"#444444\" stroke-width=\"%.6g\" "
               "stroke-linecap=\"round\">\n",
               stroke);
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        const Vec2 s = layout.get(static_cast<NodeId>(i), Endpoint::start);
        const Vec2 e = layout.get(static_cast<NodeId>(i), Endpoint::end);
        append_fmt(out,
                   "<line x1=\"%.6g\" y1=\"%.6g\" x2=\"%.6g\" y2=\"%.6g\"/>\n",
                   s.x, s.y, e.x, e.y);
    }
    out += "</g>\n";

    if (opts.color_by_path) {
        append_fmt(out, "<g fill=\"none\" stroke-width=\"%.6g\" opacity=\"0.8\">\n",
                   0.6 * stroke);
        for (std::size_t pi = 0; pi < g.paths.size(); ++pi) {
            const Path& p = g.paths[pi];
            append_fmt(out, "<polyline stroke=\"%s\" points=\"",
                       path_color(pi).c_str());
            for (std::size_t k = 0; k < p.steps.size(); ++k) {
                const NodeId n = p.steps[k].node_id;
                const Vec2 s = layout.get(n, Endpoint::start);
                const Vec2 e = layout.get(n, Endpoint::end);
                append_fmt(out, k ? " %.6g,%.6g" : "%.6g,%.6g",
                           0.5 * (s.x + e.x), 0.5 * (s.y + e.y));
            }
            out += "\"/>\n";
        }
        out += "</g>\n";
    }

    out += "</svg>\n";
    return out;
}

} // namespace pglayout
