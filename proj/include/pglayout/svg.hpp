#pragma once

#include <string>

#include "pglayout/graph.hpp"
#include "pglayout/layout.hpp"

namespace pglayout {

struct RenderOptions {
    double width_px = 1600.0;
    double stroke_scale = 1.0; // node stroke as a multiple of the median segment
    bool color_by_path = false; // add one polyline per path through step midpoints
};

// One <line> per node segment; optional per-path <polyline> overlays.
// The viewBox is the layout bounding box plus a 2% margin, and strokes are
// floored so the drawing stays visible at the requested pixel width.
std::string render_svg(const PangenomeGraph& g, const Layout& layout,
                       const RenderOptions& opts = {});

} // namespace pglayout
