#pragma once

#include <iosfwd>

#include "pglayout/layout.hpp"

namespace pglayout {

// Tab-separated layout table:
//   node_id <tab> start_x <tab> start_y <tab> end_x <tab> end_y
// One row per node, ids dense and ascending, coordinates written with full
// precision so a round trip reproduces them.
void write_layout_tsv(const Layout& layout, std::ostream& out);

Layout read_layout_tsv(std::istream& in);

} // namespace pglayout
