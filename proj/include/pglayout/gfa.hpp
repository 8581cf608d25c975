#pragma once

#include <cstdint>
#include <iosfwd>

#include "pglayout/graph.hpp"

namespace pglayout {

struct GfaParseStats {
    std::uint64_t skipped_records = 0; // unknown record types ignored
};

// Reads the GFA v1 subset this toolkit understands: S (length from the
// sequence, or from an LN:i tag when the sequence is '*'), L (orientations
// mapped onto endpoint attachments; overlaps ignored) and P. Segment names
// are mapped to dense node ids in order of declaration. W records (GFA 1.1
// walks) are rejected outright; other record types are skipped and counted.
PangenomeGraph parse_gfa(std::istream& in, GfaParseStats* stats = nullptr);

// Emits the model back out as minimal GFA: star sequences with LN tags,
// 0M overlaps, 1-based numeric segment names in node-id order. Feeding the
// output back through parse_gfa reproduces the graph exactly.
void write_gfa(const PangenomeGraph& g, std::ostream& out);

} // namespace pglayout
