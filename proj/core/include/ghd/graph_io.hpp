#pragma once

#include <iosfwd>
#include <string>

#include "ghd/graph.hpp"

namespace ghd {

/// Edge-list text format.
///
/// One edge per line as two whitespace-separated node labels.  Lines starting
/// with '#' are comments, except an optional "#nodes: a,b,c" header that pins
/// the node set and its order (the way isolated nodes survive a round trip).
/// Without the header the node set is the union of endpoints in order of
/// first appearance.
LabeledGraph read_edge_list(std::istream& in, const std::string& origin = "<stream>");
LabeledGraph read_edge_list_file(const std::string& path);

void write_edge_list(std::ostream& out, const LabeledGraph& g);
void write_edge_list_file(const std::string& path, const LabeledGraph& g);

} // namespace ghd
