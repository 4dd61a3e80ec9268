#pragma once

// Plain-text formats shared by the CLI and tests.
//
//   network:          "# vertices <id> <id> ..." then one "x y c" line per edge
//   vertex function:  one "x value" line per vertex
//
// Values are written with 17 significant digits, so reading back is bit-exact.
// Blank lines and other '#' lines are ignored on input.

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "sdlab/resistance.hpp"

namespace sdlab {

void write_network(std::ostream& out, const ConductanceNetwork& net);
/// Throws ConfigError on malformed input. Without a "# vertices" line the
/// vertex set is the sorted set of edge endpoints.
ConductanceNetwork read_network(std::istream& in);

struct VertexFunction {
  std::vector<VertexId> ids;
  Vector values;
};

void write_vertex_function(std::ostream& out, std::span<const VertexId> ids, const Vector& values);
VertexFunction read_vertex_function(std::istream& in);

}  // namespace sdlab
