#include "sdlab/network_io.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

namespace sdlab {

namespace {

// Locale-independent shortest-safe formatting: 17 significant digits.
std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

template <typename T>
T parse(std::string_view token, std::size_t line) {
  T value{};
  const auto res = std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc{} || res.ptr != token.data() + token.size()) {
    throw ConfigError("line " + std::to_string(line) + ": cannot parse '" + std::string(token) + "'");
  }
  return value;
}

std::vector<std::string> split(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

}  // namespace

void write_network(std::ostream& out, const ConductanceNetwork& net) {
  out << "# vertices";
  for (auto v : net.vertices()) out << ' ' << v;
  out << '\n';
  for (const auto& e : net.edges()) {
    out << net.vertices()[e.x] << ' ' << net.vertices()[e.y] << ' '
        << format_double(e.conductance) << '\n';
  }
}

ConductanceNetwork read_network(std::istream& in) {
  std::vector<VertexId> vertices;
  bool have_vertices = false;
  std::vector<WeightedEdge> edges;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    auto tok = split(line);
    if (tok.empty()) continue;
    if (tok[0] == "#") {
      if (tok.size() >= 2 && tok[1] == "vertices") {
        have_vertices = true;
        for (std::size_t k = 2; k < tok.size(); ++k) vertices.push_back(parse<VertexId>(tok[k], lineno));
      }
      continue;
    }
    if (tok[0].starts_with('#')) continue;
    if (tok.size() != 3) throw ConfigError("line " + std::to_string(lineno) + ": expected 'x y c'");
    edges.push_back({parse<VertexId>(tok[0], lineno), parse<VertexId>(tok[1], lineno),
                     parse<double>(tok[2], lineno)});
  }
  if (!have_vertices) {
    std::set<VertexId> ids;
    for (const auto& e : edges) {
      ids.insert(e.x);
      ids.insert(e.y);
    }
    vertices.assign(ids.begin(), ids.end());
  }
  try {
    return ConductanceNetwork::from_edges(std::move(vertices), edges);
  } catch (const std::logic_error& e) {
    throw ConfigError(std::string("invalid network: ") + e.what());
  }
}

void write_vertex_function(std::ostream& out, std::span<const VertexId> ids, const Vector& values) {
  if (static_cast<std::size_t>(values.size()) != ids.size()) {
    throw std::invalid_argument("write_vertex_function: size mismatch");
  }
  for (std::size_t k = 0; k < ids.size(); ++k) {
    out << ids[k] << ' ' << format_double(values(static_cast<Eigen::Index>(k))) << '\n';
  }
}

VertexFunction read_vertex_function(std::istream& in) {
  std::vector<VertexId> ids;
  std::vector<double> vals;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    auto tok = split(line);
    if (tok.empty() || tok[0].starts_with('#')) continue;
    if (tok.size() != 2) throw ConfigError("line " + std::to_string(lineno) + ": expected 'x value'");
    ids.push_back(parse<VertexId>(tok[0], lineno));
    vals.push_back(parse<double>(tok[1], lineno));
  }
  VertexFunction f{std::move(ids), Vector(static_cast<Eigen::Index>(vals.size()))};
  for (std::size_t k = 0; k < vals.size(); ++k) f.values(static_cast<Eigen::Index>(k)) = vals[k];
  return f;
}

}  // namespace sdlab
