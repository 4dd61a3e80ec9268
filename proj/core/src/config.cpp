#include "sdlab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace sdlab {

namespace {

using nlohmann::json;

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ConfigError(std::string("missing key '") + key + "'");
  }
  return j.at(key);
}

double finite_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(what + " must be finite");
  return v;
}

int integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ConfigError(what + " must be an integer");
  return j.get<int>();
}

std::vector<double> number_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw ConfigError(what + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(finite_number(v, what));
  return out;
}

BoundaryRef boundary_ref(const json& j) {
  if (!j.is_array() || j.size() != 2) throw ConfigError("a boundary reference is [cell, index]");
  return {integer(j[0], "cell"), integer(j[1], "boundary index")};
}

Point2 point(const json& j) {
  const auto v = number_list(j, "point");
  if (v.size() != 2) throw ConfigError("a point is [x, y]");
  return {v[0], v[1]};
}

Embedding embedding(const json& j) {
  Embedding e;
  for (const auto& p : require(j, "boundary")) e.boundary.push_back(point(p));
  for (const auto& m : require(j, "maps")) {
    AffineMap2 map;
    const auto lin = number_list(require(m, "linear"), "linear");
    if (lin.size() != 4) throw ConfigError("'linear' lists the 2x2 matrix row by row");
    std::copy(lin.begin(), lin.end(), map.linear.begin());
    map.shift = point(require(m, "shift"));
    e.maps.push_back(map);
  }
  return e;
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

Coefficient coefficient(const json& j) {
  if (j.is_number()) return ConstantCoefficient{finite_number(j, "b")};
  if (j.contains("constant") && j.size() == 1) {
    return ConstantCoefficient{finite_number(j.at("constant"), "b.constant")};
  }
  if (j.contains("affine")) {
    const auto& a = j.at("affine");
    return AffineCoefficient{finite_number(a.value("constant", json(0.0)), "b.affine.constant"),
                             finite_number(a.value("x", json(0.0)), "b.affine.x"),
                             finite_number(a.value("y", json(0.0)), "b.affine.y")};
  }
  if (j.contains("samples")) {
    const auto& s = j.at("samples");
    return SampledCoefficient{integer(require(s, "level"), "b.samples.level"),
                              number_list(require(s, "values"), "b.samples.values")};
  }
  throw ConfigError("b must be a number or an object with 'constant', 'affine' or 'samples'");
}

}  // namespace

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

StructureConfig builtin_structure(std::string_view name) {
  if (name == "sg") return {"sg", build_sierpinski_structure(), sierpinski_parameters(), true};
  throw ConfigError("unknown built-in structure '" + std::string(name) + "'");
}

StructureConfig parse_structure_config(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object()) throw ConfigError("structure config must be a JSON object");
  try {
    const int m = integer(require(j, "symbol_count"), "symbol_count");
    const int b = integer(require(j, "boundary_size"), "boundary_size");
    if (m < 1 || b < 2) throw ConfigError("need symbol_count >= 1 and boundary_size >= 2");

    std::vector<Identification> ids;
    for (const auto& pair : require(j, "identifications")) {
      if (!pair.is_array() || pair.size() != 2) {
        throw ConfigError("an identification is [[cell, index], [cell, index]]");
      }
      ids.push_back({boundary_ref(pair[0]), boundary_ref(pair[1])});
    }
    std::vector<BoundaryRef> fixed;
    if (j.contains("fixed_points")) {
      for (const auto& r : j.at("fixed_points")) fixed.push_back(boundary_ref(r));
    } else {
      if (m != b) throw ConfigError("fixed_points is required unless symbol_count == boundary_size");
      for (int a = 0; a < b; ++a) fixed.push_back({a, a});
    }
    std::optional<Embedding> emb;
    if (j.contains("embedding") && !j.at("embedding").is_null()) emb = embedding(j.at("embedding"));

    std::vector<WeightedEdge> edges;
    for (const auto& e : require(j, "base_conductances")) {
      if (!e.is_array() || e.size() != 3) throw ConfigError("a base conductance is [x, y, c]");
      const int x = integer(e[0], "vertex");
      const int y = integer(e[1], "vertex");
      if (x < 0 || y < 0 || x >= b || y >= b || x == y) {
        throw ConfigError("base conductances connect distinct points of V_0");
      }
      const double c = finite_number(e[2], "conductance");
      if (!(c > 0.0)) throw ConfigError("base conductances must be positive");
      edges.push_back({static_cast<VertexId>(x), static_cast<VertexId>(y), c});
    }
    std::vector<VertexId> v0(static_cast<std::size_t>(b));
    for (int k = 0; k < b; ++k) v0[static_cast<std::size_t>(k)] = static_cast<VertexId>(k);

    StructureConfig out{j.value("name", std::string("custom")),
                        SelfSimilarStructure(m, b, std::move(ids), std::move(fixed), std::move(emb)),
                        FormParameters{ConductanceNetwork::from_edges(v0, edges),
                                       number_list(require(j, "resistance_scaling"), "resistance_scaling"),
                                       number_list(require(j, "measure_weights"), "measure_weights")},
                        j.value("assumed_dense", true)};
    for (double r : out.parameters.scaling) {
      if (!(r > 0.0 && r < 1.0)) throw ConfigError("resistance_scaling entries must lie in (0,1)");
    }
    // Validates weights and the base network against the structure.
    FractalHierarchy probe(out.structure, out.parameters, 0);
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("structure config: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

StructureConfig load_structure_config(const std::filesystem::path& path) {
  return parse_structure_config(read_text_file(path));
}

StructureConfig resolve_structure(const std::string& name_or_path) {
  if (name_or_path == "sg") return builtin_structure(name_or_path);
  return load_structure_config(name_or_path);
}

DriftConfig parse_drift_config(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object()) throw ConfigError("drift config must be a JSON object");
  try {
    DriftConfig out;
    if (j.contains("delta")) {
      const double d = finite_number(j.at("delta"), "delta");
      if (!(d > 0.0)) throw ConfigError("delta must be positive");
      out.delta = d;
    }
    std::vector<DriftTerm> terms;
    for (const auto& t : require(j, "terms")) {
      const auto& h = require(t, "h");
      terms.push_back({coefficient(require(t, "b")),
                       PiecewiseHarmonic{integer(require(h, "level"), "h.level"),
                                         number_list(require(h, "values"), "h.values")}});
    }
    out.model = DriftModel(std::move(terms));
    return out;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("drift config: ") + e.what());
  }
}

DriftConfig load_drift_config(const std::filesystem::path& path) {
  return parse_drift_config(read_text_file(path));
}

}  // namespace sdlab
