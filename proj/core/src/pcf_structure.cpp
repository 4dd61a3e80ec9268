#include "sdlab/pcf_structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>

namespace sdlab {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

void check_ref(const BoundaryRef& r, int m, int b, const char* what) {
  if (r.cell < 0 || r.cell >= m || r.boundary_index < 0 || r.boundary_index >= b) {
    throw ConfigError(std::string(what) + " references (" + std::to_string(r.cell) +
                      ", " + std::to_string(r.boundary_index) + ") out of range");
  }
}

}  // namespace

AffineMap2 AffineMap2::compose(const AffineMap2& inner) const noexcept {
  const auto& a = linear;
  const auto& b = inner.linear;
  AffineMap2 out;
  out.linear = {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
  out.shift = apply(inner.shift);
  return out;
}

SelfSimilarStructure::SelfSimilarStructure(int symbol_count, int boundary_size,
                                           std::vector<Identification> identifications,
                                           std::vector<BoundaryRef> fixed_points,
                                           std::optional<Embedding> embedding)
    : symbol_count_(symbol_count),
      boundary_size_(boundary_size),
      identifications_(std::move(identifications)),
      fixed_points_(std::move(fixed_points)),
      embedding_(std::move(embedding)) {
  if (symbol_count_ < 2) throw ConfigError("symbol_count must be at least 2");
  if (boundary_size_ < 2) throw ConfigError("boundary_size must be at least 2");
  if (static_cast<int>(fixed_points_.size()) != boundary_size_) {
    throw ConfigError("fixed_points must list one level-1 reference per boundary point");
  }
  if (embedding_) {
    if (static_cast<int>(embedding_->boundary.size()) != boundary_size_ ||
        static_cast<int>(embedding_->maps.size()) != symbol_count_) {
      throw ConfigError("embedding must give boundary_size points and symbol_count maps");
    }
  }

  const auto m = static_cast<std::size_t>(symbol_count_);
  const auto b = static_cast<std::size_t>(boundary_size_);
  const std::size_t refs = m * b;
  // Nodes [0, refs) are (cell, index) pairs; [refs, refs + b) are V_0 points.
  DisjointSets sets(refs + b);
  auto node = [b](const BoundaryRef& r) {
    return static_cast<std::size_t>(r.cell) * b + static_cast<std::size_t>(r.boundary_index);
  };
  for (const auto& id : identifications_) {
    check_ref(id.first, symbol_count_, boundary_size_, "identification");
    check_ref(id.second, symbol_count_, boundary_size_, "identification");
    sets.unite(node(id.first), node(id.second));
  }
  for (std::size_t a = 0; a < b; ++a) {
    check_ref(fixed_points_[a], symbol_count_, boundary_size_, "fixed point");
    sets.unite(refs + a, node(fixed_points_[a]));
  }

  // Validate the generated equivalence: within one class, no two boundary
  // points of the same cell (F_i injective) and at most one V_0 point.
  std::vector<std::vector<std::size_t>> members(refs + b);
  for (std::size_t k = 0; k < refs + b; ++k) members[sets.find(k)].push_back(k);
  for (const auto& cls : members) {
    std::set<std::size_t> cells;
    int boundary_points = 0;
    for (auto k : cls) {
      if (k >= refs) {
        ++boundary_points;
        continue;
      }
      if (!cells.insert(k / b).second) {
        throw ConfigError("identification glues two boundary points of cell " +
                          std::to_string(k / b));
      }
    }
    if (boundary_points > 1) {
      throw ConfigError("identification glues two distinct points of V_0");
    }
  }

  // Local numbering: V_0 first, then classes by smallest (cell, index).
  local_vertex_.assign(refs, -1);
  std::vector<int> class_id(refs + b, -1);
  for (std::size_t a = 0; a < b; ++a) class_id[sets.find(refs + a)] = static_cast<int>(a);
  int next = boundary_size_;
  for (std::size_t k = 0; k < refs; ++k) {
    const auto root = sets.find(k);
    if (class_id[root] < 0) class_id[root] = next++;
    local_vertex_[k] = class_id[root];
  }
  level_one_size_ = next;
}

int SelfSimilarStructure::local_vertex(int cell, int boundary_index) const {
  check_ref({cell, boundary_index}, symbol_count_, boundary_size_, "local_vertex");
  return local_vertex_[static_cast<std::size_t>(cell) * static_cast<std::size_t>(boundary_size_) +
                       static_cast<std::size_t>(boundary_index)];
}

SelfSimilarStructure build_sierpinski_structure() {
  const double h = std::sqrt(3.0) / 2.0;
  Embedding emb;
  emb.boundary = {{0.5, h}, {0.0, 0.0}, {1.0, 0.0}};
  for (const auto& p : emb.boundary) {
    emb.maps.push_back(AffineMap2{{0.5, 0.0, 0.0, 0.5}, {p.x / 2.0, p.y / 2.0}});
  }

  constexpr double tol = 1e-12;
  auto close = [](Point2 u, Point2 v) {
    return std::abs(u.x - v.x) <= tol && std::abs(u.y - v.y) <= tol;
  };

  std::vector<Identification> ids;
  std::vector<BoundaryRef> fixed(3);
  for (int i = 0; i < 3; ++i) {
    for (int a = 0; a < 3; ++a) {
      const Point2 p = emb.maps[i].apply(emb.boundary[a]);
      for (int c = 0; c < 3; ++c) {
        if (close(p, emb.boundary[c])) fixed[c] = {i, a};
      }
      for (int j = i + 1; j < 3; ++j) {
        for (int b = 0; b < 3; ++b) {
          if (close(p, emb.maps[j].apply(emb.boundary[b]))) ids.push_back({{i, a}, {j, b}});
        }
      }
    }
  }
  return SelfSimilarStructure(3, 3, std::move(ids), std::move(fixed), std::move(emb));
}

LevelComplex build_level(const SelfSimilarStructure& s, int n) {
  if (n < 0) throw std::invalid_argument("build_level: level must be non-negative");
  const int m = s.symbol_count();
  const int b = s.boundary_size();
  const auto& emb = s.embedding();

  std::vector<Cell> cells(1);
  cells[0].word = {};
  cells[0].boundary.resize(static_cast<std::size_t>(b));
  std::iota(cells[0].boundary.begin(), cells[0].boundary.end(), VertexId{0});
  std::vector<AffineMap2> cell_maps(1);  // F_w per cell, identity at level 0
  std::vector<Point2> coords;
  if (emb) coords = emb->boundary;
  std::size_t vertex_count = static_cast<std::size_t>(b);

  const int local_size = s.level_one_size();
  for (int level = 1; level <= n; ++level) {
    std::vector<Cell> next_cells;
    std::vector<AffineMap2> next_maps;
    next_cells.reserve(cells.size() * static_cast<std::size_t>(m));
    std::vector<VertexId> local(static_cast<std::size_t>(local_size));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const Cell& parent = cells[c];
      for (int k = 0; k < local_size; ++k) {
        local[k] = k < b ? parent.boundary[k] : vertex_count++;
      }
      if (emb) {
        // Coordinates of the new points: F_w(F_i(p_a)) for their representative.
        std::vector<bool> placed(static_cast<std::size_t>(local_size), false);
        for (int i = 0; i < m; ++i) {
          for (int a = 0; a < b; ++a) {
            const int k = s.local_vertex(i, a);
            if (k < b || placed[k]) continue;
            placed[k] = true;
            coords.push_back(cell_maps[c].apply(emb->maps[i].apply(emb->boundary[a])));
          }
        }
      }
      for (int i = 0; i < m; ++i) {
        Cell child;
        child.word = parent.word;
        child.word.push_back(i);
        child.boundary.resize(static_cast<std::size_t>(b));
        for (int a = 0; a < b; ++a) child.boundary[a] = local[s.local_vertex(i, a)];
        next_cells.push_back(std::move(child));
        if (emb) next_maps.push_back(cell_maps[c].compose(emb->maps[i]));
      }
    }
    cells = std::move(next_cells);
    cell_maps = std::move(next_maps);
  }

  LevelComplex out;
  out.level = n;
  out.vertex_count = vertex_count;
  out.coordinates = std::move(coords);
  out.vertex_cells.resize(vertex_count);
  std::set<Edge> edges;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& bd = cells[c].boundary;
    for (std::size_t i = 0; i < bd.size(); ++i) {
      out.vertex_cells[bd[i]].push_back(c);
      for (std::size_t j = i + 1; j < bd.size(); ++j) {
        edges.insert({std::min(bd[i], bd[j]), std::max(bd[i], bd[j])});
      }
    }
  }
  out.edges.assign(edges.begin(), edges.end());
  out.cells = std::move(cells);
  return out;
}

const std::vector<std::size_t>& cells_containing(const LevelComplex& complex, VertexId x) {
  if (x >= complex.vertex_count) {
    throw std::out_of_range("cells_containing: unknown vertex id " + std::to_string(x));
  }
  return complex.vertex_cells[x];
}

double word_product(const Word& w, std::span<const double> factors) {
  double p = 1.0;
  for (int s : w) p *= factors[static_cast<std::size_t>(s)];
  return p;
}

std::vector<double> self_similar_measure(const LevelComplex& complex,
                                         std::span<const double> theta, int boundary_size) {
  std::vector<double> mu(complex.vertex_count, 0.0);
  const double inv_b = 1.0 / static_cast<double>(boundary_size);
  for (const auto& cell : complex.cells) {
    const double w = word_product(cell.word, theta) * inv_b;
    for (VertexId v : cell.boundary) mu[v] += w;
  }
  return mu;
}

}  // namespace sdlab
