#pragma once

// Combinatorics of post-critically finite self-similar structures: the vertex
// hierarchy V_0 ⊂ V_1 ⊂ ..., the level-n cells F_w(V_0) and their edges.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sdlab/types.hpp"

namespace sdlab {

/// A word w = w_1 ... w_n over the symbols {0, ..., M-1}.
using Word = std::vector<int>;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// x ↦ A x + b on the plane, A stored row-major.
struct AffineMap2 {
  std::array<double, 4> linear{1.0, 0.0, 0.0, 1.0};
  Point2 shift{};

  Point2 apply(Point2 p) const noexcept {
    return {linear[0] * p.x + linear[1] * p.y + shift.x,
            linear[2] * p.x + linear[3] * p.y + shift.y};
  }
  /// (this ∘ inner)(x) = this(inner(x)).
  AffineMap2 compose(const AffineMap2& inner) const noexcept;
};

struct Embedding {
  std::vector<Point2> boundary;   // coordinates of V_0
  std::vector<AffineMap2> maps;   // F_0, ..., F_{M-1}
};

/// The point F_cell(p_boundary_index) of V_1.
struct BoundaryRef {
  int cell = 0;
  int boundary_index = 0;
  friend bool operator==(const BoundaryRef&, const BoundaryRef&) = default;
};

/// F_first.cell(p_first.boundary_index) = F_second.cell(p_second.boundary_index).
struct Identification {
  BoundaryRef first;
  BoundaryRef second;
};

/// M maps, |V_0| boundary points, and the level-1 gluing data. Level-1 data
/// determines every level by self-similarity.
///
/// `fixed_points[a]` names a level-1 reference equal to the boundary point
/// p_a itself (for the gasket, F_a(p_a) = p_a).
class SelfSimilarStructure {
 public:
  /// Throws ConfigError when indices are out of range or the generated
  /// equivalence glues two boundary points of one cell or two V_0 points.
  SelfSimilarStructure(int symbol_count, int boundary_size,
                       std::vector<Identification> identifications,
                       std::vector<BoundaryRef> fixed_points,
                       std::optional<Embedding> embedding = std::nullopt);

  int symbol_count() const noexcept { return symbol_count_; }
  int boundary_size() const noexcept { return boundary_size_; }
  const std::vector<Identification>& identifications() const noexcept {
    return identifications_;
  }
  const std::vector<BoundaryRef>& fixed_points() const noexcept {
    return fixed_points_;
  }
  const std::optional<Embedding>& embedding() const noexcept { return embedding_; }

  /// Local vertex of V_1 represented by F_cell(p_a): values < |V_0| are the
  /// boundary points themselves, larger values are the new points of V_1
  /// numbered by their lexicographically smallest (cell, index) representative.
  int local_vertex(int cell, int boundary_index) const;
  /// |V_1|.
  int level_one_size() const noexcept { return level_one_size_; }

 private:
  int symbol_count_;
  int boundary_size_;
  std::vector<Identification> identifications_;
  std::vector<BoundaryRef> fixed_points_;
  std::optional<Embedding> embedding_;
  std::vector<int> local_vertex_;  // (cell * |V_0| + index) -> local id
  int level_one_size_ = 0;
};

/// Sierpinski gasket: p_1 = (1/2, √3/2), p_2 = (0,0), p_3 = (1,0) (ids 0,1,2),
/// F_i(x) = (x + p_i)/2. Gluing is derived by coordinate equality (tol 1e-12).
SelfSimilarStructure build_sierpinski_structure();

struct Cell {
  Word word;
  std::vector<VertexId> boundary;  // F_w(p_0), ..., F_w(p_{B-1})
};

struct Edge {
  VertexId a = 0;  // a < b
  VertexId b = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Everything at one level n: V_n, W_n-indexed cells and E_n.
struct LevelComplex {
  int level = 0;
  std::size_t vertex_count = 0;
  std::vector<Point2> coordinates;  // empty without embedding
  std::vector<Cell> cells;          // lexicographic in word
  std::vector<Edge> edges;          // sorted, unique
  std::vector<std::vector<std::size_t>> vertex_cells;  // vertex -> cell indices

  bool has_coordinates() const noexcept { return !coordinates.empty(); }
};

/// Builds V_n, its cells and edges. Throws std::invalid_argument for n < 0.
LevelComplex build_level(const SelfSimilarStructure& structure, int n);

/// Indices into `complex.cells` of the cells whose boundary contains x.
/// Throws std::out_of_range for unknown ids.
const std::vector<std::size_t>& cells_containing(const LevelComplex& complex,
                                                 VertexId x);

/// Product factors[w_1] * ... * factors[w_n]; 1 for the empty word.
double word_product(const Word& w, std::span<const double> factors);

/// μ_n({x}) = |V_0|^{-1} Σ_w θ_w 1{x ∈ F_w(V_0)}; sums to 1 when Σθ = 1.
std::vector<double> self_similar_measure(const LevelComplex& complex,
                                         std::span<const double> theta,
                                         int boundary_size);

}  // namespace sdlab
