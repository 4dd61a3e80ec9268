#pragma once

// Finite resistance forms on weighted graphs: energies, traces (Schur
// complements of the graph Laplacian), harmonic extensions and effective
// resistances, plus the self-similar assembly of E^n.

#include <span>
#include <vector>

#include "sdlab/pcf_structure.hpp"
#include "sdlab/types.hpp"

namespace sdlab {

struct WeightedEdge {
  VertexId x = 0;
  VertexId y = 0;
  double conductance = 0.0;
};

/// Symmetric nonnegative conductances c_{x,y} with zero diagonal over an
/// ordered vertex list. Functions on the network are `Vector`s in that order.
class ConductanceNetwork {
 public:
  ConductanceNetwork() = default;
  /// `conductances` is indexed by position in `vertices`. Throws
  /// std::invalid_argument if it is not square, symmetric, nonnegative with
  /// zero diagonal, or if `vertices` has duplicates.
  ConductanceNetwork(std::vector<VertexId> vertices, SparseMatrix conductances);

  /// Parallel edges accumulate.
  static ConductanceNetwork from_edges(std::vector<VertexId> vertices,
                                       std::span<const WeightedEdge> edges);

  std::size_t size() const noexcept { return vertices_.size(); }
  const std::vector<VertexId>& vertices() const noexcept { return vertices_; }
  const SparseMatrix& conductances() const noexcept { return conductances_; }

  /// Position of id in vertices(); throws std::out_of_range.
  std::size_t index_of(VertexId id) const;
  bool contains(VertexId id) const noexcept;
  /// c_{x,y} by vertex id.
  double conductance(VertexId x, VertexId y) const;

  /// Unordered pairs with c > 0, as (index, index, c) with index x < y.
  std::vector<WeightedEdge> edges() const;

  /// Graph Laplacian D - C, so that E(f, g) = f^T L g.
  SparseMatrix laplacian() const;

  /// Connectivity of the graph of strictly positive conductances.
  bool is_connected() const;

 private:
  std::vector<VertexId> vertices_;
  std::vector<std::size_t> position_;  // id -> index + 1, 0 if absent
  SparseMatrix conductances_;
};

/// E(f, g) = ½ Σ_{x≠y} c_{x,y} (f(x)-f(y)) (g(x)-g(y)).
double energy(const ConductanceNetwork& net, const Vector& f, const Vector& g);
inline double energy(const ConductanceNetwork& net, const Vector& f) {
  return energy(net, f, f);
}

struct TraceOptions {
  /// Traced conductances below this are set to zero (Schur round-off fill-in).
  double clamp = 1e-14;
  /// Interior blocks at least this large use a sparse factorization.
  std::size_t dense_limit = 500;
};

/// Trace of the form onto `boundary` (vertex ids, kept in the given order):
/// the Schur complement of the Laplacian eliminating all other vertices.
/// Throws std::invalid_argument for an empty, full, duplicated or unknown
/// boundary, and SingularSystem if some interior component has no path to it.
ConductanceNetwork trace(const ConductanceNetwork& net, std::span<const VertexId> boundary,
                         const TraceOptions& options = {});

/// Energy-minimizing extension of `values` (one per id in `boundary`) to the
/// whole network; discrete-harmonic off the boundary.
Vector harmonic_extension(const ConductanceNetwork& net, std::span<const VertexId> boundary,
                          const Vector& values, const TraceOptions& options = {});

/// R(x, y) = 1 / E(u) with u harmonic, u(x) = 1, u(y) = 0. Zero when x = y.
/// Throws std::invalid_argument if x and y are not connected.
double effective_resistance(const ConductanceNetwork& net, VertexId x, VertexId y);

/// All-pairs effective resistances (index order) via the inverse of the
/// Laplacian grounded at the first vertex. Requires a connected network.
DenseMatrix resistance_matrix(const ConductanceNetwork& net);

/// max_{x,y} R(x, y).
double resistance_diameter(const ConductanceNetwork& net);

/// c_{n,x,y} = Σ_w 1{x,y ∈ F_w(V_0)} r_w^{-1} c_{0,F_w^{-1}x,F_w^{-1}y}.
/// `net0` must be the boundary network on ids 0..|V_0|-1.
ConductanceNetwork assemble_self_similar(const ConductanceNetwork& net0,
                                         std::span<const double> scaling,
                                         const LevelComplex& complex);

}  // namespace sdlab
