#include "sdlab/resistance.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>

namespace sdlab {

namespace {

using ColSparse = Eigen::SparseMatrix<double>;

std::vector<std::size_t> components(const SparseMatrix& c, std::size_t& count) {
  const auto n = static_cast<std::size_t>(c.rows());
  std::vector<std::size_t> comp(n, n);
  count = 0;
  for (std::size_t s = 0; s < n; ++s) {
    if (comp[s] != n) continue;
    std::queue<std::size_t> q;
    q.push(s);
    comp[s] = count;
    while (!q.empty()) {
      const auto v = q.front();
      q.pop();
      for (SparseMatrix::InnerIterator it(c, static_cast<Eigen::Index>(v)); it; ++it) {
        const auto w = static_cast<std::size_t>(it.col());
        if (it.value() > 0.0 && comp[w] == n) {
          comp[w] = count;
          q.push(w);
        }
      }
    }
    ++count;
  }
  return comp;
}

// Splits indices into boundary (given order) and interior (ascending).
struct Partition {
  std::vector<std::size_t> boundary;
  std::vector<std::size_t> interior;
};

Partition partition(const ConductanceNetwork& net, std::span<const VertexId> ids) {
  if (ids.empty()) throw std::invalid_argument("boundary set is empty");
  std::vector<char> on_boundary(net.size(), 0);
  Partition p;
  for (VertexId id : ids) {
    if (!net.contains(id)) {
      throw std::invalid_argument("boundary vertex " + std::to_string(id) + " is not in the network");
    }
    const auto k = net.index_of(id);
    if (on_boundary[k]) {
      throw std::invalid_argument("boundary lists vertex " + std::to_string(id) + " twice");
    }
    on_boundary[k] = 1;
    p.boundary.push_back(k);
  }
  for (std::size_t k = 0; k < net.size(); ++k) {
    if (!on_boundary[k]) p.interior.push_back(k);
  }
  // Every interior component must reach the boundary or L_II is singular.
  std::size_t count = 0;
  const auto comp = components(net.conductances(), count);
  std::vector<char> touches(count, 0);
  for (auto k : p.boundary) touches[comp[k]] = 1;
  for (auto k : p.interior) {
    if (!touches[comp[k]]) {
      throw SingularSystem("vertex " + std::to_string(net.vertices()[k]) +
                           " lies in a component with no boundary vertex");
    }
  }
  return p;
}

ColSparse block(const SparseMatrix& m, const std::vector<std::size_t>& rows,
                const std::vector<std::size_t>& cols) {
  std::vector<Eigen::Index> col_pos(static_cast<std::size_t>(m.cols()), -1);
  for (std::size_t j = 0; j < cols.size(); ++j) col_pos[cols[j]] = static_cast<Eigen::Index>(j);
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (SparseMatrix::InnerIterator it(m, static_cast<Eigen::Index>(rows[i])); it; ++it) {
      const auto j = col_pos[static_cast<std::size_t>(it.col())];
      if (j >= 0) t.emplace_back(static_cast<Eigen::Index>(i), j, it.value());
    }
  }
  ColSparse out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

// Solves L_II X = rhs; L_II is SPD once every interior component touches the boundary.
DenseMatrix solve_interior(const ColSparse& lii, const DenseMatrix& rhs,
                           const TraceOptions& options) {
  if (static_cast<std::size_t>(lii.rows()) < options.dense_limit) {
    Eigen::LLT<DenseMatrix> llt{DenseMatrix(lii)};
    if (llt.info() != Eigen::Success) throw SingularSystem("interior block is not positive definite");
    return llt.solve(rhs);
  }
  Eigen::SimplicialLDLT<ColSparse> ldlt(lii);
  if (ldlt.info() != Eigen::Success) throw SingularSystem("interior block factorization failed");
  DenseMatrix x = ldlt.solve(rhs);
  if (ldlt.info() != Eigen::Success) throw SingularSystem("interior block solve failed");
  return x;
}

}  // namespace

ConductanceNetwork::ConductanceNetwork(std::vector<VertexId> vertices, SparseMatrix conductances)
    : vertices_(std::move(vertices)), conductances_(std::move(conductances)) {
  const auto n = static_cast<Eigen::Index>(vertices_.size());
  if (conductances_.rows() != n || conductances_.cols() != n) {
    throw std::invalid_argument("conductance matrix does not match the vertex list");
  }
  VertexId max_id = 0;
  for (auto v : vertices_) max_id = std::max(max_id, v);
  position_.assign(vertices_.empty() ? 0 : max_id + 1, 0);
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    if (position_[vertices_[k]] != 0) {
      throw std::invalid_argument("duplicate vertex id " + std::to_string(vertices_[k]));
    }
    position_[vertices_[k]] = k + 1;
  }
  conductances_.prune(0.0);
  conductances_.makeCompressed();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (SparseMatrix::InnerIterator it(conductances_, i); it; ++it) {
      if (it.col() == i) throw std::invalid_argument("conductance diagonal must be zero");
      if (!(it.value() >= 0.0) || !std::isfinite(it.value())) {
        throw std::invalid_argument("conductances must be finite and nonnegative");
      }
      if (conductances_.coeff(it.col(), i) != it.value()) {
        throw std::invalid_argument("conductance matrix must be symmetric");
      }
    }
  }
}

ConductanceNetwork ConductanceNetwork::from_edges(std::vector<VertexId> vertices,
                                                  std::span<const WeightedEdge> edges) {
  std::vector<std::size_t> pos;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (vertices[k] >= pos.size()) pos.resize(vertices[k] + 1, 0);
    pos[vertices[k]] = k + 1;
  }
  auto at = [&](VertexId id) {
    if (id >= pos.size() || pos[id] == 0) {
      throw std::out_of_range("edge references unknown vertex " + std::to_string(id));
    }
    return static_cast<Eigen::Index>(pos[id] - 1);
  };
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(edges.size() * 2);
  for (const auto& e : edges) {
    if (e.x == e.y) throw std::invalid_argument("self-loop in edge list");
    t.emplace_back(at(e.x), at(e.y), e.conductance);
    t.emplace_back(at(e.y), at(e.x), e.conductance);
  }
  const auto n = static_cast<Eigen::Index>(vertices.size());
  SparseMatrix c(n, n);
  c.setFromTriplets(t.begin(), t.end());
  return ConductanceNetwork(std::move(vertices), std::move(c));
}

std::size_t ConductanceNetwork::index_of(VertexId id) const {
  if (!contains(id)) throw std::out_of_range("unknown vertex id " + std::to_string(id));
  return position_[id] - 1;
}

bool ConductanceNetwork::contains(VertexId id) const noexcept {
  return id < position_.size() && position_[id] != 0;
}

double ConductanceNetwork::conductance(VertexId x, VertexId y) const {
  return conductances_.coeff(static_cast<Eigen::Index>(index_of(x)),
                             static_cast<Eigen::Index>(index_of(y)));
}

std::vector<WeightedEdge> ConductanceNetwork::edges() const {
  std::vector<WeightedEdge> out;
  for (Eigen::Index i = 0; i < conductances_.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(conductances_, i); it; ++it) {
      if (it.col() > i && it.value() > 0.0) {
        out.push_back({static_cast<VertexId>(i), static_cast<VertexId>(it.col()), it.value()});
      }
    }
  }
  return out;
}

SparseMatrix ConductanceNetwork::laplacian() const {
  SparseMatrix l = -conductances_;
  Vector degree = conductances_ * Vector::Ones(conductances_.cols());
  for (Eigen::Index i = 0; i < l.rows(); ++i) l.coeffRef(i, i) = degree(i);
  l.makeCompressed();
  return l;
}

bool ConductanceNetwork::is_connected() const {
  if (size() <= 1) return true;
  std::size_t count = 0;
  components(conductances_, count);
  return count == 1;
}

double energy(const ConductanceNetwork& net, const Vector& f, const Vector& g) {
  const auto n = static_cast<Eigen::Index>(net.size());
  if (f.size() != n || g.size() != n) {
    throw std::invalid_argument("energy: function size does not match the network");
  }
  const auto& c = net.conductances();
  double sum = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (SparseMatrix::InnerIterator it(c, x); it; ++it) {
      const auto y = it.col();
      if (y > x) sum += it.value() * (f(x) - f(y)) * (g(x) - g(y));
    }
  }
  return sum;
}

ConductanceNetwork trace(const ConductanceNetwork& net, std::span<const VertexId> boundary,
                         const TraceOptions& options) {
  if (boundary.size() >= net.size()) {
    throw std::invalid_argument("trace: boundary must be a proper subset of the vertices");
  }
  const auto p = partition(net, boundary);
  const SparseMatrix lap = net.laplacian();
  const ColSparse lii = block(lap, p.interior, p.interior);
  const DenseMatrix lib = DenseMatrix(block(lap, p.interior, p.boundary));
  const DenseMatrix lbb = DenseMatrix(block(lap, p.boundary, p.boundary));
  const DenseMatrix x = solve_interior(lii, lib, options);
  const DenseMatrix schur = lbb - lib.transpose() * x;

  const auto nb = static_cast<Eigen::Index>(p.boundary.size());
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index i = 0; i < nb; ++i) {
    for (Eigen::Index j = i + 1; j < nb; ++j) {
      const double c = -0.5 * (schur(i, j) + schur(j, i));
      if (c >= options.clamp) {
        t.emplace_back(i, j, c);
        t.emplace_back(j, i, c);
      }
    }
  }
  SparseMatrix c(nb, nb);
  c.setFromTriplets(t.begin(), t.end());
  return ConductanceNetwork(std::vector<VertexId>(boundary.begin(), boundary.end()), std::move(c));
}

Vector harmonic_extension(const ConductanceNetwork& net, std::span<const VertexId> boundary,
                          const Vector& values, const TraceOptions& options) {
  if (static_cast<std::size_t>(values.size()) != boundary.size()) {
    throw std::invalid_argument("harmonic_extension: one value per boundary vertex required");
  }
  const auto p = partition(net, boundary);
  Vector u(static_cast<Eigen::Index>(net.size()));
  for (std::size_t k = 0; k < p.boundary.size(); ++k) {
    u(static_cast<Eigen::Index>(p.boundary[k])) = values(static_cast<Eigen::Index>(k));
  }
  if (p.interior.empty()) return u;
  const SparseMatrix lap = net.laplacian();
  const ColSparse lii = block(lap, p.interior, p.interior);
  const ColSparse lib = block(lap, p.interior, p.boundary);
  const DenseMatrix rhs = -(lib * values);
  const DenseMatrix ui = solve_interior(lii, rhs, options);
  for (std::size_t k = 0; k < p.interior.size(); ++k) {
    u(static_cast<Eigen::Index>(p.interior[k])) = ui(static_cast<Eigen::Index>(k), 0);
  }
  return u;
}

double effective_resistance(const ConductanceNetwork& net, VertexId x, VertexId y) {
  net.index_of(x);
  net.index_of(y);
  if (x == y) return 0.0;
  const std::array<VertexId, 2> ends{x, y};
  Vector u;
  try {
    u = harmonic_extension(net, ends, Vector::Unit(2, 0));
  } catch (const SingularSystem&) {
    throw std::invalid_argument("effective_resistance: vertices are not connected");
  }
  const double e = energy(net, u);
  if (!(e > 0.0)) throw std::invalid_argument("effective_resistance: vertices are not connected");
  return 1.0 / e;
}

DenseMatrix resistance_matrix(const ConductanceNetwork& net) {
  if (!net.is_connected()) throw std::invalid_argument("resistance_matrix: network is disconnected");
  const auto n = static_cast<Eigen::Index>(net.size());
  DenseMatrix r = DenseMatrix::Zero(n, n);
  if (n <= 1) return r;
  const DenseMatrix lap = DenseMatrix(net.laplacian());
  // Ground vertex 0: G = (L without row/col 0)^{-1}, padded with zeros.
  Eigen::LLT<DenseMatrix> llt(lap.bottomRightCorner(n - 1, n - 1));
  if (llt.info() != Eigen::Success) throw SingularSystem("grounded Laplacian is singular");
  DenseMatrix g = DenseMatrix::Zero(n, n);
  g.bottomRightCorner(n - 1, n - 1) = llt.solve(DenseMatrix::Identity(n - 1, n - 1));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      r(i, j) = i == j ? 0.0 : g(i, i) + g(j, j) - g(i, j) - g(j, i);
    }
  }
  return r;
}

double resistance_diameter(const ConductanceNetwork& net) {
  return resistance_matrix(net).maxCoeff();
}

ConductanceNetwork assemble_self_similar(const ConductanceNetwork& net0,
                                         std::span<const double> scaling,
                                         const LevelComplex& complex) {
  const std::size_t b = net0.size();
  for (std::size_t a = 0; a < b; ++a) {
    if (net0.vertices()[a] != a) {
      throw std::invalid_argument("assemble_self_similar: base network must be on ids 0..|V_0|-1");
    }
  }
  if (!complex.cells.empty() && complex.cells.front().boundary.size() != b) {
    throw std::invalid_argument("assemble_self_similar: base network size differs from |V_0|");
  }
  std::size_t symbols = 0;
  for (const auto& cell : complex.cells) {
    for (int w : cell.word) symbols = std::max(symbols, static_cast<std::size_t>(w) + 1);
  }
  if (scaling.size() < symbols) throw std::invalid_argument("one scaling factor per map is required");
  for (double r : scaling) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("scaling factors must lie in (0,1)");
  }
  std::vector<double> inverse(scaling.size());
  for (std::size_t i = 0; i < scaling.size(); ++i) inverse[i] = 1.0 / scaling[i];

  std::vector<Eigen::Triplet<double>> t;
  for (const auto& cell : complex.cells) {
    const double weight = word_product(cell.word, inverse);
    for (std::size_t a = 0; a < b; ++a) {
      for (std::size_t c = a + 1; c < b; ++c) {
        const double c0 = net0.conductances().coeff(static_cast<Eigen::Index>(a),
                                                     static_cast<Eigen::Index>(c));
        if (c0 == 0.0) continue;
        const auto x = static_cast<Eigen::Index>(cell.boundary[a]);
        const auto y = static_cast<Eigen::Index>(cell.boundary[c]);
        t.emplace_back(x, y, weight * c0);
        t.emplace_back(y, x, weight * c0);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(complex.vertex_count);
  SparseMatrix c(n, n);
  c.setFromTriplets(t.begin(), t.end());
  std::vector<VertexId> ids(complex.vertex_count);
  for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = k;
  return ConductanceNetwork(std::move(ids), std::move(c));
}

}  // namespace sdlab
