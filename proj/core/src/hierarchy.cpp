#include "sdlab/hierarchy.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sdlab {

FormParameters sierpinski_parameters() {
  const std::vector<WeightedEdge> triangle{{0, 1, 1.0}, {0, 2, 1.0}, {1, 2, 1.0}};
  return {ConductanceNetwork::from_edges({0, 1, 2}, triangle), {0.6, 0.6, 0.6},
          {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}};
}

FractalHierarchy::FractalHierarchy(SelfSimilarStructure structure, FormParameters params,
                                   int max_level)
    : structure_(std::move(structure)), params_(std::move(params)) {
  if (max_level < 0) throw std::invalid_argument("max_level must be non-negative");
  const auto m = static_cast<std::size_t>(structure_.symbol_count());
  if (params_.scaling.size() != m || params_.weights.size() != m) {
    throw std::invalid_argument("one scaling factor and one weight per map are required");
  }
  if (params_.base.size() != static_cast<std::size_t>(structure_.boundary_size())) {
    throw std::invalid_argument("base network must live on V_0");
  }
  if (!params_.base.is_connected()) throw std::invalid_argument("base network must be connected");
  const double total = std::accumulate(params_.weights.begin(), params_.weights.end(), 0.0);
  for (double w : params_.weights) {
    if (!(w > 0.0 && w < 1.0)) throw std::invalid_argument("measure weights must lie in (0,1)");
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("measure weights must sum to 1");

  for (int n = 0; n <= max_level; ++n) {
    complexes_.push_back(build_level(structure_, n));
    networks_.push_back(assemble_self_similar(params_.base, params_.scaling, complexes_.back()));
    const auto mu = self_similar_measure(complexes_.back(), params_.weights,
                                         structure_.boundary_size());
    measures_.push_back(Eigen::Map<const Vector>(mu.data(), static_cast<Eigen::Index>(mu.size())));
  }
}

double FractalHierarchy::compatibility_defect() const {
  const auto level1 = assemble_self_similar(params_.base, params_.scaling,
                                            build_level(structure_, 1));
  if (level1.size() == params_.base.size()) return max_conductance_gap(level1, params_.base);
  std::vector<VertexId> boundary(params_.base.size());
  std::iota(boundary.begin(), boundary.end(), VertexId{0});
  return max_conductance_gap(trace(level1, boundary), params_.base);
}

double max_conductance_gap(const ConductanceNetwork& a, const ConductanceNetwork& b) {
  if (a.vertices() != b.vertices()) throw std::invalid_argument("networks have different vertices");
  const DenseMatrix d = DenseMatrix(a.conductances()) - DenseMatrix(b.conductances());
  return d.size() == 0 ? 0.0 : d.cwiseAbs().maxCoeff();
}

Vector restrict_to(const Vector& f, std::size_t target_size) {
  if (target_size > static_cast<std::size_t>(f.size())) {
    throw std::invalid_argument("restrict_to: target level is finer than the source");
  }
  return f.head(static_cast<Eigen::Index>(target_size));
}

}  // namespace sdlab
