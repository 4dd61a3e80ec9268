#pragma once

// Shared fixtures and hand-rolled generators for the unit tests.

#include <cmath>
#include <memory>
#include <numeric>
#include <vector>

#include "sdlab/convergence.hpp"
#include "sdlab/hierarchy.hpp"
#include "sdlab/random.hpp"
#include "sdlab/resistance.hpp"

namespace sdlab::testing {

/// Gasket hierarchy up to `max_level`, built once per level bound.
inline const FractalHierarchy& gasket(int max_level = 5) {
  static std::vector<std::unique_ptr<FractalHierarchy>> cache(8);
  auto& slot = cache.at(static_cast<std::size_t>(max_level));
  if (!slot) {
    slot = std::make_unique<FractalHierarchy>(build_sierpinski_structure(),
                                               sierpinski_parameters(), max_level);
  }
  return *slot;
}

inline constexpr double kGasketDiam = 2.0 / 3.0;

/// h = harmonic extension of (1, 0, 0), b ≡ beta.
inline DriftModel single_term_drift(double beta) {
  return DriftModel({DriftTerm{ConstantCoefficient{beta}, PiecewiseHarmonic{0, {1.0, 0.0, 0.0}}}});
}

/// Largest β allowed by Condition (II) for single_term_drift: β² E(h) ≤ 1/diam with E(h) = 2.
inline double beta_max() { return std::sqrt(1.0 / (kGasketDiam * 2.0)); }

inline std::vector<VertexId> iota_ids(std::size_t n) {
  std::vector<VertexId> v(n);
  std::iota(v.begin(), v.end(), VertexId{0});
  return v;
}

/// Random connected network: a spanning path plus extra random edges.
inline ConductanceNetwork random_network(std::size_t n, std::uint64_t seed, double density = 0.3) {
  StreamRng rng(seed, 0);
  std::vector<WeightedEdge> edges;
  for (std::size_t k = 0; k + 1 < n; ++k) edges.push_back({k, k + 1, rng.uniform(0.1, 2.0)});
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 2; y < n; ++y) {
      if (rng.uniform() < density) edges.push_back({x, y, rng.uniform(0.1, 2.0)});
    }
  }
  return ConductanceNetwork::from_edges(iota_ids(n), edges);
}

inline Vector random_vector(std::size_t n, std::uint64_t seed, std::uint64_t index,
                            double lo = -1.0, double hi = 1.0) {
  StreamRng rng(seed, index);
  Vector v(static_cast<Eigen::Index>(n));
  for (Eigen::Index k = 0; k < v.size(); ++k) v(k) = rng.uniform(lo, hi);
  return v;
}

}  // namespace sdlab::testing
