#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace sdlab {

/// Canonical vertex id. Ids of V_n are 0..|V_n|-1 and V_{n-1} is always a prefix.
using VertexId = std::size_t;

/// Function on the vertices of a network, indexed by the network's vertex order.
using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// A linear system that must be nonsingular turned out singular (e.g. an
/// interior component with no path to the boundary).
class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Drift data violates a smallness condition needed downstream.
class InadmissibleDrift : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A generator has negative off-diagonal rates and cannot drive a Markov chain.
class InvalidRates : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed structure / drift / run configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace sdlab
