#pragma once

// The generator L_n of the chain associated with A^n on L²(V_n, μ_n):
//
//   L_n(x, y) = μ(x)^{-1} c_{x,y} (1 + η(x, y)),   L_n(x, x) = -Σ_{y≠x} L_n(x, y),
//
// its jump-chain parameters and trajectory simulation.

#include <cstdint>
#include <span>
#include <vector>

#include "sdlab/drift_forms.hpp"
#include "sdlab/resistance.hpp"
#include "sdlab/types.hpp"

namespace sdlab {

struct GeneratorMatrix {
  SparseMatrix rates;  // L_n, rows sum to zero
  Vector mu;

  std::size_t size() const noexcept { return static_cast<std::size_t>(rates.rows()); }
};

/// Throws std::invalid_argument if μ has a non-positive entry or sizes differ.
/// Negative rates are kept as built; see validate_rates.
GeneratorMatrix build_generator(const ConductanceNetwork& net, const DriftSpec& drift,
                                const Vector& mu);

struct RateViolation {
  std::size_t from = 0;
  std::size_t to = 0;
  double rate = 0.0;
};

struct RateReport {
  std::vector<RateViolation> negative;  // off-diagonal entries < 0
  bool valid() const noexcept { return negative.empty(); }
};

RateReport validate_rates(const GeneratorMatrix& gen);

struct JumpParameters {
  Vector holding_rate;     // q(x) = -L(x, x)
  SparseMatrix jump;       // π(x, y) = L(x, y) / q(x), rows sum to one
};

/// Throws InvalidRates for negative off-diagonals or an absorbing vertex.
JumpParameters jump_parameters(const GeneratorMatrix& gen);

/// max_{x,y} |μ(x) L(x,y) - μ(y) L(y,x)|; zero iff the chain is μ-reversible.
double detailed_balance_violation(const GeneratorMatrix& gen);

/// Right-continuous path: state states[k] on [jump_times[k], jump_times[k+1]).
struct Trajectory {
  std::vector<double> jump_times;  // jump_times[0] = 0
  std::vector<std::size_t> states;
  double horizon = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t index = 0;

  std::size_t state_at(double t) const;
};

/// Precomputed jump chain for repeated simulation.
class ChainSampler {
 public:
  /// Throws InvalidRates (see jump_parameters).
  explicit ChainSampler(const GeneratorMatrix& gen);

  std::size_t size() const noexcept { return rate_.size(); }
  double holding_rate(std::size_t x) const { return rate_[x]; }

  /// Trajectory `index` of the family named by `seed`: x_0 ~ initial, then
  /// Exponential(q(x)) holding times and π(x, ·) jumps until the horizon.
  /// Throws std::invalid_argument for an invalid initial law or horizon < 0.
  Trajectory simulate(std::span<const double> initial, double horizon, std::uint64_t seed,
                      std::uint64_t index) const;

  /// State at time t only (no path storage).
  std::size_t sample_state(std::span<const double> initial, double t, std::uint64_t seed,
                           std::uint64_t index) const;

 private:
  std::size_t draw(std::span<const double> cumulative, std::size_t begin, std::size_t end,
                   double u) const;

  std::vector<double> rate_;
  std::vector<std::size_t> row_begin_;
  std::vector<std::size_t> target_;
  std::vector<double> cumulative_;
};

/// Validates an initial distribution (nonnegative, sums to 1 within 1e-12).
void check_distribution(std::span<const double> initial, std::size_t size);

Trajectory simulate(const GeneratorMatrix& gen, std::span<const double> initial, double horizon,
                    std::uint64_t seed, std::uint64_t index = 0);

/// Occupancy frequencies at time t; throws std::invalid_argument if some
/// trajectory ends before t.
Vector empirical_law(std::span<const Trajectory> paths, double t, std::size_t size);

/// δ_x as a distribution over `size` states.
std::vector<double> point_mass(std::size_t size, std::size_t x);

}  // namespace sdlab
