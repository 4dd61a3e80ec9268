#pragma once

// Resolvents G_α = (α - L)^{-1} and semigroups T_t = exp(tL) of a generator,
// with numerical checks of the Markov and growth properties.

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "sdlab/markov.hpp"
#include "sdlab/types.hpp"

namespace sdlab {

struct ResolventSolve {
  double alpha = 0.0;
  Vector values;
  /// max_x |μ(x) ((α - L)u - f)(x)|, i.e. max over basis v of |A_α(u, v) - (f, v)_μ|.
  double residual = 0.0;
  /// ||u||_μ / ||f||_μ (zero for f = 0).
  double norm_ratio = 0.0;
  /// (α - λ)^{-1} when λ was supplied.
  std::optional<double> norm_bound;
};

/// Factorizes α - L once for repeated solves. Dense LU below 500 vertices,
/// sparse LU otherwise. Throws SingularSystem if the factorization fails.
class ResolventSolver {
 public:
  ResolventSolver(const GeneratorMatrix& gen, double alpha);
  ~ResolventSolver();
  ResolventSolver(ResolventSolver&&) noexcept;
  ResolventSolver& operator=(ResolventSolver&&) noexcept;

  double alpha() const noexcept { return alpha_; }
  Vector solve(const Vector& f) const;

 private:
  struct Impl;
  double alpha_ = 0.0;
  std::unique_ptr<Impl> impl_;
};

/// Solves (α - L)u = f. If λ is given, α must exceed it (std::invalid_argument)
/// and the bound ||u||_μ ≤ (α-λ)^{-1} ||f||_μ is recorded for the caller to check.
ResolventSolve resolvent(const GeneratorMatrix& gen, double alpha, const Vector& f,
                         std::optional<double> lambda = std::nullopt);

/// L²(μ) norm.
double mu_norm(const Vector& f, const Vector& mu);

struct SemigroupApply {
  double t = 0.0;
  Vector values;
  std::size_t truncation_order = 0;  // last Poisson term kept
  double rate = 0.0;                 // uniformization rate Λ
  double tail_bound = 0.0;           // bound on the discarded Poisson mass
};

struct SemigroupOptions {
  double tail = 1e-12;
  /// Apply exp(tL^T) instead of exp(tL).
  bool transpose = false;
};

/// exp(tL) f by uniformization: Λ = max_x q(x), P = I + L/Λ,
/// T_t f = Σ_k e^{-Λt} (Λt)^k / k! P^k f, truncated once the Poisson tail
/// is below `tail`; the kept weights are renormalized to sum to one.
/// Throws InvalidRates for negative rates, std::invalid_argument for t < 0.
SemigroupApply semigroup_apply(const GeneratorMatrix& gen, double t, const Vector& f,
                               const SemigroupOptions& options = {});

struct MarkovCheck {
  std::size_t trials = 0;
  double min_value = 0.0;   // min over trials of min T_t f, 0 ≤ f ≤ 1
  double max_value = 0.0;   // max over trials of max T_t f
  double min_positive = 0.0;  // min of T_t f over nonnegative unbounded f
  bool passed = true;
};

inline constexpr double kMarkovTolerance = 1e-10;

MarkovCheck markov_check(const GeneratorMatrix& gen, double t, std::size_t trials,
                         std::uint64_t seed);

struct GrowthPoint {
  double t = 0.0;
  double norm_estimate = 0.0;  // power-iteration estimate of ||T_t||_{L²(μ)}
  double bound = 0.0;          // e^{λt}
  bool passed = true;
};

struct GrowthCheck {
  double lambda = 0.0;
  std::vector<GrowthPoint> points;
  bool passed = true;
};

/// 50 power iterations on T_t^* T_t in L²(μ), T^* = D^{-1} T^T D, seeded.
GrowthCheck contraction_growth_check(const GeneratorMatrix& gen, double lambda,
                                     std::span<const double> t_grid,
                                     std::uint64_t seed = 20240607);

}  // namespace sdlab
