#pragma once

// Level-to-reference comparisons: restriction maps, L² norm consistency,
// resolvent and semigroup gaps, fixed-time test-function expectations of
// the chains, and the monotone energy profile of restrictions.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sdlab/drift_forms.hpp"
#include "sdlab/hierarchy.hpp"
#include "sdlab/markov.hpp"
#include "sdlab/spectral.hpp"

namespace sdlab {

/// Φ: f ↦ f|V_target for f on V_source (target ≤ source).
class RestrictionMap {
 public:
  /// Throws std::invalid_argument unless 0 ≤ target ≤ source ≤ max level.
  RestrictionMap(const FractalHierarchy& hierarchy, int source, int target);

  int source() const noexcept { return source_; }
  int target() const noexcept { return target_; }
  Vector operator()(const Vector& f) const;
  /// (*this) ∘ inner, defined when inner.target() == source().
  RestrictionMap after(const RestrictionMap& inner) const;

 private:
  RestrictionMap(int source, int target, std::size_t source_size, std::size_t target_size)
      : source_(source), target_(target), source_size_(source_size), target_size_(target_size) {}

  int source_;
  int target_;
  std::size_t source_size_;
  std::size_t target_size_;
};

enum class Quantity { ks_norm, resolvent_sup, semigroup_sup, path_law };
std::string_view to_string(Quantity q);

struct ConvergenceReport {
  Quantity quantity = Quantity::ks_norm;
  std::string label;  // test function or run name
  std::vector<int> levels;
  std::vector<double> errors;
  int reference_level = 0;
  /// Smallest listed level from which the errors are non-increasing.
  int non_increasing_from = 0;
  /// errors.back() / errors.front(), when errors.front() > 0.
  std::optional<double> final_to_initial;
  std::string banner;

  bool monotone() const noexcept {
    return !levels.empty() && non_increasing_from == levels.front();
  }
};

/// Fills non_increasing_from and final_to_initial (slack 1e-15 absolute).
void summarize_trend(ConvergenceReport& report);

/// A drift model together with the hierarchy it is evaluated on and the
/// shared diameter proxy (resistance diameter of the finest level).
class ConvergenceLab {
 public:
  /// Throws InadmissibleDrift if Condition (I) fails at the finest level.
  ConvergenceLab(const FractalHierarchy& hierarchy, DriftModel drift,
                 std::optional<double> delta = std::nullopt);

  const FractalHierarchy& hierarchy() const noexcept { return *hierarchy_; }
  const DriftModel& drift() const noexcept { return drift_; }
  double diam_proxy() const noexcept { return diam_; }
  const DriftConstants& constants() const noexcept { return constants_; }

  /// Generator at `level`; throws InadmissibleDrift when some rate is negative.
  GeneratorMatrix generator(int level) const;

 private:
  const FractalHierarchy* hierarchy_;
  DriftModel drift_;
  double diam_ = 0.0;
  DriftConstants constants_;
};

/// Vertex coordinate (axis 0 = x, 1 = y); throws ConfigError without embedding.
Vector coordinate_function(const LevelComplex& complex, int axis);

/// Single term: h = harmonic extension of (1, 0, ..., 0) from V_0, b constant
/// at half of the largest value allowed by Condition (II).
DriftModel default_admissible_drift(const FractalHierarchy& hierarchy, double diam);

/// | ||f|V_n||_{L²(μ_n)} - ||f||_{L²(μ_M)} | for f on V_M, M = reference.
ConvergenceReport ks_norm_check(const FractalHierarchy& hierarchy, const Vector& f,
                                std::span<const int> levels, int reference);

/// max_{V_n} |G^n_α(f|V_n) - (G^M_α f)|V_n|. Requires α > λ.
ConvergenceReport resolvent_convergence(const ConvergenceLab& lab, double alpha, const Vector& f,
                                        std::span<const int> levels, int reference);

/// max_{V_n} |T^n_t(f|V_n) - (T^M_t f)|V_n|.
ConvergenceReport semigroup_convergence(const ConvergenceLab& lab, double t, const Vector& f,
                                        std::span<const int> levels, int reference);

struct PathLawRow {
  int level = 0;
  double mc_mean = 0.0;
  double standard_error = 0.0;
  double exact = 0.0;       // (T^n_t f)(x_0)
  double z_score = 0.0;     // (mc_mean - exact) / standard_error, 0 when SE = 0
  double reference = 0.0;   // (T^M_t f)(x_0)
};

struct PathLawReport {
  ConvergenceReport summary;  // errors: |mc_mean - reference|
  std::vector<PathLawRow> rows;
};

struct PathLawOptions {
  std::size_t paths = 10000;
  std::uint64_t seed = 20240607;
  VertexId start = 1;  // p_2 for the gasket, present in every V_n
};

/// Monte-Carlo estimates of E[f(Y_n(t))], Y_n(0) = start, with an exact
/// semigroup cross-check at each level. One report per test function.
std::vector<PathLawReport> path_law_convergence(const ConvergenceLab& lab, double t,
                                                std::span<const Vector> test_functions,
                                                std::span<const std::string> names,
                                                std::span<const int> levels, int reference,
                                                const PathLawOptions& options = {});

struct PairedEstimate {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double mean_difference = 0.0;  // mean_a - mean_b
  double difference_se = 0.0;
  std::size_t paths = 0;
};

/// E[f(Y(t))] under two generators on the same vertex set, path k of both
/// runs driven by the same substream.
PairedEstimate paired_expectation(const GeneratorMatrix& a, const GeneratorMatrix& b,
                                  const Vector& f, VertexId start, double t, std::size_t paths,
                                  std::uint64_t seed);

struct EnergyProfile {
  std::vector<int> levels;
  std::vector<double> energies;  // E^n(f|V_n)
  double worst_drop = 0.0;       // max of E^n - E^{n+1} over consecutive listed levels
  bool non_decreasing = true;    // worst_drop ≤ 1e-10 (1 + |E|)
};

EnergyProfile energy_monotonicity_profile(const FractalHierarchy& hierarchy, const Vector& f,
                                          std::span<const int> levels);

/// Note attached to every path-law report.
inline constexpr std::string_view kPathLawBanner =
    "fixed-time test-function expectations stand in for convergence in law on path space; "
    "the Skorokhod J1 topology is not tested";

}  // namespace sdlab
