#pragma once

// Non-symmetric drift perturbations Q^n = Σ_i Q^n_i of the level-n energy,
//
//   Q^n_i(f, g) = ½ Σ_{x≠y} c_{x,y} b_i(x) g(x) (f(x)-f(y)) (h_i(x)-h_i(y)),
//
// the smallness conditions on (b_i, h_i), the constants δ, s, t, λ derived
// from them, and numerical checks of the semi-Dirichlet axioms for
// A^n = E^n + Q^n on L²(V_n, μ_n).

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sdlab/hierarchy.hpp"
#include "sdlab/resistance.hpp"
#include "sdlab/types.hpp"

namespace sdlab {

// ---------------------------------------------------------------------------
// Drift data

struct ConstantCoefficient {
  double value = 0.0;
};
/// b(x) = c + a_x·x + a_y·y on embedded structures.
struct AffineCoefficient {
  double constant = 0.0;
  double x = 0.0;
  double y = 0.0;
};
/// Explicit values on V_level; usable at that level and every coarser one.
struct SampledCoefficient {
  int level = 0;
  std::vector<double> values;
};
using Coefficient = std::variant<ConstantCoefficient, AffineCoefficient, SampledCoefficient>;

/// h given by its values on V_level, extended harmonically to finer levels.
struct PiecewiseHarmonic {
  int level = 0;
  std::vector<double> values;
};

struct DriftTerm {
  Coefficient b;
  PiecewiseHarmonic h;
};

/// b_i and h_i sampled on the vertices of one level.
struct DriftSpec {
  int level = 0;
  std::vector<Vector> b;
  std::vector<Vector> h;

  std::size_t terms() const noexcept { return b.size(); }
};

/// Level-independent drift description; `at` samples it on any level.
class DriftModel {
 public:
  DriftModel() = default;
  explicit DriftModel(std::vector<DriftTerm> terms) : terms_(std::move(terms)) {}

  const std::vector<DriftTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// Throws ConfigError when a term cannot be realized on that level
  /// (affine b without coordinates, samples from a coarser level, bad sizes).
  DriftSpec at(const FractalHierarchy& hierarchy, int level) const;

  /// Every b_i multiplied by `factor`.
  DriftModel scaled(double factor) const;

 private:
  std::vector<DriftTerm> terms_;
};

/// b ≡ 0 (no terms).
DriftSpec zero_drift(int level);

// ---------------------------------------------------------------------------
// Forms

/// η(x, y) = ½ Σ_i b_i(x) (h_i(x) - h_i(y)), by index. Not symmetric.
double eta(const DriftSpec& drift, std::size_t x, std::size_t y);

struct EdgeDrift {
  double value = 0.0;
  bool on_edge = false;  // c_{x,y} > 0; off-edge values never enter any form
};
/// η by vertex id, flagged when {x, y} is not an edge.
EdgeDrift eta(const ConductanceNetwork& net, const DriftSpec& drift, VertexId x, VertexId y);

/// Matrix B with g^T B f = Q^n(f, g): row index carries g, column index f.
/// Throws std::invalid_argument when the drift is sampled on another vertex set.
SparseMatrix assemble_q(const ConductanceNetwork& net, const DriftSpec& drift);

struct FormAssembly {
  int level = 0;
  SparseMatrix energy;  // E^n (graph Laplacian)
  SparseMatrix drift;   // Q^n in the convention of assemble_q
  SparseMatrix form;    // A^n = E^n + Q^n
  Vector mu;

  /// A^n(f, g).
  double a(const Vector& f, const Vector& g) const { return g.dot(form * f); }
  double e(const Vector& f, const Vector& g) const { return g.dot(energy * f); }
  double q(const Vector& f, const Vector& g) const { return g.dot(drift * f); }
  double norm2(const Vector& f) const { return f.cwiseProduct(f).dot(mu); }
  double a_lambda(const Vector& f, double lambda) const { return a(f, f) + lambda * norm2(f); }
  double e_lambda(const Vector& f, double lambda) const { return e(f, f) + lambda * norm2(f); }
};

/// Throws std::invalid_argument if μ is not strictly positive or sizes differ.
FormAssembly assemble_forms(const ConductanceNetwork& net, const DriftSpec& drift,
                            const Vector& mu, int level);

/// A^n(u, v) = Σ_x v(x) Σ_y c_{x,y} (1 + η(x,y)) (u(x) - u(y)), summed edge by
/// edge. Agrees with FormAssembly::a but avoids the cancellation between the
/// diagonal and off-diagonal parts when every term has one sign.
double form_edgewise(const ConductanceNetwork& net, const DriftSpec& drift, const Vector& u,
                     const Vector& v);

/// Σ_{x≠y} c_{x,y} g(x) (h(x)-h(y)) (h2(x)-h2(y)) (no ½ factor).
double discrete_mutual_energy(const ConductanceNetwork& net, const Vector& h, const Vector& h2,
                              const Vector& g);

// ---------------------------------------------------------------------------
// Smallness conditions and constants

struct ConditionI {
  double drift_energy = 0.0;  // Σ_{i,j} Σ_{x≠y} c b_i(x) b_j(x) Δh_i Δh_j
  double threshold = 0.0;     // 2 / diam
  double margin = 0.0;        // threshold - drift_energy
  bool satisfied = false;
};

/// Σ_{i,j} ∫ b_i b_j dν_{h_i,h_j} at level n (left-endpoint sampling) against 2/diam.
ConditionI check_condition_I(const ConductanceNetwork& net, const DriftSpec& drift, double diam);

struct ConditionII {
  double max_energy = 0.0;    // max_x E(Σ_i b_i(x) h_i)
  VertexId argmax = 0;
  double threshold = 0.0;     // 1 / diam
  double margin = 0.0;
  bool satisfied = false;
};

/// Frozen-coefficient energies E^n(Σ_i b_i(x) h_i) over all vertices x.
ConditionII check_condition_II(const ConductanceNetwork& net, const DriftSpec& drift, double diam);

struct ConditionIII {
  int level = 0;
  std::size_t components = 0;      // cells of level n, closures of X \ V_n components
  bool boundary_in_vertices = true;
  bool satisfied = true;
  std::string note;
};

/// Recorded structurally for p.c.f. structures; exhibits the cell decomposition.
ConditionIII check_condition_III(const LevelComplex& complex);

struct DriftConstants {
  double delta = 0.0;
  double s = 0.0;
  double t = 0.0;
  double lambda = 0.0;
  double s_lower = 0.0;  // (drift_energy/2)^{1/2} (diam^{1/2} + δ)
};

/// δ = 0.1 diam^{1/2}.
double default_delta(double diam);

/// s = midpoint of (s_lower, 1), λ = (4δ)^{-1} (diam^{1/2} + δ)^{-1}, t = λ s.
/// Throws InadmissibleDrift when s_lower ≥ 1 and std::invalid_argument for δ ≤ 0.
DriftConstants select_constants(double drift_energy, double diam, double delta);

struct SmallnessReport {
  double diam_proxy = 0.0;
  int level = 0;
  ConditionI condition_I;
  ConditionII condition_II;
  std::optional<DriftConstants> constants;  // empty when no s < 1 exists
  std::string caveat;
};

SmallnessReport smallness_report(const ConductanceNetwork& net, const DriftSpec& drift,
                                 double diam, std::optional<double> delta = std::nullopt);

// ---------------------------------------------------------------------------
// Numerical verification

struct SamplingOptions {
  std::size_t draws = 1000;
  std::uint64_t seed = 20240607;
};

/// Draw k of a family of random test functions: iid uniform values, offsets
/// by constants, and sparse spikes, so both E^n and the L² part are exercised.
Vector random_test_function(std::size_t size, std::uint64_t seed, std::uint64_t index);

struct SandwichReport {
  bool passed = true;
  double worst_lower_slack = 0.0;  // min (A_λ - (1-s)E_λ) / E_λ
  double worst_upper_slack = 0.0;  // min ((1+s)E_λ - A_λ) / E_λ
  double worst_ratio_low = 1.0;    // min A_λ / E_λ
  double worst_ratio_high = 1.0;   // max A_λ / E_λ
  bool drift_bound_passed = true;  // |Q(f)| ≤ s E(f) + t ||f||²
  double worst_drift_bound_slack = 0.0;
  std::size_t draws = 0;
};

SandwichReport verify_sandwich(const FormAssembly& forms, const DriftConstants& constants,
                               const SamplingOptions& options = {});

struct EdgeCertificate {
  double min_markov = 1.0;  // min over edges of 1 + Σ_i b_i(x)(h_i(x) - h_i(y)) = 1 + 2η
  double min_rate = 1.0;    // min over edges of 1 + η (generator off-diagonal sign)
  std::vector<std::pair<VertexId, VertexId>> violations;  // ordered pairs with 1 + 2η < 0
};

EdgeCertificate edge_certificates(const ConductanceNetwork& net, const DriftSpec& drift);

struct SDReport {
  bool sd1 = true;
  double sd1_min = 0.0;           // min A_λ(f) / E_λ(f)
  bool sd3 = true;
  double sector_empirical = 0.0;  // max |A(f,g)| / (A_λ(f) A_λ(g))^{1/2}
  double sector_bound = 0.0;      // (1-s)^{-1} {1 + (diam^{1/2}+2δ) Σ ||b_i||_∞ E(h_i)^{1/2}}
  bool sd4 = true;
  double sd4_min = 0.0;           // min A(f∧a, f - f∧a)
  EdgeCertificate edges;
  bool edges_ok = true;
  std::size_t draws = 0;

  bool passed() const noexcept { return sd1 && sd3 && sd4 && edges_ok; }
};

inline constexpr double kSd4Tolerance = 1e-12;

SDReport verify_sd_axioms(const FormAssembly& forms, const ConductanceNetwork& net,
                          const DriftSpec& drift, const DriftConstants& constants, double diam,
                          const SamplingOptions& options = {});

}  // namespace sdlab
