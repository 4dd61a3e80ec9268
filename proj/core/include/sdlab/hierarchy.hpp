#pragma once

#include <vector>

#include "sdlab/pcf_structure.hpp"
#include "sdlab/resistance.hpp"

namespace sdlab {

/// Data that turns a structure into a sequence of forms and measures:
/// E^0 on V_0, scaling factors r_i and measure weights θ_i.
struct FormParameters {
  ConductanceNetwork base;       // E^0, on ids 0..|V_0|-1
  std::vector<double> scaling;   // r_i ∈ (0,1)
  std::vector<double> weights;   // θ_i ∈ (0,1), Σ θ_i = 1
};

/// r_i = 3/5, θ_i = 1/3, c_0 ≡ 1 on the boundary triangle.
FormParameters sierpinski_parameters();

/// Levels 0..max_level of one self-similar form, built once and immutable
/// afterwards (safe to share across threads).
class FractalHierarchy {
 public:
  /// Throws std::invalid_argument if the parameters do not match the structure.
  FractalHierarchy(SelfSimilarStructure structure, FormParameters params, int max_level);

  int max_level() const noexcept { return static_cast<int>(complexes_.size()) - 1; }
  const SelfSimilarStructure& structure() const noexcept { return structure_; }
  const FormParameters& parameters() const noexcept { return params_; }

  const LevelComplex& complex(int n) const { return complexes_.at(static_cast<std::size_t>(n)); }
  const ConductanceNetwork& network(int n) const { return networks_.at(static_cast<std::size_t>(n)); }
  /// μ_n as a Vector aligned with network(n).
  const Vector& measure(int n) const { return measures_.at(static_cast<std::size_t>(n)); }
  std::size_t vertex_count(int n) const { return complex(n).vertex_count; }

  /// Largest entrywise gap between Tr(E^1 | V_0) and E^0; zero when the
  /// levels form a compatible trace tower.
  double compatibility_defect() const;

 private:
  SelfSimilarStructure structure_;
  FormParameters params_;
  std::vector<LevelComplex> complexes_;
  std::vector<ConductanceNetwork> networks_;
  std::vector<Vector> measures_;
};

/// Largest entrywise gap |c - c'| between two networks on the same vertex list.
double max_conductance_gap(const ConductanceNetwork& a, const ConductanceNetwork& b);

/// f|V_n for f given on a finer level (V_n is the id prefix of V_m).
Vector restrict_to(const Vector& f, std::size_t target_size);

}  // namespace sdlab
