#include "sdlab/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sdlab {

namespace {

void check_levels(const FractalHierarchy& hier, std::span<const int> levels, int reference) {
  if (reference < 0 || reference > hier.max_level()) {
    throw std::invalid_argument("reference level " + std::to_string(reference) +
                                " is outside the hierarchy");
  }
  for (int n : levels) {
    if (n < 0 || n > reference) {
      throw std::invalid_argument("level " + std::to_string(n) +
                                  " must lie between 0 and the reference level");
    }
  }
}

void check_reference_function(const FractalHierarchy& hier, const Vector& f, int reference) {
  if (static_cast<std::size_t>(f.size()) != hier.vertex_count(reference)) {
    throw std::invalid_argument("test function must be given on the reference level");
  }
}

ConvergenceReport start_report(Quantity q, std::span<const int> levels, int reference) {
  ConvergenceReport r;
  r.quantity = q;
  r.levels.assign(levels.begin(), levels.end());
  r.reference_level = reference;
  return r;
}

}  // namespace

RestrictionMap::RestrictionMap(const FractalHierarchy& hier, int source, int target)
    : source_(source), target_(target) {
  if (target < 0 || target > source || source > hier.max_level()) {
    throw std::invalid_argument("restriction needs 0 <= target <= source <= max level");
  }
  source_size_ = hier.vertex_count(source);
  target_size_ = hier.vertex_count(target);
}

Vector RestrictionMap::operator()(const Vector& f) const {
  if (static_cast<std::size_t>(f.size()) != source_size_) {
    throw std::invalid_argument("function does not live on the source level");
  }
  return restrict_to(f, target_size_);
}

RestrictionMap RestrictionMap::after(const RestrictionMap& inner) const {
  if (inner.target_ != source_) throw std::invalid_argument("restriction levels do not chain");
  return RestrictionMap(inner.source_, target_, inner.source_size_, target_size_);
}

std::string_view to_string(Quantity q) {
  switch (q) {
    case Quantity::ks_norm: return "ks_norm";
    case Quantity::resolvent_sup: return "resolvent_sup";
    case Quantity::semigroup_sup: return "semigroup_sup";
    case Quantity::path_law: return "path_law";
  }
  return "unknown";
}

void summarize_trend(ConvergenceReport& r) {
  constexpr double slack = 1e-15;
  if (r.errors.empty()) return;
  std::size_t from = r.errors.size() - 1;
  while (from > 0 && r.errors[from - 1] + slack >= r.errors[from]) --from;
  r.non_increasing_from = r.levels[from];
  if (r.errors.front() > 0.0) r.final_to_initial = r.errors.back() / r.errors.front();
}

ConvergenceLab::ConvergenceLab(const FractalHierarchy& hier, DriftModel drift,
                               std::optional<double> delta)
    : hierarchy_(&hier), drift_(std::move(drift)) {
  const int top = hier.max_level();
  diam_ = resistance_diameter(hier.network(top));
  const auto spec = drift_.at(hier, top);
  const auto c1 = check_condition_I(hier.network(top), spec, diam_);
  if (!c1.satisfied) {
    throw InadmissibleDrift("Condition (I) fails: drift energy " + std::to_string(c1.drift_energy) +
                            " is not below " + std::to_string(c1.threshold));
  }
  constants_ = select_constants(c1.drift_energy, diam_, delta.value_or(default_delta(diam_)));
}

GeneratorMatrix ConvergenceLab::generator(int level) const {
  auto gen = build_generator(hierarchy_->network(level), drift_.at(*hierarchy_, level),
                             hierarchy_->measure(level));
  const auto rates = validate_rates(gen);
  if (!rates.valid()) {
    const auto& v = rates.negative.front();
    throw InadmissibleDrift("negative rate on edge (" + std::to_string(v.from) + ", " +
                            std::to_string(v.to) + ") at level " + std::to_string(level));
  }
  return gen;
}

Vector coordinate_function(const LevelComplex& complex, int axis) {
  if (!complex.has_coordinates()) throw ConfigError("structure has no embedding");
  if (axis != 0 && axis != 1) throw std::invalid_argument("axis must be 0 or 1");
  Vector f(static_cast<Eigen::Index>(complex.vertex_count));
  for (std::size_t k = 0; k < complex.vertex_count; ++k) {
    f(static_cast<Eigen::Index>(k)) = axis == 0 ? complex.coordinates[k].x : complex.coordinates[k].y;
  }
  return f;
}

DriftModel default_admissible_drift(const FractalHierarchy& hier, double diam) {
  std::vector<double> h(hier.vertex_count(0), 0.0);
  h[0] = 1.0;
  const Vector hv = Eigen::Map<const Vector>(h.data(), static_cast<Eigen::Index>(h.size()));
  const double e = energy(hier.network(0), hv);
  const double beta_max = std::sqrt(1.0 / (diam * e));
  return DriftModel({DriftTerm{ConstantCoefficient{0.5 * beta_max}, PiecewiseHarmonic{0, h}}});
}

ConvergenceReport ks_norm_check(const FractalHierarchy& hier, const Vector& f,
                                std::span<const int> levels, int reference) {
  check_levels(hier, levels, reference);
  check_reference_function(hier, f, reference);
  auto r = start_report(Quantity::ks_norm, levels, reference);
  const double ref = mu_norm(f, hier.measure(reference));
  for (int n : levels) {
    const Vector fn = RestrictionMap(hier, reference, n)(f);
    r.errors.push_back(std::abs(mu_norm(fn, hier.measure(n)) - ref));
  }
  summarize_trend(r);
  return r;
}

ConvergenceReport resolvent_convergence(const ConvergenceLab& lab, double alpha, const Vector& f,
                                        std::span<const int> levels, int reference) {
  const auto& hier = lab.hierarchy();
  check_levels(hier, levels, reference);
  check_reference_function(hier, f, reference);
  if (!(alpha > lab.constants().lambda)) {
    throw std::invalid_argument("alpha must exceed lambda = " +
                                std::to_string(lab.constants().lambda));
  }
  auto r = start_report(Quantity::resolvent_sup, levels, reference);
  const Vector ref = ResolventSolver(lab.generator(reference), alpha).solve(f);
  for (int n : levels) {
    const RestrictionMap phi(hier, reference, n);
    const Vector un = ResolventSolver(lab.generator(n), alpha).solve(phi(f));
    r.errors.push_back((un - phi(ref)).cwiseAbs().maxCoeff());
  }
  summarize_trend(r);
  return r;
}

ConvergenceReport semigroup_convergence(const ConvergenceLab& lab, double t, const Vector& f,
                                        std::span<const int> levels, int reference) {
  const auto& hier = lab.hierarchy();
  check_levels(hier, levels, reference);
  check_reference_function(hier, f, reference);
  auto r = start_report(Quantity::semigroup_sup, levels, reference);
  const Vector ref = semigroup_apply(lab.generator(reference), t, f).values;
  for (int n : levels) {
    const RestrictionMap phi(hier, reference, n);
    const Vector un = semigroup_apply(lab.generator(n), t, phi(f)).values;
    r.errors.push_back((un - phi(ref)).cwiseAbs().maxCoeff());
  }
  summarize_trend(r);
  return r;
}

std::vector<PathLawReport> path_law_convergence(const ConvergenceLab& lab, double t,
                                                std::span<const Vector> test_functions,
                                                std::span<const std::string> names,
                                                std::span<const int> levels, int reference,
                                                const PathLawOptions& options) {
  const auto& hier = lab.hierarchy();
  check_levels(hier, levels, reference);
  if (names.size() != test_functions.size()) {
    throw std::invalid_argument("one name per test function is required");
  }
  for (const auto& f : test_functions) check_reference_function(hier, f, reference);
  if (options.paths < 2) throw std::invalid_argument("at least two paths are required");
  if (options.start >= hier.vertex_count(levels.empty() ? 0 : *std::min_element(levels.begin(), levels.end()))) {
    throw std::invalid_argument("start vertex is not present on every level");
  }
  if (!(t >= 0.0)) throw std::invalid_argument("t must be non-negative");

  const auto n_fun = test_functions.size();
  std::vector<PathLawReport> out(n_fun);
  const auto ref_gen = lab.generator(reference);
  for (std::size_t i = 0; i < n_fun; ++i) {
    out[i].summary = start_report(Quantity::path_law, levels, reference);
    out[i].summary.label = names[i];
    out[i].summary.banner = std::string(kPathLawBanner);
  }
  std::vector<double> reference_value(n_fun);
  for (std::size_t i = 0; i < n_fun; ++i) {
    reference_value[i] =
        semigroup_apply(ref_gen, t, test_functions[i]).values(static_cast<Eigen::Index>(options.start));
  }

  for (int n : levels) {
    const auto gen = lab.generator(n);
    const RestrictionMap phi(hier, reference, n);
    const ChainSampler sampler(gen);
    const auto initial = point_mass(gen.size(), options.start);
    std::vector<Vector> fn(n_fun);
    for (std::size_t i = 0; i < n_fun; ++i) fn[i] = phi(test_functions[i]);
    std::vector<double> sum(n_fun, 0.0), sum_sq(n_fun, 0.0);
    for (std::size_t k = 0; k < options.paths; ++k) {
      const auto x = static_cast<Eigen::Index>(sampler.sample_state(initial, t, options.seed, k));
      for (std::size_t i = 0; i < n_fun; ++i) {
        const double v = fn[i](x);
        sum[i] += v;
        sum_sq[i] += v * v;
      }
    }
    const double m = static_cast<double>(options.paths);
    for (std::size_t i = 0; i < n_fun; ++i) {
      PathLawRow row;
      row.level = n;
      row.mc_mean = sum[i] / m;
      const double var = std::max(0.0, (sum_sq[i] - m * row.mc_mean * row.mc_mean) / (m - 1.0));
      row.standard_error = std::sqrt(var / m);
      row.exact = semigroup_apply(gen, t, fn[i]).values(static_cast<Eigen::Index>(options.start));
      row.z_score = row.standard_error > 0.0 ? (row.mc_mean - row.exact) / row.standard_error : 0.0;
      row.reference = reference_value[i];
      out[i].rows.push_back(row);
      out[i].summary.errors.push_back(std::abs(row.mc_mean - row.reference));
    }
  }
  for (auto& r : out) summarize_trend(r.summary);
  return out;
}

PairedEstimate paired_expectation(const GeneratorMatrix& a, const GeneratorMatrix& b,
                                  const Vector& f, VertexId start, double t, std::size_t paths,
                                  std::uint64_t seed) {
  if (a.size() != b.size() || static_cast<std::size_t>(f.size()) != a.size()) {
    throw std::invalid_argument("paired runs need a common vertex set");
  }
  if (paths < 2) throw std::invalid_argument("at least two paths are required");
  const ChainSampler sa(a), sb(b);
  const auto initial = point_mass(a.size(), start);
  double s_a = 0.0, s_b = 0.0, s_d = 0.0, s_dd = 0.0;
  for (std::size_t k = 0; k < paths; ++k) {
    const double va = f(static_cast<Eigen::Index>(sa.sample_state(initial, t, seed, k)));
    const double vb = f(static_cast<Eigen::Index>(sb.sample_state(initial, t, seed, k)));
    s_a += va;
    s_b += vb;
    s_d += va - vb;
    s_dd += (va - vb) * (va - vb);
  }
  const double m = static_cast<double>(paths);
  PairedEstimate r;
  r.paths = paths;
  r.mean_a = s_a / m;
  r.mean_b = s_b / m;
  r.mean_difference = s_d / m;
  const double var = std::max(0.0, (s_dd - m * r.mean_difference * r.mean_difference) / (m - 1.0));
  r.difference_se = std::sqrt(var / m);
  return r;
}

EnergyProfile energy_monotonicity_profile(const FractalHierarchy& hier, const Vector& f,
                                          std::span<const int> levels) {
  int finest = -1;
  for (int n = 0; n <= hier.max_level(); ++n) {
    if (hier.vertex_count(n) == static_cast<std::size_t>(f.size())) finest = n;
  }
  if (finest < 0) throw std::invalid_argument("function does not live on any level");
  check_levels(hier, levels, finest);
  EnergyProfile p;
  p.levels.assign(levels.begin(), levels.end());
  for (int n : levels) {
    p.energies.push_back(energy(hier.network(n), RestrictionMap(hier, finest, n)(f)));
  }
  for (std::size_t k = 1; k < p.energies.size(); ++k) {
    const double drop = p.energies[k - 1] - p.energies[k];
    p.worst_drop = std::max(p.worst_drop, drop);
    if (drop > 1e-10 * (1.0 + std::abs(p.energies[k - 1]))) p.non_decreasing = false;
  }
  return p;
}

}  // namespace sdlab
