#include "sdlab/drift_forms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sdlab/random.hpp"

namespace sdlab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_sizes(const ConductanceNetwork& net, const DriftSpec& drift) {
  const auto n = static_cast<Eigen::Index>(net.size());
  if (drift.b.size() != drift.h.size()) {
    throw std::invalid_argument("drift: b and h must have the same number of terms");
  }
  for (std::size_t i = 0; i < drift.terms(); ++i) {
    if (drift.b[i].size() != n || drift.h[i].size() != n) {
      throw std::invalid_argument("drift is sampled on level " + std::to_string(drift.level) +
                                  ", which does not match the network");
    }
  }
}

// Σ_i b_i(x) (h_i(x) - h_i(y)) = 2η(x, y).
double drift_difference(const DriftSpec& drift, Eigen::Index x, Eigen::Index y) {
  double s = 0.0;
  for (std::size_t i = 0; i < drift.terms(); ++i) s += drift.b[i](x) * (drift.h[i](x) - drift.h[i](y));
  return s;
}

}  // namespace

DriftSpec DriftModel::at(const FractalHierarchy& hier, int level) const {
  if (level < 0 || level > hier.max_level()) {
    throw ConfigError("drift requested on level " + std::to_string(level) +
                      " outside the hierarchy");
  }
  const auto size = hier.vertex_count(level);
  const auto& complex = hier.complex(level);
  DriftSpec out;
  out.level = level;
  for (const auto& term : terms_) {
    const auto& h = term.h;
    if (h.level < 0 || h.level > hier.max_level() ||
        h.values.size() != hier.vertex_count(h.level)) {
      throw ConfigError("h must list one value per vertex of V_" + std::to_string(h.level));
    }
    Vector hv;
    if (level <= h.level) {
      hv = restrict_to(to_vector(h.values), size);
    } else {
      std::vector<VertexId> base(hier.vertex_count(h.level));
      std::iota(base.begin(), base.end(), VertexId{0});
      hv = harmonic_extension(hier.network(level), base, to_vector(h.values));
    }

    Vector bv = std::visit(
        overloaded{
            [&](const ConstantCoefficient& c) -> Vector {
              return Vector::Constant(static_cast<Eigen::Index>(size), c.value);
            },
            [&](const AffineCoefficient& c) -> Vector {
              if (!complex.has_coordinates()) {
                throw ConfigError("affine b requires a structure with an embedding");
              }
              Vector v(static_cast<Eigen::Index>(size));
              for (std::size_t k = 0; k < size; ++k) {
                const auto& p = complex.coordinates[k];
                v(static_cast<Eigen::Index>(k)) = c.constant + c.x * p.x + c.y * p.y;
              }
              return v;
            },
            [&](const SampledCoefficient& c) -> Vector {
              if (c.level < level) {
                throw ConfigError("b sampled on V_" + std::to_string(c.level) +
                                  " cannot be evaluated on the finer level " + std::to_string(level));
              }
              if (c.level > hier.max_level() || c.values.size() != hier.vertex_count(c.level)) {
                throw ConfigError("b samples must list one value per vertex of V_" +
                                  std::to_string(c.level));
              }
              return restrict_to(to_vector(c.values), size);
            }},
        term.b);
    if (!bv.allFinite() || !hv.allFinite()) throw ConfigError("drift values must be finite");
    out.b.push_back(std::move(bv));
    out.h.push_back(std::move(hv));
  }
  return out;
}

DriftModel DriftModel::scaled(double factor) const {
  auto terms = terms_;
  for (auto& t : terms) {
    std::visit(overloaded{[&](ConstantCoefficient& c) { c.value *= factor; },
                          [&](AffineCoefficient& c) {
                            c.constant *= factor;
                            c.x *= factor;
                            c.y *= factor;
                          },
                          [&](SampledCoefficient& c) {
                            for (auto& v : c.values) v *= factor;
                          }},
               t.b);
  }
  return DriftModel(std::move(terms));
}

DriftSpec zero_drift(int level) { return DriftSpec{level, {}, {}}; }

double eta(const DriftSpec& drift, std::size_t x, std::size_t y) {
  return 0.5 * drift_difference(drift, static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
}

EdgeDrift eta(const ConductanceNetwork& net, const DriftSpec& drift, VertexId x, VertexId y) {
  check_sizes(net, drift);
  const auto i = net.index_of(x);
  const auto j = net.index_of(y);
  return {eta(drift, i, j), i != j && net.conductance(x, y) > 0.0};
}

SparseMatrix assemble_q(const ConductanceNetwork& net, const DriftSpec& drift) {
  check_sizes(net, drift);
  const auto n = static_cast<Eigen::Index>(net.size());
  const auto& c = net.conductances();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(c.nonZeros() + n));
  // Q(f, g) = Σ_x g(x) Σ_y c_{x,y} η(x,y) (f(x) - f(y)).
  for (Eigen::Index x = 0; x < n; ++x) {
    double diag = 0.0;
    for (SparseMatrix::InnerIterator it(c, x); it; ++it) {
      const double w = it.value() * 0.5 * drift_difference(drift, x, it.col());
      diag += w;
      if (w != 0.0) t.emplace_back(x, it.col(), -w);
    }
    if (diag != 0.0) t.emplace_back(x, x, diag);
  }
  SparseMatrix q(n, n);
  q.setFromTriplets(t.begin(), t.end());
  return q;
}

FormAssembly assemble_forms(const ConductanceNetwork& net, const DriftSpec& drift,
                            const Vector& mu, int level) {
  if (mu.size() != static_cast<Eigen::Index>(net.size())) {
    throw std::invalid_argument("measure size does not match the network");
  }
  if (!(mu.minCoeff() > 0.0)) throw std::invalid_argument("measure must be strictly positive");
  FormAssembly f;
  f.level = level;
  f.energy = net.laplacian();
  f.drift = assemble_q(net, drift);
  f.form = f.energy + f.drift;
  f.mu = mu;
  return f;
}

double form_edgewise(const ConductanceNetwork& net, const DriftSpec& drift, const Vector& u,
                     const Vector& v) {
  check_sizes(net, drift);
  if (u.size() != v.size() || static_cast<std::size_t>(u.size()) != net.size()) {
    throw std::invalid_argument("functions do not match the network");
  }
  const auto& c = net.conductances();
  double sum = 0.0;
  for (Eigen::Index x = 0; x < c.outerSize(); ++x) {
    if (v(x) == 0.0) continue;
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(c, x); it; ++it) {
      const auto y = it.col();
      row += it.value() * (1.0 + 0.5 * drift_difference(drift, x, y)) * (u(x) - u(y));
    }
    sum += v(x) * row;
  }
  return sum;
}

double discrete_mutual_energy(const ConductanceNetwork& net, const Vector& h, const Vector& h2,
                              const Vector& g) {
  const auto n = static_cast<Eigen::Index>(net.size());
  if (h.size() != n || h2.size() != n || g.size() != n) {
    throw std::invalid_argument("discrete_mutual_energy: size mismatch");
  }
  const auto& c = net.conductances();
  double sum = 0.0;
  for (Eigen::Index x = 0; x < n; ++x) {
    for (SparseMatrix::InnerIterator it(c, x); it; ++it) {
      const auto y = it.col();
      sum += it.value() * g(x) * (h(x) - h(y)) * (h2(x) - h2(y));
    }
  }
  return sum;
}

ConditionI check_condition_I(const ConductanceNetwork& net, const DriftSpec& drift, double diam) {
  check_sizes(net, drift);
  ConditionI r;
  for (std::size_t i = 0; i < drift.terms(); ++i) {
    for (std::size_t j = 0; j < drift.terms(); ++j) {
      const Vector g = drift.b[i].cwiseProduct(drift.b[j]);
      r.drift_energy += discrete_mutual_energy(net, drift.h[i], drift.h[j], g);
    }
  }
  r.threshold = 2.0 / diam;
  r.margin = r.threshold - r.drift_energy;
  r.satisfied = r.drift_energy < r.threshold;
  return r;
}

ConditionII check_condition_II(const ConductanceNetwork& net, const DriftSpec& drift,
                               double diam) {
  check_sizes(net, drift);
  const auto n_terms = static_cast<Eigen::Index>(drift.terms());
  DenseMatrix gram(n_terms, n_terms);
  for (Eigen::Index i = 0; i < n_terms; ++i) {
    for (Eigen::Index j = 0; j < n_terms; ++j) {
      gram(i, j) = energy(net, drift.h[static_cast<std::size_t>(i)], drift.h[static_cast<std::size_t>(j)]);
    }
  }
  ConditionII r;
  r.threshold = 1.0 / diam;
  Vector coeff(n_terms);
  for (std::size_t x = 0; x < net.size(); ++x) {
    for (Eigen::Index i = 0; i < n_terms; ++i) {
      coeff(i) = drift.b[static_cast<std::size_t>(i)](static_cast<Eigen::Index>(x));
    }
    const double e = n_terms == 0 ? 0.0 : coeff.dot(gram * coeff);
    if (e > r.max_energy) {
      r.max_energy = e;
      r.argmax = net.vertices()[x];
    }
  }
  r.margin = r.threshold - r.max_energy;
  r.satisfied = r.max_energy <= r.threshold;
  return r;
}

ConditionIII check_condition_III(const LevelComplex& complex) {
  ConditionIII r;
  r.level = complex.level;
  r.components = complex.cells.size();
  for (const auto& cell : complex.cells) {
    for (auto v : cell.boundary) {
      if (v >= complex.vertex_count) r.boundary_in_vertices = false;
    }
  }
  r.satisfied = r.boundary_in_vertices;
  r.note = "p.c.f. structure: cells F_w(X), w in W_n, are the closures of the components of "
           "X \\ V_n and their boundaries F_w(V_0) lie in V_n";
  return r;
}

double default_delta(double diam) { return 0.1 * std::sqrt(diam); }

DriftConstants select_constants(double drift_energy, double diam, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(diam > 0.0)) throw std::invalid_argument("diameter must be positive");
  DriftConstants c;
  c.delta = delta;
  const double root = std::sqrt(diam) + delta;
  c.s_lower = std::sqrt(std::max(drift_energy, 0.0) / 2.0) * root;
  if (!(c.s_lower < 1.0)) {
    throw InadmissibleDrift("no admissible s < 1 (lower bound " + std::to_string(c.s_lower) +
                            "); shrink the drift coefficients b_i");
  }
  c.s = 0.5 * (c.s_lower + 1.0);
  c.lambda = 1.0 / (4.0 * delta * root);
  c.t = c.lambda * c.s;
  return c;
}

SmallnessReport smallness_report(const ConductanceNetwork& net, const DriftSpec& drift,
                                 double diam, std::optional<double> delta) {
  SmallnessReport r;
  r.diam_proxy = diam;
  r.level = drift.level;
  r.condition_I = check_condition_I(net, drift, diam);
  r.condition_II = check_condition_II(net, drift, diam);
  if (r.condition_I.satisfied) {
    try {
      r.constants = select_constants(r.condition_I.drift_energy, diam,
                                     delta.value_or(default_delta(diam)));
    } catch (const InadmissibleDrift&) {
      // Condition (I) holds but δ is too large for some s < 1; constants stay empty.
    }
  }
  r.caveat =
      "diam_proxy is the resistance diameter over the vertices of a finite level, a lower "
      "bound for the diameter of the limit space; the drift energy is its level-n "
      "discretization";
  return r;
}

Vector random_test_function(std::size_t size, std::uint64_t seed, std::uint64_t index) {
  StreamRng rng(seed, index);
  const auto n = static_cast<Eigen::Index>(size);
  Vector f(n);
  switch (index % 3) {
    case 0:
      for (Eigen::Index k = 0; k < n; ++k) f(k) = rng.uniform(-1.0, 1.0);
      break;
    case 1: {
      const double offset = rng.uniform(-2.0, 2.0);
      const double amp = rng.uniform(0.0, 1.0);
      for (Eigen::Index k = 0; k < n; ++k) f(k) = offset + amp * rng.uniform(-1.0, 1.0);
      break;
    }
    default: {
      f.setZero();
      const auto spikes = 1 + static_cast<Eigen::Index>(rng() % 4);
      for (Eigen::Index s = 0; s < spikes; ++s) {
        f(static_cast<Eigen::Index>(rng() % size)) = rng.uniform(-1.0, 1.0);
      }
      break;
    }
  }
  return f;
}

SandwichReport verify_sandwich(const FormAssembly& forms, const DriftConstants& k,
                               const SamplingOptions& options) {
  constexpr double rel_tol = 1e-12;
  SandwichReport r;
  r.draws = options.draws;
  r.worst_lower_slack = r.worst_upper_slack = r.worst_drift_bound_slack =
      std::numeric_limits<double>::infinity();
  const auto n = static_cast<std::size_t>(forms.mu.size());
  for (std::size_t d = 0; d < options.draws; ++d) {
    const Vector f = random_test_function(n, options.seed, d);
    const double el = forms.e_lambda(f, k.lambda);
    if (!(el > 0.0)) continue;
    const double al = forms.a_lambda(f, k.lambda);
    const double lower = (al - (1.0 - k.s) * el) / el;
    const double upper = ((1.0 + k.s) * el - al) / el;
    r.worst_lower_slack = std::min(r.worst_lower_slack, lower);
    r.worst_upper_slack = std::min(r.worst_upper_slack, upper);
    r.worst_ratio_low = std::min(r.worst_ratio_low, al / el);
    r.worst_ratio_high = std::max(r.worst_ratio_high, al / el);
    const double bound = k.s * forms.e(f, f) + k.t * forms.norm2(f);
    const double slack = (bound - std::abs(forms.q(f, f))) / el;
    r.worst_drift_bound_slack = std::min(r.worst_drift_bound_slack, slack);
  }
  r.passed = r.worst_lower_slack >= -rel_tol && r.worst_upper_slack >= -rel_tol;
  r.drift_bound_passed = r.worst_drift_bound_slack >= -rel_tol;
  return r;
}

EdgeCertificate edge_certificates(const ConductanceNetwork& net, const DriftSpec& drift) {
  check_sizes(net, drift);
  EdgeCertificate r;
  const auto& c = net.conductances();
  for (Eigen::Index x = 0; x < c.outerSize(); ++x) {
    for (SparseMatrix::InnerIterator it(c, x); it; ++it) {
      const double d = drift_difference(drift, x, it.col());
      r.min_markov = std::min(r.min_markov, 1.0 + d);
      r.min_rate = std::min(r.min_rate, 1.0 + 0.5 * d);
      if (1.0 + d < 0.0) {
        r.violations.emplace_back(net.vertices()[static_cast<std::size_t>(x)],
                                  net.vertices()[static_cast<std::size_t>(it.col())]);
      }
    }
  }
  return r;
}

SDReport verify_sd_axioms(const FormAssembly& forms, const ConductanceNetwork& net,
                          const DriftSpec& drift, const DriftConstants& k, double diam,
                          const SamplingOptions& options) {
  constexpr double rel_tol = 1e-12;
  SDReport r;
  r.draws = options.draws;
  const auto n = static_cast<std::size_t>(forms.mu.size());

  double drift_size = 0.0;
  for (std::size_t i = 0; i < drift.terms(); ++i) {
    drift_size += drift.b[i].cwiseAbs().maxCoeff() * std::sqrt(energy(net, drift.h[i]));
  }
  r.sector_bound =
      (1.0 + (std::sqrt(diam) + 2.0 * k.delta) * drift_size) / (1.0 - k.s);

  r.sd1_min = std::numeric_limits<double>::infinity();
  r.sd4_min = std::numeric_limits<double>::infinity();
  for (std::size_t d = 0; d < options.draws; ++d) {
    const Vector f = random_test_function(n, options.seed, 2 * d);
    const Vector g = random_test_function(n, options.seed, 2 * d + 1);

    const double el = forms.e_lambda(f, k.lambda);
    const double af = forms.a_lambda(f, k.lambda);
    if (el > 0.0) r.sd1_min = std::min(r.sd1_min, af / el);

    const double ag = forms.a_lambda(g, k.lambda);
    if (af > 0.0 && ag > 0.0) {
      r.sector_empirical = std::max(r.sector_empirical, std::abs(forms.a(f, g)) / std::sqrt(af * ag));
    }

    StreamRng rng(options.seed ^ 0x5d4ULL, d);
    const double level = rng.uniform(0.0, 1.0);
    const Vector low = f.cwiseMin(level);
    r.sd4_min = std::min(r.sd4_min, form_edgewise(net, drift, low, f - low));
  }
  if (!std::isfinite(r.sd1_min)) r.sd1_min = 1.0;
  r.sd1 = r.sd1_min >= -rel_tol;
  r.sd3 = r.sector_empirical <= r.sector_bound * (1.0 + rel_tol);
  r.sd4 = r.sd4_min >= -kSd4Tolerance;
  r.edges = edge_certificates(net, drift);
  r.edges_ok = r.edges.violations.empty() && r.edges.min_rate >= 0.0;
  return r;
}

}  // namespace sdlab
