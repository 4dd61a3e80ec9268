#include "sdlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "sdlab/random.hpp"

namespace sdlab {

namespace {

constexpr Eigen::Index kDenseLimit = 500;

using ColMajor = Eigen::SparseMatrix<double, Eigen::ColMajor>;

}  // namespace

struct ResolventSolver::Impl {
  std::variant<Eigen::PartialPivLU<DenseMatrix>, std::unique_ptr<Eigen::SparseLU<ColMajor>>> lu;
};

ResolventSolver::ResolventSolver(const GeneratorMatrix& gen, double alpha)
    : alpha_(alpha), impl_(std::make_unique<Impl>()) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("alpha must be finite");
  const auto n = gen.rates.rows();
  ColMajor m = (-gen.rates).eval();
  for (Eigen::Index k = 0; k < n; ++k) m.coeffRef(k, k) += alpha;
  if (n < kDenseLimit) {
    Eigen::PartialPivLU<DenseMatrix> lu{DenseMatrix(m)};
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) throw SingularSystem("alpha - L is numerically singular");
    impl_->lu = std::move(lu);
  } else {
    auto lu = std::make_unique<Eigen::SparseLU<ColMajor>>();
    m.makeCompressed();
    lu->compute(m);
    if (lu->info() != Eigen::Success) throw SingularSystem("alpha - L is singular");
    impl_->lu = std::move(lu);
  }
}

ResolventSolver::~ResolventSolver() = default;
ResolventSolver::ResolventSolver(ResolventSolver&&) noexcept = default;
ResolventSolver& ResolventSolver::operator=(ResolventSolver&&) noexcept = default;

Vector ResolventSolver::solve(const Vector& f) const {
  return std::visit(
      [&](const auto& lu) -> Vector {
        if constexpr (std::is_same_v<std::decay_t<decltype(lu)>, Eigen::PartialPivLU<DenseMatrix>>) {
          return lu.solve(f);
        } else {
          return lu->solve(f);
        }
      },
      impl_->lu);
}

double mu_norm(const Vector& f, const Vector& mu) {
  return std::sqrt(f.cwiseProduct(f).dot(mu));
}

ResolventSolve resolvent(const GeneratorMatrix& gen, double alpha, const Vector& f,
                         std::optional<double> lambda) {
  if (f.size() != gen.rates.rows()) throw std::invalid_argument("f has the wrong size");
  if (lambda && !(alpha > *lambda)) {
    throw std::invalid_argument("alpha must exceed lambda");
  }
  ResolventSolve r;
  r.alpha = alpha;
  r.values = ResolventSolver(gen, alpha).solve(f);
  const Vector defect = alpha * r.values - gen.rates * r.values - f;
  r.residual = defect.cwiseProduct(gen.mu).cwiseAbs().maxCoeff();
  const double fn = mu_norm(f, gen.mu);
  r.norm_ratio = fn > 0.0 ? mu_norm(r.values, gen.mu) / fn : 0.0;
  if (lambda) r.norm_bound = 1.0 / (alpha - *lambda);
  return r;
}

SemigroupApply semigroup_apply(const GeneratorMatrix& gen, double t, const Vector& f,
                               const SemigroupOptions& options) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("t must be non-negative");
  if (f.size() != gen.rates.rows()) throw std::invalid_argument("f has the wrong size");
  if (!(options.tail > 0.0)) throw std::invalid_argument("tail must be positive");
  const auto report = validate_rates(gen);
  if (!report.valid()) throw InvalidRates("semigroup requires nonnegative off-diagonal rates");

  SemigroupApply out;
  out.t = t;
  const double rate = gen.rates.rows() == 0 ? 0.0 : (-gen.rates.diagonal()).maxCoeff();
  out.rate = rate;
  const double m = rate * t;
  if (m == 0.0) {
    out.values = f;
    return out;
  }

  SparseMatrix p = gen.rates / rate;
  for (Eigen::Index k = 0; k < p.rows(); ++k) p.coeffRef(k, k) += 1.0;
  if (options.transpose) p = SparseMatrix(p.transpose());

  // Poisson(m) weights in log space; once k + 1 > m the tail after k is at
  // most w_k · m/(k+1-m).
  const double log_m = std::log(m);
  const auto cap = static_cast<std::size_t>(std::ceil(m + 50.0 * std::sqrt(m) + 100.0));
  Vector power = f;
  Vector acc = Vector::Zero(f.size());
  double total = 0.0;
  std::size_t k = 0;
  for (;; ++k) {
    const double kd = static_cast<double>(k);
    const double w = std::exp(-m + kd * log_m - std::lgamma(kd + 1.0));
    acc += w * power;
    total += w;
    if (kd + 1.0 > m) {
      const double tail = w * m / (kd + 1.0 - m);
      if (tail < options.tail) {
        out.tail_bound = tail;
        break;
      }
    }
    if (k >= cap) {
      out.tail_bound = std::max(0.0, 1.0 - total);
      break;
    }
    power = p * power;
  }
  out.truncation_order = k;
  out.values = acc / total;
  return out;
}

MarkovCheck markov_check(const GeneratorMatrix& gen, double t, std::size_t trials,
                         std::uint64_t seed) {
  MarkovCheck r;
  r.trials = trials;
  r.min_value = r.min_positive = 1.0;
  r.max_value = 0.0;
  const auto n = gen.rates.rows();
  for (std::size_t k = 0; k < trials; ++k) {
    StreamRng rng(seed, k);
    Vector f(n);
    if (k % 2 == 0) {
      for (Eigen::Index x = 0; x < n; ++x) f(x) = rng.uniform();
    } else {
      f.setZero();
      f(static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(n))) = 1.0;
    }
    const Vector u = semigroup_apply(gen, t, f).values;
    r.min_value = std::min(r.min_value, u.minCoeff());
    r.max_value = std::max(r.max_value, u.maxCoeff());

    Vector g(n);
    for (Eigen::Index x = 0; x < n; ++x) g(x) = 10.0 * rng.uniform();
    const Vector v = semigroup_apply(gen, t, g).values;
    r.min_positive = std::min(r.min_positive, v.minCoeff());
  }
  r.passed = r.min_value >= -kMarkovTolerance && r.max_value <= 1.0 + kMarkovTolerance &&
             r.min_positive >= -kMarkovTolerance;
  return r;
}

GrowthCheck contraction_growth_check(const GeneratorMatrix& gen, double lambda,
                                     std::span<const double> t_grid, std::uint64_t seed) {
  constexpr int kIterations = 50;
  GrowthCheck r;
  r.lambda = lambda;
  const auto n = gen.rates.rows();
  const Vector& mu = gen.mu;
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    const double t = t_grid[j];
    StreamRng rng(seed, j);
    Vector v(n);
    for (Eigen::Index x = 0; x < n; ++x) v(x) = rng.uniform(-1.0, 1.0);
    v /= mu_norm(v, mu);
    double estimate = 0.0;
    for (int it = 0; it < kIterations; ++it) {
      const Vector tv = semigroup_apply(gen, t, v).values;
      estimate = std::max(estimate, mu_norm(tv, mu));
      // T^* w = D^{-1} T^T D w.
      Vector w = semigroup_apply(gen, t, tv.cwiseProduct(mu), {.tail = 1e-12, .transpose = true})
                     .values.cwiseQuotient(mu);
      const double wn = mu_norm(w, mu);
      if (!(wn > 0.0)) break;
      v = w / wn;
    }
    GrowthPoint p;
    p.t = t;
    p.norm_estimate = estimate;
    p.bound = std::exp(lambda * t);
    p.passed = estimate <= p.bound * (1.0 + 1e-8);
    r.passed = r.passed && p.passed;
    r.points.push_back(p);
  }
  return r;
}

}  // namespace sdlab
