#include "sdlab/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sdlab/random.hpp"

namespace sdlab {

GeneratorMatrix build_generator(const ConductanceNetwork& net, const DriftSpec& drift,
                                const Vector& mu) {
  const auto n = static_cast<Eigen::Index>(net.size());
  if (mu.size() != n) throw std::invalid_argument("measure size does not match the network");
  if (!(mu.minCoeff() > 0.0)) throw std::invalid_argument("measure must be strictly positive");
  for (std::size_t i = 0; i < drift.terms(); ++i) {
    if (drift.b[i].size() != n || drift.h[i].size() != n) {
      throw std::invalid_argument("drift level does not match the network");
    }
  }
  const auto& c = net.conductances();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(c.nonZeros() + n));
  for (Eigen::Index x = 0; x < n; ++x) {
    double out = 0.0;
    for (SparseMatrix::InnerIterator it(c, x); it; ++it) {
      const double rate = it.value() * (1.0 + eta(drift, static_cast<std::size_t>(x),
                                                   static_cast<std::size_t>(it.col()))) / mu(x);
      out += rate;
      t.emplace_back(x, it.col(), rate);
    }
    t.emplace_back(x, x, -out);
  }
  GeneratorMatrix g;
  g.rates.resize(n, n);
  g.rates.setFromTriplets(t.begin(), t.end());
  g.mu = mu;
  return g;
}

RateReport validate_rates(const GeneratorMatrix& gen) {
  RateReport r;
  for (Eigen::Index x = 0; x < gen.rates.outerSize(); ++x) {
    for (SparseMatrix::InnerIterator it(gen.rates, x); it; ++it) {
      if (it.col() != x && it.value() < 0.0) {
        r.negative.push_back({static_cast<std::size_t>(x), static_cast<std::size_t>(it.col()),
                              it.value()});
      }
    }
  }
  return r;
}

JumpParameters jump_parameters(const GeneratorMatrix& gen) {
  const auto report = validate_rates(gen);
  if (!report.valid()) {
    const auto& v = report.negative.front();
    throw InvalidRates("negative rate " + std::to_string(v.rate) + " from " +
                       std::to_string(v.from) + " to " + std::to_string(v.to));
  }
  const auto n = gen.rates.rows();
  JumpParameters p;
  p.holding_rate = -gen.rates.diagonal();
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index x = 0; x < n; ++x) {
    const double q = p.holding_rate(x);
    if (!(q > 0.0)) throw InvalidRates("vertex " + std::to_string(x) + " is absorbing");
    for (SparseMatrix::InnerIterator it(gen.rates, x); it; ++it) {
      if (it.col() != x && it.value() > 0.0) t.emplace_back(x, it.col(), it.value() / q);
    }
  }
  p.jump.resize(n, n);
  p.jump.setFromTriplets(t.begin(), t.end());
  return p;
}

double detailed_balance_violation(const GeneratorMatrix& gen) {
  double worst = 0.0;
  for (Eigen::Index x = 0; x < gen.rates.outerSize(); ++x) {
    for (SparseMatrix::InnerIterator it(gen.rates, x); it; ++it) {
      const auto y = it.col();
      if (y == x) continue;
      const double forward = gen.mu(x) * it.value();
      const double backward = gen.mu(y) * gen.rates.coeff(y, x);
      worst = std::max(worst, std::abs(forward - backward));
    }
  }
  return worst;
}

std::size_t Trajectory::state_at(double t) const {
  if (t < 0.0 || t > horizon) throw std::invalid_argument("time outside the trajectory horizon");
  const auto it = std::upper_bound(jump_times.begin(), jump_times.end(), t);
  return states[static_cast<std::size_t>(it - jump_times.begin()) - 1];
}

void check_distribution(std::span<const double> initial, std::size_t size) {
  if (initial.size() != size) throw std::invalid_argument("initial law has the wrong size");
  double total = 0.0;
  for (double p : initial) {
    if (!(p >= 0.0)) throw std::invalid_argument("initial law has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("initial law must sum to 1");
}

ChainSampler::ChainSampler(const GeneratorMatrix& gen) {
  const auto params = jump_parameters(gen);
  const auto n = static_cast<std::size_t>(gen.rates.rows());
  rate_.resize(n);
  row_begin_.assign(n + 1, 0);
  for (std::size_t x = 0; x < n; ++x) {
    rate_[x] = params.holding_rate(static_cast<Eigen::Index>(x));
    double acc = 0.0;
    for (SparseMatrix::InnerIterator it(params.jump, static_cast<Eigen::Index>(x)); it; ++it) {
      acc += it.value();
      target_.push_back(static_cast<std::size_t>(it.col()));
      cumulative_.push_back(acc);
    }
    if (!cumulative_.empty() && row_begin_[x] < cumulative_.size()) cumulative_.back() = 1.0;
    row_begin_[x + 1] = target_.size();
  }
}

std::size_t ChainSampler::draw(std::span<const double> cumulative, std::size_t begin,
                               std::size_t end, double u) const {
  const auto first = cumulative.begin() + static_cast<std::ptrdiff_t>(begin);
  const auto last = cumulative.begin() + static_cast<std::ptrdiff_t>(end);
  auto it = std::upper_bound(first, last, u);
  if (it == last) --it;
  return static_cast<std::size_t>(it - cumulative.begin());
}

Trajectory ChainSampler::simulate(std::span<const double> initial, double horizon,
                                  std::uint64_t seed, std::uint64_t index) const {
  check_distribution(initial, size());
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be non-negative");
  StreamRng rng(seed, index);
  std::vector<double> cum_initial(initial.size());
  std::partial_sum(initial.begin(), initial.end(), cum_initial.begin());
  Trajectory path;
  path.horizon = horizon;
  path.seed = seed;
  path.index = index;
  std::size_t x = draw(cum_initial, 0, cum_initial.size(), rng.uniform() * cum_initial.back());
  double t = 0.0;
  path.jump_times.push_back(0.0);
  path.states.push_back(x);
  for (;;) {
    t += rng.exponential(rate_[x]);
    if (t > horizon) break;
    x = target_[draw(cumulative_, row_begin_[x], row_begin_[x + 1], rng.uniform())];
    path.jump_times.push_back(t);
    path.states.push_back(x);
  }
  return path;
}

std::size_t ChainSampler::sample_state(std::span<const double> initial, double horizon,
                                       std::uint64_t seed, std::uint64_t index) const {
  check_distribution(initial, size());
  if (!(horizon >= 0.0)) throw std::invalid_argument("horizon must be non-negative");
  StreamRng rng(seed, index);
  std::vector<double> cum_initial(initial.size());
  std::partial_sum(initial.begin(), initial.end(), cum_initial.begin());
  std::size_t x = draw(cum_initial, 0, cum_initial.size(), rng.uniform() * cum_initial.back());
  double t = 0.0;
  for (;;) {
    t += rng.exponential(rate_[x]);
    if (t > horizon) return x;
    x = target_[draw(cumulative_, row_begin_[x], row_begin_[x + 1], rng.uniform())];
  }
}

Trajectory simulate(const GeneratorMatrix& gen, std::span<const double> initial, double horizon,
                    std::uint64_t seed, std::uint64_t index) {
  return ChainSampler(gen).simulate(initial, horizon, seed, index);
}

Vector empirical_law(std::span<const Trajectory> paths, double t, std::size_t size) {
  Vector law = Vector::Zero(static_cast<Eigen::Index>(size));
  if (paths.empty()) return law;
  for (const auto& p : paths) {
    if (t > p.horizon) throw std::invalid_argument("time beyond a trajectory horizon");
    law(static_cast<Eigen::Index>(p.state_at(t))) += 1.0;
  }
  return law / static_cast<double>(paths.size());
}

std::vector<double> point_mass(std::size_t size, std::size_t x) {
  if (x >= size) throw std::out_of_range("point mass outside the state space");
  std::vector<double> p(size, 0.0);
  p[x] = 1.0;
  return p;
}

}  // namespace sdlab
