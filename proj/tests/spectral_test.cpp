#include <gtest/gtest.h>

#include <cmath>

#include <Eigen/Dense>

#include "sdlab/spectral.hpp"
#include "support.hpp"

namespace sdlab {
namespace {

using testing::beta_max;
using testing::gasket;
using testing::random_vector;
using testing::single_term_drift;

GeneratorMatrix gasket_generator(int n, double beta) {
  const auto& h = gasket();
  return build_generator(h.network(n), single_term_drift(beta).at(h, n), h.measure(n));
}

// Oracle: exp(tL) by scaling and squaring of a Taylor series, dense.
DenseMatrix expm_oracle(const DenseMatrix& l, double t) {
  const DenseMatrix a = t * l;
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const DenseMatrix s = a / std::pow(2.0, squarings);
  DenseMatrix term = DenseMatrix::Identity(a.rows(), a.cols());
  DenseMatrix sum = term;
  for (int k = 1; k <= 20; ++k) {
    term = term * s / k;
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

// Oracle for the symmetric case: D^{1/2} L D^{-1/2} is symmetric.
DenseMatrix expm_symmetric_oracle(const GeneratorMatrix& gen, double t) {
  const Vector root = gen.mu.cwiseSqrt();
  const DenseMatrix s = root.asDiagonal() * DenseMatrix(gen.rates) * root.cwiseInverse().asDiagonal();
  const Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (s + s.transpose()));
  const Vector e = (t * es.eigenvalues()).array().exp();
  const DenseMatrix sym = es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose();
  return root.cwiseInverse().asDiagonal() * sym * root.asDiagonal();
}

TEST(Resolvent, ConstantsMapToInverseAlpha) {
  for (int n = 0; n <= 4; ++n) {
    const auto gen = gasket_generator(n, beta_max() / 2);
    const Vector one = Vector::Ones(static_cast<Eigen::Index>(gen.size()));
    for (double alpha : {0.5, 4.0, 100.0}) {
      const auto r = resolvent(gen, alpha, one);
      EXPECT_LE((r.values.array() - 1.0 / alpha).abs().maxCoeff(), 1e-10);
      EXPECT_LE(r.residual, 1e-12);
    }
  }
}

TEST(Resolvent, MatchesDenseInverseOracle) {
  for (int n = 1; n <= 3; ++n) {
    const auto gen = gasket_generator(n, 0.3);
    const auto size = static_cast<Eigen::Index>(gen.size());
    const double alpha = 2.5;
    const DenseMatrix m = alpha * DenseMatrix::Identity(size, size) - DenseMatrix(gen.rates);
    const Vector f = random_vector(gen.size(), 3, static_cast<std::uint64_t>(n));
    const Vector oracle = m.householderQr().solve(f);
    EXPECT_LE((resolvent(gen, alpha, f).values - oracle).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Resolvent, PropertyResolventIdentity) {
  const auto gen = gasket_generator(3, beta_max() / 2);
  for (std::uint64_t k = 0; k < 10; ++k) {
    const double a = 1.0 + static_cast<double>(k);
    const double b = 3.5 + 2.0 * static_cast<double>(k);
    const Vector f = random_vector(gen.size(), 17, k);
    const ResolventSolver ga(gen, a);
    const ResolventSolver gb(gen, b);
    const Vector lhs = ga.solve(f) - gb.solve(f);
    const Vector rhs = (b - a) * ga.solve(gb.solve(f));
    EXPECT_LE((lhs - rhs).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Resolvent, NormBoundAndLambdaGuard) {
  const auto& h = gasket();
  const double diam = testing::kGasketDiam;
  const auto d = single_term_drift(beta_max() / 2).at(h, 3);
  const auto rep = smallness_report(h.network(3), d, diam);
  ASSERT_TRUE(rep.constants.has_value());
  const double lambda = rep.constants->lambda;
  const auto gen = build_generator(h.network(3), d, h.measure(3));
  for (std::uint64_t k = 0; k < 20; ++k) {
    const Vector f = random_vector(gen.size(), 23, k);
    const auto r = resolvent(gen, lambda + 0.5, f, lambda);
    ASSERT_TRUE(r.norm_bound.has_value());
    EXPECT_LE(r.norm_ratio, *r.norm_bound + 1e-12);
  }
  EXPECT_THROW(resolvent(gen, lambda, Vector::Ones(15), lambda), std::invalid_argument);
  EXPECT_THROW(resolvent(gen, 1.0, Vector::Ones(3)), std::invalid_argument);
}

TEST(Resolvent, DenseAndSparseAgree) {
  // Level 5 has 366 vertices (dense); level 6 has 1095 (sparse). Compare on
  // level 6 against an explicit dense solve.
  const auto& h = testing::gasket(6);
  const auto d = single_term_drift(beta_max() / 2).at(h, 6);
  const auto gen = build_generator(h.network(6), d, h.measure(6));
  const auto size = static_cast<Eigen::Index>(gen.size());
  ASSERT_GT(size, 500);
  const Vector f = random_vector(gen.size(), 4, 4);
  const DenseMatrix m = 3.0 * DenseMatrix::Identity(size, size) - DenseMatrix(gen.rates);
  const Vector oracle = m.partialPivLu().solve(f);
  EXPECT_LE((resolvent(gen, 3.0, f).values - oracle).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Semigroup, MatchesExpmOracles) {
  for (int n = 0; n <= 3; ++n) {
    for (double beta : {0.0, 0.3}) {
      const auto gen = gasket_generator(n, beta);
      const Vector f = random_vector(gen.size(), 8, static_cast<std::uint64_t>(n));
      for (double t : {0.001, 0.01, 0.1}) {
        const auto got = semigroup_apply(gen, t, f);
        const Vector oracle = expm_oracle(DenseMatrix(gen.rates), t) * f;
        EXPECT_LE((got.values - oracle).cwiseAbs().maxCoeff(), 1e-9) << n << " " << beta << " " << t;
        EXPECT_LE(got.tail_bound, 1e-12);
        const auto tr = semigroup_apply(gen, t, f, {1e-12, true});
        const Vector oracle_t = expm_oracle(DenseMatrix(gen.rates).transpose(), t) * f;
        EXPECT_LE((tr.values - oracle_t).cwiseAbs().maxCoeff(), 1e-9);
        if (beta == 0.0) {
          EXPECT_LE((got.values - expm_symmetric_oracle(gen, t) * f).cwiseAbs().maxCoeff(), 1e-9);
        }
      }
    }
  }
}

TEST(Semigroup, ConservesConstantsAndStartsAtIdentity) {
  for (int n = 0; n <= 4; ++n) {
    const auto gen = gasket_generator(n, beta_max() / 2);
    const Vector one = Vector::Ones(static_cast<Eigen::Index>(gen.size()));
    EXPECT_LE((semigroup_apply(gen, 0.1, one).values.array() - 1.0).abs().maxCoeff(), 1e-10);
    const Vector f = random_vector(gen.size(), 2, 2);
    const auto zero = semigroup_apply(gen, 0.0, f);
    EXPECT_EQ(zero.values, f);
    EXPECT_EQ(zero.truncation_order, 0u);
  }
}

TEST(Semigroup, PropertySemigroupLawAndSupContraction) {
  const auto gen = gasket_generator(3, beta_max() / 2);
  for (std::uint64_t k = 0; k < 10; ++k) {
    const double s = 0.002 * static_cast<double>(k + 1);
    const double t = 0.003 * static_cast<double>(k + 2);
    const Vector f = random_vector(gen.size(), 31, k);
    const Vector split = semigroup_apply(gen, s, semigroup_apply(gen, t, f).values).values;
    const Vector joint = semigroup_apply(gen, s + t, f).values;
    EXPECT_LE((split - joint).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE(joint.cwiseAbs().maxCoeff(), f.cwiseAbs().maxCoeff() + 1e-10);
  }
}

TEST(Semigroup, Errors) {
  const auto gen = gasket_generator(1, 0.0);
  EXPECT_THROW(semigroup_apply(gen, -1.0, Vector::Ones(6)), std::invalid_argument);
  EXPECT_THROW(semigroup_apply(gen, 1.0, Vector::Ones(3)), std::invalid_argument);
  EXPECT_THROW(semigroup_apply(gasket_generator(0, 3.0), 0.1, Vector::Ones(3)), InvalidRates);
}

TEST(MarkovCheck, PassesForAdmissibleDrift) {
  for (int n = 1; n <= 3; ++n) {
    const auto r = markov_check(gasket_generator(n, beta_max() / 2), 0.05, 50, 3);
    EXPECT_TRUE(r.passed);
    EXPECT_EQ(r.trials, 50u);
    EXPECT_GE(r.min_value, -kMarkovTolerance);
    EXPECT_LE(r.max_value, 1.0 + kMarkovTolerance);
  }
}

TEST(GrowthCheck, SymmetricChainIsContraction) {
  const auto gen = gasket_generator(3, 0.0);
  const std::vector<double> grid{0.0, 0.01, 0.1};
  const auto r = contraction_growth_check(gen, 0.0, grid);
  EXPECT_TRUE(r.passed);
  ASSERT_EQ(r.points.size(), 3u);
  EXPECT_NEAR(r.points[0].norm_estimate, 1.0, 1e-8);
  for (const auto& p : r.points) EXPECT_LE(p.norm_estimate, 1.0 + 1e-8);
}

TEST(GrowthCheck, DriftStaysWithinExponentialBound) {
  const auto& h = gasket();
  const auto d = single_term_drift(beta_max() / 2).at(h, 3);
  const auto rep = smallness_report(h.network(3), d, testing::kGasketDiam);
  ASSERT_TRUE(rep.constants.has_value());
  const auto gen = build_generator(h.network(3), d, h.measure(3));
  const std::vector<double> grid{0.01, 0.1, 0.5};
  const auto r = contraction_growth_check(gen, rep.constants->lambda, grid);
  EXPECT_TRUE(r.passed);
  for (const auto& p : r.points) EXPECT_NEAR(p.bound, std::exp(rep.constants->lambda * p.t), 1e-9 * p.bound);
}

TEST(MuNorm, Basic) {
  Vector f(2);
  f << 3, 4;
  Vector mu(2);
  mu << 1, 1;
  EXPECT_DOUBLE_EQ(mu_norm(f, mu), 5.0);
}

}  // namespace
}  // namespace sdlab
