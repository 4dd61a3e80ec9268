#include <gtest/gtest.h>

#include <cmath>

#include "sdlab/hierarchy.hpp"
#include "support.hpp"

namespace sdlab {
namespace {

TEST(Hierarchy, GasketGoldenValues) {
  const auto& h = testing::gasket(5);
  EXPECT_EQ(h.max_level(), 5);
  for (int n = 0; n <= 5; ++n) {
    EXPECT_EQ(h.vertex_count(n), static_cast<std::size_t>(3 * (std::pow(3, n) + 1) / 2));
    EXPECT_EQ(h.network(n).size(), h.vertex_count(n));
    EXPECT_NEAR(h.measure(n).sum(), 1.0, 1e-12);
    for (const auto& e : h.network(n).edges()) {
      EXPECT_NEAR(e.conductance, std::pow(5.0 / 3.0, n), 1e-12 * std::pow(5.0 / 3.0, n));
    }
  }
  EXPECT_NEAR(h.compatibility_defect(), 0.0, 1e-12);
}

TEST(Hierarchy, DetectsIncompatibleScaling) {
  auto params = sierpinski_parameters();
  params.scaling = {0.5, 0.5, 0.5};
  const FractalHierarchy h(build_sierpinski_structure(), params, 1);
  // Level-1 conductance 2 traces to 3/5 * 2 = 6/5 per edge against 1.
  EXPECT_NEAR(h.compatibility_defect(), 0.2, 1e-12);
}

TEST(Hierarchy, RejectsMismatchedParameters) {
  auto params = sierpinski_parameters();
  params.weights = {0.5, 0.5};
  EXPECT_THROW(FractalHierarchy(build_sierpinski_structure(), params, 1), std::invalid_argument);
  auto bad_sum = sierpinski_parameters();
  bad_sum.weights = {0.2, 0.2, 0.2};
  EXPECT_THROW(FractalHierarchy(build_sierpinski_structure(), bad_sum, 1), std::invalid_argument);
  EXPECT_THROW(FractalHierarchy(build_sierpinski_structure(), sierpinski_parameters(), -1),
               std::invalid_argument);
}

TEST(RestrictTo, PrefixAndErrors) {
  Vector f(4);
  f << 1, 2, 3, 4;
  EXPECT_EQ(restrict_to(f, 2), (Vector(2) << 1, 2).finished());
  EXPECT_EQ(restrict_to(f, 4), f);
  EXPECT_THROW(restrict_to(f, 5), std::invalid_argument);
}

TEST(MaxConductanceGap, RequiresSameVertices) {
  const auto a = testing::random_network(4, 1);
  const auto b = testing::random_network(5, 1);
  EXPECT_THROW(max_conductance_gap(a, b), std::invalid_argument);
  EXPECT_EQ(max_conductance_gap(a, a), 0.0);
}

}  // namespace
}  // namespace sdlab
