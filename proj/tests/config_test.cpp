#include <gtest/gtest.h>

#include <filesystem>
#include <variant>

#include "sdlab/config.hpp"
#include "support.hpp"

namespace sdlab {
namespace {

const std::filesystem::path kExamples = std::filesystem::path(SDLAB_SOURCE_DIR) / "docs" / "examples";

TEST(StructureConfig, GasketJsonMatchesBuiltin) {
  const auto cfg = load_structure_config(kExamples / "sg.json");
  EXPECT_EQ(cfg.name, "sg-from-json");
  EXPECT_TRUE(cfg.assumed_dense);
  const FractalHierarchy from_json(cfg.structure, cfg.parameters, 4);
  const auto& builtin = testing::gasket(5);
  for (int n = 0; n <= 4; ++n) {
    ASSERT_EQ(from_json.vertex_count(n), builtin.vertex_count(n));
    EXPECT_LE(max_conductance_gap(from_json.network(n), builtin.network(n)), 1e-12) << "level " << n;
    EXPECT_LE((from_json.measure(n) - builtin.measure(n)).cwiseAbs().maxCoeff(), 1e-15);
    for (std::size_t k = 0; k < from_json.vertex_count(n); ++k) {
      EXPECT_NEAR(from_json.complex(n).coordinates[k].x, builtin.complex(n).coordinates[k].x, 1e-12);
      EXPECT_NEAR(from_json.complex(n).coordinates[k].y, builtin.complex(n).coordinates[k].y, 1e-12);
    }
  }
}

TEST(StructureConfig, IntervalWithoutEmbedding) {
  const auto cfg = load_structure_config(kExamples / "interval.json");
  const FractalHierarchy h(cfg.structure, cfg.parameters, 4);
  EXPECT_EQ(h.vertex_count(4), 17u);
  EXPECT_FALSE(h.complex(4).has_coordinates());
  EXPECT_NEAR(h.compatibility_defect(), 0.0, 1e-12);
  // Unit interval: R(0, 1) = 1 at every level.
  EXPECT_NEAR(effective_resistance(h.network(4), 0, 1), 1.0, 1e-12);
}

TEST(StructureConfig, BuiltinAndResolve) {
  EXPECT_EQ(builtin_structure("sg").name, "sg");
  EXPECT_THROW(builtin_structure("carpet"), ConfigError);
  EXPECT_EQ(resolve_structure("sg").name, "sg");
  EXPECT_EQ(resolve_structure((kExamples / "interval.json").string()).name, "interval");
  EXPECT_THROW(resolve_structure("/nonexistent/structure.json"), ConfigError);
}

TEST(StructureConfig, MalformedInputs) {
  const char* cases[] = {
      "not json",
      "[]",
      R"({"boundary_size": 2})",
      R"({"symbol_count": 2, "boundary_size": 2, "identifications": [[[0,1],[1,0]]], "base_conductances": [[0,0,1]],
          "resistance_scaling": [0.5, 0.5], "measure_weights": [0.5, 0.5]})",
      R"({"symbol_count": 2, "boundary_size": 2, "identifications": [[[0,1],[1,0]]], "base_conductances": [[0,1,-1]],
          "resistance_scaling": [0.5, 0.5], "measure_weights": [0.5, 0.5]})",
      R"({"symbol_count": 2, "boundary_size": 2, "identifications": [[[0,1],[1,0]]], "base_conductances": [[0,1,1]],
          "resistance_scaling": [1.5, 0.5], "measure_weights": [0.5, 0.5]})",
      R"({"symbol_count": 2, "boundary_size": 2, "identifications": [[[0,1],[1,0]]], "base_conductances": [[0,1,1]],
          "resistance_scaling": [0.5, 0.5], "measure_weights": [0.7, 0.5]})",
      R"({"symbol_count": 2, "boundary_size": 2, "identifications": [[[0,1],[1,0]]], "base_conductances": [[0,1,1]],
          "resistance_scaling": [0.5, 0.5], "measure_weights": [0.5]})",
      R"({"symbol_count": 2, "boundary_size": 2, "identifications": [[[0,5],[1,0]]], "base_conductances": [[0,1,1]],
          "resistance_scaling": [0.5, 0.5], "measure_weights": [0.5, 0.5]})",
      R"({"symbol_count": 3, "boundary_size": 2, "identifications": [[[0,1],[1,0]]], "base_conductances": [[0,1,1]],
          "resistance_scaling": [0.5, 0.5, 0.5], "measure_weights": [0.3, 0.3, 0.4]})",
      R"({"symbol_count": 2, "boundary_size": 2, "identifications": [[[0,1],[1,0]]], "base_conductances": [[0,1,"x"]],
          "resistance_scaling": [0.5, 0.5], "measure_weights": [0.5, 0.5]})",
  };
  for (const char* text : cases) EXPECT_THROW(parse_structure_config(text), ConfigError) << text;
}

TEST(DriftConfig, ParsesAllCoefficientKinds) {
  const auto cfg = load_drift_config(kExamples / "drift.json");
  ASSERT_TRUE(cfg.delta.has_value());
  EXPECT_DOUBLE_EQ(*cfg.delta, 0.08);
  ASSERT_EQ(cfg.model.terms().size(), 2u);
  EXPECT_TRUE(std::holds_alternative<ConstantCoefficient>(cfg.model.terms()[0].b));
  EXPECT_TRUE(std::holds_alternative<AffineCoefficient>(cfg.model.terms()[1].b));
  const auto parsed = parse_drift_config(
      R"({"terms": [{"b": {"constant": 0.2}, "h": {"level": 0, "values": [1, 0, 0]}},
                    {"b": {"samples": {"level": 1, "values": [1, 2, 3, 4, 5, 6]}}, "h": {"level": 0, "values": [0, 1, 0]}}]})");
  EXPECT_FALSE(parsed.delta.has_value());
  EXPECT_DOUBLE_EQ(std::get<ConstantCoefficient>(parsed.model.terms()[0].b).value, 0.2);
  const auto& s = std::get<SampledCoefficient>(parsed.model.terms()[1].b);
  EXPECT_EQ(s.level, 1);
  EXPECT_EQ(s.values.size(), 6u);
  const auto d = parsed.model.at(testing::gasket(5), 1);
  EXPECT_DOUBLE_EQ(d.b[1](5), 6.0);
}

TEST(DriftConfig, MalformedInputs) {
  for (const char* text : {"{", "[]", R"({})", R"({"terms": [{"b": 0.1}]})",
                           R"({"terms": [{"b": "big", "h": {"level": 0, "values": [1, 0, 0]}}]})",
                           R"({"delta": -1, "terms": []})",
                           R"({"terms": [{"b": 0.1, "h": {"level": 0.5, "values": [1, 0, 0]}}]})",
                           R"({"terms": [{"b": {"unknown": 1}, "h": {"level": 0, "values": [1, 0, 0]}}]})"}) {
    EXPECT_THROW(parse_drift_config(text), ConfigError) << text;
  }
  EXPECT_THROW(load_drift_config("/nonexistent/drift.json"), ConfigError);
}

TEST(DriftConfig, EmptyTermsIsZeroDrift) {
  EXPECT_TRUE(parse_drift_config(R"({"terms": []})").model.empty());
}

}  // namespace
}  // namespace sdlab
