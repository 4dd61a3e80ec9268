#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "sdlab/config.hpp"
#include "sdlab/network_io.hpp"
#include "sdlab_cli/commands.hpp"

namespace sdlab {
namespace {

namespace fs = std::filesystem;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sdlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sdlab_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::string slurp(const fs::path& p) { return read_text_file(p); }

TEST(Cli, ParseLevels) {
  EXPECT_EQ(cli::parse_levels("1:5"), std::make_pair(1, 5));
  EXPECT_EQ(cli::parse_levels("3"), std::make_pair(3, 3));
  EXPECT_THROW(cli::parse_levels("a:b"), ConfigError);
  EXPECT_THROW(cli::parse_levels("1:"), ConfigError);
  EXPECT_THROW(cli::parse_levels(""), ConfigError);
  cli::RunConfig c;
  std::tie(c.level_min, c.level_max) = cli::parse_levels("5:1");
  EXPECT_THROW(cli::validate(c), ConfigError);
}

TEST(Cli, CheckPassesForDefaultDrift) {
  const auto dir = scratch("check");
  const auto r = run_cli({"check", "--levels", "1:3", "--draws", "100", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  const auto report = slurp(dir / "check_report.json");
  EXPECT_NE(report.find("\"passed\": true"), std::string::npos);
  EXPECT_NE(report.find("diam_proxy"), std::string::npos);
}

TEST(Cli, OversizedDriftExitsOneNamingCondition) {
  const auto dir = scratch("oversized");
  write(dir / "drift.json", R"({"terms": [{"b": 1.0, "h": {"level": 0, "values": [1, 0, 0]}}]})");
  const auto r = run_cli({"check", "--levels", "1:2", "--draws", "20", "--drift",
                          (dir / "drift.json").string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("Condition (I)"), std::string::npos) << r.err;
  // simulate only needs nonnegative rates; b = 5 makes 1 + eta negative on V_1.
  write(dir / "negative.json", R"({"terms": [{"b": 5.0, "h": {"level": 0, "values": [1, 0, 0]}}]})");
  const auto s = run_cli({"simulate", "--levels", "1", "--paths", "5", "--drift",
                          (dir / "negative.json").string(), "--out", (dir / "sim").string()});
  EXPECT_EQ(s.code, 1);
}

TEST(Cli, MalformedInputsExitTwo) {
  const auto dir = scratch("malformed");
  write(dir / "bad.json", "{ not json");
  EXPECT_EQ(run_cli({"check", "--structure", (dir / "bad.json").string(), "--out", dir.string()}).code, 2);
  EXPECT_EQ(run_cli({"check", "--drift", (dir / "bad.json").string(), "--out", dir.string()}).code, 2);
  EXPECT_EQ(run_cli({"check", "--levels", "4:2", "--out", dir.string()}).code, 2);
  EXPECT_EQ(run_cli({"nonsense"}).code, 2);
  EXPECT_EQ(run_cli({}).code, 2);
  EXPECT_EQ(run_cli({"check", "--assumption", "C"}).code, 2);
}

TEST(Cli, SimulateWithZeroPathsWritesEmptyTrajectories) {
  const auto dir = scratch("zero_paths");
  const auto r = run_cli({"simulate", "--levels", "2", "--paths", "0", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "trajectories.jsonl"));
  EXPECT_EQ(fs::file_size(dir / "trajectories.jsonl"), 0u);
}

TEST(Cli, SimulateIsByteIdenticalAcrossReruns) {
  const auto a = scratch("rerun_a");
  const auto b = scratch("rerun_b");
  for (const auto& dir : {a, b}) {
    ASSERT_EQ(run_cli({"simulate", "--levels", "2", "--paths", "200", "--t", "0.05", "--out", dir.string()}).code, 0);
  }
  for (const char* file : {"trajectories.jsonl", "trajectory_grid.csv", "summary.csv", "holding.csv", "paired.csv"}) {
    ASSERT_TRUE(fs::exists(a / file)) << file;
    EXPECT_EQ(slurp(a / file), slurp(b / file)) << file;
  }
  const auto first = slurp(a / "trajectories.jsonl");
  EXPECT_EQ(first.rfind("{\"seed\":", 0), 0u);
}

TEST(Cli, ConvergeEmitsReports) {
  const auto dir = scratch("converge");
  const auto r = run_cli({"converge", "--levels", "1:3", "--reference-level", "4", "--paths", "200",
                          "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  for (const char* file : {"ks_norm.csv", "resolvent.csv", "semigroup.csv", "path_law.csv",
                           "ks_norm.json", "resolvent.json", "semigroup.json", "path_law.json",
                           "energy_profile.json"}) {
    EXPECT_TRUE(fs::exists(dir / file)) << file;
  }
  EXPECT_EQ(slurp(dir / "resolvent.csv").rfind("label,level,error\n", 0), 0u);
  EXPECT_NE(slurp(dir / "path_law.json").find("Skorokhod"), std::string::npos);
  EXPECT_EQ(run_cli({"converge", "--levels", "1:3", "--reference-level", "2", "--out", dir.string()}).code, 2);
}

TEST(Cli, SemigroupAtTimeZeroIsIdentity) {
  const auto dir = scratch("semigroup");
  const auto r = run_cli({"semigroup", "--levels", "2", "--t", "0", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir / "semigroup_0.txt");
  const auto vf = read_vertex_function(in);
  const auto s = builtin_structure("sg");
  const FractalHierarchy h(s.structure, s.parameters, 2);
  ASSERT_EQ(vf.values.size(), static_cast<Eigen::Index>(h.vertex_count(2)));
  for (std::size_t k = 0; k < h.vertex_count(2); ++k) {
    EXPECT_DOUBLE_EQ(vf.values(static_cast<Eigen::Index>(k)), h.complex(2).coordinates[k].x);
  }
}

TEST(Cli, ResolventOfConstantsWithoutDrift) {
  const auto dir = scratch("resolvent");
  const auto r = run_cli({"resolvent", "--levels", "2", "--drift", "none", "--alpha", "5", "--out", dir.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "resolvent_0.txt"));
  EXPECT_NE(slurp(dir / "resolvent.json").find("\"alpha\": 5"), std::string::npos);
  EXPECT_EQ(run_cli({"resolvent", "--levels", "2", "--alpha", "0.5", "--out", dir.string()}).code, 2);
}

TEST(Cli, ConfigFileOverridesFlags) {
  const auto dir = scratch("config");
  write(dir / "run.json", R"({"levels": "2:2", "paths": 3, "out": ")" + (dir / "from_config").generic_string() + R"("})");
  const auto r = run_cli({"simulate", "--levels", "1:4", "--paths", "1000", "--out", (dir / "from_flags").string(),
                          "--config", (dir / "run.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir / "from_config" / "trajectories.jsonl"));
  EXPECT_FALSE(fs::exists(dir / "from_flags"));
  std::ifstream in(dir / "from_config" / "trajectories.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  EXPECT_EQ(lines, 3);
  write(dir / "unknown.json", R"({"bogus": 1})");
  EXPECT_EQ(run_cli({"check", "--config", (dir / "unknown.json").string()}).code, 2);
}

TEST(Cli, StructureFromJsonWithoutEmbedding) {
  const auto dir = scratch("interval");
  const auto structure = fs::path(SDLAB_SOURCE_DIR) / "docs" / "examples" / "interval.json";
  const auto r = run_cli({"converge", "--structure", structure.string(), "--drift", "none", "--levels", "1:3",
                          "--reference-level", "5", "--paths", "100", "--out", dir.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(slurp(dir / "path_law.csv").find("harmonic_0"), std::string::npos);
}

}  // namespace
}  // namespace sdlab
