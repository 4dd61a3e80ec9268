#include <gtest/gtest.h>

#include <sstream>

#include "sdlab/network_io.hpp"
#include "support.hpp"

namespace sdlab {
namespace {

TEST(NetworkIo, RoundTripIsBitExact) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto net = testing::random_network(9, seed);
    std::stringstream buf;
    write_network(buf, net);
    const auto back = read_network(buf);
    ASSERT_EQ(back.vertices(), net.vertices());
    for (VertexId x = 0; x < 9; ++x) {
      for (VertexId y = 0; y < 9; ++y) EXPECT_EQ(back.conductance(x, y), net.conductance(x, y));
    }
  }
}

TEST(NetworkIo, GasketRoundTrip) {
  const auto& net = testing::gasket(5).network(3);
  std::stringstream buf;
  write_network(buf, net);
  EXPECT_EQ(max_conductance_gap(read_network(buf), net), 0.0);
}

TEST(NetworkIo, VerticesDefaultToEdgeEndpoints) {
  std::istringstream in("# comment\n\n5 2 1.5\n2 9 0.25\n");
  const auto net = read_network(in);
  EXPECT_EQ(net.vertices(), (std::vector<VertexId>{2, 5, 9}));
  EXPECT_DOUBLE_EQ(net.conductance(5, 2), 1.5);
}

TEST(NetworkIo, MalformedNetworkThrows) {
  for (const char* text : {"0 1\n", "0 1 abc\n", "0 1 -1\n", "# vertices 0 1\n0 2 1\n", "0 0 1\n",
                           "0 1 1 extra\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_network(in), ConfigError) << text;
  }
}

TEST(VertexFunctionIo, RoundTripIsBitExact) {
  const std::vector<VertexId> ids{0, 3, 7};
  Vector v(3);
  v << 0.1, -1.0 / 3.0, 1e-300;
  std::stringstream buf;
  write_vertex_function(buf, ids, v);
  const auto back = read_vertex_function(buf);
  EXPECT_EQ(back.ids, ids);
  for (Eigen::Index k = 0; k < 3; ++k) EXPECT_EQ(back.values(k), v(k));
}

TEST(VertexFunctionIo, MalformedInputThrows) {
  for (const char* text : {"1\n", "x 1.0\n", "1 2.0 3\n"}) {
    std::istringstream in(text);
    EXPECT_THROW(read_vertex_function(in), ConfigError) << text;
  }
  std::ostringstream out;
  const std::vector<VertexId> ids{0};
  EXPECT_THROW(write_vertex_function(out, ids, Vector::Zero(2)), std::invalid_argument);
}

}  // namespace
}  // namespace sdlab
