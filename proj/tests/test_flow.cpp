#include <doctest.h>

#include "fairpark/flow.hpp"
#include "test_support.hpp"

using namespace fairpark;

namespace {

void check_conservation(const FlowNetwork& net, const FlowResult& res) {
  std::vector<std::int64_t> balance(net.node_count(), 0);
  for (std::size_t a = 0; a < net.arcs().size(); ++a) {
    CHECK(res.arc_flows[a] >= 0);
    CHECK(res.arc_flows[a] <= net.arcs()[a].capacity);
    balance[net.arcs()[a].from] -= res.arc_flows[a];
    balance[net.arcs()[a].to] += res.arc_flows[a];
  }
  for (int v = 0; v < net.node_count(); ++v) {
    if (v != net.source() && v != net.sink()) CHECK(balance[v] == 0);
  }
  CHECK(-balance[net.source()] == res.flow_value);
}

}  // namespace

TEST_CASE("single arc") {
  FlowNetwork net(2, 0, 1);
  net.add_arc(0, 1, 3, 2);
  const auto res = min_cost_flow(net, 3);
  CHECK(res.feasible);
  CHECK(res.total_cost == 6);
  CHECK(res.arc_flows == std::vector<std::int64_t>{3});

  const auto zero = min_cost_flow(net, 0);
  CHECK(zero.feasible);
  CHECK(zero.total_cost == 0);
  CHECK(zero.arc_flows == std::vector<std::int64_t>{0});

  const auto over = min_cost_flow(net, 4);
  CHECK_FALSE(over.feasible);
  CHECK(over.flow_value == 3);
}

TEST_CASE("cheaper path is used first and reverse residuals reroute flow") {
  // s=0, a=1, b=2, t=3
  FlowNetwork net(4, 0, 3);
  net.add_arc(0, 1, 4, 1);
  net.add_arc(0, 2, 2, 5);
  net.add_arc(1, 3, 2, 3);
  net.add_arc(2, 3, 3, 2);
  net.add_arc(1, 2, 3, 1);
  const auto res = min_cost_flow(net, 5);
  REQUIRE(res.feasible);
  const auto oracle = testing::flow_enumeration_oracle(net, 5);
  CHECK(res.total_cost == *oracle.min_cost);
  check_conservation(net, res);
}

TEST_CASE("malformed networks are rejected") {
  FlowNetwork dangling(2, 0, 1);
  dangling.add_arc(0, 5, 1, 1);
  CHECK_THROWS_AS(min_cost_flow(dangling, 1), std::invalid_argument);

  FlowNetwork loop(2, 0, 1);
  loop.add_arc(1, 1, 1, 1);
  CHECK_THROWS_AS(min_cost_flow(loop, 1), std::invalid_argument);

  FlowNetwork negative(2, 0, 1);
  negative.add_arc(0, 1, 1, -1);
  CHECK_THROWS_AS(min_cost_flow(negative, 1), std::invalid_argument);

  FlowNetwork bad_terminal(2, 0, 4);
  CHECK_THROWS_AS(min_cost_flow(bad_terminal, 0), std::invalid_argument);
}

TEST_CASE("random small networks match exhaustive flow enumeration") {
  Rng rng(2024);
  int feasible = 0;
  for (int rep = 0; rep < 150; ++rep) {
    const FlowNetwork net = testing::random_flow_network(rng);
    const auto oracle_max = testing::flow_enumeration_oracle(net, 0).max_flow;
    const std::int64_t required = rng.uniform_int(0, oracle_max + 1);
    const auto oracle = testing::flow_enumeration_oracle(net, required);
    const auto res = min_cost_flow(net, required);
    check_conservation(net, res);
    CHECK(res.feasible == oracle.min_cost.has_value());
    if (res.feasible) {
      ++feasible;
      CHECK(res.total_cost == *oracle.min_cost);
      CHECK(res.flow_value == required);
    } else {
      CHECK(res.flow_value == oracle.max_flow);
    }
  }
  CHECK(feasible > 50);
}

TEST_CASE("identical input gives identical arc flows") {
  Rng rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const FlowNetwork net = testing::random_flow_network(rng);
    const auto a = min_cost_flow(net, 2);
    const auto b = min_cost_flow(net, 2);
    CHECK(a.arc_flows == b.arc_flows);
  }
}
