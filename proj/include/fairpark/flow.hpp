#pragma once

#include <cstdint>
#include <vector>

namespace fairpark {

struct Arc {
  int from = 0;
  int to = 0;
  std::int64_t capacity = 0;
  std::int64_t cost = 0;
};

// Directed network with integer capacities and nonnegative integer costs.
class FlowNetwork {
 public:
  FlowNetwork() = default;
  FlowNetwork(int node_count, int source, int sink)
      : node_count_(node_count), source_(source), sink_(sink) {}

  int add_node() { return node_count_++; }
  // Returns the arc index. Arcs are validated when solved.
  int add_arc(int from, int to, std::int64_t capacity, std::int64_t cost) {
    arcs_.push_back({from, to, capacity, cost});
    return static_cast<int>(arcs_.size()) - 1;
  }

  int node_count() const { return node_count_; }
  int source() const { return source_; }
  int sink() const { return sink_; }
  void set_terminals(int source, int sink) {
    source_ = source;
    sink_ = sink;
  }
  const std::vector<Arc>& arcs() const { return arcs_; }

 private:
  int node_count_ = 0;
  int source_ = 0;
  int sink_ = 0;
  std::vector<Arc> arcs_;
};

struct FlowResult {
  bool feasible = false;
  std::int64_t flow_value = 0;  // on infeasibility: the maximum flow achieved
  std::int64_t total_cost = 0;
  std::vector<std::int64_t> arc_flows;
};

// Sends exactly `required_flow` units from source to sink at minimum cost,
// using successive shortest paths with Dijkstra on reduced costs. Throws
// std::invalid_argument on malformed networks (bad node ids, self-loops,
// negative capacities or costs).
FlowResult min_cost_flow(const FlowNetwork& network, std::int64_t required_flow);

}  // namespace fairpark
