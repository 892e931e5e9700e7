#include "fairpark/flow.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <utility>

namespace fairpark {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

struct ResidualEdge {
  int to;
  int rev;  // index of the paired edge in adj[to]
  std::int64_t residual;
  std::int64_t cost;
  int arc;  // original arc index, -1 for reverse edges
};

void validate_network(const FlowNetwork& net) {
  const int n = net.node_count();
  auto bad = [](const std::string& msg) { throw std::invalid_argument("min_cost_flow: " + msg); };
  auto in_range = [n](int v) { return v >= 0 && v < n; };
  if (!in_range(net.source()) || !in_range(net.sink())) bad("terminal out of range");
  if (net.source() == net.sink()) bad("source equals sink");
  for (std::size_t i = 0; i < net.arcs().size(); ++i) {
    const Arc& a = net.arcs()[i];
    const std::string id = "arc " + std::to_string(i);
    if (!in_range(a.from) || !in_range(a.to)) bad(id + " references a missing node");
    if (a.from == a.to) bad(id + " is a self-loop");
    if (a.capacity < 0) bad(id + " has negative capacity");
    if (a.cost < 0) bad(id + " has negative cost");
  }
}

}  // namespace

FlowResult min_cost_flow(const FlowNetwork& network, std::int64_t required_flow) {
  validate_network(network);
  if (required_flow < 0) throw std::invalid_argument("min_cost_flow: negative required flow");

  const int n = network.node_count();
  std::vector<std::vector<ResidualEdge>> adj(n);
  for (std::size_t i = 0; i < network.arcs().size(); ++i) {
    const Arc& a = network.arcs()[i];
    const int fwd = static_cast<int>(adj[a.from].size());
    const int back = static_cast<int>(adj[a.to].size());
    adj[a.from].push_back({a.to, back, a.capacity, a.cost, static_cast<int>(i)});
    adj[a.to].push_back({a.from, fwd, 0, -a.cost, -1});
  }

  const int s = network.source();
  const int t = network.sink();
  // All costs are nonnegative, so zero potentials are valid to start.
  std::vector<std::int64_t> potential(n, 0);
  std::vector<std::int64_t> dist(n);
  std::vector<int> prev_node(n);
  std::vector<int> prev_edge(n);

  FlowResult result;
  using Entry = std::pair<std::int64_t, int>;
  while (result.flow_value < required_flow) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(prev_node.begin(), prev_node.end(), -1);
    dist[s] = 0;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    heap.emplace(0, s);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (d > dist[u]) continue;
      for (std::size_t e = 0; e < adj[u].size(); ++e) {
        const ResidualEdge& edge = adj[u][e];
        if (edge.residual <= 0) continue;
        const std::int64_t nd = d + edge.cost + potential[u] - potential[edge.to];
        if (nd < dist[edge.to]) {
          dist[edge.to] = nd;
          prev_node[edge.to] = u;
          prev_edge[edge.to] = static_cast<int>(e);
          heap.emplace(nd, edge.to);
        }
      }
    }
    if (dist[t] >= kInf) break;
    for (int v = 0; v < n; ++v) {
      if (dist[v] < kInf) potential[v] += dist[v];
    }
    std::int64_t push = required_flow - result.flow_value;
    for (int v = t; v != s; v = prev_node[v]) {
      push = std::min(push, adj[prev_node[v]][prev_edge[v]].residual);
    }
    for (int v = t; v != s; v = prev_node[v]) {
      ResidualEdge& edge = adj[prev_node[v]][prev_edge[v]];
      edge.residual -= push;
      adj[v][edge.rev].residual += push;
      result.total_cost += push * edge.cost;
    }
    result.flow_value += push;
  }

  result.feasible = result.flow_value == required_flow;
  result.arc_flows.assign(network.arcs().size(), 0);
  for (int u = 0; u < n; ++u) {
    for (const ResidualEdge& edge : adj[u]) {
      if (edge.arc >= 0) {
        result.arc_flows[edge.arc] = network.arcs()[edge.arc].capacity - edge.residual;
      }
    }
  }
  return result;
}

}  // namespace fairpark
