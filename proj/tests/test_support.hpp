#pragma once

// Test-only generators and reference oracles. Nothing here calls into the
// code path it is used to check.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fairpark/flow.hpp"
#include "fairpark/model.hpp"
#include "fairpark/rng.hpp"

namespace fairpark::testing {

// Small integer-grid coordinates so distance ties actually occur.
inline Point grid_point(Rng& rng, int extent = 4) {
  return {static_cast<double>(rng.uniform_int(0, extent)),
          static_cast<double>(rng.uniform_int(0, extent))};
}

struct TinyShape {
  int max_drivers = 7;
  int max_lots = 3;
  int max_horizon = 5;
  int max_capacity = 3;
};

inline Instance random_tiny_instance(Rng& rng, TinyShape shape = {}) {
  const int n_lots = static_cast<int>(rng.uniform_int(1, shape.max_lots));
  const int n_drivers = static_cast<int>(rng.uniform_int(0, shape.max_drivers));
  const int horizon = static_cast<int>(rng.uniform_int(1, shape.max_horizon));
  std::vector<Lot> lots;
  for (int l = 0; l < n_lots; ++l) {
    const int cap = static_cast<int>(rng.uniform_int(0, shape.max_capacity));
    lots.push_back({l, grid_point(rng), cap, static_cast<int>(rng.uniform_int(0, cap))});
  }
  std::vector<Trip> trips;
  for (int r = 0; r < n_drivers; ++r) {
    trips.push_back({r, grid_point(rng), grid_point(rng),
                     static_cast<int>(rng.uniform_int(1, horizon)),
                     static_cast<int>(rng.uniform_int(1, horizon))});
  }
  return make_instance(std::move(trips), std::move(lots), horizon, 2.0 + rng.uniform01());
}

// Nearest lot by exhaustive scan with explicit tie rule.
inline int nearest_lot_oracle(Point p, const std::vector<Lot>& lots) {
  int best = -1;
  for (int l = 0; l < static_cast<int>(lots.size()); ++l) {
    const double d = std::fabs(p.x - lots[l].location.x) + std::fabs(p.y - lots[l].location.y);
    if (best < 0) {
      best = l;
      continue;
    }
    const double bd = std::fabs(p.x - lots[best].location.x) + std::fabs(p.y - lots[best].location.y);
    if (d < bd) best = l;
  }
  return best;
}

// x_l(t) recounted from scratch for every (l, t).
inline int occupancy_recount(const Instance& inst, const std::vector<int>& dest, int lot, int t) {
  int x = inst.lots[lot].initial_occupancy;
  for (std::size_t r = 0; r < inst.trips.size(); ++r) {
    if (dest[r] == lot && inst.trips[r].end_period <= t) ++x;
    if (inst.origin_lot[r] == lot && inst.trips[r].start_period <= t) --x;
  }
  return x;
}

inline bool feasible_oracle(const Instance& inst, const std::vector<int>& dest) {
  if (dest.size() != inst.trips.size()) return false;
  for (int l : dest) {
    if (l < 0 || l >= static_cast<int>(inst.lots.size())) return false;
  }
  for (int l = 0; l < static_cast<int>(inst.lots.size()); ++l) {
    for (int t = 1; t <= inst.horizon; ++t) {
      if (occupancy_recount(inst, dest, l, t) > inst.lots[l].capacity) return false;
    }
  }
  return true;
}

inline double mean_envy_pairwise(const std::vector<double>& beta) {
  double sum = 0.0;
  for (double a : beta) {
    for (double b : beta) sum += std::fabs(a - b);
  }
  const double n = static_cast<double>(beta.size());
  return sum / (n * n);
}

// Neumaier-compensated mean in long double.
inline double mean_compensated(const std::vector<double>& v) {
  long double sum = 0.0L;
  long double comp = 0.0L;
  for (double x : v) {
    const long double t = sum + x;
    if (std::fabs(static_cast<double>(sum)) >= std::fabs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  return static_cast<double>((sum + comp) / static_cast<long double>(v.size()));
}

inline double jains_direct(const std::vector<double>& beta) {
  long double s = 0.0L;
  long double s2 = 0.0L;
  for (double b : beta) {
    s += b;
    s2 += static_cast<long double>(b) * b;
  }
  return static_cast<double>(s * s / (static_cast<long double>(beta.size()) * s2));
}

// Up to 8 nodes and 8 arcs, small capacities and costs.
inline FlowNetwork random_flow_network(Rng& rng) {
  const int n = static_cast<int>(rng.uniform_int(2, 8));
  FlowNetwork net(n, 0, n - 1);
  const int arcs = static_cast<int>(rng.uniform_int(1, 8));
  for (int a = 0; a < arcs; ++a) {
    int from = static_cast<int>(rng.uniform_int(0, n - 1));
    int to = static_cast<int>(rng.uniform_int(0, n - 1));
    if (from == to) to = (to + 1) % n;
    net.add_arc(from, to, rng.uniform_int(0, 3), rng.uniform_int(0, 9));
  }
  return net;
}

struct FlowOracleResult {
  std::int64_t max_flow = 0;
  std::optional<std::int64_t> min_cost;  // for exactly the required flow
};

// Enumerates every integer arc-flow vector within capacities.
inline FlowOracleResult flow_enumeration_oracle(const FlowNetwork& net, std::int64_t required) {
  const auto& arcs = net.arcs();
  std::vector<std::int64_t> f(arcs.size(), 0);
  FlowOracleResult out;
  while (true) {
    std::vector<std::int64_t> balance(net.node_count(), 0);
    std::int64_t cost = 0;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      balance[arcs[a].from] -= f[a];
      balance[arcs[a].to] += f[a];
      cost += f[a] * arcs[a].cost;
    }
    bool conserved = true;
    for (int v = 0; v < net.node_count(); ++v) {
      if (v != net.source() && v != net.sink() && balance[v] != 0) conserved = false;
    }
    if (conserved) {
      const std::int64_t value = -balance[net.source()];
      out.max_flow = std::max(out.max_flow, value);
      if (value == required && (!out.min_cost || cost < *out.min_cost)) out.min_cost = cost;
    }
    std::size_t pos = 0;
    while (pos < f.size() && ++f[pos] > arcs[pos].capacity) f[pos++] = 0;
    if (pos == f.size()) break;
  }
  return out;
}

}  // namespace fairpark::testing
