#pragma once

// Exhaustive reference for one dynamic-allocation step, plus a generator of
// small random steps.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "fairpark/rng.hpp"
#include "fairpark/smartpark.hpp"

namespace fairpark::testing {

inline std::int64_t micro(double v) { return std::llround(v * 1e6); }

struct OracleResult {
  bool feasible = false;
  std::int64_t cost = 0;
};

// Exhaustive search over every (lot or unassigned) combination of the
// pending drivers, with the no-worse-than-before rule applied directly.
inline OracleResult step_oracle(const StepInput& in, ObjectiveMode mode, double target) {
  const std::size_t n = in.pending.size();
  const int L = static_cast<int>(in.capacity.lots());
  const int H = in.capacity.horizon();
  std::vector<std::vector<int>> options(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PendingDriver& d = in.pending[i];
    for (int l = 0; l < L; ++l) {
      if (std::isinf(d.utility[l])) continue;
      if (d.previous && micro(d.utility[l]) > micro(*d.previous)) continue;
      options[i].push_back(l);
    }
    if (!d.previous || micro(1.0) <= micro(*d.previous)) options[i].push_back(-1);
  }
  OracleResult best;
  std::vector<std::size_t> pick(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    if (options[i].empty()) return best;
  while (true) {
    std::vector<std::vector<int>> arrivals(L, std::vector<int>(H + 1, 0));
    std::int64_t cost = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int l = options[i][pick[i]];
      if (l < 0) {
        cost += micro(1.0);
        continue;
      }
      ++arrivals[l][in.pending[i].arrival_period];
      const double j = in.pending[i].utility[l];
      cost += micro(mode == ObjectiveMode::utility ? j : std::fabs(j - target));
    }
    bool ok = true;
    for (int l = 0; l < L && ok; ++l) {
      int used = 0;
      for (int t = 1; t <= H; ++t) {
        used += arrivals[l][t];
        if (used > in.capacity.at(l, t)) ok = false;
      }
    }
    if (ok && (!best.feasible || cost < best.cost)) best = {true, cost};
    std::size_t i = 0;
    while (i < n && ++pick[i] == options[i].size()) pick[i++] = 0;
    if (i == n) break;
  }
  return best;
}

inline StepInput random_step(Rng& rng) {
  const int L = static_cast<int>(rng.uniform_int(1, 3));
  const int H = static_cast<int>(rng.uniform_int(1, 4));
  const int n = static_cast<int>(rng.uniform_int(0, 6));
  StepInput in;
  in.capacity = PeriodGrid(L, H);
  for (int l = 0; l < L; ++l) {
    int c = static_cast<int>(rng.uniform_int(0, 2));
    in.capacity.at(l, 0) = c;
    for (int t = 1; t <= H; ++t) {
      c = std::max(0, c + static_cast<int>(rng.uniform_int(-1, 1)));
      in.capacity.at(l, t) = c;
    }
  }
  for (int i = 0; i < n; ++i) {
    PendingDriver d;
    d.driver = i;
    d.arrival_period = static_cast<int>(rng.uniform_int(1, H));
    for (int l = 0; l < L; ++l) {
      d.utility.push_back(rng.uniform01() < 0.15 ? std::numeric_limits<double>::infinity() : static_cast<double>(rng.uniform_int(0, 10)) / 10.0);
    }
    if (rng.uniform01() < 0.5) {
      d.previous_lot = static_cast<int>(rng.uniform_int(-1, L - 1));
      d.previous = d.previous_lot >= 0 && std::isfinite(d.utility[d.previous_lot]) ? d.utility[d.previous_lot] : 1.0;
      if (d.previous_lot >= 0 && !std::isfinite(d.utility[d.previous_lot])) d.previous_lot = -1;
    }
    in.pending.push_back(std::move(d));
  }
  return in;
}

}  // namespace fairpark::testing
