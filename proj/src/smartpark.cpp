#include "fairpark/smartpark.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fairpark/rng.hpp"

namespace fairpark {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double quantile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// J values of the drivers a solution assigns, in pending order.
std::vector<double> assigned_costs(const StepInput& input, const std::vector<int>& choice) {
  std::vector<double> out;
  for (std::size_t i = 0; i < choice.size(); ++i) {
    if (choice[i] >= 0) out.push_back(input.pending[i].utility[choice[i]]);
  }
  return out;
}

}  // namespace

void validate(const UtilitySpec& spec) {
  const std::size_t n = spec.lambda.size();
  if (spec.max_money.size() != n || spec.max_distance.size() != n || spec.monetary_cost.drivers() != n ||
      spec.distance.drivers() != n || spec.monetary_cost.lots() != spec.distance.lots())
    throw std::invalid_argument("utility spec: inconsistent sizes");
  for (std::size_t r = 0; r < n; ++r) {
    if (!(spec.lambda[r] >= 0.0 && spec.lambda[r] <= 1.0))
      throw std::invalid_argument("utility spec: lambda outside [0, 1]");
    if (!(spec.max_money[r] > 0.0) || !(spec.max_distance[r] > 0.0) || !std::isfinite(spec.max_money[r]) ||
        !std::isfinite(spec.max_distance[r]))
      throw std::invalid_argument("utility spec: limits must be positive and finite");
    for (std::size_t l = 0; l < spec.distance.lots(); ++l) {
      if (!(spec.monetary_cost.at(l, r) >= 0.0) || !(spec.distance.at(l, r) >= 0.0))
        throw std::invalid_argument("utility spec: costs must be nonnegative");
    }
  }
}

double utility(const UtilitySpec& spec, std::size_t driver, std::size_t lot) {
  const double m = spec.max_money.at(driver);
  const double d = spec.max_distance.at(driver);
  if (!(m > 0.0) || !(d > 0.0)) throw std::invalid_argument("utility: limits must be positive");
  const double lambda = spec.lambda.at(driver);
  return lambda * spec.monetary_cost.at(lot, driver) / m + (1.0 - lambda) * spec.distance.at(lot, driver) / d;
}

bool within_limits(const UtilitySpec& spec, std::size_t driver, std::size_t lot) {
  return spec.monetary_cost.at(lot, driver) <= spec.max_money[driver] &&
         spec.distance.at(lot, driver) <= spec.max_distance[driver];
}

void validate(const Scenario& s) {
  if (s.horizon < 1) throw ScenarioError("horizon must be >= 1");
  if (!(s.walking_speed > 0.0)) throw ScenarioError("walking speed must be positive");
  if (s.lots.empty()) throw ScenarioError("scenario needs at least one lot");
  for (const Lot& l : s.lots) {
    if (l.capacity < 0 || l.initial_occupancy < 0 || l.initial_occupancy > l.capacity)
      throw ScenarioError("lot " + std::to_string(l.id) + ": bad capacity or occupancy");
  }
  if (!s.departures.empty()) {
    if (s.departures.size() != s.lots.size()) throw ScenarioError("departures: one row per lot expected");
    for (const auto& row : s.departures) {
      if (row.size() != static_cast<std::size_t>(s.horizon)) throw ScenarioError("departures: one column per period");
      for (int z : row)
        if (z < 0) throw ScenarioError("departures must be nonnegative");
    }
  }
  int last_request = 0;
  for (const ParkingRequest& q : s.requests) {
    const std::string who = "request of driver " + std::to_string(q.driver);
    if (q.request_time < last_request) throw ScenarioError("requests must be ordered by request time");
    last_request = q.request_time;
    if (q.request_time < 1 || q.arrival_time > s.horizon) throw ScenarioError(who + ": time outside horizon");
    if (q.arrival_time <= q.request_time) throw ScenarioError(who + ": arrival not after request");
    if (q.monetary_cost.size() != s.lots.size()) throw ScenarioError(who + ": one monetary cost per lot expected");
  }
  try {
    validate(utility_spec(s));
  } catch (const std::invalid_argument& e) {
    throw ScenarioError(e.what());
  }
}

UtilitySpec utility_spec(const Scenario& s) {
  const std::size_t n = s.requests.size();
  const std::size_t L = s.lots.size();
  UtilitySpec spec;
  spec.monetary_cost = CostMatrix(L, n);
  spec.distance = CostMatrix(L, n);
  for (std::size_t r = 0; r < n; ++r) {
    const ParkingRequest& q = s.requests[r];
    spec.lambda.push_back(q.lambda);
    spec.max_money.push_back(q.max_money);
    spec.max_distance.push_back(q.max_distance);
    for (std::size_t l = 0; l < L; ++l) {
      spec.monetary_cost.at(l, r) = l < q.monetary_cost.size() ? q.monetary_cost[l] : 0.0;
      spec.distance.at(l, r) = l1_distance(q.destination, s.lots[l].location);
    }
  }
  return spec;
}

const char* to_string(ObjectiveMode mode) { return mode == ObjectiveMode::utility ? "utility" : "fair"; }

std::vector<int> allowed_lots(const PendingDriver& d) {
  std::vector<int> out;
  for (std::size_t l = 0; l < d.utility.size(); ++l) {
    const double j = d.utility[l];
    if (!std::isfinite(j)) continue;
    if (d.previous && scale_cost(j) > scale_cost(*d.previous)) continue;
    out.push_back(static_cast<int>(l));
  }
  return out;
}

bool bypass_allowed(const PendingDriver& d) {
  return !d.previous || scale_cost(kUnassignedCost) <= scale_cost(*d.previous);
}

OptionSolution solve_step(const StepInput& input, ObjectiveMode mode, double target,
                          const std::vector<int>& frozen) {
  OptionProblem problem;
  problem.capacity = input.capacity;
  for (std::size_t i = 0; i < input.pending.size(); ++i) {
    const PendingDriver& p = input.pending[i];
    DriverOptions d;
    d.driver = p.driver;
    d.arrival_period = p.arrival_period;
    const int pin = i < frozen.size() ? frozen[i] : -1;
    for (int l : allowed_lots(p)) {
      if (pin >= 0 && l != pin) continue;
      const double j = p.utility[l];
      d.lots.emplace_back(l, scale_cost(mode == ObjectiveMode::utility ? j : std::abs(j - target)));
    }
    if (pin < 0 && bypass_allowed(p)) d.bypass_cost = scale_cost(kUnassignedCost);
    problem.drivers.push_back(std::move(d));
  }
  return solve_options(problem);
}

StepResult smartpark_step(const StepInput& input, ObjectiveMode mode, const SmartParkParams& params) {
  if (!(params.epsilon > 0.0) || !(params.delta > 0.0) || params.maxiter < 1)
    throw std::invalid_argument("smartpark: epsilon, delta and maxiter must be positive");
  StepResult out;
  if (mode == ObjectiveMode::fair) {
    std::vector<double> prev;
    for (const PendingDriver& p : input.pending)
      if (p.previous_lot >= 0 && p.previous) prev.push_back(*p.previous);
    out.target = mean_of(prev);
  }

  OptionSolution sol = solve_step(input, mode, out.target);
  // Each driver's previous commitment is a feasible point of this step, so
  // an infeasible solve means the caller passed inconsistent state.
  if (!sol.ok()) throw std::logic_error("smartpark step: no feasible allocation");

  if (mode == ObjectiveMode::fair) {
    for (int i = 1; i <= params.maxiter; ++i) {
      const std::vector<double> costs = assigned_costs(input, sol.choice);
      if (costs.empty()) break;
      const double h = mean_of(costs);
      std::vector<int> assigned_index;
      for (std::size_t k = 0; k < sol.choice.size(); ++k)
        if (sol.choice[k] >= 0) assigned_index.push_back(static_cast<int>(k));
      std::vector<int> frozen(input.pending.size(), -1);
      for (int b : select_band(costs, params.epsilon)) frozen[assigned_index[b]] = sol.choice[assigned_index[b]];

      OptionSolution next = solve_step(input, mode, h, frozen);
      if (!next.ok()) throw std::logic_error("smartpark step: restricted solve infeasible");
      sol = std::move(next);
      out.target = h;
      out.inner_iterations = i;
      if (std::abs(mean_of(assigned_costs(input, sol.choice)) - h) < params.delta) break;
    }
  }
  out.choice = std::move(sol.choice);
  out.scaled_objective = sol.scaled_cost;
  return out;
}

int SimulationResult::cost_increases() const {
  int n = 0;
  for (const StepAudit& a : audit) n += a.cost_increases;
  return n;
}

int SimulationResult::overbooked_cells() const {
  int n = 0;
  for (const StepAudit& a : audit) n += a.overbooked_cells;
  return n;
}

SimulationResult simulate(const Scenario& s, ObjectiveMode mode, const SmartParkParams& params) {
  validate(s);
  const UtilitySpec spec = utility_spec(s);
  const std::size_t n = s.requests.size();
  const std::size_t L = s.lots.size();
  const int H = s.horizon;

  // Capacity left for arrivals up to t before any of our drivers park.
  PeriodGrid base(L, H);
  for (std::size_t l = 0; l < L; ++l) {
    int running = s.lots[l].capacity - s.lots[l].initial_occupancy;
    base.at(l, 0) = running;
    for (int t = 1; t <= H; ++t) {
      if (!s.departures.empty()) running += s.departures[l][t - 1];
      base.at(l, t) = running;
    }
  }

  std::vector<std::vector<double>> util(n, std::vector<double>(L, kInf));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t l = 0; l < L; ++l)
      if (within_limits(spec, r, l)) util[r][l] = utility(spec, r, l);

  SimulationResult res;
  res.mode = mode;
  res.final_lot.assign(n, -1);
  res.final_cost.assign(n, kUnassignedCost);
  std::vector<int> committed(n, -1);
  std::vector<std::optional<double>> previous(n);
  std::vector<char> finalized(n, 0);
  PeriodGrid final_arrivals(L, H);

  for (int k = 1; k <= H; ++k) {
    for (std::size_t r = 0; r < n; ++r) {
      if (finalized[r] || s.requests[r].arrival_time != k) continue;
      finalized[r] = 1;
      res.final_lot[r] = committed[r];
      if (committed[r] >= 0) {
        res.final_cost[r] = util[r][committed[r]];
        ++final_arrivals.at(committed[r], k);
      }
    }

    StepInput input;
    input.capacity = base;
    for (std::size_t l = 0; l < L; ++l) {
      int used = 0;
      for (int t = 1; t <= H; ++t) {
        used += final_arrivals.at(l, t);
        input.capacity.at(l, t) -= used;
      }
    }
    std::vector<std::size_t> members;
    for (std::size_t r = 0; r < n; ++r) {
      const ParkingRequest& q = s.requests[r];
      if (q.request_time <= k && k < q.arrival_time) {
        members.push_back(r);
        input.pending.push_back({q.driver, q.arrival_time, util[r], previous[r], committed[r]});
      }
    }
    if (members.empty()) continue;

    const StepResult step = smartpark_step(input, mode, params);
    StepAudit audit;
    audit.step = k;
    audit.pending = static_cast<int>(members.size());
    PeriodGrid reserved = final_arrivals;
    for (std::size_t i = 0; i < members.size(); ++i) {
      const std::size_t r = members[i];
      const int lot = step.choice[i];
      std::optional<double> now;
      if (lot >= 0) {
        now = util[r][lot];
        ++reserved.at(lot, s.requests[r].arrival_time);
      } else if (previous[r]) {
        now = kUnassignedCost;
      }
      if (previous[r] && (!now || scale_cost(*now) > scale_cost(*previous[r]))) ++audit.cost_increases;
      previous[r] = now;
      committed[r] = lot;
    }
    for (std::size_t l = 0; l < L; ++l) {
      int used = 0;
      for (int t = 1; t <= H; ++t) {
        used += reserved.at(l, t);
        if (used > base.at(l, t)) ++audit.overbooked_cells;
      }
    }
    res.audit.push_back(audit);
  }

  for (std::size_t r = 0; r < n; ++r) {
    if (res.final_lot[r] < 0) {
      res.unassigned.push_back(s.requests[r].driver);
      continue;
    }
    res.assigned_utility.push_back(res.final_cost[r]);
    res.assigned_beta.push_back(spec.distance.at(res.final_lot[r], r) / s.walking_speed);
  }
  res.walk_metrics = compute_metrics(res.assigned_beta);
  res.utility_metrics = compute_metrics(res.assigned_utility);
  return res;
}

Scenario generate_scenario(const ScenarioGenConfig& c, std::uint64_t seed) {
  if (c.grid < 1 || c.horizon < 2 || c.lead_min < 1 || c.lead_max < c.lead_min || c.capacity_min < 0 ||
      c.capacity_max < c.capacity_min || c.occupancy_max < 0 || !(c.request_rate >= 0.0) ||
      !(c.price_min >= 0.0) || c.price_max < c.price_min || !(c.limit_quantile > 0.0 && c.limit_quantile <= 1.0))
    throw ScenarioError("invalid scenario generator config");
  Rng rng(seed);
  Scenario s;
  s.horizon = c.horizon;
  s.walking_speed = c.walking_speed;
  std::vector<double> price;
  for (int gy = 0; gy < c.grid; ++gy) {
    for (int gx = 0; gx < c.grid; ++gx) {
      const int cap = static_cast<int>(rng.uniform_int(c.capacity_min, c.capacity_max));
      const int occ = static_cast<int>(rng.uniform_int(0, std::min(cap, c.occupancy_max)));
      s.lots.push_back({static_cast<int>(s.lots.size()), {gx * c.spacing, gy * c.spacing}, cap, occ});
      price.push_back(rng.uniform(c.price_min, c.price_max));
    }
  }
  s.departures.assign(s.lots.size(), std::vector<int>(c.horizon, 0));
  for (auto& row : s.departures)
    for (int& z : row) z = rng.uniform01() < c.departure_prob ? 1 : 0;

  const double lo = -c.spacing / 2;
  const double hi = (c.grid - 1) * c.spacing + c.spacing / 2;
  const double money_limit = std::max(quantile(price, c.limit_quantile), 1e-9);
  for (int k = 1; k < c.horizon; ++k) {
    const int count = rng.poisson(c.request_rate);
    for (int i = 0; i < count; ++i) {
      ParkingRequest q;
      q.driver = static_cast<int>(s.requests.size());
      q.request_time = k;
      q.arrival_time = std::min(c.horizon, k + static_cast<int>(rng.uniform_int(c.lead_min, c.lead_max)));
      q.destination = {rng.uniform(lo, hi), rng.uniform(lo, hi)};
      q.lambda = rng.uniform01();
      q.monetary_cost = price;
      q.max_money = money_limit;
      std::vector<double> dist;
      for (const Lot& l : s.lots) dist.push_back(l1_distance(q.destination, l.location));
      q.max_distance = std::max(quantile(dist, c.limit_quantile), 1e-9);
      s.requests.push_back(std::move(q));
    }
  }
  return s;
}

}  // namespace fairpark
