#include "fairpark/assign.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fairpark/fairness.hpp"

namespace fairpark {

std::int64_t scale_cost(double cost) {
  if (!std::isfinite(cost)) throw std::invalid_argument("scale_cost: non-finite cost");
  return std::llround(cost * kCostScale);
}

CostMatrix walking_time_costs(const Instance& instance) {
  CostMatrix c(instance.num_lots(), instance.num_drivers());
  for (std::size_t l = 0; l < c.lots(); ++l) {
    for (std::size_t r = 0; r < c.drivers(); ++r) c.at(l, r) = walking_time_to(instance, r, l);
  }
  return c;
}

CostMatrix deviation_costs(const Instance& instance, double target) {
  CostMatrix c(instance.num_lots(), instance.num_drivers());
  for (std::size_t l = 0; l < c.lots(); ++l) {
    for (std::size_t r = 0; r < c.drivers(); ++r)
      c.at(l, r) = std::abs(walking_time_to(instance, r, l) - target);
  }
  return c;
}

FrozenSet FrozenSet::from_assignment(std::span<const int> members, std::span<const int> dest_lot) {
  FrozenSet f;
  f.members.assign(members.begin(), members.end());
  f.frozen_lot.reserve(members.size());
  for (int r : members) f.frozen_lot.push_back(dest_lot[r]);
  return f;
}

namespace {

// Per-driver frozen lot or -1; validates the frozen set against the instance.
std::vector<int> frozen_lookup(const Instance& instance, const FrozenSet& frozen) {
  if (frozen.members.size() != frozen.frozen_lot.size())
    throw InstanceError("frozen set: members and lots differ in length");
  std::vector<int> lot_of(instance.num_drivers(), -1);
  for (std::size_t i = 0; i < frozen.members.size(); ++i) {
    const int r = frozen.members[i];
    const int l = frozen.frozen_lot[i];
    if (r < 0 || static_cast<std::size_t>(r) >= instance.num_drivers())
      throw InstanceError("frozen set: driver " + std::to_string(r) + " out of range");
    if (l < 0 || static_cast<std::size_t>(l) >= instance.num_lots())
      throw InstanceError("frozen set: lot " + std::to_string(l) + " out of range");
    if (lot_of[r] >= 0) throw InstanceError("frozen set: driver " + std::to_string(r) + " repeated");
    lot_of[r] = l;
  }
  return lot_of;
}

void check_costs(const CostMatrix& costs, const Instance& instance) {
  if (costs.lots() != instance.num_lots() || costs.drivers() != instance.num_drivers())
    throw std::invalid_argument("cost matrix shape does not match instance");
}

std::vector<Violation> negative_cells(const PeriodGrid& cap) {
  std::vector<Violation> out;
  for (std::size_t l = 0; l < cap.lots(); ++l) {
    for (int t = 1; t <= cap.horizon(); ++t) {
      if (cap.at(l, t) < 0) out.push_back({static_cast<int>(l), t, cap.at(l, t), 0});
    }
  }
  return out;
}

OptionProblem make_option_problem(const Instance& instance, const CostMatrix& costs,
                                  const FrozenSet& frozen, const std::vector<int>& lot_of) {
  OptionProblem p;
  p.capacity = residual_capacity(instance, frozen);
  for (std::size_t r = 0; r < instance.num_drivers(); ++r) {
    if (lot_of[r] >= 0) continue;
    DriverOptions d;
    d.driver = static_cast<int>(r);
    d.arrival_period = instance.trips[r].end_period;
    d.lots.reserve(instance.num_lots());
    for (std::size_t l = 0; l < instance.num_lots(); ++l) {
      const double c = costs.at(l, r);
      if (!(c >= 0.0) || !std::isfinite(c))
        throw std::invalid_argument("cost must be finite and nonnegative");
      d.lots.emplace_back(static_cast<int>(l), scale_cost(c));
    }
    p.drivers.push_back(std::move(d));
  }
  return p;
}

SolveResult to_solve_result(const Instance& instance, const OptionProblem& problem,
                            const OptionSolution& sol, const std::vector<int>& lot_of) {
  SolveResult out;
  out.status = sol.status;
  out.scaled_cost = sol.scaled_cost;
  out.max_flow = sol.max_flow;
  out.negative_cells = sol.negative_cells;
  if (!sol.ok()) return out;
  std::vector<int> dest = lot_of;
  for (std::size_t i = 0; i < problem.drivers.size(); ++i) dest[problem.drivers[i].driver] = sol.choice[i];
  out.assignment = make_assignment(instance, std::move(dest));
  return out;
}

}  // namespace

PeriodGrid residual_capacity(const Instance& instance, const FrozenSet& frozen) {
  const std::vector<int> lot_of = frozen_lookup(instance, frozen);
  PeriodGrid frozen_arrivals(instance.num_lots(), instance.horizon);
  PeriodGrid departures(instance.num_lots(), instance.horizon);
  for (std::size_t r = 0; r < instance.num_drivers(); ++r) {
    const Trip& trip = instance.trips[r];
    ++departures.at(instance.origin_lot[r], trip.start_period);
    if (lot_of[r] >= 0) ++frozen_arrivals.at(lot_of[r], trip.end_period);
  }
  PeriodGrid cap(instance.num_lots(), instance.horizon);
  for (std::size_t l = 0; l < instance.num_lots(); ++l) {
    int running = instance.lots[l].capacity - instance.lots[l].initial_occupancy;
    cap.at(l, 0) = running;
    for (int t = 1; t <= instance.horizon; ++t) {
      running += departures.at(l, t) - frozen_arrivals.at(l, t);
      cap.at(l, t) = running;
    }
  }
  return cap;
}

AssignmentNetwork build_option_network(const OptionProblem& problem) {
  const PeriodGrid& cap = problem.capacity;
  const int horizon = cap.horizon();
  const int n_lots = static_cast<int>(cap.lots());
  const int n_drivers = static_cast<int>(problem.drivers.size());

  AssignmentNetwork out;
  const int source = 0;
  const int sink = 1;
  const int first_driver = 2;
  const int first_slot = first_driver + n_drivers;
  auto slot = [&](int lot, int t) { return first_slot + lot * horizon + (t - 1); };
  out.network = FlowNetwork(first_slot + n_lots * horizon, source, sink);
  out.required_flow = n_drivers;

  auto record = [&](int arc, int driver, int lot) {
    out.arc_driver.resize(arc + 1, -1);
    out.arc_lot.resize(arc + 1, -1);
    out.arc_driver[arc] = driver;
    out.arc_lot[arc] = lot;
  };

  for (int i = 0; i < n_drivers; ++i) out.network.add_arc(source, first_driver + i, 1, 0);
  for (int i = 0; i < n_drivers; ++i) {
    const DriverOptions& d = problem.drivers[i];
    if (d.arrival_period < 1 || d.arrival_period > horizon)
      throw InstanceError("driver " + std::to_string(d.driver) + ": arrival outside horizon");
    for (const auto& [lot, cost] : d.lots) {
      if (lot < 0 || lot >= n_lots) throw InstanceError("option lot out of range");
      const int arc = out.network.add_arc(first_driver + i, slot(lot, d.arrival_period), 1, cost);
      record(arc, i, lot);
    }
    if (d.bypass_cost) {
      const int arc = out.network.add_arc(first_driver + i, sink, 1, *d.bypass_cost);
      record(arc, i, -1);
    }
  }
  for (int l = 0; l < n_lots; ++l) {
    for (int t = 1; t <= horizon; ++t) {
      const std::int64_t c = std::max(0, cap.at(l, t));
      const int to = t < horizon ? slot(l, t + 1) : sink;
      out.network.add_arc(slot(l, t), to, c, 0);
    }
  }
  out.arc_driver.resize(out.network.arcs().size(), -1);
  out.arc_lot.resize(out.network.arcs().size(), -1);
  return out;
}

OptionSolution solve_options(const OptionProblem& problem) {
  OptionSolution sol;
  sol.negative_cells = negative_cells(problem.capacity);
  if (!sol.negative_cells.empty()) {
    sol.status = SolveStatus::negative_residual;
    return sol;
  }
  const AssignmentNetwork net = build_option_network(problem);
  const FlowResult flow = min_cost_flow(net.network, net.required_flow);
  sol.max_flow = flow.flow_value;
  if (!flow.feasible) {
    sol.status = SolveStatus::infeasible;
    return sol;
  }
  sol.status = SolveStatus::optimal;
  sol.scaled_cost = flow.total_cost;
  sol.choice.assign(problem.drivers.size(), -1);
  for (std::size_t a = 0; a < flow.arc_flows.size(); ++a) {
    if (flow.arc_flows[a] > 0 && net.arc_driver[a] >= 0) sol.choice[net.arc_driver[a]] = net.arc_lot[a];
  }
  return sol;
}

AssignmentNetwork build_assignment_network(const Instance& instance, const CostMatrix& costs,
                                           const FrozenSet& frozen) {
  check_costs(costs, instance);
  const std::vector<int> lot_of = frozen_lookup(instance, frozen);
  return build_option_network(make_option_problem(instance, costs, frozen, lot_of));
}

SolveResult solve_exact(const Instance& instance, const CostMatrix& costs, const FrozenSet& frozen) {
  check_costs(costs, instance);
  const std::vector<int> lot_of = frozen_lookup(instance, frozen);
  const OptionProblem problem = make_option_problem(instance, costs, frozen, lot_of);
  const OptionSolution sol = solve_options(problem);
  return to_solve_result(instance, problem, sol, lot_of);
}

SolveResult brute_force_assign(const Instance& instance, const CostMatrix& costs,
                               const FrozenSet& frozen) {
  check_costs(costs, instance);
  const std::vector<int> lot_of = frozen_lookup(instance, frozen);
  std::vector<int> free_drivers;
  for (std::size_t r = 0; r < instance.num_drivers(); ++r) {
    if (lot_of[r] < 0) free_drivers.push_back(static_cast<int>(r));
  }
  const std::size_t n_lots = instance.num_lots();
  double combos = std::pow(static_cast<double>(n_lots), static_cast<double>(free_drivers.size()));
  if (combos > 1e6) throw std::length_error("brute_force_assign: more than 10^6 combinations");

  std::vector<std::int64_t> scaled(n_lots * instance.num_drivers());
  for (std::size_t l = 0; l < n_lots; ++l) {
    for (int r : free_drivers) scaled[l * instance.num_drivers() + r] = scale_cost(costs.at(l, r));
  }

  SolveResult best;
  best.status = SolveStatus::infeasible;
  if (n_lots == 0 && !free_drivers.empty()) return best;

  std::vector<int> dest = lot_of;
  std::vector<int> digit(free_drivers.size(), 0);
  std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
  std::vector<int> best_dest;
  while (true) {
    std::int64_t cost = 0;
    for (std::size_t i = 0; i < free_drivers.size(); ++i) {
      dest[free_drivers[i]] = digit[i];
      cost += scaled[digit[i] * instance.num_drivers() + free_drivers[i]];
    }
    if (cost < best_cost && check_feasible(instance, dest).feasible) {
      best_cost = cost;
      best_dest = dest;
    }
    std::size_t pos = 0;
    while (pos < digit.size() && ++digit[pos] == static_cast<int>(n_lots)) digit[pos++] = 0;
    if (pos == digit.size()) break;
  }
  if (best_dest.empty() && instance.num_drivers() > 0) return best;
  best.status = SolveStatus::optimal;
  best.scaled_cost = instance.num_drivers() > 0 ? best_cost : 0;
  best.max_flow = static_cast<std::int64_t>(free_drivers.size());
  best.assignment = make_assignment(instance, best_dest);
  return best;
}

}  // namespace fairpark
