#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairpark/flow.hpp"
#include "fairpark/model.hpp"

namespace fairpark {

// Real costs are rounded to integer micro-units before the flow solve, so two
// choices within 1e-6 of each other may be treated as equal.
constexpr double kCostScale = 1e6;
std::int64_t scale_cost(double cost);

// c(l, r): objective contribution if driver r parks in lot l.
class CostMatrix {
 public:
  CostMatrix() = default;
  CostMatrix(std::size_t lots, std::size_t drivers, double fill = 0.0)
      : lots_(lots), drivers_(drivers), values_(lots * drivers, fill) {}

  double& at(std::size_t lot, std::size_t driver) { return values_[lot * drivers_ + driver]; }
  double at(std::size_t lot, std::size_t driver) const { return values_[lot * drivers_ + driver]; }
  std::size_t lots() const { return lots_; }
  std::size_t drivers() const { return drivers_; }

 private:
  std::size_t lots_ = 0;
  std::size_t drivers_ = 0;
  std::vector<double> values_;
};

// Walking-time costs: c(l, r) = beta of r at lot l.
CostMatrix walking_time_costs(const Instance& instance);
// Deviation costs: c(l, r) = |beta of r at lot l - target|.
CostMatrix deviation_costs(const Instance& instance, double target);

// Drivers whose lot is fixed for a solve.
struct FrozenSet {
  std::vector<int> members;
  std::vector<int> frozen_lot;  // parallel to members

  static FrozenSet from_assignment(std::span<const int> members, std::span<const int> dest_lot);
  bool empty() const { return members.empty(); }
};

// cap(l, t): how many non-frozen drivers ending at or before t may still be
// sent to l. Column 0 holds capacity minus initial occupancy.
PeriodGrid residual_capacity(const Instance& instance, const FrozenSet& frozen);

// One driver's admissible choices in a generic assignment subproblem. A
// driver with a bypass may be left unassigned at that cost.
struct DriverOptions {
  int driver = 0;
  int arrival_period = 1;
  std::vector<std::pair<int, std::int64_t>> lots;  // (lot, scaled cost)
  std::optional<std::int64_t> bypass_cost;
};

struct OptionProblem {
  PeriodGrid capacity;  // residual prefix capacities
  std::vector<DriverOptions> drivers;
};

struct AssignmentNetwork {
  FlowNetwork network;
  std::int64_t required_flow = 0;
  // For each arc: index into OptionProblem::drivers and chosen lot (-1 =
  // bypass), or driver -1 for arcs that do not encode a choice.
  std::vector<int> arc_driver;
  std::vector<int> arc_lot;
};

// source -> driver (cap 1), driver -> (lot, arrival) (cap 1, choice cost),
// optional driver -> sink bypass, (lot, t) -> (lot, t + 1) with cap(l, t), and
// (lot, horizon) -> sink with cap(l, horizon). Negative capacities are
// clamped to zero here; callers check them first.
AssignmentNetwork build_option_network(const OptionProblem& problem);

// Network for the fixed-cost destination problem with a frozen subset.
AssignmentNetwork build_assignment_network(const Instance& instance, const CostMatrix& costs,
                                           const FrozenSet& frozen);

enum class SolveStatus { optimal, infeasible, negative_residual };

struct SolveResult {
  SolveStatus status = SolveStatus::infeasible;
  Assignment assignment;         // complete, frozen drivers included
  std::int64_t scaled_cost = 0;  // sum over non-frozen drivers
  std::int64_t max_flow = 0;
  std::vector<Violation> negative_cells;  // populated for negative_residual

  bool ok() const { return status == SolveStatus::optimal; }
  double cost() const { return static_cast<double>(scaled_cost) / kCostScale; }
};

struct OptionSolution {
  SolveStatus status = SolveStatus::infeasible;
  std::vector<int> choice;  // per OptionProblem driver: lot, or -1 when bypassed
  std::int64_t scaled_cost = 0;
  std::int64_t max_flow = 0;
  std::vector<Violation> negative_cells;
  bool ok() const { return status == SolveStatus::optimal; }
};

OptionSolution solve_options(const OptionProblem& problem);

// Minimum-cost completion of `frozen` subject to every lot capacity.
SolveResult solve_exact(const Instance& instance, const CostMatrix& costs,
                        const FrozenSet& frozen = {});

// Exhaustive reference. Throws std::length_error above 10^6 combinations.
SolveResult brute_force_assign(const Instance& instance, const CostMatrix& costs,
                               const FrozenSet& frozen = {});

}  // namespace fairpark
