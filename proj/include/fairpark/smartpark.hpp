#pragma once

// Dynamic per-step parking allocation with reservations. Drivers request a
// spot some periods before they arrive; each step re-optimises the pending
// drivers subject to lot capacities and a rule that nobody's utility cost
// gets worse than at the previous step.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fairpark/assign.hpp"
#include "fairpark/fairness.hpp"
#include "fairpark/model.hpp"

namespace fairpark {

// J(l, r) = lambda_r * M(l, r) / M_r + (1 - lambda_r) * D(l, r) / D_r.
struct UtilitySpec {
  std::vector<double> lambda;     // per driver, in [0, 1]
  CostMatrix monetary_cost;       // M(l, r)
  std::vector<double> max_money;  // M_r > 0
  CostMatrix distance;            // D(l, r), miles
  std::vector<double> max_distance;  // D_r > 0
};

void validate(const UtilitySpec& spec);
double utility(const UtilitySpec& spec, std::size_t driver, std::size_t lot);
// A lot is acceptable to a driver when both M(l, r) <= M_r and D(l, r) <= D_r.
bool within_limits(const UtilitySpec& spec, std::size_t driver, std::size_t lot);

struct ParkingRequest {
  int driver = 0;
  int request_time = 1;  // period of the request
  int arrival_time = 2;  // period the driver reaches the lot; must exceed request_time
  Point destination;
  double lambda = 0.5;
  std::vector<double> monetary_cost;  // per lot
  double max_money = 1.0;
  double max_distance = 1.0;
};

struct Scenario {
  std::vector<Lot> lots;
  int horizon = 24;
  double walking_speed = 3.10686;
  std::vector<std::vector<int>> departures;  // [lot][t - 1], vehicles leaving; empty = none
  std::vector<ParkingRequest> requests;      // ordered by request_time
};

class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void validate(const Scenario& scenario);
UtilitySpec utility_spec(const Scenario& scenario);

enum class ObjectiveMode { utility, fair };
const char* to_string(ObjectiveMode mode);

struct SmartParkParams {
  double epsilon = 0.1;  // fair mode: band half-width
  double delta = 1e-4;   // fair mode: tolerance on the mean utility cost
  int maxiter = 20;
};

// One pending driver at a step. `utility[l]` is +inf for lots outside the
// driver's limits. `previous` is the committed cost from the last step: the
// lot's J, 1 if the driver was assigned before and then dropped, or empty if
// the driver has never held a lot.
struct PendingDriver {
  int driver = 0;
  int arrival_period = 1;
  std::vector<double> utility;
  std::optional<double> previous;
  int previous_lot = -1;
};

struct StepInput {
  PeriodGrid capacity;  // residual prefix capacity after finalized drivers
  std::vector<PendingDriver> pending;
};

inline constexpr double kUnassignedCost = 1.0;

// Lots a pending driver may take at this step, and whether it may be left
// unassigned.
std::vector<int> allowed_lots(const PendingDriver& d);
bool bypass_allowed(const PendingDriver& d);

// Exact solve of one step objective. Utility mode minimises sum J plus 1 per
// unassigned driver; fair mode minimises sum |J - target| plus 1 per
// unassigned driver. `frozen[i] >= 0` pins pending driver i to that lot.
OptionSolution solve_step(const StepInput& input, ObjectiveMode mode, double target = 0.0,
                          const std::vector<int>& frozen = {});

struct StepResult {
  std::vector<int> choice;  // per pending driver: lot or -1
  std::int64_t scaled_objective = 0;
  double target = 0.0;      // fair mode: mean previous cost used as target
  int inner_iterations = 0; // fair mode: band-freezing rounds after the first solve
};

// Utility mode is a single solve. Fair mode starts from the target set by the
// mean previous cost of pending drivers that held a lot (0 if none), then
// repeatedly freezes drivers whose J lies within epsilon of the mean and
// re-solves against the new mean until it moves less than delta.
StepResult smartpark_step(const StepInput& input, ObjectiveMode mode, const SmartParkParams& params = {});

struct StepAudit {
  int step = 0;
  int pending = 0;
  int cost_increases = 0;         // drivers whose committed cost rose
  int overbooked_cells = 0;       // (lot, t) cells where reservations exceed capacity
};

struct SimulationResult {
  ObjectiveMode mode = ObjectiveMode::utility;
  std::vector<int> final_lot;         // per request index; -1 if unassigned at arrival
  std::vector<double> final_cost;     // J, or 1 when unassigned
  std::vector<int> unassigned;        // driver ids
  std::vector<double> assigned_beta;  // walking hours of assigned drivers
  std::vector<double> assigned_utility;
  MetricReport walk_metrics;          // over assigned_beta
  MetricReport utility_metrics;       // over assigned_utility
  std::vector<StepAudit> audit;

  int cost_increases() const;
  int overbooked_cells() const;
};

SimulationResult simulate(const Scenario& scenario, ObjectiveMode mode, const SmartParkParams& params = {});

struct ScenarioGenConfig {
  int grid = 3;             // lots on a grid x grid square
  double spacing = 0.25;    // miles between neighbouring lots
  int horizon = 24;
  double request_rate = 2.0;  // mean requests per period
  int lead_min = 1;           // periods between request and arrival
  int lead_max = 4;
  int capacity_min = 4;
  int capacity_max = 7;
  int occupancy_max = 2;
  double departure_prob = 0.1;  // per lot and period
  double price_min = 1.0;
  double price_max = 5.0;
  double limit_quantile = 0.95;  // M_r and D_r taken at this quantile over lots
  double walking_speed = 3.10686;
};

Scenario generate_scenario(const ScenarioGenConfig& config, std::uint64_t seed);

}  // namespace fairpark
