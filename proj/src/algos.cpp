#include "fairpark/algos.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "fairpark/fairness.hpp"

namespace fairpark {

const char* to_string(Initializer init) {
  return init == Initializer::min_sum ? "min-sum" : "no-scheme";
}

void validate(const MinEnvyParams& params) {
  if (!(params.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(params.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (params.maxiter < 1) throw std::invalid_argument("maxiter must be positive");
}

std::string IterationTrace::to_csv() const {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "iter,H_minutes,F_minutes,S_size,subproblem_cost\n";
  os << 0 << ',' << to_minutes(initial_mean_walk) << ',' << to_minutes(initial_mean_envy) << ",0,0\n";
  for (const IterationRecord& rec : records) {
    os << rec.iter << ',' << to_minutes(rec.mean_walk) << ',' << to_minutes(rec.mean_envy) << ','
       << rec.frozen_count << ',' << to_minutes(rec.subproblem_cost) << '\n';
  }
  return os.str();
}

Assignment min_sum(const Instance& instance) {
  const SolveResult res = solve_exact(instance, walking_time_costs(instance));
  if (!res.ok()) throw InfeasibleError("min_sum: no feasible assignment", res.status);
  return res.assignment;
}

Assignment no_scheme(const Instance& instance) {
  const std::size_t n_lots = instance.num_lots();
  std::vector<int> occupancy(n_lots);
  for (std::size_t l = 0; l < n_lots; ++l) occupancy[l] = instance.lots[l].initial_occupancy;

  std::vector<std::vector<int>> departing(instance.horizon + 1);
  std::vector<std::vector<int>> arriving(instance.horizon + 1);
  for (std::size_t r = 0; r < instance.num_drivers(); ++r) {
    departing[instance.trips[r].start_period].push_back(instance.origin_lot[r]);
    arriving[instance.trips[r].end_period].push_back(static_cast<int>(r));
  }

  std::vector<int> dest(instance.num_drivers(), -1);
  for (int t = 1; t <= instance.horizon; ++t) {
    for (int lot : departing[t]) --occupancy[lot];
    for (int r : arriving[t]) {
      const Point d = instance.trips[r].destination;
      int best = -1;
      double best_dist = std::numeric_limits<double>::infinity();
      for (std::size_t l = 0; l < n_lots; ++l) {
        if (occupancy[l] >= instance.lots[l].capacity) continue;
        const double dist = l1_distance(d, instance.lots[l].location);
        if (dist < best_dist) {
          best_dist = dist;
          best = static_cast<int>(l);
        }
      }
      if (best < 0) throw NoSpaceError(r, t);
      ++occupancy[best];
      dest[r] = best;
    }
  }
  return make_assignment(instance, std::move(dest));
}

MinEnvyResult min_envy(const Instance& instance, const MinEnvyParams& params) {
  validate(params);
  MinEnvyResult out;
  out.trace.initializer = params.initializer;
  out.initial = params.initializer == Initializer::min_sum ? min_sum(instance) : no_scheme(instance);
  out.assignment = out.initial;
  if (instance.num_drivers() == 0) {
    out.trace.converged = true;
    return out;
  }
  out.trace.initial_mean_walk = mean_walk(out.initial.beta);
  out.trace.initial_mean_envy = mean_envy(out.initial.beta);

  for (int i = 1;; ++i) {
    const Assignment& prev = out.assignment;
    const double target = mean_walk(prev.beta);
    const std::vector<int> band = select_band(prev.beta, params.epsilon);
    const CostMatrix costs = deviation_costs(instance, target);
    const FrozenSet frozen = FrozenSet::from_assignment(band, prev.dest_lot);

    std::vector<char> in_band(instance.num_drivers(), 0);
    for (int r : band) in_band[r] = 1;
    std::int64_t retained = 0;
    for (std::size_t r = 0; r < instance.num_drivers(); ++r) {
      if (!in_band[r]) retained += scale_cost(costs.at(prev.dest_lot[r], r));
    }

    SolveResult res = solve_exact(instance, costs, frozen);
    // The previous iterate is itself a feasible completion, so this only
    // fires if the instance was modified underneath us.
    if (!res.ok()) throw InfeasibleError("min_envy: restricted subproblem infeasible", res.status);

    IterationRecord rec;
    rec.iter = i;
    rec.mean_walk = mean_walk(res.assignment.beta);
    rec.mean_envy = mean_envy(res.assignment.beta);
    rec.frozen_count = static_cast<int>(band.size());
    rec.subproblem_cost = res.cost();
    rec.retained_cost = static_cast<double>(retained) / kCostScale;
    rec.feasible = check_feasible(instance, res.assignment.dest_lot).feasible;
    out.trace.records.push_back(rec);

    const bool converged = std::abs(rec.mean_walk - target) < params.delta;
    out.assignment = std::move(res.assignment);
    if (converged || i > params.maxiter) {
      out.trace.converged = converged;
      break;
    }
  }
  return out;
}

}  // namespace fairpark
