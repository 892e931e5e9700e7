#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "fairpark/assign.hpp"
#include "fairpark/model.hpp"

namespace fairpark {

// Raised when a baseline or initializer finds no feasible assignment.
class InfeasibleError : public std::runtime_error {
 public:
  explicit InfeasibleError(const std::string& what, SolveStatus status = SolveStatus::infeasible)
      : std::runtime_error(what), status(status) {}
  SolveStatus status;
};

// Greedy baseline could not park driver `driver` at period `period`.
class NoSpaceError : public std::runtime_error {
 public:
  NoSpaceError(int driver, int period)
      : std::runtime_error("no free lot for driver " + std::to_string(driver) + " at period " +
                           std::to_string(period)),
        driver(driver),
        period(period) {}
  int driver;
  int period;
};

enum class Initializer { min_sum, no_scheme };

struct MinEnvyParams {
  double epsilon = 0.1;  // relative half-width of the frozen band
  double delta = 1e-4;   // hours; convergence tolerance on the mean walk
  int maxiter = 20;
  Initializer initializer = Initializer::min_sum;
};

void validate(const MinEnvyParams& params);

struct IterationRecord {
  int iter = 0;
  double mean_walk = 0.0;   // hours
  double mean_envy = 0.0;   // hours
  int frozen_count = 0;
  double subproblem_cost = 0.0;    // optimal objective of the restricted solve
  double retained_cost = 0.0;      // same objective at the previous iterate
  bool feasible = false;           // check_feasible on this iterate
};

struct IterationTrace {
  Initializer initializer = Initializer::min_sum;
  double initial_mean_walk = 0.0;
  double initial_mean_envy = 0.0;
  bool converged = false;  // stopped on the delta test rather than maxiter
  std::vector<IterationRecord> records;

  int iterations() const { return static_cast<int>(records.size()); }
  // CSV with columns iter,H_minutes,F_minutes,S_size,subproblem_cost. Row 0
  // is the initial assignment.
  std::string to_csv() const;
};

struct MinEnvyResult {
  Assignment initial;
  Assignment assignment;
  IterationTrace trace;
};

Assignment min_sum(const Instance& instance);
Assignment no_scheme(const Instance& instance);
MinEnvyResult min_envy(const Instance& instance, const MinEnvyParams& params = {});

const char* to_string(Initializer init);

}  // namespace fairpark
