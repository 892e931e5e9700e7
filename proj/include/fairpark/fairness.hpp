#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "fairpark/model.hpp"

namespace fairpark {

// All metric inputs and outputs are in hours. Walking time is distance over
// speed: the product form would not yield a time for a speed in miles/hour.

double walking_time(Point destination, Point lot_location, double walking_speed);

inline double envy(double beta_a, double beta_b) { return std::abs(beta_a - beta_b); }

// Mean |b_i - b_j| over all n^2 ordered pairs, diagonal included. Computed in
// O(n log n) from the sorted order.
double mean_envy(std::span<const double> beta);

double mean_walk(std::span<const double> beta);

// Sum over drivers not in `excluded` of |beta_r - target_mean|. `excluded`
// holds driver indices; duplicates are ignored.
double objective_g(std::span<const double> beta, double target_mean,
                   std::span<const int> excluded = {});

// (sum b)^2 / (n * sum b^2). All-zero input is degenerate and returns 1.
double jains_index(std::span<const double> beta);
bool jains_degenerate(std::span<const double> beta);

// Drivers whose walking time lies in [(1-eps)H, (1+eps)H], endpoints included.
std::vector<int> select_band(std::span<const double> beta, double epsilon);

struct MetricReport {
  double mean_envy = 0.0;  // F, hours
  double mean_walk = 0.0;  // H, hours
  double jains = 1.0;
  bool jains_degenerate = false;
  std::vector<double> per_driver_beta;
};

MetricReport compute_metrics(std::span<const double> beta);

constexpr double kMinutesPerHour = 60.0;
inline double to_minutes(double hours) { return hours * kMinutesPerHour; }

}  // namespace fairpark
