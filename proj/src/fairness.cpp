#include "fairpark/fairness.hpp"

#include <algorithm>
#include <numeric>

namespace fairpark {

namespace {

void require_nonempty(std::span<const double> beta, const char* what) {
  if (beta.empty()) throw std::invalid_argument(std::string(what) + ": empty input");
}

}  // namespace

double walking_time(Point destination, Point lot_location, double walking_speed) {
  if (!(walking_speed > 0.0)) throw std::invalid_argument("walking_time: speed must be positive");
  return l1_distance(destination, lot_location) / walking_speed;
}

double mean_envy(std::span<const double> beta) {
  require_nonempty(beta, "mean_envy");
  std::vector<double> sorted(beta.begin(), beta.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  // sum_{i<j} |b_(i) - b_(j)| = sum_i (2i - n - 1) b_(i), i 1-based
  double acc = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    acc += (2.0 * static_cast<double>(i + 1) - n - 1.0) * sorted[i];
  }
  return std::max(0.0, 2.0 * acc / (n * n));
}

double mean_walk(std::span<const double> beta) {
  require_nonempty(beta, "mean_walk");
  return std::accumulate(beta.begin(), beta.end(), 0.0) / static_cast<double>(beta.size());
}

double objective_g(std::span<const double> beta, double target_mean,
                   std::span<const int> excluded) {
  std::vector<char> skip(beta.size(), 0);
  for (int r : excluded) {
    if (r >= 0 && static_cast<std::size_t>(r) < beta.size()) skip[r] = 1;
  }
  double g = 0.0;
  for (std::size_t r = 0; r < beta.size(); ++r) {
    if (!skip[r]) g += std::abs(beta[r] - target_mean);
  }
  return g;
}

bool jains_degenerate(std::span<const double> beta) {
  return std::all_of(beta.begin(), beta.end(), [](double b) { return b == 0.0; });
}

double jains_index(std::span<const double> beta) {
  require_nonempty(beta, "jains_index");
  if (jains_degenerate(beta)) return 1.0;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double b : beta) {
    sum += b;
    sum_sq += b * b;
  }
  return sum * sum / (static_cast<double>(beta.size()) * sum_sq);
}

std::vector<int> select_band(std::span<const double> beta, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("select_band: epsilon must be positive");
  std::vector<int> members;
  if (beta.empty()) return members;
  const double h = mean_walk(beta);
  const double lo = (1.0 - epsilon) * h;
  const double hi = (1.0 + epsilon) * h;
  for (std::size_t r = 0; r < beta.size(); ++r) {
    if (beta[r] >= lo && beta[r] <= hi) members.push_back(static_cast<int>(r));
  }
  return members;
}

MetricReport compute_metrics(std::span<const double> beta) {
  MetricReport m;
  m.per_driver_beta.assign(beta.begin(), beta.end());
  if (beta.empty()) return m;
  m.mean_envy = mean_envy(beta);
  m.mean_walk = mean_walk(beta);
  m.jains = jains_index(beta);
  m.jains_degenerate = jains_degenerate(beta);
  return m;
}

}  // namespace fairpark
