#include "fairpark/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fairpark/rng.hpp"

namespace fairpark {

namespace {

constexpr int kMaxIterations = 100;
constexpr double kShiftTolerance = 1e-9;
// Below this many points the thread start-up costs more than the loop.
constexpr std::size_t kParallelThreshold = 4096;

int nearest_centroid(Point p, std::span<const Point> centroids) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centroids.size(); ++c) {
    const double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  return best;
}

std::size_t count_distinct(std::span<const Point> points) {
  std::vector<std::pair<double, double>> v;
  v.reserve(points.size());
  for (Point p : points) v.emplace_back(p.x, p.y);
  std::sort(v.begin(), v.end());
  return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

}  // namespace

double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

void assign_clusters_serial(std::span<const Point> points, std::span<const Point> centroids,
                            std::span<int> labels) {
  for (std::size_t i = 0; i < points.size(); ++i) labels[i] = nearest_centroid(points[i], centroids);
}

void assign_clusters_parallel(std::span<const Point> points, std::span<const Point> centroids,
                              std::span<int> labels) {
  const auto n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) labels[i] = nearest_centroid(points[i], centroids);
}

KMeansResult kmeans(std::span<const Point> points, int k, std::uint64_t seed) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (count_distinct(points) < static_cast<std::size_t>(k))
    throw std::invalid_argument("kmeans: fewer distinct points than clusters");

  const std::size_t n = points.size();
  KMeansResult res;
  Rng rng(seed);

  // Farthest-point seeding.
  std::vector<double> min_d(n, std::numeric_limits<double>::infinity());
  std::size_t pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(n) - 1));
  for (int c = 0; c < k; ++c) {
    res.centroids.push_back(points[pick]);
    for (std::size_t i = 0; i < n; ++i) min_d[i] = std::min(min_d[i], squared_distance(points[i], points[pick]));
    pick = static_cast<std::size_t>(std::max_element(min_d.begin(), min_d.end()) - min_d.begin());
  }

  res.labels.assign(n, 0);
  auto label = n >= kParallelThreshold ? assign_clusters_parallel : assign_clusters_serial;
  std::vector<Point> sums(k);
  std::vector<int> counts(k);
  for (res.iterations = 1; res.iterations <= kMaxIterations; ++res.iterations) {
    label(points, res.centroids, res.labels);
    std::fill(sums.begin(), sums.end(), Point{});
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      sums[res.labels[i]].x += points[i].x;
      sums[res.labels[i]].y += points[i].y;
      ++counts[res.labels[i]];
    }
    double max_shift = 0.0;
    for (int c = 0; c < k; ++c) {
      Point next;
      if (counts[c] == 0) {
        std::size_t far = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = squared_distance(points[i], res.centroids[res.labels[i]]);
          if (d > far_d) {
            far_d = d;
            far = i;
          }
        }
        next = points[far];
        res.labels[far] = c;
      } else {
        next = {sums[c].x / counts[c], sums[c].y / counts[c]};
      }
      max_shift = std::max(max_shift, std::sqrt(squared_distance(next, res.centroids[c])));
      res.centroids[c] = next;
    }
    if (max_shift < kShiftTolerance) break;
  }
  res.iterations = std::min(res.iterations, kMaxIterations);
  label(points, res.centroids, res.labels);
  for (std::size_t i = 0; i < n; ++i) res.inertia += squared_distance(points[i], res.centroids[res.labels[i]]);
  return res;
}

}  // namespace fairpark
