#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fairpark/model.hpp"

namespace fairpark {

struct KMeansResult {
  std::vector<Point> centroids;
  std::vector<int> labels;
  int iterations = 0;
  double inertia = 0.0;  // within-cluster sum of squared distances
};

// Lloyd's algorithm from farthest-point seeding. The first seed is drawn
// with `seed`; later seeds are the points farthest from the chosen set. Runs
// until no centroid moves more than 1e-9 or 100 iterations. An empty cluster
// is reseeded at the point farthest from its own centroid. Throws
// std::invalid_argument with fewer than k distinct points.
KMeansResult kmeans(std::span<const Point> points, int k, std::uint64_t seed);

// Nearest-centroid labelling (squared Euclidean, ties to the lowest index).
// The parallel kernel splits points across OpenMP threads; both produce the
// same labels.
void assign_clusters_serial(std::span<const Point> points, std::span<const Point> centroids,
                            std::span<int> labels);
void assign_clusters_parallel(std::span<const Point> points, std::span<const Point> centroids,
                              std::span<int> labels);

double squared_distance(Point a, Point b);

}  // namespace fairpark
