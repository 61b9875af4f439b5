#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace farm {

/// Sorted, strictly increasing 1-D cluster centers for one feature.
struct Centroids {
  std::string feature;
  std::vector<double> centers;

  [[nodiscard]] std::size_t k() const { return centers.size(); }
};

struct KMeansTrace {
  std::vector<double> inertia;  // within-cluster sum of squares after each update
  std::size_t iterations = 0;
  std::size_t reseeds = 0;
};

/// Lloyd's algorithm on scalar data.
///
/// Initial centers are k distinct data points drawn with k-means++ D^2
/// weighting from a seeded Rng. Iteration alternates nearest-center
/// assignment and mean update until no point changes cluster; a point only
/// moves when another center is strictly nearer, which guarantees termination.
/// An emptied cluster is re-seeded at the point farthest from its center.
Centroids kmeans(std::span<const double> points, std::size_t k, std::uint64_t seed,
                 KMeansTrace* trace = nullptr);

/// Within-cluster sum of squares of `points` against their nearest center.
double kmeans_inertia(std::span<const double> points, std::span<const double> centers);

}  // namespace farm
