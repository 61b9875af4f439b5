#include "farm/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "farm/error.hpp"
#include "farm/rng.hpp"

namespace farm {
namespace {

std::size_t nearest(double x, std::span<const double> centers) {
  std::size_t best = 0;
  double best_d = std::abs(x - centers[0]);
  for (std::size_t c = 1; c < centers.size(); ++c) {
    const double d = std::abs(x - centers[c]);
    if (d < best_d) {
      best = c;
      best_d = d;
    }
  }
  return best;
}

std::vector<double> seed_centers(std::span<const double> points, std::size_t k, Rng& rng) {
  std::vector<double> centers;
  centers.reserve(k);
  centers.push_back(points[rng.index(points.size())]);
  std::vector<double> d2(points.size());
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (double c : centers) best = std::min(best, (points[i] - c) * (points[i] - c));
      d2[i] = best;
      total += best;
    }
    // Only points at positive distance carry weight, so picks stay distinct.
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t pick = points.size();
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (d2[i] <= 0.0) continue;
      acc += d2[i];
      pick = i;
      if (acc > target) break;
    }
    centers.push_back(points[pick]);
  }
  return centers;
}

}  // namespace

double kmeans_inertia(std::span<const double> points, std::span<const double> centers) {
  double sum = 0.0;
  for (double x : points) {
    const double d = x - centers[nearest(x, centers)];
    sum += d * d;
  }
  return sum;
}

Centroids kmeans(std::span<const double> points, std::size_t k, std::uint64_t seed, KMeansTrace* trace) {
  if (k == 0) throw Error("kmeans: k must be at least 1");
  for (double x : points) {
    if (!std::isfinite(x)) throw Error("kmeans: non-finite input");
  }
  const std::set<double> distinct(points.begin(), points.end());
  if (distinct.size() < k) {
    throw Error("kmeans: " + std::to_string(distinct.size()) + " distinct points cannot form " +
                std::to_string(k) + " clusters");
  }

  Rng rng(seed);
  std::vector<double> centers = seed_centers(points, k, rng);
  std::vector<std::size_t> assign(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) assign[i] = nearest(points[i], centers);

  KMeansTrace local;
  KMeansTrace& t = trace != nullptr ? *trace : local;
  t = {};

  std::vector<double> sums(k);
  std::vector<std::size_t> counts(k);
  while (true) {
    ++t.iterations;
    std::fill(sums.begin(), sums.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
      sums[assign[i]] += points[i];
      ++counts[assign[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) centers[c] = sums[c] / static_cast<double>(counts[c]);
    }
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] > 0) continue;
      std::size_t far = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = std::abs(points[i] - centers[assign[i]]);
        if (d > far_d) {
          far = i;
          far_d = d;
        }
      }
      centers[c] = points[far];
      --counts[assign[far]];
      assign[far] = c;
      counts[c] = 1;
      ++t.reseeds;
    }

    double inertia = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double d = points[i] - centers[assign[i]];
      inertia += d * d;
    }
    t.inertia.push_back(inertia);

    bool changed = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
      const double current = std::abs(points[i] - centers[assign[i]]);
      const std::size_t best = nearest(points[i], centers);
      if (best != assign[i] && std::abs(points[i] - centers[best]) < current) {
        assign[i] = best;
        changed = true;
      }
    }
    if (!changed) break;
  }

  std::sort(centers.begin(), centers.end());
  return Centroids{{}, std::move(centers)};
}

}  // namespace farm
