#pragma once

// Test-only reference computations, written independently of the library's
// algorithms.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <vector>

namespace farm::testing {

/// Minimum within-cluster sum of squares over every assignment of `points`
/// to `k` labels (k^n enumeration), returned as sorted cluster means.
inline std::vector<double> brute_force_kmeans(const std::vector<double>& points, std::size_t k) {
  const std::size_t n = points.size();
  std::vector<std::size_t> label(n, 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_means;
  while (true) {
    std::vector<double> sum(k, 0.0);
    std::vector<std::size_t> cnt(k, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[label[i]] += points[i];
      ++cnt[label[i]];
    }
    if (std::all_of(cnt.begin(), cnt.end(), [](std::size_t c) { return c > 0; })) {
      double sse = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double m = sum[label[i]] / static_cast<double>(cnt[label[i]]);
        sse += (points[i] - m) * (points[i] - m);
      }
      if (sse < best) {
        best = sse;
        best_means.clear();
        for (std::size_t c = 0; c < k; ++c) best_means.push_back(sum[c] / static_cast<double>(cnt[c]));
      }
    }
    std::size_t pos = 0;
    while (pos < n && ++label[pos] == k) label[pos++] = 0;
    if (pos == n) break;
  }
  std::sort(best_means.begin(), best_means.end());
  return best_means;
}

/// Itemset -> count by direct enumeration of every subset of every
/// transaction, filtered by `min_count`.
inline std::map<std::vector<std::uint32_t>, std::uint64_t> subset_enumeration_counts(
    const std::vector<std::vector<std::uint32_t>>& db, std::uint64_t min_count) {
  std::map<std::vector<std::uint32_t>, std::uint64_t> counts;
  for (auto t : db) {
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    const std::size_t m = t.size();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
      std::vector<std::uint32_t> s;
      for (std::size_t b = 0; b < m; ++b) {
        if (mask & (std::uint64_t{1} << b)) s.push_back(t[b]);
      }
      ++counts[s];
    }
  }
  for (auto it = counts.begin(); it != counts.end();) {
    it = it->second < min_count ? counts.erase(it) : std::next(it);
  }
  return counts;
}

/// Random transaction database: up to `max_items` items, up to `max_rows`
/// rows, each row nonempty.
inline std::vector<std::vector<std::uint32_t>> random_db(std::mt19937_64& rng, std::size_t max_items,
                                                         std::size_t max_rows) {
  std::uniform_int_distribution<std::size_t> n_items(1, max_items);
  std::uniform_int_distribution<std::size_t> n_rows(1, max_rows);
  const std::size_t items = n_items(rng);
  const std::size_t rows = n_rows(rng);
  std::uniform_real_distribution<double> density(0.15, 0.75);
  const double p = density(rng);
  std::bernoulli_distribution take(p);
  std::uniform_int_distribution<std::uint32_t> any(0, static_cast<std::uint32_t>(items - 1));
  std::vector<std::vector<std::uint32_t>> db(rows);
  for (auto& row : db) {
    for (std::uint32_t i = 0; i < items; ++i) {
      if (take(rng)) row.push_back(i);
    }
    if (row.empty()) row.push_back(any(rng));
  }
  return db;
}

}  // namespace farm::testing
