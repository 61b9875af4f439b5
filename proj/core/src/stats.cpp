#include "farm/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>
#include <utility>

#include "farm/error.hpp"

namespace farm {
namespace {

TestResult decide(std::optional<double> statistic, double p, double alpha) {
  p = std::clamp(p, 0.0, 1.0);
  return {statistic, p, alpha, p < alpha};
}

}  // namespace

TestResult two_proportion_ztest(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2, std::uint64_t n2,
                                double alpha) {
  if (n1 == 0 || n2 == 0 || x1 > n1 || x2 > n2) throw Error("two_proportion_ztest: need 0 <= x <= n and n >= 1");
  const double p1 = static_cast<double>(x1) / static_cast<double>(n1);
  const double p2 = static_cast<double>(x2) / static_cast<double>(n2);
  const double pooled = static_cast<double>(x1 + x2) / static_cast<double>(n1 + n2);
  const double var = pooled * (1.0 - pooled) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2));
  if (!(var > 0.0)) return {std::nullopt, 1.0, alpha, false};
  const double z = (p1 - p2) / std::sqrt(var);
  return decide(z, std::erfc(std::abs(z) / std::sqrt(2.0)), alpha);
}

TestResult time_significance(std::span<const double> a, std::span<const double> b, double alpha) {
  if (a.size() < kMinTimingRepetitions || b.size() < kMinTimingRepetitions) {
    throw Error("time_significance: need at least 5 repetitions per side");
  }
  auto mean_var = [](std::span<const double> x) {
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::pair{mean, ss / (n - 1.0)};
  };
  const auto [ma, va] = mean_var(a);
  const auto [mb, vb] = mean_var(b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double se2 = va / na + vb / nb;
  if (se2 == 0.0) {
    if (ma == mb) return decide(0.0, 1.0, alpha);
    return decide(ma > mb ? INFINITY : -INFINITY, 0.0, alpha);
  }
  const double t = (ma - mb) / std::sqrt(se2);
  const double df = se2 * se2 / ((va / na) * (va / na) / (na - 1.0) + (vb / nb) * (vb / nb) / (nb - 1.0));
  const boost::math::students_t dist(df);
  return decide(t, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))), alpha);
}

}  // namespace farm
