#pragma once

#include <cstdint>
#include <optional>
#include <span>

namespace farm {

struct TestResult {
  std::optional<double> statistic;  // undefined for a degenerate pooled variance
  double p_value = 1.0;
  double alpha = 0.05;
  bool reject_null = false;  // p_value < alpha
};

/// Pooled two-proportion z-test, two-sided.
TestResult two_proportion_ztest(std::uint64_t x1, std::uint64_t n1, std::uint64_t x2, std::uint64_t n2,
                                double alpha = 0.05);

/// Welch's unequal-variance t-test on two timing samples, two-sided. Each side
/// needs at least 5 observations.
TestResult time_significance(std::span<const double> times_a, std::span<const double> times_b,
                             double alpha = 0.05);

inline constexpr std::size_t kMinTimingRepetitions = 5;

}  // namespace farm
