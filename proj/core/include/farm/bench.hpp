#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "farm/mine.hpp"

namespace farm {

enum class Algorithm { FPGrowth, Apriori, BruteForce };

std::string_view to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view text);

/// Runs the selected miner single-threaded.
std::vector<FrequentItemSet> mine(Algorithm algorithm, const TransactionDb& db, double min_support,
                                  MemoryTracker* tracker = nullptr);

struct BenchOptions {
  std::size_t repetitions = 10;
  bool warmup = true;  // one discarded run before the timed ones
};

struct BenchReport {
  Algorithm algorithm = Algorithm::FPGrowth;
  double min_support = 0.0;
  std::vector<double> wall_time;  // seconds, one entry per repetition
  std::size_t tracked_bytes_peak = 0;
  std::optional<std::size_t> rss_peak;  // process high-water mark, bytes
  std::size_t itemset_count = 0;
  std::uint64_t dataset_fingerprint = 0;

  [[nodiscard]] double mean_time() const;
};

/// Times `repetitions` runs on the in-memory database; loading is excluded.
BenchReport benchmark(Algorithm algorithm, const TransactionDb& db, double min_support,
                      const BenchOptions& options = {});

/// Throws farm::Error unless every report saw the same dataset, threshold and
/// itemset count.
void cross_check(std::span<const BenchReport> reports);

/// FNV-1a over the transaction contents.
std::uint64_t dataset_fingerprint(const TransactionDb& db);

/// Peak resident set size of this process, when the OS reports it.
std::optional<std::size_t> peak_rss_bytes();

struct BenchDbConfig {
  std::size_t transactions = 10000;
  std::size_t items = 50;
  std::size_t patterns = 12;        // correlated item groups
  std::size_t pattern_length = 7;
  double pattern_rate = 0.25;       // chance each pattern is embedded in a transaction
  double pattern_keep = 0.85;       // chance each pattern item survives embedding
  double noise_rate = 0.05;         // chance of each independent background item
};

inline constexpr std::uint64_t kBenchmarkSeed = 7;

/// Dense synthetic basket data with planted co-occurring groups.
TransactionDb make_benchmark_db(std::uint64_t seed, const BenchDbConfig& config = {});

}  // namespace farm
