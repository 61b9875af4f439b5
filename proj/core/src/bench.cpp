#include "farm/bench.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>
#include <limits>
#include <numeric>

#include "farm/rng.hpp"

namespace farm {

std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::FPGrowth: return "fpgrowth";
    case Algorithm::Apriori: return "apriori";
    case Algorithm::BruteForce: return "bruteforce";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "fpgrowth") return Algorithm::FPGrowth;
  if (text == "apriori") return Algorithm::Apriori;
  if (text == "bruteforce") return Algorithm::BruteForce;
  throw Error("unknown algorithm '" + std::string(text) + "' (expected fpgrowth, apriori or bruteforce)");
}

std::vector<FrequentItemSet> mine(Algorithm algorithm, const TransactionDb& db, double min_support,
                                  MemoryTracker* tracker) {
  switch (algorithm) {
    case Algorithm::FPGrowth: return mine_fpgrowth(db, min_support, {}, tracker);
    case Algorithm::Apriori: return mine_apriori(db, min_support, tracker);
    case Algorithm::BruteForce: {
      if (tracker != nullptr) tracker->charge(transaction_storage_bytes(db));
      auto out = brute_force_frequent(db, min_support);
      if (tracker != nullptr) tracker->release(transaction_storage_bytes(db));
      return out;
    }
  }
  throw Error("unknown algorithm");
}

double BenchReport::mean_time() const {
  if (wall_time.empty()) return 0.0;
  return std::accumulate(wall_time.begin(), wall_time.end(), 0.0) / static_cast<double>(wall_time.size());
}

BenchReport benchmark(Algorithm algorithm, const TransactionDb& db, double min_support, const BenchOptions& options) {
  if (options.repetitions == 0) throw Error("benchmark: repetitions must be at least 1");
  BenchReport report;
  report.algorithm = algorithm;
  report.min_support = min_support;
  report.dataset_fingerprint = dataset_fingerprint(db);

  if (options.warmup) (void)mine(algorithm, db, min_support);

  using Clock = std::chrono::steady_clock;
  for (std::size_t r = 0; r < options.repetitions; ++r) {
    MemoryTracker tracker;
    const auto start = Clock::now();
    const auto sets = mine(algorithm, db, min_support, &tracker);
    const auto stop = Clock::now();
    double seconds = std::chrono::duration<double>(stop - start).count();
    // steady_clock can report zero for trivially small inputs.
    if (seconds <= 0.0) seconds = std::numeric_limits<double>::min();
    report.wall_time.push_back(seconds);
    if (r == 0) {
      report.tracked_bytes_peak = tracker.peak();
      report.itemset_count = sets.size();
    } else if (tracker.peak() != report.tracked_bytes_peak || sets.size() != report.itemset_count) {
      throw Error("benchmark: repetitions of " + std::string(to_string(algorithm)) + " disagree");
    }
  }
  report.rss_peak = peak_rss_bytes();
  return report;
}

void cross_check(std::span<const BenchReport> reports) {
  if (reports.empty()) return;
  const auto& ref = reports.front();
  for (const auto& r : reports) {
    if (r.dataset_fingerprint != ref.dataset_fingerprint || r.min_support != ref.min_support) {
      throw Error("benchmark cross-check: reports cover different datasets or thresholds");
    }
    if (r.itemset_count != ref.itemset_count) {
      throw Error("benchmark cross-check: " + std::string(to_string(r.algorithm)) + " found " +
                  std::to_string(r.itemset_count) + " itemsets but " + std::string(to_string(ref.algorithm)) +
                  " found " + std::to_string(ref.itemset_count));
    }
  }
}

std::uint64_t dataset_fingerprint(const TransactionDb& db) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 0x100000001b3ULL;
    }
  };
  mix(db.size());
  db.for_each([&](const Itemset& t) {
    mix(t.size());
    for (ItemId i : t) mix(i);
  });
  return h;
}

std::optional<std::size_t> peak_rss_bytes() {
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) != 0 || usage.ru_maxrss <= 0) return std::nullopt;
  return static_cast<std::size_t>(usage.ru_maxrss) * 1024;  // Linux reports KiB
}

TransactionDb make_benchmark_db(std::uint64_t seed, const BenchDbConfig& config) {
  if (config.items == 0 || config.transactions == 0) throw Error("make_benchmark_db: empty configuration");
  Rng rng(seed);
  std::vector<Itemset> patterns(config.patterns);
  for (auto& p : patterns) {
    while (p.size() < std::min(config.pattern_length, config.items)) {
      const auto item = static_cast<ItemId>(rng.index(config.items));
      if (std::find(p.begin(), p.end(), item) == p.end()) p.push_back(item);
    }
  }
  std::vector<Itemset> rows(config.transactions);
  for (auto& row : rows) {
    for (const auto& p : patterns) {
      if (!rng.bernoulli(config.pattern_rate)) continue;
      for (ItemId i : p) {
        if (rng.bernoulli(config.pattern_keep)) row.push_back(i);
      }
    }
    for (ItemId i = 0; i < config.items; ++i) {
      if (rng.bernoulli(config.noise_rate)) row.push_back(i);
    }
    if (row.empty()) row.push_back(static_cast<ItemId>(rng.index(config.items)));
  }
  return TransactionDb(std::move(rows));
}

}  // namespace farm
