// Microbenchmarks for the miners and the FP-tree build on the dense synthetic
// basket data, scaled down so a full sweep finishes in seconds.

#include <benchmark/benchmark.h>

#include <map>

#include "farm/bench.hpp"
#include "farm/mine.hpp"

namespace {

const farm::TransactionDb& dataset(std::size_t transactions) {
  static std::map<std::size_t, farm::TransactionDb> cache;
  auto it = cache.find(transactions);
  if (it == cache.end()) {
    it = cache.emplace(transactions, farm::make_benchmark_db(farm::kBenchmarkSeed, {.transactions = transactions}))
             .first;
  }
  return it->second;
}

constexpr double kMinSupport = 0.1;

void BM_BuildFPTree(benchmark::State& state) {
  const auto& db = dataset(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto tree = farm::build_fptree(db, kMinSupport);
    benchmark::DoNotOptimize(tree.node_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(db.size()));
}

void BM_FPGrowth(benchmark::State& state) {
  const auto& db = dataset(static_cast<std::size_t>(state.range(0)));
  farm::MemoryTracker tracker;
  std::size_t count = 0;
  for (auto _ : state) count = farm::mine_fpgrowth(db, kMinSupport, {}, &tracker).size();
  state.counters["itemsets"] = static_cast<double>(count);
  state.counters["tracked_peak_bytes"] = static_cast<double>(tracker.peak());
}

void BM_Apriori(benchmark::State& state) {
  const auto& db = dataset(static_cast<std::size_t>(state.range(0)));
  farm::MemoryTracker tracker;
  std::size_t count = 0;
  for (auto _ : state) count = farm::mine_apriori(db, kMinSupport, &tracker).size();
  state.counters["itemsets"] = static_cast<double>(count);
  state.counters["tracked_peak_bytes"] = static_cast<double>(tracker.peak());
}

}  // namespace

BENCHMARK(BM_BuildFPTree)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FPGrowth)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Apriori)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
