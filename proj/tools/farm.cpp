// farm: fuzzy association-rule mining pipeline for next-month dengue incidence.

#include <CLI11.hpp>
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "farm/bench.hpp"
#include "farm/io.hpp"
#include "farm/pipeline.hpp"
#include "farm/stats.hpp"

namespace {

// Values bound to CLI11 before they are folded into a PipelineConfig, so that
// only flags the user actually passed override the config file.
struct Flags {
  std::string features, dengue, encoding, sort_keys, output;
  std::vector<std::string> algorithms;
  std::uint64_t seed = 0, kmeans_seed = 0;
  std::size_t k_features = 0, k_dengue = 0, split_offset = 0, reps = 0;
  std::size_t synth_regions = 0, synth_months = 0, synth_features = 0;
  double min_support = 0, min_confidence = 0, train_fraction = 0, alpha = 0, alpha_cut = 0, outbreak_rate = 0;
};

struct Bound {
  CLI::App* app;
  std::vector<std::pair<CLI::Option*, std::function<void(farm::PipelineConfig&)>>> setters;

  template <class T>
  void add(const std::string& name, T& target, const std::string& help, std::function<void(farm::PipelineConfig&)> apply) {
    setters.emplace_back(app->add_option(name, target, help), std::move(apply));
  }

  void apply(farm::PipelineConfig& c) const {
    for (const auto& [opt, set] : setters) {
      if (opt->count() > 0) set(c);
    }
  }
};

Bound bind_common(CLI::App* app, Flags& f) {
  Bound b{app, {}};
  b.add("--features", f.features, "Features CSV (region,date,<feature...>)",
        [&f](auto& c) { c.features_csv = f.features; });
  b.add("--dengue", f.dengue, "Dengue CSV (region,date,<count>)", [&f](auto& c) { c.dengue_csv = f.dengue; });
  b.add("--seed", f.seed, "Synthetic-data seed (used when no CSVs are given)", [&f](auto& c) { c.synth_seed = f.seed; });
  b.add("--synth-regions", f.synth_regions, "Synthetic regions", [&f](auto& c) { c.synth.regions = f.synth_regions; });
  b.add("--synth-months", f.synth_months, "Synthetic months per region", [&f](auto& c) { c.synth.months = f.synth_months; });
  b.add("--synth-features", f.synth_features, "Synthetic feature count",
        [&f](auto& c) { c.synth.features = f.synth_features; });
  b.add("--outbreak-rate", f.outbreak_rate, "Synthetic high-incidence fraction",
        [&f](auto& c) { c.synth.outbreak_rate = f.outbreak_rate; });
  b.add("--k-features", f.k_features, "Clusters per feature (default 4)", [&f](auto& c) { c.k_features = f.k_features; });
  b.add("--k-dengue", f.k_dengue, "Dengue clusters (must be 2)", [&f](auto& c) { c.k_dengue = f.k_dengue; });
  b.add("--kmeans-seed", f.kmeans_seed, "k-means seed (default 0)", [&f](auto& c) { c.kmeans_seed = f.kmeans_seed; });
  b.add("--encoding", f.encoding, "argmax | alpha-cut", [&f](auto& c) {
    if (f.encoding == "argmax") {
      c.encoding.kind = farm::EncodingMode::Kind::Argmax;
    } else if (f.encoding == "alpha-cut") {
      c.encoding.kind = farm::EncodingMode::Kind::AlphaCut;
    } else {
      throw farm::Error("unknown encoding '" + f.encoding + "'");
    }
  });
  b.add("--alpha-cut", f.alpha_cut, "Membership level for alpha-cut encoding (default 0.5)",
        [&f](auto& c) { c.encoding.alpha = f.alpha_cut; });
  b.add("--min-support", f.min_support, "Minimum support fraction (default 0.05)",
        [&f](auto& c) { c.min_support = f.min_support; });
  b.add("--min-confidence", f.min_confidence, "Minimum rule confidence (default 0.8)",
        [&f](auto& c) { c.min_confidence = f.min_confidence; });
  b.add("--train-fraction", f.train_fraction, "Systematic split train fraction (default 0.8)",
        [&f](auto& c) { c.split.train_fraction = f.train_fraction; });
  b.add("--split-offset", f.split_offset, "Systematic split offset", [&f](auto& c) { c.split.stride_offset = f.split_offset; });
  b.add("--algorithm", f.algorithms, "fpgrowth | apriori | bruteforce (repeatable)", [&f](auto& c) {
    c.algorithms.clear();
    for (const auto& a : f.algorithms) c.algorithms.push_back(farm::parse_algorithm(a));
  });
  b.add("--sort-keys", f.sort_keys, "Rule order, e.g. confidence,antecedents,lift,consequent",
        [&f](auto& c) { c.sort_keys = farm::parse_sort_keys(f.sort_keys); });
  b.add("--alpha", f.alpha, "Significance level (default 0.05)", [&f](auto& c) { c.alpha = f.alpha; });
  b.add("--reps", f.reps, "Benchmark repetitions (default 10; 0 skips bench in run)", [&f](auto& c) { c.reps = f.reps; });
  b.add("--out", f.output, "Output directory (default farm-out)", [&f](auto& c) { c.output_dir = f.output; });
  app->add_option("--config", "JSON file with a full PipelineConfig; flags override it");
  return b;
}

std::string find_config_path(int argc, char** argv) {
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--config") == 0 && i + 1 < argc) return argv[i + 1];
    if (std::strncmp(argv[i], "--config=", 9) == 0) return argv[i] + 9;
  }
  return {};
}

void print_summary(const farm::PipelineSummary& s) {
  for (const auto& o : s.outcomes) {
    std::cout << farm::to_string(o.algorithm) << ": rules=" << o.rule_count << " tp=" << o.matrix.tp
              << " fp=" << o.matrix.fp << " tn=" << o.matrix.tn << " fn=" << o.matrix.fn
              << " defaulted=" << o.defaulted << '\n';
  }
}

int bench_synthetic(const farm::PipelineConfig& c, std::uint64_t seed) {
  const auto db = farm::make_benchmark_db(seed);
  std::vector<farm::BenchReport> reports;
  for (auto a : c.algorithms) {
    reports.push_back(farm::benchmark(a, db, c.min_support, {std::max<std::size_t>(c.reps, 1), true}));
    const auto& r = reports.back();
    std::cout << farm::to_string(a) << ": mean " << r.mean_time() << " s over " << r.wall_time.size()
              << " reps, tracked peak " << r.tracked_bytes_peak << " B, itemsets " << r.itemset_count << '\n';
  }
  farm::cross_check(reports);
  farm::io::write_bench(c.output_dir / farm::artifacts::kBench, reports);
  if (reports.size() >= 2 && reports[0].wall_time.size() >= farm::kMinTimingRepetitions) {
    const auto t = farm::time_significance(reports[0].wall_time, reports[1].wall_time, c.alpha);
    std::cout << "welch t=" << t.statistic.value_or(0.0) << " p=" << t.p_value
              << (t.reject_null ? " (significant)" : " (not significant)") << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"farm - fuzzy association rule mining for dengue incidence prediction"};
  app.require_subcommand(1);

  Flags flags;
  std::vector<Bound> bound;
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"run", "Run ingest, fuzzify, mine, classify, bench and eval"},
      {"ingest", "Load or synthesize data; write matrix.csv and norm_params.json"},
      {"fuzzify", "Cluster and fuzzify; write fuzzy_model.json and transactions.csv"},
      {"mine", "Mine frequent itemsets on the training split; write rules_<algorithm>.json"},
      {"classify", "Apply sorted rules to the test split; write predictions_<algorithm>.csv"},
      {"bench", "Time and measure the miners; write bench.json"},
      {"eval", "Compute metrics and significance tests; write metrics.json and report.json"},
      {"synth", "Write synthetic input CSVs (features.csv, dengue.csv) into --out"},
  };
  std::vector<CLI::App*> subs;
  for (const auto& cmd : commands) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    bound.push_back(bind_common(sub, flags));
    subs.push_back(sub);
  }
  std::string bench_dataset = "pipeline";
  std::uint64_t bench_seed = farm::kBenchmarkSeed;
  subs[5]->add_option("--dataset", bench_dataset, "pipeline | synthetic (10k x 50 dense basket data)")
      ->check(CLI::IsMember({"pipeline", "synthetic"}));
  subs[5]->add_option("--bench-seed", bench_seed, "Seed of the synthetic benchmark dataset");

  CLI11_PARSE(app, argc, argv);

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  const std::string name = commands[which].name;

  try {
    farm::PipelineConfig config;
    if (const auto path = find_config_path(argc, argv); !path.empty()) config = farm::load_config(path);
    bound[which].apply(config);

    if (name == "synth") {
      const auto matrix = farm::synth_generate(config.synth_seed.value_or(0), config.synth);
      const auto [features, dengue] = farm::matrix_to_series(matrix);
      farm::io::write_series_csv(config.output_dir / "features.csv", features);
      farm::io::write_series_csv(config.output_dir / "dengue.csv", dengue);
      std::cout << "wrote " << (config.output_dir / "features.csv").string() << " and "
                << (config.output_dir / "dengue.csv").string() << '\n';
      return 0;
    }
    if (name == "bench" && bench_dataset == "synthetic") {
      farm::validate(config);
      return bench_synthetic(config, bench_seed);
    }
    if (name == "run") {
      print_summary(farm::run_pipeline(config));
      return 0;
    }
    static const std::pair<const char*, farm::Stage> kStages[] = {
        {"ingest", farm::Stage::Ingest}, {"fuzzify", farm::Stage::Fuzzify}, {"mine", farm::Stage::Mine},
        {"classify", farm::Stage::Classify}, {"bench", farm::Stage::Bench}, {"eval", farm::Stage::Eval}};
    for (const auto& [stage_name, stage] : kStages) {
      if (name == stage_name) farm::run_stage(stage, config);
    }
    if (name == "eval") print_summary(farm::summarize(config));
    return 0;
  } catch (const farm::StageError& e) {
    std::cerr << "farm: stage " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "farm: " << name << ": " << e.what() << '\n';
    return 1;
  }
}
