#include "farm/pipeline.hpp"

#include <algorithm>
#include <iostream>
#include <json.hpp>

#include "farm/io.hpp"
#include "farm/metrics.hpp"
#include "farm/stats.hpp"

namespace farm {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::Ingest: return "ingest";
    case Stage::Fuzzify: return "fuzzify";
    case Stage::Mine: return "mine";
    case Stage::Classify: return "classify";
    case Stage::Bench: return "bench";
    case Stage::Eval: return "eval";
  }
  return "?";
}

StageError::StageError(Stage stage, const std::string& message)
    : Error(std::string(to_string(stage)) + ": " + message), stage_(stage) {}

namespace artifacts {
std::string rules(Algorithm a) { return "rules_" + std::string(to_string(a)) + ".json"; }
std::string predictions(Algorithm a) { return "predictions_" + std::string(to_string(a)) + ".csv"; }
}  // namespace artifacts

void validate(const PipelineConfig& c) {
  if (c.k_features < 2) throw Error("config: k_features must be at least 2");
  if (c.k_dengue != 2) throw Error("config: k_dengue must be 2 (High/Low)");
  if (!(c.min_support > 0.0 && c.min_support <= 1.0)) throw Error("config: min_support must lie in (0, 1]");
  if (!(c.min_confidence >= 0.0 && c.min_confidence <= 1.0)) throw Error("config: min_confidence must lie in [0, 1]");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw Error("config: alpha must lie in (0, 1)");
  if (c.encoding.kind == EncodingMode::Kind::AlphaCut && !(c.encoding.alpha > 0.0 && c.encoding.alpha <= 1.0)) {
    throw Error("config: alpha-cut level must lie in (0, 1]");
  }
  if (c.algorithms.empty()) throw Error("config: select at least one algorithm");
  if (c.sort_keys.empty()) throw Error("config: sort keys must not be empty");
  (void)split_stride(c.split);
}

// --- config <-> json ---------------------------------------------------------

namespace {

json to_json(const PipelineConfig& c) {
  json algorithms = json::array();
  for (auto a : c.algorithms) algorithms.push_back(std::string(to_string(a)));
  return {
      {"features_csv", c.features_csv ? json(c.features_csv->string()) : json(nullptr)},
      {"dengue_csv", c.dengue_csv ? json(c.dengue_csv->string()) : json(nullptr)},
      {"synth_seed", c.synth_seed ? json(*c.synth_seed) : json(nullptr)},
      {"synth",
       {{"regions", c.synth.regions},
        {"months", c.synth.months},
        {"features", c.synth.features},
        {"outbreak_rate", c.synth.outbreak_rate},
        {"start_year", c.synth.start_year}}},
      {"k_features", c.k_features},
      {"k_dengue", c.k_dengue},
      {"kmeans_seed", c.kmeans_seed},
      {"encoding", c.encoding.kind == EncodingMode::Kind::Argmax ? "argmax" : "alpha-cut"},
      {"alpha_cut", c.encoding.alpha},
      {"min_support", c.min_support},
      {"min_confidence", c.min_confidence},
      {"train_fraction", c.split.train_fraction},
      {"split_offset", c.split.stride_offset},
      {"algorithms", algorithms},
      {"sort_keys", format_sort_keys(c.sort_keys)},
      {"alpha", c.alpha},
      {"reps", c.reps},
      {"output_dir", c.output_dir.string()},
  };
}

}  // namespace

std::string config_to_json(const PipelineConfig& config) { return to_json(config).dump(2); }

PipelineConfig config_from_json(std::string_view text, PipelineConfig c) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("config: invalid JSON: ") + e.what());
  }
  static const std::vector<std::string> kKnown = {
      "features_csv", "dengue_csv", "synth_seed", "synth",     "k_features", "k_dengue", "kmeans_seed",
      "encoding",     "alpha_cut",  "min_support", "min_confidence", "train_fraction", "split_offset",
      "algorithms",   "sort_keys",  "alpha",      "reps",      "output_dir"};
  try {
    for (const auto& [key, value] : doc.items()) {
      if (std::find(kKnown.begin(), kKnown.end(), key) == kKnown.end()) throw Error("config: unknown key '" + key + "'");
    }
    auto path_opt = [&](const char* key, std::optional<fs::path>& out) {
      if (!doc.contains(key)) return;
      out = doc[key].is_null() ? std::nullopt : std::optional<fs::path>(doc[key].get<std::string>());
    };
    path_opt("features_csv", c.features_csv);
    path_opt("dengue_csv", c.dengue_csv);
    if (doc.contains("synth_seed")) {
      c.synth_seed = doc["synth_seed"].is_null() ? std::nullopt : std::optional(doc["synth_seed"].get<std::uint64_t>());
    }
    if (doc.contains("synth")) {
      const auto& s = doc["synth"];
      c.synth.regions = s.value("regions", c.synth.regions);
      c.synth.months = s.value("months", c.synth.months);
      c.synth.features = s.value("features", c.synth.features);
      c.synth.outbreak_rate = s.value("outbreak_rate", c.synth.outbreak_rate);
      c.synth.start_year = s.value("start_year", c.synth.start_year);
    }
    c.k_features = doc.value("k_features", c.k_features);
    c.k_dengue = doc.value("k_dengue", c.k_dengue);
    c.kmeans_seed = doc.value("kmeans_seed", c.kmeans_seed);
    if (doc.contains("encoding")) {
      const auto mode = doc["encoding"].get<std::string>();
      if (mode == "argmax") {
        c.encoding.kind = EncodingMode::Kind::Argmax;
      } else if (mode == "alpha-cut") {
        c.encoding.kind = EncodingMode::Kind::AlphaCut;
      } else {
        throw Error("config: unknown encoding '" + mode + "'");
      }
    }
    c.encoding.alpha = doc.value("alpha_cut", c.encoding.alpha);
    c.min_support = doc.value("min_support", c.min_support);
    c.min_confidence = doc.value("min_confidence", c.min_confidence);
    c.split.train_fraction = doc.value("train_fraction", c.split.train_fraction);
    c.split.stride_offset = doc.value("split_offset", c.split.stride_offset);
    if (doc.contains("algorithms")) {
      c.algorithms.clear();
      for (const auto& a : doc["algorithms"]) c.algorithms.push_back(parse_algorithm(a.get<std::string>()));
    }
    if (doc.contains("sort_keys")) c.sort_keys = parse_sort_keys(doc["sort_keys"].get<std::string>());
    c.alpha = doc.value("alpha", c.alpha);
    c.reps = doc.value("reps", c.reps);
    if (doc.contains("output_dir")) c.output_dir = doc["output_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  return c;
}

PipelineConfig load_config(const fs::path& path, PipelineConfig base) {
  return config_from_json(io::read_text(path), std::move(base));
}

// --- stages ------------------------------------------------------------------

namespace {

struct Paths {
  fs::path dir;
  [[nodiscard]] fs::path operator()(const std::string& name) const { return dir / name; }
};

FeatureSeries fill(const FeatureSeries& s) { return interpolate_missing(resample_monthly(s)); }

void stage_ingest(const PipelineConfig& c, const Paths& out) {
  ObservationMatrix raw;
  if (!c.features_csv && !c.dengue_csv && !c.synth_seed) throw Error("give input CSVs or a synth seed");
  if (c.features_csv || c.dengue_csv) {
    if (!c.features_csv) throw Error("a dengue CSV needs a features CSV");
    if (!c.dengue_csv || !fs::exists(*c.dengue_csv)) {
      throw Error("dengue CSV " + (c.dengue_csv ? c.dengue_csv->string() : std::string("<none>")) + " not found");
    }
    std::vector<FeatureSeries> features;
    for (const auto& s : load_csv(*c.features_csv)) features.push_back(fill(s));
    std::vector<FeatureSeries> dengue;
    for (const auto& s : load_csv(*c.dengue_csv)) dengue.push_back(fill(s));
    std::vector<std::string> dengue_columns;
    for (const auto& s : dengue) {
      if (std::find(dengue_columns.begin(), dengue_columns.end(), s.feature) == dengue_columns.end()) {
        dengue_columns.push_back(s.feature);
      }
    }
    if (dengue_columns.size() != 1) throw Error("dengue CSV must have exactly one value column");
    raw = assemble_matrix(features, dengue);
  } else {
    raw = synth_generate(*c.synth_seed, c.synth);
  }
  const ObservationMatrix matrix = normalize(std::move(raw));
  io::write_matrix_csv(out(artifacts::kMatrix), matrix);
  io::write_norm_params(out(artifacts::kNormParams), matrix);
}

void stage_fuzzify(const PipelineConfig& c, const Paths& out) {
  ObservationMatrix matrix = io::read_matrix_csv(out(artifacts::kMatrix));
  matrix.norm_params = io::read_norm_params(out(artifacts::kNormParams), matrix.features);
  const FuzzyModel model = fit_fuzzy_model(matrix, {c.k_features, c.k_dengue, c.kmeans_seed});
  const ItemDictionary dict = make_dictionary(model);
  const auto transactions = encode_transactions(matrix, model, dict, c.encoding);
  io::write_fuzzy_model(out(artifacts::kFuzzyModel), model);
  io::write_transactions(out(artifacts::kTransactions), transactions, dict);
}

struct Encoded {
  ItemDictionary dict;
  std::vector<Transaction> train;
  std::vector<Transaction> test;
};

Encoded load_encoded(const PipelineConfig& c, const Paths& out) {
  Encoded e;
  e.dict = make_dictionary(io::read_fuzzy_model(out(artifacts::kFuzzyModel)));
  const auto all = io::read_transactions(out(artifacts::kTransactions), e.dict);
  auto [train, test] = systematic_split<Transaction>(all, c.split);
  if (train.empty() || test.empty()) throw Error("split leaves an empty train or test partition");
  e.train = std::move(train);
  e.test = std::move(test);
  return e;
}

/// Training rows with the truth class appended as an item.
TransactionDb mining_db(const Encoded& e) {
  std::vector<Itemset> rows;
  rows.reserve(e.train.size());
  for (const auto& t : e.train) {
    Itemset row = t.items;
    row.push_back(e.dict.class_item(t.truth));
    rows.push_back(std::move(row));
  }
  return TransactionDb(std::move(rows));
}

void stage_mine(const PipelineConfig& c, const Paths& out) {
  const Encoded e = load_encoded(c, out);
  const TransactionDb db = mining_db(e);
  const ItemId consequents[] = {e.dict.class_item(DengueClass::High), e.dict.class_item(DengueClass::Low)};
  std::optional<std::size_t> reference_count;
  for (auto algorithm : c.algorithms) {
    const auto sets = mine(algorithm, db, c.min_support);
    if (reference_count && *reference_count != sets.size()) {
      throw Error(std::string(to_string(algorithm)) + " found " + std::to_string(sets.size()) +
                  " frequent itemsets, expected " + std::to_string(*reference_count));
    }
    reference_count = sets.size();
    io::RulesFile file{std::string(to_string(algorithm)), c.min_support, c.min_confidence, db.size(), sets.size(),
                       generate_rules(sets, db.size(), consequents, {c.min_confidence, false})};
    io::write_rules(out(artifacts::rules(algorithm)), file, e.dict);
  }
}

void stage_classify(const PipelineConfig& c, const Paths& out) {
  const Encoded e = load_encoded(c, out);
  for (auto algorithm : c.algorithms) {
    auto file = io::read_rules(out(artifacts::rules(algorithm)), e.dict);
    const RuleBook book = sort_rules(std::move(file.rules), e.dict, c.sort_keys);
    const Evaluation ev = evaluate(book, e.test);
    io::write_predictions(out(artifacts::predictions(algorithm)), e.test, ev);
  }
}

void stage_bench(const PipelineConfig& c, const Paths& out) {
  const Encoded e = load_encoded(c, out);
  const TransactionDb db = mining_db(e);
  std::vector<BenchReport> reports;
  for (auto algorithm : c.algorithms) reports.push_back(benchmark(algorithm, db, c.min_support, {c.reps, true}));
  cross_check(reports);
  io::write_bench(out(artifacts::kBench), reports);
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json test_json(const TestResult& t) {
  return {{"statistic", optional_json(t.statistic)},
          {"p_value", t.p_value},
          {"alpha", t.alpha},
          {"reject_null", t.reject_null}};
}

json cm_json(const ConfusionMatrix& m) { return {{"tp", m.tp}, {"fp", m.fp}, {"tn", m.tn}, {"fn", m.fn}}; }

PipelineSummary summarize_paths(const PipelineConfig& c, const Paths& out) {
  const ItemDictionary dict = make_dictionary(io::read_fuzzy_model(out(artifacts::kFuzzyModel)));
  PipelineSummary summary;
  for (auto algorithm : c.algorithms) {
    AlgorithmOutcome o;
    o.algorithm = algorithm;
    o.rule_count = io::read_rules(out(artifacts::rules(algorithm)), dict).rules.size();
    for (const auto& rec : io::read_predictions(out(artifacts::predictions(algorithm)))) {
      o.matrix.add(rec.predicted, rec.truth);
      if (!rec.fired_rule) ++o.defaulted;
    }
    summary.outcomes.push_back(o);
  }
  return summary;
}

void stage_eval(const PipelineConfig& c, const Paths& out) {
  const PipelineSummary summary = summarize_paths(c, out);
  json algorithms = json::object();
  for (const auto& o : summary.outcomes) {
    const MetricsReport m = metrics(o.matrix);
    algorithms[std::string(to_string(o.algorithm))] = {
        {"confusion", cm_json(o.matrix)},
        {"classified", o.matrix.total()},
        {"defaulted", o.defaulted},
        {"rule_count", o.rule_count},
        {"metrics",
         {{"sensitivity", optional_json(m.sensitivity)},
          {"specificity", optional_json(m.specificity)},
          {"ppv", optional_json(m.ppv)},
          {"npv", optional_json(m.npv)},
          {"f1", optional_json(m.f1)}}}};
  }

  json comparisons = json::object();
  if (summary.outcomes.size() >= 2) {
    const auto& a = summary.outcomes[0].matrix;
    const auto& b = summary.outcomes[1].matrix;
    struct Proportion {
      const char* name;
      std::uint64_t x1, n1, x2, n2;
    };
    const Proportion props[] = {
        {"sensitivity", a.tp, a.tp + a.fn, b.tp, b.tp + b.fn},
        {"specificity", a.tn, a.tn + a.fp, b.tn, b.tn + b.fp},
        {"ppv", a.tp, a.tp + a.fp, b.tp, b.tp + b.fp},
        {"npv", a.tn, a.tn + a.fn, b.tn, b.tn + b.fn},
    };
    comparisons["between"] = {std::string(to_string(summary.outcomes[0].algorithm)),
                              std::string(to_string(summary.outcomes[1].algorithm))};
    for (const auto& p : props) {
      comparisons[p.name] = p.n1 > 0 && p.n2 > 0 ? test_json(two_proportion_ztest(p.x1, p.n1, p.x2, p.n2, c.alpha))
                                                 : json(nullptr);
    }
  }

  const json config = json::parse(config_to_json(c));
  json metrics_doc = {{"schema", io::kMetricsSchema},
                      {"config", config},
                      {"algorithms", algorithms},
                      {"accuracy_tests", comparisons}};
  io::write_text(out(artifacts::kMetrics), metrics_doc.dump(2) + "\n");

  json report = metrics_doc;
  report["schema"] = io::kReportSchema;
  report["bench"] = nullptr;
  report["time_test"] = nullptr;
  if (fs::exists(out(artifacts::kBench))) {
    const auto reports = io::read_bench(out(artifacts::kBench));
    json bench = json::array();
    for (const auto& r : reports) {
      bench.push_back({{"algorithm", std::string(to_string(r.algorithm))},
                       {"wall_time", r.wall_time},
                       {"mean_time", r.mean_time()},
                       {"tracked_bytes_peak", r.tracked_bytes_peak},
                       {"rss_peak", r.rss_peak ? json(*r.rss_peak) : json(nullptr)},
                       {"itemset_count", r.itemset_count}});
    }
    report["bench"] = bench;
    if (reports.size() >= 2 && reports[0].wall_time.size() >= kMinTimingRepetitions &&
        reports[1].wall_time.size() >= kMinTimingRepetitions) {
      report["time_test"] = test_json(time_significance(reports[0].wall_time, reports[1].wall_time, c.alpha));
      report["time_test"]["between"] = {std::string(to_string(reports[0].algorithm)),
                                        std::string(to_string(reports[1].algorithm))};
    }
  }
  io::write_text(out(artifacts::kReport), report.dump(2) + "\n");
}

}  // namespace

void run_stage(Stage stage, const PipelineConfig& config) {
  const Paths out{config.output_dir};
  try {
    validate(config);
    fs::create_directories(config.output_dir);
    switch (stage) {
      case Stage::Ingest: stage_ingest(config, out); break;
      case Stage::Fuzzify: stage_fuzzify(config, out); break;
      case Stage::Mine: stage_mine(config, out); break;
      case Stage::Classify: stage_classify(config, out); break;
      case Stage::Bench: stage_bench(config, out); break;
      case Stage::Eval: stage_eval(config, out); break;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

PipelineSummary run_pipeline(const PipelineConfig& config) {
  for (auto stage : {Stage::Ingest, Stage::Fuzzify, Stage::Mine, Stage::Classify}) run_stage(stage, config);
  if (config.reps > 0) {
    run_stage(Stage::Bench, config);
  } else {
    fs::remove(config.output_dir / artifacts::kBench);
  }
  run_stage(Stage::Eval, config);
  return summarize(config);
}

PipelineSummary summarize(const PipelineConfig& config) { return summarize_paths(config, Paths{config.output_dir}); }

}  // namespace farm
