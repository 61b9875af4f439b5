#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "farm/bench.hpp"
#include "farm/classify.hpp"
#include "farm/error.hpp"
#include "farm/fuzzify.hpp"
#include "farm/ingest.hpp"

namespace farm {

/// Everything a run needs. Defaults: k = 4 for features, 2 for dengue,
/// k-means seed 0, 80/20 systematic split.
struct PipelineConfig {
  std::optional<std::filesystem::path> features_csv;
  std::optional<std::filesystem::path> dengue_csv;
  std::optional<std::uint64_t> synth_seed;  // used when no features CSV is given
  SynthConfig synth;

  std::size_t k_features = 4;
  std::size_t k_dengue = 2;
  std::uint64_t kmeans_seed = 0;
  EncodingMode encoding;

  double min_support = 0.05;
  double min_confidence = 0.8;
  SplitSpec split;
  std::vector<Algorithm> algorithms = {Algorithm::FPGrowth, Algorithm::Apriori};
  std::vector<SortKey> sort_keys = default_sort_keys();

  double alpha = 0.05;
  std::size_t reps = 10;  // 0 skips the bench stage
  std::filesystem::path output_dir = "farm-out";
};

/// Throws farm::Error describing the first invalid field.
void validate(const PipelineConfig& config);

std::string config_to_json(const PipelineConfig& config);
/// Overlays the keys present in `json_text` onto `base`.
PipelineConfig config_from_json(std::string_view json_text, PipelineConfig base = {});
PipelineConfig load_config(const std::filesystem::path& path, PipelineConfig base = {});

enum class Stage { Ingest, Fuzzify, Mine, Classify, Bench, Eval };

std::string_view to_string(Stage stage);

/// A stage failure; `what()` starts with the stage name.
class StageError : public Error {
 public:
  StageError(Stage stage, const std::string& message);
  [[nodiscard]] Stage stage() const { return stage_; }

 private:
  Stage stage_;
};

namespace artifacts {
inline constexpr const char* kMatrix = "matrix.csv";
inline constexpr const char* kNormParams = "norm_params.json";
inline constexpr const char* kFuzzyModel = "fuzzy_model.json";
inline constexpr const char* kTransactions = "transactions.csv";
inline constexpr const char* kBench = "bench.json";
inline constexpr const char* kMetrics = "metrics.json";
inline constexpr const char* kReport = "report.json";
std::string rules(Algorithm a);        // rules_<algorithm>.json
std::string predictions(Algorithm a);  // predictions_<algorithm>.csv
}  // namespace artifacts

struct AlgorithmOutcome {
  Algorithm algorithm = Algorithm::FPGrowth;
  ConfusionMatrix matrix;
  std::size_t rule_count = 0;
  std::size_t defaulted = 0;
};

struct PipelineSummary {
  std::vector<AlgorithmOutcome> outcomes;
};

/// Runs one stage, reading the previous stages' files from the output
/// directory and writing its own. Failures surface as StageError.
void run_stage(Stage stage, const PipelineConfig& config);

/// ingest -> fuzzify -> mine -> classify -> bench -> eval.
PipelineSummary run_pipeline(const PipelineConfig& config);

/// Confusion matrices etc. recomputed from the files an eval stage consumed.
PipelineSummary summarize(const PipelineConfig& config);

}  // namespace farm
