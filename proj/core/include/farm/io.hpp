#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "farm/bench.hpp"
#include "farm/classify.hpp"
#include "farm/fuzzify.hpp"
#include "farm/ingest.hpp"
#include "farm/mine.hpp"

namespace farm::io {

// Schema tags embedded in every JSON artifact; a mismatch on read is an error.
inline constexpr const char* kNormSchema = "farm.norm/1";
inline constexpr const char* kFuzzySchema = "farm.fuzzy/1";
inline constexpr const char* kRulesSchema = "farm.rules/1";
inline constexpr const char* kBenchSchema = "farm.bench/1";
inline constexpr const char* kMetricsSchema = "farm.metrics/1";
inline constexpr const char* kReportSchema = "farm.report/1";

inline constexpr const char* kTransactionsHeader = "region,year,month,items,truth";
inline constexpr const char* kPredictionsHeader = "region,year,month,predicted,truth,fired_rule_index,defaulted";

/// Input-format CSV (`region,date,<value>...`), one row per (region, date).
void write_series_csv(const std::filesystem::path& path, std::span<const FeatureSeries> series);

/// `region,year,month,<feature...>,dengue_cases`.
void write_matrix_csv(const std::filesystem::path& path, const ObservationMatrix& matrix);
/// Reads the matrix; norm_params are left empty (they live in their own file).
ObservationMatrix read_matrix_csv(const std::filesystem::path& path);

void write_norm_params(const std::filesystem::path& path, const ObservationMatrix& matrix);
std::vector<MinMax> read_norm_params(const std::filesystem::path& path, std::span<const std::string> features);

void write_fuzzy_model(const std::filesystem::path& path, const FuzzyModel& model);
FuzzyModel read_fuzzy_model(const std::filesystem::path& path);

void write_transactions(const std::filesystem::path& path, std::span<const Transaction> transactions,
                        const ItemDictionary& dict);
std::vector<Transaction> read_transactions(const std::filesystem::path& path, const ItemDictionary& dict);

struct RulesFile {
  std::string algorithm;
  double min_support = 0.0;
  double min_confidence = 0.0;
  std::size_t transactions = 0;
  std::size_t itemset_count = 0;
  std::vector<AssociationRule> rules;
};

void write_rules(const std::filesystem::path& path, const RulesFile& rules, const ItemDictionary& dict);
RulesFile read_rules(const std::filesystem::path& path, const ItemDictionary& dict);

struct PredictionRecord {
  std::string region;
  YearMonth origin;
  DengueClass predicted = DengueClass::Low;
  DengueClass truth = DengueClass::Low;
  std::optional<std::size_t> fired_rule;
};

/// `fired_rule_index` is -1 and `defaulted` is 1 when no rule matched.
void write_predictions(const std::filesystem::path& path, std::span<const Transaction> test,
                       const Evaluation& evaluation);
std::vector<PredictionRecord> read_predictions(const std::filesystem::path& path);

void write_bench(const std::filesystem::path& path, std::span<const BenchReport> reports);
std::vector<BenchReport> read_bench(const std::filesystem::path& path);

/// Writes `text` verbatim, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace farm::io
