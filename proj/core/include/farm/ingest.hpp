#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "farm/dates.hpp"
#include "farm/error.hpp"

namespace farm {

struct Sample {
  Date date;
  std::optional<double> value;  // nullopt = missing
};

/// One region's time-stamped raw values for one feature. Samples are strictly
/// increasing in date.
struct FeatureSeries {
  std::string region;
  std::string feature;
  std::vector<Sample> samples;
};

/// Column roles for an input CSV. An empty `value_columns` means "every column
/// that is neither the region nor the date column".
struct CsvSchema {
  std::string region_column = "region";
  std::string date_column = "date";
  std::vector<std::string> value_columns;
};

std::vector<FeatureSeries> load_csv(const std::filesystem::path& path, const CsvSchema& schema = {});
std::vector<FeatureSeries> parse_csv(std::istream& in, const CsvSchema& schema,
                                     std::string_view source_name = "<stream>");

/// One sample per calendar month spanning the input; a month's value is the
/// mean of its non-missing samples, or missing if it has none.
FeatureSeries resample_monthly(const FeatureSeries& series);

/// Linear interpolation across interior gaps, flat extension at the ends.
/// Requires a monthly series with at least two non-missing samples.
FeatureSeries interpolate_missing(const FeatureSeries& series);

struct MinMax {
  double min = 0.0;
  double max = 0.0;
};

struct MatrixRow {
  std::string region;
  YearMonth month;
  std::vector<double> features;  // parallel to ObservationMatrix::features
  double dengue = 0.0;
};

/// Rows ordered by (region, month) with contiguous months per region.
struct ObservationMatrix {
  std::vector<std::string> features;
  std::vector<MatrixRow> rows;
  std::vector<MinMax> norm_params;  // empty until normalize() runs

  [[nodiscard]] std::vector<std::string> regions() const;
  [[nodiscard]] bool normalized() const { return !norm_params.empty(); }
};

/// Joins monthly, gap-free series into one matrix. Each region keeps the
/// intersection of its series' month ranges.
ObservationMatrix assemble_matrix(std::span<const FeatureSeries> features,
                                  std::span<const FeatureSeries> dengue);

/// Global min-max per feature column into [0, 1]. The dengue column is left as
/// raw counts. A constant column maps to 0 with a warning.
ObservationMatrix normalize(ObservationMatrix matrix, Warnings* warnings = nullptr);

/// Inverse of normalize() using the stored norm_params.
ObservationMatrix denormalize(ObservationMatrix matrix);

struct SplitSpec {
  double train_fraction = 0.8;
  std::size_t stride_offset = 0;
};

/// k = 1 / (1 - train_fraction); throws unless k is an integer >= 2 and the
/// offset is below k.
std::size_t split_stride(const SplitSpec& spec);

struct SplitIndices {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Row i goes to test iff i mod k == stride_offset.
SplitIndices systematic_split_indices(std::size_t n, const SplitSpec& spec);

std::pair<ObservationMatrix, ObservationMatrix> systematic_split(const ObservationMatrix& matrix,
                                                                 const SplitSpec& spec);

template <class T>
std::pair<std::vector<T>, std::vector<T>> systematic_split(std::span<const T> rows, const SplitSpec& spec) {
  const auto idx = systematic_split_indices(rows.size(), spec);
  std::pair<std::vector<T>, std::vector<T>> out;
  out.first.reserve(idx.train.size());
  out.second.reserve(idx.test.size());
  for (auto i : idx.train) out.first.push_back(rows[i]);
  for (auto i : idx.test) out.second.push_back(rows[i]);
  return out;
}

struct SynthConfig {
  std::size_t regions = 13;
  std::size_t months = 72;
  std::size_t features = 6;
  double outbreak_rate = 0.2;
  int start_year = 2001;
};

/// Deterministic synthetic regions x months matrix (raw, unnormalized). Dengue
/// counts follow a persistent high/low regime and features lead next month's
/// regime, so mined rules carry signal.
ObservationMatrix synth_generate(std::uint64_t seed, const SynthConfig& config = {});

/// Splits a matrix back into per-(region, feature) monthly series; the second
/// element holds one `dengue_cases` series per region.
std::pair<std::vector<FeatureSeries>, std::vector<FeatureSeries>> matrix_to_series(
    const ObservationMatrix& matrix);

}  // namespace farm
