#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "farm/dates.hpp"
#include "farm/error.hpp"
#include "farm/ingest.hpp"
#include "farm/items.hpp"
#include "farm/kmeans.hpp"

namespace farm {

enum class Shape { TrapezoidLeft, Triangle, TrapezoidRight };

std::string_view to_string(Shape s);
Shape parse_shape(std::string_view text);

/// One labeled membership function. Breakpoints:
///   TrapezoidLeft  {full, zero}          1 for x <= full, 0 for x >= zero
///   Triangle       {left, peak, right}
///   TrapezoidRight {zero, full}          0 for x <= zero, 1 for x >= full
struct FuzzySetDef {
  std::string feature;
  std::string label;
  Shape shape = Shape::Triangle;
  std::vector<double> breakpoints;
};

double membership(const FuzzySetDef& set, double x);

/// Sets L1..Lk anchored at adjacent centers; memberships sum to one everywhere.
std::vector<FuzzySetDef> build_fuzzy_sets(const Centroids& centroids);

struct FeatureFuzzySets {
  Centroids centroids;
  std::vector<FuzzySetDef> sets;  // ordered L1..Lk
};

struct FuzzyModel {
  std::vector<FeatureFuzzySets> features;  // parallel to ObservationMatrix::features
  Centroids dengue;                        // k = 2, raw case counts
  std::uint64_t kmeans_seed = 0;
};

struct FuzzyModelOptions {
  std::size_t k_features = 4;
  std::size_t k_dengue = 2;
  std::uint64_t kmeans_seed = 0;
};

/// Clusters every normalized feature column (pooled over regions) and the raw
/// dengue column, then builds the membership functions.
FuzzyModel fit_fuzzy_model(const ObservationMatrix& matrix, const FuzzyModelOptions& options = {});

/// Items L1..Lk of every feature in column order, then the High and Low class items.
ItemDictionary make_dictionary(const FuzzyModel& model);

struct EncodingMode {
  enum class Kind { Argmax, AlphaCut };
  Kind kind = Kind::Argmax;
  double alpha = 0.5;

  static EncodingMode argmax() { return {}; }
  static EncodingMode alpha_cut(double a) { return {Kind::AlphaCut, a}; }
};

/// Argmax keeps one item per feature (ties go to the lower label); alpha-cut
/// keeps every set with membership >= alpha. Result is sorted by id.
std::vector<ItemId> fuzzify_row(std::span<const double> row, const FuzzyModel& model,
                                const ItemDictionary& dict, EncodingMode mode = {});

/// High iff `count` is strictly nearer the upper of the two dengue centers.
DengueClass dengue_class(double count, const Centroids& dengue);

struct Transaction {
  std::string region;
  YearMonth origin;
  std::vector<ItemId> items;  // feature items of month `origin`, sorted
  DengueClass truth = DengueClass::Low;  // class of origin.next()
};

/// One transaction per (region, month) that has a successor in the same
/// region; regions with fewer than two months are skipped with a warning.
std::vector<Transaction> encode_transactions(const ObservationMatrix& matrix, const FuzzyModel& model,
                                             const ItemDictionary& dict, EncodingMode mode = {},
                                             Warnings* warnings = nullptr);

}  // namespace farm
