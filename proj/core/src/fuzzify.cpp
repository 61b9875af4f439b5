#include "farm/fuzzify.hpp"

#include <algorithm>
#include <cmath>

namespace farm {

std::string_view to_string(Shape s) {
  switch (s) {
    case Shape::TrapezoidLeft: return "trapezoidal-left";
    case Shape::Triangle: return "triangular";
    case Shape::TrapezoidRight: return "trapezoidal-right";
  }
  return "?";
}

Shape parse_shape(std::string_view text) {
  if (text == "trapezoidal-left") return Shape::TrapezoidLeft;
  if (text == "triangular") return Shape::Triangle;
  if (text == "trapezoidal-right") return Shape::TrapezoidRight;
  throw Error("unknown membership shape '" + std::string(text) + "'");
}

double membership(const FuzzySetDef& set, double x) {
  const auto& b = set.breakpoints;
  switch (set.shape) {
    case Shape::TrapezoidLeft:
      if (x <= b[0]) return 1.0;
      if (x >= b[1]) return 0.0;
      return (b[1] - x) / (b[1] - b[0]);
    case Shape::TrapezoidRight:
      if (x <= b[0]) return 0.0;
      if (x >= b[1]) return 1.0;
      return (x - b[0]) / (b[1] - b[0]);
    case Shape::Triangle:
      if (x <= b[0] || x >= b[2]) return 0.0;
      if (x <= b[1]) return (x - b[0]) / (b[1] - b[0]);
      return (b[2] - x) / (b[2] - b[1]);
  }
  return 0.0;
}

std::vector<FuzzySetDef> build_fuzzy_sets(const Centroids& centroids) {
  const auto& c = centroids.centers;
  const std::size_t k = c.size();
  if (k < 2) throw Error("build_fuzzy_sets: need at least 2 centers for " + centroids.feature);
  for (std::size_t i = 1; i < k; ++i) {
    if (!(c[i - 1] < c[i])) throw Error("build_fuzzy_sets: centers of " + centroids.feature + " not strictly increasing");
  }
  std::vector<FuzzySetDef> sets;
  sets.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    FuzzySetDef set{centroids.feature, "L" + std::to_string(i + 1), Shape::Triangle, {}};
    if (i == 0) {
      set.shape = Shape::TrapezoidLeft;
      set.breakpoints = {c[0], c[1]};
    } else if (i == k - 1) {
      set.shape = Shape::TrapezoidRight;
      set.breakpoints = {c[k - 2], c[k - 1]};
    } else {
      set.breakpoints = {c[i - 1], c[i], c[i + 1]};
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

FuzzyModel fit_fuzzy_model(const ObservationMatrix& matrix, const FuzzyModelOptions& options) {
  if (matrix.rows.empty()) throw Error("fit_fuzzy_model: matrix has no rows");
  FuzzyModel model;
  model.kmeans_seed = options.kmeans_seed;
  std::vector<double> column(matrix.rows.size());
  for (std::size_t f = 0; f < matrix.features.size(); ++f) {
    for (std::size_t r = 0; r < matrix.rows.size(); ++r) column[r] = matrix.rows[r].features[f];
    FeatureFuzzySets entry;
    entry.centroids = kmeans(column, options.k_features, options.kmeans_seed);
    entry.centroids.feature = matrix.features[f];
    entry.sets = build_fuzzy_sets(entry.centroids);
    model.features.push_back(std::move(entry));
  }
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) column[r] = matrix.rows[r].dengue;
  model.dengue = kmeans(column, options.k_dengue, options.kmeans_seed);
  model.dengue.feature = "dengue_cases";
  return model;
}

ItemDictionary make_dictionary(const FuzzyModel& model) {
  ItemDictionary dict;
  for (const auto& f : model.features) {
    for (const auto& set : f.sets) dict.add(set.feature, set.label);
  }
  dict.add(std::string(kClassFeature), std::string(to_string(DengueClass::High)));
  dict.add(std::string(kClassFeature), std::string(to_string(DengueClass::Low)));
  return dict;
}

std::vector<ItemId> fuzzify_row(std::span<const double> row, const FuzzyModel& model, const ItemDictionary& dict,
                                EncodingMode mode) {
  if (row.size() != model.features.size()) {
    throw Error("fuzzify_row: row has " + std::to_string(row.size()) + " values but the model has " +
                std::to_string(model.features.size()) + " features");
  }
  std::vector<ItemId> items;
  for (std::size_t f = 0; f < row.size(); ++f) {
    const auto& sets = model.features[f].sets;
    if (mode.kind == EncodingMode::Kind::Argmax) {
      std::size_t best = 0;
      double best_mu = membership(sets[0], row[f]);
      for (std::size_t s = 1; s < sets.size(); ++s) {
        const double mu = membership(sets[s], row[f]);
        if (mu > best_mu) {
          best = s;
          best_mu = mu;
        }
      }
      items.push_back(*dict.find(sets[best].feature, sets[best].label));
    } else {
      for (const auto& set : sets) {
        if (membership(set, row[f]) >= mode.alpha) items.push_back(*dict.find(set.feature, set.label));
      }
    }
  }
  std::sort(items.begin(), items.end());
  return items;
}

DengueClass dengue_class(double count, const Centroids& dengue) {
  if (dengue.k() != 2) throw Error("dengue_class: expected 2 dengue centers");
  const double lo = std::abs(count - dengue.centers[0]);
  const double hi = std::abs(count - dengue.centers[1]);
  return hi < lo ? DengueClass::High : DengueClass::Low;
}

std::vector<Transaction> encode_transactions(const ObservationMatrix& matrix, const FuzzyModel& model,
                                             const ItemDictionary& dict, EncodingMode mode, Warnings* warnings) {
  std::vector<Transaction> out;
  const auto& rows = matrix.rows;
  std::size_t begin = 0;
  while (begin < rows.size()) {
    std::size_t end = begin + 1;
    while (end < rows.size() && rows[end].region == rows[begin].region) ++end;
    if (end - begin < 2) {
      warn(warnings, "encode_transactions: region " + rows[begin].region + " has fewer than 2 months; skipped");
    }
    for (std::size_t i = begin; i + 1 < end; ++i) {
      if (rows[i + 1].month != rows[i].month.next()) {
        throw Error("encode_transactions: months of region " + rows[i].region + " are not contiguous");
      }
      Transaction t{rows[i].region, rows[i].month, fuzzify_row(rows[i].features, model, dict, mode),
                    dengue_class(rows[i + 1].dengue, model.dengue)};
      if (t.items.empty()) {
        throw Error("encode_transactions: row produced no items (alpha-cut above every membership?)");
      }
      out.push_back(std::move(t));
    }
    begin = end;
  }
  return out;
}

}  // namespace farm
