#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "farm/fuzzify.hpp"
#include "farm/items.hpp"
#include "farm/mine.hpp"

namespace farm {

enum class SortKey { Confidence, AntecedentCount, Lift, Consequent };

std::string_view to_string(SortKey key);

/// confidence, antecedents, lift, consequent
std::vector<SortKey> default_sort_keys();

/// Comma-separated list of `confidence`, `antecedents`, `lift`, `consequent`.
std::vector<SortKey> parse_sort_keys(std::string_view text);
std::string format_sort_keys(std::span<const SortKey> keys);

/// Rules in firing order.
struct RuleBook {
  std::vector<AssociationRule> rules;
  std::vector<SortKey> keys;
  DengueClass default_class = DengueClass::Low;
  ItemId high_item = 0;
  ItemId low_item = 0;
};

/// Orders rules by `keys` (all descending; High precedes Low for the
/// consequent key), then by the antecedent tokens lexicographically.
RuleBook sort_rules(std::vector<AssociationRule> rules, const ItemDictionary& dict,
                    std::span<const SortKey> keys = {});

struct Prediction {
  DengueClass predicted = DengueClass::Low;
  std::optional<std::size_t> fired_rule;  // index into RuleBook::rules

  [[nodiscard]] bool defaulted() const { return !fired_rule.has_value(); }
};

/// First rule whose antecedent is a subset of `items` decides; otherwise the
/// book's default class.
Prediction predict(const RuleBook& book, std::span<const ItemId> items);

struct ConfusionMatrix {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  [[nodiscard]] std::uint64_t total() const { return tp + fp + tn + fn; }
  void add(DengueClass predicted, DengueClass truth);
  bool operator==(const ConfusionMatrix&) const = default;
};

struct Evaluation {
  ConfusionMatrix matrix;
  std::size_t defaulted = 0;
  std::vector<Prediction> predictions;  // parallel to the test transactions
};

Evaluation evaluate(const RuleBook& book, std::span<const Transaction> test);

}  // namespace farm
