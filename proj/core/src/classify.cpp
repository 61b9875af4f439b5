#include "farm/classify.hpp"

#include <algorithm>
#include <cassert>

#include "farm/csv.hpp"

namespace farm {

std::string_view to_string(SortKey key) {
  switch (key) {
    case SortKey::Confidence: return "confidence";
    case SortKey::AntecedentCount: return "antecedents";
    case SortKey::Lift: return "lift";
    case SortKey::Consequent: return "consequent";
  }
  return "?";
}

std::vector<SortKey> default_sort_keys() {
  return {SortKey::Confidence, SortKey::AntecedentCount, SortKey::Lift, SortKey::Consequent};
}

std::vector<SortKey> parse_sort_keys(std::string_view text) {
  std::vector<SortKey> keys;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto word = trim(text.substr(0, comma));
    SortKey key;
    if (word == "confidence") {
      key = SortKey::Confidence;
    } else if (word == "antecedents") {
      key = SortKey::AntecedentCount;
    } else if (word == "lift") {
      key = SortKey::Lift;
    } else if (word == "consequent") {
      key = SortKey::Consequent;
    } else {
      throw Error("unknown sort key '" + std::string(word) + "'");
    }
    if (std::find(keys.begin(), keys.end(), key) != keys.end()) {
      throw Error("sort key '" + std::string(word) + "' listed twice");
    }
    keys.push_back(key);
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
  }
  if (keys.empty()) throw Error("sort key list is empty");
  return keys;
}

std::string format_sort_keys(std::span<const SortKey> keys) {
  std::string out;
  for (auto k : keys) {
    if (!out.empty()) out += ',';
    out += to_string(k);
  }
  return out;
}

RuleBook sort_rules(std::vector<AssociationRule> rules, const ItemDictionary& dict, std::span<const SortKey> keys) {
  RuleBook book;
  book.keys = keys.empty() ? default_sort_keys() : std::vector<SortKey>(keys.begin(), keys.end());
  book.high_item = dict.class_item(DengueClass::High);
  book.low_item = dict.class_item(DengueClass::Low);

  auto tokens_less = [&](const Itemset& a, const Itemset& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [&](ItemId x, ItemId y) { return dict.token(x) < dict.token(y); });
  };
  // -1: a first, 1: b first, 0: tie on this key
  auto compare = [&](SortKey key, const AssociationRule& a, const AssociationRule& b) -> int {
    switch (key) {
      case SortKey::Confidence:
        return a.confidence > b.confidence ? -1 : (a.confidence < b.confidence ? 1 : 0);
      case SortKey::AntecedentCount:
        return a.antecedent.size() > b.antecedent.size() ? -1 : (a.antecedent.size() < b.antecedent.size() ? 1 : 0);
      case SortKey::Lift:
        return a.lift > b.lift ? -1 : (a.lift < b.lift ? 1 : 0);
      case SortKey::Consequent: {
        const bool ah = a.consequent == book.high_item;
        const bool bh = b.consequent == book.high_item;
        return ah == bh ? 0 : (ah ? -1 : 1);
      }
    }
    return 0;
  };
  std::sort(rules.begin(), rules.end(), [&](const AssociationRule& a, const AssociationRule& b) {
    for (auto key : book.keys) {
      if (const int c = compare(key, a, b); c != 0) return c < 0;
    }
    if (tokens_less(a.antecedent, b.antecedent)) return true;
    if (tokens_less(b.antecedent, a.antecedent)) return false;
    return dict.token(a.consequent) < dict.token(b.consequent);
  });
  book.rules = std::move(rules);
  return book;
}

Prediction predict(const RuleBook& book, std::span<const ItemId> items) {
  for (std::size_t r = 0; r < book.rules.size(); ++r) {
    const auto& ante = book.rules[r].antecedent;
    if (std::includes(items.begin(), items.end(), ante.begin(), ante.end())) {
      return {book.rules[r].consequent == book.high_item ? DengueClass::High : DengueClass::Low, r};
    }
  }
  return {book.default_class, std::nullopt};
}

void ConfusionMatrix::add(DengueClass predicted, DengueClass truth) {
  if (predicted == DengueClass::High) {
    ++(truth == DengueClass::High ? tp : fp);
  } else {
    ++(truth == DengueClass::Low ? tn : fn);
  }
}

Evaluation evaluate(const RuleBook& book, std::span<const Transaction> test) {
  if (test.empty()) throw Error("evaluate: empty test set");
  Evaluation ev;
  ev.predictions.reserve(test.size());
  for (const auto& t : test) {
    auto p = predict(book, t.items);
    if (p.fired_rule) {
      const auto& ante = book.rules[*p.fired_rule].antecedent;
      if (!std::includes(t.items.begin(), t.items.end(), ante.begin(), ante.end())) {
        throw Error("evaluate: fired rule antecedent is not a subset of the transaction");
      }
    } else {
      ++ev.defaulted;
    }
    ev.matrix.add(p.predicted, t.truth);
    ev.predictions.push_back(p);
  }
  return ev;
}

}  // namespace farm
