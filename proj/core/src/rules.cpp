#include <algorithm>
#include <map>

#include "farm/mine.hpp"

namespace farm {

std::vector<AssociationRule> generate_rules(std::span<const FrequentItemSet> itemsets, std::size_t n_transactions,
                                            std::span<const ItemId> consequent_items, const RuleOptions& options) {
  if (n_transactions == 0) throw Error("generate_rules: no transactions");
  std::map<Itemset, std::uint64_t> count_of;
  for (const auto& s : itemsets) count_of.emplace(s.items, s.count);
  const double n = static_cast<double>(n_transactions);

  auto lookup = [&](const Itemset& items) -> std::uint64_t {
    if (items.empty()) return n_transactions;
    auto it = count_of.find(items);
    if (it == count_of.end()) {
      throw Error("generate_rules: support of a subset is missing; the miner output is not downward closed");
    }
    return it->second;
  };

  std::vector<AssociationRule> rules;
  for (const auto& s : itemsets) {
    ItemId consequent = 0;
    std::size_t hits = 0;
    for (ItemId c : consequent_items) {
      if (std::binary_search(s.items.begin(), s.items.end(), c)) {
        consequent = c;
        ++hits;
      }
    }
    if (hits != 1) continue;
    if (s.items.size() == 1 && !options.allow_empty_antecedent) continue;

    Itemset antecedent;
    antecedent.reserve(s.items.size() - 1);
    std::copy_if(s.items.begin(), s.items.end(), std::back_inserter(antecedent),
                 [&](ItemId i) { return i != consequent; });
    const double confidence = static_cast<double>(s.count) / static_cast<double>(lookup(antecedent));
    if (confidence < options.min_confidence) continue;
    const double consequent_support = static_cast<double>(lookup({consequent})) / n;
    rules.push_back({std::move(antecedent), consequent, s.count, static_cast<double>(s.count) / n, confidence,
                     confidence / consequent_support});
  }
  std::sort(rules.begin(), rules.end(), [](const AssociationRule& a, const AssociationRule& b) {
    if (a.consequent != b.consequent) return a.consequent < b.consequent;
    if (a.antecedent.size() != b.antecedent.size()) return a.antecedent.size() < b.antecedent.size();
    return a.antecedent < b.antecedent;
  });
  return rules;
}

}  // namespace farm
