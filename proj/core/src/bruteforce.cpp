#include <algorithm>

#include "farm/mine.hpp"

namespace farm {

std::vector<FrequentItemSet> brute_force_frequent(const TransactionDb& db, double min_support) {
  if (db.empty()) throw Error("brute force: no transactions");
  const std::uint64_t min_count = min_count_for(min_support, db.size());
  Itemset universe;
  db.for_each([&](const Itemset& t) { universe.insert(universe.end(), t.begin(), t.end()); });
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  if (universe.size() > kBruteForceMaxItems) {
    throw Error("brute force: " + std::to_string(universe.size()) + " distinct items exceed the limit of " +
                std::to_string(kBruteForceMaxItems));
  }
  std::vector<std::uint32_t> masks;
  masks.reserve(db.size());
  db.for_each([&](const Itemset& t) {
    std::uint32_t m = 0;
    for (ItemId i : t) {
      m |= 1u << (std::lower_bound(universe.begin(), universe.end(), i) - universe.begin());
    }
    masks.push_back(m);
  });

  std::vector<FrequentItemSet> out;
  const std::uint32_t limit = 1u << universe.size();
  for (std::uint32_t s = 1; s < limit; ++s) {
    std::uint64_t count = 0;
    for (auto m : masks) count += (m & s) == s ? 1 : 0;
    if (count < min_count) continue;
    Itemset items;
    for (std::size_t b = 0; b < universe.size(); ++b) {
      if (s & (1u << b)) items.push_back(universe[b]);
    }
    out.push_back({std::move(items), count, static_cast<double>(count) / static_cast<double>(db.size())});
  }
  sort_canonical(out);
  return out;
}

}  // namespace farm
