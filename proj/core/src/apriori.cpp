#include <algorithm>

#include "farm/mine.hpp"

namespace farm {
namespace {

std::size_t recorded_itemset_bytes(std::size_t k) { return sizeof(Itemset) + k * sizeof(ItemId) + sizeof(std::uint64_t); }

/// Prefix trie over equal-length candidates; leaves index into the candidate list.
class CandidateTrie {
 public:
  explicit CandidateTrie(const std::vector<Itemset>& candidates) : depth_(candidates.front().size()) {
    nodes_.emplace_back();
    for (std::uint32_t c = 0; c < candidates.size(); ++c) {
      std::uint32_t cur = 0;
      for (ItemId item : candidates[c]) {
        auto& kids = nodes_[cur].children;
        // Candidates arrive in lexicographic order, so a new child is always last.
        if (kids.empty() || kids.back().first != item) {
          kids.emplace_back(item, static_cast<std::uint32_t>(nodes_.size()));
          cur = kids.back().second;
          nodes_.emplace_back();
        } else {
          cur = kids.back().second;
        }
      }
      nodes_[cur].leaf = c;
    }
  }

  void count(const Itemset& t, std::vector<std::uint64_t>& counts) const {
    if (t.size() >= depth_) visit(0, 0, 0, t, counts);
  }

 private:
  struct Node {
    std::vector<std::pair<ItemId, std::uint32_t>> children;
    std::uint32_t leaf = UINT32_MAX;
  };

  void visit(std::uint32_t node, std::size_t depth, std::size_t start, const Itemset& t,
             std::vector<std::uint64_t>& counts) const {
    if (depth == depth_) {
      ++counts[nodes_[node].leaf];
      return;
    }
    const auto& kids = nodes_[node].children;
    // Leave room for the remaining depth_ - depth - 1 items.
    const std::size_t last = t.size() - (depth_ - depth - 1);
    auto k = kids.begin();
    for (std::size_t p = start; p < last && k != kids.end(); ++p) {
      k = std::lower_bound(k, kids.end(), t[p], [](const auto& kid, ItemId v) { return kid.first < v; });
      if (k != kids.end() && k->first == t[p]) visit(k->second, depth + 1, p + 1, t, counts);
    }
  }

  std::size_t depth_;
  std::vector<Node> nodes_;
};

std::vector<Itemset> join_and_prune(const std::vector<Itemset>& level) {
  std::vector<Itemset> candidates;
  if (level.empty()) return candidates;
  const std::size_t k = level.front().size();
  Itemset subset(k);
  for (std::size_t i = 0; i < level.size(); ++i) {
    for (std::size_t j = i + 1; j < level.size(); ++j) {
      if (!std::equal(level[i].begin(), level[i].end() - 1, level[j].begin())) break;
      Itemset cand = level[i];
      cand.push_back(level[j].back());
      // The two joined parents are frequent; check the other k-1 subsets.
      bool keep = true;
      for (std::size_t drop = 0; keep && drop + 2 <= k; ++drop) {
        std::size_t w = 0;
        for (std::size_t x = 0; x < cand.size(); ++x) {
          if (x != drop) subset[w++] = cand[x];
        }
        keep = std::binary_search(level.begin(), level.end(), subset);
      }
      if (keep) candidates.push_back(std::move(cand));
    }
  }
  return candidates;
}

}  // namespace

std::vector<FrequentItemSet> mine_apriori(const TransactionDb& db, double min_support, MemoryTracker* tracker) {
  if (db.empty()) throw Error("apriori: no transactions");
  const std::uint64_t min_count = min_count_for(min_support, db.size());
  const double n = static_cast<double>(db.size());
  const std::size_t storage = transaction_storage_bytes(db);
  if (tracker != nullptr) tracker->charge(storage);

  std::vector<FrequentItemSet> out;
  std::vector<std::uint64_t> counts(db.item_bound(), 0);
  db.for_each([&](const Itemset& t) {
    for (ItemId i : t) ++counts[i];
  });
  std::vector<Itemset> level;
  for (ItemId i = 0; i < counts.size(); ++i) {
    if (counts[i] >= min_count) {
      level.push_back({i});
      out.push_back({{i}, counts[i], static_cast<double>(counts[i]) / n});
    }
  }
  std::size_t level_bytes = level.size() * recorded_itemset_bytes(1);
  if (tracker != nullptr) tracker->charge(level_bytes);

  while (!level.empty()) {
    const std::size_t k = level.front().size() + 1;
    std::vector<Itemset> candidates = join_and_prune(level);
    const std::size_t cand_bytes = candidates.size() * recorded_itemset_bytes(k);
    if (tracker != nullptr) tracker->charge(cand_bytes);

    std::vector<Itemset> next;
    if (!candidates.empty()) {
      std::vector<std::uint64_t> cand_counts(candidates.size(), 0);
      const CandidateTrie trie(candidates);
      db.for_each([&](const Itemset& t) { trie.count(t, cand_counts); });
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (cand_counts[c] < min_count) continue;
        out.push_back({candidates[c], cand_counts[c], static_cast<double>(cand_counts[c]) / n});
        next.push_back(std::move(candidates[c]));
      }
    }
    // The frequent sets are a subset of the candidates, so swap the accounting.
    const std::size_t next_bytes = next.size() * recorded_itemset_bytes(k);
    if (tracker != nullptr) {
      tracker->release(level_bytes + cand_bytes);
      tracker->charge(next_bytes);
    }
    level_bytes = next_bytes;
    level = std::move(next);
  }
  if (tracker != nullptr) tracker->release(level_bytes + storage);
  sort_canonical(out);
  return out;
}

}  // namespace farm
