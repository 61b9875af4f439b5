#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "farm/error.hpp"
#include "farm/items.hpp"

namespace farm {

/// A sorted, duplicate-free set of item ids.
using Itemset = std::vector<ItemId>;

/// Row-major transaction list. Rows are normalized to sorted unique ids.
class TransactionDb {
 public:
  TransactionDb() = default;
  explicit TransactionDb(std::vector<Itemset> rows);

  [[nodiscard]] std::size_t size() const { return rows_.size(); }
  [[nodiscard]] bool empty() const { return rows_.empty(); }
  [[nodiscard]] const Itemset& operator[](std::size_t i) const { return rows_[i]; }
  [[nodiscard]] std::span<const Itemset> rows() const { return rows_; }
  /// One past the largest item id present.
  [[nodiscard]] ItemId item_bound() const { return item_bound_; }
  /// Sum of transaction lengths.
  [[nodiscard]] std::size_t total_items() const { return total_items_; }

  template <class F>
  void for_each(F&& f) const {
    for (const auto& row : rows_) f(row);
  }

 private:
  std::vector<Itemset> rows_;
  ItemId item_bound_ = 0;
  std::size_t total_items_ = 0;
};

/// Anything that can be walked front to back as a sequence of Itemsets.
template <class S>
concept TransactionSource = requires(const S& s, void (*visit)(const Itemset&)) {
  { s.size() } -> std::convertible_to<std::size_t>;
  s.for_each(visit);
};

/// Counts full passes over a wrapped source.
template <TransactionSource S>
class ScanCounter {
 public:
  explicit ScanCounter(const S& source) : source_(&source) {}

  [[nodiscard]] std::size_t size() const { return source_->size(); }

  template <class F>
  void for_each(F&& f) const {
    ++scans_;
    source_->for_each(std::forward<F>(f));
  }

  [[nodiscard]] std::size_t scans() const { return scans_; }

 private:
  const S* source_;
  mutable std::size_t scans_ = 0;
};

/// Smallest count meeting `min_support` over `n` transactions (at least 1).
std::uint64_t min_count_for(double min_support, std::size_t n);

struct FrequentItemSet {
  Itemset items;
  std::uint64_t count = 0;
  double support = 0.0;

  bool operator==(const FrequentItemSet&) const = default;
};

/// Orders by size, then lexicographically by ids.
void sort_canonical(std::vector<FrequentItemSet>& sets);

/// Deterministic memory accounting: callers charge recorded sizes for the
/// structures a miner keeps alive and the tracker keeps the high-water mark.
class MemoryTracker {
 public:
  void charge(std::size_t bytes) {
    current_ += bytes;
    if (current_ > peak_) peak_ = current_;
  }
  void release(std::size_t bytes) { current_ -= bytes; }

  [[nodiscard]] std::size_t current() const { return current_; }
  [[nodiscard]] std::size_t peak() const { return peak_; }

 private:
  std::size_t current_ = 0;
  std::size_t peak_ = 0;
};

/// Recorded size of one stored transaction (header plus ids).
std::size_t transaction_storage_bytes(const TransactionDb& db);

// --- FP-tree ----------------------------------------------------------------

using NodeIndex = std::uint32_t;
inline constexpr NodeIndex kNoNode = UINT32_MAX;
inline constexpr ItemId kRootItem = UINT32_MAX;

struct FPNode {
  ItemId item = kRootItem;
  NodeIndex parent = kNoNode;
  NodeIndex next_same = kNoNode;  // node-link to the next node carrying `item`
  std::uint64_t count = 0;
  std::vector<std::pair<ItemId, NodeIndex>> children;
};

struct HeaderEntry {
  ItemId item = 0;
  std::uint64_t support = 0;
  NodeIndex head = kNoNode;
  NodeIndex tail = kNoNode;
};

/// Prefix tree of frequent items with a header table ordered by descending
/// support (ties by ascending id). Node 0 is the root.
class FPTree {
 public:
  /// `order` lists the frequent items in header order with their supports.
  FPTree(std::vector<HeaderEntry> order, std::uint64_t min_count, MemoryTracker* tracker = nullptr);
  FPTree(FPTree&& other) noexcept;
  FPTree& operator=(FPTree&& other) noexcept;
  FPTree(const FPTree&) = delete;
  FPTree& operator=(const FPTree&) = delete;
  ~FPTree();

  /// Filters `items` to header items and sorts them into header order.
  void project(std::span<const ItemId> items, std::vector<ItemId>& out) const;
  /// Inserts a path already in header order, adding `count` along it.
  void insert(std::span<const ItemId> path, std::uint64_t count);

  [[nodiscard]] const FPNode& root() const { return nodes_.front(); }
  [[nodiscard]] const FPNode& node(NodeIndex i) const { return nodes_[i]; }
  [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
  [[nodiscard]] std::span<const HeaderEntry> header() const { return header_; }
  [[nodiscard]] std::uint64_t min_count() const { return min_count_; }
  [[nodiscard]] bool empty() const { return header_.empty(); }
  /// True when every node has at most one child.
  [[nodiscard]] bool single_path() const;

  static constexpr std::size_t kRecordedNodeBytes = sizeof(FPNode);

 private:
  std::vector<FPNode> nodes_;
  std::vector<HeaderEntry> header_;
  std::vector<std::uint32_t> rank_;  // item -> header position, UINT32_MAX if infrequent
  std::uint64_t min_count_ = 1;
  MemoryTracker* tracker_ = nullptr;
};

namespace detail {
std::vector<HeaderEntry> frequent_order(std::span<const std::uint64_t> counts, std::uint64_t min_count);
}

/// Two passes over `db`: item frequencies, then insertion of each
/// transaction's frequent items in header order.
template <TransactionSource S>
FPTree build_fptree(const S& db, double min_support, MemoryTracker* tracker = nullptr) {
  if (!(min_support > 0.0 && min_support <= 1.0)) throw Error("min_support must lie in (0, 1]");
  if (db.size() == 0) throw Error("build_fptree: no transactions");
  const std::uint64_t min_count = min_count_for(min_support, db.size());
  std::vector<std::uint64_t> counts;
  db.for_each([&](const Itemset& t) {
    for (ItemId i : t) {
      if (i >= counts.size()) counts.resize(static_cast<std::size_t>(i) + 1, 0);
      ++counts[i];
    }
  });
  FPTree tree(detail::frequent_order(counts, min_count), min_count, tracker);
  std::vector<ItemId> path;
  db.for_each([&](const Itemset& t) {
    tree.project(t, path);
    if (!path.empty()) tree.insert(path, 1);
  });
  return tree;
}

struct FPGrowthOptions {
  bool single_path_shortcut = true;
};

/// Pattern growth over `tree`: every emitted set is `suffix` plus items from
/// the tree, with exact counts. `n_transactions` scales counts to supports.
std::vector<FrequentItemSet> fpgrowth(const FPTree& tree, const Itemset& suffix, std::size_t n_transactions,
                                      const FPGrowthOptions& options = {}, MemoryTracker* tracker = nullptr);

std::vector<FrequentItemSet> mine_fpgrowth(const TransactionDb& db, double min_support,
                                           const FPGrowthOptions& options = {}, MemoryTracker* tracker = nullptr);

/// Level-wise join/prune mining with one counting scan per level.
std::vector<FrequentItemSet> mine_apriori(const TransactionDb& db, double min_support,
                                          MemoryTracker* tracker = nullptr);

inline constexpr std::size_t kBruteForceMaxItems = 20;

/// Enumerates every subset of the distinct items; refuses more than 20 items.
std::vector<FrequentItemSet> brute_force_frequent(const TransactionDb& db, double min_support);

// --- rules ------------------------------------------------------------------

struct AssociationRule {
  Itemset antecedent;
  ItemId consequent = 0;
  std::uint64_t count = 0;  // transactions containing antecedent and consequent
  double support = 0.0;
  double confidence = 0.0;
  double lift = 0.0;
};

struct RuleOptions {
  double min_confidence = 0.8;
  bool allow_empty_antecedent = false;
};

/// Emits (S - {c}) -> c for every frequent set S holding exactly one
/// consequent item c whose confidence clears the threshold. Output is ordered
/// by consequent, then antecedent size, then antecedent ids.
std::vector<AssociationRule> generate_rules(std::span<const FrequentItemSet> itemsets, std::size_t n_transactions,
                                            std::span<const ItemId> consequent_items, const RuleOptions& options = {});

}  // namespace farm
