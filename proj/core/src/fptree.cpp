#include <algorithm>
#include <cmath>

#include "farm/mine.hpp"

namespace farm {

TransactionDb::TransactionDb(std::vector<Itemset> rows) : rows_(std::move(rows)) {
  for (auto& row : rows_) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
    if (!row.empty()) item_bound_ = std::max(item_bound_, row.back() + 1);
    total_items_ += row.size();
  }
}

std::uint64_t min_count_for(double min_support, std::size_t n) {
  if (!(min_support > 0.0 && min_support <= 1.0)) throw Error("min_support must lie in (0, 1]");
  // Absorb representation error so that 0.1 * 50 counts as 5, not 6.
  const double raw = min_support * static_cast<double>(n);
  const auto count = static_cast<std::uint64_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
  return std::max<std::uint64_t>(count, 1);
}

void sort_canonical(std::vector<FrequentItemSet>& sets) {
  std::sort(sets.begin(), sets.end(), [](const FrequentItemSet& a, const FrequentItemSet& b) {
    if (a.items.size() != b.items.size()) return a.items.size() < b.items.size();
    return a.items < b.items;
  });
}

std::size_t transaction_storage_bytes(const TransactionDb& db) {
  return db.size() * sizeof(Itemset) + db.total_items() * sizeof(ItemId);
}

namespace detail {

std::vector<HeaderEntry> frequent_order(std::span<const std::uint64_t> counts, std::uint64_t min_count) {
  std::vector<HeaderEntry> order;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] >= min_count) order.push_back({static_cast<ItemId>(i), counts[i], kNoNode, kNoNode});
  }
  std::sort(order.begin(), order.end(), [](const HeaderEntry& a, const HeaderEntry& b) {
    if (a.support != b.support) return a.support > b.support;
    return a.item < b.item;
  });
  return order;
}

}  // namespace detail

FPTree::FPTree(std::vector<HeaderEntry> order, std::uint64_t min_count, MemoryTracker* tracker)
    : header_(std::move(order)), min_count_(min_count), tracker_(tracker) {
  ItemId bound = 0;
  for (const auto& h : header_) bound = std::max(bound, h.item + 1);
  rank_.assign(bound, UINT32_MAX);
  for (std::size_t i = 0; i < header_.size(); ++i) {
    rank_[header_[i].item] = static_cast<std::uint32_t>(i);
    header_[i].head = header_[i].tail = kNoNode;
  }
  nodes_.emplace_back();
  if (tracker_ != nullptr) tracker_->charge(kRecordedNodeBytes);
}

FPTree::FPTree(FPTree&& other) noexcept
    : nodes_(std::move(other.nodes_)),
      header_(std::move(other.header_)),
      rank_(std::move(other.rank_)),
      min_count_(other.min_count_),
      tracker_(std::exchange(other.tracker_, nullptr)) {
  other.nodes_.clear();
}

FPTree& FPTree::operator=(FPTree&& other) noexcept {
  if (this != &other) {
    if (tracker_ != nullptr) tracker_->release(nodes_.size() * kRecordedNodeBytes);
    nodes_ = std::move(other.nodes_);
    header_ = std::move(other.header_);
    rank_ = std::move(other.rank_);
    min_count_ = other.min_count_;
    tracker_ = std::exchange(other.tracker_, nullptr);
    other.nodes_.clear();
  }
  return *this;
}

FPTree::~FPTree() {
  if (tracker_ != nullptr) tracker_->release(nodes_.size() * kRecordedNodeBytes);
}

void FPTree::project(std::span<const ItemId> items, std::vector<ItemId>& out) const {
  out.clear();
  for (ItemId i : items) {
    if (i < rank_.size() && rank_[i] != UINT32_MAX) out.push_back(i);
  }
  std::sort(out.begin(), out.end(), [this](ItemId a, ItemId b) { return rank_[a] < rank_[b]; });
}

void FPTree::insert(std::span<const ItemId> path, std::uint64_t count) {
  NodeIndex cur = 0;
  nodes_[0].count += count;
  for (ItemId item : path) {
    NodeIndex next = kNoNode;
    for (const auto& [child_item, child] : nodes_[cur].children) {
      if (child_item == item) {
        next = child;
        break;
      }
    }
    if (next == kNoNode) {
      next = static_cast<NodeIndex>(nodes_.size());
      FPNode node;
      node.item = item;
      node.parent = cur;
      nodes_.push_back(std::move(node));
      nodes_[cur].children.emplace_back(item, next);
      if (tracker_ != nullptr) tracker_->charge(kRecordedNodeBytes);
      auto& h = header_[rank_[item]];
      if (h.tail == kNoNode) {
        h.head = next;
      } else {
        nodes_[h.tail].next_same = next;
      }
      h.tail = next;
    }
    nodes_[next].count += count;
    cur = next;
  }
}

bool FPTree::single_path() const {
  return std::all_of(nodes_.begin(), nodes_.end(), [](const FPNode& n) { return n.children.size() <= 1; });
}

namespace {

class Grower {
 public:
  Grower(std::size_t n, const FPGrowthOptions& options, MemoryTracker* tracker, std::vector<FrequentItemSet>& out)
      : n_(static_cast<double>(n)), options_(options), tracker_(tracker), out_(out) {}

  void grow(const FPTree& tree, const Itemset& suffix) {
    if (tree.empty()) return;
    if (options_.single_path_shortcut && tree.single_path()) {
      emit_single_path(tree, suffix);
      return;
    }
    const auto header = tree.header();
    std::vector<std::uint64_t> cond_counts;
    std::vector<std::pair<std::vector<ItemId>, std::uint64_t>> base;
    std::vector<ItemId> projected;
    // Least frequent header item first.
    for (auto it = header.rbegin(); it != header.rend(); ++it) {
      Itemset beta = with_item(suffix, it->item);
      emit(beta, it->support);

      base.clear();
      cond_counts.assign(cond_counts.size(), 0);
      for (NodeIndex n = it->head; n != kNoNode; n = tree.node(n).next_same) {
        const std::uint64_t weight = tree.node(n).count;
        std::vector<ItemId> path;
        for (NodeIndex p = tree.node(n).parent; p != 0; p = tree.node(p).parent) {
          const ItemId item = tree.node(p).item;
          path.push_back(item);
          if (item >= cond_counts.size()) cond_counts.resize(static_cast<std::size_t>(item) + 1, 0);
          cond_counts[item] += weight;
        }
        if (!path.empty()) base.emplace_back(std::move(path), weight);
      }
      auto order = detail::frequent_order(cond_counts, tree.min_count());
      if (order.empty()) continue;
      FPTree conditional(std::move(order), tree.min_count(), tracker_);
      for (const auto& [path, weight] : base) {
        conditional.project(path, projected);
        if (!projected.empty()) conditional.insert(projected, weight);
      }
      grow(conditional, beta);
    }
  }

 private:
  static Itemset with_item(const Itemset& suffix, ItemId item) {
    Itemset out = suffix;
    out.insert(std::lower_bound(out.begin(), out.end(), item), item);
    return out;
  }

  void emit(Itemset items, std::uint64_t count) {
    out_.push_back({std::move(items), count, static_cast<double>(count) / n_});
  }

  void emit_single_path(const FPTree& tree, const Itemset& suffix) {
    std::vector<NodeIndex> path;
    for (NodeIndex n = 0; !tree.node(n).children.empty();) {
      n = tree.node(n).children.front().second;
      path.push_back(n);
    }
    // Counts never increase down a path, so a subset's count is that of its deepest node.
    const std::size_t m = path.size();
    std::vector<std::size_t> chosen;
    auto recurse = [&](auto&& self, std::size_t from) -> void {
      for (std::size_t i = from; i < m; ++i) {
        chosen.push_back(i);
        Itemset items = suffix;
        for (auto c : chosen) items.push_back(tree.node(path[c]).item);
        std::sort(items.begin(), items.end());
        emit(std::move(items), tree.node(path[i]).count);
        self(self, i + 1);
        chosen.pop_back();
      }
    };
    recurse(recurse, 0);
  }

  double n_;
  const FPGrowthOptions& options_;
  MemoryTracker* tracker_;
  std::vector<FrequentItemSet>& out_;
};

}  // namespace

std::vector<FrequentItemSet> fpgrowth(const FPTree& tree, const Itemset& suffix, std::size_t n_transactions,
                                      const FPGrowthOptions& options, MemoryTracker* tracker) {
  std::vector<FrequentItemSet> out;
  Grower(n_transactions, options, tracker, out).grow(tree, suffix);
  sort_canonical(out);
  return out;
}

std::vector<FrequentItemSet> mine_fpgrowth(const TransactionDb& db, double min_support,
                                           const FPGrowthOptions& options, MemoryTracker* tracker) {
  if (tracker != nullptr) tracker->charge(transaction_storage_bytes(db));
  std::vector<FrequentItemSet> out;
  {
    const FPTree tree = build_fptree(db, min_support, tracker);
    out = fpgrowth(tree, {}, db.size(), options, tracker);
  }
  if (tracker != nullptr) tracker->release(transaction_storage_bytes(db));
  return out;
}

}  // namespace farm
