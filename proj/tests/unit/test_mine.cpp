#include <doctest.h>

#include <map>
#include <random>

#include "farm/mine.hpp"
#include "oracles.hpp"

using namespace farm;

namespace {

constexpr ItemId A = 0, B = 1, C = 2, High = 3;

std::map<Itemset, std::uint64_t> as_map(const std::vector<FrequentItemSet>& sets) {
  std::map<Itemset, std::uint64_t> out;
  for (const auto& s : sets) out[s.items] = s.count;
  return out;
}

TransactionDb to_db(const std::vector<std::vector<std::uint32_t>>& rows) {
  return TransactionDb(std::vector<Itemset>(rows.begin(), rows.end()));
}

void check_node_counts(const FPTree& tree, NodeIndex i) {
  const auto& node = tree.node(i);
  std::uint64_t child_sum = 0;
  for (const auto& [item, child] : node.children) {
    CHECK(tree.node(child).item == item);
    CHECK(tree.node(child).parent == i);
    child_sum += tree.node(child).count;
    check_node_counts(tree, child);
  }
  if (i != 0) CHECK(node.count >= child_sum);
}

}  // namespace

TEST_CASE("min_count_for") {
  CHECK(min_count_for(0.1, 50) == 5);
  CHECK(min_count_for(0.5, 3) == 2);
  CHECK(min_count_for(0.01, 10) == 1);
  CHECK(min_count_for(1.0, 7) == 7);
  CHECK_THROWS_AS(min_count_for(0.0, 7), Error);
  CHECK_THROWS_AS(min_count_for(1.5, 7), Error);
}

TEST_CASE("TransactionDb normalizes rows") {
  const TransactionDb db({{3, 1, 3}, {}, {2}});
  CHECK(db[0] == Itemset{1, 3});
  CHECK(db.item_bound() == 4);
  CHECK(db.total_items() == 3);
}

TEST_CASE("build_fptree on a three-transaction example") {
  const TransactionDb db({{A, B}, {A, B}, {A, C}});
  ScanCounter counter(db);
  const auto tree = build_fptree(counter, 0.5);
  CHECK(counter.scans() == 2);
  REQUIRE(tree.header().size() == 2);
  CHECK(tree.header()[0].item == A);
  CHECK(tree.header()[0].support == 3);
  CHECK(tree.header()[1].item == B);
  CHECK(tree.header()[1].support == 2);
  REQUIRE(tree.root().children.size() == 1);
  const auto& a = tree.node(tree.root().children[0].second);
  CHECK(a.item == A);
  CHECK(a.count == 3);
  REQUIRE(a.children.size() == 1);
  CHECK(tree.node(a.children[0].second).item == B);
  CHECK(tree.node(a.children[0].second).count == 2);
  CHECK(tree.single_path());
  CHECK(tree.node_count() == 3);
}

TEST_CASE("header ties break by ascending id and node-links cover every node") {
  const TransactionDb db({{C, B}, {B, C}, {A}, {A, C}, {B}});
  const auto tree = build_fptree(db, 0.2);
  REQUIRE(tree.header().size() == 3);
  CHECK(tree.header()[0].item == B);  // B and C both 3, B first
  CHECK(tree.header()[1].item == C);
  CHECK(tree.header()[2].item == A);
  for (const auto& h : tree.header()) {
    std::uint64_t sum = 0;
    for (NodeIndex n = h.head; n != kNoNode; n = tree.node(n).next_same) {
      CHECK(tree.node(n).item == h.item);
      sum += tree.node(n).count;
    }
    CHECK(sum == h.support);
  }
  check_node_counts(tree, 0);
}

TEST_CASE("fpgrowth on a four-transaction example") {
  const TransactionDb db({{A, B}, {B, C}, {A, B, C}, {B}});
  const auto got = as_map(mine_fpgrowth(db, 0.5));
  const std::map<Itemset, std::uint64_t> want{
      {{B}, 4}, {{A}, 2}, {{C}, 2}, {{A, B}, 2}, {{B, C}, 2}};
  CHECK(got == want);
  const auto sets = mine_fpgrowth(db, 0.5);
  for (const auto& s : sets) CHECK(s.support == doctest::Approx(s.count / 4.0).epsilon(1e-15));
}

TEST_CASE("single-path tree yields every subset") {
  const TransactionDb db({{A, B, C}, {A, B, C}, {A, B}});
  const auto tree = build_fptree(db, 0.5);
  CHECK(tree.single_path());
  const auto got = as_map(fpgrowth(tree, {}, db.size()));
  const std::map<Itemset, std::uint64_t> want{{{A}, 3},    {{B}, 3},    {{C}, 2},   {{A, B}, 3},
                                               {{A, C}, 2}, {{B, C}, 2}, {{A, B, C}, 2}};
  CHECK(got == want);
}

TEST_CASE("fpgrowth, apriori and brute force agree with subset enumeration") {
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> minsup(0.1, 0.9);
  for (int trial = 0; trial < 150; ++trial) {
    const auto rows = testing::random_db(rng, 10, 40);
    const auto db = to_db(rows);
    const double s = minsup(rng);
    const auto want = testing::subset_enumeration_counts(rows, min_count_for(s, db.size()));
    const auto fp = mine_fpgrowth(db, s);
    const auto fp_plain = mine_fpgrowth(db, s, {.single_path_shortcut = false});
    const auto ap = mine_apriori(db, s);
    const auto bf = brute_force_frequent(db, s);
    CHECK(as_map(fp) == want);
    CHECK(as_map(fp_plain) == want);
    CHECK(as_map(ap) == want);
    CHECK(as_map(bf) == want);
    CHECK(fp.size() == want.size());  // no duplicates
    CHECK(ap.size() == want.size());
    auto sorted = fp;
    sort_canonical(sorted);
    CHECK(sorted == fp);
  }
}

TEST_CASE("downward closure") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto db = to_db(testing::random_db(rng, 12, 50));
    const auto sets = as_map(mine_fpgrowth(db, 0.2));
    for (const auto& [items, count] : sets) {
      for (std::size_t drop = 0; drop < items.size() && items.size() > 1; ++drop) {
        Itemset sub = items;
        sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
        REQUIRE(sets.count(sub) == 1);
        CHECK(sets.at(sub) >= count);
      }
    }
  }
}

TEST_CASE("brute force refuses wide item universes") {
  Itemset wide;
  for (ItemId i = 0; i < 21; ++i) wide.push_back(i);
  CHECK_THROWS_AS(brute_force_frequent(TransactionDb({wide}), 0.5), Error);
}

TEST_CASE("miners reject bad input") {
  CHECK_THROWS_AS(mine_fpgrowth(TransactionDb{}, 0.5), Error);
  CHECK_THROWS_AS(mine_apriori(TransactionDb(std::vector<Itemset>{{A}}), 0.0), Error);
}

TEST_CASE("memory tracker records a peak for both miners") {
  std::mt19937_64 rng(3);
  const auto db = to_db(testing::random_db(rng, 12, 50));
  MemoryTracker fp, ap;
  mine_fpgrowth(db, 0.2, {}, &fp);
  mine_apriori(db, 0.2, &ap);
  CHECK(fp.peak() > 0);
  CHECK(ap.peak() > 0);
  CHECK(fp.current() == 0);
  CHECK(ap.current() == 0);
  MemoryTracker again;
  mine_fpgrowth(db, 0.2, {}, &again);
  CHECK(again.peak() == fp.peak());
}

TEST_CASE("generate_rules on a hand example") {
  // 4 transactions: {A,High}, {A,High}, {High}, {B}
  const std::vector<FrequentItemSet> sets{
      {{A}, 2, 0.5}, {{High}, 3, 0.75}, {{A, High}, 2, 0.5}, {{B}, 1, 0.25}};
  const ItemId consequents[] = {High};
  const auto rules = generate_rules(sets, 4, consequents);
  REQUIRE(rules.size() == 1);
  CHECK(rules[0].antecedent == Itemset{A});
  CHECK(rules[0].consequent == High);
  CHECK(rules[0].count == 2);
  CHECK(rules[0].support == 0.5);
  CHECK(rules[0].confidence == 1.0);
  CHECK(rules[0].lift == doctest::Approx(4.0 / 3.0).epsilon(1e-15));

  const auto with_empty = generate_rules(sets, 4, consequents, {.min_confidence = 0.7, .allow_empty_antecedent = true});
  REQUIRE(with_empty.size() == 2);
  CHECK(with_empty[0].antecedent.empty());
  CHECK(with_empty[0].confidence == 0.75);
}

TEST_CASE("rule arithmetic matches direct counting") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    auto rows = testing::random_db(rng, 8, 40);
    // Items 8 and 9 act as the two class items, exactly one per row.
    for (auto& r : rows) r.push_back(rng() % 2 ? 8u : 9u);
    const auto db = to_db(rows);
    const auto sets = mine_fpgrowth(db, 0.1);
    const ItemId consequents[] = {8, 9};
    const auto rules = generate_rules(sets, db.size(), consequents, {.min_confidence = 0.3});
    for (const auto& r : rules) {
      std::uint64_t ante = 0, both = 0, cons = 0;
      for (const auto& row : db.rows()) {
        const bool has_a = std::includes(row.begin(), row.end(), r.antecedent.begin(), r.antecedent.end());
        const bool has_c = std::binary_search(row.begin(), row.end(), r.consequent);
        ante += has_a;
        cons += has_c;
        both += has_a && has_c;
      }
      const double n = static_cast<double>(db.size());
      CHECK(r.count == both);
      CHECK(std::abs(r.support - both / n) <= 1e-12);
      CHECK(std::abs(r.confidence - static_cast<double>(both) / ante) <= 1e-12);
      CHECK(std::abs(r.lift - (static_cast<double>(both) / ante) / (cons / n)) <= 1e-12);
      CHECK(r.confidence >= 0.3);
      CHECK_FALSE(std::binary_search(r.antecedent.begin(), r.antecedent.end(), ItemId{8}));
      CHECK_FALSE(std::binary_search(r.antecedent.begin(), r.antecedent.end(), ItemId{9}));
    }
  }
}
