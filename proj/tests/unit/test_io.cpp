#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <random>

#include "farm/io.hpp"

using namespace farm;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("farm-io-" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

ObservationMatrix sample_matrix() { return normalize(synth_generate(17, {3, 14, 4, 0.3, 2003})); }

}  // namespace

TEST_CASE("matrix and normalization parameters round-trip bit-exactly") {
  TempDir dir;
  const auto m = sample_matrix();
  io::write_matrix_csv(dir.path / "m.csv", m);
  io::write_norm_params(dir.path / "n.json", m);
  const auto back = io::read_matrix_csv(dir.path / "m.csv");
  REQUIRE(back.rows.size() == m.rows.size());
  CHECK(back.features == m.features);
  for (std::size_t r = 0; r < m.rows.size(); ++r) {
    CHECK(back.rows[r].region == m.rows[r].region);
    CHECK(back.rows[r].month == m.rows[r].month);
    CHECK(same_bits(back.rows[r].dengue, m.rows[r].dengue));
    for (std::size_t f = 0; f < m.features.size(); ++f) CHECK(same_bits(back.rows[r].features[f], m.rows[r].features[f]));
  }
  const auto params = io::read_norm_params(dir.path / "n.json", m.features);
  REQUIRE(params.size() == m.norm_params.size());
  for (std::size_t f = 0; f < params.size(); ++f) {
    CHECK(same_bits(params[f].min, m.norm_params[f].min));
    CHECK(same_bits(params[f].max, m.norm_params[f].max));
  }
  const std::vector<std::string> wrong{"x"};
  CHECK_THROWS_AS(io::read_norm_params(dir.path / "n.json", wrong), Error);
}

TEST_CASE("fuzzy model round-trips bit-exactly") {
  TempDir dir;
  const auto model = fit_fuzzy_model(sample_matrix(), {.k_features = 3, .k_dengue = 2, .kmeans_seed = 5});
  io::write_fuzzy_model(dir.path / "f.json", model);
  const auto back = io::read_fuzzy_model(dir.path / "f.json");
  REQUIRE(back.features.size() == model.features.size());
  CHECK(back.kmeans_seed == 5);
  for (std::size_t f = 0; f < model.features.size(); ++f) {
    const auto& a = model.features[f];
    const auto& b = back.features[f];
    CHECK(a.centroids.feature == b.centroids.feature);
    REQUIRE(a.sets.size() == b.sets.size());
    for (std::size_t c = 0; c < a.centroids.k(); ++c) CHECK(same_bits(a.centroids.centers[c], b.centroids.centers[c]));
    for (std::size_t s = 0; s < a.sets.size(); ++s) {
      CHECK(a.sets[s].label == b.sets[s].label);
      CHECK(a.sets[s].shape == b.sets[s].shape);
      REQUIRE(a.sets[s].breakpoints.size() == b.sets[s].breakpoints.size());
      for (std::size_t p = 0; p < a.sets[s].breakpoints.size(); ++p)
        CHECK(same_bits(a.sets[s].breakpoints[p], b.sets[s].breakpoints[p]));
    }
  }
  for (std::size_t c = 0; c < 2; ++c) CHECK(same_bits(model.dengue.centers[c], back.dengue.centers[c]));
}

TEST_CASE("transactions, rules and predictions round-trip") {
  TempDir dir;
  const auto m = sample_matrix();
  const auto model = fit_fuzzy_model(m);
  const auto dict = make_dictionary(model);
  const auto tx = encode_transactions(m, model, dict);
  io::write_transactions(dir.path / "t.csv", tx, dict);
  const auto tx_back = io::read_transactions(dir.path / "t.csv", dict);
  REQUIRE(tx_back.size() == tx.size());
  for (std::size_t i = 0; i < tx.size(); ++i) {
    CHECK(tx_back[i].region == tx[i].region);
    CHECK(tx_back[i].origin == tx[i].origin);
    CHECK(tx_back[i].items == tx[i].items);
    CHECK(tx_back[i].truth == tx[i].truth);
  }
  CHECK(io::read_text(dir.path / "t.csv").rfind(io::kTransactionsHeader, 0) == 0);

  std::vector<Itemset> rows;
  for (const auto& t : tx) {
    auto r = t.items;
    r.push_back(dict.class_item(t.truth));
    rows.push_back(r);
  }
  const TransactionDb db(rows);
  const auto sets = mine_fpgrowth(db, 0.1);
  const ItemId cons[] = {dict.class_item(DengueClass::High), dict.class_item(DengueClass::Low)};
  io::RulesFile rf{"fpgrowth", 0.1, 0.6, db.size(), sets.size(), generate_rules(sets, db.size(), cons, {.min_confidence = 0.6})};
  REQUIRE_FALSE(rf.rules.empty());
  io::write_rules(dir.path / "r.json", rf, dict);
  const auto rf_back = io::read_rules(dir.path / "r.json", dict);
  CHECK(rf_back.algorithm == "fpgrowth");
  CHECK(rf_back.itemset_count == rf.itemset_count);
  REQUIRE(rf_back.rules.size() == rf.rules.size());
  for (std::size_t i = 0; i < rf.rules.size(); ++i) {
    CHECK(rf_back.rules[i].antecedent == rf.rules[i].antecedent);
    CHECK(rf_back.rules[i].consequent == rf.rules[i].consequent);
    CHECK(rf_back.rules[i].count == rf.rules[i].count);
    CHECK(same_bits(rf_back.rules[i].confidence, rf.rules[i].confidence));
    CHECK(same_bits(rf_back.rules[i].lift, rf.rules[i].lift));
  }

  const auto book = sort_rules(rf.rules, dict);
  const auto ev = evaluate(book, tx);
  io::write_predictions(dir.path / "p.csv", tx, ev);
  const auto preds = io::read_predictions(dir.path / "p.csv");
  REQUIRE(preds.size() == tx.size());
  for (std::size_t i = 0; i < tx.size(); ++i) {
    CHECK(preds[i].region == tx[i].region);
    CHECK(preds[i].predicted == ev.predictions[i].predicted);
    CHECK(preds[i].fired_rule == ev.predictions[i].fired_rule);
    CHECK(preds[i].truth == tx[i].truth);
  }
}

TEST_CASE("bench reports round-trip") {
  TempDir dir;
  const TransactionDb db({{0, 1}, {1, 2}, {0, 1, 2}});
  const BenchReport reports[] = {benchmark(Algorithm::FPGrowth, db, 0.5, {.repetitions = 2}),
                                 benchmark(Algorithm::Apriori, db, 0.5, {.repetitions = 2})};
  io::write_bench(dir.path / "b.json", reports);
  const auto back = io::read_bench(dir.path / "b.json");
  REQUIRE(back.size() == 2);
  CHECK(back[1].algorithm == Algorithm::Apriori);
  CHECK(back[0].wall_time == reports[0].wall_time);
  CHECK(back[0].tracked_bytes_peak == reports[0].tracked_bytes_peak);
  CHECK(back[1].dataset_fingerprint == reports[1].dataset_fingerprint);
}

TEST_CASE("malformed artifacts are rejected") {
  TempDir dir;
  io::write_text(dir.path / "bad.json", R"({"schema":"farm.rules/9","rules":[]})");
  ItemDictionary dict;
  CHECK_THROWS_AS(io::read_rules(dir.path / "bad.json", dict), Error);
  CHECK_THROWS_AS(io::read_fuzzy_model(dir.path / "bad.json"), Error);
  io::write_text(dir.path / "junk.json", "{not json");
  CHECK_THROWS_AS(io::read_fuzzy_model(dir.path / "junk.json"), Error);
  CHECK_THROWS_AS(io::read_fuzzy_model(dir.path / "missing.json"), Error);
  io::write_text(dir.path / "t.csv", "wrong,header\n");
  CHECK_THROWS_AS(io::read_transactions(dir.path / "t.csv", dict), Error);
}
