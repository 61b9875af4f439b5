#include <doctest.h>

#include <random>

#include "farm/fuzzify.hpp"
#include "oracles.hpp"

using namespace farm;

namespace {

FuzzyModel model_from(std::vector<std::vector<double>> feature_centers, std::vector<double> dengue = {10, 100}) {
  FuzzyModel model;
  for (std::size_t f = 0; f < feature_centers.size(); ++f) {
    FeatureFuzzySets entry;
    entry.centroids = {"f" + std::to_string(f), std::move(feature_centers[f])};
    entry.sets = build_fuzzy_sets(entry.centroids);
    model.features.push_back(std::move(entry));
  }
  model.dengue = {"dengue_cases", std::move(dengue)};
  return model;
}

}  // namespace

TEST_CASE("kmeans examples") {
  CHECK(kmeans(std::vector<double>{1, 1, 1, 9, 9, 9}, 2, 0).centers == std::vector<double>{1, 9});
  CHECK(kmeans(std::vector<double>{5}, 1, 0).centers == std::vector<double>{5});

  const std::vector<double> pts{0, 1, 2, 10, 11, 12, 20, 21, 22};
  const auto oracle = testing::brute_force_kmeans(pts, 3);
  REQUIRE(oracle == std::vector<double>{1, 11, 21});
  CHECK(kmeans(pts, 3, 0).centers == oracle);
}

TEST_CASE("kmeans rejects impossible inputs") {
  CHECK_THROWS_AS(kmeans(std::vector<double>{1, 1, 1}, 2, 0), Error);
  CHECK_THROWS_AS(kmeans(std::vector<double>{1, 2}, 0, 0), Error);
  CHECK_THROWS_AS(kmeans(std::vector<double>{}, 1, 0), Error);
}

TEST_CASE("kmeans determinism, ordering and monotone inertia") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> noise(0.0, 0.05);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> pts;
    const std::size_t n = 20 + rng() % 200;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(static_cast<double>(rng() % 4) * 0.3 + noise(rng));
    const std::size_t k = 2 + rng() % 3;
    KMeansTrace t1, t2;
    const auto a = kmeans(pts, k, 0, &t1);
    const auto b = kmeans(pts, k, 0, &t2);
    CHECK(a.centers == b.centers);
    CHECK(t1.inertia == t2.inertia);
    REQUIRE(a.k() == k);
    for (std::size_t c = 1; c < k; ++c) CHECK(a.centers[c - 1] < a.centers[c]);
    for (std::size_t i = 1; i < t1.inertia.size(); ++i) CHECK(t1.inertia[i] <= t1.inertia[i - 1] + 1e-12);
    CHECK(kmeans_inertia(pts, a.centers) <= t1.inertia.back() + 1e-9);
  }
}

TEST_CASE("kmeans matches the exhaustive optimum on well-separated data") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> pts;
    for (int g = 0; g < 3; ++g) {
      for (int i = 0; i < 3; ++i) pts.push_back(10.0 * g + jitter(rng));
    }
    const auto got = kmeans(pts, 3, static_cast<std::uint64_t>(trial)).centers;
    const auto want = testing::brute_force_kmeans(pts, 3);
    for (std::size_t c = 0; c < 3; ++c) CHECK(got[c] == doctest::Approx(want[c]).epsilon(1e-12));
  }
}

TEST_CASE("build_fuzzy_sets and membership") {
  SUBCASE("two centers") {
    const auto sets = build_fuzzy_sets({"x", {0.2, 0.8}});
    REQUIRE(sets.size() == 2);
    CHECK(sets[0].shape == Shape::TrapezoidLeft);
    CHECK(sets[1].shape == Shape::TrapezoidRight);
    CHECK(sets[0].label == "L1");
    CHECK(membership(sets[0], 0.1) == 1.0);
    CHECK(membership(sets[1], 0.1) == 0.0);
    CHECK(membership(sets[0], 0.2) == 1.0);
    CHECK(membership(sets[0], 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(membership(sets[1], 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(membership(sets[1], 1.5) == 1.0);
  }
  SUBCASE("four centers at x = 0.55") {
    const auto sets = build_fuzzy_sets({"x", {0.1, 0.4, 0.7, 0.9}});
    CHECK(sets[1].shape == Shape::Triangle);
    CHECK(sets[2].breakpoints == std::vector<double>{0.4, 0.7, 0.9});
    // (0.55 - 0.4) / (0.7 - 0.4) and (0.7 - 0.55) / (0.7 - 0.4)
    CHECK(membership(sets[2], 0.55) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(membership(sets[1], 0.55) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(membership(sets[0], 0.55) == 0.0);
    CHECK(membership(sets[3], 0.55) == 0.0);
    // Descending leg of the triangle (0.4, 0.7, 0.9): (0.9 - 0.8) / (0.9 - 0.7).
    CHECK(membership(sets[2], 0.8) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(membership(sets[2], 0.7) == 1.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(build_fuzzy_sets({"x", {0.5}}), Error);
    CHECK_THROWS_AS(build_fuzzy_sets({"x", {0.5, 0.5}}), Error);
  }
}

TEST_CASE("partition of unity and label monotonicity on random centers") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng() % 5;
    std::vector<double> centers;
    while (centers.size() < k) {
      const double c = u(rng);
      if (std::find(centers.begin(), centers.end(), c) == centers.end()) centers.push_back(c);
    }
    std::sort(centers.begin(), centers.end());
    const auto model = model_from({centers});
    const auto dict = make_dictionary(model);
    ItemId last = 0;
    for (int g = 0; g <= 1000; ++g) {
      const double x = g / 1000.0;
      double sum = 0.0;
      for (const auto& s : model.features[0].sets) {
        const double mu = membership(s, x);
        CHECK((mu >= 0.0 && mu <= 1.0));
        sum += mu;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
      const auto items = fuzzify_row(std::vector<double>{x}, model, dict);
      REQUIRE(items.size() == 1);
      CHECK(items[0] >= last);
      last = items[0];
    }
  }
}

TEST_CASE("fuzzify_row encodings") {
  const auto model = model_from({{0.2, 0.8}, {0.1, 0.4, 0.7, 0.9}});
  const auto dict = make_dictionary(model);
  const auto tok = [&](const std::vector<ItemId>& items) {
    std::vector<std::string> out;
    for (auto i : items) out.push_back(dict.token(i));
    return out;
  };
  CHECK(tok(fuzzify_row(std::vector<double>{0.8, 0.4}, model, dict)) == std::vector<std::string>{"f0=L2", "f1=L2"});
  // Exactly midway between adjacent centers: tie goes to the lower label.
  const auto exact = model_from({{0.25, 0.75}, {0.125, 0.25, 0.5, 0.75}});
  const auto exact_dict = make_dictionary(exact);
  const auto ids = fuzzify_row(std::vector<double>{0.5, 0.375}, exact, exact_dict);
  CHECK(exact_dict.token(ids[0]) == "f0=L1");
  CHECK(exact_dict.token(ids[1]) == "f1=L2");
  CHECK(tok(fuzzify_row(std::vector<double>{0.5, 0.55}, model, dict, EncodingMode::alpha_cut(0.4))) ==
        std::vector<std::string>{"f0=L1", "f0=L2", "f1=L2", "f1=L3"});
  CHECK(tok(fuzzify_row(std::vector<double>{0.5, 0.9}, model, dict, EncodingMode::alpha_cut(0.6))) ==
        std::vector<std::string>{"f1=L4"});
  CHECK_THROWS_AS(fuzzify_row(std::vector<double>{0.5}, model, dict), Error);
}

TEST_CASE("dictionary layout") {
  const auto dict = make_dictionary(model_from({{0.2, 0.8}, {0.1, 0.4, 0.7}}));
  CHECK(dict.size() == 7);
  CHECK(dict.token(0) == "f0=L1");
  CHECK(dict.token(4) == "f1=L3");
  CHECK(dict.class_item(DengueClass::High) == 5);
  CHECK(dict.token(6) == "dengue_next=Low");
  CHECK(dict.class_of(5) == DengueClass::High);
  CHECK_FALSE(dict.class_of(1));
  CHECK_THROWS_AS(dict.id_of("nope=L1"), Error);
}

TEST_CASE("dengue_class uses the nearer centroid, ties go Low") {
  const Centroids c{"d", {10, 100}};
  CHECK(dengue_class(90, c) == DengueClass::High);
  CHECK(dengue_class(55, c) == DengueClass::Low);
  CHECK(dengue_class(56, c) == DengueClass::High);
  CHECK(dengue_class(0, c) == DengueClass::Low);
}

TEST_CASE("encode_transactions labels each month with the next month's class") {
  ObservationMatrix m;
  m.features = {"f0"};
  const double dengue[] = {5, 90, 12, 100, 55, 3, 8, 99, 7, 9, 11, 150};
  for (int i = 0; i < 12; ++i) m.rows.push_back({"A", {2001, i + 1}, {i / 11.0}, dengue[i]});
  m.rows.push_back({"B", {2001, 1}, {0.5}, 3});
  const auto model = model_from({{0.2, 0.8}});
  const auto dict = make_dictionary(model);
  Warnings warnings;
  const auto t = encode_transactions(m, model, dict, {}, &warnings);
  REQUIRE(t.size() == 11);
  CHECK(warnings.size() == 1);
  CHECK(t[0].truth == DengueClass::High);  // next month 90
  CHECK(t[1].truth == DengueClass::Low);   // 12
  CHECK(t[3].truth == DengueClass::Low);   // 55 ties low
  CHECK(t[10].truth == DengueClass::High);
  CHECK(t[10].origin == YearMonth{2001, 11});
  for (const auto& tx : t) CHECK(tx.items.size() == 1);
}

TEST_CASE("fit_fuzzy_model pools the matrix") {
  const auto m = normalize(synth_generate(4, {5, 24, 3, 0.25, 2001}));
  const auto a = fit_fuzzy_model(m);
  const auto b = fit_fuzzy_model(m);
  REQUIRE(a.features.size() == 3);
  CHECK(a.features[1].centroids.feature == m.features[1]);
  CHECK(a.features[0].sets.size() == 4);
  CHECK(a.dengue.k() == 2);
  for (std::size_t f = 0; f < 3; ++f) CHECK(a.features[f].centroids.centers == b.features[f].centroids.centers);
  const auto tx = encode_transactions(m, a, make_dictionary(a));
  CHECK(tx.size() == 5 * 23);
  for (const auto& t : tx) CHECK(t.items.size() == 3);
}
