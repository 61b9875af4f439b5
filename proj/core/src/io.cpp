#include "farm/io.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <map>
#include <sstream>

#include "farm/csv.hpp"

namespace farm::io {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return in;
}

void write_json(const fs::path& path, const json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

json read_json(const fs::path& path, const char* schema) {
  auto in = open_in(path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(path.string() + ": invalid JSON: " + e.what());
  }
  const std::string found = doc.contains("schema") && doc["schema"].is_string() ? doc["schema"].get<std::string>() : "";
  if (found != schema) {
    throw Error(path.string() + ": schema mismatch (expected " + std::string(schema) + ", found '" + found + "')");
  }
  return doc;
}

template <class F>
auto guarded(const fs::path& path, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw Error(path.string() + ": malformed content: " + e.what());
  }
}

std::string year_month_cells(const YearMonth& ym) { return std::to_string(ym.year) + "," + std::to_string(ym.month); }

YearMonth parse_year_month(const std::string& year, const std::string& month, const fs::path& path, std::size_t line) {
  try {
    YearMonth ym{std::stoi(year), std::stoi(month)};
    if (ym.month < 1 || ym.month > 12) throw std::out_of_range("month");
    return ym;
  } catch (const std::logic_error&) {
    throw Error(path.string() + ":" + std::to_string(line) + ": bad year/month");
  }
}

json centers_json(const Centroids& c) { return json{{"feature", c.feature}, {"centers", c.centers}}; }

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string read_text(const fs::path& path) {
  auto in = open_in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_series_csv(const fs::path& path, std::span<const FeatureSeries> series) {
  std::vector<std::string> columns;
  for (const auto& s : series) {
    if (std::find(columns.begin(), columns.end(), s.feature) == columns.end()) columns.push_back(s.feature);
  }
  // (region, date) -> cells
  std::map<std::pair<std::string, Date>, std::vector<std::string>> rows;
  std::vector<std::string> region_order;
  for (const auto& s : series) {
    if (std::find(region_order.begin(), region_order.end(), s.region) == region_order.end()) {
      region_order.push_back(s.region);
    }
    const auto col = static_cast<std::size_t>(std::find(columns.begin(), columns.end(), s.feature) - columns.begin());
    for (const auto& sample : s.samples) {
      auto& cells = rows[{s.region, sample.date}];
      cells.resize(columns.size());
      if (sample.value) cells[col] = format_real(*sample.value);
    }
  }
  auto out = open_out(path);
  out << "region,date";
  for (const auto& c : columns) out << ',' << c;
  out << '\n';
  for (const auto& region : region_order) {
    for (auto it = rows.lower_bound({region, Date{INT32_MIN, 0, 0}}); it != rows.end() && it->first.first == region;
         ++it) {
      out << region << ',' << format_date(it->first.second);
      for (const auto& cell : it->second) out << ',' << cell;
      out << '\n';
    }
  }
}

void write_matrix_csv(const fs::path& path, const ObservationMatrix& matrix) {
  auto out = open_out(path);
  out << "region,year,month";
  for (const auto& f : matrix.features) out << ',' << f;
  out << ",dengue_cases\n";
  for (const auto& row : matrix.rows) {
    out << row.region << ',' << year_month_cells(row.month);
    for (double v : row.features) out << ',' << format_real(v);
    out << ',' << format_real(row.dengue) << '\n';
  }
}

ObservationMatrix read_matrix_csv(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw Error(path.string() + ": empty matrix file");
  const auto header = split_csv_line(line);
  if (header.size() < 5 || header[0] != "region" || header[1] != "year" || header[2] != "month" ||
      header.back() != "dengue_cases") {
    throw Error(path.string() + ": not a matrix file (expected region,year,month,<features...>,dengue_cases)");
  }
  ObservationMatrix m;
  m.features.assign(header.begin() + 3, header.end() - 1);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                  " cells");
    }
    MatrixRow row{cells[0], parse_year_month(cells[1], cells[2], path, line_no), {}, 0.0};
    for (std::size_t c = 3; c < cells.size(); ++c) {
      const auto v = parse_real(cells[c]);
      if (!v) throw Error(path.string() + ":" + std::to_string(line_no) + ": bad number '" + cells[c] + "'");
      if (c + 1 == cells.size()) {
        row.dengue = *v;
      } else {
        row.features.push_back(*v);
      }
    }
    m.rows.push_back(std::move(row));
  }
  return m;
}

void write_norm_params(const fs::path& path, const ObservationMatrix& matrix) {
  json cols = json::array();
  for (std::size_t f = 0; f < matrix.features.size(); ++f) {
    cols.push_back({{"feature", matrix.features[f]},
                    {"min", matrix.norm_params.at(f).min},
                    {"max", matrix.norm_params.at(f).max}});
  }
  write_json(path, {{"schema", kNormSchema}, {"columns", cols}});
}

std::vector<MinMax> read_norm_params(const fs::path& path, std::span<const std::string> features) {
  const json doc = read_json(path, kNormSchema);
  return guarded(path, [&] {
    std::vector<MinMax> out;
    const auto& cols = doc.at("columns");
    if (cols.size() != features.size()) throw Error(path.string() + ": column count differs from the matrix");
    for (std::size_t f = 0; f < features.size(); ++f) {
      if (cols[f].at("feature").get<std::string>() != features[f]) {
        throw Error(path.string() + ": column " + std::to_string(f) + " is not " + features[f]);
      }
      out.push_back({cols[f].at("min").get<double>(), cols[f].at("max").get<double>()});
    }
    return out;
  });
}

void write_fuzzy_model(const fs::path& path, const FuzzyModel& model) {
  json features = json::array();
  for (const auto& f : model.features) {
    json sets = json::array();
    for (const auto& s : f.sets) {
      sets.push_back({{"label", s.label}, {"shape", std::string(to_string(s.shape))}, {"breakpoints", s.breakpoints}});
    }
    json entry = centers_json(f.centroids);
    entry["sets"] = sets;
    features.push_back(entry);
  }
  write_json(path, {{"schema", kFuzzySchema},
                    {"kmeans_seed", model.kmeans_seed},
                    {"features", features},
                    {"dengue", centers_json(model.dengue)}});
}

FuzzyModel read_fuzzy_model(const fs::path& path) {
  const json doc = read_json(path, kFuzzySchema);
  return guarded(path, [&] {
    FuzzyModel model;
    model.kmeans_seed = doc.at("kmeans_seed").get<std::uint64_t>();
    for (const auto& f : doc.at("features")) {
      FeatureFuzzySets entry;
      entry.centroids = {f.at("feature").get<std::string>(), f.at("centers").get<std::vector<double>>()};
      for (const auto& s : f.at("sets")) {
        entry.sets.push_back({entry.centroids.feature, s.at("label").get<std::string>(),
                              parse_shape(s.at("shape").get<std::string>()),
                              s.at("breakpoints").get<std::vector<double>>()});
      }
      model.features.push_back(std::move(entry));
    }
    const auto& d = doc.at("dengue");
    model.dengue = {d.at("feature").get<std::string>(), d.at("centers").get<std::vector<double>>()};
    return model;
  });
}

void write_transactions(const fs::path& path, std::span<const Transaction> transactions, const ItemDictionary& dict) {
  auto out = open_out(path);
  out << kTransactionsHeader << '\n';
  for (const auto& t : transactions) {
    out << t.region << ',' << year_month_cells(t.origin) << ',';
    for (std::size_t i = 0; i < t.items.size(); ++i) {
      if (i > 0) out << ' ';
      out << dict.token(t.items[i]);
    }
    out << ',' << to_string(t.truth) << '\n';
  }
}

std::vector<Transaction> read_transactions(const fs::path& path, const ItemDictionary& dict) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kTransactionsHeader) {
    throw Error(path.string() + ": schema mismatch (expected header '" + std::string(kTransactionsHeader) + "')");
  }
  std::vector<Transaction> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 5) throw Error(path.string() + ":" + std::to_string(line_no) + ": expected 5 cells");
    Transaction t{cells[0], parse_year_month(cells[1], cells[2], path, line_no), {}, parse_dengue_class(trim(cells[4]))};
    std::istringstream tokens(cells[3]);
    std::string token;
    while (tokens >> token) t.items.push_back(dict.id_of(token));
    std::sort(t.items.begin(), t.items.end());
    if (t.items.empty()) throw Error(path.string() + ":" + std::to_string(line_no) + ": transaction has no items");
    out.push_back(std::move(t));
  }
  return out;
}

void write_rules(const fs::path& path, const RulesFile& rules, const ItemDictionary& dict) {
  json arr = json::array();
  for (const auto& r : rules.rules) {
    json ante = json::array();
    for (ItemId i : r.antecedent) ante.push_back(dict.token(i));
    arr.push_back({{"antecedent", ante},
                   {"consequent", dict.token(r.consequent)},
                   {"count", r.count},
                   {"support", r.support},
                   {"confidence", r.confidence},
                   {"lift", r.lift}});
  }
  write_json(path, {{"schema", kRulesSchema},
                    {"algorithm", rules.algorithm},
                    {"min_support", rules.min_support},
                    {"min_confidence", rules.min_confidence},
                    {"transactions", rules.transactions},
                    {"itemset_count", rules.itemset_count},
                    {"rules", arr}});
}

RulesFile read_rules(const fs::path& path, const ItemDictionary& dict) {
  const json doc = read_json(path, kRulesSchema);
  return guarded(path, [&] {
    RulesFile out;
    out.algorithm = doc.at("algorithm").get<std::string>();
    out.min_support = doc.at("min_support").get<double>();
    out.min_confidence = doc.at("min_confidence").get<double>();
    out.transactions = doc.at("transactions").get<std::size_t>();
    out.itemset_count = doc.at("itemset_count").get<std::size_t>();
    for (const auto& r : doc.at("rules")) {
      AssociationRule rule;
      for (const auto& tok : r.at("antecedent")) rule.antecedent.push_back(dict.id_of(tok.get<std::string>()));
      std::sort(rule.antecedent.begin(), rule.antecedent.end());
      rule.consequent = dict.id_of(r.at("consequent").get<std::string>());
      rule.count = r.at("count").get<std::uint64_t>();
      rule.support = r.at("support").get<double>();
      rule.confidence = r.at("confidence").get<double>();
      rule.lift = r.at("lift").get<double>();
      out.rules.push_back(std::move(rule));
    }
    return out;
  });
}

void write_predictions(const fs::path& path, std::span<const Transaction> test, const Evaluation& evaluation) {
  if (test.size() != evaluation.predictions.size()) throw Error("write_predictions: size mismatch");
  auto out = open_out(path);
  out << kPredictionsHeader << '\n';
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& p = evaluation.predictions[i];
    out << test[i].region << ',' << year_month_cells(test[i].origin) << ',' << to_string(p.predicted) << ','
        << to_string(test[i].truth) << ',' << (p.fired_rule ? std::to_string(*p.fired_rule) : "-1") << ','
        << (p.defaulted() ? 1 : 0) << '\n';
  }
}

std::vector<PredictionRecord> read_predictions(const fs::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kPredictionsHeader) {
    throw Error(path.string() + ": schema mismatch (expected header '" + std::string(kPredictionsHeader) + "')");
  }
  std::vector<PredictionRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 7) throw Error(path.string() + ":" + std::to_string(line_no) + ": expected 7 cells");
    PredictionRecord rec{cells[0], parse_year_month(cells[1], cells[2], path, line_no), parse_dengue_class(cells[3]),
                         parse_dengue_class(cells[4]), std::nullopt};
    const long fired = std::stol(cells[5]);
    if (fired >= 0) rec.fired_rule = static_cast<std::size_t>(fired);
    if ((trim(cells[6]) == "1") != !rec.fired_rule) {
      throw Error(path.string() + ":" + std::to_string(line_no) + ": defaulted flag contradicts fired_rule_index");
    }
    out.push_back(std::move(rec));
  }
  return out;
}

void write_bench(const fs::path& path, std::span<const BenchReport> reports) {
  json arr = json::array();
  for (const auto& r : reports) {
    arr.push_back({{"algorithm", std::string(to_string(r.algorithm))},
                   {"min_support", r.min_support},
                   {"wall_time", r.wall_time},
                   {"mean_time", r.mean_time()},
                   {"tracked_bytes_peak", r.tracked_bytes_peak},
                   {"rss_peak", r.rss_peak ? json(*r.rss_peak) : json(nullptr)},
                   {"itemset_count", r.itemset_count},
                   {"dataset_fingerprint", r.dataset_fingerprint}});
  }
  write_json(path, {{"schema", kBenchSchema}, {"reports", arr}});
}

std::vector<BenchReport> read_bench(const fs::path& path) {
  const json doc = read_json(path, kBenchSchema);
  return guarded(path, [&] {
    std::vector<BenchReport> out;
    for (const auto& r : doc.at("reports")) {
      BenchReport b;
      b.algorithm = parse_algorithm(r.at("algorithm").get<std::string>());
      b.min_support = r.at("min_support").get<double>();
      b.wall_time = r.at("wall_time").get<std::vector<double>>();
      b.tracked_bytes_peak = r.at("tracked_bytes_peak").get<std::size_t>();
      if (!r.at("rss_peak").is_null()) b.rss_peak = r.at("rss_peak").get<std::size_t>();
      b.itemset_count = r.at("itemset_count").get<std::size_t>();
      b.dataset_fingerprint = r.at("dataset_fingerprint").get<std::uint64_t>();
      out.push_back(std::move(b));
    }
    return out;
  });
}

}  // namespace farm::io
