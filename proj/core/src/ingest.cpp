#include "farm/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "farm/csv.hpp"

namespace farm {

void warn(Warnings* sink, std::string message) {
  if (sink != nullptr) {
    sink->push_back(std::move(message));
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

std::vector<std::string> ObservationMatrix::regions() const {
  std::vector<std::string> out;
  for (const auto& row : rows) {
    if (out.empty() || out.back() != row.region) out.push_back(row.region);
  }
  return out;
}

std::vector<FeatureSeries> load_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read CSV file " + path.string());
  return parse_csv(in, schema, path.string());
}

std::vector<FeatureSeries> parse_csv(std::istream& in, const CsvSchema& schema, std::string_view source_name) {
  const std::string source(source_name);
  std::string line;
  if (!std::getline(in, line)) throw Error(source + ": empty file (no header row)");
  const auto header = split_csv_line(line);

  auto column_of = [&](const std::string& name) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error(source + ": missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t region_col = column_of(schema.region_column);
  const std::size_t date_col = column_of(schema.date_column);

  std::vector<std::string> value_names = schema.value_columns;
  if (value_names.empty()) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (c != region_col && c != date_col && !header[c].empty()) value_names.push_back(header[c]);
    }
  }
  if (value_names.empty()) throw Error(source + ": no value columns");
  std::vector<std::size_t> value_cols;
  for (const auto& name : value_names) value_cols.push_back(column_of(name));

  struct RegionData {
    std::map<Date, std::size_t> line_of;
    std::vector<std::vector<Sample>> per_column;
  };
  std::vector<std::string> region_order;
  std::map<std::string, RegionData> by_region;

  std::size_t line_no = 1;
  std::size_t parsed = 0;
  std::size_t skipped = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto cells = split_csv_line(line);
    const auto cell = [&](std::size_t c) -> std::string_view {
      return c < cells.size() ? std::string_view(cells[c]) : std::string_view{};
    };
    const auto date = parse_date(cell(date_col));
    const std::string region(trim(cell(region_col)));
    if (!date || region.empty()) {
      ++skipped;
      continue;
    }
    auto [it, inserted] = by_region.try_emplace(region);
    RegionData& data = it->second;
    if (inserted) {
      region_order.push_back(region);
      data.per_column.resize(value_cols.size());
    }
    auto [pos, fresh] = data.line_of.emplace(*date, line_no);
    if (!fresh) {
      throw Error(source + ": duplicate (region, date) row (" + region + ", " + format_date(*date) +
                  ") at line " + std::to_string(line_no) + ", first seen at line " +
                  std::to_string(pos->second));
    }
    for (std::size_t v = 0; v < value_cols.size(); ++v) {
      data.per_column[v].push_back({*date, parse_real(cell(value_cols[v]))});
    }
    ++parsed;
  }
  if (parsed == 0) throw Error(source + ": no parseable rows");
  if (skipped > 0) {
    warn(nullptr, source + ": skipped " + std::to_string(skipped) + " row(s) with unparseable region or date");
  }

  std::vector<FeatureSeries> out;
  for (const auto& region : region_order) {
    auto& data = by_region.at(region);
    for (std::size_t v = 0; v < value_cols.size(); ++v) {
      auto& samples = data.per_column[v];
      std::sort(samples.begin(), samples.end(),
                [](const Sample& a, const Sample& b) { return a.date < b.date; });
      out.push_back({region, value_names[v], std::move(samples)});
    }
  }
  return out;
}

FeatureSeries resample_monthly(const FeatureSeries& series) {
  if (series.samples.empty()) {
    throw Error("resample_monthly: series (" + series.region + ", " + series.feature + ") is empty");
  }
  const int first = month_of(series.samples.front().date).index();
  const int last = month_of(series.samples.back().date).index();
  const auto span = static_cast<std::size_t>(last - first + 1);
  std::vector<double> sums(span, 0.0);
  std::vector<std::size_t> counts(span, 0);
  for (const auto& s : series.samples) {
    if (!s.value) continue;
    const auto slot = static_cast<std::size_t>(month_of(s.date).index() - first);
    sums[slot] += *s.value;
    ++counts[slot];
  }
  FeatureSeries out{series.region, series.feature, {}};
  out.samples.reserve(span);
  for (std::size_t i = 0; i < span; ++i) {
    const auto ym = YearMonth::from_index(first + static_cast<int>(i));
    std::optional<double> value;
    if (counts[i] > 0) value = sums[i] / static_cast<double>(counts[i]);
    out.samples.push_back({ym.first_day(), value});
  }
  return out;
}

FeatureSeries interpolate_missing(const FeatureSeries& series) {
  const std::string name = "(" + series.region + ", " + series.feature + ")";
  const auto& in = series.samples;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i].date.day != 1 || (i > 0 && month_of(in[i].date).index() != month_of(in[i - 1].date).index() + 1)) {
      throw Error("interpolate_missing: series " + name + " is not monthly-resampled");
    }
  }
  std::vector<std::size_t> known;
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (in[i].value) known.push_back(i);
  }
  if (known.size() < 2) {
    throw Error("interpolate_missing: series " + name + " has fewer than 2 non-missing samples");
  }

  FeatureSeries out = series;
  auto& s = out.samples;
  for (std::size_t i = 0; i < known.front(); ++i) s[i].value = *in[known.front()].value;
  for (std::size_t i = known.back() + 1; i < s.size(); ++i) s[i].value = *in[known.back()].value;
  for (std::size_t j = 0; j + 1 < known.size(); ++j) {
    const std::size_t a = known[j];
    const std::size_t b = known[j + 1];
    const double va = *in[a].value;
    const double vb = *in[b].value;
    for (std::size_t i = a + 1; i < b; ++i) {
      const double t = static_cast<double>(i - a) / static_cast<double>(b - a);
      s[i].value = va + (vb - va) * t;
    }
  }
  return out;
}

ObservationMatrix assemble_matrix(std::span<const FeatureSeries> features, std::span<const FeatureSeries> dengue) {
  ObservationMatrix matrix;
  for (const auto& s : features) {
    if (std::find(matrix.features.begin(), matrix.features.end(), s.feature) == matrix.features.end()) {
      matrix.features.push_back(s.feature);
    }
  }
  if (matrix.features.empty()) throw Error("assemble_matrix: no feature series");

  // region -> feature index -> series
  std::map<std::string, std::vector<const FeatureSeries*>> feature_map;
  std::map<std::string, const FeatureSeries*> dengue_map;
  for (const auto& s : features) {
    auto& slots = feature_map[s.region];
    slots.resize(matrix.features.size(), nullptr);
    const auto f = static_cast<std::size_t>(
        std::find(matrix.features.begin(), matrix.features.end(), s.feature) - matrix.features.begin());
    if (slots[f] != nullptr) {
      throw Error("assemble_matrix: duplicate series (" + s.region + ", " + s.feature + ")");
    }
    slots[f] = &s;
  }
  for (const auto& s : dengue) {
    if (!dengue_map.emplace(s.region, &s).second) {
      throw Error("assemble_matrix: more than one dengue series for region " + s.region);
    }
  }

  std::string mismatched;
  for (const auto& [region, _] : feature_map) {
    if (!dengue_map.contains(region)) mismatched += " " + region + "(no dengue)";
  }
  for (const auto& [region, _] : dengue_map) {
    if (!feature_map.contains(region)) mismatched += " " + region + "(no features)";
  }
  if (!mismatched.empty()) throw Error("assemble_matrix: region mismatch:" + mismatched);

  auto check_monthly = [](const FeatureSeries& s) {
    for (std::size_t i = 0; i < s.samples.size(); ++i) {
      const auto& sample = s.samples[i];
      if (!sample.value || sample.date.day != 1 ||
          (i > 0 && month_of(sample.date).index() != month_of(s.samples[i - 1].date).index() + 1)) {
        throw Error("assemble_matrix: series (" + s.region + ", " + s.feature +
                    ") must be monthly and gap-free (run resample_monthly + interpolate_missing)");
      }
    }
    if (s.samples.empty()) throw Error("assemble_matrix: series (" + s.region + ", " + s.feature + ") is empty");
  };

  for (const auto& [region, slots] : feature_map) {
    const FeatureSeries& dengue_series = *dengue_map.at(region);
    check_monthly(dengue_series);
    int lo = month_of(dengue_series.samples.front().date).index();
    int hi = month_of(dengue_series.samples.back().date).index();
    for (std::size_t f = 0; f < slots.size(); ++f) {
      if (slots[f] == nullptr) {
        throw Error("assemble_matrix: region " + region + " lacks feature " + matrix.features[f]);
      }
      check_monthly(*slots[f]);
      lo = std::max(lo, month_of(slots[f]->samples.front().date).index());
      hi = std::min(hi, month_of(slots[f]->samples.back().date).index());
    }
    if (lo > hi) throw Error("assemble_matrix: region " + region + " has no month covered by every series");

    auto value_at = [](const FeatureSeries& s, int month_index) {
      const int first = month_of(s.samples.front().date).index();
      return *s.samples[static_cast<std::size_t>(month_index - first)].value;
    };
    for (int m = lo; m <= hi; ++m) {
      MatrixRow row{region, YearMonth::from_index(m), {}, value_at(dengue_series, m)};
      row.features.reserve(slots.size());
      for (const auto* s : slots) row.features.push_back(value_at(*s, m));
      matrix.rows.push_back(std::move(row));
    }
  }
  return matrix;
}

ObservationMatrix normalize(ObservationMatrix matrix, Warnings* warnings) {
  if (matrix.normalized()) throw Error("normalize: matrix is already normalized");
  if (matrix.rows.empty()) throw Error("normalize: matrix has no rows");
  const std::size_t nf = matrix.features.size();
  matrix.norm_params.assign(nf, MinMax{});
  for (std::size_t f = 0; f < nf; ++f) {
    double lo = matrix.rows.front().features[f];
    double hi = lo;
    for (const auto& row : matrix.rows) {
      if (!std::isfinite(row.features[f])) {
        throw Error("normalize: non-finite value in column " + matrix.features[f]);
      }
      lo = std::min(lo, row.features[f]);
      hi = std::max(hi, row.features[f]);
    }
    matrix.norm_params[f] = {lo, hi};
    if (hi == lo) {
      warn(warnings, "normalize: column " + matrix.features[f] + " is constant; mapped to 0");
      for (auto& row : matrix.rows) row.features[f] = 0.0;
      continue;
    }
    const double range = hi - lo;
    for (auto& row : matrix.rows) {
      row.features[f] = std::clamp((row.features[f] - lo) / range, 0.0, 1.0);
    }
  }
  return matrix;
}

ObservationMatrix denormalize(ObservationMatrix matrix) {
  if (!matrix.normalized()) throw Error("denormalize: matrix carries no norm_params");
  for (auto& row : matrix.rows) {
    for (std::size_t f = 0; f < matrix.features.size(); ++f) {
      const auto& p = matrix.norm_params[f];
      row.features[f] = p.min + row.features[f] * (p.max - p.min);
    }
  }
  matrix.norm_params.clear();
  return matrix;
}

std::size_t split_stride(const SplitSpec& spec) {
  const double p = spec.train_fraction;
  if (!(p > 0.0 && p < 1.0)) throw Error("split: train_fraction must lie in (0, 1)");
  const double k = 1.0 / (1.0 - p);
  const double rounded = std::round(k);
  if (std::abs(k - rounded) > 1e-9 * rounded || rounded < 2.0) {
    std::ostringstream msg;
    msg << "split: 1/(1 - train_fraction) = " << k << " is not an integer";
    throw Error(msg.str());
  }
  const auto stride = static_cast<std::size_t>(rounded);
  if (spec.stride_offset >= stride) {
    throw Error("split: stride_offset " + std::to_string(spec.stride_offset) + " must be below the stride " +
                std::to_string(stride));
  }
  return stride;
}

SplitIndices systematic_split_indices(std::size_t n, const SplitSpec& spec) {
  const std::size_t k = split_stride(spec);
  SplitIndices out;
  for (std::size_t i = 0; i < n; ++i) {
    (i % k == spec.stride_offset ? out.test : out.train).push_back(i);
  }
  return out;
}

std::pair<ObservationMatrix, ObservationMatrix> systematic_split(const ObservationMatrix& matrix,
                                                                 const SplitSpec& spec) {
  const auto idx = systematic_split_indices(matrix.rows.size(), spec);
  std::pair<ObservationMatrix, ObservationMatrix> out;
  for (auto* part : {&out.first, &out.second}) {
    part->features = matrix.features;
    part->norm_params = matrix.norm_params;
  }
  for (auto i : idx.train) out.first.rows.push_back(matrix.rows[i]);
  for (auto i : idx.test) out.second.rows.push_back(matrix.rows[i]);
  return out;
}

std::pair<std::vector<FeatureSeries>, std::vector<FeatureSeries>> matrix_to_series(const ObservationMatrix& matrix) {
  std::pair<std::vector<FeatureSeries>, std::vector<FeatureSeries>> out;
  for (const auto& region : matrix.regions()) {
    const auto first_feature = out.first.size();
    for (const auto& f : matrix.features) out.first.push_back({region, f, {}});
    FeatureSeries dengue{region, "dengue_cases", {}};
    for (const auto& row : matrix.rows) {
      if (row.region != region) continue;
      for (std::size_t f = 0; f < matrix.features.size(); ++f) {
        out.first[first_feature + f].samples.push_back({row.month.first_day(), row.features[f]});
      }
      dengue.samples.push_back({row.month.first_day(), row.dengue});
    }
    out.second.push_back(std::move(dengue));
  }
  return out;
}

}  // namespace farm
