#include <cmath>
#include <numbers>

#include "farm/ingest.hpp"
#include "farm/rng.hpp"

namespace farm {
namespace {

constexpr const char* kFeatureNames[] = {"rainfall", "temperature", "ndvi",   "evi",
                                         "soi",      "sst_anomaly", "typhoon", "population"};

struct FeatureShape {
  double offset;
  double scale;
  double lead_strength;  // shift applied when next month is high-incidence
};

FeatureShape shape_for(std::size_t f) {
  static constexpr FeatureShape kShapes[] = {
      {120.0, 80.0, 1.2}, {27.0, 1.5, 0.9},  {0.45, 0.12, 0.7}, {0.30, 0.10, -0.6},
      {0.0, 8.0, -0.5},   {0.0, 0.6, 0.35},  {300.0, 150.0, 0.0}, {2.0e6, 4.0e5, 0.2},
  };
  return kShapes[f % std::size(kShapes)];
}

}  // namespace

ObservationMatrix synth_generate(std::uint64_t seed, const SynthConfig& config) {
  if (config.regions == 0 || config.months == 0 || config.features == 0) {
    throw Error("synth_generate: regions, months and features must be positive");
  }
  if (!(config.outbreak_rate > 0.0 && config.outbreak_rate < 1.0)) {
    throw Error("synth_generate: outbreak_rate must lie in (0, 1)");
  }
  Rng rng(seed);
  ObservationMatrix matrix;
  for (std::size_t f = 0; f < config.features; ++f) {
    std::string name = kFeatureNames[f % std::size(kFeatureNames)];
    if (f >= std::size(kFeatureNames)) name += "_" + std::to_string(f / std::size(kFeatureNames) + 1);
    matrix.features.push_back(std::move(name));
  }

  // Two-state regime chain whose stationary high fraction equals outbreak_rate.
  constexpr double kLeaveHigh = 0.35;
  const double enter_high = std::min(1.0, config.outbreak_rate * kLeaveHigh / (1.0 - config.outbreak_rate));

  const std::size_t width = std::to_string(config.regions).size();
  for (std::size_t r = 0; r < config.regions; ++r) {
    std::string region = std::to_string(r + 1);
    region = "R" + std::string(width > region.size() ? width - region.size() : 0, '0') + region;

    std::vector<bool> high(config.months + 1);
    bool state = rng.bernoulli(config.outbreak_rate);
    for (auto&& h : high) {
      h = state;
      state = state ? !rng.bernoulli(kLeaveHigh) : rng.bernoulli(enter_high);
    }
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double region_level = rng.uniform(0.8, 1.25);

    for (std::size_t m = 0; m < config.months; ++m) {
      const auto ym = YearMonth::from_index(config.start_year * 12 + static_cast<int>(m));
      const double season = std::sin(2.0 * std::numbers::pi * static_cast<double>(ym.month) / 12.0 + phase);
      MatrixRow row{region, ym, {}, 0.0};
      for (std::size_t f = 0; f < config.features; ++f) {
        const auto shape = shape_for(f);
        const double signal = high[m + 1] ? shape.lead_strength : 0.0;
        const double z = 0.3 * season + signal + rng.normal(0.0, 0.3);
        row.features.push_back(shape.offset + shape.scale * z);
      }
      const double count = high[m] ? rng.normal(140.0 * region_level, 30.0) : rng.normal(18.0 * region_level, 7.0);
      row.dengue = std::max(0.0, std::round(count));
      matrix.rows.push_back(std::move(row));
    }
  }
  return matrix;
}

}  // namespace farm
