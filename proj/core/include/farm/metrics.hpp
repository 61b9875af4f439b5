#pragma once

#include <optional>

#include "farm/classify.hpp"

namespace farm {

/// Ratios from a confusion matrix. A metric whose denominator is zero is
/// undefined (nullopt), never silently 0.
struct MetricsReport {
  std::optional<double> sensitivity;  // tp / (tp + fn)
  std::optional<double> specificity;  // tn / (tn + fp)
  std::optional<double> ppv;          // tp / (tp + fp)
  std::optional<double> npv;          // tn / (tn + fn)
  std::optional<double> f1;           // harmonic mean of sensitivity and ppv
};

MetricsReport metrics(const ConfusionMatrix& cm);

/// 2sp / (s + p); undefined when either input is undefined or both are zero.
std::optional<double> f1_score(std::optional<double> sensitivity, std::optional<double> ppv);

}  // namespace farm
