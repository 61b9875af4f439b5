#include "farm/metrics.hpp"

namespace farm {
namespace {

std::optional<double> ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::optional<double> f1_score(std::optional<double> sensitivity, std::optional<double> ppv) {
  if (!sensitivity || !ppv || *sensitivity + *ppv == 0.0) return std::nullopt;
  return 2.0 * (*sensitivity * *ppv) / (*sensitivity + *ppv);
}

MetricsReport metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error("metrics: confusion matrix is all zero");
  MetricsReport r;
  r.sensitivity = ratio(cm.tp, cm.tp + cm.fn);
  r.specificity = ratio(cm.tn, cm.tn + cm.fp);
  r.ppv = ratio(cm.tp, cm.tp + cm.fp);
  r.npv = ratio(cm.tn, cm.tn + cm.fn);
  r.f1 = f1_score(r.sensitivity, r.ppv);
  return r;
}

}  // namespace farm
