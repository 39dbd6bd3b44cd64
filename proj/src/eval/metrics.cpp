#include "dpmrf/eval/metrics.hpp"

#include "dpmrf/error.hpp"
#include "dpmrf/simd/kernels.hpp"

namespace dpmrf {

ConfusionCounts confusion(const BinaryImage& pred, const BinaryImage& truth) {
  if (pred.width != truth.width || pred.height != truth.height)
    throw InputError("confusion: image dimensions differ");
  std::uint64_t counts[4];
  simd::confusion_u8(pred.pixels.data(), truth.pixels.data(), pred.size(), counts);
  return {counts[0], counts[1], counts[2], counts[3]};
}

Metrics compute_metrics(const ConfusionCounts& c) {
  Metrics m;
  const double tp = static_cast<double>(c.tp);
  const double tn = static_cast<double>(c.tn);
  const double fp = static_cast<double>(c.fp);
  const double fn = static_cast<double>(c.fn);
  if (c.tp + c.fp == 0) {
    m.precision_defined = false;
  } else {
    m.precision = tp / (tp + fp);
  }
  if (c.tp + c.fn == 0) {
    m.recall_defined = false;
  } else {
    m.recall = tp / (tp + fn);
  }
  const double total = tp + tn + fp + fn;
  m.accuracy = total == 0.0 ? 0.0 : (tp + tn) / total;
  return m;
}

double porosity(const BinaryImage& img) {
  if (img.pixels.empty()) return 0.0;
  std::uint64_t pore = 0;
  for (std::uint8_t p : img.pixels) pore += p;
  return static_cast<double>(pore) / static_cast<double>(img.pixels.size());
}

}  // namespace dpmrf
