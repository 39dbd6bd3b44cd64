#pragma once

#include <cstdint>

#include "dpmrf/graph/image.hpp"

namespace dpmrf {

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fp = 0;
  std::uint64_t fn = 0;
};

/// Pixel-wise confusion over two same-sized binary images; class 1 (pore)
/// is positive. Throws InputError on dimension mismatch.
ConfusionCounts confusion(const BinaryImage& pred, const BinaryImage& truth);

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double accuracy = 0.0;
  bool precision_defined = true;  // false when tp + fp == 0
  bool recall_defined = true;     // false when tp + fn == 0
};

Metrics compute_metrics(const ConfusionCounts& c);

/// Fraction of pixels equal to 1.
double porosity(const BinaryImage& img);

}  // namespace dpmrf
