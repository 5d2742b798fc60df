// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

// Per-feature thresholding and 8-bit affine quantization of feature maps.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "acam/fmap.hpp"
#include "acam/types.hpp"

namespace acam {

struct ThresholdVector {
  std::vector<double> values;
  ThresholdMethod method = ThresholdMethod::MEAN;
};

/// Arithmetic mean, or interpolated median (average of the two middle order
/// statistics for an even count), of one column of values.
double column_mean(std::span<const double> column);
double column_median(std::vector<double> column);

/// Per-column thresholds over the training split. Throws ValidationError on an
/// empty set or non-finite data.
ThresholdVector column_thresholds(const FeatureMapSet& train, ThresholdMethod method);

/// out[i][j] = 1 iff set[i][j] > thresholds[j]. Labels are preserved.
FeatureMapSet binarize(const FeatureMapSet& set, const ThresholdVector& thresholds);
/// Same rule for a single vector.
std::vector<float> binarize_row(std::span<const float> row, std::span<const double> thresholds);

struct QuantizedSet {
  FeatureMapSet set;  // dtype U8
  double scale = 1.0;
  std::int32_t zero_point = 0;

  /// scale * (q - zero_point)
  [[nodiscard]] double dequantize(float q) const { return scale * (static_cast<double>(q) - zero_point); }
};

/// q = clamp(round(v/scale) + zero_point, 0, 255), scale = (max-min)/255,
/// zero_point = round(-min/scale). A constant set yields scale 1, zero_point 0.
QuantizedSet affine_quantize8(const FeatureMapSet& set);

}  // namespace acam
