// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/binarize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "acam/errors.hpp"

namespace acam {

double column_mean(std::span<const double> column) {
  if (column.empty()) {
    throw ValidationError("mean of an empty column");
  }
  double sum = 0.0;
  for (double v : column) {
    sum += v;
  }
  return sum / static_cast<double>(column.size());
}

double column_median(std::vector<double> column) {
  if (column.empty()) {
    throw ValidationError("median of an empty column");
  }
  const std::size_t n = column.size();
  const auto mid = column.begin() + static_cast<std::ptrdiff_t>(n / 2);
  std::nth_element(column.begin(), mid, column.end());
  const double upper = *mid;
  if (n % 2 == 1) {
    return upper;
  }
  const double lower = *std::max_element(column.begin(), mid);
  return 0.5 * (lower + upper);
}

ThresholdVector column_thresholds(const FeatureMapSet& train, ThresholdMethod method) {
  const std::size_t n = train.n_samples();
  if (n == 0) {
    throw ValidationError("cannot compute thresholds over an empty feature-map set");
  }
  ThresholdVector out;
  out.method = method;
  out.values.resize(train.n_features);
  std::vector<double> column(n);
  for (std::size_t j = 0; j < train.n_features; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = train.data[i * train.n_features + j];
    }
    const double t = method == ThresholdMethod::MEAN ? column_mean(column) : column_median(column);
    if (!std::isfinite(t)) {
      throw ValidationError("non-finite threshold for feature " + std::to_string(j));
    }
    out.values[j] = t;
  }
  return out;
}

std::vector<float> binarize_row(std::span<const float> row, std::span<const double> thresholds) {
  if (row.size() != thresholds.size()) {
    throw ValidationError("row width " + std::to_string(row.size()) + " != threshold count " +
                          std::to_string(thresholds.size()));
  }
  std::vector<float> out(row.size());
  for (std::size_t j = 0; j < row.size(); ++j) {
    out[j] = static_cast<double>(row[j]) > thresholds[j] ? 1.0F : 0.0F;
  }
  return out;
}

FeatureMapSet binarize(const FeatureMapSet& set, const ThresholdVector& thresholds) {
  if (set.n_features != thresholds.values.size()) {
    throw ValidationError("feature width " + std::to_string(set.n_features) + " != threshold count " +
                          std::to_string(thresholds.values.size()));
  }
  FeatureMapSet out;
  out.dtype = Dtype::BIT;
  out.n_classes = set.n_classes;
  out.n_features = set.n_features;
  out.labels = set.labels;
  out.data.resize(set.data.size());
  for (std::size_t k = 0; k < set.data.size(); ++k) {
    out.data[k] = static_cast<double>(set.data[k]) > thresholds.values[k % set.n_features] ? 1.0F : 0.0F;
  }
  return out;
}

QuantizedSet affine_quantize8(const FeatureMapSet& set) {
  QuantizedSet out;
  out.set.dtype = Dtype::U8;
  out.set.n_classes = set.n_classes;
  out.set.n_features = set.n_features;
  out.set.labels = set.labels;
  out.set.data.resize(set.data.size());
  if (set.data.empty()) {
    return out;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (float v : set.data) {
    if (!std::isfinite(v)) {
      throw ValidationError("affine_quantize8 requires finite values");
    }
    lo = std::min(lo, static_cast<double>(v));
    hi = std::max(hi, static_cast<double>(v));
  }
  if (hi > lo) {
    out.scale = (hi - lo) / 255.0;
    out.zero_point = static_cast<std::int32_t>(std::lround(-lo / out.scale));
  } else {
    out.scale = 1.0;
    out.zero_point = 0;
  }
  for (std::size_t k = 0; k < set.data.size(); ++k) {
    const double q = std::round(static_cast<double>(set.data[k]) / out.scale) + out.zero_point;
    out.set.data[k] = static_cast<float>(std::clamp(q, 0.0, 255.0));
  }
  return out;
}

}  // namespace acam
