// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

// Template generation: per-class k-means in continuous feature space, then
// either binarized centroids (BINARY) or per-feature windows (WINDOW).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "acam/binarize.hpp"
#include "acam/fmap.hpp"
#include "acam/kmeans.hpp"
#include "acam/template_bank.hpp"
#include "acam/types.hpp"

namespace acam {

struct TemplateGenParams {
  /// Templates per class; std::nullopt selects k automatically from {2, 3}
  /// by silhouette, falling back to 1.
  std::optional<std::size_t> k = 1;
  TemplateMode mode = TemplateMode::BINARY;
  ThresholdMethod threshold_method = ThresholdMethod::MEAN;
  WindowRule window_rule = WindowRule::STDDEV;
  /// Window half-width in cluster standard deviations (STDDEV rule).
  double gamma = 1.0;
  std::uint64_t seed = 42;
  KMeansOptions kmeans;
  /// AUTO keeps k = 1 unless the best silhouette reaches this value.
  double auto_min_silhouette = 0.05;
  /// Silhouette runs on at most this many members of a class (seeded sample).
  std::size_t silhouette_sample_cap = 1000;
  unsigned jobs = 0;
};

/// What AUTO selection saw for one class. Silhouettes are NaN when not
/// evaluated (fixed k, or too few members).
struct ClassSelection {
  std::size_t k = 1;
  double silhouette_k2 = 0.0;
  double silhouette_k3 = 0.0;
};

struct TemplateGenResult {
  TemplateBank bank;
  ThresholdVector thresholds;
  std::vector<ClassSelection> selection;
};

/// Builds a bank using thresholds computed from `train` itself.
TemplateGenResult make_templates(const FeatureMapSet& train, const TemplateGenParams& params);

/// Builds a bank against caller-supplied thresholds (shared across a sweep).
TemplateGenResult make_templates(const FeatureMapSet& train, const TemplateGenParams& params,
                                 const ThresholdVector& thresholds);

/// Rows of `train` whose label equals `class_id`, as a double matrix.
Matrix class_points(const FeatureMapSet& train, std::uint32_t class_id);

}  // namespace acam
