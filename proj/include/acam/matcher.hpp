// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

// Template matching rules and the argmax class decision.
//
//   feature count:  S_fc(q,t)  = #{ i : |q_i - t.lower_i| <= epsilon }
//   distance:       D(q,t)     = sum of squared excursions of q outside [lower, upper]
//   hit ratio:      H(q,t)     = #{ i : lower_i <= q_i <= upper_i } / N
//   similarity:     S_sim(q,t) = H / (1 + alpha * D)
//
// A class scores the best of its templates; the predicted class is the argmax
// over classes with ties resolved to the lowest class index.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "acam/fmap.hpp"
#include "acam/template_bank.hpp"
#include "acam/types.hpp"

namespace acam {

struct MatchParams {
  MatchMethod method = MatchMethod::FEATURE_COUNT;
  double epsilon = 0.0;
  double alpha_sim = 1.0;
  unsigned jobs = 0;

  void validate() const;
};

struct ClassDecision {
  std::uint32_t predicted = 0;
  std::vector<double> per_class_best;
  std::vector<std::size_t> best_template;  // bank index of each class's best template
  bool tie = false;
};

std::size_t score_fc(std::span<const float> q, const Template& t, double epsilon);
double score_distance(std::span<const float> q, const Template& t);
double hit_ratio(std::span<const float> q, const Template& t);
double score_sim(std::span<const float> q, const Template& t, double alpha_sim);

/// Argmax with lowest-index tie-break. Throws ValidationError on empty input.
std::size_t argmax_lowest(std::span<const double> scores, bool* tie = nullptr);

ClassDecision classify(std::span<const float> q, const TemplateBank& bank, const MatchParams& params);

/// Classifies every row. BINARY banks binarize non-BIT queries with the bank's
/// stored thresholds first (ValidationError when the bank has none). Order is
/// preserved and the result does not depend on params.jobs.
std::vector<ClassDecision> classify_batch(const FeatureMapSet& set, const TemplateBank& bank,
                                          const MatchParams& params);

/// Returns `set` as the bank expects to see it: BIT data for BINARY banks
/// (binarized with bank.thresholds when needed), unchanged otherwise.
FeatureMapSet prepare_queries(const FeatureMapSet& set, const TemplateBank& bank);

/// Binary bank packed into 64-bit words so the exact-match feature count is
/// N - popcount(q xor t).
class PackedBinaryBank {
 public:
  explicit PackedBinaryBank(const TemplateBank& bank);

  [[nodiscard]] std::vector<std::uint64_t> pack_query(std::span<const float> q) const;
  [[nodiscard]] std::size_t feature_count(std::span<const std::uint64_t> packed_query, std::size_t t) const;
  [[nodiscard]] ClassDecision classify(std::span<const float> q) const;

  [[nodiscard]] std::size_t words_per_row() const { return words_; }

 private:
  std::uint32_t n_classes_;
  std::size_t n_features_;
  std::size_t words_;
  std::vector<std::uint32_t> class_of_;
  std::vector<std::uint64_t> bits_;
};

}  // namespace acam
