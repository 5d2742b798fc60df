// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/matcher.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "acam/binarize.hpp"
#include "acam/errors.hpp"
#include "acam/parallel.hpp"

namespace acam {

namespace {

void check_width(std::span<const float> q, const Template& t) {
  if (q.size() != t.lower.size() || q.size() != t.upper.size()) {
    throw ValidationError("query width " + std::to_string(q.size()) + " != template width " +
                          std::to_string(t.lower.size()));
  }
}

ClassDecision decide(std::vector<double> per_class_best, std::vector<std::size_t> best_template) {
  ClassDecision d;
  d.predicted = static_cast<std::uint32_t>(argmax_lowest(per_class_best, &d.tie));
  d.per_class_best = std::move(per_class_best);
  d.best_template = std::move(best_template);
  return d;
}

}  // namespace

void MatchParams::validate() const {
  if (!(epsilon >= 0.0)) {
    throw ValidationError("epsilon must be >= 0");
  }
  if (!(alpha_sim >= 0.0)) {
    throw ValidationError("alpha must be >= 0");
  }
}

std::size_t score_fc(std::span<const float> q, const Template& t, double epsilon) {
  check_width(q, t);
  std::size_t count = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    count += std::abs(static_cast<double>(q[i]) - t.lower[i]) <= epsilon ? 1 : 0;
  }
  return count;
}

double score_distance(std::span<const float> q, const Template& t) {
  check_width(q, t);
  double d = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double v = q[i];
    if (v > t.upper[i]) {
      d += (v - t.upper[i]) * (v - t.upper[i]);
    } else if (v < t.lower[i]) {
      d += (t.lower[i] - v) * (t.lower[i] - v);
    }
  }
  return d;
}

double hit_ratio(std::span<const float> q, const Template& t) {
  check_width(q, t);
  if (q.empty()) {
    return 0.0;
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double v = q[i];
    hits += (t.lower[i] <= v && v <= t.upper[i]) ? 1 : 0;
  }
  return static_cast<double>(hits) / static_cast<double>(q.size());
}

double score_sim(std::span<const float> q, const Template& t, double alpha_sim) {
  return hit_ratio(q, t) / (1.0 + alpha_sim * score_distance(q, t));
}

std::size_t argmax_lowest(std::span<const double> scores, bool* tie) {
  if (scores.empty()) {
    throw ValidationError("argmax of an empty score vector");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) {
      best = i;
    }
  }
  if (tie != nullptr) {
    *tie = false;
    for (std::size_t i = best + 1; i < scores.size(); ++i) {
      if (scores[i] == scores[best]) {
        *tie = true;
        break;
      }
    }
  }
  return best;
}

ClassDecision classify(std::span<const float> q, const TemplateBank& bank, const MatchParams& params) {
  if (bank.templates.empty() || bank.n_classes == 0) {
    throw ValidationError("cannot classify against an empty template bank");
  }
  if (q.size() != bank.n_features) {
    throw ValidationError("query width " + std::to_string(q.size()) + " != bank n_features " +
                          std::to_string(bank.n_features));
  }
  std::vector<double> best(bank.n_classes, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> best_t(bank.n_classes, 0);
  for (std::size_t t = 0; t < bank.templates.size(); ++t) {
    const auto& tpl = bank.templates[t];
    const double s = params.method == MatchMethod::FEATURE_COUNT
                         ? static_cast<double>(score_fc(q, tpl, params.epsilon))
                         : score_sim(q, tpl, params.alpha_sim);
    if (s > best[tpl.class_id]) {
      best[tpl.class_id] = s;
      best_t[tpl.class_id] = t;
    }
  }
  return decide(std::move(best), std::move(best_t));
}

FeatureMapSet prepare_queries(const FeatureMapSet& set, const TemplateBank& bank) {
  if (set.n_features != bank.n_features) {
    throw ValidationError("input has " + std::to_string(set.n_features) + " features, bank expects " +
                          std::to_string(bank.n_features));
  }
  if (bank.mode != TemplateMode::BINARY || set.dtype == Dtype::BIT) {
    return set;
  }
  if (bank.thresholds.empty()) {
    throw ValidationError("binary bank carries no thresholds; supply BIT-typed queries");
  }
  return binarize(set, ThresholdVector{bank.thresholds, bank.threshold_method});
}

std::vector<ClassDecision> classify_batch(const FeatureMapSet& set, const TemplateBank& bank,
                                          const MatchParams& params) {
  params.validate();
  const FeatureMapSet queries = prepare_queries(set, bank);
  std::vector<ClassDecision> out(queries.n_samples());
  if (out.empty()) {
    return out;
  }
  const bool packed = bank.mode == TemplateMode::BINARY && queries.dtype == Dtype::BIT &&
                      params.method == MatchMethod::FEATURE_COUNT && params.epsilon < 1.0;
  if (packed) {
    const PackedBinaryBank pb(bank);
    parallel_for(out.size(), params.jobs, [&](std::size_t i) { out[i] = pb.classify(queries.row(i)); });
  } else {
    parallel_for(out.size(), params.jobs, [&](std::size_t i) { out[i] = classify(queries.row(i), bank, params); });
  }
  return out;
}

PackedBinaryBank::PackedBinaryBank(const TemplateBank& bank)
    : n_classes_(bank.n_classes), n_features_(bank.n_features), words_((bank.n_features + 63) / 64) {
  if (bank.mode != TemplateMode::BINARY) {
    throw ValidationError("PackedBinaryBank requires a binary bank");
  }
  if (bank.templates.empty()) {
    throw ValidationError("cannot classify against an empty template bank");
  }
  bits_.assign(bank.templates.size() * words_, 0);
  for (std::size_t t = 0; t < bank.templates.size(); ++t) {
    class_of_.push_back(bank.templates[t].class_id);
    for (std::size_t j = 0; j < n_features_; ++j) {
      if (bank.templates[t].lower[j] != 0.0) {
        bits_[t * words_ + j / 64] |= std::uint64_t{1} << (j % 64);
      }
    }
  }
}

std::vector<std::uint64_t> PackedBinaryBank::pack_query(std::span<const float> q) const {
  if (q.size() != n_features_) {
    throw ValidationError("query width " + std::to_string(q.size()) + " != bank n_features " +
                          std::to_string(n_features_));
  }
  std::vector<std::uint64_t> out(words_, 0);
  for (std::size_t j = 0; j < q.size(); ++j) {
    if (q[j] != 0.0F) {
      out[j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
  return out;
}

std::size_t PackedBinaryBank::feature_count(std::span<const std::uint64_t> packed_query, std::size_t t) const {
  std::size_t mismatches = 0;
  const std::uint64_t* row = bits_.data() + t * words_;
  for (std::size_t w = 0; w < words_; ++w) {
    mismatches += static_cast<std::size_t>(std::popcount(packed_query[w] ^ row[w]));
  }
  return n_features_ - mismatches;
}

ClassDecision PackedBinaryBank::classify(std::span<const float> q) const {
  const auto packed = pack_query(q);
  std::vector<double> best(n_classes_, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> best_t(n_classes_, 0);
  for (std::size_t t = 0; t < class_of_.size(); ++t) {
    const auto s = static_cast<double>(feature_count(packed, t));
    if (s > best[class_of_[t]]) {
      best[class_of_[t]] = s;
      best_t[class_of_[t]] = t;
    }
  }
  return decide(std::move(best), std::move(best_t));
}

}  // namespace acam
