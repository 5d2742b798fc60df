// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "acam/fmap.hpp"
#include "acam/matcher.hpp"
#include "acam/template_gen.hpp"

namespace acam {

/// Rows are true classes, columns predicted classes.
struct ConfusionMatrix {
  std::uint32_t n_classes = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t n = 0;

  explicit ConfusionMatrix(std::uint32_t classes = 0) : n_classes(classes), counts(std::size_t{classes} * classes, 0) {}

  [[nodiscard]] std::uint64_t at(std::uint32_t truth, std::uint32_t pred) const {
    return counts[std::size_t{truth} * n_classes + pred];
  }
  [[nodiscard]] std::uint64_t trace() const;

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion(std::span<const ClassDecision> decisions, std::span<const std::uint16_t> labels,
                          std::uint32_t n_classes);
ConfusionMatrix confusion(std::span<const std::uint32_t> predicted, std::span<const std::uint16_t> labels,
                          std::uint32_t n_classes);

/// Macro-averaged over classes. A never-predicted class has precision 0; a
/// class without true samples has recall 0; F1 is 0 when precision + recall is 0.
struct Metrics {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;
  std::vector<double> precision;
  std::vector<double> recall;
  std::vector<double> f1;
  /// Recall of each class, i.e. the fraction of its samples classified correctly.
  std::vector<double> per_class_accuracy;
};

/// Throws ValidationError on an empty matrix.
Metrics metrics(const ConfusionMatrix& cm);

std::string confusion_to_csv(const ConfusionMatrix& cm);

struct MethodResult {
  MatchMethod method = MatchMethod::FEATURE_COUNT;
  ConfusionMatrix confusion;
  Metrics metrics;
  std::size_t ties = 0;
};

struct EvalReport {
  TemplateGenParams gen;
  MatchParams match;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  std::size_t n_templates = 0;
  std::vector<ClassSelection> selection;
  std::vector<MethodResult> results;
};

/// Thresholds -> templates -> classification -> metrics, once per method.
EvalReport run_eval(const FeatureMapSet& train, const FeatureMapSet& test, const TemplateGenParams& gen,
                    const MatchParams& match, std::span<const MatchMethod> methods);
EvalReport run_eval(const std::filesystem::path& train, const std::filesystem::path& test,
                    const TemplateGenParams& gen, const MatchParams& match, std::span<const MatchMethod> methods);

std::string eval_report_to_text(const EvalReport& report);

struct SweepRow {
  std::size_t k = 1;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::size_t n_templates = 0;
};

/// One evaluation per k (sorted ascending, duplicates removed) with thresholds
/// computed once from `train` and template seed gen.seed xor k.
std::vector<SweepRow> sweep_templates(const FeatureMapSet& train, const FeatureMapSet& test,
                                      std::span<const std::size_t> ks, const TemplateGenParams& gen,
                                      const MatchParams& match);

/// Reference CIFAR-10 multi-template accuracies (percent). Documentation only.
struct ReferenceSweepPoint {
  std::size_t k;
  double accuracy_percent;
};
inline constexpr ReferenceSweepPoint kReferenceTemplateSweep[] = {{1, 70.91}, {2, 71.64}, {3, 71.60}};

}  // namespace acam
