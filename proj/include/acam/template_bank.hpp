// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "acam/types.hpp"

namespace acam {

inline constexpr int kBankSchemaVersion = 1;

/// One stored row: a per-feature matching window [lower, upper].
/// Binary templates have lower == upper in {0, 1}.
struct Template {
  std::uint32_t class_id = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::size_t member_count = 0;

  friend bool operator==(const Template&, const Template&) = default;
};

struct TemplateBank {
  std::uint32_t n_classes = 0;
  std::size_t n_features = 0;
  std::vector<Template> templates;
  TemplateMode mode = TemplateMode::BINARY;
  ThresholdMethod threshold_method = ThresholdMethod::MEAN;
  std::uint64_t seed = 0;
  /// Training-split thresholds used to binarize queries for BINARY banks.
  /// Empty when the bank was built without them.
  std::vector<double> thresholds;

  /// Throws ValidationError naming the offending field.
  void validate() const;

  [[nodiscard]] std::vector<std::size_t> templates_of(std::uint32_t class_id) const;

  friend bool operator==(const TemplateBank&, const TemplateBank&) = default;
};

std::string bank_to_text(const TemplateBank& bank);
/// Parses and validates; schema problems raise ValidationError naming the field.
TemplateBank bank_from_text(const std::string& text);

void save_template_bank(const TemplateBank& bank, const std::filesystem::path& path);
TemplateBank load_template_bank(const std::filesystem::path& path);

}  // namespace acam
