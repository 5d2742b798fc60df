// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/types.hpp"

#include "acam/errors.hpp"

namespace acam {

std::string to_string(ThresholdMethod m) { return m == ThresholdMethod::MEAN ? "mean" : "median"; }
std::string to_string(TemplateMode m) { return m == TemplateMode::BINARY ? "binary" : "window"; }
std::string to_string(WindowRule r) { return r == WindowRule::STDDEV ? "stddev" : "minmax"; }
std::string to_string(MatchMethod m) { return m == MatchMethod::FEATURE_COUNT ? "fc" : "sim"; }

ThresholdMethod parse_threshold_method(std::string_view s) {
  if (s == "mean") return ThresholdMethod::MEAN;
  if (s == "median") return ThresholdMethod::MEDIAN;
  throw ValidationError("unknown threshold method '" + std::string(s) + "' (expected mean|median)");
}

TemplateMode parse_template_mode(std::string_view s) {
  if (s == "binary") return TemplateMode::BINARY;
  if (s == "window") return TemplateMode::WINDOW;
  throw ValidationError("unknown template mode '" + std::string(s) + "' (expected binary|window)");
}

WindowRule parse_window_rule(std::string_view s) {
  if (s == "stddev") return WindowRule::STDDEV;
  if (s == "minmax") return WindowRule::MINMAX;
  throw ValidationError("unknown window rule '" + std::string(s) + "' (expected stddev|minmax)");
}

MatchMethod parse_match_method(std::string_view s) {
  if (s == "fc") return MatchMethod::FEATURE_COUNT;
  if (s == "sim") return MatchMethod::SIMILARITY;
  throw ValidationError("unknown match method '" + std::string(s) + "' (expected fc|sim)");
}

}  // namespace acam
