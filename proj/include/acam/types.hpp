// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace acam {

enum class ThresholdMethod { MEAN, MEDIAN };
enum class TemplateMode { BINARY, WINDOW };
/// How WINDOW-mode bounds are derived from a cluster's members.
enum class WindowRule { STDDEV, MINMAX };
enum class MatchMethod { FEATURE_COUNT, SIMILARITY };

std::string to_string(ThresholdMethod m);
std::string to_string(TemplateMode m);
std::string to_string(WindowRule r);
std::string to_string(MatchMethod m);

// Parsers accept the lowercase CLI spellings ("mean", "binary", "stddev",
// "fc"/"sim") and throw ValidationError otherwise.
ThresholdMethod parse_threshold_method(std::string_view s);
TemplateMode parse_template_mode(std::string_view s);
WindowRule parse_window_rule(std::string_view s);
MatchMethod parse_match_method(std::string_view s);

}  // namespace acam
