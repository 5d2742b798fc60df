// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/template_bank.hpp"

#include <cmath>
#include <json.hpp>

#include "acam/errors.hpp"
#include "acam/io_util.hpp"

namespace acam {

using Json = nlohmann::ordered_json;

void TemplateBank::validate() const {
  if (n_classes == 0) {
    throw ValidationError("n_classes must be >= 1");
  }
  if (!thresholds.empty() && thresholds.size() != n_features) {
    throw ValidationError("thresholds has " + std::to_string(thresholds.size()) + " entries, expected n_features " +
                          std::to_string(n_features));
  }
  std::vector<bool> owned(n_classes, false);
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const auto& tpl = templates[t];
    const std::string at = "templates[" + std::to_string(t) + "]";
    if (tpl.class_id >= n_classes) {
      throw ValidationError(at + ".class_id " + std::to_string(tpl.class_id) + " is not below n_classes");
    }
    if (tpl.lower.size() != n_features) {
      throw ValidationError(at + ".lower has length " + std::to_string(tpl.lower.size()) + ", expected " +
                            std::to_string(n_features));
    }
    if (tpl.upper.size() != n_features) {
      throw ValidationError(at + ".upper has length " + std::to_string(tpl.upper.size()) + ", expected " +
                            std::to_string(n_features));
    }
    for (std::size_t i = 0; i < n_features; ++i) {
      const std::string idx = "[" + std::to_string(i) + "]";
      if (!std::isfinite(tpl.lower[i]) || !std::isfinite(tpl.upper[i])) {
        throw ValidationError(at + ".lower" + idx + "/upper" + idx + " must be finite");
      }
      if (tpl.lower[i] > tpl.upper[i]) {
        throw ValidationError(at + ".lower" + idx + " > " + at + ".upper" + idx);
      }
      if (mode == TemplateMode::BINARY &&
          (tpl.lower[i] != tpl.upper[i] || (tpl.lower[i] != 0.0 && tpl.lower[i] != 1.0))) {
        throw ValidationError(at + ".lower" + idx + "/upper" + idx + " must be equal and in {0,1} for a binary bank");
      }
    }
    owned[tpl.class_id] = true;
  }
  for (std::uint32_t c = 0; c < n_classes; ++c) {
    if (!owned[c]) {
      throw ValidationError("templates: class " + std::to_string(c) + " owns no template");
    }
  }
}

std::vector<std::size_t> TemplateBank::templates_of(std::uint32_t class_id) const {
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < templates.size(); ++t) {
    if (templates[t].class_id == class_id) {
      out.push_back(t);
    }
  }
  return out;
}

std::string bank_to_text(const TemplateBank& bank) {
  bank.validate();
  Json doc;
  doc["schema_version"] = kBankSchemaVersion;
  doc["mode"] = to_string(bank.mode);
  doc["threshold_method"] = to_string(bank.threshold_method);
  doc["seed"] = bank.seed;
  doc["n_classes"] = bank.n_classes;
  doc["n_features"] = bank.n_features;
  if (!bank.thresholds.empty()) {
    doc["thresholds"] = bank.thresholds;
  }
  Json templates = Json::array();
  for (const auto& t : bank.templates) {
    Json entry;
    entry["class_id"] = t.class_id;
    entry["lower"] = t.lower;
    entry["upper"] = t.upper;
    entry["member_count"] = t.member_count;
    templates.push_back(std::move(entry));
  }
  doc["templates"] = std::move(templates);
  return doc.dump(2) + "\n";
}

namespace {

const Json& require(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ValidationError("missing field '" + path + key + "'");
  }
  return obj[key];
}

template <typename T>
T as_unsigned(const Json& v, const std::string& name) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ValidationError("field '" + name + "' must be a non-negative integer");
  }
  return v.get<T>();
}

std::vector<double> as_numbers(const Json& v, const std::string& name) {
  if (!v.is_array()) {
    throw ValidationError("field '" + name + "' must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) {
      throw ValidationError("field '" + name + "[" + std::to_string(i) + "]' must be a number");
    }
    out.push_back(v[i].get<double>());
  }
  return out;
}

std::string as_string(const Json& v, const std::string& name) {
  if (!v.is_string()) {
    throw ValidationError("field '" + name + "' must be a string");
  }
  return v.get<std::string>();
}

}  // namespace

TemplateBank bank_from_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("template bank is not a valid document: ") + e.what());
  }
  const auto version = as_unsigned<int>(require(doc, "schema_version", ""), "schema_version");
  if (version != kBankSchemaVersion) {
    throw ValidationError("field 'schema_version' = " + std::to_string(version) + " is not supported");
  }
  TemplateBank bank;
  bank.mode = parse_template_mode(as_string(require(doc, "mode", ""), "mode"));
  bank.threshold_method = parse_threshold_method(as_string(require(doc, "threshold_method", ""), "threshold_method"));
  bank.seed = as_unsigned<std::uint64_t>(require(doc, "seed", ""), "seed");
  bank.n_classes = as_unsigned<std::uint32_t>(require(doc, "n_classes", ""), "n_classes");
  bank.n_features = as_unsigned<std::size_t>(require(doc, "n_features", ""), "n_features");
  if (doc.contains("thresholds")) {
    bank.thresholds = as_numbers(doc["thresholds"], "thresholds");
  }
  const auto& templates = require(doc, "templates", "");
  if (!templates.is_array()) {
    throw ValidationError("field 'templates' must be an array");
  }
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const std::string at = "templates[" + std::to_string(t) + "].";
    const auto& e = templates[t];
    Template tpl;
    tpl.class_id = as_unsigned<std::uint32_t>(require(e, "class_id", at), at + "class_id");
    tpl.lower = as_numbers(require(e, "lower", at), at + "lower");
    tpl.upper = as_numbers(require(e, "upper", at), at + "upper");
    tpl.member_count = as_unsigned<std::size_t>(require(e, "member_count", at), at + "member_count");
    bank.templates.push_back(std::move(tpl));
  }
  bank.validate();
  return bank;
}

void save_template_bank(const TemplateBank& bank, const std::filesystem::path& path) {
  write_file_atomic(path, bank_to_text(bank));
}

TemplateBank load_template_bank(const std::filesystem::path& path) { return bank_from_text(read_file_text(path)); }

}  // namespace acam
