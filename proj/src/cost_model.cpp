// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/cost_model.hpp"

#include <cmath>
#include <json.hpp>
#include <sstream>

#include "acam/errors.hpp"

namespace acam {

using Json = nlohmann::ordered_json;

void ConvLayerSpec::validate() const {
  if (h_out < 1 || w_out < 1 || k_h < 1 || k_w < 1 || c_in < 1 || c_out < 1) {
    throw ValidationError("conv layer dimensions must all be >= 1");
  }
}

std::uint64_t conv_macs(const ConvLayerSpec& layer) {
  layer.validate();
  return layer.h_out * layer.w_out * layer.k_h * layer.k_w * layer.c_in * layer.c_out;
}

std::uint64_t effective_macs(std::uint64_t total, double sparsity, std::uint64_t removed_ops) {
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) {
    throw ValidationError("sparsity must lie in [0, 1]");
  }
  const auto surviving = static_cast<std::uint64_t>(std::llround(static_cast<double>(total) * (1.0 - sparsity)));
  if (removed_ops > surviving) {
    throw ValidationError("removed ops " + std::to_string(removed_ops) + " exceed the " + std::to_string(surviving) +
                          " surviving MACs");
  }
  return surviving - removed_ops;
}

double polynomial_sparsity(std::uint64_t step, std::uint64_t n_steps, double s_initial, double s_final) {
  if (n_steps == 0) {
    throw ValidationError("pruning schedule needs n_steps >= 1");
  }
  if (step > n_steps) {
    throw ValidationError("pruning step " + std::to_string(step) + " beyond n_steps " + std::to_string(n_steps));
  }
  if (!(s_initial >= 0.0 && s_initial <= s_final && s_final < 1.0)) {
    throw ValidationError("pruning schedule requires 0 <= s_initial <= s_final < 1");
  }
  const double remaining = 1.0 - static_cast<double>(step) / static_cast<double>(n_steps);
  return s_final + (s_initial - s_final) * remaining * remaining * remaining;
}

void EnergyConstants::validate() const {
  if (!(e_mul >= 0.0 && e_add >= 0.0 && e_mem >= 0.0 && mem_accesses_per_mac >= 0.0)) {
    throw ValidationError("energy constants must be >= 0");
  }
  if (!(joules_per_unit > 0.0)) {
    throw ValidationError("joules_per_unit must be > 0");
  }
}

double frontend_energy(std::uint64_t effective, const EnergyConstants& c) {
  return static_cast<double>(effective) * c.per_mac();
}

std::uint64_t ArchDescriptor::layer_macs() const {
  std::uint64_t sum = 0;
  for (const auto& l : layers) {
    sum += conv_macs(l);
  }
  return sum;
}

std::uint64_t ArchDescriptor::total_macs() const { return declared_total ? *declared_total : layer_macs(); }

namespace {

std::uint64_t layer_field(const Json& layer, const char* key, std::size_t index) {
  const std::string name = "layers[" + std::to_string(index) + "]." + key;
  if (!layer.contains(key)) {
    throw ValidationError("missing field '" + name + "'");
  }
  const auto& v = layer[key];
  if (!v.is_number_integer() || v.get<std::int64_t>() < 1) {
    throw ValidationError("field '" + name + "' must be an integer >= 1");
  }
  return v.get<std::uint64_t>();
}

template <typename T>
std::optional<T> opt(const Json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) {
    return std::nullopt;
  }
  return doc[key].get<T>();
}

}  // namespace

ArchDescriptor arch_from_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("architecture descriptor is not a valid document: ") + e.what());
  }
  if (!doc.is_object()) {
    throw ValidationError("architecture descriptor must be an object");
  }
  ArchDescriptor arch;
  if (doc.contains("name") && doc["name"].is_string()) {
    arch.name = doc["name"].get<std::string>();
  }
  if (doc.contains("layers")) {
    if (!doc["layers"].is_array()) {
      throw ValidationError("field 'layers' must be an array");
    }
    for (std::size_t i = 0; i < doc["layers"].size(); ++i) {
      const auto& l = doc["layers"][i];
      ConvLayerSpec spec;
      spec.h_out = layer_field(l, "h_out", i);
      spec.w_out = layer_field(l, "w_out", i);
      spec.k_h = layer_field(l, "k_h", i);
      spec.k_w = layer_field(l, "k_w", i);
      spec.c_in = layer_field(l, "c_in", i);
      spec.c_out = layer_field(l, "c_out", i);
      arch.layers.push_back(spec);
    }
  }
  if (doc.contains("total_macs")) {
    const auto& v = doc["total_macs"];
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ValidationError("field 'total_macs' must be a non-negative integer");
    }
    arch.declared_total = v.get<std::uint64_t>();
  }
  if (arch.layers.empty() && !arch.declared_total) {
    throw ValidationError("architecture descriptor needs 'layers' or 'total_macs'");
  }
  return arch;
}

std::string arch_to_text(const ArchDescriptor& arch) {
  Json doc;
  doc["name"] = arch.name;
  Json layers = Json::array();
  for (const auto& l : arch.layers) {
    layers.push_back(
        {{"h_out", l.h_out}, {"w_out", l.w_out}, {"k_h", l.k_h}, {"k_w", l.k_w}, {"c_in", l.c_in}, {"c_out", l.c_out}});
  }
  doc["layers"] = std::move(layers);
  if (arch.declared_total) {
    doc["total_macs"] = *arch.declared_total;
  }
  return doc.dump(2) + "\n";
}

CostReport energy_report(const EnergyInputs& in) {
  in.constants.validate();
  if (!(in.e_cell >= 0.0)) {
    throw ValidationError("e_cell must be >= 0");
  }
  CostReport r;
  r.total_macs = in.total_macs;
  r.sparsity = in.sparsity;
  r.removed_ops = in.removed_ops;
  r.effective_macs = effective_macs(in.total_macs, in.sparsity, in.removed_ops);
  r.frontend_energy_units = frontend_energy(r.effective_macs, in.constants);
  r.frontend_energy = r.frontend_energy_units * in.constants.joules_per_unit;
  r.backend_energy = static_cast<double>(in.n_templates) * static_cast<double>(in.n_features) * in.e_cell;
  r.total_energy = r.frontend_energy + r.backend_energy;
  r.unit_label = in.constants.unit_label;
  r.joules_per_unit = in.constants.joules_per_unit;
  r.stated_ratio = in.stated_ratio;

  std::ostringstream basis;
  basis << "front-end constants (mul " << in.constants.e_mul << ", add " << in.constants.e_add << ", mem "
        << in.constants.e_mem << " x " << in.constants.mem_accesses_per_mac << " per MAC) are taken in "
        << in.constants.unit_label << " (" << in.constants.joules_per_unit << " J/unit)";
  r.notes.push_back(basis.str());

  if (in.reference_macs) {
    if (r.total_energy == 0.0) {
      throw ValidationError("hybrid energy is zero; reduction ratio undefined");
    }
    r.reference_macs = in.reference_macs;
    r.reference_energy = frontend_energy(*in.reference_macs, in.constants) * in.constants.joules_per_unit;
    r.reduction_ratio = *r.reference_energy / r.total_energy;
    if (in.stated_ratio) {
      std::ostringstream cmp;
      const double rel = (*r.reduction_ratio - *in.stated_ratio) / *in.stated_ratio;
      cmp.precision(6);
      cmp << "computed reduction ratio " << *r.reduction_ratio << " vs stated " << *in.stated_ratio << " ("
          << (rel * 100.0) << "% difference)";
      r.notes.push_back(cmp.str());
      if (std::abs(rel) > 1e-3) {
        r.notes.push_back("DISCREPANCY: stated reduction ratio does not follow from the energy arithmetic");
      }
    }
  }
  return r;
}

std::string report_to_text(const CostReport& r) {
  Json doc;
  doc["total_macs"] = r.total_macs;
  doc["effective_macs"] = r.effective_macs;
  doc["removed_ops"] = r.removed_ops;
  doc["sparsity"] = r.sparsity;
  doc["frontend_energy_units"] = r.frontend_energy_units;
  doc["unit_label"] = r.unit_label;
  doc["joules_per_unit"] = r.joules_per_unit;
  doc["frontend_energy_j"] = r.frontend_energy;
  doc["backend_energy_j"] = r.backend_energy;
  doc["total_energy_j"] = r.total_energy;
  doc["reference_macs"] = r.reference_macs ? Json(*r.reference_macs) : Json(nullptr);
  doc["reference_energy_j"] = r.reference_energy ? Json(*r.reference_energy) : Json(nullptr);
  doc["reduction_ratio"] = r.reduction_ratio ? Json(*r.reduction_ratio) : Json(nullptr);
  doc["stated_ratio"] = r.stated_ratio ? Json(*r.stated_ratio) : Json(nullptr);
  doc["notes"] = r.notes;
  return doc.dump(2) + "\n";
}

CostReport report_from_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("cost report is not a valid document: ") + e.what());
  }
  try {
    CostReport r;
    r.total_macs = doc.at("total_macs").get<std::uint64_t>();
    r.effective_macs = doc.at("effective_macs").get<std::uint64_t>();
    r.removed_ops = doc.at("removed_ops").get<std::uint64_t>();
    r.sparsity = doc.at("sparsity").get<double>();
    r.frontend_energy_units = doc.at("frontend_energy_units").get<double>();
    r.unit_label = doc.at("unit_label").get<std::string>();
    r.joules_per_unit = doc.at("joules_per_unit").get<double>();
    r.frontend_energy = doc.at("frontend_energy_j").get<double>();
    r.backend_energy = doc.at("backend_energy_j").get<double>();
    r.total_energy = doc.at("total_energy_j").get<double>();
    r.reference_macs = opt<std::uint64_t>(doc, "reference_macs");
    r.reference_energy = opt<double>(doc, "reference_energy_j");
    r.reduction_ratio = opt<double>(doc, "reduction_ratio");
    r.stated_ratio = opt<double>(doc, "stated_ratio");
    r.notes = doc.at("notes").get<std::vector<std::string>>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("cost report field error: ") + e.what());
  }
}

}  // namespace acam
