// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

// Compute and energy accounting for the hybrid front-end + ACAM classifier.
//
// Front-end energy is effective_macs * (e_mul + e_add + mem_accesses_per_mac *
// e_mem) in "constant units", converted with joules_per_unit (default 1e-15).
// The report states the unit basis. Back-end energy is
// n_templates * n_features * e_cell in joules.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace acam {

struct ConvLayerSpec {
  std::uint64_t h_out = 1;
  std::uint64_t w_out = 1;
  std::uint64_t k_h = 1;
  std::uint64_t k_w = 1;
  std::uint64_t c_in = 1;
  std::uint64_t c_out = 1;

  void validate() const;
};

/// h_out * w_out * k_h * k_w * c_in * c_out
std::uint64_t conv_macs(const ConvLayerSpec& layer);

/// round(total * (1 - sparsity)) - removed_ops. Throws ValidationError when
/// sparsity is outside [0, 1] or removed_ops exceeds the surviving MACs.
std::uint64_t effective_macs(std::uint64_t total, double sparsity, std::uint64_t removed_ops);

/// Target sparsity of a polynomial (cubic) pruning schedule at `step` of
/// `n_steps`: s_final + (s_initial - s_final) * (1 - step/n_steps)^3.
double polynomial_sparsity(std::uint64_t step, std::uint64_t n_steps, double s_initial = 0.50, double s_final = 0.80);

struct EnergyConstants {
  double e_mul = 0.2;
  double e_add = 0.03;
  double e_mem = 20.0;
  double mem_accesses_per_mac = 1.0;
  double joules_per_unit = 1e-15;
  std::string unit_label = "fJ";

  void validate() const;
  [[nodiscard]] double per_mac() const { return e_mul + e_add + mem_accesses_per_mac * e_mem; }
};

/// effective * per-MAC cost, in constant units.
double frontend_energy(std::uint64_t effective, const EnergyConstants& c);

/// Network description: explicit conv layers and/or a declared MAC total.
struct ArchDescriptor {
  std::string name;
  std::vector<ConvLayerSpec> layers;
  std::optional<std::uint64_t> declared_total;

  [[nodiscard]] std::uint64_t layer_macs() const;
  /// Declared total when present, otherwise the sum over layers.
  [[nodiscard]] std::uint64_t total_macs() const;
};

ArchDescriptor arch_from_text(const std::string& text);
std::string arch_to_text(const ArchDescriptor& arch);

struct EnergyInputs {
  std::uint64_t total_macs = 0;
  double sparsity = 0.0;
  std::uint64_t removed_ops = 0;
  EnergyConstants constants;
  std::uint64_t n_templates = 0;
  std::uint64_t n_features = 0;
  double e_cell = 185e-15;
  /// Dense MAC count of the reference (teacher) network; no sparsity applied.
  std::optional<std::uint64_t> reference_macs;
  /// An externally quoted reduction ratio to compare against.
  std::optional<double> stated_ratio;
};

struct CostReport {
  std::uint64_t total_macs = 0;
  std::uint64_t effective_macs = 0;
  std::uint64_t removed_ops = 0;
  double sparsity = 0.0;
  double frontend_energy_units = 0.0;
  // Joules.
  double frontend_energy = 0.0;
  double backend_energy = 0.0;
  double total_energy = 0.0;
  std::optional<double> reference_energy;
  std::optional<std::uint64_t> reference_macs;
  std::optional<double> reduction_ratio;
  std::optional<double> stated_ratio;
  std::string unit_label;
  double joules_per_unit = 0.0;
  std::vector<std::string> notes;

  friend bool operator==(const CostReport&, const CostReport&) = default;
};

/// Throws ValidationError when a reference is given but the hybrid energy is 0.
CostReport energy_report(const EnergyInputs& in);

std::string report_to_text(const CostReport& report);
CostReport report_from_text(const std::string& text);

}  // namespace acam
