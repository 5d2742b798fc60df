// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

// Behavioral model of an analogue CAM back-end.
//
// Feature values are mapped affinely onto an input voltage range. Each stored
// template is a row of cells; a cell matches when its input voltage lies in
// the cell's inclusive window [v_lo, v_hi]. A row's matchline is abstracted to
// its match count, compared against ceil(sense_theta * N) for the row-level
// match flag. The per-class best count feeds a winner-take-all argmax.
//
// Cell circuit variants (charging vs precharging designs) are not modeled
// separately: at this level both reduce to the same window test.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "acam/fmap.hpp"
#include "acam/template_bank.hpp"

namespace acam {

struct AcamConfig {
  double v_min = 0.2;
  double v_max = 0.8;
  /// Fraction of matching cells required for a row-level match.
  double sense_theta = 0.5;
  /// Standard deviation (volts) of the Gaussian shift applied to each bound.
  double sigma_window = 0.0;
  /// Half-width (volts) added around each programmed window. Binary banks need
  /// a margin for zero-width windows to tolerate perturbation.
  double window_margin = 0.15;
  /// Search energy per cell, joules.
  double e_cell = 185e-15;
  std::uint64_t seed = 42;

  void validate() const;
};

struct ValueRange {
  double lo = 0.0;
  double hi = 1.0;
};

struct VoltageWindow {
  double lo = 0.0;
  double hi = 0.0;

  friend bool operator==(const VoltageWindow&, const VoltageWindow&) = default;
};

struct VoltageRow {
  std::uint32_t class_id = 0;
  std::vector<VoltageWindow> cells;

  friend bool operator==(const VoltageRow&, const VoltageRow&) = default;
};

/// A template bank expressed as programmed cell windows.
struct VoltageBank {
  std::uint32_t n_classes = 0;
  std::size_t n_features = 0;
  std::vector<VoltageRow> rows;

  friend bool operator==(const VoltageBank&, const VoltageBank&) = default;
};

struct RowResult {
  bool match = false;
  std::size_t match_count = 0;
};

struct WtaResult {
  std::size_t index = 0;
  std::vector<std::uint8_t> one_hot;
};

struct SearchResult {
  std::vector<RowResult> rows;
  std::vector<double> class_scores;  // best row match count per class
  WtaResult winner;
};

/// Affine map of `value` in [range.lo, range.hi] onto [v_min, v_max].
/// Throws ValidationError for out-of-range values or an empty range.
double map_to_voltage(double value, const ValueRange& range, const AcamConfig& cfg);

bool cell_match(double v_in, const VoltageWindow& window);

RowResult row_evaluate(std::span<const double> v_inputs, std::span<const VoltageWindow> row, double sense_theta);

/// Lowest index wins ties. Throws ValidationError on empty input.
WtaResult wta(std::span<const double> similarities);

/// Programs each template's [lower, upper] as voltages, widened by
/// cfg.window_margin on both sides.
VoltageBank program_bank(const TemplateBank& bank, const ValueRange& range, const AcamConfig& cfg);

/// Shifts every bound by an independent N(0, sigma^2) draw and re-sorts each
/// cell so lo <= hi. sigma == 0 returns the bank unchanged.
VoltageBank perturb_windows(const VoltageBank& bank, double sigma, std::uint64_t seed);

std::vector<double> map_query(std::span<const float> q, const ValueRange& range, const AcamConfig& cfg);

SearchResult search(const VoltageBank& bank, std::span<const double> v_query, const AcamConfig& cfg);

/// n_templates * n_features * e_cell (joules when e_cell is in joules).
double backend_energy(std::size_t n_templates, std::size_t n_features, double e_cell);

/// Smallest range covering the queries and every template bound.
ValueRange value_range_for(const FeatureMapSet& queries, const TemplateBank& bank);

struct RobustnessPoint {
  double sigma = 0.0;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double min_accuracy = 0.0;
  double max_accuracy = 0.0;
  std::size_t seeds = 0;
};

/// Monte-Carlo accuracy of the ACAM path under window perturbation. For every
/// sigma, runs `n_seeds` perturbations with seeds derived from cfg.seed.
/// Queries are prepared exactly as the matcher prepares them.
std::vector<RobustnessPoint> robustness_sweep(const TemplateBank& bank, const FeatureMapSet& test,
                                              const AcamConfig& cfg, std::span<const double> sigmas,
                                              std::size_t n_seeds, unsigned jobs = 0);

/// ACAM-path decisions (winner indices) for every row of `queries`.
std::vector<std::uint32_t> acam_classify_batch(const VoltageBank& vbank, const FeatureMapSet& queries,
                                               const ValueRange& range, const AcamConfig& cfg, unsigned jobs = 0);

}  // namespace acam
