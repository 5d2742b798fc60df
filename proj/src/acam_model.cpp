// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/acam_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "acam/errors.hpp"
#include "acam/matcher.hpp"
#include "acam/parallel.hpp"

namespace acam {

void AcamConfig::validate() const {
  if (!(v_min < v_max)) {
    throw ValidationError("ACAM config requires v_min < v_max");
  }
  if (!(sense_theta >= 0.0 && sense_theta <= 1.0)) {
    throw ValidationError("ACAM sense_theta must lie in [0, 1]");
  }
  if (!(sigma_window >= 0.0)) {
    throw ValidationError("ACAM sigma_window must be >= 0");
  }
  if (!(window_margin >= 0.0)) {
    throw ValidationError("ACAM window_margin must be >= 0");
  }
  if (!(e_cell > 0.0)) {
    throw ValidationError("ACAM e_cell must be > 0");
  }
}

double map_to_voltage(double value, const ValueRange& range, const AcamConfig& cfg) {
  if (!(range.lo < range.hi)) {
    throw ValidationError("value range must satisfy lo < hi");
  }
  if (!(value >= range.lo && value <= range.hi)) {
    throw ValidationError("value " + std::to_string(value) + " outside declared range [" + std::to_string(range.lo) +
                          ", " + std::to_string(range.hi) + "]");
  }
  return cfg.v_min + (value - range.lo) / (range.hi - range.lo) * (cfg.v_max - cfg.v_min);
}

bool cell_match(double v_in, const VoltageWindow& window) { return window.lo <= v_in && v_in <= window.hi; }

RowResult row_evaluate(std::span<const double> v_inputs, std::span<const VoltageWindow> row, double sense_theta) {
  if (v_inputs.size() != row.size()) {
    throw ValidationError("input width " + std::to_string(v_inputs.size()) + " != row width " +
                          std::to_string(row.size()));
  }
  RowResult r;
  for (std::size_t i = 0; i < row.size(); ++i) {
    r.match_count += cell_match(v_inputs[i], row[i]) ? 1 : 0;
  }
  const auto needed = static_cast<std::size_t>(std::ceil(sense_theta * static_cast<double>(row.size())));
  r.match = r.match_count >= needed;
  return r;
}

WtaResult wta(std::span<const double> similarities) {
  WtaResult w;
  w.index = argmax_lowest(similarities);
  w.one_hot.assign(similarities.size(), 0);
  w.one_hot[w.index] = 1;
  return w;
}

VoltageBank program_bank(const TemplateBank& bank, const ValueRange& range, const AcamConfig& cfg) {
  cfg.validate();
  VoltageBank vb;
  vb.n_classes = bank.n_classes;
  vb.n_features = bank.n_features;
  vb.rows.reserve(bank.templates.size());
  for (const auto& t : bank.templates) {
    VoltageRow row;
    row.class_id = t.class_id;
    row.cells.resize(t.lower.size());
    for (std::size_t i = 0; i < t.lower.size(); ++i) {
      row.cells[i].lo = map_to_voltage(t.lower[i], range, cfg) - cfg.window_margin;
      row.cells[i].hi = map_to_voltage(t.upper[i], range, cfg) + cfg.window_margin;
    }
    vb.rows.push_back(std::move(row));
  }
  return vb;
}

VoltageBank perturb_windows(const VoltageBank& bank, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0)) {
    throw ValidationError("sigma must be >= 0");
  }
  if (sigma == 0.0) {
    return bank;
  }
  VoltageBank out = bank;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  for (auto& row : out.rows) {
    for (auto& cell : row.cells) {
      const double lo = cell.lo + sigma * z(rng);
      const double hi = cell.hi + sigma * z(rng);
      cell.lo = std::min(lo, hi);
      cell.hi = std::max(lo, hi);
    }
  }
  return out;
}

std::vector<double> map_query(std::span<const float> q, const ValueRange& range, const AcamConfig& cfg) {
  std::vector<double> v(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    v[i] = map_to_voltage(q[i], range, cfg);
  }
  return v;
}

SearchResult search(const VoltageBank& bank, std::span<const double> v_query, const AcamConfig& cfg) {
  if (bank.rows.empty() || bank.n_classes == 0) {
    throw ValidationError("cannot search an empty ACAM bank");
  }
  SearchResult r;
  r.rows.reserve(bank.rows.size());
  r.class_scores.assign(bank.n_classes, -1.0);
  for (const auto& row : bank.rows) {
    r.rows.push_back(row_evaluate(v_query, row.cells, cfg.sense_theta));
    r.class_scores[row.class_id] =
        std::max(r.class_scores[row.class_id], static_cast<double>(r.rows.back().match_count));
  }
  r.winner = wta(r.class_scores);
  return r;
}

double backend_energy(std::size_t n_templates, std::size_t n_features, double e_cell) {
  return static_cast<double>(n_templates) * static_cast<double>(n_features) * e_cell;
}

ValueRange value_range_for(const FeatureMapSet& queries, const TemplateBank& bank) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (float v : queries.data) {
    lo = std::min(lo, static_cast<double>(v));
    hi = std::max(hi, static_cast<double>(v));
  }
  for (const auto& t : bank.templates) {
    for (double v : t.lower) {
      lo = std::min(lo, v);
    }
    for (double v : t.upper) {
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    throw ValidationError("cannot derive a finite value range");
  }
  if (lo == hi) {
    hi = lo + 1.0;
  }
  return {lo, hi};
}

std::vector<std::uint32_t> acam_classify_batch(const VoltageBank& vbank, const FeatureMapSet& queries,
                                               const ValueRange& range, const AcamConfig& cfg, unsigned jobs) {
  if (queries.n_features != vbank.n_features) {
    throw ValidationError("query width does not match ACAM bank width");
  }
  std::vector<std::uint32_t> out(queries.n_samples());
  parallel_for(out.size(), jobs, [&](std::size_t i) {
    const auto v = map_query(queries.row(i), range, cfg);
    out[i] = static_cast<std::uint32_t>(search(vbank, v, cfg).winner.index);
  });
  return out;
}

std::vector<RobustnessPoint> robustness_sweep(const TemplateBank& bank, const FeatureMapSet& test,
                                              const AcamConfig& cfg, std::span<const double> sigmas,
                                              std::size_t n_seeds, unsigned jobs) {
  cfg.validate();
  if (n_seeds == 0) {
    throw ValidationError("robustness sweep needs at least one seed");
  }
  if (test.n_samples() == 0) {
    throw ValidationError("robustness sweep needs at least one test sample");
  }
  const FeatureMapSet queries = prepare_queries(test, bank);
  const ValueRange range = value_range_for(queries, bank);
  const VoltageBank programmed = program_bank(bank, range, cfg);

  // Pre-map queries once; each (sigma, seed) run only re-perturbs the bank.
  std::vector<std::vector<double>> vq(queries.n_samples());
  for (std::size_t i = 0; i < vq.size(); ++i) {
    vq[i] = map_query(queries.row(i), range, cfg);
  }

  std::vector<double> acc(sigmas.size() * n_seeds);
  parallel_for(acc.size(), jobs, [&](std::size_t run) {
    const double sigma = sigmas[run / n_seeds];
    const std::uint64_t seed = cfg.seed ^ ((run % n_seeds + 1) * 0x9E3779B97F4A7C15ULL);
    const VoltageBank perturbed = perturb_windows(programmed, sigma, seed);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < vq.size(); ++i) {
      correct += search(perturbed, vq[i], cfg).winner.index == queries.labels[i] ? 1 : 0;
    }
    acc[run] = static_cast<double>(correct) / static_cast<double>(vq.size());
  });

  std::vector<RobustnessPoint> out;
  for (std::size_t s = 0; s < sigmas.size(); ++s) {
    RobustnessPoint p;
    p.sigma = sigmas[s];
    p.seeds = n_seeds;
    p.min_accuracy = std::numeric_limits<double>::infinity();
    p.max_accuracy = -p.min_accuracy;
    double sum = 0.0;
    for (std::size_t k = 0; k < n_seeds; ++k) {
      const double a = acc[s * n_seeds + k];
      sum += a;
      p.min_accuracy = std::min(p.min_accuracy, a);
      p.max_accuracy = std::max(p.max_accuracy, a);
    }
    p.mean_accuracy = sum / static_cast<double>(n_seeds);
    double var = 0.0;
    for (std::size_t k = 0; k < n_seeds; ++k) {
      const double d = acc[s * n_seeds + k] - p.mean_accuracy;
      var += d * d;
    }
    p.std_accuracy = std::sqrt(var / static_cast<double>(n_seeds));
    out.push_back(p);
  }
  return out;
}

}  // namespace acam
