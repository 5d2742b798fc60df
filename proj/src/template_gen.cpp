// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/template_gen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "acam/errors.hpp"
#include "acam/parallel.hpp"

namespace acam {

Matrix class_points(const FeatureMapSet& train, std::uint32_t class_id) {
  std::size_t count = 0;
  for (auto label : train.labels) {
    count += label == class_id ? 1 : 0;
  }
  Matrix m(count, train.n_features);
  std::size_t r = 0;
  for (std::size_t i = 0; i < train.n_samples(); ++i) {
    if (train.labels[i] != class_id) {
      continue;
    }
    auto src = train.row(i);
    std::copy(src.begin(), src.end(), m.row(r++).begin());
  }
  return m;
}

namespace {

constexpr double kNotEvaluated = std::numeric_limits<double>::quiet_NaN();

double sampled_silhouette(const Matrix& points, const ClusterResult& clusters, std::size_t cap, std::uint64_t seed) {
  try {
    if (points.rows <= cap) {
      return silhouette(points, clusters.assignments);
    }
    std::vector<std::size_t> idx(points.rows);
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    Matrix sub(cap, points.cols);
    std::vector<std::size_t> sub_assign(cap);
    for (std::size_t r = 0; r < cap; ++r) {
      std::copy_n(points.row(idx[r]).begin(), points.cols, sub.row(r).begin());
      sub_assign[r] = clusters.assignments[idx[r]];
    }
    return silhouette(sub, sub_assign);
  } catch (const ValidationError&) {
    // Fewer than two non-empty clusters: not a usable split.
    return -std::numeric_limits<double>::infinity();
  }
}

std::vector<Template> templates_from_clusters(const Matrix& points, const ClusterResult& clusters,
                                              std::uint32_t class_id, const TemplateGenParams& params,
                                              const ThresholdVector& thresholds) {
  const std::size_t n_features = points.cols;
  std::vector<Template> out;
  for (std::size_t c = 0; c < clusters.centroids.rows; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < points.rows; ++i) {
      if (clusters.assignments[i] == c) {
        members.push_back(i);
      }
    }
    if (members.empty()) {
      continue;
    }
    // Template center is the mean of the cluster's final members.
    std::vector<double> center(n_features, 0.0);
    for (auto i : members) {
      auto row = points.row(i);
      for (std::size_t j = 0; j < n_features; ++j) {
        center[j] += row[j];
      }
    }
    for (auto& v : center) {
      v /= static_cast<double>(members.size());
    }

    Template tpl;
    tpl.class_id = class_id;
    tpl.member_count = members.size();
    tpl.lower.resize(n_features);
    tpl.upper.resize(n_features);
    if (params.mode == TemplateMode::BINARY) {
      for (std::size_t j = 0; j < n_features; ++j) {
        const double bit = center[j] > thresholds.values[j] ? 1.0 : 0.0;
        tpl.lower[j] = bit;
        tpl.upper[j] = bit;
      }
    } else if (params.window_rule == WindowRule::STDDEV) {
      for (std::size_t j = 0; j < n_features; ++j) {
        double var = 0.0;
        for (auto i : members) {
          const double d = points(i, j) - center[j];
          var += d * d;
        }
        const double half = params.gamma * std::sqrt(var / static_cast<double>(members.size()));
        tpl.lower[j] = center[j] - half;
        tpl.upper[j] = center[j] + half;
      }
    } else {
      for (std::size_t j = 0; j < n_features; ++j) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (auto i : members) {
          lo = std::min(lo, points(i, j));
          hi = std::max(hi, points(i, j));
        }
        tpl.lower[j] = lo;
        tpl.upper[j] = hi;
      }
    }
    out.push_back(std::move(tpl));
  }
  return out;
}

}  // namespace

TemplateGenResult make_templates(const FeatureMapSet& train, const TemplateGenParams& params) {
  return make_templates(train, params, column_thresholds(train, params.threshold_method));
}

TemplateGenResult make_templates(const FeatureMapSet& train, const TemplateGenParams& params,
                                 const ThresholdVector& thresholds) {
  if (train.n_classes == 0) {
    throw ValidationError("training set declares zero classes");
  }
  if (thresholds.values.size() != train.n_features) {
    throw ValidationError("threshold count does not match n_features");
  }
  if (params.k && (*params.k < 1 || *params.k > 3)) {
    throw ValidationError("k must be 1, 2, 3 or auto");
  }
  if (!(params.gamma >= 0.0) || !std::isfinite(params.gamma)) {
    throw ValidationError("gamma must be a finite non-negative number");
  }

  const std::uint32_t n_classes = train.n_classes;
  std::vector<std::vector<Template>> per_class(n_classes);
  std::vector<ClassSelection> selection(n_classes);

  parallel_for(n_classes, params.jobs, [&](std::size_t c) {
    const auto class_id = static_cast<std::uint32_t>(c);
    const Matrix points = class_points(train, class_id);
    if (points.rows == 0) {
      throw ValidationError("class " + std::to_string(c) + " has no training samples");
    }
    const std::uint64_t class_seed = params.seed ^ class_id;
    ClassSelection& sel = selection[c];
    sel.silhouette_k2 = kNotEvaluated;
    sel.silhouette_k3 = kNotEvaluated;

    ClusterResult chosen;
    if (params.k) {
      if (*params.k > points.rows) {
        throw ValidationError("k=" + std::to_string(*params.k) + " exceeds the " + std::to_string(points.rows) +
                              " samples of class " + std::to_string(c));
      }
      sel.k = *params.k;
      chosen = kmeans(points, sel.k, class_seed, params.kmeans);
    } else {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t k : {2U, 3U}) {
        if (k > points.rows) {
          continue;
        }
        auto clusters = kmeans(points, k, class_seed, params.kmeans);
        const double s = sampled_silhouette(points, clusters, params.silhouette_sample_cap, class_seed);
        (k == 2 ? sel.silhouette_k2 : sel.silhouette_k3) = s;
        if (s > best) {
          best = s;
          sel.k = k;
          chosen = std::move(clusters);
        }
      }
      if (!(best >= params.auto_min_silhouette)) {
        sel.k = 1;
        chosen = kmeans(points, 1, class_seed, params.kmeans);
      }
    }
    per_class[c] = templates_from_clusters(points, chosen, class_id, params, thresholds);
  });

  TemplateGenResult result;
  result.thresholds = thresholds;
  result.selection = std::move(selection);
  auto& bank = result.bank;
  bank.n_classes = n_classes;
  bank.n_features = train.n_features;
  bank.mode = params.mode;
  bank.threshold_method = thresholds.method;
  bank.seed = params.seed;
  if (params.mode == TemplateMode::BINARY) {
    bank.thresholds = thresholds.values;
  }
  for (auto& templates : per_class) {
    for (auto& t : templates) {
      bank.templates.push_back(std::move(t));
    }
  }
  bank.validate();
  return result;
}

}  // namespace acam
