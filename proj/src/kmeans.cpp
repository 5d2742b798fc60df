// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "acam/errors.hpp"

namespace acam {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    sum += d * d;
  }
  return sum;
}

std::vector<std::size_t> ClusterResult::cluster_sizes() const {
  std::vector<std::size_t> sizes(centroids.rows, 0);
  for (auto a : assignments) {
    ++sizes[a];
  }
  return sizes;
}

namespace {

Matrix seed_centroids(const Matrix& points, std::size_t k, std::uint64_t seed) {
  Matrix c(k, points.cols);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, points.rows - 1);
  std::size_t first = pick(rng);
  std::copy_n(points.row(first).begin(), points.cols, c.row(0).begin());

  std::vector<double> nearest(points.rows);
  for (std::size_t i = 0; i < points.rows; ++i) {
    nearest[i] = squared_distance(points.row(i), c.row(0));
  }
  for (std::size_t m = 1; m < k; ++m) {
    const auto far = static_cast<std::size_t>(std::max_element(nearest.begin(), nearest.end()) - nearest.begin());
    std::copy_n(points.row(far).begin(), points.cols, c.row(m).begin());
    for (std::size_t i = 0; i < points.rows; ++i) {
      nearest[i] = std::min(nearest[i], squared_distance(points.row(i), c.row(m)));
    }
  }
  return c;
}

// Assigns every point to its nearest centroid; returns the inertia and fills
// each point's squared distance to its centroid.
double assign(const Matrix& points, const Matrix& centroids, std::vector<std::size_t>& assignments,
              std::vector<double>& dist) {
  double inertia = 0.0;
  for (std::size_t i = 0; i < points.rows; ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (std::size_t c = 0; c < centroids.rows; ++c) {
      const double d = squared_distance(points.row(i), centroids.row(c));
      if (d < best) {
        best = d;
        best_c = c;
      }
    }
    assignments[i] = best_c;
    dist[i] = best;
    inertia += best;
  }
  return inertia;
}

}  // namespace

ClusterResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
  if (k == 0) {
    throw ValidationError("kmeans requires k >= 1");
  }
  if (k > points.rows) {
    throw ValidationError("kmeans k=" + std::to_string(k) + " exceeds the number of points " +
                          std::to_string(points.rows));
  }
  ClusterResult r;
  r.centroids = seed_centroids(points, k, seed);
  r.assignments.assign(points.rows, 0);
  std::vector<double> dist(points.rows);
  r.inertia = assign(points, r.centroids, r.assignments, dist);
  r.inertia_history.push_back(r.inertia);

  Matrix next(k, points.cols);
  std::vector<std::size_t> counts(k);
  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    std::fill(next.values.begin(), next.values.end(), 0.0);
    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t i = 0; i < points.rows; ++i) {
      auto dst = next.row(r.assignments[i]);
      auto src = points.row(i);
      for (std::size_t j = 0; j < points.cols; ++j) {
        dst[j] += src[j];
      }
      ++counts[r.assignments[i]];
    }
    for (std::size_t c = 0; c < k; ++c) {
      auto dst = next.row(c);
      if (counts[c] > 0) {
        for (auto& v : dst) {
          v /= static_cast<double>(counts[c]);
        }
        continue;
      }
      const auto far = static_cast<std::size_t>(std::max_element(dist.begin(), dist.end()) - dist.begin());
      std::copy_n(points.row(far).begin(), points.cols, dst.begin());
      dist[far] = 0.0;
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      shift = std::max(shift, std::sqrt(squared_distance(next.row(c), r.centroids.row(c))));
    }
    std::swap(r.centroids, next);
    r.inertia = assign(points, r.centroids, r.assignments, dist);
    r.inertia_history.push_back(r.inertia);
    r.iterations = iter;
    if (shift < options.tol) {
      break;
    }
  }
  return r;
}

double silhouette(const Matrix& points, std::span<const std::size_t> assignments) {
  if (assignments.size() != points.rows) {
    throw ValidationError("silhouette: assignment count != number of points");
  }
  if (points.rows == 0) {
    throw ValidationError("silhouette requires at least two clusters");
  }
  const std::size_t k = *std::max_element(assignments.begin(), assignments.end()) + 1;
  std::vector<std::size_t> sizes(k, 0);
  for (auto a : assignments) {
    ++sizes[a];
  }
  const auto non_empty = std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; });
  if (non_empty < 2) {
    throw ValidationError("silhouette requires at least two non-empty clusters");
  }

  // sums(i, c): total distance from point i to the members of cluster c.
  const std::size_t n = points.rows;
  Matrix sums(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = std::sqrt(squared_distance(points.row(i), points.row(j)));
      sums(i, assignments[j]) += d;
      sums(j, assignments[i]) += d;
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t own = assignments[i];
    if (sizes[own] <= 1) {
      continue;
    }
    const double a = sums(i, own) / static_cast<double>(sizes[own] - 1);
    double b = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < k; ++c) {
      if (c != own && sizes[c] > 0) {
        b = std::min(b, sums(i, c) / static_cast<double>(sizes[c]));
      }
    }
    const double denom = std::max(a, b);
    total += denom > 0.0 ? (b - a) / denom : 0.0;
  }
  return total / static_cast<double>(n);
}

}  // namespace acam
