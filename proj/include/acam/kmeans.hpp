// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace acam {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}

  [[nodiscard]] std::span<const double> row(std::size_t i) const { return {values.data() + i * cols, cols}; }
  [[nodiscard]] std::span<double> row(std::size_t i) { return {values.data() + i * cols, cols}; }
  double& operator()(std::size_t i, std::size_t j) { return values[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return values[i * cols + j]; }
};

double squared_distance(std::span<const double> a, std::span<const double> b);

struct ClusterResult {
  Matrix centroids;                    // k x n_features
  std::vector<std::size_t> assignments;  // point -> cluster
  double inertia = 0.0;
  std::size_t iterations = 0;
  /// Inertia after every assignment step, starting with the seeding.
  std::vector<double> inertia_history;

  [[nodiscard]] std::vector<std::size_t> cluster_sizes() const;
};

struct KMeansOptions {
  std::size_t max_iter = 100;
  double tol = 1e-4;
};

/// Lloyd's algorithm on squared Euclidean distance.
///
/// Seeding picks one point uniformly with a generator seeded by `seed`, then
/// repeatedly adds the point farthest from all chosen centroids (lowest index
/// on ties). Iteration stops once every centroid moves less than `tol` or after
/// `max_iter` updates. A cluster that loses all members is re-seeded at the
/// point farthest from its own centroid. Assignment ties go to the lowest
/// cluster index. Throws ValidationError when k == 0 or k > points.rows.
ClusterResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, const KMeansOptions& options = {});

/// Mean silhouette coefficient with Euclidean distance. Samples in singleton
/// clusters score 0, as do samples with a == b == 0. Requires at least two
/// non-empty clusters; throws ValidationError otherwise.
double silhouette(const Matrix& points, std::span<const std::size_t> assignments);

}  // namespace acam
