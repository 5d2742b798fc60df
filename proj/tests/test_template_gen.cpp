// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "acam/binarize.hpp"
#include "acam/errors.hpp"
#include "acam/kmeans.hpp"
#include "acam/template_gen.hpp"
#include "support.hpp"

using namespace acam;

namespace {

Matrix points_1d(std::initializer_list<double> xs) {
  Matrix m(xs.size(), 1);
  std::size_t i = 0;
  for (double x : xs) {
    m(i++, 0) = x;
  }
  return m;
}

Matrix random_points(std::mt19937_64& rng, std::size_t n, std::size_t d) {
  Matrix m(n, d);
  std::normal_distribution<double> g(0.0, 1.0);
  for (auto& v : m.values) {
    v = g(rng);
  }
  return m;
}

// Best 2-partition of a 1-D point set by brute force.
double best_two_partition_inertia(const std::vector<double>& xs) {
  double best = INFINITY;
  const std::size_t n = xs.size();
  for (std::size_t mask = 1; mask + 1 < (std::size_t{1} << n); ++mask) {
    double s[2] = {0, 0};
    double c[2] = {0, 0};
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1U;
      s[g] += xs[i];
      c[g] += 1;
    }
    double inertia = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int g = (mask >> i) & 1U;
      const double d = xs[i] - s[g] / c[g];
      inertia += d * d;
    }
    best = std::min(best, inertia);
  }
  return best;
}

}  // namespace

TEST_CASE("kmeans on two separated 1-D pairs") {
  const auto pts = points_1d({0, 0.2, 10, 10.2});
  const auto r = kmeans(pts, 2, 42);
  std::vector<double> c{r.centroids(0, 0), r.centroids(1, 0)};
  std::sort(c.begin(), c.end());
  CHECK(c[0] == doctest::Approx(0.1));
  CHECK(c[1] == doctest::Approx(10.1));
  CHECK(r.inertia == doctest::Approx(best_two_partition_inertia({0, 0.2, 10, 10.2})));
}

TEST_CASE("kmeans k=1 is the column mean") {
  std::mt19937_64 rng(1);
  const auto pts = random_points(rng, 37, 5);
  const auto r = kmeans(pts, 1, 9);
  for (std::size_t j = 0; j < 5; ++j) {
    double mean = 0;
    for (std::size_t i = 0; i < pts.rows; ++i) {
      mean += pts(i, j);
    }
    CHECK(r.centroids(0, j) == doctest::Approx(mean / 37));
  }
}

TEST_CASE("kmeans k=n gives zero inertia") {
  std::mt19937_64 rng(2);
  const auto pts = random_points(rng, 6, 3);
  const auto r = kmeans(pts, 6, 5);
  CHECK(r.inertia == doctest::Approx(0.0));
  auto sizes = r.cluster_sizes();
  CHECK(std::all_of(sizes.begin(), sizes.end(), [](std::size_t s) { return s == 1; }));
}

TEST_CASE("kmeans properties on random data") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + rng() % 60;
    const std::size_t k = 1 + rng() % std::min<std::size_t>(n, 5);
    const auto pts = random_points(rng, n, 1 + rng() % 6);
    const std::uint64_t seed = rng();
    const auto r = kmeans(pts, k, seed);
    CHECK(r.centroids.rows == k);
    for (auto a : r.assignments) {
      CHECK(a < k);
    }
    for (std::size_t i = 1; i < r.inertia_history.size(); ++i) {
      CHECK(r.inertia_history[i] <= r.inertia_history[i - 1] + 1e-9 * (1 + r.inertia_history[i - 1]));
    }
    const auto again = kmeans(pts, k, seed);
    CHECK(again.assignments == r.assignments);
    CHECK(again.centroids.values == r.centroids.values);
  }
}

TEST_CASE("kmeans with duplicate points fills every cluster") {
  Matrix pts(5, 2);
  pts(4, 0) = 1.0;
  const auto r = kmeans(pts, 3, 0);
  const auto sizes = r.cluster_sizes();
  CHECK(std::count(sizes.begin(), sizes.end(), 0U) <= 1);
  CHECK(r.inertia == doctest::Approx(0.0));
}

TEST_CASE("kmeans errors") {
  const auto pts = points_1d({1, 2});
  CHECK_THROWS_AS((void)kmeans(pts, 0, 1), ValidationError);
  CHECK_THROWS_AS((void)kmeans(pts, 3, 1), ValidationError);
}

TEST_CASE("silhouette") {
  // sklearn.metrics.silhouette_score on the same points gives 0.9899997499937521.
  CHECK(silhouette(points_1d({0, 0.1, 10, 10.1}), std::vector<std::size_t>{0, 0, 1, 1}) ==
        doctest::Approx(0.9899997499937521).epsilon(1e-12));
  CHECK(silhouette(points_1d({3, 3, 3, 3}), std::vector<std::size_t>{0, 0, 1, 1}) == 0.0);
  // singleton cluster scores 0; the pair scores 1 - 1/10 and 1 - 1/9
  CHECK(silhouette(points_1d({0, 1, 10}), std::vector<std::size_t>{0, 0, 1}) ==
        doctest::Approx((0.9 + 8.0 / 9.0) / 3.0));
  CHECK_THROWS_AS((void)silhouette(points_1d({1, 2}), std::vector<std::size_t>{0, 0}), ValidationError);
  CHECK_THROWS_AS((void)silhouette(points_1d({1, 2}), std::vector<std::size_t>{0}), ValidationError);
}

TEST_CASE("silhouette lies in [-1, 1]") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const auto pts = random_points(rng, 4 + rng() % 30, 3);
    std::vector<std::size_t> a(pts.rows);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = i % 3;
    }
    const double s = silhouette(pts, a);
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("k=1 binary templates equal the binarized class mean") {
  const auto train = synth_fixture(5, 40, 12, 0.2, 17);
  const auto th = column_thresholds(train, ThresholdMethod::MEAN);
  TemplateGenParams p;
  const auto gen = make_templates(train, p);
  REQUIRE(gen.bank.templates.size() == 5);
  CHECK(gen.bank.thresholds == th.values);
  for (std::uint32_t c = 0; c < 5; ++c) {
    std::vector<double> mean(40, 0.0);
    std::size_t n = 0;
    for (std::size_t i = 0; i < train.n_samples(); ++i) {
      if (train.labels[i] != c) {
        continue;
      }
      ++n;
      for (std::size_t j = 0; j < 40; ++j) {
        mean[j] += train.row(i)[j];
      }
    }
    const auto& t = gen.bank.templates[gen.bank.templates_of(c).at(0)];
    CHECK(t.member_count == n);
    for (std::size_t j = 0; j < 40; ++j) {
      CHECK(t.lower[j] == (mean[j] / static_cast<double>(n) > th.values[j] ? 1.0 : 0.0));
    }
  }
}

TEST_CASE("spread 0 templates equal binarized centers") {
  const auto train = synth_fixture(4, 24, 6, 0.0, 5);
  const auto gen = make_templates(train, {});
  const auto bits = binarize(train, gen.thresholds);
  for (std::size_t i = 0; i < train.n_samples(); ++i) {
    const auto& t = gen.bank.templates[gen.bank.templates_of(train.labels[i]).at(0)];
    for (std::size_t j = 0; j < 24; ++j) {
      CHECK(t.lower[j] == bits.row(i)[j]);
    }
  }
}

TEST_CASE("k=2 recovers two sub-centers") {
  const auto train = synth_fixture(3, 64, 20, 0.0, 23, 2);
  TemplateGenParams p;
  p.k = 2;
  const auto gen = make_templates(train, p);
  const auto bits = binarize(train, gen.thresholds);
  CHECK(gen.bank.templates.size() == 6);
  for (std::uint32_t c = 0; c < 3; ++c) {
    const auto ids = gen.bank.templates_of(c);
    REQUIRE(ids.size() == 2);
    // every class sample equals one of its two templates
    for (std::size_t i = 0; i < train.n_samples(); ++i) {
      if (train.labels[i] != c) {
        continue;
      }
      int hits = 0;
      for (auto id : ids) {
        const auto& lower = gen.bank.templates[id].lower;
        hits += std::equal(lower.begin(), lower.end(), bits.row(i).begin()) ? 1 : 0;
      }
      CHECK(hits == 1);
    }
  }
}

TEST_CASE("AUTO selects k by silhouette") {
  SUBCASE("bimodal classes get more than one template") {
    const auto train = synth_fixture(3, 64, 30, 0.02, 31, 2);
    TemplateGenParams p;
    p.k = std::nullopt;
    const auto gen = make_templates(train, p);
    for (const auto& s : gen.selection) {
      CHECK(s.k >= 2);
      CHECK(s.silhouette_k2 > 0.05);
    }
  }
  SUBCASE("identical samples fall back to one template") {
    const auto train = synth_fixture(3, 16, 10, 0.0, 31);
    TemplateGenParams p;
    p.k = std::nullopt;
    const auto gen = make_templates(train, p);
    for (const auto& s : gen.selection) {
      CHECK(s.k == 1);
    }
    CHECK(gen.bank.templates.size() == 3);
  }
}

TEST_CASE("WINDOW templates bracket the center") {
  const auto train = synth_fixture(3, 20, 15, 0.3, 2);
  for (auto rule : {WindowRule::STDDEV, WindowRule::MINMAX}) {
    TemplateGenParams p;
    p.mode = TemplateMode::WINDOW;
    p.window_rule = rule;
    p.k = 2;
    const auto gen = make_templates(train, p);
    gen.bank.validate();
    for (const auto& t : gen.bank.templates) {
      for (std::size_t j = 0; j < 20; ++j) {
        CHECK(t.lower[j] <= t.upper[j]);
      }
    }
  }
  SUBCASE("gamma scales the half-width") {
    TemplateGenParams p;
    p.mode = TemplateMode::WINDOW;
    const auto one = make_templates(train, p);
    p.gamma = 2.0;
    const auto two = make_templates(train, p);
    for (std::size_t t = 0; t < one.bank.templates.size(); ++t) {
      const auto& a = one.bank.templates[t];
      const auto& b = two.bank.templates[t];
      for (std::size_t j = 0; j < 20; ++j) {
        CHECK(b.upper[j] - b.lower[j] == doctest::Approx(2.0 * (a.upper[j] - a.lower[j])));
        CHECK(a.upper[j] + a.lower[j] == doctest::Approx(b.upper[j] + b.lower[j]));
      }
    }
  }
}

TEST_CASE("make_templates is deterministic across job counts") {
  const auto train = synth_fixture(4, 32, 25, 0.1, 77, 2);
  TemplateGenParams p;
  p.k = std::nullopt;
  p.jobs = 1;
  const auto a = make_templates(train, p);
  p.jobs = 4;
  const auto b = make_templates(train, p);
  CHECK(a.bank == b.bank);
}

TEST_CASE("make_templates errors") {
  auto train = synth_fixture(3, 8, 2, 0.1, 1);
  TemplateGenParams p;
  p.k = 3;
  CHECK_THROWS_AS((void)make_templates(train, p), ValidationError);
  p.k = 4;
  CHECK_THROWS_AS((void)make_templates(train, p), ValidationError);
  p.k = 1;
  p.gamma = -1;
  CHECK_THROWS_AS((void)make_templates(train, p), ValidationError);
  p.gamma = 1;
  train.n_classes = 4;  // class 3 has no samples
  CHECK_THROWS_AS((void)make_templates(train, p), ValidationError);
}

TEST_CASE("ten classes of 784 features give ten templates") {
  const auto train = synth_fixture(10, 784, 5, 0.05, 42);
  const auto gen = make_templates(train, {});
  CHECK(gen.bank.templates.size() == 10);
  CHECK(gen.bank.n_features == 784);
}
