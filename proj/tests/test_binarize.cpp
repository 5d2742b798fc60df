// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "acam/binarize.hpp"
#include "acam/errors.hpp"
#include "support.hpp"

using namespace acam;

namespace {

FeatureMapSet column(std::vector<float> values) {
  FeatureMapSet s;
  s.dtype = Dtype::F32;
  s.n_classes = 1;
  s.n_features = 1;
  s.labels.assign(values.size(), 0);
  s.data = std::move(values);
  return s;
}

}  // namespace

TEST_CASE("column thresholds") {
  CHECK(column_thresholds(column({0, 0, 1, 1}), ThresholdMethod::MEAN).values[0] == doctest::Approx(0.5));
  CHECK(column_thresholds(column({0, 0, 1, 1}), ThresholdMethod::MEDIAN).values[0] == doctest::Approx(0.5));
  CHECK(column_thresholds(column({0, 0, 1, 1, 1}), ThresholdMethod::MEAN).values[0] == doctest::Approx(0.6));
  CHECK(column_thresholds(column({0, 0, 1, 1, 1}), ThresholdMethod::MEDIAN).values[0] == 1.0);
  CHECK(column_thresholds(column({5, 1, 3}), ThresholdMethod::MEDIAN).values[0] == 3.0);
  CHECK(column_median({4, 1, 3, 2}) == 2.5);
  CHECK_THROWS_AS((void)column_thresholds(column({}), ThresholdMethod::MEAN), ValidationError);
}

TEST_CASE("binarize uses strict greater-than") {
  const auto set = column({0, 0, 1, 1, 1});
  const auto th = column_thresholds(set, ThresholdMethod::MEAN);
  const auto bits = binarize(set, th);
  CHECK(bits.dtype == Dtype::BIT);
  CHECK(bits.data == std::vector<float>{0, 0, 1, 1, 1});
  CHECK(bits.labels == set.labels);

  const auto flat = column({2.5F, 2.5F, 2.5F});
  CHECK(binarize(flat, column_thresholds(flat, ThresholdMethod::MEAN)).data == std::vector<float>{0, 0, 0});

  const std::vector<double> th_eq{0.5};
  const std::vector<float> at{0.5F};
  CHECK(binarize_row(at, th_eq)[0] == 0.0F);
}

TEST_CASE("binarize rejects width mismatch") {
  ThresholdVector th{{0.1, 0.2}, ThresholdMethod::MEAN};
  CHECK_THROWS_AS((void)binarize(column({1}), th), ValidationError);
}

TEST_CASE("zeros pull the mean below the median") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + rng() % 40;
    const std::size_t zeros = rng() % ((n - 1) / 2 + 1);  // fraction < 0.5
    const float c = 0.5F + static_cast<float>(rng() % 100);
    std::vector<float> v(n, c);
    std::fill(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(zeros), 0.0F);
    std::shuffle(v.begin(), v.end(), rng);
    const auto set = column(v);
    const double mean = column_thresholds(set, ThresholdMethod::MEAN).values[0];
    const double median = column_thresholds(set, ThresholdMethod::MEDIAN).values[0];
    CHECK(median == c);
    if (zeros > 0) {
      CHECK(mean < median);
    }
    CHECK(mean == doctest::Approx((1.0 - static_cast<double>(zeros) / n) * c));
  }
}

TEST_CASE("symmetric columns have equal mean and median") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    const double centre = static_cast<double>(rng() % 50);
    std::vector<float> v;
    for (int i = 0; i < 6; ++i) {
      const double d = static_cast<double>(rng() % 8);
      v.push_back(static_cast<float>(centre + d));
      v.push_back(static_cast<float>(centre - d));
    }
    const auto set = column(v);
    CHECK(column_thresholds(set, ThresholdMethod::MEAN).values[0] ==
          doctest::Approx(column_thresholds(set, ThresholdMethod::MEDIAN).values[0]));
  }
}

TEST_CASE("binarize output is binary and idempotent at 0.5") {
  std::mt19937_64 rng(5);
  auto set = test::random_set(rng, Dtype::U8, 3, 20, 17);
  set.dtype = Dtype::F32;
  const auto bits = binarize(set, column_thresholds(set, ThresholdMethod::MEAN));
  for (float v : bits.data) {
    CHECK((v == 0.0F || v == 1.0F));
  }
  auto as_real = bits;
  as_real.dtype = Dtype::F32;
  ThresholdVector half{std::vector<double>(17, 0.5), ThresholdMethod::MEAN};
  CHECK(binarize(as_real, half).data == bits.data);
}

TEST_CASE("affine_quantize8") {
  SUBCASE("0..255 is the identity") {
    std::vector<float> v;
    for (int i = 0; i < 256; ++i) {
      v.push_back(static_cast<float>(i));
    }
    const auto q = affine_quantize8(column(v));
    CHECK(q.scale == 1.0);
    CHECK(q.zero_point == 0);
    CHECK(q.set.dtype == Dtype::U8);
    CHECK(q.set.data == v);
  }
  SUBCASE("constant set") {
    const auto q = affine_quantize8(column({3.7F, 3.7F, 3.7F}));
    CHECK(q.scale == 1.0);
    CHECK(q.zero_point == 0);
    CHECK(std::adjacent_find(q.set.data.begin(), q.set.data.end(), std::not_equal_to<>()) == q.set.data.end());
  }
  SUBCASE("{0, 1}") {
    const auto q = affine_quantize8(column({0.0F, 1.0F}));
    CHECK(q.scale == doctest::Approx(1.0 / 255.0));
    CHECK(q.zero_point == 0);
    CHECK(q.set.data == std::vector<float>{0, 255});
  }
  SUBCASE("dequantization error within half a step") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<float> u(-3.0F, 5.0F);
    std::vector<float> v(500);
    for (auto& x : v) {
      x = u(rng);
    }
    const auto q = affine_quantize8(column(v));
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(std::abs(q.dequantize(q.set.data[i]) - v[i]) <= q.scale / 2 + 1e-6);
    }
  }
}
