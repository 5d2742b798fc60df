// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <unistd.h>

#include <atomic>
#include <bit>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "acam/fmap.hpp"
#include "acam/template_bank.hpp"

namespace acam::test {

/// Removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("acam_edge_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline FeatureMapSet random_set(std::mt19937_64& rng, Dtype dtype, std::uint32_t n_classes, std::size_t n_samples,
                                std::size_t n_features) {
  FeatureMapSet s;
  s.dtype = dtype;
  s.n_classes = n_classes;
  s.n_features = n_features;
  std::uniform_int_distribution<std::uint32_t> label(0, n_classes - 1);
  for (std::size_t i = 0; i < n_samples; ++i) {
    s.labels.push_back(static_cast<std::uint16_t>(label(rng)));
  }
  s.data.resize(n_samples * n_features);
  for (auto& v : s.data) {
    switch (dtype) {
      case Dtype::F32: {
        // Arbitrary bit patterns minus NaNs, so equality is meaningful.
        std::uint32_t bits = 0;
        float f = 0.0F;
        do {
          bits = static_cast<std::uint32_t>(rng());
          f = std::bit_cast<float>(bits);
        } while (f != f);
        v = f;
        break;
      }
      case Dtype::U8:
        v = static_cast<float>(rng() % 256);
        break;
      case Dtype::BIT:
        v = static_cast<float>(rng() & 1U);
        break;
    }
  }
  return s;
}

/// Binary bank with one template per class, bits drawn uniformly.
inline TemplateBank random_binary_bank(std::mt19937_64& rng, std::uint32_t n_classes, std::size_t n_features) {
  TemplateBank bank;
  bank.n_classes = n_classes;
  bank.n_features = n_features;
  bank.mode = TemplateMode::BINARY;
  for (std::uint32_t c = 0; c < n_classes; ++c) {
    Template t;
    t.class_id = c;
    t.lower.resize(n_features);
    for (auto& v : t.lower) {
      v = static_cast<double>(rng() & 1U);
    }
    t.upper = t.lower;
    t.member_count = 1;
    bank.templates.push_back(std::move(t));
  }
  return bank;
}

inline std::vector<float> random_bits(std::mt19937_64& rng, std::size_t n) {
  std::vector<float> q(n);
  for (auto& v : q) {
    v = static_cast<float>(rng() & 1U);
  }
  return q;
}

}  // namespace acam::test
