// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

// Feature-map datasets and the FMAP binary container.
//
// FMAP v1 layout (all integers little-endian):
//   offset  size  field
//   0       4     magic "FMAP" (0x46 0x4D 0x41 0x50)
//   4       2     version = 1
//   6       1     dtype (0 = F32 IEEE-754 LE, 1 = U8, 2 = BIT)
//   7       1     reserved = 0
//   8       4     n_classes
//   12      8     n_samples
//   20      8     n_features
//   28      2*n   labels (u16 each)
//   ...           rows: F32 -> 4 bytes/feature, U8 -> 1 byte/feature,
//                 BIT -> ceil(n_features/8) bytes, MSB-first, zero padded

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace acam {

enum class Dtype : std::uint8_t { F32 = 0, U8 = 1, BIT = 2 };

inline constexpr std::uint16_t kFmapVersion = 1;
inline constexpr std::size_t kFmapHeaderBytes = 28;
inline constexpr std::uint32_t kMaxClasses = 65535;

/// Labeled, row-major matrix of feature vectors. Values are held as float
/// regardless of dtype; U8 and BIT values are exactly representable.
struct FeatureMapSet {
  Dtype dtype = Dtype::F32;
  std::uint32_t n_classes = 0;
  std::size_t n_features = 0;
  std::vector<std::uint16_t> labels;
  std::vector<float> data;

  [[nodiscard]] std::size_t n_samples() const noexcept { return labels.size(); }

  [[nodiscard]] std::span<const float> row(std::size_t i) const {
    return {data.data() + i * n_features, n_features};
  }
  [[nodiscard]] std::span<float> row(std::size_t i) { return {data.data() + i * n_features, n_features}; }

  /// Throws ValidationError naming the first broken invariant.
  void validate() const;

  friend bool operator==(const FeatureMapSet&, const FeatureMapSet&) = default;
};

/// True when both sets hold the same header, labels and bit-identical data
/// (NaN payloads included).
bool bit_identical(const FeatureMapSet& a, const FeatureMapSet& b);

/// MSB-first packing of a 0/1 row into ceil(n/8) bytes, zero padded.
std::vector<std::uint8_t> pack_bits(std::span<const float> bits);
std::vector<float> unpack_bits(std::span<const std::uint8_t> bytes, std::size_t n_bits);

std::vector<std::uint8_t> encode_fmap(const FeatureMapSet& set);
FeatureMapSet decode_fmap(std::span<const std::uint8_t> bytes);

void save_fmap(const FeatureMapSet& set, const std::filesystem::path& path);
FeatureMapSet load_fmap(const std::filesystem::path& path);

/// Deterministic synthetic fixture. Every class gets `centers_per_class`
/// distinct random binary centers; each sample copies one center, flips each
/// bit with probability `spread` and adds N(0, spread^2) noise. Samples cycle
/// through a class's centers in order. `stream` selects an independent noise
/// stream over the same centers (0 for training data, 1 for a test split).
FeatureMapSet synth_fixture(std::uint32_t n_classes, std::size_t n_features, std::size_t per_class, double spread,
                            std::uint64_t seed, std::size_t centers_per_class = 1, std::uint64_t stream = 0);

}  // namespace acam
