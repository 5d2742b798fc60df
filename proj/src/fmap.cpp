// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#include "acam/fmap.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <set>
#include <string>

#include "acam/errors.hpp"
#include "acam/io_util.hpp"

namespace acam {

namespace {

constexpr std::uint8_t kMagic[4] = {0x46, 0x4D, 0x41, 0x50};

std::size_t packed_row_bytes(std::size_t n_features) { return (n_features + 7) / 8; }

std::size_t row_bytes(Dtype dtype, std::size_t n_features) {
  switch (dtype) {
    case Dtype::F32:
      return 4 * n_features;
    case Dtype::U8:
      return n_features;
    case Dtype::BIT:
      return packed_row_bytes(n_features);
  }
  return 0;
}

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.push_back(static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i)));
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  template <typename T>
  T get_le(const char* field) {
    need(sizeof(T), field);
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
      v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    }
    pos_ += sizeof(T);
    return static_cast<T>(v);
  }

  std::span<const std::uint8_t> take(std::size_t n, const char* field) {
    need(n, field);
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  [[nodiscard]] std::size_t pos() const { return pos_; }
  [[nodiscard]] std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n, const char* field) const {
    if (bytes_.size() - pos_ < n) {
      throw LengthError(std::string("truncated FMAP payload while reading ") + field, pos_);
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

void FeatureMapSet::validate() const {
  if (n_classes > kMaxClasses) {
    throw ValidationError("n_classes " + std::to_string(n_classes) + " exceeds the u16 label ceiling 65535");
  }
  if (data.size() != labels.size() * n_features) {
    throw ValidationError("data length " + std::to_string(data.size()) + " != n_samples * n_features");
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= n_classes) {
      throw ValidationError("labels[" + std::to_string(i) + "] = " + std::to_string(labels[i]) +
                            " is not below n_classes " + std::to_string(n_classes));
    }
  }
  if (dtype == Dtype::BIT) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data[i] != 0.0F && data[i] != 1.0F) {
        throw ValidationError("BIT data[" + std::to_string(i) + "] is not 0 or 1");
      }
    }
  } else if (dtype == Dtype::U8) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      const float v = data[i];
      if (!(v >= 0.0F && v <= 255.0F) || std::floor(v) != v) {
        throw ValidationError("U8 data[" + std::to_string(i) + "] is not an integer in [0,255]");
      }
    }
  }
}

bool bit_identical(const FeatureMapSet& a, const FeatureMapSet& b) {
  if (a.dtype != b.dtype || a.n_classes != b.n_classes || a.n_features != b.n_features || a.labels != b.labels ||
      a.data.size() != b.data.size()) {
    return false;
  }
  return a.data.empty() || std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(float)) == 0;
}

std::vector<std::uint8_t> pack_bits(std::span<const float> bits) {
  std::vector<std::uint8_t> out(packed_row_bytes(bits.size()), 0);
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] != 0.0F) {
      out[j / 8] |= static_cast<std::uint8_t>(0x80U >> (j % 8));
    }
  }
  return out;
}

std::vector<float> unpack_bits(std::span<const std::uint8_t> bytes, std::size_t n_bits) {
  if (bytes.size() < packed_row_bytes(n_bits)) {
    throw ValidationError("packed row too short for " + std::to_string(n_bits) + " bits");
  }
  std::vector<float> out(n_bits);
  for (std::size_t j = 0; j < n_bits; ++j) {
    out[j] = ((bytes[j / 8] >> (7 - j % 8)) & 1U) != 0 ? 1.0F : 0.0F;
  }
  return out;
}

std::vector<std::uint8_t> encode_fmap(const FeatureMapSet& set) {
  set.validate();
  const std::size_t n = set.n_samples();
  std::vector<std::uint8_t> out;
  out.reserve(kFmapHeaderBytes + 2 * n + n * row_bytes(set.dtype, set.n_features));
  for (auto b : kMagic) {
    out.push_back(static_cast<std::uint8_t>(b));
  }
  put_le<std::uint16_t>(out, kFmapVersion);
  out.push_back(static_cast<std::uint8_t>(set.dtype));
  out.push_back(0);
  put_le<std::uint32_t>(out, set.n_classes);
  put_le<std::uint64_t>(out, n);
  put_le<std::uint64_t>(out, set.n_features);
  for (auto label : set.labels) {
    put_le<std::uint16_t>(out, label);
  }
  for (std::size_t i = 0; i < n; ++i) {
    auto row = set.row(i);
    switch (set.dtype) {
      case Dtype::F32:
        for (float v : row) {
          put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(v));
        }
        break;
      case Dtype::U8:
        for (float v : row) {
          out.push_back(static_cast<std::uint8_t>(v));
        }
        break;
      case Dtype::BIT: {
        auto packed = pack_bits(row);
        out.insert(out.end(), packed.begin(), packed.end());
        break;
      }
    }
  }
  return out;
}

FeatureMapSet decode_fmap(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  auto magic = r.take(4, "magic");
  if (!std::equal(magic.begin(), magic.end(), std::begin(kMagic))) {
    throw FormatError("bad FMAP magic", 0);
  }
  const auto version = r.get_le<std::uint16_t>("version");
  if (version != kFmapVersion) {
    throw FormatError("unsupported FMAP version " + std::to_string(version), 4);
  }
  const auto dtype_byte = r.get_le<std::uint8_t>("dtype");
  if (dtype_byte > 2) {
    throw FormatError("unknown FMAP dtype " + std::to_string(dtype_byte), 6);
  }
  const auto reserved = r.get_le<std::uint8_t>("reserved");
  if (reserved != 0) {
    throw FormatError("reserved byte must be 0", 7);
  }
  FeatureMapSet set;
  set.dtype = static_cast<Dtype>(dtype_byte);
  set.n_classes = r.get_le<std::uint32_t>("n_classes");
  if (set.n_classes > kMaxClasses) {
    throw FormatError("n_classes exceeds 65535", 8);
  }
  const auto n_samples = r.get_le<std::uint64_t>("n_samples");
  const auto n_features = r.get_le<std::uint64_t>("n_features");
  if (n_features > (std::uint64_t{1} << 40)) {
    throw FormatError("implausible n_features " + std::to_string(n_features), 20);
  }
  set.n_features = static_cast<std::size_t>(n_features);

  // Reject impossible sizes before allocating anything.
  const std::size_t per_row = row_bytes(set.dtype, set.n_features);
  if (n_samples > r.remaining() / 2 ||
      (per_row != 0 && (n_samples * per_row) / per_row != n_samples) ||
      2 * n_samples + n_samples * per_row > r.remaining()) {
    throw LengthError("FMAP payload shorter than header declares", r.pos());
  }

  set.labels.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const std::size_t at = r.pos();
    set.labels[i] = r.get_le<std::uint16_t>("labels");
    if (set.labels[i] >= set.n_classes) {
      throw FormatError("label " + std::to_string(set.labels[i]) + " not below n_classes", at);
    }
  }
  set.data.resize(n_samples * set.n_features);
  for (std::size_t i = 0; i < n_samples; ++i) {
    auto row = set.row(i);
    switch (set.dtype) {
      case Dtype::F32:
        for (auto& v : row) {
          v = std::bit_cast<float>(r.get_le<std::uint32_t>("data"));
        }
        break;
      case Dtype::U8:
        for (auto& v : row) {
          v = static_cast<float>(r.get_le<std::uint8_t>("data"));
        }
        break;
      case Dtype::BIT: {
        auto bits = unpack_bits(r.take(per_row, "data"), set.n_features);
        std::copy(bits.begin(), bits.end(), row.begin());
        break;
      }
    }
  }
  return set;
}

void save_fmap(const FeatureMapSet& set, const std::filesystem::path& path) {
  auto bytes = encode_fmap(set);
  write_file_atomic(path, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
}

FeatureMapSet load_fmap(const std::filesystem::path& path) { return decode_fmap(read_file_bytes(path)); }

FeatureMapSet synth_fixture(std::uint32_t n_classes, std::size_t n_features, std::size_t per_class, double spread,
                            std::uint64_t seed, std::size_t centers_per_class, std::uint64_t stream) {
  if (n_classes < 1 || n_features < 1 || per_class < 1 || centers_per_class < 1) {
    throw ValidationError("synth_fixture counts must all be >= 1");
  }
  if (n_classes > kMaxClasses) {
    throw ValidationError("synth_fixture n_classes exceeds 65535");
  }
  if (!(spread >= 0.0) || !std::isfinite(spread)) {
    throw ValidationError("synth_fixture spread must be a finite non-negative number");
  }
  const std::size_t n_centers = static_cast<std::size_t>(n_classes) * centers_per_class;
  if (n_features < 63 && n_centers > (std::uint64_t{1} << n_features)) {
    throw ValidationError("too few features for " + std::to_string(n_centers) + " distinct binary centers");
  }

  std::mt19937_64 center_rng(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<std::vector<float>> centers;
  std::set<std::vector<float>> seen;
  while (centers.size() < n_centers) {
    std::vector<float> c(n_features);
    for (auto& v : c) {
      v = coin(center_rng) ? 1.0F : 0.0F;
    }
    if (seen.insert(c).second) {
      centers.push_back(std::move(c));
    }
  }

  std::mt19937_64 noise_rng(seed ^ ((stream + 1) * 0x9E3779B97F4A7C15ULL));
  std::bernoulli_distribution flip(std::min(spread, 1.0));
  std::normal_distribution<double> gauss(0.0, 1.0);

  FeatureMapSet set;
  set.dtype = Dtype::F32;
  set.n_classes = n_classes;
  set.n_features = n_features;
  set.labels.reserve(n_classes * per_class);
  set.data.reserve(n_classes * per_class * n_features);
  for (std::uint32_t c = 0; c < n_classes; ++c) {
    for (std::size_t s = 0; s < per_class; ++s) {
      const auto& center = centers[c * centers_per_class + s % centers_per_class];
      set.labels.push_back(static_cast<std::uint16_t>(c));
      for (std::size_t j = 0; j < n_features; ++j) {
        double v = center[j];
        if (spread > 0.0) {
          if (flip(noise_rng)) {
            v = 1.0 - v;
          }
          v += spread * gauss(noise_rng);
        }
        set.data.push_back(static_cast<float>(v));
      }
    }
  }
  return set;
}

}  // namespace acam
