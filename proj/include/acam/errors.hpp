// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace acam {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller-supplied values or documents violate a contract. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (open, write, rename). CLI exit code 1.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed binary payload; carries the byte offset where decoding failed.
class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  [[nodiscard]] std::uint64_t offset() const noexcept { return offset_; }

 private:
  std::uint64_t offset_;
};

/// Payload ended before the header said it would.
class LengthError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace acam
