// SPDX-FileCopyrightText: © 2026 acam-edge contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace acam {

/// Writes `bytes` to a sibling temp file and renames it over `path`, so a
/// failed write never leaves a partial destination behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

/// Reads the whole file. Throws IoError when it cannot be opened or read.
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);

}  // namespace acam
