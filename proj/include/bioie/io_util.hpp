// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 bioie contributors

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace bioie {

/// Write `content` to a sibling temp file and rename it over `path`, so a
/// failed write never leaves a truncated target behind. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

/// Whole-file read. Throws IoError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Non-empty lines of a text file (trailing '\r' stripped).
std::vector<std::string> read_lines(const std::filesystem::path& path);

/// Append one line (a '\n' is added) and flush. Throws IoError.
void append_line(const std::filesystem::path& path, std::string_view line);

/// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace bioie
