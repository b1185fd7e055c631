// SPDX-FileCopyrightText: Copyright (c) 2026 The gdrae Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace gdrae {

// Shortest decimal that parses back to the same double.
std::string format_shortest(double v);
// printf-style %.{digits}g.
std::string format_significant(double v, int digits);

// Writes `content` to a sibling temporary file and renames it over `path`, so
// readers never observe a partial file. Throws std::runtime_error on failure.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

}  // namespace gdrae
