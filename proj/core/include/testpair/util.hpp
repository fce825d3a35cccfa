// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace testpair {

// Decodes a raw byte buffer as UTF-8. Invalid sequences (truncated,
// overlong, surrogate range, out of range) are replaced byte-by-byte with
// U+FFFD so the result is always valid UTF-8.
std::string utf8_decode_lossy(std::string_view bytes);

// Number of code points in a valid UTF-8 string (counts non-continuation
// bytes). Only meaningful on already-valid UTF-8.
std::size_t utf8_count_codepoints(std::string_view text);

// Splits on '\n'. A trailing newline does not produce an extra empty line;
// empty input has zero lines. The '\n' itself is not part of any line.
std::vector<std::string_view> split_lines(std::string_view text);

std::string ascii_lower(std::string_view s);
bool iequals_ascii(std::string_view a, std::string_view b);
bool icontains_ascii(std::string_view haystack, std::string_view needle);

std::optional<std::string> read_file_bytes(const std::filesystem::path& p);
void write_file_bytes(const std::filesystem::path& p, std::string_view bytes);

// Classic O(n*m) edit distance over bytes.
std::size_t levenshtein(std::string_view a, std::string_view b);

}  // namespace testpair
