// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/types.hpp"

#include <algorithm>

#include "testpair/digest.hpp"
#include "testpair/util.hpp"

namespace testpair {

std::string_view to_string(Lang lang) {
  return lang == Lang::Python ? "python" : "java";
}

std::string_view to_string(Split split) {
  return split == Split::Train ? "train" : "test";
}

std::optional<Lang> parse_lang(std::string_view s) {
  if (s == "python") return Lang::Python;
  if (s == "java") return Lang::Java;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  return std::nullopt;
}

namespace {

bool is_space_cp(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' ||
         c == U'\f';
}

bool is_alnum_ascii(char32_t c) {
  return (c >= U'0' && c <= U'9') || (c >= U'a' && c <= U'z') ||
         (c >= U'A' && c <= U'Z');
}

}  // namespace

SourceFile make_source_file(std::string repo_id, std::string rel_path,
                            Lang lang, std::string_view raw_bytes) {
  SourceFile f;
  f.repo_id = std::move(repo_id);
  f.rel_path = std::move(rel_path);
  f.file_id = f.repo_id + "/" + f.rel_path;
  f.subject_language = lang;
  f.byte_size = raw_bytes.size();
  f.content_hash = md5_hex(raw_bytes);
  f.content = utf8_decode_lossy(raw_bytes);

  const auto lines = split_lines(f.content);
  f.line_count = static_cast<std::int64_t>(lines.size());
  std::int64_t total_line_chars = 0;
  for (const auto line : lines) {
    const auto n = static_cast<std::int64_t>(utf8_count_codepoints(line));
    total_line_chars += n;
    f.max_line_chars = std::max(f.max_line_chars, n);
  }
  f.mean_line_chars =
      f.line_count == 0
          ? 0.0
          : static_cast<double>(total_line_chars) /
                static_cast<double>(f.line_count);

  // Single pass over decoded code points for the non-alnum ratio.
  std::int64_t total_cps = 0;
  std::int64_t non_alnum = 0;
  std::size_t i = 0;
  const std::string_view text = f.content;
  while (i < text.size()) {
    const auto b0 = static_cast<unsigned char>(text[i]);
    char32_t cp = b0;
    std::size_t len = 1;
    if (b0 >= 0x80) {
      if ((b0 & 0xE0) == 0xC0) len = 2;
      else if ((b0 & 0xF0) == 0xE0) len = 3;
      else len = 4;
      cp = 0x10000;  // any non-ASCII code point; exact value not needed
    }
    ++total_cps;
    if (!is_space_cp(cp) && !is_alnum_ascii(cp)) ++non_alnum;
    i += len;
  }
  f.non_alnum_fraction = total_cps == 0 ? 0.0
                                        : static_cast<double>(non_alnum) /
                                              static_cast<double>(total_cps);
  return f;
}

}  // namespace testpair
