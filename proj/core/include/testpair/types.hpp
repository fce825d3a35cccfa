// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace testpair {

enum class Lang { Python, Java };
enum class Split { Train, Test };

std::string_view to_string(Lang lang);
std::string_view to_string(Split split);
std::optional<Lang> parse_lang(std::string_view s);
std::optional<Split> parse_split(std::string_view s);

struct RepoRecord {
  std::string repo_id;
  std::string owner_name;
  int star_count = 0;
  Lang subject_language = Lang::Python;
  bool is_fork = false;
  Split split = Split::Train;
  std::filesystem::path root_path;
};

// One ingested source file. `content` is the raw bytes decoded as UTF-8 with
// lossy replacement; `content_hash` and `byte_size` are computed over the raw
// bytes so deduplication is independent of the decode.
//
// Line accounting: a line is the text between newlines, the '\n' excluded;
// a trailing newline adds no empty line. Line lengths count code points of
// the decoded text, so mean_line_chars * line_count equals the decoded
// code-point total minus the newlines, which is within line_count of it.
struct SourceFile {
  std::string file_id;  // "<repo_id>/<rel_path>", stable across runs
  std::string repo_id;
  std::string rel_path;
  Lang subject_language = Lang::Python;
  std::string content;
  std::uint64_t byte_size = 0;
  std::int64_t line_count = 0;
  std::int64_t max_line_chars = 0;
  double mean_line_chars = 0.0;
  double non_alnum_fraction = 0.0;
  std::string content_hash;
};

// Builds a SourceFile from raw bytes: lossy-decodes, computes line stats and
// the raw-byte digest. non_alnum_fraction counts non-whitespace code points
// outside [A-Za-z0-9] (non-ASCII counts as non-alphanumeric) over ALL code
// points of the decoded text, whitespace included, so indentation-heavy
// files are not penalized; 0 for empty content.
SourceFile make_source_file(std::string repo_id, std::string rel_path,
                            Lang lang, std::string_view raw_bytes);

}  // namespace testpair
