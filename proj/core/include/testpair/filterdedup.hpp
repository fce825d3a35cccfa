// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "testpair/types.hpp"

namespace testpair {

struct FilterRuleSet {
  std::uint64_t max_file_bytes = 1048576;
  std::int64_t max_line_chars = 1000;
  double max_mean_line_chars = 100.0;
  double max_non_alnum_fraction = 0.25;
  // Case-insensitive substring search over the first autogen_scan_lines
  // lines of the decoded content.
  std::vector<std::string> autogen_markers = {"auto-generated", "autogenerated",
                                              "do not edit"};
  int autogen_scan_lines = 5;
};

// Rejection rules in their fixed evaluation order. A file is attributed to
// the first rule it fails; later rules are not evaluated for it.
enum class FilterRule { Size, MaxLine, MeanLine, NonAlnum, Autogen };

std::string_view to_string(FilterRule rule);
std::optional<FilterRule> parse_filter_rule(std::string_view s);

struct FilterVerdict {
  std::string file_id;
  bool kept = false;
  std::optional<FilterRule> rejected_by;  // absent iff kept
};

struct FilterReport {
  // language -> rule name -> rejected count, plus kept/total per language.
  std::map<std::string, std::map<std::string, std::int64_t>> rejected_by_rule;
  std::map<std::string, std::int64_t> kept;
  std::map<std::string, std::int64_t> total;
};

// All thresholds are exclusive: a file is rejected only when a statistic is
// strictly greater than its limit, matching "larger than" semantics.
FilterVerdict evaluate_file(const SourceFile& file, const FilterRuleSet& rules);

// Emits one verdict per input file, in input order.
std::vector<FilterVerdict> apply_filters(std::span<const SourceFile> files,
                                         const FilterRuleSet& rules,
                                         FilterReport* report = nullptr);

// Keeps exactly one representative per distinct content hash: the first file
// in (repo_id, rel_path) order. Output is sorted by (repo_id, rel_path).
std::vector<SourceFile> dedup_by_hash(std::vector<SourceFile> files);

}  // namespace testpair
