// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/filterdedup.hpp"

#include <algorithm>
#include <unordered_set>

#include "testpair/util.hpp"

namespace testpair {

std::string_view to_string(FilterRule rule) {
  switch (rule) {
    case FilterRule::Size: return "size";
    case FilterRule::MaxLine: return "max-line";
    case FilterRule::MeanLine: return "mean-line";
    case FilterRule::NonAlnum: return "non-alnum";
    case FilterRule::Autogen: return "autogen";
  }
  return "?";
}

std::optional<FilterRule> parse_filter_rule(std::string_view s) {
  if (s == "size") return FilterRule::Size;
  if (s == "max-line") return FilterRule::MaxLine;
  if (s == "mean-line") return FilterRule::MeanLine;
  if (s == "non-alnum") return FilterRule::NonAlnum;
  if (s == "autogen") return FilterRule::Autogen;
  return std::nullopt;
}

namespace {

bool has_autogen_marker(const SourceFile& file, const FilterRuleSet& rules) {
  const auto lines = split_lines(file.content);
  const std::size_t n =
      std::min<std::size_t>(lines.size(),
                            static_cast<std::size_t>(rules.autogen_scan_lines));
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& marker : rules.autogen_markers) {
      if (icontains_ascii(lines[i], marker)) return true;
    }
  }
  return false;
}

}  // namespace

FilterVerdict evaluate_file(const SourceFile& file,
                            const FilterRuleSet& rules) {
  FilterVerdict v;
  v.file_id = file.file_id;
  if (file.byte_size > rules.max_file_bytes) {
    v.rejected_by = FilterRule::Size;
  } else if (file.max_line_chars > rules.max_line_chars) {
    v.rejected_by = FilterRule::MaxLine;
  } else if (file.mean_line_chars > rules.max_mean_line_chars) {
    v.rejected_by = FilterRule::MeanLine;
  } else if (file.non_alnum_fraction > rules.max_non_alnum_fraction) {
    v.rejected_by = FilterRule::NonAlnum;
  } else if (has_autogen_marker(file, rules)) {
    v.rejected_by = FilterRule::Autogen;
  }
  v.kept = !v.rejected_by.has_value();
  return v;
}

std::vector<FilterVerdict> apply_filters(std::span<const SourceFile> files,
                                         const FilterRuleSet& rules,
                                         FilterReport* report) {
  std::vector<FilterVerdict> verdicts;
  verdicts.reserve(files.size());
  for (const auto& file : files) {
    verdicts.push_back(evaluate_file(file, rules));
    if (report) {
      const std::string lang{to_string(file.subject_language)};
      ++report->total[lang];
      const auto& v = verdicts.back();
      if (v.kept) {
        ++report->kept[lang];
      } else {
        ++report->rejected_by_rule[lang][std::string{
            to_string(*v.rejected_by)}];
      }
    }
  }
  return verdicts;
}

std::vector<SourceFile> dedup_by_hash(std::vector<SourceFile> files) {
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return std::tie(a.repo_id, a.rel_path) < std::tie(b.repo_id, b.rel_path);
  });
  std::unordered_set<std::string> seen;
  std::vector<SourceFile> out;
  out.reserve(files.size());
  for (auto& f : files) {
    if (seen.insert(f.content_hash).second) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace testpair
