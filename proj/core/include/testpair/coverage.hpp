// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "testpair/manifest.hpp"

namespace testpair {

class CoverageParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FileCoverage {
  std::set<int> covered;
  std::set<int> coverable;
};

// Normalized per-file line coverage, keyed by the path the tool reported.
using CoverageData = std::map<std::string, FileCoverage>;

// JSON adapter: accepts the normalized shape
//   {"<file>": {"covered": [...], "coverable": [...]}}
// and the common line-report shape with executed/missing line arrays under a
// top-level "files" object.
CoverageData parse_coverage_json(std::string_view bytes);

// XML adapter: accepts class-level line reports (filename attribute with
// <line number=".." hits=".."/> children) and sourcefile-level reports
// (name attribute with <line nr=".." ci=".."/> children).
CoverageData parse_coverage_xml(std::string_view bytes);

CoverageData parse_coverage(std::string_view bytes, CoverageFormat format);

std::string normalized_coverage_json(const CoverageData& data);

// covered/coverable for the file whose reported path equals rel_path or
// ends with "/" + rel_path; 0 when the file is absent or has no coverable
// lines.
double file_line_coverage(const CoverageData& data, std::string_view rel_path);

}  // namespace testpair
