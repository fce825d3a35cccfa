// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "testpair/types.hpp"

namespace testpair {

enum class CoverageFormat { XmlLineReport, JsonLineReport };

std::string_view to_string(CoverageFormat format);

// Per-project execution description (manifest.toml). Commands are argv
// lists, non-interactive, and run inside a disposable copy of workdir.
// `runner` optionally prefixes every command, for shelling into an external
// container runtime. code_file/test_file identify the pair under evaluation
// and are workdir-relative.
struct ProjectManifest {
  std::string project_id;
  std::filesystem::path workdir;
  std::vector<std::string> build_cmd;  // may be empty for Python projects
  std::vector<std::string> test_cmd;
  std::vector<std::string> coverage_cmd;
  CoverageFormat coverage_format = CoverageFormat::JsonLineReport;
  std::string coverage_output;  // report path, workdir-relative
  int timeout_secs = 60;
  std::map<std::string, std::string> env;
  Lang subject_language = Lang::Python;
  std::string code_file;
  std::string test_file;
  std::vector<std::string> runner;
};

// Parses the TOML subset the manifests use: top-level `key = value` pairs,
// one optional [env] table, strings, integers, booleans and flat string
// arrays. Relative workdir paths resolve against the manifest's directory.
ProjectManifest load_manifest(const std::filesystem::path& toml_path);
ProjectManifest parse_manifest(std::string_view text,
                               const std::filesystem::path& base_dir);

}  // namespace testpair
