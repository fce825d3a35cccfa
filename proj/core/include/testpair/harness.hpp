// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "testpair/coverage.hpp"
#include "testpair/manifest.hpp"
#include "testpair/metrics.hpp"
#include "testpair/promptgen.hpp"

namespace testpair {

enum class Phase { Build, Test, Coverage };

std::string_view to_string(Phase phase);

struct ExecutionResult {
  Phase phase = Phase::Build;
  int exit_code = -1;
  std::string stdout_text;
  std::string stderr_text;
  double duration_secs = 0.0;
  bool timed_out = false;
};

// Disposable copy of a project checkout. The source tree is never mutated;
// every evaluation owns its own copy, removed on destruction.
class Sandbox {
 public:
  explicit Sandbox(const std::filesystem::path& source);
  ~Sandbox();
  Sandbox(const Sandbox&) = delete;
  Sandbox& operator=(const Sandbox&) = delete;

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

struct BaselineRun {
  std::vector<ExecutionResult> phases;
  bool built = false;
  bool tests_passed = false;
  double coverage = 0.0;  // of the paired code file
  CoverageData data;
};

// Writes the test file variant into a fresh sandbox and runs
// build -> test -> coverage, stopping at the first failing phase. For
// Python projects with no build_cmd the build phase is a syntax check plus
// an import dry-run of the test module. Coverage is line coverage
// restricted to the manifest's code_file. Throws CoverageParseError when
// the coverage phase ran but its report is unreadable.
BaselineRun run_baseline(const ProjectManifest& manifest,
                         std::string_view test_file_variant);

// Injects `generated` into the baseline at the prompt's insertion point and
// classifies the result. compiled = build phase succeeded (for Python: free
// of syntax/import errors); passed = test phase exit 0 (recorded as
// pass_basis "suite-exit"); coverage_delta is computed only for passing
// samples, against `baseline` (computed on the fly when not supplied).
RuntimeOutcome evaluate_generation(const ProjectManifest& manifest,
                                   std::string_view baseline_file,
                                   const TaskPrompt& prompt,
                                   std::string_view generated,
                                   const BaselineRun* baseline = nullptr);

struct GenerationRecord {
  RuntimeOutcome outcome;
  std::string text;
  Lang lang = Lang::Python;
};

bool contains_assertion(std::string_view text, Lang lang);

// Survivors of the compiles-passes-asserts filter, as indices into the
// input, order preserved.
std::vector<std::size_t> filter_generations(
    std::span<const GenerationRecord> records);

}  // namespace testpair
