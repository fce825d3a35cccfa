// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/harness.hpp"

#include <fmt/format.h>
#include <unistd.h>

#include <atomic>
#include <cctype>

#include "testpair/subprocess.hpp"
#include "testpair/util.hpp"

namespace fs = std::filesystem;

namespace testpair {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Build: return "build";
    case Phase::Test: return "test";
    case Phase::Coverage: return "coverage";
  }
  return "?";
}

Sandbox::Sandbox(const fs::path& source) {
  static std::atomic<std::uint64_t> counter{0};
  const auto id = counter.fetch_add(1);
  dir_ = fs::temp_directory_path() /
         fmt::format("testpair-sbx-{}-{}", getpid(), id);
  fs::create_directories(dir_);
  fs::copy(source, dir_,
           fs::copy_options::recursive | fs::copy_options::copy_symlinks);
}

Sandbox::~Sandbox() {
  std::error_code ec;
  fs::remove_all(dir_, ec);
}

namespace {

std::vector<std::string> with_runner(const ProjectManifest& m,
                                     std::vector<std::string> cmd) {
  if (m.runner.empty()) return cmd;
  std::vector<std::string> full = m.runner;
  full.insert(full.end(), cmd.begin(), cmd.end());
  return full;
}

ExecutionResult to_phase_result(Phase phase, const CommandResult& r) {
  ExecutionResult e;
  e.phase = phase;
  e.exit_code = r.exit_code;
  e.stdout_text = r.stdout_text;
  e.stderr_text = r.stderr_text;
  e.duration_secs = r.duration_secs;
  e.timed_out = r.timed_out;
  return e;
}

// Build phase for Python projects without a build command: a syntax check
// of the test file followed by an import dry-run of the test module.
CommandResult python_compile_check(const ProjectManifest& m,
                                   const fs::path& sandbox_dir) {
  auto r = run_command(
      with_runner(m, {"python3", "-m", "py_compile", m.test_file}),
      sandbox_dir, m.env, m.timeout_secs);
  if (r.exit_code != 0) return r;
  const fs::path rel{m.test_file};
  const std::string dir = rel.parent_path().empty()
                              ? std::string{"."}
                              : rel.parent_path().string();
  const std::string stem = rel.stem().string();
  const std::string prog = fmt::format(
      "import sys; sys.path.insert(0, '.'); sys.path.insert(0, '{}'); "
      "import {}",
      dir, stem);
  return run_command(with_runner(m, {"python3", "-c", prog}), sandbox_dir,
                     m.env, m.timeout_secs);
}

}  // namespace

BaselineRun run_baseline(const ProjectManifest& manifest,
                         std::string_view test_file_variant) {
  Sandbox sandbox(manifest.workdir);
  const fs::path test_path = sandbox.dir() / manifest.test_file;
  fs::create_directories(test_path.parent_path());
  write_file_bytes(test_path, test_file_variant);

  BaselineRun run;

  if (!manifest.build_cmd.empty()) {
    const auto r = run_command(with_runner(manifest, manifest.build_cmd),
                               sandbox.dir(), manifest.env,
                               manifest.timeout_secs);
    run.phases.push_back(to_phase_result(Phase::Build, r));
    run.built = r.exit_code == 0 && !r.timed_out;
  } else if (manifest.subject_language == Lang::Python) {
    const auto r = python_compile_check(manifest, sandbox.dir());
    run.phases.push_back(to_phase_result(Phase::Build, r));
    run.built = r.exit_code == 0 && !r.timed_out;
  } else {
    run.built = true;  // nothing to build
  }
  if (!run.built) return run;

  const auto test_result =
      run_command(with_runner(manifest, manifest.test_cmd), sandbox.dir(),
                  manifest.env, manifest.timeout_secs);
  run.phases.push_back(to_phase_result(Phase::Test, test_result));
  run.tests_passed = test_result.exit_code == 0 && !test_result.timed_out;
  if (!run.tests_passed) return run;

  if (!manifest.coverage_cmd.empty()) {
    const auto cov_result =
        run_command(with_runner(manifest, manifest.coverage_cmd),
                    sandbox.dir(), manifest.env, manifest.timeout_secs);
    run.phases.push_back(to_phase_result(Phase::Coverage, cov_result));
    if (cov_result.exit_code != 0 || cov_result.timed_out) return run;
    const auto report_bytes =
        read_file_bytes(sandbox.dir() / manifest.coverage_output);
    if (!report_bytes) {
      throw CoverageParseError("coverage phase produced no report at " +
                               manifest.coverage_output);
    }
    run.data = parse_coverage(*report_bytes, manifest.coverage_format);
    run.coverage = file_line_coverage(run.data, manifest.code_file);
  }
  return run;
}

RuntimeOutcome evaluate_generation(const ProjectManifest& manifest,
                                   std::string_view baseline_file,
                                   const TaskPrompt& prompt,
                                   std::string_view generated,
                                   const BaselineRun* baseline) {
  RuntimeOutcome outcome;
  outcome.pair_id = prompt.pair_id;
  outcome.task = prompt.task;
  outcome.context_mode = prompt.context_mode;

  const std::string injected =
      inject_generation(baseline_file, prompt.insertion_point, generated,
                        manifest.subject_language);

  BaselineRun local_baseline;
  if (!baseline) {
    local_baseline = run_baseline(manifest, baseline_file);
    baseline = &local_baseline;
  }

  BaselineRun gen_run;
  try {
    gen_run = run_baseline(manifest, injected);
  } catch (const CoverageParseError& e) {
    outcome.compiled = true;
    outcome.passed = true;
    outcome.pass_basis = "suite-exit";
    outcome.detail = std::string{"coverage-parse-error: "} + e.what();
    return outcome;
  }

  outcome.compiled = gen_run.built;
  outcome.passed = gen_run.built && gen_run.tests_passed;
  outcome.pass_basis = gen_run.built ? "suite-exit" : "";
  for (const auto& phase : gen_run.phases) {
    if (phase.timed_out) {
      outcome.detail = fmt::format("{}-timeout", to_string(phase.phase));
    }
  }
  if (!outcome.compiled && outcome.detail.empty()) {
    outcome.detail = "build-failed";
  } else if (!outcome.passed && outcome.detail.empty()) {
    outcome.detail = "tests-failed";
  }

  if (outcome.passed) {
    outcome.coverage_baseline = baseline->coverage;
    outcome.coverage_with_gen = gen_run.coverage;
    outcome.coverage_delta = gen_run.coverage - baseline->coverage;
  }
  return outcome;
}

bool contains_assertion(std::string_view text, Lang lang) {
  (void)lang;  // both lexeme lists are assert-prefixed words
  std::size_t i = 0;
  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < text.size()) {
    if (!is_word(text[i])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < text.size() && is_word(text[j])) ++j;
    const auto word = ascii_lower(text.substr(i, j - i));
    if (word.starts_with("assert")) return true;
    i = j;
  }
  return false;
}

std::vector<std::size_t> filter_generations(
    std::span<const GenerationRecord> records) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.outcome.compiled && r.outcome.passed &&
        contains_assertion(r.text, r.lang)) {
      kept.push_back(i);
    }
  }
  return kept;
}

}  // namespace testpair
