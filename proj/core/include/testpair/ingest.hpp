// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "testpair/types.hpp"

namespace testpair {

struct IngestConfig {
  int min_stars = 10;
  // Extension -> subject language. Classification is strictly by extension;
  // anything unmapped (configs, READMEs, extensionless) is not source.
  std::map<std::string, Lang> extension_map = {{".py", Lang::Python},
                                               {".java", Lang::Java}};
  int test_repos_per_language = 500;
  std::uint64_t split_seed = 0;
};

struct ScanDiagnostics {
  std::vector<std::string> skipped_repos;  // "repo_id: reason"
  std::vector<std::string> skipped_files;  // "file: reason"
};

struct RepoScan {
  RepoRecord repo;
  std::vector<SourceFile> files;  // sorted by rel_path
};

// Walks pre-cloned checkouts under `root`, one directory per repository,
// with star/fork metadata read from the `repos.jsonl` sidecar at the root
// (fields per record: repo, owner_name, star_count, is_fork,
// subject_language). Repos below min_stars and forks are dropped. Hidden
// directories (".git" and friends) are not descended into. Unreadable repos
// or files are skipped with a diagnostic; neither aborts the scan.
// Repositories are scanned in parallel and returned sorted by repo_id, each
// repo's files sorted by rel_path, so output is deterministic.
std::vector<RepoScan> scan_repositories(const std::filesystem::path& root,
                                        const IngestConfig& config,
                                        ScanDiagnostics* diagnostics = nullptr);

// Marks exactly `test_count_per_language` repos per subject language as
// Test, the rest Train, deterministically under `seed`. The split is at
// repository granularity and assigned once. Throws std::runtime_error naming
// the language and counts when a language has too few repos.
std::vector<RepoRecord> assign_split(std::vector<RepoRecord> repos,
                                     int test_count_per_language,
                                     std::uint64_t seed);

}  // namespace testpair
