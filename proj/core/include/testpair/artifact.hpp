// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "testpair/align.hpp"
#include "testpair/filterdedup.hpp"
#include "testpair/metrics.hpp"
#include "testpair/promptgen.hpp"
#include "testpair/types.hpp"

namespace testpair {

// A consumer asked for an artifact that is missing or unreadable.
class UpstreamArtifactError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config digest embedded in an artifact does not match the running config.
class ConfigMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// jsonl artifact layout: line 1 is a header record
// {"artifact": name, "version": 1, "config_digest": hex}; every following
// line is one record. Writers emit sorted-key JSON so reruns are
// byte-identical.
struct JsonlArtifact {
  std::string artifact;
  int version = 1;
  std::string config_digest;
  std::vector<nlohmann::json> records;
};

void write_jsonl_artifact(const std::filesystem::path& path,
                          const std::string& artifact_name,
                          const std::string& config_digest,
                          const std::vector<nlohmann::json>& records);

JsonlArtifact read_jsonl_artifact(const std::filesystem::path& path);

// Reads and verifies the digest in one step.
JsonlArtifact read_jsonl_artifact(const std::filesystem::path& path,
                                  const std::string& expected_digest);

// --- wire formats ------------------------------------------------------

nlohmann::json repo_to_json(const RepoRecord& repo);
RepoRecord repo_from_json(const nlohmann::json& j);

// SourceFile records reference content by root-relative path instead of
// inlining it.
nlohmann::json source_file_to_json(const SourceFile& file);
SourceFile source_file_from_json(const nlohmann::json& j,
                                 const std::filesystem::path& root);

nlohmann::json pair_to_json(const CodeTestPair& pair);
CodeTestPair pair_from_json(const nlohmann::json& j);

nlohmann::json verdict_to_json(const FilterVerdict& verdict);

nlohmann::json prompt_to_json(const TaskPrompt& prompt);
TaskPrompt prompt_from_json(const nlohmann::json& j);

nlohmann::json outcome_to_json(const RuntimeOutcome& outcome);
RuntimeOutcome outcome_from_json(const nlohmann::json& j);

nlohmann::json scored_sample_to_json(const ScoredSample& sample);
ScoredSample scored_sample_from_json(const nlohmann::json& j);

}  // namespace testpair
