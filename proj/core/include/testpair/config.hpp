// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "testpair/filterdedup.hpp"

namespace testpair {

// Every knob of every stage, in one versioned document. Artifacts embed the
// digest of the effective config (file values overridden by flags), which
// downstream stages verify, so a corpus can never silently mix tokenizers
// or thresholds.
struct PipelineConfig {
  int version = 1;

  // ingest
  int min_stars = 10;
  int test_repos_per_language = 500;
  std::uint64_t split_seed = 0;

  // filter
  FilterRuleSet filters;

  // align
  double fuzzy_threshold = 0.85;

  // tokenizer
  int vocab_target_size = 64000;
  int lines_per_file = 10;
  std::uint64_t tokenizer_seed = 0;
  std::uint64_t tokenizer_max_sample_bytes = 0;

  // corpus
  std::uint64_t context_length = 8192;
  std::uint64_t pack_seed = 0;

  // reference LM
  int lm_order = 4;
  double lm_discount = 0.75;

  // sampling
  double temperature = 0.2;
  int num_samples = 10;
  int max_tokens = 256;
  std::uint64_t sample_seed = 0;
  std::string stop_rule = "on-eos";  // or "on-method-end"

  // alignment-signal experiment
  int signal_train_pairs = 300;
  int signal_heldout_pairs = 30;
  int signal_ident_pool = 40;
  int signal_defs_per_pair = 24;
  int signal_seeds = 5;
  std::uint64_t signal_base_seed = 1;

  // evaluation set construction
  int eval_max_pairs_per_project = 10;
  std::uint64_t eval_subsample_seed = 0;
  bool eval_require_multiple_methods = true;
  int completion_statement_index = 1;

  // paths
  std::string root;
  std::string manifest_dir;
  std::string generations_dir;
  std::string out_dir = "out";
};

nlohmann::json config_to_json(const PipelineConfig& config);
PipelineConfig config_from_json(const nlohmann::json& j);

// md5 of the canonical (sorted-key) JSON dump of the effective config.
std::string config_digest(const PipelineConfig& config);

PipelineConfig load_config_file(const std::filesystem::path& path);

}  // namespace testpair
