// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/config.hpp"

#include "testpair/digest.hpp"
#include "testpair/util.hpp"

namespace testpair {

nlohmann::json config_to_json(const PipelineConfig& c) {
  return nlohmann::json{
      {"version", c.version},
      {"min_stars", c.min_stars},
      {"test_repos_per_language", c.test_repos_per_language},
      {"split_seed", c.split_seed},
      {"max_file_bytes", c.filters.max_file_bytes},
      {"max_line_chars", c.filters.max_line_chars},
      {"max_mean_line_chars", c.filters.max_mean_line_chars},
      {"max_non_alnum_fraction", c.filters.max_non_alnum_fraction},
      {"autogen_markers", c.filters.autogen_markers},
      {"autogen_scan_lines", c.filters.autogen_scan_lines},
      {"fuzzy_threshold", c.fuzzy_threshold},
      {"vocab_target_size", c.vocab_target_size},
      {"lines_per_file", c.lines_per_file},
      {"tokenizer_seed", c.tokenizer_seed},
      {"tokenizer_max_sample_bytes", c.tokenizer_max_sample_bytes},
      {"context_length", c.context_length},
      {"pack_seed", c.pack_seed},
      {"lm_order", c.lm_order},
      {"lm_discount", c.lm_discount},
      {"temperature", c.temperature},
      {"num_samples", c.num_samples},
      {"max_tokens", c.max_tokens},
      {"sample_seed", c.sample_seed},
      {"stop_rule", c.stop_rule},
      {"signal_train_pairs", c.signal_train_pairs},
      {"signal_heldout_pairs", c.signal_heldout_pairs},
      {"signal_ident_pool", c.signal_ident_pool},
      {"signal_defs_per_pair", c.signal_defs_per_pair},
      {"signal_seeds", c.signal_seeds},
      {"signal_base_seed", c.signal_base_seed},
      {"eval_max_pairs_per_project", c.eval_max_pairs_per_project},
      {"eval_subsample_seed", c.eval_subsample_seed},
      {"eval_require_multiple_methods", c.eval_require_multiple_methods},
      {"completion_statement_index", c.completion_statement_index},
      {"root", c.root},
      {"manifest_dir", c.manifest_dir},
      {"generations_dir", c.generations_dir},
      {"out_dir", c.out_dir},
  };
}

PipelineConfig config_from_json(const nlohmann::json& j) {
  PipelineConfig c;
  auto get = [&](const char* key, auto& into) {
    if (j.contains(key)) into = j.at(key).get<std::decay_t<decltype(into)>>();
  };
  get("version", c.version);
  get("min_stars", c.min_stars);
  get("test_repos_per_language", c.test_repos_per_language);
  get("split_seed", c.split_seed);
  get("max_file_bytes", c.filters.max_file_bytes);
  get("max_line_chars", c.filters.max_line_chars);
  get("max_mean_line_chars", c.filters.max_mean_line_chars);
  get("max_non_alnum_fraction", c.filters.max_non_alnum_fraction);
  get("autogen_markers", c.filters.autogen_markers);
  get("autogen_scan_lines", c.filters.autogen_scan_lines);
  get("fuzzy_threshold", c.fuzzy_threshold);
  get("vocab_target_size", c.vocab_target_size);
  get("lines_per_file", c.lines_per_file);
  get("tokenizer_seed", c.tokenizer_seed);
  get("tokenizer_max_sample_bytes", c.tokenizer_max_sample_bytes);
  get("context_length", c.context_length);
  get("pack_seed", c.pack_seed);
  get("lm_order", c.lm_order);
  get("lm_discount", c.lm_discount);
  get("temperature", c.temperature);
  get("num_samples", c.num_samples);
  get("max_tokens", c.max_tokens);
  get("sample_seed", c.sample_seed);
  get("stop_rule", c.stop_rule);
  get("signal_train_pairs", c.signal_train_pairs);
  get("signal_heldout_pairs", c.signal_heldout_pairs);
  get("signal_ident_pool", c.signal_ident_pool);
  get("signal_defs_per_pair", c.signal_defs_per_pair);
  get("signal_seeds", c.signal_seeds);
  get("signal_base_seed", c.signal_base_seed);
  get("eval_max_pairs_per_project", c.eval_max_pairs_per_project);
  get("eval_subsample_seed", c.eval_subsample_seed);
  get("eval_require_multiple_methods", c.eval_require_multiple_methods);
  get("completion_statement_index", c.completion_statement_index);
  get("root", c.root);
  get("manifest_dir", c.manifest_dir);
  get("generations_dir", c.generations_dir);
  get("out_dir", c.out_dir);
  return c;
}

std::string config_digest(const PipelineConfig& config) {
  return md5_hex(config_to_json(config).dump());
}

PipelineConfig load_config_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (!bytes) {
    throw std::runtime_error("cannot read config file: " + path.string());
  }
  const auto j = nlohmann::json::parse(*bytes, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error("config file is not a JSON object: " +
                             path.string());
  }
  return config_from_json(j);
}

}  // namespace testpair
