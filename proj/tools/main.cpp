// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include <CLI11.hpp>
#include <iostream>

#include "pipeline.hpp"
#include "testpair/artifact.hpp"
#include "testpair/config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitUpstreamError = 3;
constexpr int kExitExecutionError = 4;

}  // namespace

int main(int argc, char** argv) {
  using testpair::PipelineConfig;

  CLI::App app{
      "testpair: mines code-test pairs from repository checkouts, builds "
      "aligned training corpora, trains a tokenizer and a reference n-gram "
      "LM, and evaluates generated tests by lexical and runtime metrics"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand

  std::string config_file;
  app.add_option("--config", config_file, "JSON config file (flags win)");

  // Flags shadow the config; only flags the user actually passed override.
  PipelineConfig flags;
  app.add_option("--root", flags.root, "repository checkout tree");
  app.add_option("--out", flags.out_dir, "artifact output directory");
  app.add_option("--manifest-dir", flags.manifest_dir,
                 "directory of per-project manifest.toml files");
  app.add_option("--generations-dir", flags.generations_dir,
                 "generation tree (pair/task/mode/sample.txt)");
  app.add_option("--min-stars", flags.min_stars, "repo star floor");
  app.add_option("--test-repos", flags.test_repos_per_language,
                 "test-split repos per language");
  app.add_option("--split-seed", flags.split_seed, "train/test split seed");
  app.add_option("--fuzzy-threshold", flags.fuzzy_threshold,
                 "pair similarity floor (exclusive)");
  app.add_option("--vocab-size", flags.vocab_target_size,
                 "subword inventory size (bytes + merges)");
  app.add_option("--lines-per-file", flags.lines_per_file,
                 "sampled lines per file for tokenizer training");
  app.add_option("--tokenizer-seed", flags.tokenizer_seed, "sampling seed");
  app.add_option("--context-length", flags.context_length,
                 "packed sequence length L");
  app.add_option("--pack-seed", flags.pack_seed, "document shuffle seed");
  app.add_option("--order", flags.lm_order, "n-gram order");
  app.add_option("--discount", flags.lm_discount, "absolute discount");
  app.add_option("--temperature", flags.temperature, "sampling temperature");
  app.add_option("--num-samples", flags.num_samples, "samples per prompt");
  app.add_option("--max-tokens", flags.max_tokens, "sample length cap");
  app.add_option("--sample-seed", flags.sample_seed, "sampling seed");
  app.add_option("--stop-rule", flags.stop_rule,
                 "on-eos or on-method-end");
  app.add_option("--signal-seeds", flags.signal_seeds,
                 "seeds for the alignment-signal experiment");
  app.add_option("--eval-max-pairs", flags.eval_max_pairs_per_project,
                 "per-project pair cap for the eval set");
  app.add_option("--eval-subsample-seed", flags.eval_subsample_seed,
                 "per-project subsampling seed");
  app.add_option("--statement-index", flags.completion_statement_index,
                 "target statement for the completion task");

  std::string ppl_input, ppl_prefix, sample_prompt_file, sample_prompts;
  auto* ingest = app.add_subcommand("ingest", "scan checkouts, assign split");
  auto* filter = app.add_subcommand("filter", "quality filters + dedup");
  auto* align = app.add_subcommand("align", "pair code and test files");
  auto* tokenize = app.add_subcommand("tokenize", "train the subword vocab");
  auto* corpus =
      app.add_subcommand("corpus", "build and pack training documents");
  auto* stats = app.add_subcommand("stats", "token-length distribution");
  auto* lm_train = app.add_subcommand("lm-train", "train the reference LM");
  auto* lm_ppl = app.add_subcommand("lm-ppl", "perplexity of a text file");
  lm_ppl->add_option("--input", ppl_input, "text file to score")->required();
  lm_ppl->add_option("--prefix", ppl_prefix, "conditioning prefix file");
  auto* lm_sample = app.add_subcommand("lm-sample", "sample continuations");
  lm_sample->add_option("--prompt-file", sample_prompt_file,
                        "single prompt file (prints samples)");
  lm_sample->add_option("--prompts", sample_prompts,
                        "prompts.jsonl to expand into a generation tree");
  auto* signal =
      app.add_subcommand("signal-exp", "aligned-vs-shuffled pretraining "
                                       "signal experiment");
  auto* prompts =
      app.add_subcommand("prompts", "build task prompts and ground truths");
  auto* evaluate =
      app.add_subcommand("evaluate", "run generations through the harness");
  auto* report = app.add_subcommand("report", "aggregate metrics table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfigError;
  }

  PipelineConfig config;
  try {
    if (!config_file.empty()) config = testpair::load_config_file(config_file);
    // Flags win over the file.
    auto take = [&](const char* flag, auto member) {
      if (app.count(flag) > 0) config.*member = flags.*member;
    };
    take("--root", &PipelineConfig::root);
    take("--out", &PipelineConfig::out_dir);
    take("--manifest-dir", &PipelineConfig::manifest_dir);
    take("--generations-dir", &PipelineConfig::generations_dir);
    take("--min-stars", &PipelineConfig::min_stars);
    take("--test-repos", &PipelineConfig::test_repos_per_language);
    take("--split-seed", &PipelineConfig::split_seed);
    take("--fuzzy-threshold", &PipelineConfig::fuzzy_threshold);
    take("--vocab-size", &PipelineConfig::vocab_target_size);
    take("--lines-per-file", &PipelineConfig::lines_per_file);
    take("--tokenizer-seed", &PipelineConfig::tokenizer_seed);
    take("--context-length", &PipelineConfig::context_length);
    take("--pack-seed", &PipelineConfig::pack_seed);
    take("--order", &PipelineConfig::lm_order);
    take("--discount", &PipelineConfig::lm_discount);
    take("--temperature", &PipelineConfig::temperature);
    take("--num-samples", &PipelineConfig::num_samples);
    take("--max-tokens", &PipelineConfig::max_tokens);
    take("--sample-seed", &PipelineConfig::sample_seed);
    take("--stop-rule", &PipelineConfig::stop_rule);
    take("--signal-seeds", &PipelineConfig::signal_seeds);
    take("--eval-max-pairs", &PipelineConfig::eval_max_pairs_per_project);
    take("--eval-subsample-seed", &PipelineConfig::eval_subsample_seed);
    take("--statement-index", &PipelineConfig::completion_statement_index);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    if (ingest->parsed()) testpair::cli::run_ingest(config);
    if (filter->parsed()) testpair::cli::run_filter(config);
    if (align->parsed()) testpair::cli::run_align(config);
    if (tokenize->parsed()) testpair::cli::run_tokenize(config);
    if (corpus->parsed()) testpair::cli::run_corpus(config);
    if (stats->parsed()) testpair::cli::run_stats(config);
    if (lm_train->parsed()) testpair::cli::run_lm_train(config);
    if (lm_ppl->parsed()) testpair::cli::run_lm_ppl(config, ppl_input, ppl_prefix);
    if (lm_sample->parsed()) {
      testpair::cli::run_lm_sample(config, sample_prompt_file, sample_prompts);
    }
    if (signal->parsed()) testpair::cli::run_signal_exp(config);
    if (prompts->parsed()) testpair::cli::run_prompts(config);
    if (evaluate->parsed()) testpair::cli::run_evaluate(config);
    if (report->parsed()) testpair::cli::run_report(config);
  } catch (const testpair::ConfigMismatchError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const testpair::UpstreamArtifactError& e) {
    std::cerr << "upstream artifact error: " << e.what() << '\n';
    return kExitUpstreamError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitExecutionError;
  }
  return kExitOk;
}
