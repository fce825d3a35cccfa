// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <filesystem>
#include <string>

#include "testpair/config.hpp"

namespace testpair::cli {

// One stage per subcommand. Each consumes the previous stage's artifacts
// (verifying the embedded config digest), writes its own with the current
// digest, and appends a run-log entry. Throws ConfigMismatchError /
// UpstreamArtifactError / std::runtime_error; main() maps these to exit
// codes.
void run_ingest(const PipelineConfig& config);
void run_filter(const PipelineConfig& config);
void run_align(const PipelineConfig& config);
void run_tokenize(const PipelineConfig& config);
void run_corpus(const PipelineConfig& config);
void run_stats(const PipelineConfig& config);
void run_lm_train(const PipelineConfig& config);
void run_lm_ppl(const PipelineConfig& config, const std::string& input_file,
                const std::string& prefix_file);
void run_lm_sample(const PipelineConfig& config,
                   const std::string& prompt_file,
                   const std::string& prompts_artifact);
void run_signal_exp(const PipelineConfig& config);
void run_prompts(const PipelineConfig& config);
void run_evaluate(const PipelineConfig& config);
void run_report(const PipelineConfig& config);

}  // namespace testpair::cli
