// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "testpair/promptgen.hpp"
#include "testpair/types.hpp"

namespace testpair {

// Whitespace-normalized equality: token streams after collapsing whitespace
// runs (and thereby trailing blanks) must be identical.
bool exact_match(std::string_view gen, std::string_view gold);

// F-measure of the longest common subsequence over whitespace-split tokens:
// F = 2PR/(P+R) with P = LCS/len(gen), R = LCS/len(gold); 0 when either
// side has no tokens.
double rouge_l(std::string_view gen, std::string_view gold);

struct CodeBleuComponents {
  double ngram = 0.0;           // add-one smoothed BLEU-4
  double weighted_ngram = 0.0;  // keyword-weighted BLEU-4
  double syntax_match = 0.0;    // matched sub-bracketing ratio
};

// Equal-thirds blend of the three components (the dataflow component of
// full CodeBLEU is intentionally absent; reports label this codebleu_lite).
// Tokens come from whitespace+punctuation splitting, independent of the BPE
// vocabulary. Empty generation scores 0.
std::pair<double, CodeBleuComponents> codebleu_lite(std::string_view gen,
                                                    std::string_view gold,
                                                    Lang lang);

struct LexicalScores {
  bool exact = false;
  double rouge = 0.0;
  double codebleu = 0.0;
  CodeBleuComponents components;
};

// Composite scorer maintaining the exact_match => all-ones invariant.
LexicalScores score_lexical(std::string_view gen, std::string_view gold,
                            Lang lang);

// Compile/pass verdicts and coverage for one injected generation.
// passed implies compiled; coverage fields are present only when passed.
struct RuntimeOutcome {
  std::string pair_id;
  Task task = Task::FirstTest;
  ContextMode context_mode = ContextMode::WithCode;
  int sample_k = 0;
  bool compiled = false;
  bool passed = false;
  std::optional<double> coverage_baseline;
  std::optional<double> coverage_with_gen;
  std::optional<double> coverage_delta;
  std::string pass_basis;  // how "passed" was decided, e.g. "suite-exit"
  std::string detail;      // failure reason when not compiled/passed
};

struct ScoredSample {
  std::string pair_id;
  Task task = Task::FirstTest;
  ContextMode context_mode = ContextMode::WithCode;
  int sample_k = 0;
  LexicalScores scores;
};

struct EvalCell {
  std::int64_t total = 0;
  std::int64_t compiled = 0;
  std::int64_t passed = 0;
  std::int64_t scored = 0;  // samples with a ground truth
  double mean_exact = 0.0;
  double mean_rouge = 0.0;
  double mean_codebleu = 0.0;
  std::int64_t with_delta = 0;  // passing samples with coverage
  double mean_coverage_delta = 0.0;
};

struct EvalReport {
  // keyed "task/context_mode", e.g. "first-test/with-code"
  std::map<std::string, EvalCell> cells;
  std::string lexical_metric_note = "codebleu_lite";
};

// Folds outcomes and lexical scores into the per-(task, mode) table. Every
// scored sample must correspond to an outcome with the same
// (pair_id, task, mode, sample_k) key; a dangling score is an error.
EvalReport aggregate(std::span<const RuntimeOutcome> outcomes,
                     std::span<const ScoredSample> scores);

// Human-readable table with the CodeBLEU / XMatch / Rouge / Compile / Pass
// columns.
std::string render_report_table(const EvalReport& report);

}  // namespace testpair
