// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "testpair/corpus.hpp"
#include "testpair/tokenizer.hpp"
#include "testpair/types.hpp"

namespace testpair {

// Interpolated n-gram model with absolute discounting. For a context c with
// total count T, D of its mass per distinct continuation is redistributed to
// the next-shorter context's distribution, bottoming out at uniform over the
// vocabulary, so every probability is positive and each context's
// distribution sums to exactly 1. An unseen context falls straight through
// to the shorter one.
class NGramModel {
 public:
  struct ContextCounts {
    std::int64_t total = 0;
    std::map<int, std::int64_t> tokens;
  };

  NGramModel() = default;
  NGramModel(int order, double discount, int vocab_size,
             std::string vocab_digest = {});

  int order() const { return order_; }
  double discount() const { return discount_; }
  int vocab_size() const { return vocab_size_; }
  const std::string& vocab_digest() const { return vocab_digest_; }

  // P(token | context); uses at most the trailing order-1 context tokens.
  double prob(std::span<const int> context, int token) const;

  // Full next-token distribution for a context, summing to 1.
  std::vector<double> distribution(std::span<const int> context) const;

  void add_count(std::span<const int> context, int token);

  // Levels indexed by context length (0 = unigram table).
  const std::unordered_map<std::string, ContextCounts>& level(
      std::size_t context_len) const {
    return levels_[context_len];
  }

 private:
  friend std::string serialize_model(const NGramModel&);

  int order_ = 2;
  double discount_ = 0.75;
  int vocab_size_ = 0;
  std::string vocab_digest_;
  std::vector<std::unordered_map<std::string, ContextCounts>> levels_;
};

// Counts every 1..order-gram of every packed sequence, trailing PAD
// excluded; contexts never cross sequence boundaries. Throws on an empty
// corpus, order < 2, or a discount outside (0, 1).
NGramModel train_lm(std::span<const PackedSequence> seqs, int order,
                    double discount, int vocab_size,
                    std::string vocab_digest = {});

// exp of the mean negative log-probability of `toks`, where the conditioning
// prefix extends the context of early tokens but contributes no terms.
double perplexity(const NGramModel& model, std::span<const int> toks,
                  std::span<const int> conditioning_prefix = {});

enum class StopRule { OnEOS, OnMethodEnd };

struct SampleConfig {
  double temperature = 0.2;
  int max_tokens = 256;
  int num_samples = 10;
  std::uint64_t seed = 0;
  StopRule stop = StopRule::OnEOS;
  // Required for OnMethodEnd: the decoded text is scanned for a complete
  // first method in `language`. Falls back to OnEOS when unset.
  const Vocabulary* vocab = nullptr;
  std::optional<Lang> language;
};

// Draws num_samples continuations. Probabilities are raised to 1/temperature
// and renormalized (in log space); sampling is deterministic under the seed.
// The stopping token (EOS) is not part of the returned continuation.
std::vector<std::vector<int>> sample(const NGramModel& model,
                                     std::span<const int> prompt,
                                     const SampleConfig& config);

std::string serialize_model(const NGramModel& model);
NGramModel parse_model(std::string_view text);
void save_model(const NGramModel& model, const std::filesystem::path& path);
NGramModel load_model(const std::filesystem::path& path);

struct SignalParams {
  int order = 4;
  double discount = 0.75;
  std::size_t pack_length = 512;
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
};

struct SignalSeedResult {
  std::uint64_t seed = 0;
  double ppl_aligned = 0.0;
  double ppl_shuffled = 0.0;
  double relative_delta = 0.0;  // (shuffled - aligned) / shuffled
};

struct SignalReport {
  std::vector<SignalSeedResult> per_seed;
  double mean_ppl_aligned = 0.0;
  double mean_ppl_shuffled = 0.0;
  double mean_relative_delta = 0.0;
  int seeds_aligned_lower = 0;
};

// Trains one model per corpus per seed (the seed drives packing order) and
// reports held-out perplexity of test-file tokens conditioned on the code
// prefix plus separator under each. The two corpora must cover the same file
// set — the aligned one as paired documents, the shuffled one as independent
// files — otherwise this throws.
SignalReport alignment_signal_experiment(
    std::span<const TrainingDocument> corpus_aligned,
    std::span<const TrainingDocument> corpus_shuffled,
    std::span<const std::pair<std::vector<int>, std::vector<int>>>
        heldout_pairs,
    const SignalParams& params, int vocab_size);

}  // namespace testpair
