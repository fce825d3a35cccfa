// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/reflm.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "testpair/synthetic.hpp"
#include "testutil.hpp"

namespace testpair {
namespace {

using testing::TempDir;

PackedSequence seq_of(std::vector<int> ids, std::size_t L) {
  PackedSequence s;
  s.token_ids = std::move(ids);
  s.token_ids.resize(L, Vocabulary::kPadId);
  return s;
}

constexpr int kA = 10;
constexpr int kB = 11;

TEST(TrainLm, HandComputedAbsoluteDiscountTable) {
  // corpus "a b a b", order 2, discount 0.75, vocab 10
  const std::vector<PackedSequence> seqs{seq_of({kA, kB, kA, kB}, 8)};
  const auto model = train_lm(seqs, 2, 0.75, 10);

  // raw counts before smoothing: context [a] -> b twice, so the
  // maximum-likelihood P(b|a) is exactly 1
  const auto& contexts = model.level(1);
  ASSERT_EQ(contexts.size(), 2u);

  // P_uni(b) = (2 - D)/4 + (D*2/4) * 1/10 = 0.3125 + 0.0375 = 0.35
  // P(b|a)  = (2 - D)/2 + (D*1/2) * 0.35 = 0.625 + 0.13125 = 0.75625
  const std::vector<int> ctx{kA};
  EXPECT_NEAR(model.prob(ctx, kB), 0.75625, 1e-12);
}

TEST(TrainLm, IdenticalCorporaGiveIdenticalModels) {
  const std::vector<PackedSequence> seqs{seq_of({kA, kB, kA, kB, kA}, 16),
                                         seq_of({kB, kB, kA}, 16)};
  const auto m1 = train_lm(seqs, 3, 0.75, 12);
  const auto m2 = train_lm(seqs, 3, 0.75, 12);
  EXPECT_EQ(serialize_model(m1), serialize_model(m2));
}

TEST(TrainLm, UnseenContextFallsThroughToLowerOrder) {
  const std::vector<PackedSequence> seqs{seq_of({kA, kB, kA, kB}, 8)};
  const auto model = train_lm(seqs, 3, 0.75, 10);
  const std::vector<int> unseen{7, 8};
  const std::vector<int> shorter{8};
  for (int tok = 0; tok < 10; ++tok) {
    EXPECT_DOUBLE_EQ(model.prob(unseen, tok), model.prob(shorter, tok));
  }
  const std::vector<int> empty{};
  const std::vector<int> both_unseen{5, 6};
  for (int tok = 0; tok < 10; ++tok) {
    EXPECT_DOUBLE_EQ(model.prob(both_unseen, tok), model.prob(empty, tok));
  }
}

TEST(TrainLm, RejectsBadArguments) {
  const std::vector<PackedSequence> seqs{seq_of({kA}, 4)};
  EXPECT_THROW(train_lm(seqs, 1, 0.75, 10), std::invalid_argument);
  EXPECT_THROW(train_lm(seqs, 2, 1.5, 10), std::invalid_argument);
  EXPECT_THROW(train_lm(seqs, 2, 0.75, 0), std::invalid_argument);
  EXPECT_THROW(train_lm({}, 2, 0.75, 10), std::runtime_error);
  const std::vector<PackedSequence> all_pad{seq_of({}, 4)};
  EXPECT_THROW(train_lm(all_pad, 2, 0.75, 10), std::runtime_error);
}

TEST(Perplexity, UniformModelEqualsVocabularySize) {
  for (const int vocab_size : {2, 17, 1000}) {
    const NGramModel uniform(4, 0.75, vocab_size);
    const std::vector<int> toks{0, 1, 0, 1, 0};
    EXPECT_NEAR(perplexity(uniform, toks), vocab_size, 1e-9 * vocab_size);
  }
}

TEST(Perplexity, RepeatedTokenClosedForm) {
  // one sequence of 50 t's; the conditioning prefix supplies full context
  // so every scored position uses the deepest level.
  constexpr int kT = 5;
  constexpr double kD = 0.75;
  constexpr int kV = 20;
  const std::vector<PackedSequence> seqs{seq_of(std::vector<int>(50, kT), 64)};
  const auto model = train_lm(seqs, 4, kD, kV);

  // closed form per level: a context of k t's was followed by t
  // (50 - k) times with one distinct continuation
  double p = 1.0 / kV;
  for (int k = 0; k <= 3; ++k) {
    const double total = 50.0 - static_cast<double>(k);
    p = (total - kD) / total + (kD / total) * p;
  }
  const std::vector<int> prefix{kT, kT, kT};
  const std::vector<int> toks(10, kT);
  EXPECT_NEAR(perplexity(model, toks, prefix), 1.0 / p, 1e-9);
  EXPECT_GT(1.0 / p, 1.0) << "smoothing mass keeps perplexity above 1";
}

TEST(Perplexity, EmptySequenceThrows) {
  const NGramModel uniform(2, 0.75, 4);
  EXPECT_THROW(perplexity(uniform, {}), std::invalid_argument);
}

TEST(Distribution, NormalizesOverRandomContexts) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> tok(0, 29);
  std::vector<int> stream;
  for (int i = 0; i < 4000; ++i) stream.push_back(tok(rng));
  const std::vector<PackedSequence> seqs{seq_of(stream, 4096)};
  const auto model = train_lm(seqs, 4, 0.75, 30);

  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<int> ctx;
    std::uniform_int_distribution<int> clen(0, 3);
    for (int i = clen(rng); i > 0; --i) ctx.push_back(tok(rng));
    const auto dist = model.distribution(ctx);
    const double sum = std::accumulate(dist.begin(), dist.end(), 0.0);
    ASSERT_NEAR(sum, 1.0, 1e-9);
    for (const double p : dist) ASSERT_GT(p, 0.0);
    const int probe = tok(rng);
    ASSERT_NEAR(dist[static_cast<std::size_t>(probe)], model.prob(ctx, probe),
                1e-12);
  }
}

TEST(Sample, NearZeroTemperatureEqualsGreedyArgmax) {
  const std::vector<PackedSequence> seqs{
      seq_of({kA, kB, kA, kB, kA, kB, kA, kA}, 16)};
  const auto model = train_lm(seqs, 3, 0.75, 12);

  SampleConfig config;
  config.temperature = 1e-6;
  config.max_tokens = 8;
  config.num_samples = 5;
  config.seed = 44;
  const std::vector<int> prompt{kA};
  const auto samples = sample(model, prompt, config);

  std::vector<int> greedy;
  std::vector<int> ctx = prompt;
  for (int i = 0; i < config.max_tokens; ++i) {
    const auto dist = model.distribution(ctx);
    const int best = static_cast<int>(
        std::max_element(dist.begin(), dist.end()) - dist.begin());
    if (best == Vocabulary::kEosId) break;
    greedy.push_back(best);
    ctx.push_back(best);
  }
  for (const auto& s : samples) EXPECT_EQ(s, greedy);
}

TEST(Sample, DeterministicUnderSeed) {
  const std::vector<PackedSequence> seqs{seq_of({kA, kB, kB, kA, kB}, 16)};
  const auto model = train_lm(seqs, 2, 0.75, 12);
  SampleConfig config;
  config.temperature = 1.0;
  config.max_tokens = 12;
  config.num_samples = 10;
  config.seed = 7;
  const std::vector<int> prompt{kA};
  const auto first = sample(model, prompt, config);
  EXPECT_EQ(first, sample(model, prompt, config));
  config.seed = 8;
  EXPECT_NE(first, sample(model, prompt, config));
}

TEST(Sample, BinomialFrequenciesWithinThreeSigma) {
  // two-token vocabulary with exact probabilities 0.8/0.2:
  // counts 8/2, discount 0.75: P(0) = 7.25/10 + (0.75*2/10)*(1/2) = 0.8
  PackedSequence s;
  for (int i = 0; i < 8; ++i) s.token_ids.push_back(0);
  for (int i = 0; i < 2; ++i) s.token_ids.push_back(1);
  const auto model = train_lm(std::vector<PackedSequence>{s}, 2, 0.75, 2);
  const auto dist = model.distribution({});
  ASSERT_NEAR(dist[0], 0.8, 1e-12);
  ASSERT_NEAR(dist[1], 0.2, 1e-12);

  SampleConfig config;
  config.temperature = 1.0;
  config.max_tokens = 1;
  config.num_samples = 10000;
  config.seed = 123;
  const auto samples = sample(model, {}, config);
  int zeros = 0;
  for (const auto& draw : samples) {
    ASSERT_EQ(draw.size(), 1u);
    zeros += draw[0] == 0;
  }
  const double sigma = std::sqrt(10000 * 0.8 * 0.2);  // 40
  EXPECT_NEAR(zeros, 8000.0, 3.0 * sigma);
}

TEST(Sample, TemperatureMonotonicallyRaisesEntropy) {
  // Property of the p^(1/T) transform, checked against an independent
  // entropy computation on random distributions.
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> unif(0.01, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p(8);
    double z = 0;
    for (auto& v : p) z += (v = unif(rng));
    for (auto& v : p) v /= z;
    double last_entropy = -1.0;
    for (const double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      std::vector<double> q(p.size());
      double qz = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        qz += (q[i] = std::pow(p[i], 1.0 / t));
      }
      double entropy = 0;
      for (auto& v : q) {
        v /= qz;
        entropy -= v * std::log(v);
      }
      EXPECT_GE(entropy, last_entropy - 1e-12);
      last_entropy = entropy;
    }
  }
}

TEST(ModelIo, SerializeParseRoundTrip) {
  const std::vector<PackedSequence> seqs{seq_of({kA, kB, kA, kA, kB}, 16)};
  const auto model = train_lm(seqs, 3, 0.6, 15, std::string(32, 'b'));
  TempDir tmp;
  save_model(model, tmp.path() / "lm.txt");
  const auto loaded = load_model(tmp.path() / "lm.txt");
  EXPECT_EQ(serialize_model(loaded), serialize_model(model));
  EXPECT_EQ(loaded.vocab_digest(), model.vocab_digest());
  const std::vector<int> ctx{kA};
  EXPECT_DOUBLE_EQ(loaded.prob(ctx, kB), model.prob(ctx, kB));
}

TEST(SignalExperiment, DependentCorpusShowsAlignmentSignal) {
  const auto data = make_synthetic_corpus(SyntheticSpec{});
  SignalParams params;
  params.pack_length = 128;
  const auto report = alignment_signal_experiment(
      data.aligned, data.shuffled, data.heldout, params, data.vocab_size);
  EXPECT_EQ(report.seeds_aligned_lower, 5);
  EXPECT_GT(report.mean_relative_delta, 0.05);
  for (const auto& r : report.per_seed) {
    EXPECT_LT(r.ppl_aligned, r.ppl_shuffled) << "seed " << r.seed;
  }
}

TEST(SignalExperiment, IndependentCorpusShowsNoSignal) {
  SyntheticSpec spec;
  spec.dependent = false;
  const auto data = make_synthetic_corpus(spec);
  SignalParams params;
  params.pack_length = 128;
  const auto report = alignment_signal_experiment(
      data.aligned, data.shuffled, data.heldout, params, data.vocab_size);
  EXPECT_LT(std::abs(report.mean_relative_delta), 0.02);
}

TEST(SignalExperiment, IdenticalCorporaGiveExactlyZeroDelta) {
  SyntheticSpec spec;
  spec.train_pairs = 40;
  spec.heldout_pairs = 10;
  const auto data = make_synthetic_corpus(spec);
  SignalParams params;
  params.pack_length = 128;
  const auto report = alignment_signal_experiment(
      data.aligned, data.aligned, data.heldout, params, data.vocab_size);
  for (const auto& r : report.per_seed) {
    EXPECT_EQ(r.ppl_aligned, r.ppl_shuffled);
    EXPECT_EQ(r.relative_delta, 0.0);
  }
}

TEST(SignalExperiment, UnequalFileSetsThrow) {
  SyntheticSpec spec;
  spec.train_pairs = 10;
  spec.heldout_pairs = 2;
  const auto data = make_synthetic_corpus(spec);
  auto truncated = data.shuffled;
  truncated.pop_back();
  EXPECT_THROW(
      alignment_signal_experiment(data.aligned, truncated, data.heldout,
                                  SignalParams{}, data.vocab_size),
      std::runtime_error);
}

}  // namespace
}  // namespace testpair
