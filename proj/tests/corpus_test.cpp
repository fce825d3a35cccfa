// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/corpus.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>

#include "testutil.hpp"

namespace testpair {
namespace {

using testing::TempDir;
using testing::make_file;

Vocabulary small_vocab() {
  std::vector<SourceFile> corpus{
      make_file("r", "seed.py", Lang::Python,
                "def f():\n    return 1\n\ndef g():\n    return 2\n")};
  return train_vocab(corpus, TrainVocabConfig{.target_size = 290});
}

TEST(BuildDocuments, PairPlusUnpairedFile) {
  const auto vocab = small_vocab();
  std::vector<SourceFile> files{
      make_file("r", "foo.py", Lang::Python, "def foo():\n    return 1\n"),
      make_file("r", "test_foo.py", Lang::Python,
                "def test_foo():\n    assert foo() == 1\n"),
      make_file("r", "lonely.py", Lang::Python, "x = 3\n"),
  };
  std::vector<CodeTestPair> pairs{
      {"r/foo.py", "r/test_foo.py", MatchKind::ExactPattern, 1.0}};
  const auto docs = build_documents(files, pairs, vocab);
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].kind, DocKind::Paired);
  EXPECT_EQ(docs[1].kind, DocKind::CodeOnly);
  EXPECT_EQ(docs[1].code_file_id, "r/lonely.py");
}

TEST(BuildDocuments, PairedDocDecodesToCodeSepTest) {
  const auto vocab = small_vocab();
  const std::string code = "def foo():\n    return 1\n";
  const std::string test = "def test_foo():\n    assert foo() == 1\n";
  std::vector<SourceFile> files{
      make_file("r", "foo.py", Lang::Python, code),
      make_file("r", "test_foo.py", Lang::Python, test)};
  std::vector<CodeTestPair> pairs{
      {"r/foo.py", "r/test_foo.py", MatchKind::ExactPattern, 1.0}};
  const auto docs = build_documents(files, pairs, vocab);
  ASSERT_EQ(docs.size(), 1u);
  EXPECT_EQ(decode(vocab, docs[0].token_ids),
            code + std::string{Vocabulary::kSepText} + test);

  // order property: exactly one separator; code strictly before, test after
  const auto sep_it = std::find(docs[0].token_ids.begin(),
                                docs[0].token_ids.end(), Vocabulary::kSepId);
  ASSERT_NE(sep_it, docs[0].token_ids.end());
  EXPECT_EQ(std::count(docs[0].token_ids.begin(), docs[0].token_ids.end(),
                       Vocabulary::kSepId),
            1);
  const auto sep_pos =
      static_cast<std::size_t>(sep_it - docs[0].token_ids.begin());
  EXPECT_EQ(sep_pos, encode(vocab, code).size());
}

TEST(BuildDocuments, TokenTotalsArithmetic) {
  const auto vocab = small_vocab();
  std::vector<SourceFile> files;
  for (int i = 0; i < 8; ++i) {
    const bool is_test = i % 2 == 1;
    const std::string name = is_test ? "test_m" + std::to_string(i / 2) + ".py"
                                     : "m" + std::to_string(i / 2) + ".py";
    files.push_back(make_file("r", name, Lang::Python,
                              "value_" + std::to_string(i) + " = " +
                                  std::to_string(i) + "\n"));
  }
  std::vector<CodeTestPair> pairs;
  for (int p = 0; p < 3; ++p) {
    pairs.push_back({"r/m" + std::to_string(p) + ".py",
                     "r/test_m" + std::to_string(p) + ".py",
                     MatchKind::ExactPattern, 1.0});
  }
  const auto docs = build_documents(files, pairs, vocab);
  EXPECT_EQ(docs.size(), 5u);  // 3 pairs + 2 unpaired

  std::size_t per_file_total = 0;
  for (const auto& f : files) per_file_total += encode(vocab, f.content).size();
  std::size_t doc_total = 0;
  for (const auto& d : docs) doc_total += d.token_ids.size();
  EXPECT_EQ(doc_total, per_file_total + 3u);  // one separator per pair
}

TEST(BuildDocuments, PairReferencingMissingFileThrows) {
  const auto vocab = small_vocab();
  std::vector<SourceFile> files{
      make_file("r", "foo.py", Lang::Python, "x = 1\n")};
  std::vector<CodeTestPair> pairs{
      {"r/foo.py", "r/test_foo.py", MatchKind::ExactPattern, 1.0}};
  EXPECT_THROW(build_documents(files, pairs, vocab), std::runtime_error);
}

TrainingDocument doc_of(std::size_t tokens, DocKind kind) {
  TrainingDocument d;
  d.kind = kind;
  d.token_ids.assign(tokens, Vocabulary::kByteBase + 'x');
  d.repo_id = "r";
  return d;
}

TEST(ComputeStats, FractionWithinDirectCounts) {
  {
    const std::vector<TrainingDocument> docs{doc_of(100, DocKind::Paired)};
    const auto stats = compute_stats(docs);
    EXPECT_DOUBLE_EQ(stats.fraction_within(2048, true), 1.0);
  }
  const std::vector<TrainingDocument> docs{doc_of(1000, DocKind::Paired),
                                           doc_of(3000, DocKind::Paired),
                                           doc_of(9000, DocKind::Paired)};
  const auto stats = compute_stats(docs);
  EXPECT_NEAR(stats.fraction_within(2048, true), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(stats.fraction_within(8192, true), 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(stats.fraction_within(SIZE_MAX, true), 1.0);
}

TEST(ComputeStats, PermutationInvariant) {
  std::vector<TrainingDocument> docs;
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> len(1, 500);
  for (int i = 0; i < 50; ++i) {
    docs.push_back(doc_of(len(rng), i % 3 == 0 ? DocKind::Paired
                                               : DocKind::CodeOnly));
  }
  const auto a = compute_stats(docs);
  std::shuffle(docs.begin(), docs.end(), rng);
  const auto b = compute_stats(docs);
  EXPECT_EQ(a.length_histogram, b.length_histogram);
  EXPECT_EQ(a.paired_histogram, b.paired_histogram);
  EXPECT_EQ(a.kind_counts, b.kind_counts);
}

TEST(PackSequences, TenTokenDocAtLengthFour) {
  const std::vector<TrainingDocument> docs{doc_of(10, DocKind::CodeOnly)};
  const auto seqs = pack_sequences(docs, 4, 1);
  ASSERT_EQ(seqs.size(), 3u);  // 10 tokens + EOS = 11 -> 4+4+3(+1 pad)
  for (const auto& s : seqs) EXPECT_EQ(s.token_ids.size(), 4u);
  std::map<int, int> counts;
  for (const auto& s : seqs) {
    for (const int id : s.token_ids) ++counts[id];
  }
  EXPECT_EQ(counts[Vocabulary::kByteBase + 'x'], 10);
  EXPECT_EQ(counts[Vocabulary::kEosId], 1);
  EXPECT_EQ(counts[Vocabulary::kPadId], 1);
  // PAD only in the final sequence
  for (std::size_t i = 0; i + 1 < seqs.size(); ++i) {
    for (const int id : seqs[i].token_ids) {
      EXPECT_NE(id, Vocabulary::kPadId);
    }
  }
}

TEST(PackSequences, DeterministicUnderSeedAndSeedSensitive) {
  std::vector<TrainingDocument> docs;
  for (int i = 0; i < 40; ++i) {
    docs.push_back(doc_of(static_cast<std::size_t>(5 + i % 17),
                          DocKind::CodeOnly));
    docs.back().token_ids.front() = Vocabulary::kByteBase + (i % 200);
  }
  const auto a = pack_sequences(docs, 16, 9);
  const auto b = pack_sequences(docs, 16, 9);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].token_ids, b[i].token_ids);
    EXPECT_EQ(a[i].doc_boundary_offsets, b[i].doc_boundary_offsets);
  }
  const auto c = pack_sequences(docs, 16, 10);
  bool any_diff = false;
  for (std::size_t i = 0; i < std::min(a.size(), c.size()); ++i) {
    any_diff |= a[i].token_ids != c[i].token_ids;
  }
  EXPECT_TRUE(any_diff);
}

TEST(PackSequences, TokenConservation) {
  std::mt19937_64 rng(17);
  std::vector<TrainingDocument> docs;
  std::size_t total = 0;
  std::uniform_int_distribution<std::size_t> len(1, 900);
  for (int i = 0; i < 25; ++i) {
    const auto n = len(rng);
    docs.push_back(doc_of(n, DocKind::CodeOnly));
    total += n;
  }
  const auto seqs = pack_sequences(docs, 512, 4);
  std::size_t non_pad = 0;
  std::size_t eos = 0;
  for (const auto& s : seqs) {
    EXPECT_EQ(s.token_ids.size(), 512u);
    for (const int id : s.token_ids) {
      non_pad += id != Vocabulary::kPadId;
      eos += id == Vocabulary::kEosId;
    }
  }
  EXPECT_EQ(eos, docs.size());
  EXPECT_EQ(non_pad, total + docs.size());
}

TEST(PackSequences, BoundaryOffsetsMarkDocStarts) {
  const std::vector<TrainingDocument> docs{doc_of(3, DocKind::CodeOnly),
                                           doc_of(2, DocKind::CodeOnly)};
  const auto seqs = pack_sequences(docs, 16, 0);
  ASSERT_EQ(seqs.size(), 1u);
  ASSERT_EQ(seqs[0].doc_boundary_offsets.size(), 2u);
  EXPECT_EQ(seqs[0].doc_boundary_offsets[0], 0u);
  // second doc starts after first doc + its EOS
  const auto second = seqs[0].doc_boundary_offsets[1];
  EXPECT_TRUE(second == 3 || second == 4) << second;  // order is shuffled
}

TEST(PackedCorpusIo, RoundTripAndValidation) {
  TempDir tmp;
  std::vector<TrainingDocument> docs{doc_of(100, DocKind::Paired),
                                     doc_of(7, DocKind::TestOnly)};
  const auto seqs = pack_sequences(docs, 64, 2);
  const std::string digest(32, 'a');
  const auto path = tmp.path() / "corpus.bin";
  write_packed_corpus(path, seqs, digest, 64);
  const auto loaded = read_packed_corpus(path);
  EXPECT_EQ(loaded.L, 64u);
  EXPECT_EQ(loaded.vocab_digest, digest);
  ASSERT_EQ(loaded.sequences.size(), seqs.size());
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    EXPECT_EQ(loaded.sequences[i].token_ids, seqs[i].token_ids);
    EXPECT_EQ(loaded.sequences[i].doc_boundary_offsets,
              seqs[i].doc_boundary_offsets);
  }
  // corrupt the magic
  auto bytes = *read_file_bytes(path);
  bytes[0] = 'X';
  write_file_bytes(path, bytes);
  EXPECT_THROW(read_packed_corpus(path), std::runtime_error);
}

}  // namespace
}  // namespace testpair
