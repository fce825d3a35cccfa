// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/tokenizer.hpp"

#include <gtest/gtest.h>

#include <random>

#include "testpair/ingest.hpp"
#include "testutil.hpp"

namespace testpair {
namespace {

using testing::fixture_dir;
using testing::make_file;
using testing::random_utf8;

std::vector<SourceFile> tiny_corpus(const std::string& line, int files = 4,
                                    int lines = 10) {
  std::vector<SourceFile> out;
  for (int f = 0; f < files; ++f) {
    std::string content;
    for (int l = 0; l < lines; ++l) content += line + "\n";
    out.push_back(make_file("r", "f" + std::to_string(f) + ".py",
                            Lang::Python, content));
  }
  return out;
}

TEST(TrainVocab, HandRunBpeOnAbab) {
  TrainVocabConfig config;
  config.target_size = 260;
  const auto vocab = train_vocab(tiny_corpus("abab"), config);
  // "ab" dominates pair counts (2 per line vs 1 for "ba"), so the first
  // merge is (a, b); the second merges (ab, ab); then no pair repeats
  // within a line.
  ASSERT_GE(vocab.merges().size(), 1u);
  const int a = Vocabulary::kByteBase + 'a';
  const int b = Vocabulary::kByteBase + 'b';
  EXPECT_EQ(vocab.merges()[0].left, a);
  EXPECT_EQ(vocab.merges()[0].right, b);
  EXPECT_EQ(vocab.piece(Vocabulary::kMergeBase), "ab");
  ASSERT_EQ(vocab.merges().size(), 2u);
  EXPECT_EQ(vocab.piece(Vocabulary::kMergeBase + 1), "abab");
}

TEST(TrainVocab, TargetBelowByteFloorThrows) {
  EXPECT_THROW(
      train_vocab(tiny_corpus("ab"), TrainVocabConfig{.target_size = 256}),
      std::invalid_argument);
  EXPECT_THROW(
      train_vocab(tiny_corpus("ab"), TrainVocabConfig{.target_size = 100}),
      std::invalid_argument);
}

TEST(TrainVocab, EmptyCorpusThrows) {
  EXPECT_THROW(train_vocab({}, TrainVocabConfig{.target_size = 300}),
               std::runtime_error);
  const std::vector<SourceFile> empty_files{
      make_file("r", "empty.py", Lang::Python, "")};
  EXPECT_THROW(train_vocab(empty_files, TrainVocabConfig{.target_size = 300}),
               std::runtime_error);
}

TEST(TrainVocab, DeterministicUnderSeed) {
  const auto scans = scan_repositories(fixture_dir() / "tree", IngestConfig{});
  std::vector<SourceFile> files;
  for (const auto& scan : scans) {
    files.insert(files.end(), scan.files.begin(), scan.files.end());
  }
  TrainVocabConfig config;
  config.target_size = 400;
  config.seed = 99;
  const auto v1 = train_vocab(files, config);
  const auto v2 = train_vocab(files, config);
  EXPECT_EQ(serialize_vocab(v1), serialize_vocab(v2));
  EXPECT_EQ(v1.digest(), v2.digest());

  config.seed = 100;
  const auto v3 = train_vocab(files, config);
  EXPECT_NE(serialize_vocab(v1), serialize_vocab(v3))
      << "different line sample should change at least one merge";
}

TEST(EncodeDecode, EmptyAndRoundTrip) {
  const auto vocab = train_vocab(tiny_corpus("hello world"),
                                 TrainVocabConfig{.target_size = 300});
  EXPECT_TRUE(encode(vocab, "").empty());
  EXPECT_EQ(decode(vocab, std::vector<int>{}), "");
  for (const std::string text :
       {"hello world", "hello", "wold", "completely unrelated bytes \x01\x02",
        "\xEF\xBF\xBDmixed"}) {
    const auto ids = encode(vocab, text);
    EXPECT_EQ(decode(vocab, ids), text);
    EXPECT_LE(ids.size(), text.size()) << "compression sanity";
  }
}

TEST(EncodeDecode, RandomUtf8RoundTripNoSpecialLeakage) {
  const auto vocab = train_vocab(tiny_corpus("def test_x(): return 1"),
                                 TrainVocabConfig{.target_size = 320});
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto text = random_utf8(rng, 40);
    const auto ids = encode(vocab, text);
    EXPECT_EQ(decode(vocab, ids), text);
    for (const int id : ids) {
      EXPECT_GE(id, Vocabulary::kNumSpecials);
    }
  }
}

TEST(EncodeDecode, SeparatorRenderingIsNotSpecialInRawText) {
  const auto vocab =
      train_vocab(tiny_corpus("plain"), TrainVocabConfig{.target_size = 280});
  const std::string text = "before <|codetestpair|> after";
  const auto ids = encode(vocab, text);
  for (const int id : ids) EXPECT_NE(id, Vocabulary::kSepId);
  EXPECT_EQ(decode(vocab, ids), text);
}

TEST(EncodeDecode, OutOfRangeIdThrows) {
  const auto vocab =
      train_vocab(tiny_corpus("x"), TrainVocabConfig{.target_size = 257});
  EXPECT_THROW(decode(vocab, std::vector<int>{vocab.size()}),
               std::out_of_range);
  EXPECT_THROW(decode(vocab, std::vector<int>{-1}), std::out_of_range);
}

// Naive reference encoder: same lowest-rank-first merge rule, recomputed
// from scratch at every step.
std::vector<int> reference_encode(const Vocabulary& vocab,
                                  std::string_view text) {
  std::vector<int> ids;
  for (const char c : text) {
    ids.push_back(Vocabulary::kByteBase + static_cast<unsigned char>(c));
  }
  while (true) {
    int best_rank = INT_MAX;
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
      for (std::size_t r = 0; r < vocab.merges().size(); ++r) {
        const auto& m = vocab.merges()[r];
        if (ids[i] == m.left && ids[i + 1] == m.right) {
          best_rank = std::min(best_rank, static_cast<int>(r));
        }
      }
    }
    if (best_rank == INT_MAX) break;
    const auto& m = vocab.merges()[static_cast<std::size_t>(best_rank)];
    std::vector<int> next;
    for (std::size_t i = 0; i < ids.size();) {
      if (i + 1 < ids.size() && ids[i] == m.left && ids[i + 1] == m.right) {
        next.push_back(Vocabulary::kMergeBase + best_rank);
        i += 2;
      } else {
        next.push_back(ids[i]);
        ++i;
      }
    }
    ids = std::move(next);
  }
  return ids;
}

TEST(EncodeDecode, AgreesWithReferenceBpeOnFixtureCorpus) {
  const auto scans = scan_repositories(fixture_dir() / "tree", IngestConfig{});
  std::vector<SourceFile> files;
  for (const auto& scan : scans) {
    files.insert(files.end(), scan.files.begin(), scan.files.end());
  }
  const auto vocab =
      train_vocab(files, TrainVocabConfig{.target_size = 380, .seed = 3});
  std::size_t production_total = 0;
  std::size_t reference_total = 0;
  for (const auto& f : files) {
    const auto got = encode(vocab, f.content);
    const auto want = reference_encode(vocab, f.content);
    EXPECT_EQ(got, want) << f.file_id;
    production_total += got.size();
    reference_total += want.size();
  }
  EXPECT_EQ(production_total, reference_total);
  EXPECT_GT(production_total, 0u);
}

TEST(VocabIo, SerializeParseRoundTrip) {
  const auto vocab = train_vocab(tiny_corpus("serialize me please"),
                                 TrainVocabConfig{.target_size = 300});
  const auto text = serialize_vocab(vocab);
  const auto reloaded = parse_vocab(text);
  EXPECT_EQ(serialize_vocab(reloaded), text);
  EXPECT_EQ(reloaded.digest(), vocab.digest());
  EXPECT_EQ(reloaded.size(), vocab.size());
  const auto ids = encode(vocab, "serialize me");
  EXPECT_EQ(encode(reloaded, "serialize me"), ids);
}

TEST(VocabIo, RejectsCorruptFiles) {
  EXPECT_THROW(parse_vocab("not a vocab"), std::runtime_error);
  const auto vocab =
      train_vocab(tiny_corpus("abc"), TrainVocabConfig{.target_size = 280});
  auto text = serialize_vocab(vocab);
  text.resize(text.size() / 2);
  EXPECT_THROW(parse_vocab(text), std::runtime_error);
}

}  // namespace
}  // namespace testpair
