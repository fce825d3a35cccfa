// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "testpair/types.hpp"

namespace testpair {

// Byte-level BPE vocabulary with byte fallback: every byte sequence is
// encodable. Id layout is fixed: specials 0..3, the 256 single-byte pieces
// at 4..259, merge results from 260 upward in training order. Specials are
// atomic — encoding raw text can never produce them, even when the text
// contains a special's rendering literally (those bytes go through the
// byte/merge pieces like any other input).
class Vocabulary {
 public:
  static constexpr int kPadId = 0;
  static constexpr int kBosId = 1;
  static constexpr int kEosId = 2;
  static constexpr int kSepId = 3;
  static constexpr int kNumSpecials = 4;
  static constexpr int kByteBase = kNumSpecials;
  static constexpr int kMergeBase = kByteBase + 256;

  static constexpr std::string_view kPadText = "<|pad|>";
  static constexpr std::string_view kBosText = "<|bos|>";
  static constexpr std::string_view kEosText = "<|eos|>";
  static constexpr std::string_view kSepText = "<|codetestpair|>";

  struct Merge {
    int left = 0;
    int right = 0;
  };

  Vocabulary() = default;
  explicit Vocabulary(std::vector<Merge> merges);

  int size() const { return kMergeBase + static_cast<int>(merges_.size()); }
  const std::vector<Merge>& merges() const { return merges_; }

  // Bytes the piece decodes to; specials decode to their rendering.
  const std::string& piece(int id) const;

  // Merged id for an adjacent pair, or -1. Rank order equals training order.
  int merge_result(int left, int right) const;
  int merge_rank(int merged_id) const { return merged_id - kMergeBase; }

  std::string digest() const;

 private:
  std::vector<Merge> merges_;
  std::vector<std::string> pieces_;                  // indexed by id
  std::unordered_map<std::uint64_t, int> pair_map_;  // (l,r) -> merged id
};

struct TrainVocabConfig {
  // Total subword inventory (256 byte pieces + merges); the 4 specials ride
  // on top of this budget. Must exceed the byte-alphabet floor of 256.
  int target_size = 64000;
  int lines_per_file = 10;
  std::uint64_t seed = 0;
  std::uint64_t max_sample_bytes = 0;  // 0 = unlimited
};

// Greedy byte-pair-merge training over lines sampled from each file
// (lines_per_file random lines, seeded). Merging stops when the inventory
// reaches target_size or no adjacent pair occurs at least twice. Ties on
// pair count break toward the smaller (left, right) id pair, so training is
// deterministic under a fixed seed. Throws on an empty corpus or a
// target_size at or below the byte floor.
Vocabulary train_vocab(std::span<const SourceFile> files,
                       const TrainVocabConfig& config);

// Greedy merge encoding: repeatedly applies the lowest-rank applicable merge
// until none applies. Token count never exceeds the byte count.
std::vector<int> encode(const Vocabulary& vocab, std::string_view text);

// Inverse of encode for raw text; also renders special ids. Throws
// std::out_of_range on an id outside the vocabulary.
std::string decode(const Vocabulary& vocab, std::span<const int> ids);

// Versioned text format: header (version, specials with renderings, merge
// count), the merge table, then one escaped piece per line for every id.
std::string serialize_vocab(const Vocabulary& vocab);
Vocabulary parse_vocab(std::string_view text);

void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocab(const std::filesystem::path& path);

}  // namespace testpair
