// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "testpair/align.hpp"
#include "testpair/tokenizer.hpp"
#include "testpair/types.hpp"

namespace testpair {

enum class DocKind { Paired, CodeOnly, TestOnly };

std::string_view to_string(DocKind kind);

struct TrainingDocument {
  DocKind kind = DocKind::CodeOnly;
  std::vector<int> token_ids;
  std::string repo_id;
  std::optional<std::string> code_file_id;
  std::optional<std::string> test_file_id;
};

// One Paired document per pair (code tokens, the separator, test tokens —
// code always first), one CodeOnly/TestOnly document per unpaired file.
// Throws when a pair references a file missing from `files` (pipeline
// ordering violation: pairs must come from the post-filter file set).
std::vector<TrainingDocument> build_documents(
    std::span<const SourceFile> files, std::span<const CodeTestPair> pairs,
    const Vocabulary& vocab);

struct CorpusStats {
  std::map<std::size_t, std::size_t> length_histogram;  // all docs
  std::map<std::size_t, std::size_t> paired_histogram;  // Paired docs only
  std::map<std::string, std::size_t> kind_counts;

  // Fraction of documents with token length <= limit; monotone in limit and
  // 1 for limit = SIZE_MAX. `paired` restricts to Paired documents.
  double fraction_within(std::size_t limit, bool paired_only = false) const;
  std::size_t total_docs() const;
  std::size_t paired_docs() const;
};

CorpusStats compute_stats(std::span<const TrainingDocument> docs);

struct PackedSequence {
  std::vector<int> token_ids;                    // length exactly L
  std::vector<std::size_t> doc_boundary_offsets;  // doc starts within this seq
};

// Shuffles documents by seed, concatenates them with one EOS after each
// document, and windows the stream into length-L sequences; only the final
// sequence may carry PAD fill. Where a long document gets split is decided
// by its seeded shuffle position, so chunk offsets vary with the seed while
// the non-PAD token multiset is conserved exactly.
std::vector<PackedSequence> pack_sequences(
    std::span<const TrainingDocument> docs, std::size_t L, std::uint64_t seed);

// Binary corpus: versioned header (vocabulary digest, L), little-endian
// 32-bit token ids, and a footer index of document start offsets within the
// token stream.
void write_packed_corpus(const std::filesystem::path& path,
                         std::span<const PackedSequence> seqs,
                         const std::string& vocab_digest, std::size_t L);

struct PackedCorpus {
  std::vector<PackedSequence> sequences;
  std::string vocab_digest;
  std::size_t L = 0;
};

PackedCorpus read_packed_corpus(const std::filesystem::path& path);

}  // namespace testpair
