// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/corpus.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace testpair {

std::string_view to_string(DocKind kind) {
  switch (kind) {
    case DocKind::Paired: return "paired";
    case DocKind::CodeOnly: return "code-only";
    case DocKind::TestOnly: return "test-only";
  }
  return "?";
}

std::vector<TrainingDocument> build_documents(
    std::span<const SourceFile> files, std::span<const CodeTestPair> pairs,
    const Vocabulary& vocab) {
  std::unordered_map<std::string, const SourceFile*> by_id;
  for (const auto& f : files) by_id.emplace(f.file_id, &f);

  std::unordered_set<std::string> paired_ids;
  std::vector<TrainingDocument> docs;
  docs.reserve(files.size());

  for (const auto& pair : pairs) {
    const auto code_it = by_id.find(pair.code_file_id);
    const auto test_it = by_id.find(pair.test_file_id);
    if (code_it == by_id.end() || test_it == by_id.end()) {
      throw std::runtime_error(fmt::format(
          "pair ({}, {}) references a file not in the corpus; pairs must be "
          "derived from the post-filter file set",
          pair.code_file_id, pair.test_file_id));
    }
    TrainingDocument doc;
    doc.kind = DocKind::Paired;
    doc.repo_id = code_it->second->repo_id;
    doc.code_file_id = pair.code_file_id;
    doc.test_file_id = pair.test_file_id;
    doc.token_ids = encode(vocab, code_it->second->content);
    doc.token_ids.push_back(Vocabulary::kSepId);
    const auto test_ids = encode(vocab, test_it->second->content);
    doc.token_ids.insert(doc.token_ids.end(), test_ids.begin(),
                         test_ids.end());
    docs.push_back(std::move(doc));
    paired_ids.insert(pair.code_file_id);
    paired_ids.insert(pair.test_file_id);
  }

  for (const auto& f : files) {
    if (paired_ids.contains(f.file_id)) continue;
    TrainingDocument doc;
    doc.kind = is_test_file(f) ? DocKind::TestOnly : DocKind::CodeOnly;
    doc.repo_id = f.repo_id;
    if (doc.kind == DocKind::TestOnly) {
      doc.test_file_id = f.file_id;
    } else {
      doc.code_file_id = f.file_id;
    }
    doc.token_ids = encode(vocab, f.content);
    docs.push_back(std::move(doc));
  }
  return docs;
}

double CorpusStats::fraction_within(std::size_t limit, bool paired_only) const {
  const auto& hist = paired_only ? paired_histogram : length_histogram;
  std::size_t total = 0;
  std::size_t within = 0;
  for (const auto& [len, count] : hist) {
    total += count;
    if (len <= limit) within += count;
  }
  if (total == 0) return 0.0;
  return static_cast<double>(within) / static_cast<double>(total);
}

std::size_t CorpusStats::total_docs() const {
  std::size_t n = 0;
  for (const auto& [len, count] : length_histogram) n += count;
  return n;
}

std::size_t CorpusStats::paired_docs() const {
  std::size_t n = 0;
  for (const auto& [len, count] : paired_histogram) n += count;
  return n;
}

CorpusStats compute_stats(std::span<const TrainingDocument> docs) {
  CorpusStats stats;
  for (const auto& doc : docs) {
    ++stats.length_histogram[doc.token_ids.size()];
    if (doc.kind == DocKind::Paired) {
      ++stats.paired_histogram[doc.token_ids.size()];
    }
    ++stats.kind_counts[std::string{to_string(doc.kind)}];
  }
  return stats;
}

std::vector<PackedSequence> pack_sequences(
    std::span<const TrainingDocument> docs, std::size_t L,
    std::uint64_t seed) {
  if (L == 0) throw std::invalid_argument("sequence length L must be > 0");

  std::vector<std::size_t> order(docs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<PackedSequence> seqs;
  PackedSequence cur;
  cur.token_ids.reserve(L);
  auto flush = [&] {
    seqs.push_back(std::move(cur));
    cur = PackedSequence{};
    cur.token_ids.reserve(L);
  };
  auto push = [&](int id) {
    cur.token_ids.push_back(id);
    if (cur.token_ids.size() == L) flush();
  };

  for (const std::size_t di : order) {
    cur.doc_boundary_offsets.push_back(cur.token_ids.size());
    for (const int id : docs[di].token_ids) push(id);
    push(Vocabulary::kEosId);
  }
  if (!cur.token_ids.empty()) {
    cur.token_ids.resize(L, Vocabulary::kPadId);
    seqs.push_back(std::move(cur));
  }
  return seqs;
}

namespace {

constexpr char kCorpusMagic[8] = {'T', 'P', 'C', 'O', 'R', 'P', 'U', 'S'};
constexpr std::uint32_t kCorpusVersion = 1;

template <typename T>
void write_le(std::ofstream& out, T value) {
  char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) &
                               0xFF);
  }
  out.write(buf, sizeof(T));
}

template <typename T>
T read_le(std::ifstream& in) {
  char buf[sizeof(T)];
  in.read(buf, sizeof(T));
  if (!in) throw std::runtime_error("truncated corpus file");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf[i]))
         << (8 * i);
  }
  return static_cast<T>(v);
}

}  // namespace

void write_packed_corpus(const std::filesystem::path& path,
                         std::span<const PackedSequence> seqs,
                         const std::string& vocab_digest, std::size_t L) {
  if (vocab_digest.size() != 32) {
    throw std::invalid_argument("vocab digest must be 32 hex chars");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write corpus: " + path.string());
  out.write(kCorpusMagic, sizeof(kCorpusMagic));
  write_le<std::uint32_t>(out, kCorpusVersion);
  write_le<std::uint32_t>(out, static_cast<std::uint32_t>(L));
  out.write(vocab_digest.data(), 32);
  write_le<std::uint64_t>(out, seqs.size());

  std::vector<std::uint64_t> doc_offsets;
  std::uint64_t pos = 0;
  for (const auto& seq : seqs) {
    for (const auto off : seq.doc_boundary_offsets) {
      doc_offsets.push_back(pos + off);
    }
    for (const int id : seq.token_ids) {
      write_le<std::uint32_t>(out, static_cast<std::uint32_t>(id));
    }
    pos += seq.token_ids.size();
  }
  write_le<std::uint64_t>(out, doc_offsets.size());
  for (const auto off : doc_offsets) write_le<std::uint64_t>(out, off);
  out.write(kCorpusMagic, sizeof(kCorpusMagic));
  if (!out) throw std::runtime_error("short write: " + path.string());
}

PackedCorpus read_packed_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read corpus: " + path.string());
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCorpusMagic, 8) != 0) {
    throw std::runtime_error("not a packed corpus file: " + path.string());
  }
  const auto version = read_le<std::uint32_t>(in);
  if (version != kCorpusVersion) {
    throw std::runtime_error(
        fmt::format("unsupported corpus version {}", version));
  }
  PackedCorpus corpus;
  corpus.L = read_le<std::uint32_t>(in);
  char digest[32];
  in.read(digest, 32);
  if (!in) throw std::runtime_error("truncated corpus header");
  corpus.vocab_digest.assign(digest, 32);
  const auto seq_count = read_le<std::uint64_t>(in);
  corpus.sequences.resize(seq_count);
  for (auto& seq : corpus.sequences) {
    seq.token_ids.resize(corpus.L);
    for (auto& id : seq.token_ids) {
      id = static_cast<int>(read_le<std::uint32_t>(in));
    }
  }
  const auto doc_count = read_le<std::uint64_t>(in);
  for (std::uint64_t i = 0; i < doc_count; ++i) {
    const auto global = read_le<std::uint64_t>(in);
    const auto si = global / corpus.L;
    if (si < corpus.sequences.size()) {
      corpus.sequences[si].doc_boundary_offsets.push_back(global % corpus.L);
    }
  }
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kCorpusMagic, 8) != 0) {
    throw std::runtime_error("corrupt corpus footer: " + path.string());
  }
  return corpus;
}

}  // namespace testpair
