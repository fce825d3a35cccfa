// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/tokenizer.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>

#include "testpair/digest.hpp"
#include "testpair/util.hpp"

namespace testpair {

namespace {

std::uint64_t pair_key(int left, int right) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(left)) << 32) |
         static_cast<std::uint32_t>(right);
}

std::string escape_piece(std::string_view piece) {
  std::string out;
  for (const char c : piece) {
    const auto b = static_cast<unsigned char>(c);
    if (b >= 0x21 && b <= 0x7E && b != '\\') {
      out.push_back(c);
    } else {
      out += fmt::format("\\x{:02x}", b);
    }
  }
  return out;
}

std::string unescape_piece(std::string_view text) {
  std::string out;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] == '\\' && i + 3 < text.size() && text[i + 1] == 'x') {
      out.push_back(static_cast<char>(
          std::stoi(std::string{text.substr(i + 2, 2)}, nullptr, 16)));
      i += 4;
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace

Vocabulary::Vocabulary(std::vector<Merge> merges) : merges_(std::move(merges)) {
  pieces_.resize(static_cast<std::size_t>(size()));
  pieces_[kPadId] = kPadText;
  pieces_[kBosId] = kBosText;
  pieces_[kEosId] = kEosText;
  pieces_[kSepId] = kSepText;
  for (int b = 0; b < 256; ++b) {
    pieces_[static_cast<std::size_t>(kByteBase + b)] =
        std::string(1, static_cast<char>(b));
  }
  for (std::size_t r = 0; r < merges_.size(); ++r) {
    const auto& m = merges_[r];
    const int id = kMergeBase + static_cast<int>(r);
    if (m.left < kByteBase || m.left >= id || m.right < kByteBase ||
        m.right >= id) {
      throw std::invalid_argument("merge references an invalid piece id");
    }
    pieces_[static_cast<std::size_t>(id)] =
        pieces_[static_cast<std::size_t>(m.left)] +
        pieces_[static_cast<std::size_t>(m.right)];
    pair_map_.emplace(pair_key(m.left, m.right), id);
  }
}

const std::string& Vocabulary::piece(int id) const {
  if (id < 0 || id >= size()) {
    throw std::out_of_range(fmt::format("token id {} outside vocabulary of {}",
                                        id, size()));
  }
  return pieces_[static_cast<std::size_t>(id)];
}

int Vocabulary::merge_result(int left, int right) const {
  const auto it = pair_map_.find(pair_key(left, right));
  return it == pair_map_.end() ? -1 : it->second;
}

std::string Vocabulary::digest() const { return md5_hex(serialize_vocab(*this)); }

namespace {

struct PairCounts {
  std::unordered_map<std::uint64_t, std::int64_t> counts;
  std::vector<std::uint64_t> dirty;

  void add(int a, int b, std::int64_t delta) {
    const auto key = pair_key(a, b);
    counts[key] += delta;
    dirty.push_back(key);
  }
};

void count_all_pairs(const std::vector<int>& seq, PairCounts& pc,
                     std::int64_t sign) {
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    pc.add(seq[i], seq[i + 1], sign);
  }
}

// Heap entry ordering: higher count wins, then the smaller (left, right).
struct HeapEntry {
  std::int64_t count;
  std::uint64_t key;
  bool operator<(const HeapEntry& o) const {
    if (count != o.count) return count < o.count;
    return key > o.key;
  }
};

}  // namespace

Vocabulary train_vocab(std::span<const SourceFile> files,
                       const TrainVocabConfig& config) {
  if (config.target_size <= 256) {
    throw std::invalid_argument(fmt::format(
        "target_size {} is at or below the byte-alphabet floor of 256",
        config.target_size));
  }
  if (files.empty()) throw std::runtime_error("tokenizer corpus is empty");

  // Deterministic file order, then seeded per-file line sampling.
  std::vector<std::size_t> order(files.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return files[a].file_id < files[b].file_id;
  });

  std::mt19937_64 rng(config.seed);
  std::vector<std::vector<int>> seqs;
  std::uint64_t sampled_bytes = 0;
  for (const std::size_t fi : order) {
    if (config.max_sample_bytes != 0 &&
        sampled_bytes >= config.max_sample_bytes) {
      break;
    }
    const auto all_lines = split_lines(files[fi].content);
    std::vector<std::string_view> lines;
    if (std::cmp_less_equal(all_lines.size(), config.lines_per_file)) {
      lines.assign(all_lines.begin(), all_lines.end());
    } else {
      std::sample(all_lines.begin(), all_lines.end(),
                  std::back_inserter(lines),
                  static_cast<std::size_t>(config.lines_per_file), rng);
    }
    for (const auto line : lines) {
      if (line.empty()) continue;
      std::vector<int> seq;
      seq.reserve(line.size());
      for (const char c : line) {
        seq.push_back(Vocabulary::kByteBase +
                      static_cast<unsigned char>(c));
      }
      sampled_bytes += line.size();
      seqs.push_back(std::move(seq));
    }
  }
  if (seqs.empty()) throw std::runtime_error("tokenizer corpus is empty");

  PairCounts pc;
  for (const auto& seq : seqs) count_all_pairs(seq, pc, +1);

  std::priority_queue<HeapEntry> heap;
  for (const auto& [key, count] : pc.counts) heap.push({count, key});

  std::vector<Vocabulary::Merge> merges;
  const int max_merges = config.target_size - 256;
  while (static_cast<int>(merges.size()) < max_merges) {
    // Pop until a live entry surfaces (lazy deletion of stale counts).
    std::uint64_t best_key = 0;
    std::int64_t best_count = 0;
    while (!heap.empty()) {
      const HeapEntry top = heap.top();
      heap.pop();
      const auto it = pc.counts.find(top.key);
      if (it == pc.counts.end() || it->second != top.count) continue;
      best_key = top.key;
      best_count = top.count;
      break;
    }
    if (best_count < 2) break;

    const int left = static_cast<int>(best_key >> 32);
    const int right = static_cast<int>(best_key & 0xFFFFFFFFu);
    const int merged =
        Vocabulary::kMergeBase + static_cast<int>(merges.size());
    merges.push_back({left, right});

    for (auto& seq : seqs) {
      bool contains = false;
      for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
        if (seq[i] == left && seq[i + 1] == right) {
          contains = true;
          break;
        }
      }
      if (!contains) continue;
      count_all_pairs(seq, pc, -1);
      std::vector<int> out;
      out.reserve(seq.size());
      for (std::size_t i = 0; i < seq.size();) {
        if (i + 1 < seq.size() && seq[i] == left && seq[i + 1] == right) {
          out.push_back(merged);
          i += 2;
        } else {
          out.push_back(seq[i]);
          ++i;
        }
      }
      seq = std::move(out);
      count_all_pairs(seq, pc, +1);
    }
    for (const auto key : pc.dirty) {
      const auto it = pc.counts.find(key);
      if (it != pc.counts.end() && it->second > 0) {
        heap.push({it->second, key});
      }
    }
    pc.dirty.clear();
  }
  return Vocabulary{std::move(merges)};
}

std::vector<int> encode(const Vocabulary& vocab, std::string_view text) {
  std::vector<int> ids;
  ids.reserve(text.size());
  for (const char c : text) {
    ids.push_back(Vocabulary::kByteBase + static_cast<unsigned char>(c));
  }
  if (ids.size() < 2) return ids;
  while (true) {
    int best_rank = -1;
    int best_merged = -1;
    for (std::size_t i = 0; i + 1 < ids.size(); ++i) {
      const int merged = vocab.merge_result(ids[i], ids[i + 1]);
      if (merged < 0) continue;
      const int rank = vocab.merge_rank(merged);
      if (best_rank < 0 || rank < best_rank) {
        best_rank = rank;
        best_merged = merged;
      }
    }
    if (best_rank < 0) break;
    const auto& m = vocab.merges()[static_cast<std::size_t>(best_rank)];
    std::vector<int> out;
    out.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size();) {
      if (i + 1 < ids.size() && ids[i] == m.left && ids[i + 1] == m.right) {
        out.push_back(best_merged);
        i += 2;
      } else {
        out.push_back(ids[i]);
        ++i;
      }
    }
    ids = std::move(out);
  }
  return ids;
}

std::string decode(const Vocabulary& vocab, std::span<const int> ids) {
  std::string out;
  for (const int id : ids) out += vocab.piece(id);
  return out;
}

std::string serialize_vocab(const Vocabulary& vocab) {
  std::string out;
  out += "testpair-vocab v1\n";
  out += fmt::format("specials {}\n", Vocabulary::kNumSpecials);
  out += fmt::format("merges {}\n", vocab.merges().size());
  out += fmt::format("special pad {}\n", Vocabulary::kPadText);
  out += fmt::format("special bos {}\n", Vocabulary::kBosText);
  out += fmt::format("special eos {}\n", Vocabulary::kEosText);
  out += fmt::format("special sep {}\n", Vocabulary::kSepText);
  for (const auto& m : vocab.merges()) {
    out += fmt::format("merge {} {}\n", m.left, m.right);
  }
  for (int id = 0; id < vocab.size(); ++id) {
    out += escape_piece(vocab.piece(id));
    out += '\n';
  }
  return out;
}

Vocabulary parse_vocab(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t ln = 0;
  auto next = [&]() -> std::string_view {
    if (ln >= lines.size()) throw std::runtime_error("truncated vocab file");
    return lines[ln++];
  };
  if (next() != "testpair-vocab v1") {
    throw std::runtime_error("unrecognized vocab file version");
  }
  int specials = 0;
  std::size_t merge_count = 0;
  if (sscanf(std::string{next()}.c_str(), "specials %d", &specials) != 1 ||
      specials != Vocabulary::kNumSpecials) {
    throw std::runtime_error("bad specials header");
  }
  if (sscanf(std::string{next()}.c_str(), "merges %zu", &merge_count) != 1) {
    throw std::runtime_error("bad merges header");
  }
  for (int i = 0; i < specials; ++i) next();  // renderings are fixed
  std::vector<Vocabulary::Merge> merges;
  merges.reserve(merge_count);
  for (std::size_t i = 0; i < merge_count; ++i) {
    Vocabulary::Merge m;
    if (sscanf(std::string{next()}.c_str(), "merge %d %d", &m.left,
               &m.right) != 2) {
      throw std::runtime_error("bad merge line");
    }
    merges.push_back(m);
  }
  Vocabulary vocab{std::move(merges)};
  for (int id = 0; id < vocab.size(); ++id) {
    if (unescape_piece(next()) != vocab.piece(id)) {
      throw std::runtime_error(
          fmt::format("piece {} inconsistent with merge table", id));
    }
  }
  return vocab;
}

void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path) {
  write_file_bytes(path, serialize_vocab(vocab));
}

Vocabulary load_vocab(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (!bytes) throw std::runtime_error("cannot read vocab: " + path.string());
  return parse_vocab(*bytes);
}

}  // namespace testpair
