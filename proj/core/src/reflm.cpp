// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/reflm.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <sstream>
#include <stdexcept>

#include "testpair/promptgen.hpp"
#include "testpair/util.hpp"

namespace testpair {

namespace {

std::string context_key(std::span<const int> context) {
  std::string key;
  key.resize(context.size() * 4);
  for (std::size_t i = 0; i < context.size(); ++i) {
    const auto v = static_cast<std::uint32_t>(context[i]);
    std::memcpy(key.data() + i * 4, &v, 4);
  }
  return key;
}

std::vector<int> key_context(std::string_view key) {
  std::vector<int> ids(key.size() / 4);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    std::uint32_t v = 0;
    std::memcpy(&v, key.data() + i * 4, 4);
    ids[i] = static_cast<int>(v);
  }
  return ids;
}

}  // namespace

NGramModel::NGramModel(int order, double discount, int vocab_size,
                       std::string vocab_digest)
    : order_(order),
      discount_(discount),
      vocab_size_(vocab_size),
      vocab_digest_(std::move(vocab_digest)) {
  if (order_ < 2) throw std::invalid_argument("n-gram order must be >= 2");
  if (!(discount_ > 0.0 && discount_ < 1.0)) {
    throw std::invalid_argument("discount must lie in (0, 1)");
  }
  if (vocab_size_ <= 0) throw std::invalid_argument("vocab_size must be > 0");
  levels_.resize(static_cast<std::size_t>(order_));
}

void NGramModel::add_count(std::span<const int> context, int token) {
  auto& cc = levels_[context.size()][context_key(context)];
  ++cc.total;
  ++cc.tokens[token];
}

double NGramModel::prob(std::span<const int> context, int token) const {
  const std::size_t max_ctx =
      std::min(context.size(), static_cast<std::size_t>(order_ - 1));
  std::span<const int> ctx = context.subspan(context.size() - max_ctx);

  // Evaluate bottom-up from uniform so each level interpolates the one below.
  double p = 1.0 / static_cast<double>(vocab_size_);
  for (std::size_t len = 0; len <= ctx.size(); ++len) {
    const auto& table = levels_[len];
    const auto it = table.find(context_key(ctx.subspan(ctx.size() - len)));
    if (it == table.end()) continue;  // unseen context: keep lower-order p
    const auto& cc = it->second;
    const double total = static_cast<double>(cc.total);
    const double backoff_mass =
        discount_ * static_cast<double>(cc.tokens.size()) / total;
    const auto tok_it = cc.tokens.find(token);
    const double ml =
        tok_it == cc.tokens.end()
            ? 0.0
            : (static_cast<double>(tok_it->second) - discount_) / total;
    p = ml + backoff_mass * p;
  }
  return p;
}

std::vector<double> NGramModel::distribution(
    std::span<const int> context) const {
  const std::size_t max_ctx =
      std::min(context.size(), static_cast<std::size_t>(order_ - 1));
  std::span<const int> ctx = context.subspan(context.size() - max_ctx);

  std::vector<double> dist(static_cast<std::size_t>(vocab_size_),
                           1.0 / static_cast<double>(vocab_size_));
  for (std::size_t len = 0; len <= ctx.size(); ++len) {
    const auto& table = levels_[len];
    const auto it = table.find(context_key(ctx.subspan(ctx.size() - len)));
    if (it == table.end()) continue;
    const auto& cc = it->second;
    const double total = static_cast<double>(cc.total);
    const double backoff_mass =
        discount_ * static_cast<double>(cc.tokens.size()) / total;
    for (auto& p : dist) p *= backoff_mass;
    for (const auto& [tok, count] : cc.tokens) {
      dist[static_cast<std::size_t>(tok)] +=
          (static_cast<double>(count) - discount_) / total;
    }
  }
  return dist;
}

NGramModel train_lm(std::span<const PackedSequence> seqs, int order,
                    double discount, int vocab_size,
                    std::string vocab_digest) {
  NGramModel model(order, discount, vocab_size, std::move(vocab_digest));
  std::int64_t counted = 0;
  for (const auto& seq : seqs) {
    std::size_t n = seq.token_ids.size();
    while (n > 0 && seq.token_ids[n - 1] == Vocabulary::kPadId) --n;
    const std::span<const int> toks(seq.token_ids.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t max_ctx =
          std::min(i, static_cast<std::size_t>(order - 1));
      for (std::size_t len = 0; len <= max_ctx; ++len) {
        model.add_count(toks.subspan(i - len, len), toks[i]);
        ++counted;
      }
    }
  }
  if (counted == 0) throw std::runtime_error("training corpus is empty");
  return model;
}

double perplexity(const NGramModel& model, std::span<const int> toks,
                  std::span<const int> conditioning_prefix) {
  if (toks.empty()) throw std::invalid_argument("perplexity of empty sequence");
  std::vector<int> stream(conditioning_prefix.begin(),
                          conditioning_prefix.end());
  stream.insert(stream.end(), toks.begin(), toks.end());
  double nll = 0.0;
  const std::size_t start = conditioning_prefix.size();
  for (std::size_t i = start; i < stream.size(); ++i) {
    const std::span<const int> ctx(stream.data(), i);
    nll -= std::log(model.prob(ctx, stream[i]));
  }
  return std::exp(nll / static_cast<double>(toks.size()));
}

std::vector<std::vector<int>> sample(const NGramModel& model,
                                     std::span<const int> prompt,
                                     const SampleConfig& config) {
  if (!(config.temperature > 0.0)) {
    throw std::invalid_argument("temperature must be > 0");
  }
  if (config.num_samples < 1) {
    throw std::invalid_argument("num_samples must be >= 1");
  }
  std::vector<std::vector<int>> samples;
  samples.reserve(static_cast<std::size_t>(config.num_samples));

  for (int s = 0; s < config.num_samples; ++s) {
    // One independent generator per sample keeps draws order-insensitive.
    std::mt19937_64 rng(config.seed +
                        0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(s + 1));
    std::vector<int> seq(prompt.begin(), prompt.end());
    std::vector<int> gen;
    while (static_cast<int>(gen.size()) < config.max_tokens) {
      const auto dist = model.distribution(seq);
      // Temperature in log space: p^(1/T), renormalized.
      std::vector<double> w(dist.size());
      double max_lw = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < dist.size(); ++i) {
        w[i] = std::log(dist[i]) / config.temperature;
        max_lw = std::max(max_lw, w[i]);
      }
      double z = 0.0;
      for (auto& lw : w) {
        lw = std::exp(lw - max_lw);
        z += lw;
      }
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      const double u = unif(rng) * z;
      double acc = 0.0;
      int tok = static_cast<int>(dist.size()) - 1;
      for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        if (acc >= u) {
          tok = static_cast<int>(i);
          break;
        }
      }
      if (config.stop == StopRule::OnEOS || config.vocab == nullptr ||
          !config.language.has_value()) {
        if (tok == Vocabulary::kEosId) break;
        gen.push_back(tok);
      } else {
        if (tok == Vocabulary::kEosId) break;
        gen.push_back(tok);
        const std::string text = decode(*config.vocab, gen);
        if (first_method_complete(text, *config.language)) break;
      }
      seq.push_back(tok);
    }
    samples.push_back(std::move(gen));
  }
  return samples;
}

std::string serialize_model(const NGramModel& model) {
  std::string out;
  out += "testpair-ngram v1\n";
  out += fmt::format("order {}\n", model.order());
  out += fmt::format("discount {:.17g}\n", model.discount());
  out += fmt::format("vocab_size {}\n", model.vocab_size());
  out += fmt::format("vocab_digest {}\n", model.vocab_digest().empty()
                                              ? "-"
                                              : model.vocab_digest());
  for (std::size_t len = 0; len < static_cast<std::size_t>(model.order());
       ++len) {
    const auto& table = model.level(len);
    std::vector<std::string_view> keys;
    keys.reserve(table.size());
    for (const auto& [key, cc] : table) keys.push_back(key);
    std::sort(keys.begin(), keys.end());
    for (const auto key : keys) {
      const auto& cc = table.at(std::string{key});
      out += "ctx";
      for (const int id : key_context(key)) out += fmt::format(" {}", id);
      out += " |";
      for (const auto& [tok, count] : cc.tokens) {
        out += fmt::format(" {}:{}", tok, count);
      }
      out += '\n';
    }
  }
  out += "end\n";
  return out;
}

NGramModel parse_model(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t ln = 0;
  auto next = [&]() -> std::string_view {
    if (ln >= lines.size()) throw std::runtime_error("truncated model file");
    return lines[ln++];
  };
  if (next() != "testpair-ngram v1") {
    throw std::runtime_error("unrecognized model file version");
  }
  int order = 0;
  double discount = 0.0;
  int vocab_size = 0;
  if (sscanf(std::string{next()}.c_str(), "order %d", &order) != 1 ||
      sscanf(std::string{next()}.c_str(), "discount %lf", &discount) != 1 ||
      sscanf(std::string{next()}.c_str(), "vocab_size %d", &vocab_size) != 1) {
    throw std::runtime_error("bad model header");
  }
  std::string digest_line{next()};
  std::string digest;
  if (digest_line.rfind("vocab_digest ", 0) != 0) {
    throw std::runtime_error("bad model header (vocab_digest)");
  }
  digest = digest_line.substr(strlen("vocab_digest "));
  if (digest == "-") digest.clear();

  NGramModel model(order, discount, vocab_size, digest);
  while (true) {
    const std::string line{next()};
    if (line == "end") break;
    std::istringstream iss(line);
    std::string tag;
    iss >> tag;
    if (tag != "ctx") throw std::runtime_error("bad model line: " + line);
    std::vector<int> ctx;
    std::string tok;
    while (iss >> tok && tok != "|") ctx.push_back(std::stoi(tok));
    while (iss >> tok) {
      const auto colon = tok.find(':');
      const int t = std::stoi(tok.substr(0, colon));
      const auto count = std::stoll(tok.substr(colon + 1));
      for (std::int64_t k = 0; k < count; ++k) model.add_count(ctx, t);
    }
  }
  return model;
}

void save_model(const NGramModel& model, const std::filesystem::path& path) {
  write_file_bytes(path, serialize_model(model));
}

NGramModel load_model(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  if (!bytes) throw std::runtime_error("cannot read model: " + path.string());
  return parse_model(*bytes);
}

namespace {

std::vector<std::string> corpus_file_ids(
    std::span<const TrainingDocument> docs) {
  std::vector<std::string> ids;
  for (const auto& d : docs) {
    if (d.code_file_id) ids.push_back(*d.code_file_id);
    if (d.test_file_id) ids.push_back(*d.test_file_id);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

SignalReport alignment_signal_experiment(
    std::span<const TrainingDocument> corpus_aligned,
    std::span<const TrainingDocument> corpus_shuffled,
    std::span<const std::pair<std::vector<int>, std::vector<int>>>
        heldout_pairs,
    const SignalParams& params, int vocab_size) {
  if (corpus_file_ids(corpus_aligned) != corpus_file_ids(corpus_shuffled)) {
    throw std::runtime_error(
        "aligned and shuffled corpora must cover the same file set");
  }
  if (heldout_pairs.empty()) {
    throw std::invalid_argument("no held-out pairs supplied");
  }

  SignalReport report;
  auto heldout_ppl = [&](const NGramModel& model) {
    double nll = 0.0;
    std::size_t tokens = 0;
    for (const auto& [code, test] : heldout_pairs) {
      std::vector<int> prefix = code;
      prefix.push_back(Vocabulary::kSepId);
      std::vector<int> stream = prefix;
      stream.insert(stream.end(), test.begin(), test.end());
      for (std::size_t i = prefix.size(); i < stream.size(); ++i) {
        nll -= std::log(
            model.prob(std::span<const int>(stream.data(), i), stream[i]));
      }
      tokens += test.size();
    }
    return std::exp(nll / static_cast<double>(tokens));
  };

  for (const auto seed : params.seeds) {
    const auto packed_a = pack_sequences(corpus_aligned, params.pack_length,
                                         seed);
    const auto packed_s = pack_sequences(corpus_shuffled, params.pack_length,
                                         seed);
    const auto model_a =
        train_lm(packed_a, params.order, params.discount, vocab_size);
    const auto model_s =
        train_lm(packed_s, params.order, params.discount, vocab_size);
    SignalSeedResult r;
    r.seed = seed;
    r.ppl_aligned = heldout_ppl(model_a);
    r.ppl_shuffled = heldout_ppl(model_s);
    r.relative_delta = (r.ppl_shuffled - r.ppl_aligned) / r.ppl_shuffled;
    if (r.ppl_aligned < r.ppl_shuffled) ++report.seeds_aligned_lower;
    report.per_seed.push_back(r);
  }
  for (const auto& r : report.per_seed) {
    report.mean_ppl_aligned += r.ppl_aligned;
    report.mean_ppl_shuffled += r.ppl_shuffled;
    report.mean_relative_delta += r.relative_delta;
  }
  const auto n = static_cast<double>(report.per_seed.size());
  report.mean_ppl_aligned /= n;
  report.mean_ppl_shuffled /= n;
  report.mean_relative_delta /= n;
  return report;
}

}  // namespace testpair
