// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/synthetic.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <numeric>
#include <random>

namespace testpair {

namespace {

// The token inventory is deliberately bare: identifiers only. Any structure
// the test half always opens or closes with (keywords, end markers) would
// hand the aligned model a boundary pattern the shuffled model cannot see,
// producing a spurious delta even when identifiers are uncorrelated.
constexpr int kIdentBase = Vocabulary::kNumSpecials;

}  // namespace

SyntheticData make_synthetic_corpus(const SyntheticSpec& spec) {
  SyntheticData data;
  data.vocab_size = kIdentBase + spec.ident_pool;
  std::mt19937_64 rng(spec.seed);

  std::vector<int> pool(static_cast<std::size_t>(spec.ident_pool));
  std::iota(pool.begin(), pool.end(), kIdentBase);

  auto draw_idents = [&] {
    std::shuffle(pool.begin(), pool.end(), rng);
    return std::vector<int>(pool.begin(), pool.begin() + spec.defs_per_pair);
  };
  // Independent-mode documents are iid uniform draws; sampling without
  // replacement would add within-document structure of its own.
  std::uniform_int_distribution<int> any_ident(
      kIdentBase, kIdentBase + spec.ident_pool - 1);
  auto draw_iid = [&] {
    std::vector<int> toks(static_cast<std::size_t>(spec.defs_per_pair));
    for (auto& t : toks) t = any_ident(rng);
    return toks;
  };
  auto code_doc = [](const std::vector<int>& idents) { return idents; };
  auto test_doc = [](const std::vector<int>& idents) {
    // reversed, so the first reuses sit within n-gram reach of the separator
    return std::vector<int>(idents.rbegin(), idents.rend());
  };

  for (int i = 0; i < spec.train_pairs; ++i) {
    const auto defs = spec.dependent ? draw_idents() : draw_iid();
    const auto uses = spec.dependent ? defs : draw_iid();
    const auto code = code_doc(defs);
    const auto test = test_doc(uses);
    const std::string code_id = fmt::format("p{}/code", i);
    const std::string test_id = fmt::format("p{}/test", i);

    TrainingDocument paired;
    paired.kind = DocKind::Paired;
    paired.repo_id = "synthetic";
    paired.code_file_id = code_id;
    paired.test_file_id = test_id;
    paired.token_ids = code;
    paired.token_ids.push_back(Vocabulary::kSepId);
    paired.token_ids.insert(paired.token_ids.end(), test.begin(), test.end());
    data.aligned.push_back(std::move(paired));

    TrainingDocument code_only;
    code_only.kind = DocKind::CodeOnly;
    code_only.repo_id = "synthetic";
    code_only.code_file_id = code_id;
    code_only.token_ids = code;
    data.shuffled.push_back(std::move(code_only));

    TrainingDocument test_only;
    test_only.kind = DocKind::TestOnly;
    test_only.repo_id = "synthetic";
    test_only.test_file_id = test_id;
    test_only.token_ids = test;
    data.shuffled.push_back(std::move(test_only));
  }

  for (int i = 0; i < spec.heldout_pairs; ++i) {
    const auto defs = spec.dependent ? draw_idents() : draw_iid();
    const auto uses = spec.dependent ? defs : draw_iid();
    data.heldout.emplace_back(code_doc(defs), test_doc(uses));
  }
  return data;
}

}  // namespace testpair
