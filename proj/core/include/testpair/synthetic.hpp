// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "testpair/corpus.hpp"

namespace testpair {

// Toy language for the alignment-signal experiment. Each pair's code
// document defines a sequence of identifier tokens; its test document reuses
// exactly those identifiers in reverse, so the reuses nearest the separator
// sit within n-gram reach of the code tail. When `dependent` is false the
// test identifiers are drawn independently instead, leaving nothing to learn
// across the separator. Documents are long relative to the n-gram order so
// the residual boundary effect (the shuffled model never sees the separator
// token) stays negligible against the identifier-correlation signal.
struct SyntheticSpec {
  int train_pairs = 300;
  int heldout_pairs = 30;
  int ident_pool = 40;
  int defs_per_pair = 24;
  bool dependent = true;
  std::uint64_t seed = 1;
};

struct SyntheticData {
  int vocab_size = 0;
  std::vector<TrainingDocument> aligned;   // one Paired doc per pair
  std::vector<TrainingDocument> shuffled;  // the same files, unpaired
  std::vector<std::pair<std::vector<int>, std::vector<int>>> heldout;
};

SyntheticData make_synthetic_corpus(const SyntheticSpec& spec);

}  // namespace testpair
