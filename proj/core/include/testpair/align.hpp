// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "testpair/types.hpp"

namespace testpair {

enum class MatchKind { ExactPattern, Fuzzy };

std::string_view to_string(MatchKind kind);

struct CodeTestPair {
  std::string code_file_id;
  std::string test_file_id;
  MatchKind match_kind = MatchKind::ExactPattern;
  double score = 1.0;
};

// Test-ness is decided from the path alone: a test directory segment
// ("test", "tests", and thereby "src/test/...") anywhere in the path, or a
// test-named stem. Stems use snake patterns for Python (test_* / *_test) and
// camel patterns for Java (Test* / *Test / *Tests).
bool is_test_file(std::string_view rel_path, Lang lang);
bool is_test_file(const SourceFile& file);

// Removes one leading and one trailing test marker (test_, Test, _test,
// Tests) from a filename stem, e.g. "test_foo" -> "foo", "FooTest" -> "Foo".
std::string strip_test_markers(std::string_view stem);

// Filename stem: final path component without its extension.
std::string path_stem(std::string_view rel_path);

// Normalized Levenshtein similarity 1 - dist/max(len) over case-folded
// stems. Symmetric; 1.0 iff the stems are equal after folding. Callers strip
// test markers from the test stem before comparing.
double name_similarity(std::string_view code_stem, std::string_view test_stem);

// Pairs code files with test files within one repository. Exact filename
// patterns (test_<stem>, <stem>_test, <stem>Test, Test<stem>) are claimed
// first; remaining test files are fuzzy-matched against remaining code files
// and paired when the similarity strictly exceeds fuzzy_threshold, greedily
// by descending score. Ties break on directory distance, then lexicographic
// code path, then test path. Each file ends up in at most one pair; output
// is sorted by code path.
std::vector<CodeTestPair> align_pairs(std::span<const SourceFile> repo_files,
                                      double fuzzy_threshold = 0.85);

// Convenience wrapper: groups by repo_id and aligns each repo independently.
std::vector<CodeTestPair> align_pairs_all_repos(
    std::span<const SourceFile> files, double fuzzy_threshold = 0.85);

}  // namespace testpair
