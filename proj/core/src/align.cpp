// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/align.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "testpair/util.hpp"

namespace testpair {

std::string_view to_string(MatchKind kind) {
  return kind == MatchKind::ExactPattern ? "exact" : "fuzzy";
}

namespace {

std::vector<std::string_view> path_components(std::string_view path) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start < path.size()) {
    const std::size_t slash = path.find('/', start);
    if (slash == std::string_view::npos) {
      parts.push_back(path.substr(start));
      break;
    }
    if (slash > start) parts.push_back(path.substr(start, slash - start));
    start = slash + 1;
  }
  return parts;
}

bool has_test_dir_segment(std::string_view rel_path) {
  auto parts = path_components(rel_path);
  if (!parts.empty()) parts.pop_back();  // drop the filename
  for (const auto part : parts) {
    if (part == "test" || part == "tests") return true;
  }
  return false;
}

// Number of directory components not shared between the two files' parents.
std::size_t dir_distance(std::string_view a, std::string_view b) {
  auto pa = path_components(a);
  auto pb = path_components(b);
  if (!pa.empty()) pa.pop_back();
  if (!pb.empty()) pb.pop_back();
  std::size_t common = 0;
  while (common < pa.size() && common < pb.size() && pa[common] == pb[common])
    ++common;
  return (pa.size() - common) + (pb.size() - common);
}

bool exact_pattern_match(std::string_view code_stem,
                         std::string_view test_stem) {
  const std::string s{code_stem};
  return test_stem == "test_" + s || test_stem == s + "_test" ||
         test_stem == s + "Test" || test_stem == "Test" + s;
}

struct Candidate {
  std::size_t code_idx;
  std::size_t test_idx;
  MatchKind kind;
  double score;
  std::size_t distance;
};

}  // namespace

std::string path_stem(std::string_view rel_path) {
  const std::size_t slash = rel_path.rfind('/');
  std::string_view name =
      slash == std::string_view::npos ? rel_path : rel_path.substr(slash + 1);
  const std::size_t dot = name.rfind('.');
  if (dot != std::string_view::npos && dot > 0) name = name.substr(0, dot);
  return std::string{name};
}

bool is_test_file(std::string_view rel_path, Lang lang) {
  if (rel_path.empty()) return false;
  if (has_test_dir_segment(rel_path)) return true;
  const std::string stem = path_stem(rel_path);
  if (lang == Lang::Python) {
    return stem.starts_with("test_") || stem.ends_with("_test");
  }
  return stem.starts_with("Test") || stem.ends_with("Test") ||
         stem.ends_with("Tests");
}

bool is_test_file(const SourceFile& file) {
  return is_test_file(file.rel_path, file.subject_language);
}

std::string strip_test_markers(std::string_view stem) {
  std::string_view s = stem;
  if (s.starts_with("test_")) {
    s.remove_prefix(5);
  } else if (s.starts_with("Test")) {
    s.remove_prefix(4);
  }
  if (s.ends_with("_test")) {
    s.remove_suffix(5);
  } else if (s.ends_with("Tests")) {
    s.remove_suffix(5);
  } else if (s.ends_with("Test")) {
    s.remove_suffix(4);
  }
  return std::string{s};
}

double name_similarity(std::string_view code_stem,
                       std::string_view test_stem) {
  const std::string a = ascii_lower(code_stem);
  const std::string b = ascii_lower(test_stem);
  if (a.empty() && b.empty()) return 1.0;
  const std::size_t dist = levenshtein(a, b);
  const std::size_t maxlen = std::max(a.size(), b.size());
  return 1.0 - static_cast<double>(dist) / static_cast<double>(maxlen);
}

std::vector<CodeTestPair> align_pairs(std::span<const SourceFile> repo_files,
                                      double fuzzy_threshold) {
  std::vector<std::size_t> code_idx, test_idx;
  for (std::size_t i = 0; i < repo_files.size(); ++i) {
    (is_test_file(repo_files[i]) ? test_idx : code_idx).push_back(i);
  }

  std::vector<bool> code_taken(repo_files.size(), false);
  std::vector<bool> test_taken(repo_files.size(), false);
  std::vector<CodeTestPair> pairs;

  auto claim = [&](std::vector<Candidate>& candidates) {
    std::sort(candidates.begin(), candidates.end(),
              [&](const Candidate& x, const Candidate& y) {
                if (x.score != y.score) return x.score > y.score;
                if (x.distance != y.distance) return x.distance < y.distance;
                const auto& xc = repo_files[x.code_idx].rel_path;
                const auto& yc = repo_files[y.code_idx].rel_path;
                if (xc != yc) return xc < yc;
                return repo_files[x.test_idx].rel_path <
                       repo_files[y.test_idx].rel_path;
              });
    for (const auto& c : candidates) {
      if (code_taken[c.code_idx] || test_taken[c.test_idx]) continue;
      code_taken[c.code_idx] = true;
      test_taken[c.test_idx] = true;
      pairs.push_back({repo_files[c.code_idx].file_id,
                       repo_files[c.test_idx].file_id, c.kind, c.score});
    }
  };

  std::vector<Candidate> exact;
  for (const std::size_t ci : code_idx) {
    const auto code_stem = path_stem(repo_files[ci].rel_path);
    for (const std::size_t ti : test_idx) {
      if (repo_files[ci].subject_language !=
          repo_files[ti].subject_language) {
        continue;
      }
      const auto test_stem = path_stem(repo_files[ti].rel_path);
      if (exact_pattern_match(code_stem, test_stem)) {
        exact.push_back({ci, ti, MatchKind::ExactPattern, 1.0,
                         dir_distance(repo_files[ci].rel_path,
                                      repo_files[ti].rel_path)});
      }
    }
  }
  claim(exact);

  std::vector<Candidate> fuzzy;
  for (const std::size_t ci : code_idx) {
    if (code_taken[ci]) continue;
    const auto code_stem = path_stem(repo_files[ci].rel_path);
    for (const std::size_t ti : test_idx) {
      if (test_taken[ti]) continue;
      if (repo_files[ci].subject_language !=
          repo_files[ti].subject_language) {
        continue;
      }
      const std::string stripped =
          strip_test_markers(path_stem(repo_files[ti].rel_path));
      const double score = name_similarity(code_stem, stripped);
      if (score > fuzzy_threshold) {
        fuzzy.push_back({ci, ti, MatchKind::Fuzzy, score,
                         dir_distance(repo_files[ci].rel_path,
                                      repo_files[ti].rel_path)});
      }
    }
  }
  claim(fuzzy);

  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    return a.code_file_id < b.code_file_id;
  });
  return pairs;
}

std::vector<CodeTestPair> align_pairs_all_repos(
    std::span<const SourceFile> files, double fuzzy_threshold) {
  std::map<std::string, std::vector<SourceFile>> by_repo;
  for (const auto& f : files) by_repo[f.repo_id].push_back(f);
  std::vector<CodeTestPair> all;
  for (auto& [repo, repo_files] : by_repo) {
    auto pairs = align_pairs(repo_files, fuzzy_threshold);
    all.insert(all.end(), std::make_move_iterator(pairs.begin()),
               std::make_move_iterator(pairs.end()));
  }
  return all;
}

}  // namespace testpair
