// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/ingest.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <future>
#include <nlohmann/json.hpp>
#include <random>
#include <stdexcept>

#include "testpair/util.hpp"

namespace fs = std::filesystem;

namespace testpair {

namespace {

std::vector<RepoRecord> read_sidecar(const fs::path& root) {
  const fs::path sidecar = root / "repos.jsonl";
  std::ifstream in(sidecar);
  if (!in) {
    throw std::runtime_error("missing repo metadata sidecar: " +
                             sidecar.string());
  }
  std::vector<RepoRecord> repos;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw std::runtime_error(
          fmt::format("{}:{}: malformed metadata record", sidecar.string(),
                      lineno));
    }
    RepoRecord r;
    r.repo_id = j.at("repo").get<std::string>();
    r.owner_name = j.value("owner_name", std::string{});
    r.star_count = j.at("star_count").get<int>();
    r.is_fork = j.at("is_fork").get<bool>();
    const auto lang = parse_lang(j.at("subject_language").get<std::string>());
    if (!lang) {
      throw std::runtime_error(fmt::format(
          "{}:{}: unknown subject_language", sidecar.string(), lineno));
    }
    r.subject_language = *lang;
    r.root_path = root / r.repo_id;
    repos.push_back(std::move(r));
  }
  return repos;
}

bool is_hidden(const fs::path& p) {
  const auto name = p.filename().string();
  return name.size() > 1 && name[0] == '.';
}

RepoScan scan_one_repo(const RepoRecord& repo, const IngestConfig& config,
                       ScanDiagnostics* diagnostics) {
  RepoScan scan{repo, {}};
  std::error_code ec;
  fs::recursive_directory_iterator it(repo.root_path, ec);
  if (ec) {
    if (diagnostics) {
      diagnostics->skipped_repos.push_back(
          fmt::format("{}: {}", repo.repo_id, ec.message()));
    }
    return scan;
  }
  std::vector<fs::path> candidates;
  for (fs::recursive_directory_iterator end; it != end; it.increment(ec)) {
    if (ec) {
      if (diagnostics) {
        diagnostics->skipped_files.push_back(
            fmt::format("{}: walk error: {}", repo.repo_id, ec.message()));
      }
      ec.clear();
      break;
    }
    if (it->is_directory(ec)) {
      if (is_hidden(it->path())) it.disable_recursion_pending();
      continue;
    }
    const std::string ext = it->path().extension().string();
    if (!config.extension_map.contains(ext)) continue;
    // Broken symlinks with a source extension surface as unreadable files
    // below rather than vanishing silently.
    if (!it->is_regular_file(ec) && !it->is_symlink()) continue;
    candidates.push_back(it->path());
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& path : candidates) {
    const auto raw = read_file_bytes(path);
    if (!raw) {
      if (diagnostics) {
        diagnostics->skipped_files.push_back(path.string() + ": unreadable");
      }
      continue;
    }
    const std::string rel =
        fs::relative(path, repo.root_path).generic_string();
    const Lang lang = config.extension_map.at(path.extension().string());
    scan.files.push_back(make_source_file(repo.repo_id, rel, lang, *raw));
  }
  return scan;
}

}  // namespace

std::vector<RepoScan> scan_repositories(const fs::path& root,
                                        const IngestConfig& config,
                                        ScanDiagnostics* diagnostics) {
  if (!fs::exists(root)) {
    throw std::runtime_error("scan root does not exist: " + root.string());
  }
  std::vector<RepoRecord> repos = read_sidecar(root);
  std::erase_if(repos, [&](const RepoRecord& r) {
    return r.is_fork || r.star_count < config.min_stars;
  });
  std::sort(repos.begin(), repos.end(),
            [](const auto& a, const auto& b) { return a.repo_id < b.repo_id; });

  std::vector<ScanDiagnostics> per_repo_diags(repos.size());
  std::vector<std::future<RepoScan>> futures;
  futures.reserve(repos.size());
  for (std::size_t i = 0; i < repos.size(); ++i) {
    futures.push_back(std::async(std::launch::async, [&, i] {
      return scan_one_repo(repos[i], config,
                           diagnostics ? &per_repo_diags[i] : nullptr);
    }));
  }
  std::vector<RepoScan> scans;
  scans.reserve(repos.size());
  for (std::size_t i = 0; i < futures.size(); ++i) {
    scans.push_back(futures[i].get());
    if (diagnostics) {
      auto& d = per_repo_diags[i];
      diagnostics->skipped_repos.insert(diagnostics->skipped_repos.end(),
                                        d.skipped_repos.begin(),
                                        d.skipped_repos.end());
      diagnostics->skipped_files.insert(diagnostics->skipped_files.end(),
                                        d.skipped_files.begin(),
                                        d.skipped_files.end());
    }
  }
  return scans;
}

std::vector<RepoRecord> assign_split(std::vector<RepoRecord> repos,
                                     int test_count_per_language,
                                     std::uint64_t seed) {
  for (const Lang lang : {Lang::Python, Lang::Java}) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < repos.size(); ++i) {
      if (repos[i].subject_language == lang) idx.push_back(i);
    }
    if (idx.empty()) continue;  // language absent from this corpus
    if (std::cmp_less(idx.size(), test_count_per_language)) {
      throw std::runtime_error(fmt::format(
          "cannot mark {} test repos for {}: only {} repos available",
          test_count_per_language, to_string(lang), idx.size()));
    }
    // Stable language-local order, then a seeded shuffle picks the test set.
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return repos[a].repo_id < repos[b].repo_id;
    });
    std::mt19937_64 rng(seed ^ (lang == Lang::Python ? 0x9e3779b97f4a7c15ULL
                                                     : 0xbf58476d1ce4e5b9ULL));
    std::shuffle(idx.begin(), idx.end(), rng);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      repos[idx[k]].split = std::cmp_less(k, test_count_per_language)
                                ? Split::Test
                                : Split::Train;
    }
  }
  return repos;
}

}  // namespace testpair
