// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/artifact.hpp"

#include <fmt/format.h>

#include <fstream>

#include "testpair/util.hpp"

namespace testpair {

void write_jsonl_artifact(const std::filesystem::path& path,
                          const std::string& artifact_name,
                          const std::string& config_digest,
                          const std::vector<nlohmann::json>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write artifact: " + path.string());
  }
  const nlohmann::json header{{"artifact", artifact_name},
                              {"version", 1},
                              {"config_digest", config_digest}};
  out << header.dump() << '\n';
  for (const auto& record : records) out << record.dump() << '\n';
  if (!out) throw std::runtime_error("short write: " + path.string());
}

JsonlArtifact read_jsonl_artifact(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw UpstreamArtifactError(
        fmt::format("expected artifact file {} is missing", path.string()));
  }
  JsonlArtifact artifact;
  std::string line;
  if (!std::getline(in, line)) {
    throw UpstreamArtifactError(
        fmt::format("artifact file {} is empty", path.string()));
  }
  const auto header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object() ||
      !header.contains("artifact") || !header.contains("config_digest")) {
    throw UpstreamArtifactError(
        fmt::format("artifact file {} has no valid header", path.string()));
  }
  artifact.artifact = header.at("artifact").get<std::string>();
  artifact.version = header.value("version", 1);
  artifact.config_digest = header.at("config_digest").get<std::string>();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto record = nlohmann::json::parse(line, nullptr, false);
    if (record.is_discarded()) {
      throw UpstreamArtifactError(
          fmt::format("artifact file {} has a malformed record",
                      path.string()));
    }
    artifact.records.push_back(std::move(record));
  }
  return artifact;
}

JsonlArtifact read_jsonl_artifact(const std::filesystem::path& path,
                                  const std::string& expected_digest) {
  auto artifact = read_jsonl_artifact(path);
  if (artifact.config_digest != expected_digest) {
    throw ConfigMismatchError(fmt::format(
        "artifact {} was produced under config digest {} but the current "
        "config digest is {}",
        path.string(), artifact.config_digest, expected_digest));
  }
  return artifact;
}

nlohmann::json repo_to_json(const RepoRecord& repo) {
  return {{"repo_id", repo.repo_id},
          {"owner_name", repo.owner_name},
          {"star_count", repo.star_count},
          {"subject_language", to_string(repo.subject_language)},
          {"is_fork", repo.is_fork},
          {"split", to_string(repo.split)},
          {"root_path", repo.root_path.generic_string()}};
}

RepoRecord repo_from_json(const nlohmann::json& j) {
  RepoRecord r;
  r.repo_id = j.at("repo_id").get<std::string>();
  r.owner_name = j.value("owner_name", std::string{});
  r.star_count = j.at("star_count").get<int>();
  r.subject_language =
      parse_lang(j.at("subject_language").get<std::string>()).value();
  r.is_fork = j.at("is_fork").get<bool>();
  r.split = parse_split(j.at("split").get<std::string>()).value();
  r.root_path = j.value("root_path", std::string{});
  return r;
}

nlohmann::json source_file_to_json(const SourceFile& file) {
  return {{"file_id", file.file_id},
          {"repo_id", file.repo_id},
          {"rel_path", file.rel_path},
          {"subject_language", to_string(file.subject_language)},
          {"byte_size", file.byte_size},
          {"line_count", file.line_count},
          {"max_line_chars", file.max_line_chars},
          {"mean_line_chars", file.mean_line_chars},
          {"non_alnum_fraction", file.non_alnum_fraction},
          {"content_hash", file.content_hash},
          {"content_ref", file.repo_id + "/" + file.rel_path}};
}

SourceFile source_file_from_json(const nlohmann::json& j,
                                 const std::filesystem::path& root) {
  const auto ref = j.at("content_ref").get<std::string>();
  const auto raw = read_file_bytes(root / ref);
  if (!raw) {
    throw UpstreamArtifactError(
        fmt::format("content_ref {} unreadable under root {}", ref,
                    root.string()));
  }
  auto file = make_source_file(
      j.at("repo_id").get<std::string>(), j.at("rel_path").get<std::string>(),
      parse_lang(j.at("subject_language").get<std::string>()).value(), *raw);
  const auto recorded_hash = j.at("content_hash").get<std::string>();
  if (file.content_hash != recorded_hash) {
    throw UpstreamArtifactError(fmt::format(
        "content of {} changed since ingest (hash {} != recorded {})", ref,
        file.content_hash, recorded_hash));
  }
  return file;
}

nlohmann::json pair_to_json(const CodeTestPair& pair) {
  return {{"code_file_id", pair.code_file_id},
          {"test_file_id", pair.test_file_id},
          {"match_kind", to_string(pair.match_kind)},
          {"score", pair.score}};
}

CodeTestPair pair_from_json(const nlohmann::json& j) {
  CodeTestPair p;
  p.code_file_id = j.at("code_file_id").get<std::string>();
  p.test_file_id = j.at("test_file_id").get<std::string>();
  p.match_kind = j.at("match_kind").get<std::string>() == "exact"
                     ? MatchKind::ExactPattern
                     : MatchKind::Fuzzy;
  p.score = j.at("score").get<double>();
  return p;
}

nlohmann::json verdict_to_json(const FilterVerdict& verdict) {
  nlohmann::json j{{"file_id", verdict.file_id}, {"kept", verdict.kept}};
  if (verdict.rejected_by) {
    j["rejected_by"] = to_string(*verdict.rejected_by);
  }
  return j;
}

nlohmann::json prompt_to_json(const TaskPrompt& prompt) {
  nlohmann::json j{{"task", to_string(prompt.task)},
                   {"context_mode", to_string(prompt.context_mode)},
                   {"prompt_text", prompt.prompt_text},
                   {"insertion_point", prompt.insertion_point},
                   {"pair_id", prompt.pair_id}};
  if (prompt.ground_truth) j["ground_truth"] = *prompt.ground_truth;
  return j;
}

TaskPrompt prompt_from_json(const nlohmann::json& j) {
  TaskPrompt p;
  p.task = parse_task(j.at("task").get<std::string>()).value();
  p.context_mode =
      parse_context_mode(j.at("context_mode").get<std::string>()).value();
  p.prompt_text = j.at("prompt_text").get<std::string>();
  p.insertion_point = j.at("insertion_point").get<std::size_t>();
  p.pair_id = j.at("pair_id").get<std::string>();
  if (j.contains("ground_truth")) {
    p.ground_truth = j.at("ground_truth").get<std::string>();
  }
  return p;
}

nlohmann::json outcome_to_json(const RuntimeOutcome& o) {
  nlohmann::json j{{"pair_id", o.pair_id},
                   {"task", to_string(o.task)},
                   {"context_mode", to_string(o.context_mode)},
                   {"sample_k", o.sample_k},
                   {"compiled", o.compiled},
                   {"passed", o.passed},
                   {"pass_basis", o.pass_basis},
                   {"detail", o.detail}};
  if (o.coverage_baseline) j["coverage_baseline"] = *o.coverage_baseline;
  if (o.coverage_with_gen) j["coverage_with_gen"] = *o.coverage_with_gen;
  if (o.coverage_delta) j["coverage_delta"] = *o.coverage_delta;
  return j;
}

RuntimeOutcome outcome_from_json(const nlohmann::json& j) {
  RuntimeOutcome o;
  o.pair_id = j.at("pair_id").get<std::string>();
  o.task = parse_task(j.at("task").get<std::string>()).value();
  o.context_mode =
      parse_context_mode(j.at("context_mode").get<std::string>()).value();
  o.sample_k = j.at("sample_k").get<int>();
  o.compiled = j.at("compiled").get<bool>();
  o.passed = j.at("passed").get<bool>();
  o.pass_basis = j.value("pass_basis", std::string{});
  o.detail = j.value("detail", std::string{});
  if (j.contains("coverage_baseline")) {
    o.coverage_baseline = j.at("coverage_baseline").get<double>();
  }
  if (j.contains("coverage_with_gen")) {
    o.coverage_with_gen = j.at("coverage_with_gen").get<double>();
  }
  if (j.contains("coverage_delta")) {
    o.coverage_delta = j.at("coverage_delta").get<double>();
  }
  return o;
}

nlohmann::json scored_sample_to_json(const ScoredSample& s) {
  return {{"pair_id", s.pair_id},
          {"task", to_string(s.task)},
          {"context_mode", to_string(s.context_mode)},
          {"sample_k", s.sample_k},
          {"exact_match", s.scores.exact},
          {"rouge_l", s.scores.rouge},
          {"codebleu_lite", s.scores.codebleu},
          {"codebleu_ngram", s.scores.components.ngram},
          {"codebleu_weighted_ngram", s.scores.components.weighted_ngram},
          {"codebleu_syntax", s.scores.components.syntax_match}};
}

ScoredSample scored_sample_from_json(const nlohmann::json& j) {
  ScoredSample s;
  s.pair_id = j.at("pair_id").get<std::string>();
  s.task = parse_task(j.at("task").get<std::string>()).value();
  s.context_mode =
      parse_context_mode(j.at("context_mode").get<std::string>()).value();
  s.sample_k = j.at("sample_k").get<int>();
  s.scores.exact = j.at("exact_match").get<bool>();
  s.scores.rouge = j.at("rouge_l").get<double>();
  s.scores.codebleu = j.at("codebleu_lite").get<double>();
  s.scores.components.ngram = j.value("codebleu_ngram", 0.0);
  s.scores.components.weighted_ngram = j.value("codebleu_weighted_ngram", 0.0);
  s.scores.components.syntax_match = j.value("codebleu_syntax", 0.0);
  return s;
}

}  // namespace testpair
