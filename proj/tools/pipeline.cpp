// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "pipeline.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <random>

#include "testpair/artifact.hpp"
#include "testpair/corpus.hpp"
#include "testpair/digest.hpp"
#include "testpair/harness.hpp"
#include "testpair/ingest.hpp"
#include "testpair/reflm.hpp"
#include "testpair/synthetic.hpp"
#include "testpair/util.hpp"

namespace fs = std::filesystem;

namespace testpair::cli {

namespace {

fs::path out_dir(const PipelineConfig& config) {
  fs::path dir{config.out_dir};
  fs::create_directories(dir);
  return dir;
}

void write_log(const PipelineConfig& config, const std::string& stage,
               const std::vector<std::string>& lines) {
  std::ofstream log(out_dir(config) / (stage + ".log"),
                    std::ios::binary | std::ios::trunc);
  log << "stage " << stage << "\nconfig_digest " << config_digest(config)
      << '\n';
  for (const auto& line : lines) log << line << '\n';
}

std::vector<SourceFile> load_files_artifact(const PipelineConfig& config,
                                            const std::string& name) {
  const auto artifact = read_jsonl_artifact(out_dir(config) / name,
                                            config_digest(config));
  std::vector<SourceFile> files;
  files.reserve(artifact.records.size());
  for (const auto& record : artifact.records) {
    files.push_back(source_file_from_json(record, config.root));
  }
  return files;
}

std::string pair_key_id(const CodeTestPair& pair) {
  return md5_hex(pair.code_file_id + "\n" + pair.test_file_id).substr(0, 12);
}

std::string read_meta_digest(const PipelineConfig& config,
                             const std::string& name) {
  const auto bytes = read_file_bytes(out_dir(config) / name);
  if (!bytes) {
    throw UpstreamArtifactError(
        fmt::format("expected artifact file {} is missing",
                    (out_dir(config) / name).string()));
  }
  const auto j = nlohmann::json::parse(*bytes);
  const auto digest = j.at("config_digest").get<std::string>();
  if (digest != config_digest(config)) {
    throw ConfigMismatchError(fmt::format(
        "{} was produced under config digest {}, current digest is {}", name,
        digest, config_digest(config)));
  }
  return j.value("vocab_digest", std::string{});
}

void write_meta(const PipelineConfig& config, const std::string& name,
                nlohmann::json extra) {
  extra["config_digest"] = config_digest(config);
  write_file_bytes(out_dir(config) / name, extra.dump(2) + "\n");
}

}  // namespace

void run_ingest(const PipelineConfig& config) {
  if (config.root.empty()) {
    throw std::runtime_error("ingest requires --root (checkout tree)");
  }
  IngestConfig ic;
  ic.min_stars = config.min_stars;
  ic.test_repos_per_language = config.test_repos_per_language;
  ic.split_seed = config.split_seed;

  ScanDiagnostics diagnostics;
  auto scans = scan_repositories(config.root, ic, &diagnostics);

  std::vector<RepoRecord> repos;
  repos.reserve(scans.size());
  for (const auto& scan : scans) repos.push_back(scan.repo);
  repos = assign_split(repos, ic.test_repos_per_language, ic.split_seed);
  std::map<std::string, Split> split_of;
  for (const auto& repo : repos) split_of[repo.repo_id] = repo.split;

  std::vector<nlohmann::json> repo_records;
  for (const auto& repo : repos) repo_records.push_back(repo_to_json(repo));
  const auto digest = config_digest(config);
  write_jsonl_artifact(out_dir(config) / "repos.jsonl", "repos", digest,
                       repo_records);

  std::vector<nlohmann::json> file_records;
  std::size_t file_count = 0;
  for (const auto& scan : scans) {
    for (const auto& file : scan.files) {
      file_records.push_back(source_file_to_json(file));
      ++file_count;
    }
  }
  write_jsonl_artifact(out_dir(config) / "files.jsonl", "files", digest,
                       file_records);

  std::vector<std::string> log_lines{
      fmt::format("repos {}", repos.size()),
      fmt::format("files {}", file_count)};
  for (const auto& d : diagnostics.skipped_repos) {
    log_lines.push_back("skipped-repo " + d);
  }
  for (const auto& d : diagnostics.skipped_files) {
    log_lines.push_back("skipped-file " + d);
  }
  write_log(config, "ingest", log_lines);
  std::cout << fmt::format("ingest: {} repos, {} source files\n", repos.size(),
                           file_count);
}

void run_filter(const PipelineConfig& config) {
  auto files = load_files_artifact(config, "files.jsonl");
  FilterReport report;
  const auto verdicts = apply_filters(files, config.filters, &report);

  std::vector<SourceFile> kept;
  std::vector<nlohmann::json> verdict_records;
  for (std::size_t i = 0; i < files.size(); ++i) {
    verdict_records.push_back(verdict_to_json(verdicts[i]));
    if (verdicts[i].kept) kept.push_back(std::move(files[i]));
  }
  const std::size_t before_dedup = kept.size();
  kept = dedup_by_hash(std::move(kept));

  const auto digest = config_digest(config);
  write_jsonl_artifact(out_dir(config) / "verdicts.jsonl", "verdicts", digest,
                       verdict_records);
  std::vector<nlohmann::json> kept_records;
  for (const auto& file : kept) kept_records.push_back(source_file_to_json(file));
  write_jsonl_artifact(out_dir(config) / "kept.jsonl", "kept", digest,
                       kept_records);

  nlohmann::json report_json{
      {"config_digest", digest},
      {"kept", report.kept},
      {"total", report.total},
      {"rejected_by_rule", report.rejected_by_rule},
      {"deduped_away", before_dedup - kept.size()},
      {"survivors", kept.size()},
      // Full-scale reference points reported by the source pipeline; desk
      // fixtures are not expected to reproduce them.
      {"reference_fractions",
       {{"filtered", 0.09}, {"deduplicated", 0.30}}}};
  write_file_bytes(out_dir(config) / "filter-report.json",
                   report_json.dump(2) + "\n");
  write_log(config, "filter",
            {fmt::format("kept {} of {}", kept.size(), files.size())});
  std::cout << fmt::format("filter: kept {} of {} files ({} deduped away)\n",
                           kept.size(), files.size(),
                           before_dedup - kept.size());
}

void run_align(const PipelineConfig& config) {
  const auto files = load_files_artifact(config, "kept.jsonl");
  const auto pairs = align_pairs_all_repos(files, config.fuzzy_threshold);
  std::vector<nlohmann::json> records;
  for (const auto& pair : pairs) {
    auto j = pair_to_json(pair);
    j["pair_id"] = pair_key_id(pair);
    records.push_back(std::move(j));
  }
  write_jsonl_artifact(out_dir(config) / "pairs.jsonl", "pairs",
                       config_digest(config), records);
  write_log(config, "align", {fmt::format("pairs {}", pairs.size())});
  std::cout << fmt::format("align: {} code-test pairs\n", pairs.size());
}

void run_tokenize(const PipelineConfig& config) {
  const auto files = load_files_artifact(config, "kept.jsonl");
  TrainVocabConfig tc;
  tc.target_size = config.vocab_target_size;
  tc.lines_per_file = config.lines_per_file;
  tc.seed = config.tokenizer_seed;
  tc.max_sample_bytes = config.tokenizer_max_sample_bytes;
  const auto vocab = train_vocab(files, tc);
  save_vocab(vocab, out_dir(config) / "vocab.txt");
  write_meta(config, "vocab.meta.json",
             {{"vocab_digest", vocab.digest()},
              {"vocab_size", vocab.size()},
              {"merges", vocab.merges().size()}});
  write_log(config, "tokenize",
            {fmt::format("vocab_size {}", vocab.size()),
             fmt::format("merges {}", vocab.merges().size())});
  std::cout << fmt::format("tokenize: vocabulary of {} pieces ({} merges)\n",
                           vocab.size(), vocab.merges().size());
}

void run_corpus(const PipelineConfig& config) {
  const auto files = load_files_artifact(config, "kept.jsonl");
  const auto pairs_artifact = read_jsonl_artifact(
      out_dir(config) / "pairs.jsonl", config_digest(config));
  std::vector<CodeTestPair> pairs;
  for (const auto& record : pairs_artifact.records) {
    pairs.push_back(pair_from_json(record));
  }
  read_meta_digest(config, "vocab.meta.json");
  const auto vocab = load_vocab(out_dir(config) / "vocab.txt");

  const auto docs = build_documents(files, pairs, vocab);
  const auto seqs = pack_sequences(docs, config.context_length,
                                   config.pack_seed);
  write_packed_corpus(out_dir(config) / "corpus.bin", seqs, vocab.digest(),
                      config.context_length);

  std::vector<nlohmann::json> doc_records;
  for (const auto& doc : docs) {
    nlohmann::json j{{"kind", to_string(doc.kind)},
                     {"token_length", doc.token_ids.size()},
                     {"repo_id", doc.repo_id}};
    if (doc.code_file_id) j["code_file_id"] = *doc.code_file_id;
    if (doc.test_file_id) j["test_file_id"] = *doc.test_file_id;
    doc_records.push_back(std::move(j));
  }
  write_jsonl_artifact(out_dir(config) / "docstats.jsonl", "docstats",
                       config_digest(config), doc_records);
  write_meta(config, "corpus.meta.json",
             {{"vocab_digest", vocab.digest()},
              {"L", config.context_length},
              {"sequences", seqs.size()},
              {"documents", docs.size()}});
  write_log(config, "corpus",
            {fmt::format("documents {}", docs.size()),
             fmt::format("sequences {}", seqs.size())});
  std::cout << fmt::format("corpus: {} documents packed into {} sequences\n",
                           docs.size(), seqs.size());
}

void run_stats(const PipelineConfig& config) {
  const auto artifact = read_jsonl_artifact(out_dir(config) / "docstats.jsonl",
                                            config_digest(config));
  CorpusStats stats;
  for (const auto& record : artifact.records) {
    const auto len = record.at("token_length").get<std::size_t>();
    const auto kind = record.at("kind").get<std::string>();
    ++stats.length_histogram[len];
    if (kind == "paired") ++stats.paired_histogram[len];
    ++stats.kind_counts[kind];
  }
  const double within_2048 = stats.fraction_within(2048, true);
  const double within_8192 = stats.fraction_within(8192, true);
  nlohmann::json j{
      {"config_digest", config_digest(config)},
      {"documents", stats.total_docs()},
      {"paired_documents", stats.paired_docs()},
      {"kind_counts", stats.kind_counts},
      {"paired_fraction_within_2048", within_2048},
      {"paired_fraction_within_8192", within_8192},
      {"fraction_within_2048", stats.fraction_within(2048)},
      {"fraction_within_8192", stats.fraction_within(8192)},
      // Full-scale reference values for these context windows (reported for
      // comparison only; desk corpora differ).
      {"reference_paired_fraction_within_2048", 0.35},
      {"reference_paired_fraction_within_8192", 0.82}};
  write_file_bytes(out_dir(config) / "stats.json", j.dump(2) + "\n");
  write_log(config, "stats", {});
  std::cout << fmt::format(
      "stats: {} docs ({} paired); paired fraction within 2048 = {:.4f}, "
      "within 8192 = {:.4f}\n",
      stats.total_docs(), stats.paired_docs(), within_2048, within_8192);
}

void run_lm_train(const PipelineConfig& config) {
  const auto vocab_digest = read_meta_digest(config, "corpus.meta.json");
  const auto corpus = read_packed_corpus(out_dir(config) / "corpus.bin");
  if (corpus.vocab_digest != vocab_digest) {
    throw ConfigMismatchError("corpus.bin vocab digest mismatch");
  }
  read_meta_digest(config, "vocab.meta.json");
  const auto vocab = load_vocab(out_dir(config) / "vocab.txt");
  const auto model = train_lm(corpus.sequences, config.lm_order,
                              config.lm_discount, vocab.size(),
                              vocab.digest());
  save_model(model, out_dir(config) / "lm.txt");
  write_meta(config, "lm.meta.json", {{"vocab_digest", vocab.digest()}});
  write_log(config, "lm-train", {fmt::format("order {}", config.lm_order)});
  std::cout << fmt::format("lm-train: order-{} model over {} sequences\n",
                           config.lm_order, corpus.sequences.size());
}

namespace {

Vocabulary load_pinned_vocab(const PipelineConfig& config,
                             const NGramModel& model) {
  const auto vocab = load_vocab(out_dir(config) / "vocab.txt");
  if (!model.vocab_digest().empty() &&
      model.vocab_digest() != vocab.digest()) {
    throw ConfigMismatchError(
        "model was trained with a different vocabulary (digest mismatch)");
  }
  return vocab;
}

}  // namespace

void run_lm_ppl(const PipelineConfig& config, const std::string& input_file,
                const std::string& prefix_file) {
  read_meta_digest(config, "lm.meta.json");
  const auto model = load_model(out_dir(config) / "lm.txt");
  const auto vocab = load_pinned_vocab(config, model);
  const auto input = read_file_bytes(input_file);
  if (!input) {
    throw UpstreamArtifactError("cannot read input file: " + input_file);
  }
  std::vector<int> prefix_ids;
  if (!prefix_file.empty()) {
    const auto prefix = read_file_bytes(prefix_file);
    if (!prefix) {
      throw UpstreamArtifactError("cannot read prefix file: " + prefix_file);
    }
    prefix_ids = encode_prompt(vocab, *prefix);
  }
  const auto ids = encode_prompt(vocab, *input);
  const double ppl = perplexity(model, ids, prefix_ids);
  std::cout << fmt::format("perplexity {:.6f} over {} tokens\n", ppl,
                           ids.size());
}

void run_lm_sample(const PipelineConfig& config,
                   const std::string& prompt_file,
                   const std::string& prompts_artifact) {
  read_meta_digest(config, "lm.meta.json");
  const auto model = load_model(out_dir(config) / "lm.txt");
  const auto vocab = load_pinned_vocab(config, model);

  SampleConfig sc;
  sc.temperature = config.temperature;
  sc.max_tokens = config.max_tokens;
  sc.num_samples = config.num_samples;
  sc.seed = config.sample_seed;
  sc.stop = config.stop_rule == "on-method-end" ? StopRule::OnMethodEnd
                                                : StopRule::OnEOS;
  sc.vocab = &vocab;

  if (!prompt_file.empty()) {
    const auto prompt = read_file_bytes(prompt_file);
    if (!prompt) {
      throw UpstreamArtifactError("cannot read prompt file: " + prompt_file);
    }
    const auto ids = encode_prompt(vocab, *prompt);
    const auto samples = sample(model, ids, sc);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      std::cout << fmt::format("--- sample {} ---\n{}\n", k,
                               decode(vocab, samples[k]));
    }
    return;
  }

  // Artifact mode: one generation tree per prompt, in the directory layout
  // the evaluate stage (and external baselines) use.
  const auto artifact =
      read_jsonl_artifact(prompts_artifact.empty()
                              ? out_dir(config) / "prompts.jsonl"
                              : fs::path{prompts_artifact},
                          config_digest(config));
  const fs::path gen_root = config.generations_dir.empty()
                                ? out_dir(config) / "generations"
                                : fs::path{config.generations_dir};
  std::size_t produced = 0;
  for (const auto& record : artifact.records) {
    const auto prompt = prompt_from_json(record);
    const auto lang =
        parse_lang(record.value("subject_language", "python")).value();
    sc.language = lang;
    const auto ids = encode_prompt(vocab, prompt.prompt_text);
    const auto samples = sample(model, ids, sc);
    const fs::path dir = gen_root / prompt.pair_id /
                         std::string{to_string(prompt.task)} /
                         std::string{to_string(prompt.context_mode)};
    fs::create_directories(dir);
    for (std::size_t k = 0; k < samples.size(); ++k) {
      write_file_bytes(dir / fmt::format("{}.txt", k),
                       decode(vocab, samples[k]));
      ++produced;
    }
  }
  write_log(config, "lm-sample",
            {fmt::format("generations {}", produced)});
  std::cout << fmt::format("lm-sample: wrote {} generations under {}\n",
                           produced, gen_root.string());
}

void run_signal_exp(const PipelineConfig& config) {
  SyntheticSpec spec;
  spec.train_pairs = config.signal_train_pairs;
  spec.heldout_pairs = config.signal_heldout_pairs;
  spec.ident_pool = config.signal_ident_pool;
  spec.defs_per_pair = config.signal_defs_per_pair;
  spec.seed = config.signal_base_seed;
  const auto data = make_synthetic_corpus(spec);

  SignalParams params;
  params.order = config.lm_order;
  params.discount = config.lm_discount;
  params.pack_length = config.context_length;
  params.seeds.clear();
  for (int s = 0; s < config.signal_seeds; ++s) {
    params.seeds.push_back(config.signal_base_seed + static_cast<std::uint64_t>(s));
  }

  const auto report = alignment_signal_experiment(
      data.aligned, data.shuffled, data.heldout, params, data.vocab_size);

  nlohmann::json seeds_json = nlohmann::json::array();
  for (const auto& r : report.per_seed) {
    seeds_json.push_back({{"seed", r.seed},
                          {"ppl_aligned", r.ppl_aligned},
                          {"ppl_shuffled", r.ppl_shuffled},
                          {"relative_delta", r.relative_delta}});
    std::cout << fmt::format(
        "seed {}: aligned ppl {:.4f} vs shuffled ppl {:.4f} (delta {:.2f}%)\n",
        r.seed, r.ppl_aligned, r.ppl_shuffled, 100.0 * r.relative_delta);
  }
  nlohmann::json j{{"config_digest", config_digest(config)},
                   {"per_seed", seeds_json},
                   {"mean_ppl_aligned", report.mean_ppl_aligned},
                   {"mean_ppl_shuffled", report.mean_ppl_shuffled},
                   {"mean_relative_delta", report.mean_relative_delta},
                   {"seeds_aligned_lower", report.seeds_aligned_lower},
                   {"seeds_total", report.per_seed.size()}};
  write_file_bytes(out_dir(config) / "signal-report.json", j.dump(2) + "\n");
  write_log(config, "signal-exp", {});
  std::cout << fmt::format(
      "signal-exp: aligned lower in {}/{} seeds, mean relative delta "
      "{:.2f}%\n",
      report.seeds_aligned_lower, report.per_seed.size(),
      100.0 * report.mean_relative_delta);
}

void run_prompts(const PipelineConfig& config) {
  const auto files = load_files_artifact(config, "kept.jsonl");
  const auto pairs_artifact = read_jsonl_artifact(
      out_dir(config) / "pairs.jsonl", config_digest(config));

  std::map<std::string, const SourceFile*> by_id;
  for (const auto& f : files) by_id.emplace(f.file_id, &f);

  // Evaluation-set construction: drop trivial pairs (a single code method
  // or a single test method), then subsample per project.
  struct EvalPair {
    CodeTestPair pair;
    std::string pair_id;
  };
  std::map<std::string, std::vector<EvalPair>> per_repo;
  std::vector<std::string> log_lines;
  for (const auto& record : pairs_artifact.records) {
    const auto pair = pair_from_json(record);
    const auto* code = by_id.at(pair.code_file_id);
    const auto* test = by_id.at(pair.test_file_id);
    if (config.eval_require_multiple_methods) {
      try {
        const auto code_outline = outline_test_file(*code);
        const auto test_outline = outline_test_file(*test);
        if (code_outline.methods.size() < 2 ||
            test_outline.methods.size() < 2) {
          log_lines.push_back(
              fmt::format("skip-pair {} single-method", pair.code_file_id));
          continue;
        }
      } catch (const UnparseableFile& e) {
        log_lines.push_back(fmt::format("skip-pair {} unparseable: {}",
                                        pair.code_file_id, e.what()));
        continue;
      }
    }
    per_repo[code->repo_id].push_back({pair, pair_key_id(pair)});
  }

  std::vector<EvalPair> selected;
  for (auto& [repo, repo_pairs] : per_repo) {
    if (config.eval_max_pairs_per_project > 0 &&
        std::cmp_greater(repo_pairs.size(),
                         config.eval_max_pairs_per_project)) {
      std::mt19937_64 rng(config.eval_subsample_seed);
      std::shuffle(repo_pairs.begin(), repo_pairs.end(), rng);
      repo_pairs.resize(
          static_cast<std::size_t>(config.eval_max_pairs_per_project));
      std::sort(repo_pairs.begin(), repo_pairs.end(),
                [](const auto& a, const auto& b) {
                  return a.pair.code_file_id < b.pair.code_file_id;
                });
    }
    selected.insert(selected.end(), repo_pairs.begin(), repo_pairs.end());
  }

  std::vector<nlohmann::json> prompt_records;
  std::size_t skipped = 0;
  for (const auto& ep : selected) {
    const auto* code = by_id.at(ep.pair.code_file_id);
    const auto* test = by_id.at(ep.pair.test_file_id);
    TestFileOutline outline;
    try {
      outline = outline_test_file(*test);
    } catch (const UnparseableFile& e) {
      log_lines.push_back(fmt::format("skip-pair {} unparseable: {}",
                                      ep.pair.test_file_id, e.what()));
      continue;
    }
    for (const Task task : {Task::FirstTest, Task::LastTest, Task::ExtraTest,
                            Task::Completion}) {
      for (const ContextMode mode :
           {ContextMode::WithCode, ContextMode::WithoutCode}) {
        std::string reason;
        const auto prompt =
            make_prompt(*code, *test, outline, task, mode, ep.pair_id,
                        config.completion_statement_index, &reason);
        if (!prompt) {
          ++skipped;
          log_lines.push_back(fmt::format("skip-prompt {} {} {}: {}",
                                          ep.pair_id, to_string(task),
                                          to_string(mode), reason));
          continue;
        }
        auto j = prompt_to_json(*prompt);
        j["code_file_id"] = ep.pair.code_file_id;
        j["test_file_id"] = ep.pair.test_file_id;
        j["repo_id"] = code->repo_id;
        j["subject_language"] = to_string(test->subject_language);
        prompt_records.push_back(std::move(j));
      }
    }
  }
  write_jsonl_artifact(out_dir(config) / "prompts.jsonl", "prompts",
                       config_digest(config), prompt_records);
  write_log(config, "prompts", log_lines);
  std::cout << fmt::format(
      "prompts: {} prompts over {} pairs ({} prompt slots skipped)\n",
      prompt_records.size(), selected.size(), skipped);
}

void run_evaluate(const PipelineConfig& config) {
  if (config.manifest_dir.empty()) {
    throw std::runtime_error("evaluate requires --manifest-dir");
  }
  const auto files = load_files_artifact(config, "kept.jsonl");
  std::map<std::string, const SourceFile*> by_id;
  for (const auto& f : files) by_id.emplace(f.file_id, &f);

  const auto prompts_artifact = read_jsonl_artifact(
      out_dir(config) / "prompts.jsonl", config_digest(config));
  const fs::path gen_root = config.generations_dir.empty()
                                ? out_dir(config) / "generations"
                                : fs::path{config.generations_dir};

  std::vector<nlohmann::json> outcome_records;
  std::vector<nlohmann::json> lexical_records;
  std::vector<nlohmann::json> survivor_records;
  std::vector<std::string> log_lines;

  // Baseline runs are shared across samples and context modes.
  std::map<std::string, BaselineRun> baseline_cache;

  for (const auto& record : prompts_artifact.records) {
    const auto prompt = prompt_from_json(record);
    const auto& code_id = record.at("code_file_id").get<std::string>();
    const auto& test_id = record.at("test_file_id").get<std::string>();
    const auto& repo_id = record.at("repo_id").get<std::string>();
    const auto* code = by_id.at(code_id);
    const auto* test = by_id.at(test_id);

    const fs::path gen_dir = gen_root / prompt.pair_id /
                             std::string{to_string(prompt.task)} /
                             std::string{to_string(prompt.context_mode)};
    if (!fs::exists(gen_dir)) continue;

    const fs::path manifest_path =
        fs::path{config.manifest_dir} / (repo_id + ".toml");
    if (!fs::exists(manifest_path)) {
      log_lines.push_back(
          fmt::format("skip {}: no manifest {}", prompt.pair_id,
                      manifest_path.string()));
      continue;
    }
    ProjectManifest manifest = load_manifest(manifest_path);
    manifest.code_file = code->rel_path;
    manifest.test_file = test->rel_path;
    manifest.subject_language = test->subject_language;

    const std::size_t gt_len =
        prompt.ground_truth ? prompt.ground_truth->size() : 0;
    const std::string baseline = make_baseline(
        test->content, {prompt.insertion_point, prompt.insertion_point + gt_len});

    const std::string cache_key =
        fmt::format("{}|{}", prompt.pair_id, to_string(prompt.task));
    auto cache_it = baseline_cache.find(cache_key);
    if (cache_it == baseline_cache.end()) {
      cache_it = baseline_cache.emplace(cache_key,
                                        run_baseline(manifest, baseline))
                     .first;
    }
    const BaselineRun& baseline_run = cache_it->second;

    std::vector<fs::path> sample_files;
    for (const auto& entry : fs::directory_iterator(gen_dir)) {
      if (entry.path().extension() == ".txt") {
        sample_files.push_back(entry.path());
      }
    }
    std::sort(sample_files.begin(), sample_files.end());

    std::vector<GenerationRecord> generation_records;
    for (const auto& sample_path : sample_files) {
      const int k = std::stoi(sample_path.stem().string());
      const auto text = read_file_bytes(sample_path);
      if (!text) continue;
      RuntimeOutcome outcome;
      if (text->empty()) {
        outcome.pair_id = prompt.pair_id;
        outcome.task = prompt.task;
        outcome.context_mode = prompt.context_mode;
        outcome.detail = "empty-generation";
      } else {
        outcome = evaluate_generation(manifest, baseline, prompt, *text,
                                      &baseline_run);
      }
      outcome.sample_k = k;
      outcome_records.push_back(outcome_to_json(outcome));
      generation_records.push_back(
          {outcome, *text, test->subject_language});

      if (prompt.ground_truth) {
        ScoredSample scored;
        scored.pair_id = prompt.pair_id;
        scored.task = prompt.task;
        scored.context_mode = prompt.context_mode;
        scored.sample_k = k;
        scored.scores = score_lexical(*text, *prompt.ground_truth,
                                      test->subject_language);
        lexical_records.push_back(scored_sample_to_json(scored));
      }
    }
    const auto survivors = filter_generations(generation_records);
    nlohmann::json surv_ks = nlohmann::json::array();
    for (const auto idx : survivors) {
      surv_ks.push_back(generation_records[idx].outcome.sample_k);
    }
    survivor_records.push_back(
        {{"pair_id", prompt.pair_id},
         {"task", to_string(prompt.task)},
         {"context_mode", to_string(prompt.context_mode)},
         {"surviving_samples", surv_ks}});
  }

  const auto digest = config_digest(config);
  write_jsonl_artifact(out_dir(config) / "outcomes.jsonl", "outcomes", digest,
                       outcome_records);
  write_jsonl_artifact(out_dir(config) / "lexical.jsonl", "lexical", digest,
                       lexical_records);
  write_jsonl_artifact(out_dir(config) / "survivors.jsonl", "survivors",
                       digest, survivor_records);
  write_log(config, "evaluate", log_lines);
  std::cout << fmt::format("evaluate: {} outcomes, {} lexical scores\n",
                           outcome_records.size(), lexical_records.size());
}

void run_report(const PipelineConfig& config) {
  const auto digest = config_digest(config);
  const auto outcomes_artifact =
      read_jsonl_artifact(out_dir(config) / "outcomes.jsonl", digest);
  const auto lexical_artifact =
      read_jsonl_artifact(out_dir(config) / "lexical.jsonl", digest);

  std::vector<RuntimeOutcome> outcomes;
  for (const auto& record : outcomes_artifact.records) {
    outcomes.push_back(outcome_from_json(record));
  }
  std::vector<ScoredSample> scores;
  for (const auto& record : lexical_artifact.records) {
    scores.push_back(scored_sample_from_json(record));
  }
  const auto report = aggregate(outcomes, scores);

  nlohmann::json cells = nlohmann::json::object();
  for (const auto& [key, c] : report.cells) {
    cells[key] = {{"total", c.total},
                  {"compiled", c.compiled},
                  {"passed", c.passed},
                  {"scored", c.scored},
                  {"mean_exact", c.mean_exact},
                  {"mean_rouge", c.mean_rouge},
                  {"mean_codebleu", c.mean_codebleu},
                  {"with_coverage_delta", c.with_delta},
                  {"mean_coverage_delta", c.mean_coverage_delta}};
  }
  nlohmann::json j{{"config_digest", digest},
                   {"lexical_metric", report.lexical_metric_note},
                   {"cells", cells}};
  write_file_bytes(out_dir(config) / "report.json", j.dump(2) + "\n");
  const auto table = render_report_table(report);
  write_file_bytes(out_dir(config) / "report.txt", table);
  write_log(config, "report", {});
  std::cout << table;
}

}  // namespace testpair::cli
