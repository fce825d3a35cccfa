// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace testpair {

namespace {

std::vector<std::string_view> ws_tokens(std::string_view text) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
    std::size_t j = i;
    while (j < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[j])))
      ++j;
    if (j > i) toks.push_back(text.substr(i, j - i));
    i = j;
  }
  return toks;
}

// Whitespace+punctuation splitting: identifier/number runs stay whole, every
// other visible char is its own token.
std::vector<std::string_view> code_tokens(std::string_view text) {
  std::vector<std::string_view> toks;
  std::size_t i = 0;
  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (is_word(c)) {
      std::size_t j = i;
      while (j < text.size() && is_word(text[j])) ++j;
      toks.push_back(text.substr(i, j - i));
      i = j;
    } else {
      toks.push_back(text.substr(i, 1));
      ++i;
    }
  }
  return toks;
}

std::size_t lcs_length(std::span<const std::string_view> a,
                       std::span<const std::string_view> b) {
  if (a.empty() || b.empty()) return 0;
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

const std::vector<std::string>& keywords_for(Lang lang) {
  static const std::vector<std::string> kPython = {
      "False",  "None",   "True",    "and",    "as",     "assert", "async",
      "await",  "break",  "class",   "continue", "def",  "del",    "elif",
      "else",   "except", "finally", "for",    "from",   "global", "if",
      "import", "in",     "is",      "lambda", "nonlocal", "not",  "or",
      "pass",   "raise",  "return",  "try",    "while",  "with",   "yield"};
  static const std::vector<std::string> kJava = {
      "abstract", "assert",  "boolean", "break",    "byte",   "case",
      "catch",    "char",    "class",   "const",    "continue", "default",
      "do",       "double",  "else",    "enum",     "extends", "final",
      "finally",  "float",   "for",     "if",       "implements", "import",
      "instanceof", "int",   "interface", "long",   "native", "new",
      "package",  "private", "protected", "public", "return", "short",
      "static",   "strictfp", "super",  "switch",   "synchronized", "this",
      "throw",    "throws",  "transient", "try",    "void",   "volatile",
      "while"};
  return lang == Lang::Python ? kPython : kJava;
}

bool is_keyword(std::string_view tok, Lang lang) {
  const auto& kws = keywords_for(lang);
  return std::find(kws.begin(), kws.end(), tok) != kws.end();
}

struct NgramKey {
  std::string joined;
  bool operator==(const NgramKey&) const = default;
};

struct NgramHash {
  std::size_t operator()(const NgramKey& k) const {
    return std::hash<std::string>{}(k.joined);
  }
};

NgramKey make_ngram(std::span<const std::string_view> toks, std::size_t i,
                    std::size_t n) {
  std::string joined;
  for (std::size_t k = 0; k < n; ++k) {
    if (k > 0) joined.push_back('\x1f');
    joined += toks[i + k];
  }
  return {std::move(joined)};
}

// Add-one smoothed modified n-gram precision, optionally weighting n-grams
// that contain a language keyword.
double bleu4(std::span<const std::string_view> gen,
             std::span<const std::string_view> gold, Lang lang,
             bool keyword_weighted) {
  constexpr double kKeywordWeight = 2.0;
  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    std::unordered_map<NgramKey, double, NgramHash> gold_counts;
    if (gold.size() >= n) {
      for (std::size_t i = 0; i + n <= gold.size(); ++i) {
        NgramKey key = make_ngram(gold, i, n);
        gold_counts[key] += 1.0;
      }
    }
    double matched = 0.0;
    double total = 0.0;
    std::unordered_map<NgramKey, double, NgramHash> used;
    for (std::size_t i = 0; i + n <= gen.size() && gen.size() >= n; ++i) {
      NgramKey key = make_ngram(gen, i, n);
      double weight = 1.0;
      if (keyword_weighted) {
        for (std::size_t k = 0; k < n; ++k) {
          if (is_keyword(gen[i + k], lang)) {
            weight = kKeywordWeight;
            break;
          }
        }
      }
      total += weight;
      const auto it = gold_counts.find(key);
      if (it != gold_counts.end() && used[key] < it->second) {
        used[key] += 1.0;
        matched += weight;
      }
    }
    log_sum += std::log((matched + 1.0) / (total + 1.0));
  }
  const double precision = std::exp(log_sum / 4.0);
  const double bp =
      gen.size() >= gold.size()
          ? 1.0
          : std::exp(1.0 - static_cast<double>(gold.size()) /
                               static_cast<double>(gen.size()));
  return bp * precision;
}

// --- block trees -----------------------------------------------------
// Structure-only nesting: braces for Java, indentation for Python. The
// shape of a subtree is "(" + child shapes + ")"; the syntax component is
// the multiset overlap of subtree shapes against the gold tree.

void java_brackets(std::string_view text, std::string& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      const auto nl = text.find('\n', i);
      i = nl == std::string_view::npos ? text.size() : nl + 1;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      const auto close = text.find("*/", i + 2);
      i = close == std::string_view::npos ? text.size() : close + 2;
      continue;
    }
    if (c == '"' || c == '\'') {
      const char quote = c;
      ++i;
      while (i < text.size() && text[i] != quote) {
        i += text[i] == '\\' ? 2 : 1;
      }
      ++i;
      continue;
    }
    if (c == '{') out.push_back('(');
    if (c == '}') out.push_back(')');
    ++i;
  }
}

void python_brackets(std::string_view text, std::string& out) {
  std::vector<std::size_t> stack = {0};
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    const std::size_t indent = line.find_first_not_of(" \t");
    if (indent == std::string_view::npos) continue;  // blank
    if (indent > stack.back()) {
      stack.push_back(indent);
      out.push_back('(');
    } else {
      while (stack.size() > 1 && indent < stack.back()) {
        stack.pop_back();
        out.push_back(')');
      }
    }
  }
  while (stack.size() > 1) {
    stack.pop_back();
    out.push_back(')');
  }
}

// Collects subtree shapes of a (tolerantly parsed) bracket string, plus the
// implicit root, into a multiset.
void collect_shapes(std::string_view brackets,
                    std::unordered_map<std::string, std::int64_t>& shapes) {
  std::vector<std::string> stack;
  stack.emplace_back("(");
  for (const char c : brackets) {
    if (c == '(') {
      stack.emplace_back("(");
    } else {
      if (stack.size() <= 1) continue;  // stray closer
      std::string done = std::move(stack.back());
      stack.pop_back();
      done.push_back(')');
      ++shapes[done];
      stack.back() += done;
    }
  }
  while (stack.size() > 1) {  // close unbalanced openers
    std::string done = std::move(stack.back());
    stack.pop_back();
    done.push_back(')');
    ++shapes[done];
    stack.back() += done;
  }
  stack.back().push_back(')');
  ++shapes[stack.back()];
}

double syntax_match(std::string_view gen, std::string_view gold, Lang lang) {
  std::string gb, db;
  if (lang == Lang::Java) {
    java_brackets(gen, gb);
    java_brackets(gold, db);
  } else {
    python_brackets(gen, gb);
    python_brackets(gold, db);
  }
  std::unordered_map<std::string, std::int64_t> gen_shapes, gold_shapes;
  collect_shapes(gb, gen_shapes);
  collect_shapes(db, gold_shapes);
  std::int64_t matched = 0;
  std::int64_t total = 0;
  for (const auto& [shape, count] : gold_shapes) {
    total += count;
    const auto it = gen_shapes.find(shape);
    if (it != gen_shapes.end()) matched += std::min(count, it->second);
  }
  return total == 0 ? 0.0
                    : static_cast<double>(matched) /
                          static_cast<double>(total);
}

}  // namespace

bool exact_match(std::string_view gen, std::string_view gold) {
  return ws_tokens(gen) == ws_tokens(gold);
}

double rouge_l(std::string_view gen, std::string_view gold) {
  const auto a = ws_tokens(gen);
  const auto b = ws_tokens(gold);
  if (a.empty() || b.empty()) return 0.0;
  const auto lcs = static_cast<double>(lcs_length(a, b));
  const double p = lcs / static_cast<double>(a.size());
  const double r = lcs / static_cast<double>(b.size());
  if (p + r == 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

std::pair<double, CodeBleuComponents> codebleu_lite(std::string_view gen,
                                                    std::string_view gold,
                                                    Lang lang) {
  CodeBleuComponents comps;
  const auto gen_toks = code_tokens(gen);
  const auto gold_toks = code_tokens(gold);
  if (gen_toks.empty()) return {0.0, comps};
  comps.ngram = bleu4(gen_toks, gold_toks, lang, /*keyword_weighted=*/false);
  comps.weighted_ngram =
      bleu4(gen_toks, gold_toks, lang, /*keyword_weighted=*/true);
  comps.syntax_match = syntax_match(gen, gold, lang);
  const double score =
      (comps.ngram + comps.weighted_ngram + comps.syntax_match) / 3.0;
  return {score, comps};
}

LexicalScores score_lexical(std::string_view gen, std::string_view gold,
                            Lang lang) {
  LexicalScores s;
  s.exact = exact_match(gen, gold);
  if (s.exact) {
    s.rouge = 1.0;
    s.codebleu = 1.0;
    s.components = {1.0, 1.0, 1.0};
    return s;
  }
  s.rouge = rouge_l(gen, gold);
  const auto [score, comps] = codebleu_lite(gen, gold, lang);
  s.codebleu = score;
  s.components = comps;
  return s;
}

EvalReport aggregate(std::span<const RuntimeOutcome> outcomes,
                     std::span<const ScoredSample> scores) {
  EvalReport report;
  std::unordered_map<std::string, bool> outcome_keys;
  auto key_of = [](const std::string& pair_id, Task task, ContextMode mode,
                   int k) {
    return fmt::format("{}|{}|{}|{}", pair_id, to_string(task),
                       to_string(mode), k);
  };
  auto cell_key = [](Task task, ContextMode mode) {
    return fmt::format("{}/{}", to_string(task), to_string(mode));
  };

  for (const auto& o : outcomes) {
    outcome_keys[key_of(o.pair_id, o.task, o.context_mode, o.sample_k)] = true;
    auto& cell = report.cells[cell_key(o.task, o.context_mode)];
    ++cell.total;
    if (o.compiled) ++cell.compiled;
    if (o.passed) ++cell.passed;
    if (o.passed && o.coverage_delta.has_value()) {
      ++cell.with_delta;
      cell.mean_coverage_delta += *o.coverage_delta;
    }
  }
  for (const auto& s : scores) {
    if (!outcome_keys.contains(
            key_of(s.pair_id, s.task, s.context_mode, s.sample_k))) {
      throw std::runtime_error(fmt::format(
          "lexical score for ({}, {}, {}, {}) has no runtime outcome",
          s.pair_id, to_string(s.task), to_string(s.context_mode),
          s.sample_k));
    }
    auto& cell = report.cells[cell_key(s.task, s.context_mode)];
    ++cell.scored;
    cell.mean_exact += s.scores.exact ? 1.0 : 0.0;
    cell.mean_rouge += s.scores.rouge;
    cell.mean_codebleu += s.scores.codebleu;
  }
  for (auto& [key, cell] : report.cells) {
    if (cell.scored > 0) {
      cell.mean_exact /= static_cast<double>(cell.scored);
      cell.mean_rouge /= static_cast<double>(cell.scored);
      cell.mean_codebleu /= static_cast<double>(cell.scored);
    }
    if (cell.with_delta > 0) {
      cell.mean_coverage_delta /= static_cast<double>(cell.with_delta);
    }
  }
  return report;
}

std::string render_report_table(const EvalReport& report) {
  std::string out;
  out += fmt::format("{:<28} {:>9} {:>7} {:>7} {:>8} {:>6} {:>9}\n",
                     "task/context", "CodeBLEU", "XMatch", "Rouge", "Compile",
                     "Pass", "CovDelta");
  for (const auto& [key, c] : report.cells) {
    out += fmt::format(
        "{:<28} {:>8.1f}% {:>6.1f}% {:>6.1f}% {:>8} {:>6} {:>8.3f}\n", key,
        100.0 * c.mean_codebleu, 100.0 * c.mean_exact, 100.0 * c.mean_rouge,
        c.compiled, c.passed, c.mean_coverage_delta);
  }
  out += fmt::format("(lexical metric: {})\n", report.lexical_metric_note);
  return out;
}

}  // namespace testpair
