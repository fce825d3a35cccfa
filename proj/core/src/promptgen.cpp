// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/promptgen.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>

#include "testpair/tokenizer.hpp"
#include "testpair/util.hpp"

namespace testpair {

std::size_t TestFileOutline::test_method_count() const {
  return static_cast<std::size_t>(
      std::count_if(methods.begin(), methods.end(),
                    [](const MethodSpan& m) { return m.is_test; }));
}

std::string_view to_string(Task task) {
  switch (task) {
    case Task::FirstTest: return "first-test";
    case Task::LastTest: return "last-test";
    case Task::ExtraTest: return "extra-test";
    case Task::Completion: return "completion";
  }
  return "?";
}

std::string_view to_string(ContextMode mode) {
  return mode == ContextMode::WithCode ? "with-code" : "without-code";
}

std::optional<Task> parse_task(std::string_view s) {
  if (s == "first-test") return Task::FirstTest;
  if (s == "last-test") return Task::LastTest;
  if (s == "extra-test") return Task::ExtraTest;
  if (s == "completion") return Task::Completion;
  return std::nullopt;
}

std::optional<ContextMode> parse_context_mode(std::string_view s) {
  if (s == "with-code") return ContextMode::WithCode;
  if (s == "without-code") return ContextMode::WithoutCode;
  return std::nullopt;
}

namespace {

struct LineInfo {
  std::size_t begin = 0;  // first byte of the line
  std::size_t end = 0;    // byte after last content char (before '\n')
  std::size_t next = 0;   // first byte of the following line
  std::size_t indent = 0;
  bool blank = true;
  std::string_view text;  // without the newline
};

std::vector<LineInfo> scan_lines(std::string_view content, bool python) {
  std::vector<LineInfo> lines;
  std::size_t pos = 0;
  while (pos < content.size()) {
    LineInfo li;
    li.begin = pos;
    std::size_t nl = content.find('\n', pos);
    if (nl == std::string_view::npos) {
      li.end = content.size();
      li.next = content.size();
    } else {
      li.end = nl;
      li.next = nl + 1;
    }
    li.text = content.substr(li.begin, li.end - li.begin);
    bool saw_space = false;
    bool saw_tab = false;
    std::size_t i = 0;
    while (i < li.text.size() &&
           (li.text[i] == ' ' || li.text[i] == '\t')) {
      (li.text[i] == ' ' ? saw_space : saw_tab) = true;
      ++i;
    }
    li.indent = i;
    li.blank = li.text.find_first_not_of(" \t\r") == std::string_view::npos;
    if (python && !li.blank && saw_space && saw_tab) {
      throw UnparseableFile("tab/space mix in indentation");
    }
    lines.push_back(li);
    pos = li.next;
  }
  return lines;
}

std::string_view stripped(const LineInfo& li) {
  std::string_view s = li.text.substr(li.indent);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

bool is_comment_line(const LineInfo& li, Lang lang) {
  const auto s = stripped(li);
  if (lang == Lang::Python) return s.starts_with("#");
  return s.starts_with("//") || s.starts_with("*") || s.starts_with("/*");
}

// ---------------------------------------------------------------- Python

bool is_def_line(std::string_view s) {
  return s.starts_with("def ") || s.starts_with("async def ");
}

std::string def_name(std::string_view s) {
  std::size_t start = s.starts_with("async def ") ? 10 : 4;
  std::size_t end = start;
  while (end < s.size() &&
         (std::isalnum(static_cast<unsigned char>(s[end])) || s[end] == '_')) {
    ++end;
  }
  return std::string{s.substr(start, end - start)};
}

TestFileOutline outline_python(std::string_view content,
                               std::string file_id) {
  const auto lines = scan_lines(content, /*python=*/true);
  TestFileOutline outline;
  outline.file_id = std::move(file_id);
  outline.file_size = content.size();

  struct Block {
    std::size_t indent;
    bool is_class;
  };
  std::vector<Block> stack;

  std::size_t li = 0;
  while (li < lines.size()) {
    const auto& line = lines[li];
    if (line.blank || is_comment_line(line, Lang::Python)) {
      ++li;
      continue;
    }
    while (!stack.empty() && line.indent <= stack.back().indent) {
      stack.pop_back();
    }
    const auto s = stripped(line);
    if (s.starts_with("class ") || s.starts_with("class:")) {
      stack.push_back({line.indent, true});
      ++li;
      continue;
    }
    const bool class_nested = !stack.empty() && stack.back().is_class;
    if (is_def_line(s) && (line.indent == 0 || class_nested)) {
      // Pull in directly preceding decorator lines at the same indent.
      std::size_t first = li;
      while (first > 0 && !lines[first - 1].blank &&
             lines[first - 1].indent == line.indent &&
             stripped(lines[first - 1]).starts_with("@")) {
        --first;
      }
      // Body: lines more indented than the def, until the first non-blank
      // line at or below the def's indent.
      std::size_t last_body = li;
      std::size_t k = li + 1;
      while (k < lines.size()) {
        if (lines[k].blank) {
          ++k;
          continue;
        }
        if (lines[k].indent <= line.indent) break;
        last_body = k;
        ++k;
      }
      MethodSpan m;
      m.name = def_name(s);
      m.begin = lines[first].begin;
      m.end = lines[last_body].next;
      m.is_test = m.name.starts_with("test");
      outline.methods.push_back(std::move(m));
      li = last_body + 1;
      continue;
    }
    ++li;
  }

  outline.preamble_end =
      outline.methods.empty() ? content.size() : outline.methods.front().begin;
  outline.trailing_begin =
      outline.methods.empty() ? content.size() : outline.methods.back().end;
  return outline;
}

// ------------------------------------------------------------------ Java

bool word_in(std::string_view text, std::string_view word) {
  std::size_t pos = 0;
  while ((pos = text.find(word, pos)) != std::string_view::npos) {
    const bool left_ok =
        pos == 0 || !(std::isalnum(static_cast<unsigned char>(text[pos - 1])) ||
                      text[pos - 1] == '_' || text[pos - 1] == '$');
    const std::size_t after = pos + word.size();
    const bool right_ok =
        after >= text.size() ||
        !(std::isalnum(static_cast<unsigned char>(text[after])) ||
          text[after] == '_' || text[after] == '$');
    if (left_ok && right_ok) return true;
    pos += word.size();
  }
  return false;
}

bool is_control_word(std::string_view name) {
  static constexpr std::string_view kWords[] = {
      "if", "for", "while", "switch", "catch", "try",
      "do", "else", "synchronized", "return", "new", "finally"};
  return std::find(std::begin(kWords), std::end(kWords), name) !=
         std::end(kWords);
}

struct JavaHeader {
  bool class_like = false;
  bool method_like = false;
  bool test_annotated = false;
  std::string name;
};

JavaHeader classify_java_header(std::string_view header) {
  JavaHeader h;
  if (word_in(header, "class") || word_in(header, "interface") ||
      word_in(header, "enum") || word_in(header, "record")) {
    h.class_like = true;
    return h;
  }
  // Assignments and anonymous classes, judged outside parentheses.
  int pdepth = 0;
  std::size_t first_paren = std::string_view::npos;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const char c = header[i];
    if (c == '(') {
      if (pdepth == 0 && first_paren == std::string_view::npos)
        first_paren = i;
      ++pdepth;
    } else if (c == ')') {
      --pdepth;
    } else if (c == '=' && pdepth == 0) {
      return h;
    }
  }
  if (first_paren == std::string_view::npos) return h;
  if (word_in(header, "new")) return h;

  std::size_t e = first_paren;
  while (e > 0 && std::isspace(static_cast<unsigned char>(header[e - 1]))) --e;
  std::size_t b = e;
  while (b > 0 && (std::isalnum(static_cast<unsigned char>(header[b - 1])) ||
                   header[b - 1] == '_' || header[b - 1] == '$')) {
    --b;
  }
  if (b == e) return h;
  h.name = std::string{header.substr(b, e - b)};
  if (is_control_word(h.name)) return h;
  h.method_like = true;
  h.test_annotated = word_in(header, "@Test");
  return h;
}

TestFileOutline outline_java(std::string_view content, std::string file_id) {
  TestFileOutline outline;
  outline.file_id = std::move(file_id);
  outline.file_size = content.size();

  enum class BlockKind { ClassLike, Method, Other };
  struct OpenBlock {
    BlockKind kind;
    std::size_t method_index = SIZE_MAX;  // into outline.methods when Method
  };
  std::vector<OpenBlock> stack;
  std::size_t header_start = 0;

  auto line_start_of = [&](std::size_t pos) {
    const std::size_t nl = content.rfind('\n', pos == 0 ? 0 : pos - 1);
    return nl == std::string_view::npos ? 0 : nl + 1;
  };

  std::size_t i = 0;
  while (i < content.size()) {
    const char c = content[i];
    if (c == '/' && i + 1 < content.size() && content[i + 1] == '/') {
      const auto nl = content.find('\n', i);
      i = nl == std::string_view::npos ? content.size() : nl + 1;
      continue;
    }
    if (c == '/' && i + 1 < content.size() && content[i + 1] == '*') {
      const auto close = content.find("*/", i + 2);
      i = close == std::string_view::npos ? content.size() : close + 2;
      continue;
    }
    if (c == '"' || c == '\'') {
      if (c == '"' && content.substr(i, 3) == "\"\"\"") {
        const auto close = content.find("\"\"\"", i + 3);
        i = close == std::string_view::npos ? content.size() : close + 3;
        continue;
      }
      const char quote = c;
      ++i;
      while (i < content.size() && content[i] != quote) {
        i += content[i] == '\\' ? 2 : 1;
      }
      ++i;
      continue;
    }
    if (c == ';') {
      header_start = i + 1;
      ++i;
      continue;
    }
    if (c == '{') {
      const std::string_view header =
          content.substr(header_start, i - header_start);
      const JavaHeader h = classify_java_header(header);
      const bool parent_class =
          !stack.empty() && stack.back().kind == BlockKind::ClassLike;
      if (h.class_like) {
        stack.push_back({BlockKind::ClassLike});
      } else if (h.method_like && parent_class) {
        const std::size_t first_char =
            header.find_first_not_of(" \t\r\n");
        MethodSpan m;
        m.name = h.name;
        m.begin = line_start_of(header_start +
                                (first_char == std::string_view::npos
                                     ? 0
                                     : first_char));
        m.is_test = h.test_annotated || h.name.starts_with("test");
        outline.methods.push_back(std::move(m));
        stack.push_back({BlockKind::Method, outline.methods.size() - 1});
      } else {
        stack.push_back({BlockKind::Other});
      }
      header_start = i + 1;
      ++i;
      continue;
    }
    if (c == '}') {
      if (stack.empty()) throw UnparseableFile("unbalanced '}'");
      const OpenBlock block = stack.back();
      stack.pop_back();
      if (block.kind == BlockKind::Method) {
        std::size_t end = i + 1;
        // Take the rest of the line when only whitespace follows the brace.
        std::size_t k = end;
        while (k < content.size() &&
               (content[k] == ' ' || content[k] == '\t' ||
                content[k] == '\r')) {
          ++k;
        }
        if (k < content.size() && content[k] == '\n') end = k + 1;
        outline.methods[block.method_index].end = end;
      }
      header_start = i + 1;
      ++i;
      continue;
    }
    ++i;
  }
  if (!stack.empty()) throw UnparseableFile("unbalanced '{' at end of file");

  outline.preamble_end =
      outline.methods.empty() ? content.size() : outline.methods.front().begin;
  outline.trailing_begin =
      outline.methods.empty() ? content.size() : outline.methods.back().end;
  return outline;
}

}  // namespace

TestFileOutline outline_source(std::string_view content, Lang lang,
                               std::string file_id) {
  return lang == Lang::Python ? outline_python(content, std::move(file_id))
                              : outline_java(content, std::move(file_id));
}

TestFileOutline outline_test_file(const SourceFile& file) {
  return outline_source(file.content, file.subject_language, file.file_id);
}

bool first_method_complete(std::string_view text, Lang lang) {
  TestFileOutline outline;
  try {
    outline = outline_source(text, lang);
  } catch (const UnparseableFile&) {
    return false;
  }
  if (outline.methods.empty()) return false;
  if (lang == Lang::Java) return outline.methods.front().end != 0;
  if (outline.methods.size() > 1) return true;
  // A Python block only provably closed once dedented content follows it.
  const auto rest = text.substr(outline.methods.front().end);
  return rest.find_first_not_of(" \t\r\n") != std::string_view::npos;
}

namespace {

// Bracket balance of a line with strings and comments blanked out.
int bracket_delta(std::string_view line, Lang lang, bool* backslash_cont) {
  int delta = 0;
  bool in_str = false;
  char quote = 0;
  char last_nonws = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_str) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        in_str = false;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      in_str = true;
      quote = c;
      last_nonws = c;
      continue;
    }
    if (lang == Lang::Python && c == '#') break;
    if (lang == Lang::Java && c == '/' && i + 1 < line.size() &&
        line[i + 1] == '/') {
      break;
    }
    if (c == '(' || c == '[' || c == '{') ++delta;
    if (c == ')' || c == ']' || c == '}') --delta;
    if (!std::isspace(static_cast<unsigned char>(c))) last_nonws = c;
  }
  if (backslash_cont) *backslash_cont = last_nonws == '\\';
  return delta;
}

char last_code_char(std::string_view line, Lang lang) {
  bool in_str = false;
  char quote = 0;
  char last = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_str) {
      if (c == '\\') {
        ++i;
      } else if (c == quote) {
        in_str = false;
        last = c;
      }
      continue;
    }
    if (c == '"' || c == '\'') {
      in_str = true;
      quote = c;
      continue;
    }
    if (lang == Lang::Java && c == '/' && i + 1 < line.size() &&
        line[i + 1] == '/') {
      break;
    }
    if (lang == Lang::Python && c == '#') break;
    if (!std::isspace(static_cast<unsigned char>(c))) last = c;
  }
  return last;
}

}  // namespace

std::vector<StatementSpan> method_statements(std::string_view content,
                                             const MethodSpan& method,
                                             Lang lang) {
  std::vector<StatementSpan> stmts;
  const std::string_view body_region =
      content.substr(method.begin, method.end - method.begin);
  const auto lines = scan_lines(body_region, /*python=*/false);

  // Locate the header line: the def line for Python, the line with the
  // opening '{' for Java (annotations precede it).
  std::size_t body_first = lines.size();
  if (lang == Lang::Python) {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (is_def_line(stripped(lines[i]))) {
        body_first = i + 1;
        break;
      }
    }
  } else {
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (lines[i].text.find('{') != std::string_view::npos) {
        body_first = i + 1;
        break;
      }
    }
  }

  std::size_t i = body_first;
  int depth = 0;
  bool cont = false;
  std::optional<std::size_t> stmt_begin;
  auto close_stmt = [&](std::size_t end_line) {
    if (!stmt_begin) return;
    stmts.push_back({method.begin + lines[*stmt_begin].begin,
                     method.begin + lines[end_line].next});
    stmt_begin.reset();
  };
  for (; i < lines.size(); ++i) {
    const auto& line = lines[i];
    if (lang == Lang::Java && i + 1 == lines.size()) break;  // closing '}'
    if (!stmt_begin && (line.blank || is_comment_line(line, lang))) continue;
    if (!stmt_begin) stmt_begin = i;
    bool backslash = false;
    depth += bracket_delta(stripped(line), lang, &backslash);
    if (lang == Lang::Python) {
      cont = backslash || depth > 0;
      if (!cont) close_stmt(i);
    } else {
      const char last = last_code_char(stripped(line), lang);
      if (depth <= 0 && (last == ';' || last == '{' || last == '}')) {
        close_stmt(i);
        depth = 0;
      }
    }
  }
  if (lang == Lang::Python && stmt_begin && !lines.empty()) {
    close_stmt(lines.size() - 1);
  }
  return stmts;
}

std::optional<TaskTarget> task_target(const TestFileOutline& outline,
                                      std::string_view content, Lang lang,
                                      Task task, int statement_index,
                                      std::string* skip_reason) {
  auto skip = [&](std::string reason) -> std::optional<TaskTarget> {
    if (skip_reason) *skip_reason = std::move(reason);
    return std::nullopt;
  };
  std::vector<const MethodSpan*> tests;
  for (const auto& m : outline.methods) {
    if (m.is_test) tests.push_back(&m);
  }
  switch (task) {
    case Task::FirstTest: {
      if (tests.empty()) return skip("no-test-methods");
      return TaskTarget{tests.front()->begin, tests.front()->end};
    }
    case Task::LastTest: {
      if (tests.size() < 2) return skip("fewer-than-two-tests");
      return TaskTarget{tests.back()->begin, tests.back()->end};
    }
    case Task::ExtraTest: {
      if (tests.empty()) return skip("no-test-methods");
      return TaskTarget{tests.back()->end, tests.back()->end};
    }
    case Task::Completion: {
      if (tests.empty()) return skip("no-test-methods");
      const auto stmts = method_statements(content, *tests.back(), lang);
      if (statement_index < 0 ||
          std::cmp_greater_equal(statement_index, stmts.size())) {
        return skip("statement-index-out-of-range");
      }
      const auto& s = stmts[static_cast<std::size_t>(statement_index)];
      return TaskTarget{s.begin, s.end};
    }
  }
  return skip("unknown-task");
}

std::optional<TaskPrompt> make_prompt(const SourceFile& code_file,
                                      const SourceFile& test_file,
                                      const TestFileOutline& outline,
                                      Task task, ContextMode mode,
                                      std::string pair_id,
                                      int statement_index,
                                      std::string* skip_reason) {
  const auto target =
      task_target(outline, test_file.content, test_file.subject_language,
                  task, statement_index, skip_reason);
  if (!target) return std::nullopt;

  TaskPrompt prompt;
  prompt.task = task;
  prompt.context_mode = mode;
  prompt.pair_id = std::move(pair_id);
  prompt.insertion_point = target->begin;

  const std::string_view test_part =
      task == Task::ExtraTest
          ? std::string_view{test_file.content}
          : std::string_view{test_file.content}.substr(0, target->begin);
  if (mode == ContextMode::WithCode) {
    prompt.prompt_text = code_file.content;
    prompt.prompt_text += Vocabulary::kSepText;
    prompt.prompt_text += test_part;
  } else {
    prompt.prompt_text = std::string{test_part};
  }
  if (task != Task::ExtraTest) {
    prompt.ground_truth =
        test_file.content.substr(target->begin, target->end - target->begin);
  }
  return prompt;
}

std::string make_baseline(std::string_view test_content,
                          const TaskTarget& target) {
  std::string out;
  out.reserve(test_content.size() - (target.end - target.begin));
  out += test_content.substr(0, target.begin);
  out += test_content.substr(target.end);
  return out;
}

std::vector<int> encode_prompt(const Vocabulary& vocab,
                               std::string_view prompt_text) {
  const auto sep = prompt_text.find(Vocabulary::kSepText);
  if (sep == std::string_view::npos) return encode(vocab, prompt_text);
  auto ids = encode(vocab, prompt_text.substr(0, sep));
  ids.push_back(Vocabulary::kSepId);
  const auto rest =
      encode(vocab, prompt_text.substr(sep + Vocabulary::kSepText.size()));
  ids.insert(ids.end(), rest.begin(), rest.end());
  return ids;
}

namespace {

// Indentation the injected text should sit at, inferred from the baseline.
// Method-like generations align with the previous method at its own block
// level (per the outline scanner, so nested local defs cannot mislead), or
// one level inside the nearest class header when no method precedes.
// Statement-like ones align with the last non-blank line, one level deeper
// when that line opens a block.
std::size_t python_target_indent(std::string_view baseline,
                                 std::size_t insertion_point,
                                 bool method_like) {
  const auto before = baseline.substr(0, insertion_point);
  if (method_like) {
    try {
      const auto outline = outline_python(baseline, {});
      const MethodSpan* last = nullptr;
      for (const auto& m : outline.methods) {
        if (m.end <= insertion_point) last = &m;
      }
      if (last) {
        std::size_t indent = 0;
        while (last->begin + indent < baseline.size() &&
               baseline[last->begin + indent] == ' ') {
          ++indent;
        }
        return indent;
      }
    } catch (const UnparseableFile&) {
      // fall through to the line scan
    }
    const auto lines = scan_lines(before, /*python=*/false);
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
      if (it->blank) continue;
      const auto s = stripped(*it);
      if (s.starts_with("class ") || s.starts_with("class:")) {
        return it->indent + 4;
      }
    }
    return 0;
  }
  const auto lines = scan_lines(before, /*python=*/false);
  for (auto it = lines.rbegin(); it != lines.rend(); ++it) {
    if (it->blank) continue;
    const auto s = stripped(*it);
    return s.ends_with(":") ? it->indent + 4 : it->indent;
  }
  return 0;
}

}  // namespace

std::string inject_generation(std::string_view baseline_file,
                              std::size_t insertion_point,
                              std::string_view generated, Lang lang) {
  if (insertion_point > baseline_file.size()) {
    throw std::invalid_argument(
        fmt::format("insertion point {} outside baseline of {} bytes",
                    insertion_point, baseline_file.size()));
  }
  if (generated.empty()) {
    throw std::invalid_argument("refusing to inject an empty generation");
  }

  std::string block{generated};
  if (lang == Lang::Python) {
    const auto gen_lines = scan_lines(block, /*python=*/false);
    std::size_t base_indent = 0;
    bool method_like = false;
    for (const auto& li : gen_lines) {
      if (li.blank) continue;
      base_indent = li.indent;
      const auto s = stripped(li);
      method_like = s.starts_with("@") || is_def_line(s);
      break;
    }
    const std::size_t target =
        python_target_indent(baseline_file, insertion_point, method_like);
    if (target != base_indent) {
      std::string shifted;
      shifted.reserve(block.size());
      for (const auto& li : gen_lines) {
        std::string_view line =
            std::string_view{block}.substr(li.begin, li.next - li.begin);
        if (li.blank) {
          shifted += line;
          continue;
        }
        if (target > base_indent) {
          shifted.append(target - base_indent, ' ');
          shifted += line;
        } else {
          const std::size_t cut =
              std::min(base_indent - target, li.indent);
          shifted += line.substr(cut);
        }
      }
      block = std::move(shifted);
    }
  }

  std::string out;
  out.reserve(baseline_file.size() + block.size());
  out += baseline_file.substr(0, insertion_point);
  out += block;
  out += baseline_file.substr(insertion_point);
  return out;
}

}  // namespace testpair
