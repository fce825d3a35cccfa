// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "testpair/tokenizer.hpp"
#include "testpair/types.hpp"

namespace testpair {

// Raised for files the lightweight scanners cannot delimit: unbalanced
// braces (Java) or tab/space-ambiguous indentation (Python). Such files are
// excluded from evaluation and counted, never silently mangled.
class UnparseableFile : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MethodSpan {
  std::string name;
  std::size_t begin = 0;  // includes decorators/annotations
  std::size_t end = 0;    // one past the final body byte (incl. its newline)
  bool is_test = false;
};

// Byte-exact outline: methods are disjoint, ordered sub-ranges of the file;
// everything before the first method is preamble, everything after the last
// is trailing, and inter-method gaps are preserved verbatim, so the original
// file is always reconstructible from the outline plus the content.
struct TestFileOutline {
  std::string file_id;
  std::size_t file_size = 0;
  std::size_t preamble_end = 0;    // preamble = [0, preamble_end)
  std::vector<MethodSpan> methods;
  std::size_t trailing_begin = 0;  // trailing = [trailing_begin, file_size)

  std::size_t test_method_count() const;
};

// Python: module-level and class-nested functions found by indentation-block
// scanning, is_test iff the name starts with "test". Java: methods found by
// string/comment-aware brace matching, is_test iff annotated @Test or the
// name starts with "test".
TestFileOutline outline_source(std::string_view content, Lang lang,
                               std::string file_id = {});
TestFileOutline outline_test_file(const SourceFile& file);

// Whether a generated fragment already contains one complete method —
// the stop criterion used for method-bounded sampling.
bool first_method_complete(std::string_view text, Lang lang);

// Logical statements of a method body; physical lines are grouped while a
// statement is syntactically open (backslash or bracket continuation for
// Python, missing ;/{/} terminator for Java). Comment-only and blank lines
// are not statements.
struct StatementSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};
std::vector<StatementSpan> method_statements(std::string_view content,
                                             const MethodSpan& method,
                                             Lang lang);

enum class Task { FirstTest, LastTest, ExtraTest, Completion };
enum class ContextMode { WithCode, WithoutCode };

std::string_view to_string(Task task);
std::string_view to_string(ContextMode mode);
std::optional<Task> parse_task(std::string_view s);
std::optional<ContextMode> parse_context_mode(std::string_view s);

struct TaskPrompt {
  Task task = Task::FirstTest;
  ContextMode context_mode = ContextMode::WithCode;
  std::string prompt_text;
  std::optional<std::string> ground_truth;  // absent for ExtraTest
  std::size_t insertion_point = 0;          // byte offset into the baseline
  std::string pair_id;
};

// The file region a task removes (First/Last: the target test method;
// Completion: the target statement; ExtraTest: an empty span after the last
// test). The baseline file is the original with this span cut out, and the
// insertion point is its begin, so splicing the ground truth back in
// reproduces the original byte-exactly.
struct TaskTarget {
  std::size_t begin = 0;
  std::size_t end = 0;
};

std::optional<TaskTarget> task_target(const TestFileOutline& outline,
                                      std::string_view content, Lang lang,
                                      Task task, int statement_index = 0,
                                      std::string* skip_reason = nullptr);

// Prompt text: the test file up to the target (the full file for ExtraTest),
// prefixed for WithCode by the entire code file and one separator token.
// Returns nullopt with a reason for precondition violations (e.g. LastTest
// on a file with fewer than two tests).
std::optional<TaskPrompt> make_prompt(const SourceFile& code_file,
                                      const SourceFile& test_file,
                                      const TestFileOutline& outline,
                                      Task task, ContextMode mode,
                                      std::string pair_id,
                                      int statement_index = 0,
                                      std::string* skip_reason = nullptr);

std::string make_baseline(std::string_view test_content,
                          const TaskTarget& target);

// Tokenizes prompt text for the LM: the separator rendering (first
// occurrence) becomes the atomic separator id, everything else goes through
// ordinary encoding, so a WithCode prompt encodes to
// encode(code) + [sep] + encode(test part).
std::vector<int> encode_prompt(const Vocabulary& vocab,
                               std::string_view prompt_text);

// Splices `generated` into the baseline at insertion_point, leaving every
// other byte untouched. For Python the generated block is re-indented to the
// enclosing block's level (a no-op when it already matches, so re-injecting
// an extracted ground truth is byte-exact). Throws std::invalid_argument on
// an out-of-range insertion point or empty generation.
std::string inject_generation(std::string_view baseline_file,
                              std::size_t insertion_point,
                              std::string_view generated, Lang lang);

}  // namespace testpair
