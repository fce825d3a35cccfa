// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 testpair contributors

#include "testpair/harness.hpp"

#include <gtest/gtest.h>

#include "testpair/subprocess.hpp"
#include "testutil.hpp"

namespace testpair {
namespace {

using testing::TempDir;
using testing::fixture_dir;
using testing::read_fixture;

ProjectManifest pymicro_manifest() {
  return load_manifest(fixture_dir() / "projects/pymicro/manifest.toml");
}

ProjectManifest javamicro_manifest() {
  return load_manifest(fixture_dir() / "projects/javamicro/manifest.toml");
}

std::string pymicro_tests() {
  return read_fixture("projects/pymicro/tests/test_mathops.py");
}

std::string javamicro_tests() {
  return read_fixture("projects/javamicro/tests/CalculatorTest.java");
}

TEST(Manifest, ParsesAllFields) {
  const auto m = pymicro_manifest();
  EXPECT_EQ(m.project_id, "pymicro");
  EXPECT_TRUE(m.build_cmd.empty());
  EXPECT_EQ(m.test_cmd.front(), "python3");
  EXPECT_EQ(m.coverage_format, CoverageFormat::JsonLineReport);
  EXPECT_EQ(m.coverage_output, "coverage.json");
  EXPECT_EQ(m.timeout_secs, 60);
  EXPECT_EQ(m.subject_language, Lang::Python);
  EXPECT_EQ(m.code_file, "mathops.py");
  EXPECT_TRUE(std::filesystem::exists(m.workdir / "mathops.py"))
      << "workdir resolves relative to the manifest";
}

TEST(Manifest, RejectsUnknownKeysAndBadTimeout) {
  EXPECT_THROW(parse_manifest("bogus_key = \"x\"\n", "."),
               std::runtime_error);
  EXPECT_THROW(parse_manifest("timeout_secs = 0\n", "."), std::runtime_error);
  EXPECT_THROW(parse_manifest("test_cmd = \"not-an-array\"\n", "."),
               std::runtime_error);
}

TEST(Manifest, EnvTable) {
  const auto m = parse_manifest(
      "project_id = \"x\"\ntimeout_secs = 5\n[env]\nFOO = \"bar\"\n", ".");
  EXPECT_EQ(m.env.at("FOO"), "bar");
}

TEST(Coverage, NormalizedJsonShape) {
  const auto data = parse_coverage_json(
      R"({"src/a.py": {"covered": [1, 2], "coverable": [1, 2, 3]}})");
  EXPECT_NEAR(file_line_coverage(data, "src/a.py"), 2.0 / 3.0, 1e-12);
}

TEST(Coverage, CoveragePyJsonShape) {
  const auto data = parse_coverage_json(
      R"({"files": {"pkg/m.py": {"executed_lines": [1, 5],
                 "missing_lines": [7, 9]}}})");
  EXPECT_NEAR(file_line_coverage(data, "pkg/m.py"), 0.5, 1e-12);
  EXPECT_NEAR(file_line_coverage(data, "m.py"), 0.5, 1e-12)
      << "suffix matching";
  EXPECT_DOUBLE_EQ(file_line_coverage(data, "other.py"), 0.0);
}

TEST(Coverage, CoberturaXmlShape) {
  const auto data = parse_coverage_xml(R"(<?xml version="1.0"?>
<coverage><packages><package><classes>
  <class filename="src/a.py" name="a">
    <lines><line number="1" hits="3"/><line number="2" hits="0"/></lines>
  </class>
</classes></package></packages></coverage>)");
  EXPECT_NEAR(file_line_coverage(data, "src/a.py"), 0.5, 1e-12);
}

TEST(Coverage, JacocoXmlShape) {
  const auto data = parse_coverage_xml(R"(<report name="x"><package name="">
  <sourcefile name="src/Calculator.java">
    <line nr="3" mi="0" ci="1"/><line nr="7" mi="1" ci="0"/>
  </sourcefile>
</package></report>)");
  EXPECT_NEAR(file_line_coverage(data, "src/Calculator.java"), 0.5, 1e-12);
}

TEST(Coverage, UnparseableReportsThrow) {
  EXPECT_THROW(parse_coverage_json("not json"), CoverageParseError);
  EXPECT_THROW(parse_coverage_json(R"({"summary": 3})"), CoverageParseError);
  EXPECT_THROW(parse_coverage_xml("<unclosed"), CoverageParseError);
  EXPECT_THROW(parse_coverage_xml("<a><b/></a>"), CoverageParseError);
}

TEST(Coverage, RoundTripThroughNormalizedForm) {
  CoverageData data{{"f.py", {{1, 3}, {1, 2, 3}}}};
  const auto reparsed = parse_coverage_json(normalized_coverage_json(data));
  EXPECT_EQ(reparsed.at("f.py").covered, data.at("f.py").covered);
  EXPECT_EQ(reparsed.at("f.py").coverable, data.at("f.py").coverable);
}

TEST(RunBaseline, PymicroCoverageMatchesHandCount) {
  // mathops.py: statement lines {1,2,5,6,9,10,11,12,13,14}; the original
  // two tests execute {1,2,5,6,9} -> exactly 0.5
  const auto run = run_baseline(pymicro_manifest(), pymicro_tests());
  EXPECT_TRUE(run.built);
  EXPECT_TRUE(run.tests_passed);
  EXPECT_DOUBLE_EQ(run.coverage, 0.5);
  ASSERT_EQ(run.phases.size(), 3u);
  EXPECT_EQ(run.phases[0].phase, Phase::Build);
  EXPECT_EQ(run.phases[1].phase, Phase::Test);
  EXPECT_EQ(run.phases[2].phase, Phase::Coverage);
}

TEST(RunBaseline, JavamicroCoverageMatchesHandCount) {
  // Calculator.java return lines {3,7,11}; testAdd+testMul cover {3,7}
  const auto run = run_baseline(javamicro_manifest(), javamicro_tests());
  EXPECT_TRUE(run.built);
  EXPECT_TRUE(run.tests_passed);
  EXPECT_NEAR(run.coverage, 2.0 / 3.0, 1e-12);
}

TEST(RunBaseline, FailingBuildSkipsTestPhase) {
  auto manifest = pymicro_manifest();
  manifest.build_cmd = {"false"};
  const auto run = run_baseline(manifest, pymicro_tests());
  EXPECT_FALSE(run.built);
  ASSERT_EQ(run.phases.size(), 1u);
  EXPECT_EQ(run.phases[0].phase, Phase::Build);
  EXPECT_NE(run.phases[0].exit_code, 0);
}

TEST(RunBaseline, EmptyTestVariantYieldsZeroCoverage) {
  const auto run = run_baseline(pymicro_manifest(), "");
  EXPECT_DOUBLE_EQ(run.coverage, 0.0);
}

TEST(RunBaseline, TimeoutMarksResult) {
  auto manifest = pymicro_manifest();
  manifest.timeout_secs = 1;
  manifest.test_cmd = {"python3", "-c", "import time; time.sleep(30)"};
  const auto run = run_baseline(manifest, pymicro_tests());
  EXPECT_TRUE(run.built);
  EXPECT_FALSE(run.tests_passed);
  ASSERT_EQ(run.phases.size(), 2u);
  EXPECT_TRUE(run.phases[1].timed_out);
  EXPECT_EQ(run.phases[1].exit_code, kTimeoutExitCode);
}

TEST(RunBaseline, SourceTreeIsNeverMutated) {
  const auto manifest = pymicro_manifest();
  const auto before = read_fixture("projects/pymicro/tests/test_mathops.py");
  (void)run_baseline(manifest, "def test_zzz():\n    assert True\n");
  EXPECT_EQ(read_fixture("projects/pymicro/tests/test_mathops.py"), before);
  EXPECT_FALSE(std::filesystem::exists(manifest.workdir / "coverage.json"));
}

// The extra-test task appends at the end of the last test method.
TaskPrompt extra_prompt(const std::string& content, Lang lang) {
  const auto outline = outline_source(content, lang, "t");
  TaskPrompt p;
  p.task = Task::ExtraTest;
  p.context_mode = ContextMode::WithCode;
  p.pair_id = "pair";
  std::string reason;
  const auto target =
      task_target(outline, content, lang, Task::ExtraTest, 0, &reason);
  p.insertion_point = target->begin;
  return p;
}

TEST(EvaluateGeneration, GroundTruthLastTestRestoresOriginalVerdicts) {
  const auto manifest = pymicro_manifest();
  const std::string original = pymicro_tests();
  const auto outline = outline_source(original, Lang::Python, "t");
  std::string reason;
  const auto target =
      task_target(outline, original, Lang::Python, Task::LastTest, 0, &reason);
  ASSERT_TRUE(target.has_value()) << reason;
  const auto baseline = make_baseline(original, *target);
  const std::string truth =
      original.substr(target->begin, target->end - target->begin);

  TaskPrompt prompt;
  prompt.task = Task::LastTest;
  prompt.pair_id = "pair";
  prompt.insertion_point = target->begin;

  const auto outcome = evaluate_generation(manifest, baseline, prompt, truth);
  EXPECT_TRUE(outcome.compiled);
  EXPECT_TRUE(outcome.passed);
  EXPECT_EQ(outcome.pass_basis, "suite-exit");
  ASSERT_TRUE(outcome.coverage_with_gen.has_value());
  EXPECT_DOUBLE_EQ(*outcome.coverage_with_gen, 0.5)
      << "restored file has the original coverage";
  // baseline without test_multiply misses line 6: 4/10
  ASSERT_TRUE(outcome.coverage_baseline.has_value());
  EXPECT_DOUBLE_EQ(*outcome.coverage_baseline, 0.4);
  EXPECT_NEAR(*outcome.coverage_delta, 0.1, 1e-12);
}

TEST(EvaluateGeneration, GarbageFailsCompileOnBothLanguages) {
  {
    const auto manifest = pymicro_manifest();
    const auto prompt = extra_prompt(pymicro_tests(), Lang::Python);
    const auto outcome = evaluate_generation(
        manifest, pymicro_tests(), prompt, "\nthis is not code\n");
    EXPECT_FALSE(outcome.compiled);
    EXPECT_FALSE(outcome.passed);
  }
  {
    const auto manifest = javamicro_manifest();
    const auto prompt = extra_prompt(javamicro_tests(), Lang::Java);
    const auto outcome = evaluate_generation(
        manifest, javamicro_tests(), prompt, "\nthis is not code\n");
    EXPECT_FALSE(outcome.compiled);
    EXPECT_FALSE(outcome.passed);
  }
}

TEST(EvaluateGeneration, KnownGoodExtraTestsYieldHandCountedDeltas) {
  {
    const auto manifest = pymicro_manifest();
    const auto prompt = extra_prompt(pymicro_tests(), Lang::Python);
    const auto gen = read_fixture("snippets/pymicro_extra_test.txt");
    const auto outcome =
        evaluate_generation(manifest, pymicro_tests(), prompt, gen);
    EXPECT_TRUE(outcome.passed) << outcome.detail;
    // clamp's five lines join the covered set: 5/10 -> 10/10
    EXPECT_DOUBLE_EQ(*outcome.coverage_with_gen, 1.0);
    EXPECT_DOUBLE_EQ(*outcome.coverage_delta, 0.5);
  }
  {
    const auto manifest = javamicro_manifest();
    const auto prompt = extra_prompt(javamicro_tests(), Lang::Java);
    const auto gen = read_fixture("snippets/javamicro_extra_test.txt");
    const auto outcome =
        evaluate_generation(manifest, javamicro_tests(), prompt, gen);
    EXPECT_TRUE(outcome.passed) << outcome.detail;
    // square() executes its own line and mul's: 2/3 -> 3/3
    EXPECT_NEAR(*outcome.coverage_with_gen, 1.0, 1e-12);
    EXPECT_NEAR(*outcome.coverage_delta, 1.0 / 3.0, 1e-12);
  }
}

TEST(EvaluateGeneration, RerunYieldsIdenticalVerdicts) {
  const auto manifest = pymicro_manifest();
  const auto prompt = extra_prompt(pymicro_tests(), Lang::Python);
  const auto gen = read_fixture("snippets/pymicro_extra_test.txt");
  const auto a = evaluate_generation(manifest, pymicro_tests(), prompt, gen);
  const auto b = evaluate_generation(manifest, pymicro_tests(), prompt, gen);
  EXPECT_EQ(a.compiled, b.compiled);
  EXPECT_EQ(a.passed, b.passed);
  EXPECT_EQ(a.coverage_with_gen, b.coverage_with_gen);
  EXPECT_EQ(a.coverage_delta, b.coverage_delta);
}

TEST(Sandbox, EvaluationsNeverShareAWorkdir) {
  Sandbox a(fixture_dir() / "projects/pymicro");
  Sandbox b(fixture_dir() / "projects/pymicro");
  EXPECT_NE(a.dir(), b.dir());
  EXPECT_TRUE(std::filesystem::exists(a.dir() / "mathops.py"));
  EXPECT_TRUE(std::filesystem::exists(b.dir() / "mathops.py"));
}

TEST(ContainsAssertion, LexemeRules) {
  EXPECT_TRUE(contains_assertion("assert x == 1", Lang::Python));
  EXPECT_TRUE(contains_assertion("self.assertEqual(a, b)", Lang::Python));
  EXPECT_TRUE(contains_assertion("assertEquals(5, add(2, 3));", Lang::Java));
  EXPECT_TRUE(contains_assertion("Assertions.assertTrue(ok);", Lang::Java));
  EXPECT_FALSE(contains_assertion("x = compute()\nprint(x)", Lang::Python));
}

TEST(FilterGenerations, HandDerivedVerdictTable) {
  // ten samples with known verdicts: survivors must be exactly {0, 4, 7}
  auto rec = [](bool compiled, bool passed, const std::string& text) {
    GenerationRecord r;
    r.outcome.compiled = compiled;
    r.outcome.passed = passed;
    r.text = text;
    r.lang = Lang::Python;
    return r;
  };
  const std::vector<GenerationRecord> records{
      rec(true, true, "def t():\n    assert f() == 1\n"),       // 0 keep
      rec(false, false, "assert broken("),                      // 1
      rec(true, false, "def t():\n    assert f() == 2\n"),      // 2
      rec(true, true, "def t():\n    f()\n"),                   // 3
      rec(true, true, "def t():\n    self.assertTrue(f())\n"),  // 4 keep
      rec(false, true, "impossible"),                           // 5
      rec(true, false, "def t():\n    pass\n"),                 // 6
      rec(true, true, "def t():\n    assert True\n"),           // 7 keep
      rec(true, true, "def t():\n    print('hi')\n"),           // 8
      rec(false, false, ""),                                    // 9
  };
  const auto kept = filter_generations(records);
  EXPECT_EQ(kept, (std::vector<std::size_t>{0, 4, 7}));
}

TEST(FilterGenerations, AssertFreePassingSampleRemoved) {
  const auto manifest = pymicro_manifest();
  const auto prompt = extra_prompt(pymicro_tests(), Lang::Python);
  const auto gen = read_fixture("snippets/pymicro_assert_free_test.txt");
  const auto outcome =
      evaluate_generation(manifest, pymicro_tests(), prompt, gen);
  EXPECT_TRUE(outcome.passed) << outcome.detail;
  const std::vector<GenerationRecord> records{{outcome, gen, Lang::Python}};
  EXPECT_TRUE(filter_generations(records).empty());
}

}  // namespace
}  // namespace testpair
