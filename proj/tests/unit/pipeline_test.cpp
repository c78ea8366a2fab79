#include <filesystem>

#include <gtest/gtest.h>

#include "bcplus/error.hpp"
#include "bcplus/pipeline.hpp"
#include "test_util.hpp"

using namespace bcplus;
namespace fs = std::filesystem;

namespace {

const char* kProblem =
    "Two switches control a lamp. The lamp is lit exactly when both switches are on.\n"
    "Flipping a switch toggles it, and only one switch can be flipped at a time.\n\n"
    "Query\n"
    "Both switches start off. Find the shortest way to light the lamp.\n";

const char* kSignature =
    "```\nActions:\n- flip(Switch): toggles the switch.\n\nConstants:\n- on(Switch): the switch is on.\n"
    "- light: the lamp is lit.\n\nBC+ Signature:\n\n"
    ":- sorts\n    switch.\n\n:- objects\n    s1, s2 :: switch.\n\n:- variables\n    S :: switch.\n\n"
    ":- constants\n    flip(switch) :: exogenousAction;\n    on(switch) :: inertialFluent;\n"
    "    light :: inertialFluent.\n```\n";

const char* kNoVariables =
    "```\nBC+ Signature:\n:- sorts\n    switch.\n:- objects\n    s1, s2 :: switch.\n"
    ":- constants\n    flip(switch) :: exogenousAction.\n```\n";

const char* kKnowledge = "```\n- Flipping a switch toggles it.\n- The lamp is lit when both are on.\n```\n";

const char* kLaws =
    "flip(S) causes on(S) if ~on(S).\n"
    "flip(S) causes ~on(S) if on(S).\n"
    "light if on(s1) & on(s2).\n"
    "~light if ~on(s1).\n"
    "~light if ~on(s2).\n"
    "nonexecutable flip(s1) & flip(s2).\n";

const char* kQuery = ":- query\n    0: ~on(s1) & ~on(s2);\n    maxstep: light.\n";

std::string fenced(const std::string& s) { return "Here it is.\n\n```\n" + s + "```\n"; }

// No state satisfies both constraints.
std::string broken_rules() {
  return fenced(std::string(kLaws) + "impossible light.\nimpossible ~light.\n\n" + kQuery);
}

std::string samples_reply(int n) {
  std::string out;
  for (int i = 0; i < n; ++i)
    out += ":- query\n    0: ~on(s1);\n    0: flip(s1). (satisfiable)\n\n"
           ":- query\n    0: ~on(s1);\n    0: flip(s1) & flip(s2). (unsatisfiable)\n\n";
  return fenced(out);
}

std::string unchanged_reply() {
  return fenced(std::string("PROGRAM [UNCHANGED]\n") + kLaws + "\nMAIN QUERY [UNCHANGED]\n" + kQuery +
                "\nSAMPLE QUERIES [UNCHANGED]\n");
}

std::map<std::string, std::string> good_script() {
  return {{"signature", kSignature},
          {"knowledge", kKnowledge},
          {"rules", fenced(std::string(kLaws) + "\n" + kQuery)},
          {"samples", samples_reply(1)},
          {"feedback", unchanged_reply()}};
}

Config quiet_config() {
  Config c;
  c.solve.max_horizon = 6;
  return c;
}

int count_stage(const PipelineState& s, const std::string& stage) {
  int n = 0;
  for (const auto& x : s.transcript) n += x.stage == stage;
  return n;
}

std::map<std::string, std::string> dir_contents(const std::string& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename() != "timings.jsonl") out[e.path().filename().string()] = slurp(e.path().string());
  return out;
}

}  // namespace

TEST(Templates, RenderAndUnbound) {
  EXPECT_EQ(render_template("a {{x}} b {{y}}{{x}}", {{"x", "1"}, {"y", "2"}}), "a 1 b 21");
  try {
    render_template("{{x}} {{missing}}", {{"x", "1"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TemplateUnbound);
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }
  EXPECT_EQ(template_placeholders("{{a}} {{b}} {{a}}"), (std::vector<std::string>{"a", "b"}));
}

TEST(Templates, ShippedTemplatesAreUsable) {
  for (const char* name : {"signature", "signature_retry", "knowledge", "rules", "satfix", "samples", "feedback"}) {
    std::string t = slurp(std::string("prompts/") + name + ".txt");
    EXPECT_FALSE(template_placeholders(t).empty()) << name;
  }
}

TEST(Extraction, LastFencedBlock) {
  EXPECT_EQ(last_fenced_block("x\n```\nfirst\n```\ny\n```bc\nsecond\n```\n"), "second\n");
  EXPECT_THROW(last_fenced_block("no fence here"), Error);
  EXPECT_THROW(last_fenced_block("```\nunterminated"), Error);
}

TEST(Extraction, SignatureSplitAndCheck) {
  auto parts = split_signature(last_fenced_block(kSignature));
  EXPECT_NE(parts.reading.find("flip(Switch)"), std::string::npos);
  EXPECT_EQ(parts.signature.rfind(":- sorts", 0), 0u);
  EXPECT_FALSE(has_errors(check_signature(parts.signature)));
  auto d = check_signature(split_signature(last_fenced_block(kNoVariables)).signature);
  ASSERT_TRUE(has_errors(d));
  EXPECT_NE(format_diagnostics(d).find(":- variables"), std::string::npos);
}

TEST(Extraction, KnowledgeAndSamples) {
  auto k = parse_knowledge("- one\n* two\n3. three\n\n4) four\n");
  EXPECT_EQ(k, (std::vector<std::string>{"one", "two", "three", "four"}));
  auto s = parse_samples(last_fenced_block(samples_reply(1)) + ":- query\n 0: on(s1).\n");
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].expect_sat, true);
  EXPECT_EQ(s[1].expect_sat, false);
  EXPECT_FALSE(s[2].expect_sat.has_value());
  EXPECT_EQ(s[0].text.find("(satisfiable)"), std::string::npos);
}

TEST(Extraction, FeedbackMarkers) {
  auto r = parse_feedback_reply("[CHANGED] PROGRAM\nlaw.\nMAIN QUERY [UNCHANGED]\nq.\nSAMPLE QUERIES\nx.\n");
  EXPECT_EQ(r.program.mark, Mark::Changed);
  EXPECT_EQ(r.program.content.find("law."), 0u);
  EXPECT_EQ(r.main_query.mark, Mark::Unchanged);
  EXPECT_EQ(r.samples.mark, Mark::Unmarked);
  EXPECT_TRUE(r.samples.present);
  auto none = parse_feedback_reply("nothing\n");
  EXPECT_FALSE(none.program.present);
}

TEST(Extraction, SplitProblem) {
  auto [desc, goal] = split_problem(kProblem);
  EXPECT_NE(desc.find("Two switches"), std::string::npos);
  EXPECT_EQ(desc.find("shortest"), std::string::npos);
  EXPECT_NE(goal.find("shortest"), std::string::npos);
}

TEST(Pipeline, HappyPath) {
  MockClient client(good_script());
  auto r = run_pipeline(kProblem, client, quiet_config());
  EXPECT_EQ(r.state.status, PipelineStatus::Completed) << r.state.status_detail;
  ASSERT_TRUE(r.outcome);
  EXPECT_TRUE(r.outcome->satisfiable);
  EXPECT_EQ(r.outcome->horizon, 2);
  EXPECT_EQ(r.state.sat_revisions, 0);
  EXPECT_EQ(r.state.feedback_passes, 1);
  ASSERT_EQ(r.state.samples.size(), 2u);
  for (const auto& s : r.state.samples) EXPECT_EQ(s.matched, true);
  EXPECT_TRUE(r.state.warnings.empty());
  auto j = pipeline_summary(r);
  EXPECT_EQ(j["status"], "Completed");
}

TEST(Pipeline, SignatureRetriedWithDiagnostics) {
  auto script = good_script();
  script["signature_1"] = kNoVariables;
  MockClient client(script);
  auto r = run_pipeline(kProblem, client, quiet_config());
  EXPECT_EQ(r.state.status, PipelineStatus::Completed);
  ASSERT_GE(r.state.transcript.size(), 2u);
  EXPECT_EQ(r.state.transcript[0].status, "rejected");
  EXPECT_NE(r.state.transcript[0].feedback.find(":- variables"), std::string::npos);
  EXPECT_EQ(r.state.transcript[1].stage, "signature");
  EXPECT_EQ(r.state.transcript[1].attempt, 2);
  EXPECT_NE(r.state.transcript[1].prompt.find(":- variables"), std::string::npos);
}

TEST(Pipeline, SignatureFailsAfterAllAttempts) {
  auto script = good_script();
  script["signature"] = kNoVariables;
  MockClient client(script);
  Config c = quiet_config();
  c.pipeline.signature_attempts = 2;
  auto r = run_pipeline(kProblem, client, c);
  EXPECT_EQ(r.state.status, PipelineStatus::SignatureFailed);
  EXPECT_EQ(count_stage(r.state, "signature"), 2);
  EXPECT_EQ(count_stage(r.state, "knowledge"), 0);
  EXPECT_FALSE(r.outcome);
}

TEST(Pipeline, SatisfiabilityRevisionRepairs) {
  auto script = good_script();
  script["rules"] = broken_rules();
  script["satfix_1"] = fenced(std::string(kLaws) + "\n" + kQuery);
  MockClient client(script);
  auto r = run_pipeline(kProblem, client, quiet_config());
  EXPECT_EQ(r.state.status, PipelineStatus::Completed);
  EXPECT_EQ(r.state.sat_revisions, 1);
  EXPECT_EQ(count_stage(r.state, "satcheck"), 2);
  ASSERT_TRUE(r.outcome);
  EXPECT_TRUE(r.outcome->satisfiable);
}

TEST(Pipeline, SatisfiabilityBudgetExhausts) {
  auto script = good_script();
  script["rules"] = broken_rules();
  script["satfix"] = broken_rules();
  MockClient client(script);
  Config c = quiet_config();
  c.pipeline.sat_budget = 3;
  auto r = run_pipeline(kProblem, client, c);
  EXPECT_EQ(r.state.status, PipelineStatus::BudgetExhausted);
  EXPECT_EQ(r.state.sat_revisions, 3);
  EXPECT_EQ(count_stage(r.state, "satfix"), 3);
  EXPECT_EQ(count_stage(r.state, "satcheck"), 4);
  EXPECT_EQ(count_stage(r.state, "samples"), 0);
}

TEST(Pipeline, SampleCapKeepsFirstFive) {
  auto script = good_script();
  script["samples"] = samples_reply(4);
  MockClient client(script);
  auto r = run_pipeline(kProblem, client, quiet_config());
  EXPECT_EQ(r.state.samples.size(), 5u);
  ASSERT_FALSE(r.state.warnings.empty());
  EXPECT_NE(r.state.warnings[0].find("8 sample queries"), std::string::npos);
}

TEST(Pipeline, FeedbackChangeThenStable) {
  auto script = good_script();
  script["feedback_1"] = fenced(std::string("PROGRAM [UNCHANGED]\n") + kLaws + "\nMAIN QUERY [CHANGED]\n" +
                                ":- query\n    0: ~on(s1) & ~on(s2);\n    maxstep: on(s1) & ~on(s2).\n" +
                                "\nSAMPLE QUERIES [UNCHANGED]\n");
  MockClient client(script);
  auto r = run_pipeline(kProblem, client, quiet_config());
  EXPECT_EQ(r.state.status, PipelineStatus::Completed);
  EXPECT_EQ(r.state.feedback_passes, 2);
  EXPECT_EQ(r.state.query_runs, 2);
  EXPECT_EQ(r.state.feedback_budget, 2);
  ASSERT_TRUE(r.outcome);
  EXPECT_EQ(r.outcome->horizon, 1);
}

TEST(Pipeline, FeedbackBudgetZeroRunsQueriesOnce) {
  MockClient client(good_script());
  Config c = quiet_config();
  c.pipeline.feedback_budget = 0;
  auto r = run_pipeline(kProblem, client, c);
  EXPECT_EQ(r.state.status, PipelineStatus::Completed);
  EXPECT_EQ(r.state.feedback_passes, 0);
  EXPECT_EQ(r.state.query_runs, 1);
  EXPECT_EQ(count_stage(r.state, "feedback"), 0);
}

TEST(Pipeline, UnmarkedSegmentWarns) {
  auto script = good_script();
  script["feedback"] = fenced(std::string("PROGRAM\n") + kLaws + "\nMAIN QUERY [UNCHANGED]\n" + kQuery +
                              "\nSAMPLE QUERIES [UNCHANGED]\n");
  MockClient client(script);
  auto r = run_pipeline(kProblem, client, quiet_config());
  EXPECT_EQ(r.state.status, PipelineStatus::Completed);
  ASSERT_EQ(r.state.warnings.size(), 1u);
  EXPECT_NE(r.state.warnings[0].find("PROGRAM segment is not marked"), std::string::npos);
}

TEST(Pipeline, MissingFenceAndClientFailure) {
  auto script = good_script();
  script["knowledge"] = "I forgot the block.";
  MockClient a(script);
  EXPECT_EQ(run_pipeline(kProblem, a, quiet_config()).state.status, PipelineStatus::MissingFencedBlock);
  script = good_script();
  script.erase("rules");
  MockClient b(script);
  EXPECT_EQ(run_pipeline(kProblem, b, quiet_config()).state.status, PipelineStatus::ClientFailure);
}

TEST(Pipeline, CancelStopsRun) {
  std::atomic<bool> cancel{true};
  MockClient client(good_script());
  PipelineHooks hooks;
  hooks.cancel = &cancel;
  EXPECT_EQ(run_pipeline(kProblem, client, quiet_config(), hooks).state.status, PipelineStatus::Cancelled);
}

TEST(Pipeline, HumanHookEditIsUsed) {
  auto file = (fs::temp_directory_path() / "bcplus_human_edit.bc").string();
  Config c = quiet_config();
  c.pipeline.human_hook = true;
  c.pipeline.human_file = file;
  PipelineHooks hooks;
  hooks.human_edit = [](const std::string& path) {
    std::string text = slurp(path);
    auto pos = text.find("maxstep: light.");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos, 15, "maxstep: on(s2) & ~on(s1).");
    std::ofstream(path) << text;
  };
  MockClient client(good_script());
  auto r = run_pipeline(kProblem, client, c, hooks);
  EXPECT_EQ(r.state.status, PipelineStatus::Completed);
  EXPECT_EQ(count_stage(r.state, "human"), 1);
  ASSERT_TRUE(r.outcome);
  EXPECT_EQ(r.outcome->horizon, 1);
  fs::remove(file);
}

TEST(Pipeline, TranscriptIsDeterministic) {
  auto base = fs::temp_directory_path() / "bcplus_transcripts";
  fs::remove_all(base);
  for (const char* run : {"a", "b"}) {
    MockClient client(good_script());
    auto r = run_pipeline(kProblem, client, quiet_config());
    write_transcript(r.state, (base / run).string());
  }
  auto a = dir_contents((base / "a").string());
  auto b = dir_contents((base / "b").string());
  EXPECT_EQ(a, b);
  EXPECT_TRUE(a.count("index.jsonl"));
  EXPECT_TRUE(a.count("final_program.bc"));
  EXPECT_TRUE(a.count("001_signature_1.prompt.txt"));
  EXPECT_TRUE(fs::exists(base / "a" / "timings.jsonl"));
  fs::remove_all(base);
}

TEST(Pipeline, MissionariesReplay) {
  MockClient client("fixtures/pipeline/mcp");
  auto r = run_pipeline(slurp("fixtures/pipeline/mcp/problem.txt"), client, Config{});
  EXPECT_EQ(r.state.status, PipelineStatus::Completed) << r.state.status_detail;
  EXPECT_EQ(r.state.sat_revisions, 1);
  EXPECT_EQ(r.state.feedback_passes, 1);
  ASSERT_EQ(r.state.samples.size(), 5u);
  int sat = 0;
  for (const auto& s : r.state.samples) {
    EXPECT_EQ(s.matched, true) << s.text;
    sat += s.satisfiable == true;
  }
  EXPECT_EQ(sat, 2);
  ASSERT_TRUE(r.outcome);
  EXPECT_EQ(r.outcome->horizon, 11);
}
