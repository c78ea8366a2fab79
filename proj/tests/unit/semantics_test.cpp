#include <random>

#include <gtest/gtest.h>

#include "bcplus/bench.hpp"
#include "bcplus/encode.hpp"
#include "bcplus/oracle.hpp"
#include "bcplus/properties.hpp"
#include "bcplus/query.hpp"
#include "test_util.hpp"

using namespace bcplus;

namespace {

const char* kSig = R"(
:- sorts item; place; integer.
:- objects a, b :: item; p, q :: place; 0..3 :: integer.
:- variables X, Y :: item; P :: place; N, N1 :: integer.
:- constants
    at(item) :: inertialFluent(place);
    lit :: inertialFluent;
    level :: additiveFluent(integer);
    go(item) :: exogenousAction;
    dest(item) :: attribute(place) of go(item);
    push :: exogenousAction;
    moved :: additiveAction(integer).
)";

const char* kLaws[] = {
    "go(X) causes at(X) = P if dest(X) = P.",
    "nonexecutable go(X) if at(X) = P & dest(X) = P.",
    "push causes lit.",
    "push causes ~lit if lit.",
    "default ~lit.",
    "lit if at(a) = q.",
    "impossible at(a) = p & at(b) = p.",
    "impossible lit & at(b) = q.",
    "push increments level by 1.",
    "go(X) decrements level by 1 if at(X) = p.",
    "go(X) increments moved by 1.",
    "always moved <= 1.",
    "nonexecutable go(a) & go(b).",
    "nonexecutable push if level = 3.",
    "at(b) = p if lit after push.",
    "default at(a) = p after go(a) & dest(a) = q.",
    "always N = moved & N1 = level -> N + N1 < 5.",
    "nonexecutable go(X) & push if lit.",
};

std::string random_program(std::mt19937& rng) {
  std::string text = kSig;
  int n = 3 + static_cast<int>(rng() % 5);
  for (int i = 0; i < n; ++i) text += std::string(kLaws[rng() % (sizeof kLaws / sizeof *kLaws)]) + "\n";
  return text;
}

const char* kTwoSwitches = R"(
:- sorts switch.
:- objects s1, s2 :: switch.
:- variables S :: switch.
:- constants on(switch) :: inertialFluent; flip(switch) :: exogenousAction; light :: inertialFluent.
flip(S) causes on(S) if ~on(S).
flip(S) causes ~on(S) if on(S).
light if on(s1) & on(s2).
~light if ~on(s1).
~light if ~on(s2).
nonexecutable flip(s1) & flip(s2).
:- query
    label :: main;
    0: ~on(s1) & ~on(s2);
    maxstep: light.
)";

}  // namespace

TEST(Encoding, TransitionsMatchOracleOnRandomPrograms) {
  std::mt19937 rng(2024);
  OracleOptions oo;
  oo.concurrency = 3;
  int nonempty = 0;
  for (int i = 0; i < 60; ++i) {
    std::string text = random_program(rng);
    auto g = ground_text(text);
    auto tc = compare_transitions(*g, oo);
    EXPECT_TRUE(tc.match) << text << "\nstates " << tc.states << " transitions " << tc.transitions << " models "
                          << tc.models;
    nonempty += tc.transitions > 0;
  }
  EXPECT_GT(nonempty, 30);
}

TEST(Encoding, TransitionsMatchOnFixtures) {
  for (const char* f : {"fixtures/river/basic.bc", "fixtures/hanoi/basic3.bc"}) {
    auto g = ground_file(f);
    auto tc = compare_transitions(*g);
    EXPECT_TRUE(tc.match) << f;
    EXPECT_GT(tc.transitions, 0u);
  }
}

TEST(Encoding, StatesAtHorizonZeroMatchOracle) {
  std::mt19937 rng(99);
  for (int i = 0; i < 30; ++i) {
    auto g = ground_text(random_program(rng));
    Oracle oracle(*g);
    auto models = enumerate_models(*g, 0);
    EXPECT_EQ(models.size(), oracle.states().size());
  }
}

TEST(Query, SolverAgreesWithBfs) {
  auto g = ground_text(kTwoSwitches);
  auto out = solve_query(*g, g->source.queries[0]);
  ASSERT_TRUE(out.satisfiable);
  EXPECT_EQ(out.horizon, 2);
  Oracle oracle(*g);
  auto [init, goal] = query_endpoints(*g, g->source.queries[0]);
  auto b = oracle.shortest_plan(init, goal, 10);
  ASSERT_TRUE(b.found);
  EXPECT_EQ(b.length, 2);
  EXPECT_FALSE(oracle.validate(out.plan, g->source.queries[0], *g));
  EXPECT_EQ(out.models, "1+");
}

TEST(Query, MaxstepFixesHorizon) {
  auto p = must_parse(kTwoSwitches);
  auto q = parse_query(SourceProgram{":- query\n maxstep :: 3;\n 0: ~on(s1) & ~on(s2);\n maxstep: light."});
  ASSERT_TRUE(q.ok());
  auto g = ground(p);
  auto out = solve_query(*g, q.query);
  EXPECT_EQ(out.first_horizon, 3);
  EXPECT_EQ(out.last_horizon, 3);
  EXPECT_TRUE(out.satisfiable);
  auto q2 = parse_query(SourceProgram{":- query\n maxstep :: 1;\n 0: ~on(s1) & ~on(s2);\n maxstep: light."});
  EXPECT_FALSE(solve_query(*g, q2.query).satisfiable);
}

TEST(Query, UniqueModelReportedAsOne) {
  auto g = ground_text(std::string(kTwoSwitches) +
                       ":- query\n label :: fixed;\n 0: ~on(s1) & ~on(s2);\n 0: flip(s1);\n 1: flip(s2).\n");
  auto out = solve_query(*g, *g->source.find_query("fixed"));
  ASSERT_TRUE(out.satisfiable);
  EXPECT_EQ(out.horizon, 2);
  EXPECT_EQ(out.models, "1");
  EXPECT_EQ(minimum_horizon(*g, *g->source.find_query("fixed")), 2);
}

TEST(Query, ListingRoundTrip) {
  auto g = ground_file("fixtures/mcp/basic.bc");
  auto out = solve_query(*g, g->source.queries[0]);
  ASSERT_TRUE(out.satisfiable);
  EXPECT_EQ(out.horizon, 11);
  auto text = format_outcome(*g, out);
  EXPECT_EQ(text.rfind("Solving...\nSolution: 1\n", 0), 0u);
  EXPECT_NE(text.find("SATISFIABLE\nModels       : 1+\n"), std::string::npos);
  auto back = parse_trajectory(*g, format_trajectory(*g, out.plan));
  EXPECT_EQ(format_trajectory(*g, back), format_trajectory(*g, out.plan));
  Oracle oracle(*g);
  EXPECT_FALSE(oracle.validate(back, g->source.queries[0], *g));
  auto j = outcome_json(*g, out, "main");
  EXPECT_EQ(j["length"], 11);
  EXPECT_EQ(j["solves"].size(), 12u);
}

TEST(Query, UnsatListing) {
  auto g = ground_text(kTwoSwitches);
  auto q = parse_query(SourceProgram{":- query\n maxstep :: 2;\n 0: ~on(s1) & ~on(s2);\n 0: flip(s1) & flip(s2)."});
  auto out = solve_query(*g, q.query);
  EXPECT_FALSE(out.satisfiable);
  EXPECT_EQ(format_outcome(*g, out), "Solving...\nUNSATISFIABLE\nModels       : 0\nNo solution.\n");
}

TEST(Query, SatisfiabilityCheck) {
  auto bad = check_satisfiability(slurp("fixtures/mcp/initial.bc"));
  EXPECT_FALSE(bad.satisfiable);
  EXPECT_NE(bad.feedback.find("must be an additive constant"), std::string::npos);
  auto good = check_satisfiability(slurp("fixtures/mcp/basic.bc"));
  EXPECT_TRUE(good.satisfiable);
  EXPECT_NE(good.feedback.find("SATISFIABLE"), std::string::npos);
  auto contradiction = check_satisfiability(std::string(":- sorts s.\n:- objects o :: s.\n") +
                                            ":- constants f :: inertialFluent.\nimpossible f.\nimpossible ~f.\n");
  EXPECT_FALSE(contradiction.satisfiable);
  auto syntax = check_satisfiability(std::string(":- sorts s.\nnonsense here"));
  EXPECT_FALSE(syntax.satisfiable);
  EXPECT_FALSE(syntax.diagnostics.empty());
}

TEST(Query, SampleQueriesMatchExpectations) {
  auto g = ground_text(kTwoSwitches);
  std::vector<SampleQuery> qs;
  auto q1 = parse_query(SourceProgram{":- query\n 0: ~on(s1);\n 0: flip(s1)."});
  auto q2 = parse_query(SourceProgram{":- query\n 0: ~on(s1);\n 0: flip(s1) & flip(s2)."});
  qs.push_back({q1.query, true, ""});
  qs.push_back({q2.query, false, ""});
  qs.push_back({q2.query, std::nullopt, ""});
  SolveOptions opts;
  opts.max_horizon = 3;
  auto rs = run_sample_queries(*g, qs, opts);
  ASSERT_EQ(rs.size(), 3u);
  EXPECT_EQ(rs[0].matched, true);
  EXPECT_EQ(rs[1].matched, true);
  EXPECT_FALSE(rs[2].matched.has_value());
}

TEST(Properties, HoldOnSolverModels) {
  std::mt19937 rng(17);
  for (int i = 0; i < 40; ++i) {
    auto g = ground_text(random_program(rng));
    for (const auto& m : enumerate_models(*g, 2, nullptr, 20)) {
      EXPECT_FALSE(check_constraints(*g, m));
      EXPECT_FALSE(check_completion(*g, m));
      EXPECT_FALSE(check_additive(*g, m));
    }
  }
}

TEST(Properties, CatchCorruptedTrajectories) {
  auto g = ground_file("fixtures/mcp/basic.bc");
  auto out = solve_query(*g, g->source.queries[0]);
  ASSERT_TRUE(out.satisfiable);
  auto num = *g->find_instance("numOnBank(bank1,cannibals)");
  auto loc = *g->find_instance("loc(boat)");

  auto t = out.plan;
  t.states[3][num] = (t.states[3][num] + 1) % g->instances[num].domain_size();
  EXPECT_TRUE(check_additive(*g, t));

  t = out.plan;
  t.states[5][loc] = 1 - t.states[5][loc];
  t.states[6][loc] = 1 - t.states[6][loc];
  EXPECT_TRUE(check_completion(*g, t) || check_constraints(*g, t));

  // Outnumbered missionaries on bank1 at step 0.
  t = out.plan;
  auto m = *g->find_instance("numOnBank(bank1,missionaries)");
  t.states[0][m] = *g->value_index(m, g->values.intern_int(1));
  EXPECT_TRUE(check_constraints(*g, t));
}

TEST(Oracle, ValidateReportsLaw) {
  auto g = ground_text(kTwoSwitches);
  auto out = solve_query(*g, g->source.queries[0]);
  ASSERT_TRUE(out.satisfiable);
  auto t = out.plan;
  auto light = *g->find_instance("light");
  t.states.back()[light] = 1 - t.states.back()[light];
  Oracle oracle(*g);
  auto v = oracle.validate(t);
  ASSERT_TRUE(v);
  EXPECT_FALSE(v->str().empty());
}

TEST(Oracle, StateCapThrows) {
  auto g = ground_file("fixtures/sudoku/sudoku1.bc");
  OracleOptions oo;
  oo.state_cap = 1000;
  Oracle oracle(*g, oo);
  try {
    oracle.states();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::StateSpaceTooLarge);
  }
}

TEST(Oracle, NoPlanWithinBound) {
  auto g = ground_file("fixtures/mcp/e07_missionaries_cannot_row.bc");
  Oracle oracle(*g);
  auto [init, goal] = query_endpoints(*g, g->source.queries[0]);
  auto b = oracle.shortest_plan(init, goal, 30);
  EXPECT_FALSE(b.found);
}
