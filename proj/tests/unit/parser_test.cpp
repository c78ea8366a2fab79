#include <gtest/gtest.h>

#include "bcplus/parser.hpp"
#include "test_util.hpp"

using namespace bcplus;

namespace {

const char* kBoats = R"(
:- sorts
    vessel;
    location;
    integer.
:- objects
    boat :: vessel;
    bank1, bank2 :: location;
    0..3 :: integer.
:- variables
    V :: vessel;
    L :: location;
    N, N1 :: integer.
:- constants
    cross(vessel) :: exogenousAction;
    load(vessel) :: attribute(integer) of cross(vessel);
    loc(vessel) :: inertialFluent(location);
    count(location) :: additiveFluent(integer);
    ready :: inertialFluent.

cross(V) causes loc(V) = bank2 if loc(V) = bank1.
nonexecutable cross(V) if N = load(V) & N > 2.
impossible count(L) > 3.
default ready.
ready if loc(boat) = bank1 after cross(boat).
always cross(boat) | ~cross(boat).
cross(V) increments count(L) by N if load(V) = N & loc(V) = L.

:- query
    label :: main;
    0: loc(boat) = bank1;
    maxstep: loc(boat) = bank2.
)";

}  // namespace

TEST(Parser, DeclarationsAndLawKinds) {
  auto r = parse_program(kBoats);
  ASSERT_TRUE(r.ok()) << format_diagnostics(r.diagnostics);
  const auto& p = r.program;
  EXPECT_EQ(p.sorts.size(), 3u);
  EXPECT_EQ(p.objects.size(), 4u);
  EXPECT_EQ(p.variables.size(), 4u);
  ASSERT_EQ(p.constants.size(), 5u);
  EXPECT_EQ(p.constants[1].kind, ConstantKind::Attribute);
  EXPECT_EQ(p.constants[1].parent, "cross");
  EXPECT_EQ(p.constants[3].kind, ConstantKind::AdditiveFluent);
  EXPECT_EQ(p.constants[4].value_sort, "boolean");
  std::vector<LawKind> kinds;
  for (const auto& l : p.laws) kinds.push_back(l.kind);
  EXPECT_EQ(kinds, (std::vector<LawKind>{LawKind::Causes, LawKind::Nonexecutable, LawKind::Impossible,
                                         LawKind::Default, LawKind::FluentDynamic, LawKind::Always,
                                         LawKind::Increments}));
  ASSERT_EQ(p.queries.size(), 1u);
  EXPECT_EQ(p.queries[0].label, "main");
  EXPECT_EQ(p.queries[0].items.size(), 2u);
  EXPECT_FALSE(p.queries[0].items[1].step.has_value());
}

TEST(Parser, RenderRoundTrip) {
  auto p = must_parse(kBoats);
  auto again = must_parse(render_program(p));
  EXPECT_EQ(render_program(again), render_program(p));
  EXPECT_EQ(again.laws.size(), p.laws.size());
  for (std::size_t i = 0; i < p.laws.size(); ++i) EXPECT_EQ(to_string(again.laws[i]), to_string(p.laws[i]));
}

TEST(Parser, FixtureProgramsParse) {
  for (const char* f : {"fixtures/mcp/basic.bc", "fixtures/mcp/initial.bc", "fixtures/river/basic.bc",
                        "fixtures/hanoi/basic3.bc", "fixtures/sudoku/sudoku1.bc"}) {
    auto r = parse_program(slurp(f));
    EXPECT_TRUE(r.ok()) << f << "\n" << format_diagnostics(r.diagnostics);
  }
}

TEST(Parser, ErrorsCarryPositionsAndKeepRest) {
  auto r = parse_program(":- sorts a.\n:- objects x :: a.\n:- constants f :: inertialFluent.\nf if .\nf if f.\n");
  EXPECT_FALSE(r.ok());
  ASSERT_FALSE(r.diagnostics.empty());
  EXPECT_EQ(r.diagnostics[0].line, 4);
  EXPECT_EQ(r.program.laws.size(), 1u);
}

TEST(Parser, EmptyInputIsEmptyProgram) {
  auto r = parse_program("");
  EXPECT_TRUE(r.ok());
  EXPECT_TRUE(r.program.empty());
  r = parse_program("% only a comment\n");
  EXPECT_TRUE(r.program.empty());
}

TEST(Parser, QueryBlockOnItsOwn) {
  auto q = parse_query(SourceProgram{":- query\n 0: loc(boat) = bank1;\n 0: cross(boat);\n maxstep :: 4;\n maxstep: loc(boat) = bank2."});
  ASSERT_TRUE(q.ok()) << format_diagnostics(q.diagnostics);
  EXPECT_EQ(q.query.maxstep, 4);
  EXPECT_EQ(q.query.items.size(), 3u);
  auto again = parse_query(SourceProgram{render_query(q.query)});
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(render_query(again.query), render_query(q.query));
}

TEST(Parser, OperatorsAndPrecedence) {
  auto p = must_parse(
      ":- sorts integer.\n:- objects 0..9 :: integer.\n:- variables N, M :: integer.\n"
      ":- constants c :: inertialFluent(integer); b :: inertialFluent.\n"
      "impossible N = c & M = (N + 1) * 2 // 3 mod 2 & ~b | b.\n"
      "impossible N = c & (N < 1 -> b).\n");
  EXPECT_EQ(to_string(p.laws[0].condition), "N = c & M = (N + 1) * 2 // 3 mod 2 & ~b | b");
  EXPECT_EQ(p.laws[0].condition.kind, FormulaKind::Or);
  EXPECT_EQ(p.laws[1].condition.children[1].kind, FormulaKind::Implies);
}

TEST(Parser, FuzzNeverThrows) {
  std::string base = kBoats;
  std::uint64_t x = 12345;
  for (int i = 0; i < 300; ++i) {
    std::string s = base;
    for (int j = 0; j < 5; ++j) {
      x = x * 6364136223846793005ULL + 1442695040888963407ULL;
      std::size_t pos = (x >> 33) % s.size();
      const char* junk[] = {".", ";", "(", ")", "&", ":-", "::", "if", "after", "", "~", "="};
      s.replace(pos, (x >> 20) % 4, junk[(x >> 40) % 12]);
    }
    EXPECT_NO_THROW(parse_program(s));
  }
}
