#include <gtest/gtest.h>

#include "bcplus/bench.hpp"

using namespace bcplus;

namespace {

std::vector<std::string> grid_atoms(const int rows[9][9]) {
  std::vector<std::string> atoms;
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c)
      atoms.push_back("val(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")=" + std::to_string(rows[r][c]));
  return atoms;
}

}  // namespace

TEST(Bench, SuiteLoadsAndSelects) {
  auto all = load_suite("fixtures/suite.ini");
  EXPECT_GE(all.size(), 30u);
  auto quick = select_fixtures(all, "quick");
  EXPECT_LT(quick.size(), all.size());
  for (const auto& f : quick) EXPECT_FALSE(f.slow) << f.name;
  auto mcp = select_fixtures(all, "mcp");
  EXPECT_GE(mcp.size(), 17u);
  auto one = select_fixtures(all, "river-basic");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].expected, 7);
  EXPECT_TRUE(one[0].transitions);
  EXPECT_FALSE(one[0].golden.empty());
  EXPECT_THROW(select_fixtures(all, "no-such-fixture"), Error);
  auto s = select_fixtures(all, "sudoku-var1");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_FALSE(s[0].expected.has_value());
}

TEST(Bench, SudokuChecker) {
  int g[9][9];
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c) g[r][c] = (r * 3 + r / 3 + c) % 9 + 1;
  std::string why;
  EXPECT_TRUE(sudoku_grid_valid(grid_atoms(g), &why)) << why;
  std::swap(g[0][0], g[0][1]);
  g[1][0] = g[0][0];
  EXPECT_FALSE(sudoku_grid_valid(grid_atoms(g), &why));
  EXPECT_FALSE(why.empty());
  EXPECT_FALSE(sudoku_grid_valid({"val(1,1)=1"}));
}

TEST(Bench, RunsSmallFixtures) {
  auto all = load_suite("fixtures/suite.ini");
  BenchOptions opts;
  opts.repeats = 1;
  auto report = run_bench(select_fixtures(all, "river-basic"), opts);
  ASSERT_EQ(report.fixtures.size(), 1u);
  const auto& r = report.fixtures[0];
  EXPECT_TRUE(r.passed()) << r.json().dump();
  EXPECT_EQ(r.horizon, 7);
  EXPECT_EQ(r.oracle, "agree");
  EXPECT_EQ(r.plan_valid, true);
  EXPECT_EQ(r.transitions_match, true);
  EXPECT_EQ(r.deterministic, true);
  EXPECT_EQ(report.passed(), 1);
  EXPECT_NE(report.table().find("river-basic"), std::string::npos);

  auto unsat = run_bench(select_fixtures(all, "mcp-3"), opts);
  EXPECT_TRUE(unsat.fixtures[0].passed()) << unsat.fixtures[0].json().dump();
  EXPECT_FALSE(unsat.fixtures[0].satisfiable);
}

TEST(Bench, MissingProgramIsReported) {
  Fixture f;
  f.name = "ghost";
  f.program = "/nonexistent/ghost.bc";
  f.expected = 3;
  auto r = run_fixture(f, BenchOptions{});
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.error.empty());
}
