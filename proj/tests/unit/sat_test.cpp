#include <random>

#include <gtest/gtest.h>

#include "bcplus/sat.hpp"

using namespace bcplus;

namespace {

using Cnf = std::vector<std::vector<int>>;

bool brute_force_sat(int n, const Cnf& cnf) {
  for (std::uint32_t m = 0; m < (1u << n); ++m) {
    bool all = true;
    for (const auto& c : cnf) {
      bool any = false;
      for (int l : c) any = any || (((m >> (std::abs(l) - 1)) & 1u) == (l > 0 ? 1u : 0u));
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

Cnf random_cnf(std::mt19937& rng, int n, int m) {
  Cnf cnf;
  for (int i = 0; i < m; ++i) {
    std::vector<int> c;
    for (int j = 0; j < 3; ++j) {
      int v = 1 + static_cast<int>(rng() % n);
      c.push_back(rng() % 2 ? v : -v);
    }
    cnf.push_back(c);
  }
  return cnf;
}

}  // namespace

TEST(Sat, AgreesWithBruteForce) {
  std::mt19937 rng(11);
  int sat = 0, unsat = 0;
  for (int round = 0; round < 300; ++round) {
    int n = 4 + static_cast<int>(rng() % 9);
    Cnf cnf = random_cnf(rng, n, static_cast<int>(n * 4.3));
    SatSolver s;
    for (int i = 0; i < n; ++i) s.new_var();
    for (const auto& c : cnf) s.add_clause(c);
    auto r = s.solve();
    bool expected = brute_force_sat(n, cnf);
    ASSERT_EQ(r == SatResult::Sat, expected) << "round " << round;
    if (r == SatResult::Sat) {
      ++sat;
      for (const auto& c : cnf) {
        bool any = false;
        for (int l : c) any = any || s.value(std::abs(l)) == (l > 0);
        EXPECT_TRUE(any);
      }
    } else {
      ++unsat;
    }
  }
  EXPECT_GT(sat, 20);
  EXPECT_GT(unsat, 20);
}

TEST(Sat, PigeonholeIsUnsat) {
  const int holes = 5, pigeons = 6;
  SatSolver s;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  for (int i = 0; i < holes * pigeons; ++i) s.new_var();
  for (int p = 0; p < pigeons; ++p) {
    std::vector<int> c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    s.add_clause(c);
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q) s.add_clause({-var(p, h), -var(q, h)});
  EXPECT_EQ(s.solve(), SatResult::Unsat);
}

TEST(Sat, ConflictBudgetGivesUnknown) {
  const int holes = 8, pigeons = 9;
  SatSolver s;
  auto var = [&](int p, int h) { return p * holes + h + 1; };
  for (int i = 0; i < holes * pigeons; ++i) s.new_var();
  for (int p = 0; p < pigeons; ++p) {
    std::vector<int> c;
    for (int h = 0; h < holes; ++h) c.push_back(var(p, h));
    s.add_clause(c);
  }
  for (int h = 0; h < holes; ++h)
    for (int p = 0; p < pigeons; ++p)
      for (int q = p + 1; q < pigeons; ++q) s.add_clause({-var(p, h), -var(q, h)});
  SatLimits lim;
  lim.max_conflicts = 50;
  EXPECT_EQ(s.solve(lim), SatResult::Unknown);
}

TEST(Sat, DeterministicModels) {
  std::mt19937 rng(5);
  Cnf cnf = random_cnf(rng, 40, 150);
  std::vector<bool> first;
  for (int run = 0; run < 3; ++run) {
    SatSolver s;
    for (int i = 0; i < 40; ++i) s.new_var();
    for (const auto& c : cnf) s.add_clause(c);
    ASSERT_EQ(s.solve(), SatResult::Sat);
    std::vector<bool> m;
    for (int v = 1; v <= 40; ++v) m.push_back(s.value(v));
    if (run == 0) first = m;
    EXPECT_EQ(m, first);
  }
}

TEST(Sat, DimacsText) {
  auto text = to_dimacs(3, {{1, -2}, {3}}, {"x"});
  EXPECT_EQ(text, "c x\np cnf 3 2\n1 -2 0\n3 0\n");
}
