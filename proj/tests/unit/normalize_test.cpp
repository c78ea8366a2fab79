#include <filesystem>

#include <gtest/gtest.h>

#include "../shorthand_golden.hpp"
#include "bcplus/normalize.hpp"
#include "test_util.hpp"

using namespace bcplus;

namespace {

const char* kSig = shorthand_random::kSignature;

}  // namespace

TEST(Shorthand, GoldenExpansions) {
  auto cases = shorthand_cases("fixtures/shorthand/golden.txt");
  std::map<std::string, int> per_rule;
  for (const auto& c : cases) {
    EXPECT_EQ(c.actual, c.expected) << c.law;
    ++per_rule[c.rule];
  }
  for (const char* rule : {"causes", "impossible", "nonexecutable", "always"}) EXPECT_GE(per_rule[rule], 3) << rule;
}

TEST(Shorthand, IdempotentOnRandomBasicLaws) {
  auto bad = shorthand_random::idempotence_failures(100, 7);
  EXPECT_TRUE(bad.empty()) << bad.front();
}

TEST(Shorthand, DefaultsAndContributions) {
  auto p = must_parse(std::string(kSig) +
                      "default lit if at(a) = p.\n"
                      "default at(b) = q if lit after push.\n");
  auto d1 = expand_shorthand(p.laws[0], p);
  ASSERT_EQ(d1.size(), 1u);
  EXPECT_EQ(d1[0].form, BasicForm::Default);
  EXPECT_FALSE(d1[0].after.has_value());
  auto d2 = expand_shorthand(p.laws[1], p);
  ASSERT_TRUE(d2[0].after.has_value());
  EXPECT_EQ(to_string(*d2[0].after), "push");

  auto q = must_parse(
      ":- sorts integer.\n:- objects 0..5 :: integer.\n:- variables N :: integer.\n"
      ":- constants fill :: exogenousAction; amount :: attribute(integer) of fill;\n"
      "  stock :: additiveFluent(integer).\n"
      "fill decrements stock by N if amount = N.\n");
  auto c = expand_shorthand(q.laws[0], q);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].form, BasicForm::Contribution);
  EXPECT_EQ(c[0].sign, -1);
}

TEST(Shorthand, AdditiveHeadMisuseThrows) {
  auto p = must_parse(
      ":- sorts integer.\n:- objects 0..5 :: integer.\n"
      ":- constants fill :: exogenousAction; stock :: additiveFluent(integer).\n"
      "fill causes stock = 2.\n");
  try {
    expand_shorthand(p.laws[0], p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AdditiveHeadMisuse);
  }
}

TEST(Validator, IncorrectSnippetsFlaggedCorrectedClean) {
  namespace fs = std::filesystem;
  int pairs = 0;
  for (const auto& entry : fs::directory_iterator("fixtures/validator")) {
    std::string path = entry.path().string();
    if (path.size() < 7 || path.substr(path.size() - 7) != "_bad.bc") continue;
    std::string good = path.substr(0, path.size() - 7) + "_good.bc";
    auto bad_r = parse_program(slurp(path));
    auto bad = bad_r.diagnostics;
    if (bad_r.ok())
      for (auto& d : validate_program(bad_r.program)) bad.push_back(d);
    EXPECT_FALSE(bad.empty()) << path;
    auto good_r = parse_program(slurp(good));
    EXPECT_TRUE(good_r.diagnostics.empty()) << good << format_diagnostics(good_r.diagnostics);
    EXPECT_TRUE(validate_program(good_r.program).empty())
        << good << format_diagnostics(validate_program(good_r.program));
    ++pairs;
  }
  EXPECT_GE(pairs, 5);
}

TEST(Validator, InitialProgramNeedsAdditiveTarget) {
  auto d = validate_program(must_parse(slurp("fixtures/mcp/initial.bc")));
  ASSERT_TRUE(has_errors(d));
  EXPECT_NE(format_diagnostics(d).find("must be an additive constant"), std::string::npos);
  EXPECT_TRUE(validate_program(must_parse(slurp("fixtures/mcp/basic.bc"))).empty());
}

TEST(Validator, UndeclaredNamesAndCycles) {
  auto p = must_parse(":- sorts a >> b; b >> a.\n:- objects x :: a.\n:- constants f :: inertialFluent(c).\n");
  auto d = format_diagnostics(validate_program(p));
  EXPECT_NE(d.find("c"), std::string::npos);
  EXPECT_TRUE(has_errors(validate_program(p)));
  auto q = must_parse(":- sorts a.\n:- objects x :: a.\n:- constants f :: inertialFluent.\nf if g.\n");
  EXPECT_TRUE(has_errors(validate_program(q)));
}

TEST(Ground, DomainsAndInstances) {
  auto g = ground_text(std::string(kSig) + "lit if at(a) = p.\n");
  EXPECT_EQ(g->fluents.size(), 4u);  // at(a), at(b), lit, level
  auto at_a = g->find_instance("at(a)");
  ASSERT_TRUE(at_a);
  EXPECT_EQ(g->instances[*at_a].domain.size(), 2u);
  auto dest = g->find_instance("dest(a)");
  ASSERT_TRUE(dest);
  EXPECT_TRUE(g->instances[*dest].has_none);
  EXPECT_EQ(g->instances[*dest].domain_size(), 3u);
}

TEST(Ground, VariablesExpandOverSortWithSubsorts) {
  auto p = must_parse(
      ":- sorts thing >> box.\n:- objects t1 :: thing; b1, b2 :: box.\n:- variables T :: thing.\n"
      ":- constants moved(thing) :: inertialFluent.\nimpossible moved(T).\n");
  auto dom = sort_domain(p.sorts, p.objects, "thing");
  ASSERT_EQ(dom.size(), 3u);
  EXPECT_EQ(to_string(dom[0]), "t1");
  auto g = ground(p);
  EXPECT_EQ(g->laws.size(), 3u);
}

TEST(Formula, DeMorganOnRandomValuations) {
  Formula lhs = Formula::negation(Formula::conj({Formula::atom(Term::symbol("lit")),
                                                 Formula::compare(CompareOp::Eq, Term::symbol("at", {Term::symbol("a")}),
                                                                  Term::symbol("p"))}));
  Formula rhs = Formula::disj({Formula::negation(lhs.children[0].children[0]),
                               Formula::negation(lhs.children[0].children[1])});
  std::mt19937 rng(3);
  for (int i = 0; i < 50; ++i) {
    Valuation v;
    v["lit"] = Term::symbol(rng() % 2 ? "true" : "false");
    v["at(a)"] = Term::symbol(rng() % 2 ? "p" : "q");
    EXPECT_EQ(eval_formula(lhs, v), eval_formula(rhs, v));
  }
}

TEST(Formula, FloorDivision) {
  EXPECT_EQ(floor_div(7, 3), 2);
  EXPECT_EQ(floor_div(-7, 3), -3);
  EXPECT_EQ(floor_mod(-7, 3), 2);
  EXPECT_EQ(floor_div(8, 3), 2);
  EXPECT_EQ(floor_mod(8, 3), 2);
}
