#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bcplus/normalize.hpp"
#include "bcplus/sat.hpp"

namespace bcplus {

// Propositional encoding of the transition system unrolled to horizon k,
// with a query asserted on top. One finite-domain variable per fluent
// instance and step 0..k and per action instance and step 0..k-1.
class Encoder {
 public:
  Encoder(GroundProgram& g, int horizon);

  int horizon() const { return k_; }
  // Asserts every item of the query (maxstep items at step k).
  void assert_query(const Query& q);
  void assert_formula(const GFormula& f, int step);

  SatSolver& solver() { return solver_; }
  Trajectory decode() const;
  // Clause excluding the current model's trajectory.
  std::vector<int> blocking_clause(const Trajectory& t) const;
  // DIMACS with comment lines naming each primary variable.
  std::string dimacs() const;

  // Literal for "instance takes value index val at step".
  int atom(std::uint32_t inst, std::uint32_t val, int step) const;

 private:
  struct FdVar {
    bool boolean = false;
    std::vector<int> lits;  // boolean: lits[0] is the variable
  };

  int fresh() { return solver_.new_var(); }
  void clause(std::vector<int> c) { solver_.add_clause(std::move(c)); }
  const FdVar& fd(std::uint32_t inst, int step) const;
  void exactly_one(const std::vector<int>& lits);
  int constant_true();

  // Literal equivalent to the formula; fluents at fstep, actions at astep.
  int literal(const GFormula& f, int fstep, int astep);
  // Conjunction of literals when the formula is one, otherwise nullopt.
  bool as_literals(const GFormula& f, int fstep, int astep, std::vector<int>& out);

  void encode_law(const GroundLaw& l, int t);
  void encode_completion(int t);
  void encode_additive(int t);
  // (fire literal, amount) pairs of which at most one fires
  using Group = std::vector<std::pair<int, std::int64_t>>;
  // sum of the fired amounts; returns literals of the final partial-sum values
  std::vector<std::pair<std::int64_t, int>> sum_chain(const std::vector<Group>& groups,
                                                      std::int64_t lo, std::int64_t hi);

  GroundProgram& g_;
  int k_;
  SatSolver solver_;
  std::vector<std::vector<FdVar>> vars_;  // [inst][step]
  int true_lit_ = 0;
  // support literals for completion: [step][inst][val]
  std::vector<std::vector<std::vector<std::vector<int>>>> support_;
};

}  // namespace bcplus
