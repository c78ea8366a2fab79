#pragma once

#include <chrono>
#include <cstdint>
#include <stop_token>
#include <string>
#include <vector>

namespace bcplus {

// Literals use DIMACS convention: variable v > 0 is `v`, its negation `-v`.
struct SatLimits {
  std::uint64_t max_conflicts = 10'000'000;
  double max_seconds = 60.0;
  std::stop_token stop;
};

enum class SatResult { Sat, Unsat, Unknown };

struct SatStats {
  std::uint64_t conflicts = 0;
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t restarts = 0;
};

// Conflict-driven clause learning with two watched literals, first-UIP
// learning, VSIDS, phase saving and Luby restarts. Fully deterministic.
class SatSolver {
 public:
  int new_var();
  int num_vars() const { return static_cast<int>(assigns_.size()); }
  // Returns false when the clause set became trivially unsatisfiable.
  bool add_clause(std::vector<int> lits);
  SatResult solve(const SatLimits& limits = {});
  // Model value after Sat.
  bool value(int var) const { return model_[var - 1]; }
  const SatStats& stats() const { return stats_; }
  // Original (non-learnt) clauses as added, for export.
  const std::vector<std::vector<int>>& original_clauses() const { return original_; }
  bool stopped_by_cancel() const { return cancelled_; }

 private:
  using Lit = std::uint32_t;  // 2*var + neg
  static Lit mk(int dimacs) {
    return dimacs > 0 ? static_cast<Lit>(2 * (dimacs - 1)) : static_cast<Lit>(2 * (-dimacs - 1) + 1);
  }
  static std::uint32_t var(Lit l) { return l >> 1; }
  static Lit neg(Lit l) { return l ^ 1u; }

  struct Clause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0;
  };
  struct Watch {
    std::uint32_t cref;
    Lit blocker;
  };

  // 0 true, 1 false, 2 unassigned
  std::uint8_t lit_value(Lit l) const {
    std::uint8_t a = assigns_[var(l)];
    return a == 2 ? 2 : static_cast<std::uint8_t>(a ^ (l & 1u));
  }
  void enqueue(Lit l, std::int64_t reason);
  std::int64_t propagate();
  void analyze(std::uint32_t confl, std::vector<Lit>& learnt, int& bt_level);
  bool redundant(Lit l, std::uint32_t abstract_levels);
  void cancel_until(int level);
  Lit pick_branch();
  void bump_var(std::uint32_t v);
  void bump_clause(Clause& c);
  void reduce_db();
  void attach(std::uint32_t cref);
  int level() const { return static_cast<int>(trail_lim_.size()); }

  // heap
  void heap_insert(std::uint32_t v);
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);
  std::uint32_t heap_pop();
  bool heap_less(std::uint32_t a, std::uint32_t b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }

  std::vector<Clause> clauses_;
  std::vector<std::vector<Watch>> watches_;
  std::vector<std::uint8_t> assigns_;  // 0 false(positive lit false?) see lit_value
  std::vector<std::uint8_t> polarity_;
  std::vector<int> levels_;
  std::vector<std::int64_t> reasons_;
  std::vector<double> activity_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<std::uint32_t> heap_;
  std::vector<int> heap_pos_;
  std::vector<std::uint8_t> seen_;
  std::vector<Lit> analyze_stack_;
  std::vector<Lit> analyze_clear_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  bool ok_ = true;
  bool cancelled_ = false;
  std::vector<bool> model_;
  std::vector<std::vector<int>> original_;
  std::vector<std::uint32_t> learnts_;
  SatStats stats_;
};

std::string to_dimacs(int num_vars, const std::vector<std::vector<int>>& clauses,
                      const std::vector<std::string>& comments = {});

}  // namespace bcplus
