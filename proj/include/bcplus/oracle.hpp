#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcplus/normalize.hpp"

namespace bcplus {

// Explicit-state reference semantics. Works from the ground program only and
// never looks at the propositional encoding.
struct OracleOptions {
  std::size_t state_cap = 5'000'000;  // candidates visited before giving up
  int concurrency = 1;                // exogenous actions allowed per step
};

struct Violation {
  int step = 0;
  std::string message;
  std::string law;      // source text of the violated law, if any
  std::string binding;  // variable binding of the ground instance
  std::string str() const;
};

struct BfsResult {
  bool found = false;
  int length = -1;
  Trajectory plan;
  std::size_t states_seen = 0;
  bool exhausted = false;  // whole reachable space explored without a goal
};

// Initial and goal conditions of a planning query: items at step 0 and at
// maxstep, fluents only. Throws ValidationFailed for anything else.
std::pair<GFormula, GFormula> query_endpoints(GroundProgram& g, const Query& q);

class Oracle {
 public:
  explicit Oracle(const GroundProgram& g, OracleOptions opts = {});

  // Every state (static laws satisfied) that also satisfies `filter`.
  std::vector<std::vector<std::uint32_t>> states(const GFormula& filter = GFormula::truth(true));

  // Every (actions, next state) pair leaving `s`.
  std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> successors(
      const std::vector<std::uint32_t>& s);

  // Shortest plan from any state satisfying `init` to one satisfying `goal`,
  // searching up to `bound` steps.
  BfsResult shortest_plan(const GFormula& init, const GFormula& goal, int bound);

  // First violation of the semantics along the trajectory, or nullopt.
  std::optional<Violation> validate(const Trajectory& t) const;
  // Same plus the query's timed items.
  std::optional<Violation> validate(const Trajectory& t, const Query& q, GroundProgram& g) const;

 private:
  using Vec = std::vector<std::uint32_t>;
  void count();
  std::vector<Vec> action_vectors(const Vec& s);
  bool fill_additive_actions(const Vec& s, Vec& a) const;
  std::optional<Violation> check_state(const Vec& s, int step) const;
  std::optional<Violation> check_transition(const Vec& s, const Vec& a, const Vec& n, int step) const;
  std::optional<Violation> law_violation(const GroundLaw& l, int step, const std::string& what) const;

  const GroundProgram& g_;
  OracleOptions opts_;
  std::size_t visited_ = 0;
  std::vector<std::uint32_t> inertial_;   // inertial fluent instances
  std::vector<std::uint32_t> additive_;   // additive fluent instances
  std::vector<int> position_;             // inst -> position in inertial_ (or -1)
  std::vector<std::size_t> static_laws_, dynamic_laws_, action_laws_;
  std::vector<std::vector<std::size_t>> static_at_;   // laws checkable after position p
  std::vector<std::vector<std::size_t>> dynamic_at_;
};

}  // namespace bcplus
