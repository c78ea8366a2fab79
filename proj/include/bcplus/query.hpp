#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "bcplus/encode.hpp"
#include "bcplus/normalize.hpp"

namespace bcplus {

struct SolveOptions {
  int max_horizon = 30;  // ceiling when the query has no maxstep
  SatLimits limits;      // applies to each horizon separately
  // Conflict budget for the second solve that decides "1" versus "1+".
  std::uint64_t second_model_conflicts = 100'000;
  bool keep_dimacs = false;
};

struct HorizonSolve {
  int horizon = 0;
  bool satisfiable = false;
  std::uint64_t conflicts = 0;
  double seconds = 0;
};

struct SolveOutcome {
  bool satisfiable = false;
  int horizon = -1;         // horizon of the plan when satisfiable
  int first_horizon = 0;    // horizons tried: first_horizon..last_horizon
  int last_horizon = -1;
  Trajectory plan;
  std::string models = "0";  // "0", "1" or "1+"
  SatStats stats;
  double seconds = 0;
  std::string dimacs;  // encoding of the last horizon tried, when kept
  std::vector<HorizonSolve> horizons;  // one entry per horizon tried
};

// Smallest horizon the query can be satisfied at: its largest explicit step,
// plus one when actions are mentioned at that step.
int minimum_horizon(const GroundProgram& g, const Query& q);

// Iterates the horizon (or uses maxstep when given). Throws
// Error(SolverBudgetExceeded) or Error(Cancelled) when a limit stops the
// search before an answer.
SolveOutcome solve_query(GroundProgram& g, const Query& q, const SolveOptions& opts = {});

// Satisfiability check of a whole program: validation, then a query-free
// encoding at horizon 0. `feedback` is what a user of the reasoner would see:
// the diagnostics on failure, otherwise the solver listing.
struct SatCheck {
  bool satisfiable = false;
  std::vector<Diagnostic> diagnostics;
  std::string feedback;
};
SatCheck check_satisfiability(const Program& p, const SolveOptions& opts = {});
// Same, starting from source text (parse errors are reported as feedback).
SatCheck check_satisfiability(const std::string& text, const SolveOptions& opts = {});

struct SampleQuery {
  Query query;
  std::optional<bool> expect_sat;  // nullopt: no annotation, excluded from matching
  std::string text;                // the query as written
};

struct SampleResult {
  SolveOutcome outcome;
  std::optional<bool> matched;
  std::string output;  // listing, or the error message
  bool failed = false;
};

// Runs each query independently. Solver errors become failed results.
std::vector<SampleResult> run_sample_queries(GroundProgram& g, const std::vector<SampleQuery>& qs,
                                             const SolveOptions& opts = {});

// Every model at horizon k (optionally under a query), projected onto the
// fluent and action values and listed in the order found. Stops after `cap`.
std::vector<Trajectory> enumerate_models(GroundProgram& g, int k, const Query* q = nullptr,
                                         std::size_t cap = 1'000'000);

// Output in the usual solver listing layout:
//   Solving...
//   Solution: 1
//   ...
//   SATISFIABLE
//   Models       : 1+
std::string format_outcome(const GroundProgram& g, const SolveOutcome& o);
std::string format_trajectory(const GroundProgram& g, const Trajectory& t);

nlohmann::json outcome_json(const GroundProgram& g, const SolveOutcome& o,
                            const std::string& label = "");

// Reads a trajectory back from the listing produced by format_trajectory.
// Fluents not mentioned at a step are an error; actions not mentioned are
// taken as not occurring.
Trajectory parse_trajectory(const GroundProgram& g, const std::string& text);

// Atoms that hold at each step, sorted for display.
std::vector<std::string> state_atoms(const GroundProgram& g, const std::vector<std::uint32_t>& s);
std::vector<std::string> action_atoms(const GroundProgram& g, const std::vector<std::uint32_t>& a);

}  // namespace bcplus
