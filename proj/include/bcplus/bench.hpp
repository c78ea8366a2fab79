#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bcplus/config.hpp"

namespace bcplus {

struct Fixture {
  std::string name;
  std::string suite;
  std::string program;                 // absolute path
  std::optional<int> expected;         // nullopt: no plan up to max_horizon
  int max_horizon = 30;
  bool oracle = true;
  int oracle_concurrency = 1;
  bool oracle_advisory = false;
  bool transitions = false;
  bool sudoku = false;
  bool slow = false;
  std::string golden;  // frozen state/transition counts, when present
};

// Reads the fixture manifest. Program paths are resolved against the
// manifest's directory.
std::vector<Fixture> load_suite(const std::string& path);
// "all", "quick" (everything not marked slow), a suite name or a fixture name.
std::vector<Fixture> select_fixtures(const std::vector<Fixture>& all, const std::string& which);

struct FixtureReport {
  std::string name;
  std::string expected;          // "11" or "unsat<=30"
  std::string error;             // parse, grounding or solver failure
  bool satisfiable = false;
  int horizon = -1;
  int last_horizon = -1;
  std::string models;
  bool verdict_ok = false;
  double solve_seconds = 0;

  std::string oracle = "skipped";  // skipped, cap, agree, disagree
  bool oracle_advisory = false;    // a disagreement is reported but not failed
  int oracle_length = -1;
  std::size_t oracle_states = 0;
  double oracle_seconds = 0;

  std::optional<bool> plan_valid;  // oracle replay of the emitted plan
  std::string violation;
  std::optional<std::string> property_failure;  // first failed model check
  std::optional<bool> sudoku_valid;
  std::optional<bool> transitions_match;
  std::size_t state_count = 0, transition_count = 0;
  std::optional<bool> deterministic;
  std::string plan_text;          // solver listing

  bool passed() const;
  nlohmann::json json() const;
};

struct BenchOptions {
  Config config;
  int repeats = 1;  // extra solves compared against the first for determinism
};

struct BenchReport {
  std::vector<FixtureReport> fixtures;
  int passed() const;
  std::string table() const;
  std::string jsonl() const;
};

// The k=1 models of the encoding against the oracle's transition relation,
// compared on fluent and action values.
struct TransitionCheck {
  std::size_t states = 0, transitions = 0, models = 0;
  bool match = false;
};
TransitionCheck compare_transitions(GroundProgram& g, const OracleOptions& oo = {});

FixtureReport run_fixture(const Fixture& f, const BenchOptions& opts);
// Fixtures run on `config.bench.workers` threads; the report keeps input order.
BenchReport run_bench(const std::vector<Fixture>& fixtures, const BenchOptions& opts);

// Row/column/box check of a 9x9 grid read from `val(R,C)=V` atoms.
bool sudoku_grid_valid(const std::vector<std::string>& atoms, std::string* why = nullptr);

}  // namespace bcplus
