#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bcplus/bench.hpp"
#include "bcplus/parser.hpp"
#include "bcplus/properties.hpp"

namespace bcplus {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

std::vector<Fixture> load_suite(const std::string& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::Config, path + ": " + e.message());
  }
  fs::path dir = fs::path(path).parent_path();
  std::vector<Fixture> out;
  for (const auto& [name, s] : tree) {
    Fixture f;
    f.name = name;
    f.suite = s.get<std::string>("suite", "misc");
    auto prog = s.get_optional<std::string>("program");
    if (!prog) throw Error(ErrorCode::Config, "[" + name + "] has no program");
    f.program = (dir / *prog).string();
    std::string exp = s.get<std::string>("expected", "");
    if (exp == "unsat") {
    } else {
      try {
        f.expected = std::stoi(exp);
      } catch (const std::exception&) {
        throw Error(ErrorCode::Config, "[" + name + "] expected must be a length or 'unsat'");
      }
    }
    auto flag = [&](const char* key, bool dflt) {
      std::string v = s.get<std::string>(key, dflt ? "yes" : "no");
      return v == "yes" || v == "true" || v == "1";
    };
    f.max_horizon = s.get<int>("max_horizon", 30);
    f.oracle = flag("oracle", true);
    f.oracle_concurrency = s.get<int>("oracle_concurrency", 1);
    f.oracle_advisory = flag("oracle_advisory", false);
    f.transitions = flag("transitions", false);
    f.sudoku = flag("sudoku", false);
    f.slow = flag("slow", false);
    fs::path golden = dir / "golden" / (name + ".txt");
    if (fs::exists(golden)) f.golden = golden.string();
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Fixture> select_fixtures(const std::vector<Fixture>& all, const std::string& which) {
  std::vector<Fixture> out;
  for (const auto& f : all)
    if (which == "all" || (which == "quick" && !f.slow) || f.suite == which || f.name == which)
      out.push_back(f);
  if (out.empty()) throw Error(ErrorCode::Config, "no fixture matches '" + which + "'");
  return out;
}

bool sudoku_grid_valid(const std::vector<std::string>& atoms, std::string* why) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  int grid[9][9] = {};
  static const std::regex cell(R"(val\((\d), ?(\d)\)=(\d))");
  for (const auto& a : atoms) {
    std::smatch m;
    if (!std::regex_match(a, m, cell)) continue;
    int r = std::stoi(m[1]) - 1, c = std::stoi(m[2]) - 1, v = std::stoi(m[3]);
    if (r < 0 || r > 8 || c < 0 || c > 8 || v < 1 || v > 9) return fail("bad cell " + a);
    grid[r][c] = v;
  }
  for (int r = 0; r < 9; ++r)
    for (int c = 0; c < 9; ++c)
      if (!grid[r][c]) return fail("cell " + std::to_string(r + 1) + "," + std::to_string(c + 1) + " empty");
  for (int i = 0; i < 9; ++i) {
    std::set<int> row, col, box;
    for (int j = 0; j < 9; ++j) {
      row.insert(grid[i][j]);
      col.insert(grid[j][i]);
      box.insert(grid[3 * (i / 3) + j / 3][3 * (i % 3) + j % 3]);
    }
    if (row.size() != 9) return fail("row " + std::to_string(i + 1) + " repeats a digit");
    if (col.size() != 9) return fail("column " + std::to_string(i + 1) + " repeats a digit");
    if (box.size() != 9) return fail("box " + std::to_string(i + 1) + " repeats a digit");
  }
  return true;
}

namespace {

double since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

using Key = std::vector<std::uint32_t>;

Key transition_key(const GroundProgram& g, const Key& s, const Key& a, const Key& n) {
  Key k;
  for (auto i : g.fluents) k.push_back(s[i]);
  for (auto i : g.actions) k.push_back(a[i]);
  for (auto i : g.fluents) k.push_back(n[i]);
  return k;
}

std::optional<std::pair<std::size_t, std::size_t>> read_golden(const std::string& path) {
  std::ifstream in(path);
  std::string word;
  std::size_t states = 0, transitions = 0, n;
  bool got_s = false, got_t = false;
  while (in >> word >> n) {
    if (word == "states") states = n, got_s = true;
    if (word == "transitions") transitions = n, got_t = true;
  }
  if (!got_s || !got_t) return std::nullopt;
  return std::make_pair(states, transitions);
}

const Query& main_query(const Program& p) {
  if (const Query* q = p.find_query("main")) return *q;
  if (p.queries.empty()) throw Error(ErrorCode::ValidationFailed, "the program has no query");
  return p.queries.front();
}

}  // namespace

TransitionCheck compare_transitions(GroundProgram& g, const OracleOptions& oo) {
  Oracle oracle(g, oo);
  std::set<Key> explicit_set, sat_set;
  auto states = oracle.states();
  for (const auto& s : states)
    for (const auto& [a, n] : oracle.successors(s)) explicit_set.insert(transition_key(g, s, a, n));
  auto models = enumerate_models(g, 1);
  for (const auto& m : models) sat_set.insert(transition_key(g, m.states[0], m.actions[0], m.states[1]));
  TransitionCheck tc;
  tc.states = states.size();
  tc.transitions = explicit_set.size();
  tc.models = models.size();
  tc.match = explicit_set == sat_set && models.size() == sat_set.size();
  return tc;
}

FixtureReport run_fixture(const Fixture& f, const BenchOptions& opts) {
  FixtureReport r;
  r.name = f.name;
  r.oracle_advisory = f.oracle_advisory;
  r.expected = f.expected ? std::to_string(*f.expected) : "unsat<=" + std::to_string(f.max_horizon);
  try {
    std::ifstream in(f.program);
    if (!in) throw Error(ErrorCode::Io, "cannot read " + f.program);
    std::stringstream ss;
    ss << in.rdbuf();
    auto parsed = parse_program(SourceProgram{ss.str(), f.program});
    if (!parsed.ok()) throw Error(ErrorCode::ValidationFailed, format_diagnostics(parsed.diagnostics));
    auto g = ground(parsed.program);
    const Query& q = main_query(g->source);

    SolveOptions so = opts.config.solve;
    so.max_horizon = f.max_horizon;
    auto t0 = std::chrono::steady_clock::now();
    auto o = solve_query(*g, q, so);
    r.solve_seconds = since(t0);
    r.satisfiable = o.satisfiable;
    r.horizon = o.horizon;
    r.last_horizon = o.last_horizon;
    r.models = o.models;
    r.plan_text = format_outcome(*g, o);
    r.verdict_ok = f.expected ? (o.satisfiable && o.horizon == *f.expected)
                              : (!o.satisfiable && o.last_horizon >= f.max_horizon);

    OracleOptions oo = opts.config.oracle;
    oo.concurrency = f.oracle_concurrency;
    if (o.satisfiable) {
      Oracle replay(*g, oo);
      auto v = replay.validate(o.plan, q, *g);
      r.plan_valid = !v;
      if (v) r.violation = v->str();
      if (auto e = check_constraints(*g, o.plan))
        r.property_failure = "constraints: " + *e;
      else if (auto e2 = check_completion(*g, o.plan))
        r.property_failure = "completion: " + *e2;
      else if (auto e3 = check_additive(*g, o.plan))
        r.property_failure = "additive: " + *e3;
      if (f.sudoku) {
        std::string why;
        r.sudoku_valid = sudoku_grid_valid(state_atoms(*g, o.plan.states.front()), &why);
        if (!*r.sudoku_valid) r.violation = why;
      }
    }
    for (int i = 0; i < opts.repeats; ++i) {
      auto again = solve_query(*g, q, so);
      bool same = again.satisfiable == o.satisfiable && again.horizon == o.horizon &&
                  (!o.satisfiable || again.plan == o.plan);
      r.deterministic = r.deterministic.value_or(true) && same;
    }

    if (f.oracle) {
      auto t1 = std::chrono::steady_clock::now();
      try {
        Oracle oracle(*g, oo);
        auto [init, goal] = query_endpoints(*g, q);
        auto b = oracle.shortest_plan(init, goal, f.max_horizon);
        r.oracle_length = b.found ? b.length : -1;
        r.oracle_states = b.states_seen;
        bool agree = b.found ? (o.satisfiable && o.horizon == b.length) : !o.satisfiable;
        r.oracle = agree ? "agree" : "disagree";
      } catch (const Error& e) {
        if (e.code() != ErrorCode::StateSpaceTooLarge) throw;
        r.oracle = "cap";
      }
      r.oracle_seconds = since(t1);
    }

    if (f.transitions) {
      auto tc = compare_transitions(*g, oo);
      r.state_count = tc.states;
      r.transition_count = tc.transitions;
      r.transitions_match = tc.match;
      if (!f.golden.empty()) {
        auto gold = read_golden(f.golden);
        if (!gold || gold->first != r.state_count || gold->second != r.transition_count)
          r.transitions_match = false;
      }
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

bool FixtureReport::passed() const {
  if (!error.empty() || !verdict_ok) return false;
  if (oracle == "disagree" && !oracle_advisory) return false;
  if (plan_valid && !*plan_valid) return false;
  if (property_failure) return false;
  if (sudoku_valid && !*sudoku_valid) return false;
  if (transitions_match && !*transitions_match) return false;
  if (deterministic && !*deterministic) return false;
  return true;
}

nlohmann::json FixtureReport::json() const {
  nlohmann::json j;
  j["fixture"] = name;
  j["expected"] = expected;
  j["passed"] = passed();
  if (!error.empty()) j["error"] = error;
  j["result"] = satisfiable ? "SATISFIABLE" : "UNSATISFIABLE up to horizon " + std::to_string(last_horizon);
  if (satisfiable) j["horizon"] = horizon;
  j["models"] = models;
  j["oracle"] = oracle;
  if (oracle_length >= 0) j["oracle_length"] = oracle_length;
  if (oracle_states) j["oracle_states"] = oracle_states;
  if (plan_valid) j["plan_valid"] = *plan_valid;
  if (!violation.empty()) j["violation"] = violation;
  if (property_failure) j["property_failure"] = *property_failure;
  if (sudoku_valid) j["sudoku_valid"] = *sudoku_valid;
  if (transitions_match) {
    j["transitions_match"] = *transitions_match;
    j["states"] = state_count;
    j["transitions"] = transition_count;
  }
  if (deterministic) j["deterministic"] = *deterministic;
  j["solve_seconds"] = solve_seconds;
  j["oracle_seconds"] = oracle_seconds;
  return j;
}

int BenchReport::passed() const {
  int n = 0;
  for (const auto& f : fixtures) n += f.passed();
  return n;
}

std::string BenchReport::table() const {
  std::ostringstream out;
  out << std::left << std::setw(16) << "fixture" << std::setw(11) << "expected" << std::setw(9)
      << "solver" << std::setw(10) << "oracle" << std::setw(7) << "plan" << std::setw(9) << "seconds"
      << "status\n";
  for (const auto& f : fixtures) {
    std::string solver = f.error.empty() ? (f.satisfiable ? std::to_string(f.horizon) : "unsat") : "error";
    std::string oracle = f.oracle;
    if (f.oracle == "agree" || f.oracle == "disagree")
      oracle = (f.oracle_length >= 0 ? std::to_string(f.oracle_length) : "none") +
               (f.oracle == "agree" ? "" : "!");
    std::string plan = f.plan_valid ? (*f.plan_valid ? "valid" : "BAD") : "-";
    std::ostringstream secs;
    secs << std::fixed << std::setprecision(2) << f.solve_seconds + f.oracle_seconds;
    out << std::setw(16) << f.name << std::setw(11) << f.expected << std::setw(9) << solver
        << std::setw(10) << oracle << std::setw(7) << plan << std::setw(9) << secs.str()
        << (f.passed() ? "ok" : "FAIL");
    if (!f.error.empty()) out << "  " << f.error.substr(0, f.error.find('\n'));
    if (f.property_failure) out << "  " << *f.property_failure;
    if (f.transitions_match && !*f.transitions_match) out << "  transition sets differ";
    if (f.deterministic && !*f.deterministic) out << "  nondeterministic";
    out << "\n";
  }
  out << passed() << "/" << fixtures.size() << " fixtures passed\n";
  return out.str();
}

std::string BenchReport::jsonl() const {
  std::string out;
  for (const auto& f : fixtures) out += f.json().dump() + "\n";
  return out;
}

BenchReport run_bench(const std::vector<Fixture>& fixtures, const BenchOptions& opts) {
  BenchReport report;
  report.fixtures.resize(fixtures.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < fixtures.size(); i = next++)
      report.fixtures[i] = run_fixture(fixtures[i], opts);
  };
  int n = std::max(1, std::min<int>(opts.config.bench.workers, static_cast<int>(fixtures.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return report;
}

}  // namespace bcplus
