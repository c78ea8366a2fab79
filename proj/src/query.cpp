#include <algorithm>
#include <chrono>
#include <sstream>

#include "bcplus/parser.hpp"
#include "bcplus/query.hpp"

namespace bcplus {

int minimum_horizon(const GroundProgram& g, const Query& q) {
  int k = 0;
  bool action_at_max = false;
  for (const auto& item : q.items) {
    if (!item.step) {
      // maxstep items: an action mentioned there needs one more step
      if (mentions_action(item.formula, g.source)) action_at_max = true;
      continue;
    }
    bool act = mentions_action(item.formula, g.source);
    int need = *item.step + (act ? 1 : 0);
    k = std::max(k, need);
  }
  if (action_at_max) k = std::max(k, 1);
  return k;
}

namespace {

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void accumulate(SatStats& into, const SatStats& s) {
  into.conflicts += s.conflicts;
  into.decisions += s.decisions;
  into.propagations += s.propagations;
  into.restarts += s.restarts;
}

}  // namespace

SolveOutcome solve_query(GroundProgram& g, const Query& q, const SolveOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  SolveOutcome out;
  int lo = q.maxstep ? *q.maxstep : minimum_horizon(g, q);
  int hi = q.maxstep ? *q.maxstep : std::max(lo, opts.max_horizon);
  if (lo < 0) throw Error(ErrorCode::HorizonNegative, "maxstep must be non-negative");
  out.first_horizon = lo;
  for (int k = lo; k <= hi; ++k) {
    auto hstart = std::chrono::steady_clock::now();
    Encoder enc(g, k);
    enc.assert_query(q);
    out.last_horizon = k;
    auto r = enc.solver().solve(opts.limits);
    accumulate(out.stats, enc.solver().stats());
    if (opts.keep_dimacs) out.dimacs = enc.dimacs();
    if (r == SatResult::Unknown) {
      if (enc.solver().stopped_by_cancel())
        throw Error(ErrorCode::Cancelled, "solving cancelled at horizon " + std::to_string(k));
      throw Error(ErrorCode::SolverBudgetExceeded,
                  "solver budget exhausted at horizon " + std::to_string(k));
    }
    out.horizons.push_back({k, r == SatResult::Sat, enc.solver().stats().conflicts, elapsed(hstart)});
    if (r == SatResult::Unsat) continue;
    out.satisfiable = true;
    out.horizon = k;
    out.plan = enc.decode();
    SatStats before = enc.solver().stats();
    enc.solver().add_clause(enc.blocking_clause(out.plan));
    SatLimits second = opts.limits;
    second.max_conflicts = opts.second_model_conflicts;
    auto r2 = enc.solver().solve(second);
    // a second search that runs out of budget leaves the count open
    out.models = r2 == SatResult::Unsat ? "1" : "1+";
    SatStats after = enc.solver().stats();
    after.conflicts -= before.conflicts;
    after.decisions -= before.decisions;
    after.propagations -= before.propagations;
    after.restarts -= before.restarts;
    accumulate(out.stats, after);
    break;
  }
  out.seconds = elapsed(start);
  return out;
}

SatCheck check_satisfiability(const Program& p, const SolveOptions& opts) {
  SatCheck out;
  out.diagnostics = validate_program(p);
  if (has_errors(out.diagnostics)) {
    out.feedback = format_diagnostics(out.diagnostics);
    return out;
  }
  try {
    auto g = ground(p);
    Encoder enc(*g, 0);
    auto r = enc.solver().solve(opts.limits);
    SolveOutcome o;
    o.first_horizon = o.last_horizon = 0;
    o.stats = enc.solver().stats();
    if (r == SatResult::Sat) {
      out.satisfiable = true;
      o.satisfiable = true;
      o.horizon = 0;
      o.plan = enc.decode();
      o.models = "1+";
    } else if (r == SatResult::Unknown) {
      out.feedback = "solver budget exhausted during the satisfiability check\n";
      return out;
    }
    out.feedback = format_outcome(*g, o);
  } catch (const ValidationError& e) {
    out.diagnostics = e.diagnostics;
    out.feedback = format_diagnostics(e.diagnostics);
  } catch (const Error& e) {
    out.diagnostics.push_back({Severity::Error, e.what(), 0, 0});
    out.feedback = format_diagnostics(out.diagnostics);
  }
  return out;
}

SatCheck check_satisfiability(const std::string& text, const SolveOptions& opts) {
  auto r = parse_program(text);
  if (!r.ok()) {
    SatCheck out;
    out.diagnostics = r.diagnostics;
    out.feedback = format_diagnostics(r.diagnostics);
    return out;
  }
  auto out = check_satisfiability(r.program, opts);
  out.diagnostics.insert(out.diagnostics.begin(), r.diagnostics.begin(), r.diagnostics.end());
  return out;
}

std::vector<SampleResult> run_sample_queries(GroundProgram& g, const std::vector<SampleQuery>& qs,
                                             const SolveOptions& opts) {
  std::vector<SampleResult> out;
  for (const auto& sq : qs) {
    SampleResult r;
    try {
      r.outcome = solve_query(g, sq.query, opts);
      r.output = format_outcome(g, r.outcome);
      if (sq.expect_sat) r.matched = *sq.expect_sat == r.outcome.satisfiable;
    } catch (const Error& e) {
      r.failed = true;
      r.output = std::string(e.what()) + "\n";
      if (sq.expect_sat) r.matched = false;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<Trajectory> enumerate_models(GroundProgram& g, int k, const Query* q, std::size_t cap) {
  Encoder enc(g, k);
  if (q) enc.assert_query(*q);
  std::vector<Trajectory> out;
  SatLimits unlimited;
  unlimited.max_seconds = 1e9;
  unlimited.max_conflicts = UINT64_MAX;
  while (out.size() < cap) {
    auto r = enc.solver().solve(unlimited);
    if (r != SatResult::Sat) break;
    out.push_back(enc.decode());
    auto block = enc.blocking_clause(out.back());
    if (block.empty()) break;
    enc.solver().add_clause(block);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formatting

namespace {

// ints numerically and before symbols
bool value_less(const Term& a, const Term& b) {
  if (a.kind == TermKind::Integer && b.kind == TermKind::Integer) return a.value < b.value;
  if (a.kind == TermKind::Integer) return true;
  if (b.kind == TermKind::Integer) return false;
  if (a.name != b.name) return a.name < b.name;
  return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(), b.args.end(),
                                      value_less);
}

bool instance_less(const GroundProgram& g, std::uint32_t x, std::uint32_t y) {
  const auto& a = g.instances[x];
  const auto& b = g.instances[y];
  if (a.name != b.name) return a.name < b.name;
  for (std::size_t i = 0; i < std::min(a.args.size(), b.args.size()); ++i) {
    const Term& ta = g.values.term(a.args[i]);
    const Term& tb = g.values.term(b.args[i]);
    if (value_less(ta, tb)) return true;
    if (value_less(tb, ta)) return false;
  }
  return a.args.size() < b.args.size();
}

std::vector<std::uint32_t> sorted(const GroundProgram& g, std::vector<std::uint32_t> ids) {
  std::sort(ids.begin(), ids.end(),
            [&](std::uint32_t x, std::uint32_t y) { return instance_less(g, x, y); });
  return ids;
}

}  // namespace

std::vector<std::string> state_atoms(const GroundProgram& g, const std::vector<std::uint32_t>& s) {
  std::vector<std::string> out;
  for (auto i : sorted(g, g.fluents)) out.push_back(g.atom_text({i, s[i]}));
  return out;
}

std::vector<std::string> action_atoms(const GroundProgram& g, const std::vector<std::uint32_t>& a) {
  std::vector<std::string> out;
  for (auto i : sorted(g, g.actions)) {
    const auto& ci = g.instances[i];
    if (ci.is_boolean()) {
      if (a[i] == 1) out.push_back(ci.text);
    } else if (!(ci.has_none && a[i] == ci.none_index())) {
      out.push_back(g.atom_text({i, a[i]}));
    }
  }
  return out;
}

std::string format_trajectory(const GroundProgram& g, const Trajectory& t) {
  std::ostringstream os;
  auto join = [](const std::vector<std::string>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + xs[i];
    return s;
  };
  for (int step = 0; step <= t.length(); ++step) {
    os << "\t" << step << ":  " << join(state_atoms(g, t.states[static_cast<std::size_t>(step)]))
       << "\n\n";
    if (step < t.length()) {
      auto acts = action_atoms(g, t.actions[static_cast<std::size_t>(step)]);
      if (!acts.empty()) os << "\tACTIONS:  " << join(acts) << "\n\n";
    }
  }
  return os.str();
}

std::string format_outcome(const GroundProgram& g, const SolveOutcome& o) {
  std::ostringstream os;
  os << "Solving...\n";
  if (!o.satisfiable) {
    os << "UNSATISFIABLE\nModels       : 0\nNo solution.\n";
    return os.str();
  }
  os << "Solution: 1\n\t\n\n" << format_trajectory(g, o.plan);
  os << "SATISFIABLE\nModels       : " << o.models << "\n";
  return os.str();
}

nlohmann::json outcome_json(const GroundProgram& g, const SolveOutcome& o, const std::string& label) {
  nlohmann::json j;
  if (!label.empty()) j["query"] = label;
  j["satisfiable"] = o.satisfiable;
  j["horizons"] = {o.first_horizon, o.last_horizon};
  j["models"] = o.models;
  j["seconds"] = o.seconds;
  j["conflicts"] = o.stats.conflicts;
  nlohmann::json per = nlohmann::json::array();
  for (const auto& h : o.horizons)
    per.push_back({{"horizon", h.horizon}, {"satisfiable", h.satisfiable},
                   {"conflicts", h.conflicts}, {"seconds", h.seconds}});
  j["solves"] = std::move(per);
  if (!o.satisfiable) {
    j["result"] = "UNSATISFIABLE up to horizon " + std::to_string(o.last_horizon);
    return j;
  }
  j["result"] = "SATISFIABLE";
  j["length"] = o.horizon;
  nlohmann::json steps = nlohmann::json::array();
  for (int t = 0; t <= o.plan.length(); ++t) {
    nlohmann::json s;
    s["step"] = t;
    s["state"] = state_atoms(g, o.plan.states[static_cast<std::size_t>(t)]);
    if (t < o.plan.length()) s["actions"] = action_atoms(g, o.plan.actions[static_cast<std::size_t>(t)]);
    steps.push_back(std::move(s));
  }
  j["plan"] = std::move(steps);
  return j;
}

// ---------------------------------------------------------------------------
// Reading listings back

namespace {

std::vector<std::string> split_atoms(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if ((c == ' ' || c == '\t') && depth == 0) {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Trajectory parse_trajectory(const GroundProgram& g, const std::string& text) {
  std::unordered_map<std::string, std::uint32_t> by_text;
  for (std::uint32_t i = 0; i < g.instances.size(); ++i) by_text[g.instances[i].text] = i;
  auto resolve = [&](const std::string& tok, std::uint32_t& inst, std::uint32_t& val) {
    std::size_t depth = 0, eq = std::string::npos;
    for (std::size_t i = 0; i < tok.size(); ++i) {
      if (tok[i] == '(') ++depth;
      if (tok[i] == ')') --depth;
      if (tok[i] == '=' && depth == 0) eq = i;
    }
    std::string name = eq == std::string::npos ? tok : tok.substr(0, eq);
    bool negated = !name.empty() && name[0] == '~';
    if (negated) name = name.substr(1);
    auto it = by_text.find(name);
    if (it == by_text.end()) throw Error(ErrorCode::ValidationFailed, "unknown constant in plan: " + tok);
    inst = it->second;
    const auto& ci = g.instances[inst];
    if (eq == std::string::npos) {
      if (!ci.is_boolean()) throw Error(ErrorCode::ValidationFailed, "missing value in plan: " + tok);
      val = negated ? 0 : 1;
      return;
    }
    std::string v = tok.substr(eq + 1);
    if (v == "none" && ci.has_none) {
      val = ci.none_index();
      return;
    }
    for (std::uint32_t d = 0; d < ci.domain.size(); ++d)
      if (g.values.display(ci.domain[d]) == v) {
        val = d;
        return;
      }
    throw Error(ErrorCode::ValidationFailed, "value out of domain in plan: " + tok);
  };

  Trajectory tr;
  std::istringstream in(text);
  std::string line;
  std::vector<bool> seen;
  auto finish_state = [&]() {
    if (tr.states.empty()) return;
    for (auto f : g.fluents)
      if (!seen[f])
        throw Error(ErrorCode::ValidationFailed,
                    "plan step " + std::to_string(tr.states.size() - 1) + " gives no value for " +
                        g.instances[f].text);
  };
  while (std::getline(in, line)) {
    std::string l = trim(line);
    if (l.empty()) continue;
    if (l.rfind("ACTIONS:", 0) == 0) {
      if (tr.states.empty()) throw Error(ErrorCode::ValidationFailed, "ACTIONS before any state");
      auto& a = tr.actions.back();
      for (const auto& tok : split_atoms(l.substr(8))) {
        std::uint32_t inst, val;
        resolve(tok, inst, val);
        if (!g.instances[inst].is_action())
          throw Error(ErrorCode::ValidationFailed, "fluent in ACTIONS line: " + tok);
        a[inst] = val;
        if (auto p = g.instances[inst].parent) a[*p] = 1;
      }
      continue;
    }
    auto colon = l.find(':');
    if (colon == std::string::npos || colon == 0 ||
        !std::all_of(l.begin(), l.begin() + static_cast<long>(colon), ::isdigit))
      continue;  // headers such as "Solving..." or "SATISFIABLE"
    int step = std::stoi(l.substr(0, colon));
    finish_state();
    if (step != static_cast<int>(tr.states.size()))
      throw Error(ErrorCode::ValidationFailed, "plan steps out of order at step " + std::to_string(step));
    if (step > 0) {
      // actions of the previous step are complete now
    }
    std::vector<std::uint32_t> s(g.instances.size(), 0);
    seen.assign(g.instances.size(), false);
    for (const auto& tok : split_atoms(l.substr(colon + 1))) {
      std::uint32_t inst, val;
      resolve(tok, inst, val);
      if (g.instances[inst].is_action())
        throw Error(ErrorCode::ValidationFailed, "action in state line: " + tok);
      s[inst] = val;
      seen[inst] = true;
    }
    tr.states.push_back(std::move(s));
    // default action vector: nothing occurs, attributes at rest, additive at 0
    std::vector<std::uint32_t> a(g.instances.size(), 0);
    for (auto i : g.actions) {
      const auto& ci = g.instances[i];
      if (ci.has_none) a[i] = ci.none_index();
      if (ci.kind == ConstantKind::AdditiveAction)
        if (auto z = g.values.find("0"))
          if (auto idx = g.value_index(i, *z)) a[i] = *idx;
    }
    tr.actions.push_back(std::move(a));
  }
  finish_state();
  if (tr.states.empty()) throw Error(ErrorCode::ValidationFailed, "plan has no states");
  tr.actions.pop_back();
  return tr;
}

}  // namespace bcplus
