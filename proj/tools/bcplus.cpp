#include <atomic>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "bcplus/bench.hpp"
#include "bcplus/config.hpp"
#include "bcplus/oracle.hpp"
#include "bcplus/parser.hpp"
#include "bcplus/pipeline.hpp"
#include "bcplus/query.hpp"

namespace {

using namespace bcplus;

// exit codes
constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << text;
}

// Parses and reports diagnostics; nullopt when the file has parse errors.
std::optional<Program> load_program(const std::string& path) {
  auto r = parse_program(SourceProgram{read_file(path), path});
  if (!r.diagnostics.empty()) std::cerr << format_diagnostics(r.diagnostics);
  if (!r.ok()) return std::nullopt;
  return std::move(r.program);
}

const Query* pick_query(const Program& p, const std::string& label) {
  if (!label.empty()) {
    const Query* q = p.find_query(label);
    if (!q) throw Error(ErrorCode::ValidationFailed, "no query labelled '" + label + "'");
    return q;
  }
  if (p.queries.empty()) throw Error(ErrorCode::ValidationFailed, "the program has no query");
  return &p.queries.front();
}

struct Common {
  std::string config_path;
  Config config() const { return config_path.empty() ? Config{} : load_config(config_path); }
};

int cmd_parse(const std::string& file) {
  auto r = parse_program(SourceProgram{read_file(file), file});
  std::cout << format_diagnostics(r.diagnostics);
  if (!r.ok()) return kUsage;
  const Program& p = r.program;
  if (p.sorts.empty() && p.objects.empty() && p.constants.empty() && p.laws.empty() && p.queries.empty()) {
    std::cout << "empty program\n";
    return kOk;
  }
  std::cout << p.sorts.size() << " sorts, " << p.objects.size() << " object declarations, "
            << p.variables.size() << " variables, " << p.constants.size() << " constants, "
            << p.laws.size() << " laws, " << p.queries.size() << " queries\n";
  auto diags = validate_program(p);
  std::cout << format_diagnostics(diags);
  return has_errors(diags) ? kMismatch : kOk;
}

int cmd_check_sat(const std::string& file, const Common& c) {
  auto check = check_satisfiability(read_file(file), c.config().solve);
  std::cout << check.feedback;
  return check.satisfiable ? kOk : kMismatch;
}

struct SolveArgs {
  std::string file, label, cnf, expect;
  int max_horizon = -1;
  bool json = false;
};

int cmd_solve(const SolveArgs& a, const Common& c) {
  auto p = load_program(a.file);
  if (!p) return kUsage;
  auto g = ground(*p);
  const Query* q = pick_query(g->source, a.label);
  SolveOptions so = c.config().solve;
  if (a.max_horizon >= 0) so.max_horizon = a.max_horizon;
  so.keep_dimacs = !a.cnf.empty();
  auto o = solve_query(*g, *q, so);
  if (!a.cnf.empty()) write_file(a.cnf, o.dimacs);
  if (a.json)
    std::cout << outcome_json(*g, o, q->label.value_or("")).dump() << "\n";
  else
    std::cout << format_outcome(*g, o);
  if (a.expect.empty()) return kOk;
  bool want_sat = a.expect != "unsat";
  bool ok = want_sat == o.satisfiable;
  if (ok && want_sat && a.expect != "sat") ok = o.horizon == std::stoi(a.expect);
  return ok ? kOk : kMismatch;
}

struct OracleArgs {
  std::string file, goal;
  int bound = 30;
  int concurrency = -1;
  bool transitions = false;
};

int cmd_oracle(const OracleArgs& a, const Common& c) {
  auto p = load_program(a.file);
  if (!p) return kUsage;
  auto g = ground(*p);
  OracleOptions oo = c.config().oracle;
  if (a.concurrency > 0) oo.concurrency = a.concurrency;
  Oracle oracle(*g, oo);
  if (a.transitions) {
    auto states = oracle.states();
    std::size_t n = 0;
    for (const auto& s : states) n += oracle.successors(s).size();
    std::cout << "states " << states.size() << "\ntransitions " << n << "\n";
    return kOk;
  }
  const Query* q = pick_query(g->source, a.goal);
  auto [init, goal] = query_endpoints(*g, *q);
  auto b = oracle.shortest_plan(init, goal, a.bound);
  if (!b.found) {
    std::cout << "no plan within " << a.bound << " steps (" << b.states_seen << " states seen)\n";
    return kMismatch;
  }
  std::cout << "shortest plan: " << b.length << " steps (" << b.states_seen << " states seen)\n"
            << format_trajectory(*g, b.plan);
  return kOk;
}

int cmd_validate(const std::string& file, const std::string& plan_file, const std::string& label,
                 const Common& c) {
  auto p = load_program(file);
  if (!p) return kUsage;
  auto g = ground(*p);
  Trajectory t = parse_trajectory(*g, read_file(plan_file));
  Oracle oracle(*g, c.config().oracle);
  std::optional<Violation> v;
  if (!label.empty() || !g->source.queries.empty())
    v = oracle.validate(t, *pick_query(g->source, label), *g);
  else
    v = oracle.validate(t);
  if (v) {
    std::cout << "invalid: " << v->str() << "\n";
    return kMismatch;
  }
  std::cout << "valid plan of " << t.length() << " steps\n";
  return kOk;
}

int cmd_ground(const std::string& file) {
  auto p = load_program(file);
  if (!p) return kUsage;
  std::cout << ground(*p)->dump();
  return kOk;
}

struct BenchArgs {
  std::string suite = "quick", report, suite_file;
  int workers = 0;
  int repeats = 0;
};

int cmd_bench(const BenchArgs& a, const Common& c) {
  BenchOptions opts;
  opts.config = c.config();
  if (a.workers > 0) opts.config.bench.workers = a.workers;
  opts.repeats = a.repeats;
  auto all = load_suite(a.suite_file.empty() ? opts.config.bench.suite_file : a.suite_file);
  auto report = run_bench(select_fixtures(all, a.suite), opts);
  std::cout << report.table();
  if (!a.report.empty()) write_file(a.report, report.jsonl());
  return report.passed() == static_cast<int>(report.fixtures.size()) ? kOk : kMismatch;
}

struct PipelineArgs {
  std::string problem, mock, transcript;
  bool live = false;
  bool json = false;
};

std::atomic<bool> g_cancel{false};

extern "C" void on_interrupt(int) { g_cancel = true; }

int cmd_pipeline(const PipelineArgs& a, const Common& c) {
  Config cfg = c.config();
  std::unique_ptr<CompletionClient> client;
  if (a.live) client = std::make_unique<LiveClient>(cfg.client, &g_cancel);
  else client = std::make_unique<MockClient>(a.mock);
  PipelineHooks hooks;
  hooks.cancel = &g_cancel;
  hooks.human_edit = [](const std::string& path) {
    std::cerr << "program written to " << path << "; edit it and press Enter to continue\n";
    std::string line;
    std::getline(std::cin, line);
  };
  std::signal(SIGINT, on_interrupt);
  auto r = run_pipeline(read_file(a.problem), *client, cfg, hooks);
  if (!a.transcript.empty()) write_transcript(r.state, a.transcript);
  for (const auto& w : r.state.warnings) std::cerr << "warning: " << w << "\n";
  if (a.json) {
    std::cout << pipeline_summary(r).dump(2) << "\n";
  } else {
    std::cout << "status: " << pipeline_status_name(r.state.status);
    if (!r.state.status_detail.empty()) std::cout << " (" << r.state.status_detail << ")";
    std::cout << "\nsatisfiability revisions: " << r.state.sat_revisions
              << "\nfeedback passes: " << r.state.feedback_passes << "\n\n"
              << r.program << "\n"
              << r.plan;
  }
  if (r.state.status != PipelineStatus::Completed) return kMismatch;
  return r.outcome && r.outcome->satisfiable ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BC+ action language toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "INI configuration file")->check(CLI::ExistingFile);

  std::string file, plan_file, label;
  auto* parse = app.add_subcommand("parse", "parse a program and report diagnostics");
  parse->add_option("file", file)->required();

  auto* check = app.add_subcommand("check-sat", "validate a program and look for a legal state");
  check->add_option("file", file)->required();

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "answer a query with the SAT encoding");
  solve->add_option("file", sa.file)->required();
  solve->add_option("--query", sa.label, "query label");
  solve->add_option("--max-horizon", sa.max_horizon, "horizon ceiling");
  solve->add_option("--export-cnf", sa.cnf, "write the last encoding as DIMACS");
  solve->add_option("--expect", sa.expect, "sat, unsat or a plan length; exit 1 on mismatch");
  solve->add_flag("--json", sa.json, "print the machine-readable record");

  OracleArgs oa;
  auto* oracle = app.add_subcommand("oracle", "shortest plan by explicit-state search");
  oracle->add_option("file", oa.file)->required();
  oracle->add_option("--goal", oa.goal, "query label");
  oracle->add_option("--bound", oa.bound, "search depth");
  oracle->add_option("--concurrency", oa.concurrency, "simultaneous actions per step");
  oracle->add_flag("--transitions", oa.transitions, "count states and transitions instead");

  auto* validate = app.add_subcommand("validate", "replay a plan listing against the program");
  validate->add_option("file", file)->required();
  validate->add_option("plan", plan_file)->required();
  validate->add_option("--query", label, "query whose conditions the plan must meet");

  auto* groundc = app.add_subcommand("ground", "print the ground program");
  groundc->add_option("file", file)->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "run the benchmark fixtures");
  bench->add_option("--suite", ba.suite, "all, quick, a suite name or a fixture name");
  bench->add_option("--report", ba.report, "write line-delimited JSON records here");
  bench->add_option("--suite-file", ba.suite_file, "fixture manifest");
  bench->add_option("--workers", ba.workers, "parallel fixtures");
  bench->add_option("--repeats", ba.repeats, "extra solves per fixture to check determinism");

  PipelineArgs pa;
  auto* pipeline = app.add_subcommand("pipeline", "build a program from a problem description with a language model");
  pipeline->add_option("problem", pa.problem)->required()->check(CLI::ExistingFile);
  auto* mock_opt = pipeline->add_option("--mock", pa.mock, "directory of scripted responses");
  auto* live_opt = pipeline->add_flag("--live", pa.live, "call the configured endpoint");
  mock_opt->excludes(live_opt);
  pipeline->add_option("--transcript", pa.transcript, "directory for the exchange transcript");
  pipeline->add_flag("--json", pa.json, "print a machine-readable summary");

  try {
    app.parse(argc, argv);
    if (*pipeline && pa.mock.empty() && !pa.live) throw CLI::RequiredError("--mock or --live");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*parse) return cmd_parse(file);
    if (*check) return cmd_check_sat(file, common);
    if (*solve) return cmd_solve(sa, common);
    if (*oracle) return cmd_oracle(oa, common);
    if (*validate) return cmd_validate(file, plan_file, label, common);
    if (*groundc) return cmd_ground(file);
    if (*bench) return cmd_bench(ba, common);
    if (*pipeline) return cmd_pipeline(pa, common);
  } catch (const ValidationError& e) {
    std::cerr << e.what();
    return kMismatch;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::Io || e.code() == ErrorCode::Config ? kUsage : kMismatch;
  }
  return kUsage;
}
