#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bcplus/config.hpp"

namespace bcplus {

namespace pt = boost::property_tree;

namespace {

template <class T>
void read(const pt::ptree& section, const std::string& name, const std::string& key, T& into,
          std::set<std::string>& seen) {
  seen.insert(key);
  auto v = section.get_optional<std::string>(key);
  if (!v) return;
  try {
    into = section.get<T>(key);
  } catch (const pt::ptree_error&) {
    throw Error(ErrorCode::Config, "[" + name + "] " + key + ": bad value '" + *v + "'");
  }
}

void read_bool(const pt::ptree& section, const std::string& name, const std::string& key, bool& into,
               std::set<std::string>& seen) {
  seen.insert(key);
  auto v = section.get_optional<std::string>(key);
  if (!v) return;
  if (*v == "yes" || *v == "true" || *v == "1")
    into = true;
  else if (*v == "no" || *v == "false" || *v == "0")
    into = false;
  else
    throw Error(ErrorCode::Config, "[" + name + "] " + key + ": expected yes or no, got '" + *v + "'");
}

void reject_unknown(const pt::ptree& section, const std::string& name, const std::set<std::string>& seen) {
  for (const auto& [key, _] : section)
    if (!seen.count(key)) throw Error(ErrorCode::Config, "[" + name + "] unknown key '" + key + "'");
}

}  // namespace

Config parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::Config, e.message() + " at line " + std::to_string(e.line()));
  }
  Config c;
  static const std::set<std::string> sections{"solver", "oracle", "pipeline", "client", "bench"};
  for (const auto& [name, _] : tree)
    if (!sections.count(name)) throw Error(ErrorCode::Config, "unknown section [" + name + "]");

  if (auto s = tree.get_child_optional("solver")) {
    std::set<std::string> seen;
    std::uint64_t conflicts = c.solve.limits.max_conflicts;
    read(*s, "solver", "max_horizon", c.solve.max_horizon, seen);
    read(*s, "solver", "max_conflicts", conflicts, seen);
    read(*s, "solver", "max_seconds", c.solve.limits.max_seconds, seen);
    read(*s, "solver", "second_model_conflicts", c.solve.second_model_conflicts, seen);
    c.solve.limits.max_conflicts = conflicts;
    reject_unknown(*s, "solver", seen);
  }
  if (auto s = tree.get_child_optional("oracle")) {
    std::set<std::string> seen;
    read(*s, "oracle", "state_cap", c.oracle.state_cap, seen);
    read(*s, "oracle", "concurrency", c.oracle.concurrency, seen);
    reject_unknown(*s, "oracle", seen);
  }
  if (auto s = tree.get_child_optional("pipeline")) {
    std::set<std::string> seen;
    auto& p = c.pipeline;
    read(*s, "pipeline", "sat_budget", p.sat_budget, seen);
    read(*s, "pipeline", "feedback_budget", p.feedback_budget, seen);
    read(*s, "pipeline", "signature_attempts", p.signature_attempts, seen);
    read(*s, "pipeline", "sample_cap", p.sample_cap, seen);
    read(*s, "pipeline", "templates", p.templates, seen);
    read_bool(*s, "pipeline", "human_hook", p.human_hook, seen);
    read(*s, "pipeline", "human_file", p.human_file, seen);
    reject_unknown(*s, "pipeline", seen);
  }
  if (auto s = tree.get_child_optional("client")) {
    std::set<std::string> seen;
    auto& k = c.client;
    read(*s, "client", "host", k.host, seen);
    read(*s, "client", "path", k.path, seen);
    read(*s, "client", "model", k.model, seen);
    read(*s, "client", "temperature", k.temperature, seen);
    read(*s, "client", "max_tokens", k.max_tokens, seen);
    read(*s, "client", "timeout_seconds", k.timeout_seconds, seen);
    read(*s, "client", "retries", k.retries, seen);
    read(*s, "client", "api_key_env", k.api_key_env, seen);
    reject_unknown(*s, "client", seen);
  }
  if (auto s = tree.get_child_optional("bench")) {
    std::set<std::string> seen;
    read(*s, "bench", "workers", c.bench.workers, seen);
    read(*s, "bench", "suite_file", c.bench.suite_file, seen);
    reject_unknown(*s, "bench", seen);
  }
  if (c.pipeline.sat_budget < 0 || c.pipeline.feedback_budget < 0)
    throw Error(ErrorCode::Config, "[pipeline] budgets must be non-negative");
  if (c.bench.workers < 1) throw Error(ErrorCode::Config, "[bench] workers must be at least 1");
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string render_config(const Config& c) {
  pt::ptree tree;
  tree.put("solver.max_horizon", c.solve.max_horizon);
  tree.put("solver.max_conflicts", c.solve.limits.max_conflicts);
  tree.put("solver.max_seconds", c.solve.limits.max_seconds);
  tree.put("solver.second_model_conflicts", c.solve.second_model_conflicts);
  tree.put("oracle.state_cap", c.oracle.state_cap);
  tree.put("oracle.concurrency", c.oracle.concurrency);
  tree.put("pipeline.sat_budget", c.pipeline.sat_budget);
  tree.put("pipeline.feedback_budget", c.pipeline.feedback_budget);
  tree.put("pipeline.signature_attempts", c.pipeline.signature_attempts);
  tree.put("pipeline.sample_cap", c.pipeline.sample_cap);
  tree.put("pipeline.templates", c.pipeline.templates);
  tree.put("pipeline.human_hook", c.pipeline.human_hook ? "yes" : "no");
  tree.put("pipeline.human_file", c.pipeline.human_file);
  tree.put("client.host", c.client.host);
  tree.put("client.path", c.client.path);
  tree.put("client.model", c.client.model);
  tree.put("client.temperature", c.client.temperature);
  tree.put("client.max_tokens", c.client.max_tokens);
  tree.put("client.timeout_seconds", c.client.timeout_seconds);
  tree.put("client.retries", c.client.retries);
  tree.put("client.api_key_env", c.client.api_key_env);
  tree.put("bench.workers", c.bench.workers);
  tree.put("bench.suite_file", c.bench.suite_file);
  std::ostringstream out;
  pt::write_ini(out, tree);
  return out.str();
}

}  // namespace bcplus
