#pragma once

#include <string>

#include "bcplus/oracle.hpp"
#include "bcplus/query.hpp"

namespace bcplus {

struct PipelineSettings {
  int sat_budget = 10;        // satisfiability-loop revisions
  int feedback_budget = 3;    // feedback-loop revisions
  int signature_attempts = 3;
  int sample_cap = 5;
  std::string templates = BCPLUS_SOURCE_DIR "/prompts";
  bool human_hook = false;    // pause after finalization for a manual edit
  std::string human_file;     // program written here, read back after the edit
};

struct ClientSettings {
  std::string host = "api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "o1-preview";
  double temperature = 1.0;
  int max_tokens = 8192;
  int timeout_seconds = 300;
  int retries = 3;
  std::string api_key_env = "OPENAI_API_KEY";
};

struct BenchSettings {
  int workers = 1;
  std::string suite_file = BCPLUS_SOURCE_DIR "/fixtures/suite.ini";
};

struct Config {
  SolveOptions solve;
  OracleOptions oracle;
  PipelineSettings pipeline;
  ClientSettings client;
  BenchSettings bench;
};

// INI file with sections [solver], [oracle], [pipeline], [client], [bench].
// Missing keys keep their defaults; unknown keys are an error. Throws
// Error(Config) or Error(Io).
Config load_config(const std::string& path);
Config parse_config(const std::string& text);
std::string render_config(const Config& c);

}  // namespace bcplus
