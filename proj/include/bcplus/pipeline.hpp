#pragma once

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "bcplus/config.hpp"
#include "bcplus/query.hpp"

namespace bcplus {

// ---------------------------------------------------------------------------
// Language-model clients

struct CompletionRequest {
  std::string stage;
  int attempt = 1;
  std::string prompt;
};

class CompletionClient {
 public:
  virtual ~CompletionClient() = default;
  // Throws Error(ClientFailure) or Error(Cancelled).
  virtual std::string complete(const CompletionRequest& req) = 0;
};

// Replays scripted responses. For a request (stage, attempt) it answers with
// `<stage>_<attempt>.txt` if present, otherwise `<stage>.txt`.
class MockClient : public CompletionClient {
 public:
  explicit MockClient(std::string dir);
  explicit MockClient(std::map<std::string, std::string> responses);
  std::string complete(const CompletionRequest& req) override;

 private:
  std::string dir_;
  std::map<std::string, std::string> responses_;
};

// Chat-completions endpoint over HTTPS. The key is read from the environment
// variable named in the settings when the client is constructed.
class LiveClient : public CompletionClient {
 public:
  explicit LiveClient(ClientSettings s, const std::atomic<bool>* cancel = nullptr);
  std::string complete(const CompletionRequest& req) override;

 private:
  ClientSettings settings_;
  std::string key_;
  const std::atomic<bool>* cancel_;
};

// ---------------------------------------------------------------------------
// Prompt templates

// Replaces every {{name}} with its binding. Throws Error(TemplateUnbound) when
// a placeholder has no binding.
std::string render_template(const std::string& tmpl, const std::map<std::string, std::string>& vars);
std::vector<std::string> template_placeholders(const std::string& tmpl);

// Contents of the last triple-backtick block. Throws Error(MissingFencedBlock).
std::string last_fenced_block(const std::string& response);

// ---------------------------------------------------------------------------
// Response parsing

struct SignatureParts {
  std::string reading;    // actions and constants with their reading
  std::string signature;  // the `:- ...` declaration sections
};
SignatureParts split_signature(const std::string& block);
// Parse errors plus a diagnostic for each missing declaration section.
std::vector<Diagnostic> check_signature(const std::string& signature);

std::vector<std::string> parse_knowledge(const std::string& block);

// Splits program text into the part without `:- query` blocks and the query
// blocks themselves (each including its terminating period).
struct QuerySplit {
  std::string rest;
  std::vector<std::string> queries;
  std::vector<std::string> trailers;  // text after each query up to the next
};
QuerySplit split_queries(const std::string& text);

struct SampleSpec {
  std::string text;                // the query block
  std::optional<bool> expect_sat;  // from a (satisfiable)/(unsatisfiable) note
};
std::vector<SampleSpec> parse_samples(const std::string& block);

enum class Mark { Changed, Unchanged, Unmarked };

struct FeedbackSegment {
  Mark mark = Mark::Unmarked;
  std::string content;
  bool present = false;
};

struct FeedbackReply {
  FeedbackSegment program, main_query, samples;
};
// Segments start at a header line naming PROGRAM, MAIN QUERY or SAMPLE QUERIES
// with a [CHANGED] or [UNCHANGED] marker on either side.
FeedbackReply parse_feedback_reply(const std::string& block);

// ---------------------------------------------------------------------------
// Pipeline

enum class PipelineStatus {
  Completed,
  SignatureFailed,
  MissingFencedBlock,
  BudgetExhausted,
  ClientFailure,
  TemplateUnbound,
  Cancelled,
};
const char* pipeline_status_name(PipelineStatus s);

struct Exchange {
  int seq = 0;
  std::string stage;
  int attempt = 1;
  std::string kind;  // "llm", "solver" or "human"
  std::string prompt;
  std::string response;
  std::string feedback;
  std::string status;
  double seconds = 0;
};

struct SampleExpectation {
  std::string text;
  std::optional<bool> expect_sat;
  std::optional<bool> satisfiable;  // last run
  std::optional<bool> matched;
};

struct PipelineState {
  std::string problem;
  std::string signature_response;  // whole fenced block
  std::string reading;
  std::string signature;
  std::vector<std::string> knowledge;
  std::string laws;        // rule text without queries
  std::string main_query;  // `:- query` block
  std::vector<SampleExpectation> samples;
  int sat_budget = 0;
  int feedback_budget = 0;
  int sat_revisions = 0;
  int feedback_passes = 0;  // times the feedback prompt was sent
  int query_runs = 0;       // times sample and main queries were run
  std::vector<Exchange> transcript;
  std::vector<std::string> warnings;
  PipelineStatus status = PipelineStatus::Completed;
  std::string status_detail;

  std::string program_text() const;  // signature + laws + main query
};

struct PipelineResult {
  PipelineState state;
  std::string program;  // final program text
  std::optional<SolveOutcome> outcome;
  std::string plan;     // listing of the final answer
};

struct PipelineHooks {
  // Called after the program is written to the human file; returns once the
  // file may be read back.
  std::function<void(const std::string& path)> human_edit;
  const std::atomic<bool>* cancel = nullptr;
};

PipelineResult run_pipeline(const std::string& problem, CompletionClient& client, const Config& config,
                            const PipelineHooks& hooks = {});

// Problem text before the line "Query", and the query paragraph after it.
std::pair<std::string, std::string> split_problem(const std::string& problem);

// Writes NNN_<stage>_<attempt>.{prompt,response,feedback}.txt files,
// index.jsonl and timings.jsonl. Everything except timings.jsonl depends only
// on the exchanges' content.
void write_transcript(const PipelineState& s, const std::string& dir);
nlohmann::json pipeline_summary(const PipelineResult& r);

}  // namespace bcplus
