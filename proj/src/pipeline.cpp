#include "bcplus/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include <boost/algorithm/string.hpp>

#include "bcplus/error.hpp"
#include "bcplus/parser.hpp"

namespace bcplus {

namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << text;
}

std::string trimmed(std::string s) {
  boost::algorithm::trim(s);
  return s;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    out.push_back(line);
  }
  return out;
}

std::string join_lines(const std::vector<std::string>& lines, std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to && i < lines.size(); ++i) out += lines[i] + "\n";
  return out;
}

// Position just past the period that closes a statement starting at `from`,
// skipping ".." ranges and comments; npos when there is none.
std::size_t statement_end(const std::string& text, std::size_t from) {
  for (std::size_t i = from; i < text.size(); ++i) {
    char c = text[i];
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c != '.') continue;
    if (i + 1 < text.size() && text[i + 1] == '.') {
      ++i;
      continue;
    }
    if (i > 0 && text[i - 1] == '.') continue;
    if (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1]))) return i + 1;
  }
  return std::string::npos;
}

// Splits declaration sections from laws: the signature runs to the first
// blank line after the last `:-` section header.
std::pair<std::string, std::string> split_declarations(const std::string& text) {
  auto lines = lines_of(text);
  std::size_t last = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (boost::algorithm::starts_with(trimmed(lines[i]), ":-")) last = i;
  if (last == lines.size()) return {"", trimmed(text)};
  std::size_t end = last + 1;
  while (end < lines.size() && !trimmed(lines[end]).empty()) ++end;
  return {trimmed(join_lines(lines, 0, end)), trimmed(join_lines(lines, end, lines.size()))};
}

}  // namespace

// ---------------------------------------------------------------------------
// Clients

MockClient::MockClient(std::string dir) : dir_(std::move(dir)) {
  if (!fs::is_directory(dir_)) throw Error(ErrorCode::Io, "mock script directory not found: " + dir_);
}

MockClient::MockClient(std::map<std::string, std::string> responses) : responses_(std::move(responses)) {}

std::string MockClient::complete(const CompletionRequest& req) {
  std::string keyed = req.stage + "_" + std::to_string(req.attempt);
  if (dir_.empty()) {
    if (auto it = responses_.find(keyed); it != responses_.end()) return it->second;
    if (auto it = responses_.find(req.stage); it != responses_.end()) return it->second;
  } else {
    for (const auto& name : {keyed, req.stage}) {
      fs::path p = fs::path(dir_) / (name + ".txt");
      if (fs::exists(p)) return read_file(p.string());
    }
  }
  throw Error(ErrorCode::ClientFailure, "mock has no response for " + keyed);
}

// ---------------------------------------------------------------------------
// Templates and response parsing

std::vector<std::string> template_placeholders(const std::string& tmpl) {
  static const std::regex re(R"(\{\{([A-Za-z_][A-Za-z0-9_]*)\}\})");
  std::vector<std::string> out;
  for (std::sregex_iterator it(tmpl.begin(), tmpl.end(), re), end; it != end; ++it) {
    std::string name = (*it)[1];
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  }
  return out;
}

std::string render_template(const std::string& tmpl, const std::map<std::string, std::string>& vars) {
  static const std::regex re(R"(\{\{([A-Za-z_][A-Za-z0-9_]*)\}\})");
  std::string out;
  std::size_t pos = 0;
  for (std::sregex_iterator it(tmpl.begin(), tmpl.end(), re), end; it != end; ++it) {
    auto found = vars.find((*it)[1]);
    if (found == vars.end())
      throw Error(ErrorCode::TemplateUnbound, "template placeholder {{" + std::string((*it)[1]) + "}} is unbound");
    out.append(tmpl, pos, it->position() - pos);
    out += found->second;
    pos = it->position() + it->length();
  }
  out.append(tmpl, pos, std::string::npos);
  return out;
}

std::string last_fenced_block(const std::string& response) {
  std::vector<std::size_t> fences;
  for (std::size_t p = response.find("```"); p != std::string::npos; p = response.find("```", p + 3))
    fences.push_back(p);
  if (fences.size() < 2) throw Error(ErrorCode::MissingFencedBlock, "response has no block fenced by three backticks");
  std::size_t open = fences[fences.size() % 2 == 0 ? fences.size() - 2 : fences.size() - 3];
  std::size_t close = fences[fences.size() % 2 == 0 ? fences.size() - 1 : fences.size() - 2];
  std::size_t start = open + 3;
  // An info string such as ```bcplus runs to the end of the opening line.
  std::size_t nl = response.find('\n', start);
  if (nl != std::string::npos && nl < close) {
    std::string info = response.substr(start, nl - start);
    if (trimmed(info).find(' ') == std::string::npos) start = nl + 1;
  }
  return response.substr(start, close - start);
}

SignatureParts split_signature(const std::string& block) {
  auto lines = lines_of(block);
  static const std::regex header(R"(^\s*BC\+\s*signature\s*:?\s*$)", std::regex::icase);
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (std::regex_match(lines[i], header))
      return {trimmed(join_lines(lines, 0, i)), trimmed(join_lines(lines, i + 1, lines.size()))};
  for (std::size_t i = 0; i < lines.size(); ++i)
    if (boost::algorithm::starts_with(trimmed(lines[i]), ":-"))
      return {trimmed(join_lines(lines, 0, i)), trimmed(join_lines(lines, i, lines.size()))};
  return {trimmed(block), ""};
}

std::vector<Diagnostic> check_signature(const std::string& signature) {
  auto r = parse_program(signature);
  std::vector<Diagnostic> out = r.diagnostics;
  for (const char* section : {"sorts", "objects", "variables", "constants"}) {
    std::regex re(std::string(R"((^|\n)\s*:-\s*)") + section + R"(\b)");
    if (!std::regex_search(signature, re))
      out.push_back({Severity::Error, std::string("the signature has no ':- ") + section + "' section", 0, 0});
  }
  if (!r.program.laws.empty())
    out.push_back({Severity::Warning, "the signature contains laws; they are ignored", 0, 0});
  return out;
}

std::vector<std::string> parse_knowledge(const std::string& block) {
  static const std::regex bullet(R"(^(?:[-*]\s+|\d+[.)]\s+))");
  std::vector<std::string> out;
  for (auto& line : lines_of(block)) {
    std::string t = std::regex_replace(trimmed(line), bullet, "");
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

QuerySplit split_queries(const std::string& text) {
  static const std::regex start(R"((^|\n)[ \t]*:-[ \t]*query\b)");
  QuerySplit out;
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  std::size_t pos = 0;
  std::smatch m;
  while (pos < text.size()) {
    auto begin = text.cbegin() + static_cast<std::ptrdiff_t>(pos);
    if (!std::regex_search(begin, text.cend(), m, start)) break;
    std::size_t s = pos + static_cast<std::size_t>(m.position(0)) + m[1].length();
    std::size_t e = statement_end(text, s);
    if (e == std::string::npos) e = text.size();
    spans.push_back({s, e});
    pos = e;
  }
  std::size_t last = 0;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    out.rest += text.substr(last, spans[i].first - last);
    out.queries.push_back(trimmed(text.substr(spans[i].first, spans[i].second - spans[i].first)));
    std::size_t next = i + 1 < spans.size() ? spans[i + 1].first : text.size();
    std::string trailer = text.substr(spans[i].second, next - spans[i].second);
    out.trailers.push_back(trailer);
    last = spans[i].second;
  }
  // Text after the final query stays with the rest unless it is only a note.
  if (!spans.empty()) {
    std::string tail = text.substr(last);
    static const std::regex note(R"(^\s*(\(\s*(un)?satisfiable\s*\))?\s*$)", std::regex::icase);
    if (!std::regex_match(tail, note)) out.rest += tail;
  } else {
    out.rest = text;
  }
  out.rest = trimmed(out.rest);
  return out;
}

std::vector<SampleSpec> parse_samples(const std::string& block) {
  static const std::regex note(R"(\(\s*(un)?satisfiable\s*\))", std::regex::icase);
  auto split = split_queries(block);
  std::vector<SampleSpec> out;
  for (std::size_t i = 0; i < split.queries.size(); ++i) {
    SampleSpec s;
    s.text = split.queries[i];
    std::smatch m;
    if (std::regex_search(split.trailers[i], m, note)) s.expect_sat = !m[1].matched;
    out.push_back(std::move(s));
  }
  return out;
}

FeedbackReply parse_feedback_reply(const std::string& block) {
  static const std::regex header(
      R"(^[\s#*\-]*(?:\[(UN)?CHANGED\][\s:*\-]*)?(PROGRAM|MAIN QUERY|SAMPLE QUERIES)[\s:*\-]*(?:\[(UN)?CHANGED\])?[\s:*]*$)",
      std::regex::icase);
  FeedbackReply out;
  auto lines = lines_of(block);
  FeedbackSegment* current = nullptr;
  std::vector<std::string> body;
  auto flush = [&] {
    if (current) current->content = trimmed(join_lines(body, 0, body.size()));
    body.clear();
  };
  for (const auto& line : lines) {
    std::smatch m;
    if (std::regex_match(line, m, header)) {
      flush();
      std::string name = boost::algorithm::to_upper_copy(std::string(m[2]));
      current = name == "PROGRAM" ? &out.program : name == "MAIN QUERY" ? &out.main_query : &out.samples;
      current->present = true;
      if (boost::algorithm::icontains(line, "changed]"))
        current->mark = m[1].matched || m[3].matched ? Mark::Unchanged : Mark::Changed;
      continue;
    }
    if (current) body.push_back(line);
  }
  flush();
  return out;
}

std::pair<std::string, std::string> split_problem(const std::string& problem) {
  auto lines = lines_of(problem);
  for (std::size_t i = lines.size(); i-- > 0;) {
    std::string t = trimmed(lines[i]);
    if (boost::algorithm::iequals(t, "query") || boost::algorithm::iequals(t, "query:"))
      return {trimmed(join_lines(lines, 0, i)), trimmed(join_lines(lines, i + 1, lines.size()))};
  }
  return {trimmed(problem), ""};
}

const char* pipeline_status_name(PipelineStatus s) {
  switch (s) {
    case PipelineStatus::Completed: return "Completed";
    case PipelineStatus::SignatureFailed: return "SignatureFailed";
    case PipelineStatus::MissingFencedBlock: return "MissingFencedBlock";
    case PipelineStatus::BudgetExhausted: return "BudgetExhausted";
    case PipelineStatus::ClientFailure: return "ClientFailure";
    case PipelineStatus::TemplateUnbound: return "TemplateUnbound";
    case PipelineStatus::Cancelled: return "Cancelled";
  }
  return "?";
}

std::string PipelineState::program_text() const {
  std::string out = signature + "\n\n";
  if (!laws.empty()) out += laws + "\n\n";
  if (!main_query.empty()) out += main_query + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Orchestration

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Run {
 public:
  Run(const std::string& problem, CompletionClient& client, const Config& config, const PipelineHooks& hooks)
      : client_(client), config_(config), hooks_(hooks) {
    s_.problem = problem;
    s_.sat_budget = config.pipeline.sat_budget;
    s_.feedback_budget = config.pipeline.feedback_budget;
    std::tie(description_, goal_) = split_problem(problem);
    for (const char* name : {"bcplus", "queries", "checklist"})
      shared_[name] = trimmed(load(name));
  }

  PipelineResult go() {
    PipelineResult r;
    try {
      if (signature() && knowledge() && rules() && satisfiability()) {
        samples();
        feedback();
        finalize(r);
      }
    } catch (const Error& e) {
      switch (e.code()) {
        case ErrorCode::Cancelled: s_.status = PipelineStatus::Cancelled; break;
        case ErrorCode::TemplateUnbound: s_.status = PipelineStatus::TemplateUnbound; break;
        case ErrorCode::MissingFencedBlock: s_.status = PipelineStatus::MissingFencedBlock; break;
        default: s_.status = PipelineStatus::ClientFailure; break;
      }
      s_.status_detail = e.what();
    }
    r.program = s_.program_text();
    r.state = std::move(s_);
    return r;
  }

 private:
  std::string load(const std::string& name) {
    return read_file((fs::path(config_.pipeline.templates) / (name + ".txt")).string());
  }

  std::string render(const std::string& name, std::map<std::string, std::string> vars) {
    for (const auto& [k, v] : shared_) vars.emplace(k, v);
    return render_template(load(name), vars);
  }

  void check_cancel() {
    if (hooks_.cancel && hooks_.cancel->load()) throw Error(ErrorCode::Cancelled, "pipeline cancelled");
  }

  Exchange& ask(const std::string& stage, int attempt, const std::string& prompt) {
    check_cancel();
    Exchange x;
    x.seq = static_cast<int>(s_.transcript.size()) + 1;
    x.stage = stage;
    x.attempt = attempt;
    x.kind = "llm";
    x.prompt = prompt;
    auto t0 = Clock::now();
    s_.transcript.push_back(x);
    auto& rec = s_.transcript.back();
    rec.status = "pending";
    try {
      rec.response = client_.complete({stage, attempt, prompt});
    } catch (const Error&) {
      rec.status = "failed";
      rec.seconds = since(t0);
      throw;
    }
    rec.seconds = since(t0);
    rec.status = "ok";
    return rec;
  }

  void solver_note(const std::string& stage, int attempt, const std::string& feedback,
                   const std::string& status, double seconds) {
    Exchange x;
    x.seq = static_cast<int>(s_.transcript.size()) + 1;
    x.stage = stage;
    x.attempt = attempt;
    x.kind = "solver";
    x.feedback = feedback;
    x.status = status;
    x.seconds = seconds;
    s_.transcript.push_back(std::move(x));
  }

  void warn(const std::string& w) { s_.warnings.push_back(w); }

  bool signature() {
    std::string retry;
    for (int attempt = 1; attempt <= std::max(1, config_.pipeline.signature_attempts); ++attempt) {
      auto prompt = render("signature", {{"problem", s_.problem}, {"retry", retry}});
      auto& x = ask("signature", attempt, prompt);
      std::vector<Diagnostic> diags;
      SignatureParts parts;
      try {
        std::string block = last_fenced_block(x.response);
        parts = split_signature(block);
        diags = check_signature(parts.signature);
        s_.signature_response = block;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MissingFencedBlock) throw;
        diags.push_back({Severity::Error, e.what(), 0, 0});
      }
      x.feedback = format_diagnostics(diags);
      if (!has_errors(diags)) {
        s_.reading = parts.reading;
        s_.signature = parts.signature;
        return true;
      }
      x.status = "rejected";
      retry = render("signature_retry", {{"response", trimmed(x.response)}, {"diagnostics", x.feedback}});
    }
    s_.status = PipelineStatus::SignatureFailed;
    s_.status_detail = "no acceptable signature after " + std::to_string(config_.pipeline.signature_attempts) +
                       " attempts";
    return false;
  }

  bool knowledge() {
    auto prompt = render("knowledge", {{"problem", description_},
                                       {"hint", s_.reading},
                                       {"reading", s_.reading},
                                       {"signature", s_.signature}});
    auto& x = ask("knowledge", 1, prompt);
    s_.knowledge = parse_knowledge(last_fenced_block(x.response));
    if (s_.knowledge.empty()) warn("knowledge block is empty");
    return true;
  }

  std::string knowledge_text() const {
    std::string out;
    for (std::size_t i = 0; i < s_.knowledge.size(); ++i)
      out += std::to_string(i + 1) + ". " + s_.knowledge[i] + "\n";
    return trimmed(out);
  }

  // Takes laws and the main query from a block; when `with_signature` the
  // block may also carry new declaration sections.
  void take_program(const std::string& block, bool with_signature) {
    auto split = split_queries(block);
    std::string rest = split.rest;
    if (with_signature) {
      auto [sig, laws] = split_declarations(rest);
      if (!sig.empty()) s_.signature = sig;
      rest = laws;
    }
    s_.laws = trimmed(rest);
    if (!split.queries.empty()) s_.main_query = split.queries.front();
    if (split.queries.size() > 1) warn("extra queries in a program block are ignored");
  }

  bool rules() {
    auto prompt = render("rules", {{"problem", description_},
                                   {"hint", s_.reading},
                                   {"reading", s_.reading},
                                   {"signature", s_.signature},
                                   {"knowledge", knowledge_text()},
                                   {"goal", goal_}});
    auto& x = ask("rules", 1, prompt);
    std::string block = last_fenced_block(x.response);
    take_program(block, false);
    if (s_.main_query.empty()) warn("no main query in the rules block");
    auto parsed = parse_program(s_.program_text());
    x.feedback = format_diagnostics(parsed.diagnostics);
    if (!parsed.ok()) x.status = "incomplete";
    return true;
  }

  std::string program_without_query() const {
    std::string out = s_.signature + "\n\n";
    if (!s_.laws.empty()) out += s_.laws + "\n";
    return out;
  }

  bool satisfiability() {
    for (;;) {
      check_cancel();
      auto t0 = Clock::now();
      auto chk = check_satisfiability(s_.program_text(), config_.solve);
      solver_note("satcheck", s_.sat_revisions + 1, chk.feedback, chk.satisfiable ? "satisfiable" : "failed",
                  since(t0));
      if (chk.satisfiable) return true;
      if (s_.sat_budget <= 0) {
        s_.status = PipelineStatus::BudgetExhausted;
        s_.status_detail = "satisfiability check still failing after " + std::to_string(s_.sat_revisions) +
                           " revisions";
        return false;
      }
      auto prompt = render("satfix", {{"problem", description_},
                                      {"program", program_without_query()},
                                      {"goal", goal_},
                                      {"main_query", s_.main_query},
                                      {"feedback", chk.feedback}});
      --s_.sat_budget;
      ++s_.sat_revisions;
      auto& x = ask("satfix", s_.sat_revisions, prompt);
      try {
        take_program(last_fenced_block(x.response), true);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MissingFencedBlock) throw;
        x.status = "no fenced block";
        warn("satisfiability revision " + std::to_string(s_.sat_revisions) + " had no fenced block");
      }
    }
  }

  void set_samples(const std::string& block) {
    auto specs = parse_samples(block);
    auto cap = static_cast<std::size_t>(std::max(0, config_.pipeline.sample_cap));
    if (specs.size() > cap) {
      warn(std::to_string(specs.size()) + " sample queries given, keeping the first " + std::to_string(cap));
      specs.resize(cap);
    }
    s_.samples.clear();
    for (auto& sp : specs) {
      if (!sp.expect_sat) warn("sample query without (satisfiable)/(unsatisfiable) note is not checked");
      s_.samples.push_back({sp.text, sp.expect_sat, std::nullopt, std::nullopt});
    }
  }

  void samples() {
    auto prompt = render("samples", {{"problem", description_},
                                     {"reading", s_.reading},
                                     {"program", program_without_query()},
                                     {"knowledge", knowledge_text()},
                                     {"goal", goal_},
                                     {"main_query", s_.main_query},
                                     {"cap", std::to_string(config_.pipeline.sample_cap)}});
    auto& x = ask("samples", 1, prompt);
    try {
      set_samples(last_fenced_block(x.response));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::MissingFencedBlock) throw;
      x.status = "no fenced block";
      warn("sample query response had no fenced block");
      s_.samples.clear();
    }
  }

  static std::string annotated(const SampleExpectation& e) {
    if (!e.expect_sat) return e.text;
    return e.text + (*e.expect_sat ? " (satisfiable)" : " (unsatisfiable)");
  }

  // Runs sample queries and the main query; returns their listings.
  std::pair<std::string, std::string> run_queries() {
    std::vector<std::string> sample_out(s_.samples.size());
    std::string main_out;
    for (auto& e : s_.samples) e.satisfiable = e.matched = std::nullopt;
    auto parsed = parse_program(s_.program_text());
    std::shared_ptr<GroundProgram> g;
    std::string program_error;
    if (!parsed.ok()) {
      program_error = format_diagnostics(parsed.diagnostics);
    } else {
      try {
        g = ground(parsed.program);
      } catch (const ValidationError& e) {
        program_error = format_diagnostics(e.diagnostics);
      } catch (const Error& e) {
        program_error = std::string(e.what()) + "\n";
      }
    }
    for (std::size_t i = 0; i < s_.samples.size(); ++i) {
      auto& e = s_.samples[i];
      if (!g) {
        sample_out[i] = program_error;
        if (e.expect_sat) e.matched = false;
        continue;
      }
      auto q = parse_query(SourceProgram{e.text, "<sample>"});
      if (!q.ok()) {
        sample_out[i] = format_diagnostics(q.diagnostics);
        if (e.expect_sat) e.matched = false;
        continue;
      }
      auto res = run_sample_queries(*g, {SampleQuery{q.query, e.expect_sat, e.text}}, config_.solve).front();
      sample_out[i] = res.output;
      if (!res.failed) e.satisfiable = res.outcome.satisfiable;
      e.matched = res.matched;
    }
    if (!g) {
      main_out = program_error;
    } else if (parsed.program.queries.empty()) {
      main_out = "no main query\n";
    } else {
      try {
        main_out = format_outcome(*g, solve_query(*g, parsed.program.queries.front(), config_.solve));
      } catch (const Error& e) {
        main_out = std::string(e.what()) + "\n";
      }
    }
    std::string samples_text;
    for (std::size_t i = 0; i < s_.samples.size(); ++i) {
      if (i) samples_text += "\n\n";
      samples_text += annotated(s_.samples[i]) + "\n\nReasoner output:\n\n" + sample_out[i];
    }
    if (s_.samples.empty()) samples_text = "(no sample queries)\n";
    return {samples_text, s_.main_query + "\n\nReasoner output:\n\n" + main_out};
  }

  std::string samples_block() const {
    std::string out;
    for (const auto& e : s_.samples) out += annotated(e) + "\n\n";
    return trimmed(out);
  }

  void feedback() {
    for (;;) {
      check_cancel();
      auto t0 = Clock::now();
      auto [sample_text, main_text] = run_queries();
      ++s_.query_runs;
      solver_note("queries", s_.query_runs, sample_text + "\n\n" + main_text, "ran", since(t0));
      if (s_.feedback_budget <= 0) return;
      auto prompt = render("feedback", {{"problem", description_},
                                        {"program", program_without_query()},
                                        {"sample_outputs", trimmed(sample_text)},
                                        {"main_output", trimmed(main_text)},
                                        {"goal", goal_}});
      ++s_.feedback_passes;
      auto& x = ask("feedback", s_.feedback_passes, prompt);
      FeedbackReply reply;
      try {
        reply = parse_feedback_reply(last_fenced_block(x.response));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::MissingFencedBlock) throw;
        x.status = "no fenced block";
        warn("feedback response had no fenced block; treated as unchanged");
        return;
      }
      bool changed = false;
      for (auto [seg, name] : {std::pair{&reply.program, "PROGRAM"}, std::pair{&reply.main_query, "MAIN QUERY"},
                               std::pair{&reply.samples, "SAMPLE QUERIES"}}) {
        if (seg->mark == Mark::Unmarked)
          warn(std::string(name) + (seg->present ? " segment is not marked" : " segment is missing") +
               "; treated as unchanged");
        changed = changed || seg->mark == Mark::Changed;
      }
      if (!changed) {
        x.status = "unchanged";
        return;
      }
      x.status = "changed";
      if (reply.program.mark == Mark::Changed) {
        std::string keep = s_.main_query;
        take_program(reply.program.content, true);
        s_.main_query = keep;
      }
      if (reply.main_query.mark == Mark::Changed) {
        auto split = split_queries(reply.main_query.content);
        if (split.queries.empty()) warn("changed MAIN QUERY segment holds no query");
        else s_.main_query = split.queries.front();
      }
      if (reply.samples.mark == Mark::Changed) set_samples(reply.samples.content);
      --s_.feedback_budget;
    }
  }

  void finalize(PipelineResult& r) {
    if (config_.pipeline.human_hook && !config_.pipeline.human_file.empty()) {
      write_file(config_.pipeline.human_file, s_.program_text());
      if (hooks_.human_edit) hooks_.human_edit(config_.pipeline.human_file);
      std::string edited = read_file(config_.pipeline.human_file);
      Exchange x;
      x.seq = static_cast<int>(s_.transcript.size()) + 1;
      x.stage = "human";
      x.kind = "human";
      x.response = edited;
      x.status = edited == s_.program_text() ? "unchanged" : "edited";
      s_.transcript.push_back(x);
      take_program(edited, true);
    }
    auto t0 = Clock::now();
    auto parsed = parse_program(s_.program_text());
    std::string note;
    if (!parsed.ok()) {
      note = format_diagnostics(parsed.diagnostics);
    } else if (parsed.program.queries.empty()) {
      note = "no main query\n";
    } else {
      try {
        auto g = ground(parsed.program);
        r.outcome = solve_query(*g, parsed.program.queries.front(), config_.solve);
        r.plan = format_outcome(*g, *r.outcome);
        note = r.plan;
      } catch (const ValidationError& e) {
        note = format_diagnostics(e.diagnostics);
      } catch (const Error& e) {
        note = std::string(e.what()) + "\n";
      }
    }
    std::string status = !r.outcome ? "error" : r.outcome->satisfiable ? "satisfiable" : "unsatisfiable";
    solver_note("final", 1, note, status, since(t0));
  }

  CompletionClient& client_;
  const Config& config_;
  const PipelineHooks& hooks_;
  PipelineState s_;
  std::string description_, goal_;
  std::map<std::string, std::string> shared_;
};

}  // namespace

PipelineResult run_pipeline(const std::string& problem, CompletionClient& client, const Config& config,
                            const PipelineHooks& hooks) {
  return Run(problem, client, config, hooks).go();
}

void write_transcript(const PipelineState& s, const std::string& dir) {
  fs::create_directories(dir);
  std::string index, timings;
  for (const auto& x : s.transcript) {
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "%03d", x.seq);
    std::string base = std::string(prefix) + "_" + x.stage + "_" + std::to_string(x.attempt);
    nlohmann::json files = nlohmann::json::array();
    for (auto [suffix, text] : {std::pair{".prompt.txt", &x.prompt}, std::pair{".response.txt", &x.response},
                                std::pair{".feedback.txt", &x.feedback}}) {
      if (text->empty()) continue;
      write_file(fs::path(dir) / (base + suffix), *text);
      files.push_back(base + suffix);
    }
    nlohmann::json rec = {{"seq", x.seq}, {"stage", x.stage}, {"attempt", x.attempt},
                          {"kind", x.kind}, {"status", x.status}, {"files", files}};
    index += rec.dump() + "\n";
    timings += nlohmann::json{{"seq", x.seq}, {"seconds", x.seconds}}.dump() + "\n";
  }
  write_file(fs::path(dir) / "index.jsonl", index);
  write_file(fs::path(dir) / "timings.jsonl", timings);
  write_file(fs::path(dir) / "final_program.bc", s.program_text());
}

nlohmann::json pipeline_summary(const PipelineResult& r) {
  const auto& s = r.state;
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& e : s.samples) {
    nlohmann::json j = {{"query", e.text}};
    j["expected"] = e.expect_sat ? nlohmann::json(*e.expect_sat ? "satisfiable" : "unsatisfiable") : nlohmann::json();
    j["result"] = e.satisfiable ? nlohmann::json(*e.satisfiable ? "satisfiable" : "unsatisfiable") : nlohmann::json();
    j["matched"] = e.matched ? nlohmann::json(*e.matched) : nlohmann::json();
    samples.push_back(j);
  }
  nlohmann::json j = {{"status", pipeline_status_name(s.status)},
                      {"detail", s.status_detail},
                      {"sat_revisions", s.sat_revisions},
                      {"feedback_passes", s.feedback_passes},
                      {"query_runs", s.query_runs},
                      {"knowledge", s.knowledge},
                      {"samples", samples},
                      {"warnings", s.warnings}};
  if (r.outcome) {
    j["satisfiable"] = r.outcome->satisfiable;
    j["length"] = r.outcome->satisfiable ? nlohmann::json(r.outcome->horizon) : nlohmann::json();
  }
  return j;
}

}  // namespace bcplus
