#pragma once

#include <string>
#include <vector>

#include "bcplus/ast.hpp"

namespace bcplus {

struct SourceProgram {
  std::string text;
  std::string origin = "<input>";
};

// A partial Program is always returned; laws or items that failed to parse are
// skipped and reported.
struct ParseResult {
  Program program;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return !has_errors(diagnostics); }
};

ParseResult parse_program(const SourceProgram& src);
ParseResult parse_program(const std::string& text);

struct QueryParseResult {
  Query query;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return !has_errors(diagnostics); }
};

// Parses a single `:- query ... .` block.
QueryParseResult parse_query(const SourceProgram& src);

std::string render_program(const Program& p);
std::string render_query(const Query& q);
std::string render_signature(const Program& p);  // declaration sections only
std::string render_laws(const Program& p);

}  // namespace bcplus
