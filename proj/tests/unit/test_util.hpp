#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "bcplus/normalize.hpp"
#include "bcplus/parser.hpp"

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline bcplus::Program must_parse(const std::string& text) {
  auto r = bcplus::parse_program(text);
  if (!r.ok()) throw std::runtime_error(bcplus::format_diagnostics(r.diagnostics));
  return r.program;
}

inline std::shared_ptr<bcplus::GroundProgram> ground_text(const std::string& text) {
  return bcplus::ground(must_parse(text));
}

inline std::shared_ptr<bcplus::GroundProgram> ground_file(const std::string& path) {
  return ground_text(slurp(path));
}
