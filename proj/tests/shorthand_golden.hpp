#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/algorithm/string.hpp>

#include "bcplus/normalize.hpp"
#include "bcplus/parser.hpp"

struct ShorthandCase {
  std::string rule, law, expected, actual;
};

// Reads fixtures/shorthand/golden.txt and expands every case.
inline std::vector<ShorthandCase> shorthand_cases(const std::string& path) {
  std::ifstream in(path);
  std::string line, signature;
  std::vector<ShorthandCase> out;
  bool cases = false;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) continue;
    if (line == "%%") {
      cases = true;
      continue;
    }
    if (!cases) {
      signature += line + "\n";
      continue;
    }
    if (boost::algorithm::trim_copy(line).empty()) continue;
    auto first = line.find(" @@ ");
    auto last = line.rfind(" @@ ");
    ShorthandCase c{line.substr(0, first), line.substr(first + 4, last - first - 4), line.substr(last + 4), ""};
    auto r = bcplus::parse_program(signature + c.law + "\n");
    if (!r.ok() || r.program.laws.size() != 1) {
      c.actual = "parse error: " + bcplus::format_diagnostics(r.diagnostics);
    } else {
      try {
        for (const auto& b : bcplus::expand_shorthand(r.program.laws[0], r.program))
          c.actual += (c.actual.empty() ? "" : " ;; ") + bcplus::unabbreviated(b);
      } catch (const std::exception& e) {
        c.actual = std::string("error: ") + e.what();
      }
    }
    out.push_back(std::move(c));
  }
  return out;
}

namespace shorthand_random {

inline const char* kSignature = R"(
:- sorts item; place; integer.
:- objects a, b :: item; p, q :: place; 0..3 :: integer.
:- variables X :: item; P :: place; N :: integer.
:- constants
    at(item) :: inertialFluent(place);
    lit :: inertialFluent;
    level :: inertialFluent(integer);
    go(item) :: exogenousAction;
    dest(item) :: attribute(place) of go(item);
    push :: exogenousAction.
)";

inline std::string fluent_atom(std::mt19937& rng) {
  const char* atoms[] = {"at(a) = p", "at(b) = q", "at(X) = P", "lit", "~lit", "level = N", "level > 1"};
  return atoms[rng() % 7];
}

inline std::string action_atom(std::mt19937& rng) {
  const char* atoms[] = {"go(a)", "go(X)", "push", "~push", "dest(X) = P", "dest(b) = q"};
  return atoms[rng() % 6];
}

inline std::string conj(std::mt19937& rng, bool actions, int max_len) {
  int n = 1 + static_cast<int>(rng() % max_len);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += rng() % 4 == 0 ? " | " : " & ";
    out += actions && rng() % 2 ? action_atom(rng) : fluent_atom(rng);
  }
  return rng() % 5 == 0 ? "~(" + out + ")" : out;
}

inline std::string basic_law(std::mt19937& rng) {
  const char* heads[] = {"lit", "~lit", "at(a) = q", "at(X) = P", "false", "level = N"};
  std::string head = heads[rng() % 6];
  switch (rng() % 3) {
    case 0: return head + " if " + conj(rng, false, 3) + ".";
    case 1: return head + " if " + conj(rng, false, 2) + " after " + conj(rng, true, 3) + ".";
    default: {
      const char* aheads[] = {"push", "~push", "go(a)", "dest(X) = P"};
      return std::string(aheads[rng() % 4]) + " if " + conj(rng, true, 3) + ".";
    }
  }
}

// Expands `count` random basic laws twice, and once more after re-parsing the
// rendered expansion. Returns the laws whose expansions differ.
inline std::vector<std::string> idempotence_failures(int count, unsigned seed) {
  using namespace bcplus;
  std::mt19937 rng(seed);
  std::vector<std::string> bad;
  for (int i = 0; i < count; ++i) {
    std::string law = basic_law(rng);
    try {
      auto p = parse_program(std::string(kSignature) + law + "\n");
      if (!p.ok() || p.program.laws.size() != 1) {
        bad.push_back(law + " (parse)");
        continue;
      }
      auto once = expand_shorthand(p.program.laws[0], p.program);
      auto twice = expand_shorthand(to_causal_law(once.at(0)), p.program);
      once[0].origin = twice.at(0).origin;
      auto reparsed = parse_program(std::string(kSignature) + to_string(to_causal_law(once[0])) + "\n");
      bool ok = once.size() == 1 && twice.size() == 1 && to_string(twice[0]) == to_string(once[0]) &&
                reparsed.ok() && reparsed.program.laws.size() == 1 &&
                to_string(expand_shorthand(reparsed.program.laws[0], reparsed.program).at(0)) == to_string(once[0]);
      if (!ok) bad.push_back(law);
    } catch (const std::exception& e) {
      bad.push_back(law + " (" + e.what() + ")");
    }
  }
  return bad;
}

}  // namespace shorthand_random
