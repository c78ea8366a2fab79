#include "bcplus/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>

namespace bcplus {

namespace {

enum class Tok { Ident, Var, Int, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  SourceLoc loc;
};

const std::vector<std::string> kPuncts = {
    ":-", "::", "..", "\\=", "<=", ">=", ">>", "->", "//", ":", ".", ",", ";",
    "(",  ")",  "=",  "<",   ">",  "+",  "-",  "*",  "&", "|", "~",
};

const std::set<std::string> kKeywords = {
    "if",      "after", "causes",     "impossible", "nonexecutable", "default", "always",
    "increments", "decrements", "by", "mod", "abs", "true", "false",
};

std::vector<Token> lex(const std::string& text, std::vector<Diagnostic>& diags) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < text.size(); ++k, ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      advance(1);
      continue;
    }
    if (c == '%') {
      while (i < text.size() && text[i] != '\n') advance(1);
      continue;
    }
    Token tok;
    tok.loc = {line, col};
    if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
        ++j;
      tok.text = text.substr(i, j - i);
      tok.kind = (std::isupper(c) || c == '_') ? Tok::Var : Tok::Ident;
      out.push_back(tok);
      advance(j - i);
      continue;
    }
    if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      tok.text = text.substr(i, j - i);
      tok.kind = Tok::Int;
      auto res = std::from_chars(text.data() + i, text.data() + j, tok.value);
      if (res.ec != std::errc()) {
        diags.push_back({Severity::Error, "integer literal out of range", line, col});
        tok.value = 0;
      }
      out.push_back(tok);
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const auto& p : kPuncts) {
      if (text.compare(i, p.size(), p) == 0) {
        tok.kind = Tok::Punct;
        tok.text = p;
        out.push_back(tok);
        advance(p.size());
        matched = true;
        break;
      }
    }
    if (matched) continue;
    std::string shown = (c >= 32 && c < 127) ? std::string(1, static_cast<char>(c))
                                              : "\\x" + std::to_string(static_cast<int>(c));
    diags.push_back({Severity::Error, "unexpected character '" + shown + "'", line, col});
    advance(1);
  }
  Token end;
  end.kind = Tok::End;
  end.loc = {line, col};
  out.push_back(end);
  return out;
}

struct ParseFailure {
  Diagnostic diag;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<Diagnostic>& diags)
      : toks_(std::move(toks)), diags_(diags) {}

  Program run() {
    Program p;
    while (!at_end()) {
      if (is_punct(":-")) {
        section(p);
      } else {
        std::size_t start = pos_;
        try {
          p.laws.push_back(law());
        } catch (const ParseFailure& f) {
          diags_.push_back(f.diag);
          recover_law(start);
        }
      }
    }
    return p;
  }

 private:
  std::vector<Token> toks_;
  std::vector<Diagnostic>& diags_;
  std::size_t pos_ = 0;

  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at_end() const { return peek().kind == Tok::End; }
  bool is_punct(const char* p, std::size_t k = 0) const {
    return peek(k).kind == Tok::Punct && peek(k).text == p;
  }
  bool is_kw(const char* kw, std::size_t k = 0) const {
    return peek(k).kind == Tok::Ident && peek(k).text == kw;
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < toks_.size() - 1) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const std::string& msg, SourceLoc loc) {
    throw ParseFailure{{Severity::Error, msg, loc.line, loc.column}};
  }
  [[noreturn]] void unexpected(const char* what) {
    const Token& t = peek();
    if (t.kind == Tok::End) fail(std::string("unexpected end of input, expected ") + what, t.loc);
    fail("unexpected '" + t.text + "', expected " + what, t.loc);
  }
  void expect(const char* p) {
    if (!is_punct(p)) unexpected((std::string("'") + p + "'").c_str());
    next();
  }
  std::string ident(const char* what) {
    if (peek().kind != Tok::Ident) unexpected(what);
    return next().text;
  }

  void recover_law(std::size_t start) {
    if (pos_ == start) next();
    while (!at_end() && !is_punct(".") && !is_punct(":-")) next();
    if (is_punct(".")) next();
  }

  // ---------------------------------------------------------------- sections

  // After a ';' decide whether another item follows or the section already
  // ended (a trailing ';' directly before the next law or section).
  bool item_follows(bool query, bool sorts) const {
    if (peek().kind == Tok::End || is_punct(":-")) return false;
    if (sorts) {
      for (std::size_t k = 0;; ++k) {
        const Token& t = peek(k);
        if (t.kind == Tok::Ident) continue;
        if (t.kind == Tok::Punct && (t.text == "," || t.text == ">>")) continue;
        return k > 0 && t.kind == Tok::Punct && (t.text == ";" || t.text == ".");
      }
    }
    int depth = 0;
    for (std::size_t k = 0;; ++k) {
      const Token& t = peek(k);
      if (t.kind == Tok::End) return false;
      if (t.kind != Tok::Punct) continue;
      if (t.text == "(") ++depth;
      if (t.text == ")") --depth;
      if (depth > 0) continue;
      if (t.text == "::") return true;
      if (query && t.text == ":") return true;
      if (t.text == "." || t.text == ";" || t.text == ":-") return false;
    }
  }

  void section(Program& p) {
    SourceLoc loc = next().loc;  // ':-'
    if (peek().kind != Tok::Ident) {
      diags_.push_back({Severity::Error, "expected a section name after ':-'", peek().loc.line,
                        peek().loc.column});
      recover_law(pos_);
      return;
    }
    Token name = next();
    enum { Sorts, Objects, Variables, Constants, Queries } kind;
    if (name.text == "sorts") kind = Sorts;
    else if (name.text == "objects") kind = Objects;
    else if (name.text == "variables") kind = Variables;
    else if (name.text == "constants") kind = Constants;
    else if (name.text == "query") kind = Queries;
    else {
      diags_.push_back({Severity::Error, "unknown section ':- " + name.text + "'", name.loc.line,
                        name.loc.column});
      recover_law(pos_);
      return;
    }
    Query q;
    q.loc = loc;
    if (is_punct(".")) {
      next();
      if (kind == Queries) p.queries.push_back(q);
      return;
    }
    while (true) {
      std::size_t start = pos_;
      bool ok = true;
      try {
        switch (kind) {
          case Sorts: sort_item(p); break;
          case Objects: object_item(p); break;
          case Variables: variable_item(p); break;
          case Constants: constant_item(p); break;
          case Queries: query_item(q); break;
        }
      } catch (const ParseFailure& f) {
        diags_.push_back(f.diag);
        ok = false;
        if (pos_ == start) next();
        int depth = 0;
        while (!at_end() && !is_punct(":-")) {
          if (is_punct("(")) ++depth;
          if (is_punct(")")) --depth;
          if (depth <= 0 && (is_punct(";") || is_punct("."))) break;
          next();
        }
      }
      if (is_punct(";")) {
        next();
        if (!item_follows(kind == Queries, kind == Sorts)) break;
        continue;
      }
      if (is_punct(".")) {
        next();
        break;
      }
      if (ok) {
        const Token& t = peek();
        diags_.push_back({Severity::Error,
                          t.kind == Tok::End ? "unexpected end of input, expected ';' or '.'"
                                             : "unexpected '" + t.text + "', expected ';' or '.'",
                          t.loc.line, t.loc.column});
      }
      if (at_end() || is_punct(":-")) break;
      recover_law(pos_);
      break;
    }
    if (kind == Queries) p.queries.push_back(std::move(q));
  }

  std::vector<Token> name_list(bool vars) {
    std::vector<Token> names;
    while (true) {
      Tok want = vars ? Tok::Var : Tok::Ident;
      if (peek().kind != want) {
        if (vars && peek().kind == Tok::Ident)
          fail("variable '" + peek().text + "' must start with an upper-case letter", peek().loc);
        unexpected(vars ? "a variable name" : "a name");
      }
      names.push_back(next());
      if (!is_punct(",")) break;
      next();
    }
    return names;
  }

  void declare_sort(Program& p, const Token& t) {
    for (const auto& s : p.sorts)
      if (s.name == t.text) return;
    p.sorts.push_back({t.text, {}, t.loc});
  }

  void sort_item(Program& p) {
    std::vector<std::vector<Token>> chain{name_list(false)};
    while (is_punct(">>")) {
      next();
      chain.push_back(name_list(false));
    }
    for (const auto& group : chain)
      for (const auto& t : group) declare_sort(p, t);
    for (std::size_t i = 1; i < chain.size(); ++i)
      for (const auto& sub : chain[i])
        for (auto& s : p.sorts)
          if (s.name == sub.text)
            for (const auto& sup : chain[i - 1])
              if (std::find(s.supersorts.begin(), s.supersorts.end(), sup.text) ==
                  s.supersorts.end())
                s.supersorts.push_back(sup.text);
  }

  std::int64_t signed_int() {
    bool neg = false;
    if (is_punct("-")) {
      next();
      neg = true;
    }
    if (peek().kind != Tok::Int) unexpected("an integer");
    std::int64_t v = next().value;
    return neg ? -v : v;
  }

  Term object_term() {
    SourceLoc loc = peek().loc;
    if (peek().kind == Tok::Int || is_punct("-")) {
      std::int64_t lo = signed_int();
      if (is_punct("..")) {
        next();
        std::int64_t hi = signed_int();
        return Term::range(lo, hi, loc);
      }
      return Term::integer(lo, loc);
    }
    std::string name = ident("an object");
    std::vector<Term> args;
    if (is_punct("(")) {
      next();
      while (true) {
        if (peek().kind == Tok::Int || is_punct("-")) {
          args.push_back(Term::integer(signed_int(), peek().loc));
        } else {
          SourceLoc aloc = peek().loc;
          args.push_back(Term::symbol(ident("a sort name"), {}, aloc));
        }
        if (is_punct(",")) {
          next();
          continue;
        }
        expect(")");
        break;
      }
    }
    return Term::symbol(name, std::move(args), loc);
  }

  void object_item(Program& p) {
    std::vector<Term> values{object_term()};
    while (is_punct(",")) {
      next();
      values.push_back(object_term());
    }
    expect("::");
    std::string sort = ident("a sort name");
    for (auto& v : values) {
      SourceLoc loc = v.loc;
      p.objects.push_back({std::move(v), sort, loc});
    }
  }

  void variable_item(Program& p) {
    auto names = name_list(true);
    expect("::");
    std::string sort = ident("a sort name");
    for (const auto& n : names) p.variables.push_back({n.text, sort, n.loc});
  }

  std::vector<std::string> sort_args() {
    std::vector<std::string> out;
    expect("(");
    while (true) {
      if (peek().kind != Tok::Ident && peek().kind != Tok::Var) unexpected("a sort name");
      out.push_back(next().text);
      if (is_punct(",")) {
        next();
        continue;
      }
      expect(")");
      break;
    }
    return out;
  }

  void constant_item(Program& p) {
    std::vector<ConstantDecl> decls;
    while (true) {
      ConstantDecl d;
      d.loc = peek().loc;
      d.name = ident("a constant name");
      if (is_punct("(")) d.arg_sorts = sort_args();
      decls.push_back(std::move(d));
      if (!is_punct(",")) break;
      next();
    }
    expect("::");
    SourceLoc kloc = peek().loc;
    std::string kind = ident("a constant kind");
    ConstantDecl proto;
    if (kind == "inertialFluent") proto.kind = ConstantKind::InertialFluent;
    else if (kind == "additiveFluent") proto.kind = ConstantKind::AdditiveFluent;
    else if (kind == "exogenousAction") proto.kind = ConstantKind::ExogenousAction;
    else if (kind == "attribute") proto.kind = ConstantKind::Attribute;
    else if (kind == "additiveAction") proto.kind = ConstantKind::AdditiveAction;
    else {
      proto.kind = ConstantKind::Unknown;
      proto.raw_kind = kind;
    }
    if (is_punct("(")) {
      auto a = sort_args();
      if (a.size() != 1) fail("a constant kind takes exactly one value sort", kloc);
      proto.value_sort = a[0];
      proto.explicit_value_sort = true;
    }
    if (is_kw("of")) {
      next();
      proto.parent = ident("an action name");
      if (is_punct("(")) proto.parent_arg_sorts = sort_args();
    }
    for (auto& d : decls) {
      d.kind = proto.kind;
      d.raw_kind = proto.raw_kind;
      d.value_sort = proto.value_sort;
      d.explicit_value_sort = proto.explicit_value_sort;
      d.parent = proto.parent;
      d.parent_arg_sorts = proto.parent_arg_sorts;
      p.constants.push_back(std::move(d));
    }
  }

  void query_item(Query& q) {
    const Token& t = peek();
    if (t.kind == Tok::Ident && t.text == "label" && is_punct("::", 1)) {
      next();
      next();
      if (peek().kind != Tok::Ident && peek().kind != Tok::Var && peek().kind != Tok::Int)
        unexpected("a label");
      q.label = next().text;
      return;
    }
    if (t.kind == Tok::Ident && t.text == "maxstep" && is_punct("::", 1)) {
      next();
      next();
      SourceLoc loc = peek().loc;
      std::int64_t n = signed_int();
      if (n < 0) fail("maxstep bound must be non-negative", loc);
      if (q.maxstep) fail("query declares more than one maxstep bound", loc);
      q.maxstep = static_cast<int>(n);
      return;
    }
    TimedFormula tf;
    tf.loc = t.loc;
    if (t.kind == Tok::Ident && t.text == "maxstep" && is_punct(":", 1)) {
      next();
      next();
      if (peek().kind == Tok::Int && (is_punct(";", 1) || is_punct(".", 1))) {
        fail("'maxstep: " + peek().text + "' puts an integer where a formula belongs; bound the "
             "horizon with 'maxstep :: " + peek().text + "'",
             t.loc);
      }
      tf.step = std::nullopt;
    } else if (t.kind == Tok::Int && is_punct(":", 1)) {
      tf.step = static_cast<int>(next().value);
      next();
    } else {
      unexpected("'label ::', 'maxstep ::' or a step index followed by ':'");
    }
    tf.formula = formula();
    q.items.push_back(std::move(tf));
  }

  // -------------------------------------------------------------------- laws

  CausalLaw law() {
    CausalLaw l;
    l.loc = peek().loc;
    if (is_kw("impossible")) {
      next();
      l.kind = LawKind::Impossible;
      l.head = Formula::truth(false);
      l.condition = formula();
    } else if (is_kw("always")) {
      next();
      l.kind = LawKind::Always;
      l.head = Formula::truth(false);
      l.condition = formula();
    } else if (is_kw("nonexecutable")) {
      next();
      l.kind = LawKind::Nonexecutable;
      l.head = Formula::truth(false);
      l.action = formula();
      l.condition = optional_clause("if");
    } else if (is_kw("default")) {
      next();
      l.kind = LawKind::Default;
      l.head = formula();
      l.condition = optional_clause("if");
      if (is_kw("after")) {
        next();
        l.after = formula();
      }
    } else {
      Formula first = formula();
      if (is_kw("causes")) {
        next();
        l.kind = LawKind::Causes;
        l.action = std::move(first);
        l.head = formula();
        l.condition = optional_clause("if");
      } else if (is_kw("increments") || is_kw("decrements")) {
        l.kind = next().text == "increments" ? LawKind::Increments : LawKind::Decrements;
        l.action = std::move(first);
        l.target = term();
        if (!is_kw("by")) unexpected("'by'");
        next();
        l.amount = term();
        l.condition = optional_clause("if");
      } else {
        l.head = std::move(first);
        l.condition = optional_clause("if");
        if (is_kw("after")) {
          next();
          l.kind = LawKind::FluentDynamic;
          l.after = formula();
        } else {
          l.kind = LawKind::Static;
        }
      }
    }
    if (!is_punct(".")) unexpected("'.' at the end of the law");
    next();
    return l;
  }

  Formula optional_clause(const char* kw) {
    if (!is_kw(kw)) return Formula::truth(true);
    next();
    return formula();
  }

  void check_operand_follows(const Token& op) {
    if (at_end() || is_punct(".") || is_punct(";"))
      fail("unexpected end of law after '" + op.text + "'", op.loc);
  }

  Formula formula() { return implication(); }

  Formula implication() {
    Formula lhs = disjunction();
    if (is_punct("->")) {
      Token op = next();
      check_operand_follows(op);
      Formula rhs = implication();
      return Formula::implies(std::move(lhs), std::move(rhs), op.loc);
    }
    return lhs;
  }

  Formula disjunction() {
    std::vector<Formula> parts{conjunction()};
    SourceLoc loc = parts[0].loc;
    while (is_punct("|")) {
      Token op = next();
      check_operand_follows(op);
      parts.push_back(conjunction());
    }
    return parts.size() == 1 ? std::move(parts[0]) : Formula::disj(std::move(parts), loc);
  }

  Formula conjunction() {
    std::vector<Formula> parts{negation()};
    SourceLoc loc = parts[0].loc;
    while (is_punct("&")) {
      Token op = next();
      check_operand_follows(op);
      parts.push_back(negation());
    }
    return parts.size() == 1 ? std::move(parts[0]) : Formula::conj(std::move(parts), loc);
  }

  Formula negation() {
    if (is_punct("~")) {
      Token op = next();
      check_operand_follows(op);
      return Formula::negation(negation(), op.loc);
    }
    return primary_formula();
  }

  static bool is_compare(const Token& t) {
    if (t.kind != Tok::Punct) return false;
    return t.text == "=" || t.text == "\\=" || t.text == "<" || t.text == ">" ||
           t.text == "<=" || t.text == ">=";
  }

  static CompareOp compare_op(const std::string& s) {
    if (s == "=") return CompareOp::Eq;
    if (s == "\\=") return CompareOp::Ne;
    if (s == "<") return CompareOp::Lt;
    if (s == ">") return CompareOp::Gt;
    if (s == "<=") return CompareOp::Le;
    return CompareOp::Ge;
  }

  Formula primary_formula() {
    SourceLoc loc = peek().loc;
    if (is_kw("true") && !is_compare(peek(1))) {
      next();
      return Formula::truth(true, loc);
    }
    if (is_kw("false") && !is_compare(peek(1))) {
      next();
      return Formula::truth(false, loc);
    }
    if (is_punct("(")) {
      // Either a parenthesized formula or the start of an arithmetic term.
      std::size_t save = pos_;
      std::size_t diag_count = diags_.size();
      try {
        Term t = term();
        if (is_compare(peek())) {
          Token op = next();
          check_operand_follows(op);
          Term rhs = term();
          return Formula::compare(compare_op(op.text), std::move(t), std::move(rhs), loc);
        }
        if (t.kind == TermKind::Symbol) return Formula::atom(std::move(t), loc);
      } catch (const ParseFailure&) {
      }
      pos_ = save;
      diags_.resize(diag_count);
      next();
      Formula inner = formula();
      expect(")");
      return inner;
    }
    Term t = term();
    if (is_compare(peek())) {
      Token op = next();
      check_operand_follows(op);
      Term rhs = term();
      return Formula::compare(compare_op(op.text), std::move(t), std::move(rhs), loc);
    }
    if (t.kind == TermKind::Integer)
      fail("integer '" + std::to_string(t.value) + "' used where a formula is expected", loc);
    if (t.kind != TermKind::Symbol)
      fail("'" + to_string(t) + "' is not a formula; expected an atom or a comparison", loc);
    return Formula::atom(std::move(t), loc);
  }

  // ------------------------------------------------------------------- terms

  Term term() { return additive(); }

  Term additive() {
    Term lhs = multiplicative();
    while (is_punct("+") || is_punct("-")) {
      Token op = next();
      check_operand_follows(op);
      Term rhs = multiplicative();
      lhs = Term::arith(op.text == "+" ? ArithOp::Add : ArithOp::Sub, {std::move(lhs), std::move(rhs)},
                        op.loc);
    }
    return lhs;
  }

  Term multiplicative() {
    Term lhs = unary();
    while (is_punct("*") || is_punct("//") || is_kw("mod")) {
      Token op = next();
      check_operand_follows(op);
      Term rhs = unary();
      ArithOp a = op.text == "*" ? ArithOp::Mul : op.text == "//" ? ArithOp::Div : ArithOp::Mod;
      lhs = Term::arith(a, {std::move(lhs), std::move(rhs)}, op.loc);
    }
    return lhs;
  }

  Term unary() {
    SourceLoc loc = peek().loc;
    if (is_punct("-")) {
      Token op = next();
      check_operand_follows(op);
      if (peek().kind == Tok::Int) return Term::integer(-next().value, loc);
      return Term::arith(ArithOp::Neg, {unary()}, loc);
    }
    if (is_kw("abs") && is_punct("(", 1)) {
      next();
      next();
      Term inner = term();
      expect(")");
      return Term::arith(ArithOp::Abs, {std::move(inner)}, loc);
    }
    return atom_term();
  }

  Term atom_term() {
    const Token& t = peek();
    SourceLoc loc = t.loc;
    if (t.kind == Tok::Int) return Term::integer(next().value, loc);
    if (t.kind == Tok::Var) return Term::variable(next().text, loc);
    if (t.kind == Tok::Ident) {
      if (kKeywords.count(t.text) && t.text != "true" && t.text != "false")
        fail("unexpected keyword '" + t.text + "'", loc);
      std::string name = next().text;
      std::vector<Term> args;
      if (is_punct("(")) {
        next();
        while (true) {
          args.push_back(term());
          if (is_punct(",")) {
            next();
            continue;
          }
          expect(")");
          break;
        }
      }
      return Term::symbol(std::move(name), std::move(args), loc);
    }
    if (is_punct("(")) {
      next();
      Term inner = term();
      expect(")");
      return inner;
    }
    unexpected("a term");
  }
};

// ---------------------------------------------------------------- rendering

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

void render_section(std::ostringstream& os, const char* name, const std::vector<std::string>& items) {
  if (items.empty()) return;
  os << ":- " << name << "\n    " << join(items, ";\n    ") << ".\n\n";
}

std::string render_constant(const ConstantDecl& c) {
  std::string s = c.name;
  if (!c.arg_sorts.empty()) s += "(" + join(c.arg_sorts, ", ") + ")";
  s += " :: ";
  s += c.kind == ConstantKind::Unknown ? c.raw_kind : constant_kind_name(c.kind);
  if (c.explicit_value_sort) s += "(" + c.value_sort + ")";
  if (!c.parent.empty()) {
    s += " of " + c.parent;
    if (!c.parent_arg_sorts.empty()) s += "(" + join(c.parent_arg_sorts, ", ") + ")";
  }
  return s;
}

}  // namespace

ParseResult parse_program(const SourceProgram& src) {
  ParseResult r;
  auto toks = lex(src.text, r.diagnostics);
  Parser parser(std::move(toks), r.diagnostics);
  r.program = parser.run();
  return r;
}

ParseResult parse_program(const std::string& text) { return parse_program(SourceProgram{text}); }

QueryParseResult parse_query(const SourceProgram& src) {
  QueryParseResult r;
  auto pr = parse_program(src);
  r.diagnostics = std::move(pr.diagnostics);
  const Program& p = pr.program;
  bool other = !p.sorts.empty() || !p.objects.empty() || !p.variables.empty() ||
               !p.constants.empty() || !p.laws.empty();
  if (r.ok() && (p.queries.size() != 1 || other)) {
    r.diagnostics.push_back({Severity::Error, "expected exactly one ':- query' block", 1, 1});
  }
  if (!p.queries.empty()) r.query = p.queries.front();
  return r;
}

std::string render_signature(const Program& p) {
  std::ostringstream os;
  std::vector<std::string> items, deferred;
  for (std::size_t i = 0; i < p.sorts.size(); ++i) {
    const auto& s = p.sorts[i];
    bool all_before = !s.supersorts.empty();
    for (const auto& sup : s.supersorts) {
      bool found = false;
      for (std::size_t j = 0; j < i; ++j) found = found || p.sorts[j].name == sup;
      all_before = all_before && found;
    }
    if (all_before) {
      for (const auto& sup : s.supersorts) items.push_back(sup + " >> " + s.name);
    } else {
      items.push_back(s.name);
      for (const auto& sup : s.supersorts) deferred.push_back(sup + " >> " + s.name);
    }
  }
  items.insert(items.end(), deferred.begin(), deferred.end());
  render_section(os, "sorts", items);

  items.clear();
  for (std::size_t i = 0; i < p.objects.size();) {
    std::vector<std::string> vals;
    std::size_t j = i;
    while (j < p.objects.size() && p.objects[j].sort == p.objects[i].sort)
      vals.push_back(to_display(p.objects[j++].value));
    items.push_back(join(vals, ", ") + " :: " + p.objects[i].sort);
    i = j;
  }
  render_section(os, "objects", items);

  items.clear();
  for (std::size_t i = 0; i < p.variables.size();) {
    std::vector<std::string> names;
    std::size_t j = i;
    while (j < p.variables.size() && p.variables[j].sort == p.variables[i].sort)
      names.push_back(p.variables[j++].name);
    items.push_back(join(names, ", ") + " :: " + p.variables[i].sort);
    i = j;
  }
  render_section(os, "variables", items);

  items.clear();
  for (const auto& c : p.constants) items.push_back(render_constant(c));
  render_section(os, "constants", items);
  return os.str();
}

std::string render_laws(const Program& p) {
  std::string out;
  for (const auto& l : p.laws) out += to_string(l) + "\n";
  return out;
}

std::string render_query(const Query& q) {
  std::vector<std::string> items;
  if (q.label) items.push_back("label :: " + *q.label);
  if (q.maxstep) items.push_back("maxstep :: " + std::to_string(*q.maxstep));
  for (const auto& tf : q.items) {
    std::string step = tf.step ? std::to_string(*tf.step) : "maxstep";
    items.push_back(step + ": " + to_string(tf.formula));
  }
  if (items.empty()) return ":- query.\n";
  return ":- query\n    " + join(items, ";\n    ") + ".\n";
}

std::string render_program(const Program& p) {
  std::string out = render_signature(p);
  std::string laws = render_laws(p);
  if (!laws.empty()) out += laws + "\n";
  for (const auto& q : p.queries) out += render_query(q) + "\n";
  return out;
}

}  // namespace bcplus
