#include "bcplus/ast.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "bcplus/error.hpp"

namespace bcplus {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnknownSort: return "UnknownSort";
    case ErrorCode::CyclicSortHierarchy: return "CyclicSortHierarchy";
    case ErrorCode::UnassignedConstant: return "UnassignedConstant";
    case ErrorCode::NonIntegerArithmetic: return "NonIntegerArithmetic";
    case ErrorCode::AdditiveHeadMisuse: return "AdditiveHeadMisuse";
    case ErrorCode::ImpossibleContainsAction: return "ImpossibleContainsAction";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::DomainEmpty: return "DomainEmpty";
    case ErrorCode::GroundingBudgetExceeded: return "GroundingBudgetExceeded";
    case ErrorCode::HorizonNegative: return "HorizonNegative";
    case ErrorCode::SolverBudgetExceeded: return "SolverBudgetExceeded";
    case ErrorCode::Cancelled: return "Cancelled";
    case ErrorCode::StateSpaceTooLarge: return "StateSpaceTooLarge";
    case ErrorCode::MissingFencedBlock: return "MissingFencedBlock";
    case ErrorCode::TemplateUnbound: return "TemplateUnbound";
    case ErrorCode::ClientFailure: return "ClientFailure";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Error";
}

std::string Diagnostic::str() const {
  std::ostringstream os;
  os << (is_error() ? "error" : "warning") << ": " << line << ":" << column << ": " << message;
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(), [](const Diagnostic& d) { return d.is_error(); });
}

std::string format_diagnostics(const std::vector<Diagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) out += d.str() + "\n";
  return out;
}

// ---------------------------------------------------------------------------

Term Term::integer(std::int64_t v, SourceLoc loc) {
  Term t;
  t.kind = TermKind::Integer;
  t.value = v;
  t.loc = loc;
  return t;
}

Term Term::symbol(std::string name, std::vector<Term> args, SourceLoc loc) {
  Term t;
  t.kind = TermKind::Symbol;
  t.name = std::move(name);
  t.args = std::move(args);
  t.loc = loc;
  return t;
}

Term Term::variable(std::string name, SourceLoc loc) {
  Term t;
  t.kind = TermKind::Variable;
  t.name = std::move(name);
  t.loc = loc;
  return t;
}

Term Term::range(std::int64_t lo, std::int64_t hi, SourceLoc loc) {
  Term t;
  t.kind = TermKind::Range;
  t.args = {integer(lo, loc), integer(hi, loc)};
  t.loc = loc;
  return t;
}

Term Term::arith(ArithOp op, std::vector<Term> operands, SourceLoc loc) {
  Term t;
  t.kind = TermKind::Arith;
  t.op = op;
  t.args = std::move(operands);
  t.loc = loc;
  return t;
}

bool Term::is_ground() const {
  if (kind == TermKind::Variable) return false;
  return std::all_of(args.begin(), args.end(), [](const Term& a) { return a.is_ground(); });
}

namespace {

int arith_prec(const Term& t) {
  if (t.kind != TermKind::Arith) return 4;
  switch (t.op) {
    case ArithOp::Add:
    case ArithOp::Sub: return 1;
    case ArithOp::Mul:
    case ArithOp::Div:
    case ArithOp::Mod: return 2;
    case ArithOp::Neg:
    case ArithOp::Abs: return 3;
  }
  return 4;
}

void print_term(std::ostream& os, const Term& t, bool display) {
  switch (t.kind) {
    case TermKind::Integer: os << t.value; return;
    case TermKind::Variable: os << t.name; return;
    case TermKind::Range: os << t.args[0].value << ".." << t.args[1].value; return;
    case TermKind::Symbol:
      os << t.name;
      if (!t.args.empty()) {
        os << '(';
        for (std::size_t i = 0; i < t.args.size(); ++i) {
          if (i) os << (display ? ", " : ",");
          print_term(os, t.args[i], display);
        }
        os << ')';
      }
      return;
    case TermKind::Arith: break;
  }
  if (t.op == ArithOp::Abs) {
    os << "abs(";
    print_term(os, t.args[0], display);
    os << ')';
    return;
  }
  if (t.op == ArithOp::Neg) {
    os << '-';
    bool paren = arith_prec(t.args[0]) < 3 ||
                 (t.args[0].kind == TermKind::Integer && t.args[0].value < 0);
    if (paren) os << '(';
    print_term(os, t.args[0], display);
    if (paren) os << ')';
    return;
  }
  const char* sym = "+";
  switch (t.op) {
    case ArithOp::Add: sym = "+"; break;
    case ArithOp::Sub: sym = "-"; break;
    case ArithOp::Mul: sym = "*"; break;
    case ArithOp::Div: sym = "//"; break;
    case ArithOp::Mod: sym = "mod"; break;
    default: break;
  }
  int p = arith_prec(t);
  bool lp = arith_prec(t.args[0]) < p;
  bool rp = arith_prec(t.args[1]) <= p;
  if (lp) os << '(';
  print_term(os, t.args[0], display);
  if (lp) os << ')';
  os << ' ' << sym << ' ';
  if (rp) os << '(';
  print_term(os, t.args[1], display);
  if (rp) os << ')';
}

int formula_prec(const Formula& f) {
  switch (f.kind) {
    case FormulaKind::Implies: return 1;
    case FormulaKind::Or: return 2;
    case FormulaKind::And: return 3;
    case FormulaKind::Not: return 4;
    default: return 5;
  }
}

void print_formula(std::ostream& os, const Formula& f) {
  auto child = [&](const Formula& c, bool paren) {
    if (paren) os << '(';
    print_formula(os, c);
    if (paren) os << ')';
  };
  switch (f.kind) {
    case FormulaKind::True: os << "true"; return;
    case FormulaKind::False: os << "false"; return;
    case FormulaKind::Atom: print_term(os, f.terms[0], true); return;
    case FormulaKind::Compare:
      print_term(os, f.terms[0], true);
      os << ' ' << compare_op_text(f.cmp) << ' ';
      print_term(os, f.terms[1], true);
      return;
    case FormulaKind::Not:
      os << '~';
      child(f.children[0], formula_prec(f.children[0]) < 4);
      return;
    case FormulaKind::And:
    case FormulaKind::Or: {
      int p = formula_prec(f);
      const char* sep = f.kind == FormulaKind::And ? " & " : " | ";
      for (std::size_t i = 0; i < f.children.size(); ++i) {
        if (i) os << sep;
        child(f.children[i], formula_prec(f.children[i]) <= p);
      }
      return;
    }
    case FormulaKind::Implies:
      child(f.children[0], formula_prec(f.children[0]) <= 1);
      os << " -> ";
      child(f.children[1], formula_prec(f.children[1]) < 1);
      return;
  }
}

}  // namespace

std::string to_string(const Term& t) {
  std::ostringstream os;
  print_term(os, t, false);
  return os.str();
}

std::string to_display(const Term& t) {
  std::ostringstream os;
  print_term(os, t, true);
  return os.str();
}

const char* compare_op_text(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "=";
    case CompareOp::Ne: return "\\=";
    case CompareOp::Lt: return "<";
    case CompareOp::Gt: return ">";
    case CompareOp::Le: return "<=";
    case CompareOp::Ge: return ">=";
  }
  return "=";
}

std::string to_string(const Formula& f) {
  std::ostringstream os;
  print_formula(os, f);
  return os.str();
}

Formula Formula::truth(bool v, SourceLoc loc) {
  Formula f;
  f.kind = v ? FormulaKind::True : FormulaKind::False;
  f.loc = loc;
  return f;
}

Formula Formula::atom(Term t, SourceLoc loc) {
  Formula f;
  f.kind = FormulaKind::Atom;
  f.terms.push_back(std::move(t));
  f.loc = loc;
  return f;
}

Formula Formula::compare(CompareOp op, Term lhs, Term rhs, SourceLoc loc) {
  Formula f;
  f.kind = FormulaKind::Compare;
  f.cmp = op;
  f.terms.push_back(std::move(lhs));
  f.terms.push_back(std::move(rhs));
  f.loc = loc;
  return f;
}

Formula Formula::negation(Formula inner, SourceLoc loc) {
  Formula f;
  f.kind = FormulaKind::Not;
  f.children.push_back(std::move(inner));
  f.loc = loc;
  return f;
}

namespace {
Formula nary(FormulaKind kind, std::vector<Formula> fs, SourceLoc loc) {
  Formula f;
  f.kind = kind;
  f.loc = loc;
  for (auto& c : fs) {
    if (c.kind == kind) {
      for (auto& cc : c.children) f.children.push_back(std::move(cc));
    } else {
      f.children.push_back(std::move(c));
    }
  }
  if (f.children.size() == 1) {
    Formula only = std::move(f.children[0]);
    return only;
  }
  if (f.children.empty()) return Formula::truth(kind == FormulaKind::And, loc);
  return f;
}
}  // namespace

Formula Formula::conj(std::vector<Formula> fs, SourceLoc loc) {
  return nary(FormulaKind::And, std::move(fs), loc);
}

Formula Formula::disj(std::vector<Formula> fs, SourceLoc loc) {
  return nary(FormulaKind::Or, std::move(fs), loc);
}

Formula Formula::implies(Formula a, Formula b, SourceLoc loc) {
  Formula f;
  f.kind = FormulaKind::Implies;
  f.children.push_back(std::move(a));
  f.children.push_back(std::move(b));
  f.loc = loc;
  return f;
}

void collect_terms(const Formula& f, std::vector<const Term*>& out) {
  for (const auto& t : f.terms) out.push_back(&t);
  for (const auto& c : f.children) collect_terms(c, out);
}

void collect_variables(const Term& t, std::vector<std::string>& out) {
  if (t.kind == TermKind::Variable) {
    if (std::find(out.begin(), out.end(), t.name) == out.end()) out.push_back(t.name);
    return;
  }
  for (const auto& a : t.args) collect_variables(a, out);
}

void collect_variables(const Formula& f, std::vector<std::string>& out) {
  for (const auto& t : f.terms) collect_variables(t, out);
  for (const auto& c : f.children) collect_variables(c, out);
}

const char* constant_kind_name(ConstantKind k) {
  switch (k) {
    case ConstantKind::InertialFluent: return "inertialFluent";
    case ConstantKind::AdditiveFluent: return "additiveFluent";
    case ConstantKind::ExogenousAction: return "exogenousAction";
    case ConstantKind::Attribute: return "attribute";
    case ConstantKind::AdditiveAction: return "additiveAction";
    case ConstantKind::Unknown: return "unknown";
  }
  return "unknown";
}

const char* law_kind_name(LawKind k) {
  switch (k) {
    case LawKind::Static: return "static";
    case LawKind::ActionDynamic: return "actionDynamic";
    case LawKind::FluentDynamic: return "fluentDynamic";
    case LawKind::Causes: return "causes";
    case LawKind::Impossible: return "impossible";
    case LawKind::Nonexecutable: return "nonexecutable";
    case LawKind::Default: return "default";
    case LawKind::Always: return "always";
    case LawKind::Increments: return "increments";
    case LawKind::Decrements: return "decrements";
  }
  return "law";
}

std::string to_string(const CausalLaw& law) {
  std::ostringstream os;
  auto cond = [&](const char* kw) {
    if (!law.condition.is_true()) os << ' ' << kw << ' ' << to_string(law.condition);
  };
  switch (law.kind) {
    case LawKind::Static:
    case LawKind::ActionDynamic:
    case LawKind::FluentDynamic:
      os << to_string(law.head);
      cond("if");
      if (law.after) os << " after " << to_string(*law.after);
      break;
    case LawKind::Causes:
      os << to_string(law.action) << " causes " << to_string(law.head);
      cond("if");
      break;
    case LawKind::Impossible: os << "impossible " << to_string(law.condition); break;
    case LawKind::Always: os << "always " << to_string(law.condition); break;
    case LawKind::Nonexecutable:
      os << "nonexecutable " << to_string(law.action);
      cond("if");
      break;
    case LawKind::Default:
      os << "default " << to_string(law.head);
      cond("if");
      if (law.after) os << " after " << to_string(*law.after);
      break;
    case LawKind::Increments:
    case LawKind::Decrements:
      os << to_string(law.action)
         << (law.kind == LawKind::Increments ? " increments " : " decrements ")
         << to_display(law.target) << " by " << to_display(law.amount);
      cond("if");
      break;
  }
  os << '.';
  return os.str();
}

const ConstantDecl* Program::find_constant(const std::string& name) const {
  for (const auto& c : constants)
    if (c.name == name) return &c;
  return nullptr;
}

const Query* Program::find_query(const std::string& label) const {
  for (const auto& q : queries)
    if (q.label && *q.label == label) return &q;
  return nullptr;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Term> expand_object(const ObjectDecl& obj, const std::vector<SortDecl>& sorts,
                                const std::vector<ObjectDecl>& objects,
                                std::set<std::string>& visiting);

std::vector<Term> domain_rec(const std::vector<SortDecl>& sorts,
                             const std::vector<ObjectDecl>& objects, const std::string& sort,
                             std::set<std::string>& visiting) {
  bool declared = std::any_of(sorts.begin(), sorts.end(),
                              [&](const SortDecl& s) { return s.name == sort; });
  if (!declared) {
    if (sort == "boolean") return {Term::symbol("false"), Term::symbol("true")};
    throw Error(ErrorCode::UnknownSort, "unknown sort '" + sort + "'");
  }
  if (visiting.count(sort))
    throw Error(ErrorCode::CyclicSortHierarchy, "sort hierarchy cycle through '" + sort + "'");
  visiting.insert(sort);
  std::vector<Term> out;
  auto add = [&](const Term& t) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
  };
  for (const auto& o : objects)
    if (o.sort == sort)
      for (auto& t : expand_object(o, sorts, objects, visiting)) add(t);
  for (const auto& s : sorts)
    if (std::find(s.supersorts.begin(), s.supersorts.end(), sort) != s.supersorts.end())
      for (auto& t : domain_rec(sorts, objects, s.name, visiting)) add(t);
  visiting.erase(sort);
  return out;
}

std::vector<Term> expand_object(const ObjectDecl& obj, const std::vector<SortDecl>& sorts,
                                const std::vector<ObjectDecl>& objects,
                                std::set<std::string>& visiting) {
  const Term& v = obj.value;
  if (v.kind == TermKind::Range) {
    std::vector<Term> out;
    for (auto i = v.args[0].value; i <= v.args[1].value; ++i) out.push_back(Term::integer(i));
    return out;
  }
  if (v.kind == TermKind::Symbol && !v.args.empty()) {
    // constructor over sort names, row-major product
    std::vector<std::vector<Term>> doms;
    for (const auto& a : v.args) {
      if (a.kind == TermKind::Symbol && a.args.empty())
        doms.push_back(domain_rec(sorts, objects, a.name, visiting));
      else
        doms.push_back({a});
    }
    std::vector<Term> out;
    std::vector<std::size_t> idx(doms.size(), 0);
    for (const auto& d : doms)
      if (d.empty()) return out;
    while (true) {
      std::vector<Term> args;
      for (std::size_t i = 0; i < doms.size(); ++i) args.push_back(doms[i][idx[i]]);
      out.push_back(Term::symbol(v.name, std::move(args)));
      std::size_t i = doms.size();
      while (i > 0) {
        --i;
        if (++idx[i] < doms[i].size()) break;
        idx[i] = 0;
        if (i == 0) return out;
      }
    }
  }
  Term t = v;
  t.loc = {};
  return {t};
}

}  // namespace

std::vector<Term> sort_domain(const std::vector<SortDecl>& sorts,
                              const std::vector<ObjectDecl>& objects, const std::string& sort) {
  std::set<std::string> visiting;
  // Reject cycles anywhere above this sort too, not only below it.
  std::function<void(const std::string&, std::set<std::string>&)> up =
      [&](const std::string& s, std::set<std::string>& path) {
        if (path.count(s))
          throw Error(ErrorCode::CyclicSortHierarchy, "sort hierarchy cycle through '" + s + "'");
        path.insert(s);
        for (const auto& d : sorts)
          if (d.name == s)
            for (const auto& sup : d.supersorts) up(sup, path);
        path.erase(s);
      };
  std::set<std::string> path;
  up(sort, path);
  return domain_rec(sorts, objects, sort, visiting);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) { return a - floor_div(a, b) * b; }

namespace {

bool is_constant_name(const Valuation& val, const std::string& name) {
  for (const auto& [key, _] : val) {
    if (key == name) return true;
    if (key.size() > name.size() && key.compare(0, name.size(), name) == 0 &&
        key[name.size()] == '(')
      return true;
  }
  return false;
}

std::int64_t as_int(const Term& t) {
  if (t.kind != TermKind::Integer)
    throw Error(ErrorCode::NonIntegerArithmetic,
                "arithmetic on non-integer value '" + to_string(t) + "'");
  return t.value;
}

}  // namespace

Term eval_term(const Term& t, const Valuation& valuation) {
  switch (t.kind) {
    case TermKind::Integer: return Term::integer(t.value);
    case TermKind::Range:
      throw Error(ErrorCode::NonIntegerArithmetic, "range used as a value");
    case TermKind::Variable:
      throw Error(ErrorCode::UnassignedConstant, "variable '" + t.name + "' in ground formula");
    case TermKind::Symbol: {
      std::vector<Term> args;
      for (const auto& a : t.args) args.push_back(eval_term(a, valuation));
      Term ground = Term::symbol(t.name, std::move(args));
      auto it = valuation.find(to_string(ground));
      if (it != valuation.end()) return it->second;
      if (is_constant_name(valuation, t.name))
        throw Error(ErrorCode::UnassignedConstant,
                    "constant '" + to_string(ground) + "' has no value");
      return ground;
    }
    case TermKind::Arith: break;
  }
  std::int64_t a = as_int(eval_term(t.args[0], valuation));
  switch (t.op) {
    case ArithOp::Neg: return Term::integer(-a);
    case ArithOp::Abs: return Term::integer(a < 0 ? -a : a);
    default: break;
  }
  std::int64_t b = as_int(eval_term(t.args[1], valuation));
  switch (t.op) {
    case ArithOp::Add: return Term::integer(a + b);
    case ArithOp::Sub: return Term::integer(a - b);
    case ArithOp::Mul: return Term::integer(a * b);
    case ArithOp::Div:
      if (b == 0) throw Error(ErrorCode::NonIntegerArithmetic, "division by zero");
      return Term::integer(floor_div(a, b));
    case ArithOp::Mod:
      if (b == 0) throw Error(ErrorCode::NonIntegerArithmetic, "modulo by zero");
      return Term::integer(floor_mod(a, b));
    default: break;
  }
  return Term::integer(0);
}

bool eval_formula(const Formula& f, const Valuation& valuation) {
  switch (f.kind) {
    case FormulaKind::True: return true;
    case FormulaKind::False: return false;
    case FormulaKind::Atom: {
      const Term& t = f.terms[0];
      if (t.kind != TermKind::Symbol)
        throw Error(ErrorCode::NonIntegerArithmetic, "'" + to_string(t) + "' is not a formula");
      std::vector<Term> args;
      for (const auto& a : t.args) args.push_back(eval_term(a, valuation));
      auto key = to_string(Term::symbol(t.name, std::move(args)));
      auto it = valuation.find(key);
      if (it == valuation.end())
        throw Error(ErrorCode::UnassignedConstant, "constant '" + key + "' has no value");
      return it->second.kind == TermKind::Symbol && it->second.name == "true";
    }
    case FormulaKind::Compare: {
      Term a = eval_term(f.terms[0], valuation);
      Term b = eval_term(f.terms[1], valuation);
      switch (f.cmp) {
        case CompareOp::Eq: return a == b;
        case CompareOp::Ne: return !(a == b);
        case CompareOp::Lt: return as_int(a) < as_int(b);
        case CompareOp::Gt: return as_int(a) > as_int(b);
        case CompareOp::Le: return as_int(a) <= as_int(b);
        case CompareOp::Ge: return as_int(a) >= as_int(b);
      }
      return false;
    }
    case FormulaKind::Not: return !eval_formula(f.children[0], valuation);
    case FormulaKind::And:
      for (const auto& c : f.children)
        if (!eval_formula(c, valuation)) return false;
      return true;
    case FormulaKind::Or:
      for (const auto& c : f.children)
        if (eval_formula(c, valuation)) return true;
      return false;
    case FormulaKind::Implies:
      return !eval_formula(f.children[0], valuation) || eval_formula(f.children[1], valuation);
  }
  return false;
}

namespace {
bool mentions_constant(const Term& t, const std::vector<std::string>& names) {
  if (t.kind == TermKind::Symbol &&
      std::find(names.begin(), names.end(), t.name) != names.end())
    return true;
  for (const auto& a : t.args)
    if (mentions_constant(a, names)) return true;
  return false;
}

void nested_in_term(const Term& t, const std::vector<std::string>& names,
                    std::vector<const Term*>& out) {
  if (t.kind == TermKind::Symbol &&
      std::find(names.begin(), names.end(), t.name) != names.end()) {
    for (const auto& a : t.args)
      if (mentions_constant(a, names)) {
        out.push_back(&t);
        return;
      }
  }
  for (const auto& a : t.args) nested_in_term(a, names, out);
}
}  // namespace

std::vector<const Term*> nested_constant_violations(const Formula& f,
                                                    const std::vector<std::string>& names) {
  std::vector<const Term*> terms, out;
  collect_terms(f, terms);
  for (const Term* t : terms) nested_in_term(*t, names, out);
  return out;
}

}  // namespace bcplus
