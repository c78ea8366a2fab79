#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace bcplus {

struct SourceLoc {
  int line = 0;
  int column = 0;
  // Positions are metadata: two nodes parsed from differently laid out text
  // still compare equal.
  friend bool operator==(const SourceLoc&, const SourceLoc&) { return true; }
};

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  int line = 0;
  int column = 0;

  bool is_error() const { return severity == Severity::Error; }
  std::string str() const;
};

bool has_errors(const std::vector<Diagnostic>& diags);
std::string format_diagnostics(const std::vector<Diagnostic>& diags);

// ---------------------------------------------------------------------------
// Terms

enum class TermKind { Integer, Symbol, Variable, Range, Arith };
enum class ArithOp { Add, Sub, Mul, Div, Mod, Neg, Abs };

// Symbol covers objects, constants and constructor terms alike; which one a
// symbol denotes is decided against the declarations during normalization.
struct Term {
  TermKind kind = TermKind::Integer;
  std::int64_t value = 0;
  std::string name;
  ArithOp op = ArithOp::Add;
  std::vector<Term> args;
  SourceLoc loc;

  bool operator==(const Term&) const = default;

  static Term integer(std::int64_t v, SourceLoc loc = {});
  static Term symbol(std::string name, std::vector<Term> args = {}, SourceLoc loc = {});
  static Term variable(std::string name, SourceLoc loc = {});
  static Term range(std::int64_t lo, std::int64_t hi, SourceLoc loc = {});
  static Term arith(ArithOp op, std::vector<Term> operands, SourceLoc loc = {});

  bool is_ground() const;
};

// Canonical compact text, e.g. numOnBank(bank1,missionaries). Used as the key
// of valuations and for diagnostics.
std::string to_string(const Term& t);
// Display text with ", " between arguments as printed in plan listings.
std::string to_display(const Term& t);

// ---------------------------------------------------------------------------
// Formulas

enum class CompareOp { Eq, Ne, Lt, Gt, Le, Ge };
enum class FormulaKind { True, False, Atom, Compare, Not, And, Or, Implies };

struct Formula {
  FormulaKind kind = FormulaKind::True;
  CompareOp cmp = CompareOp::Eq;
  std::vector<Term> terms;         // Atom: 1, Compare: 2
  std::vector<Formula> children;   // Not: 1, Implies: 2, And/Or: >= 2
  SourceLoc loc;

  bool operator==(const Formula&) const = default;

  static Formula truth(bool v, SourceLoc loc = {});
  static Formula atom(Term t, SourceLoc loc = {});
  static Formula compare(CompareOp op, Term lhs, Term rhs, SourceLoc loc = {});
  static Formula negation(Formula f, SourceLoc loc = {});
  static Formula conj(std::vector<Formula> fs, SourceLoc loc = {});
  static Formula disj(std::vector<Formula> fs, SourceLoc loc = {});
  static Formula implies(Formula a, Formula b, SourceLoc loc = {});

  bool is_true() const { return kind == FormulaKind::True; }
  bool is_false() const { return kind == FormulaKind::False; }
};

std::string to_string(const Formula& f);
const char* compare_op_text(CompareOp op);

// Every term in the formula, depth first (atoms' and comparisons' operands).
void collect_terms(const Formula& f, std::vector<const Term*>& out);
// Variable names in order of first occurrence.
void collect_variables(const Term& t, std::vector<std::string>& out);
void collect_variables(const Formula& f, std::vector<std::string>& out);

// ---------------------------------------------------------------------------
// Declarations

struct SortDecl {
  std::string name;
  std::vector<std::string> supersorts;
  SourceLoc loc;
  bool operator==(const SortDecl&) const = default;
};

struct ObjectDecl {
  Term value;  // Symbol (possibly constructor over sort names), Integer or Range
  std::string sort;
  SourceLoc loc;
  bool operator==(const ObjectDecl&) const = default;
};

struct VariableDecl {
  std::string name;
  std::string sort;
  SourceLoc loc;
  bool operator==(const VariableDecl&) const = default;
};

enum class ConstantKind {
  InertialFluent,
  AdditiveFluent,
  ExogenousAction,
  Attribute,
  AdditiveAction,
  Unknown,
};

const char* constant_kind_name(ConstantKind k);

struct ConstantDecl {
  std::string name;
  std::vector<std::string> arg_sorts;
  ConstantKind kind = ConstantKind::InertialFluent;
  std::string value_sort = "boolean";
  bool explicit_value_sort = false;  // inertialFluent vs inertialFluent(boolean)
  std::string parent;                // attribute parent action
  std::vector<std::string> parent_arg_sorts;
  std::string raw_kind;              // spelling of an unrecognized kind
  SourceLoc loc;
  bool operator==(const ConstantDecl&) const = default;

  bool is_action() const {
    return kind == ConstantKind::ExogenousAction || kind == ConstantKind::Attribute ||
           kind == ConstantKind::AdditiveAction;
  }
  bool is_fluent() const {
    return kind == ConstantKind::InertialFluent || kind == ConstantKind::AdditiveFluent;
  }
  bool is_additive() const {
    return kind == ConstantKind::AdditiveFluent || kind == ConstantKind::AdditiveAction;
  }
};

// ---------------------------------------------------------------------------
// Causal laws

enum class LawKind {
  Static,         // F if G
  ActionDynamic,  // F if G, F mentions actions
  FluentDynamic,  // F if G after H
  Causes,         // a causes F if H
  Impossible,     // impossible F
  Nonexecutable,  // nonexecutable a1 & ... & ak if G
  Default,        // default c=v if F [after G]
  Always,         // always F
  Increments,     // a increments c by v if G
  Decrements,
};

const char* law_kind_name(LawKind k);

// Field usage by kind:
//   Static/ActionDynamic: head, condition
//   FluentDynamic:        head, condition, after
//   Causes:               action, head, condition
//   Impossible/Always:    condition
//   Nonexecutable:        action, condition
//   Default:              head, condition, after (optional)
//   Increments/Decr.:     action, target, amount, condition
struct CausalLaw {
  LawKind kind = LawKind::Static;
  Formula head;
  Formula condition;
  std::optional<Formula> after;
  Formula action;
  Term target;
  Term amount;
  SourceLoc loc;
  bool operator==(const CausalLaw&) const = default;
};

std::string to_string(const CausalLaw& law);

// ---------------------------------------------------------------------------
// Queries

struct TimedFormula {
  std::optional<int> step;  // nullopt = maxstep
  Formula formula;
  SourceLoc loc;
  bool operator==(const TimedFormula&) const = default;
};

struct Query {
  std::optional<std::string> label;
  std::optional<int> maxstep;
  std::vector<TimedFormula> items;
  SourceLoc loc;
  bool operator==(const Query&) const = default;
};

struct Program {
  std::vector<SortDecl> sorts;
  std::vector<ObjectDecl> objects;
  std::vector<VariableDecl> variables;
  std::vector<ConstantDecl> constants;
  std::vector<CausalLaw> laws;
  std::vector<Query> queries;
  bool operator==(const Program&) const = default;

  bool empty() const {
    return sorts.empty() && objects.empty() && variables.empty() && constants.empty() &&
           laws.empty() && queries.empty();
  }
  const ConstantDecl* find_constant(const std::string& name) const;
  const Query* find_query(const std::string& label) const;
};

// ---------------------------------------------------------------------------
// Operations

// Objects of `sort` and all its transitive subsorts: direct objects first,
// then each subsort's domain in sort declaration order, without duplicates.
// `boolean` is implicit when undeclared.
std::vector<Term> sort_domain(const std::vector<SortDecl>& sorts,
                              const std::vector<ObjectDecl>& objects, const std::string& sort);

// Valuation keys are canonical constant instance text (to_string of the term).
using Valuation = std::map<std::string, Term>;
bool eval_formula(const Formula& f, const Valuation& valuation);
// Ground integer/symbol evaluation of a constant-free term, or lookup of a
// constant instance in the valuation.
Term eval_term(const Term& t, const Valuation& valuation);

// floor semantics for // and mod
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t floor_mod(std::int64_t a, std::int64_t b);

// Terms of the form c(..., d(...), ...) where both c and d name constants.
std::vector<const Term*> nested_constant_violations(const Formula& f,
                                                    const std::vector<std::string>& constant_names);

}  // namespace bcplus
