#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "bcplus/ast.hpp"
#include "bcplus/error.hpp"

namespace bcplus {

// ---------------------------------------------------------------------------
// Expansion to basic forms

enum class BasicForm { Static, ActionDynamic, FluentDynamic, Default, Contribution };

const char* basic_form_name(BasicForm f);

struct BasicLaw {
  BasicForm form = BasicForm::Static;
  Formula head;       // Static/ActionDynamic/FluentDynamic/Default
  Formula condition;  // G (if-part); for Contribution the if-part as well
  std::optional<Formula> after;
  Formula action;     // Contribution only
  Term target;        // Contribution only
  Term amount;        // Contribution only
  int sign = 1;       // Contribution only: +1 increments, -1 decrements
  std::size_t origin = 0;
  bool operator==(const BasicLaw&) const = default;
};

std::string to_string(const BasicLaw& b);
// "H if G" / "H if G after A", with no abbreviation; contributions and
// defaults use their surface syntax.
std::string unabbreviated(const BasicLaw& b);

// Throws Error(AdditiveHeadMisuse / ImpossibleContainsAction).
std::vector<BasicLaw> expand_shorthand(const CausalLaw& law, const Program& p);
// Inverse of the identity part of expansion: a basic law written back as a
// causal law of the corresponding basic kind.
CausalLaw to_causal_law(const BasicLaw& b);

bool mentions_action(const Formula& f, const Program& p);
bool mentions_action(const Term& t, const Program& p);

std::vector<Diagnostic> validate_program(const Program& p);

// ---------------------------------------------------------------------------
// Ground representation

using ValueId = std::uint32_t;
constexpr ValueId kNoneValue = 0xffffffffu;

class ValueTable {
 public:
  ValueId intern(const Term& ground);
  ValueId intern_int(std::int64_t v);
  const Term& term(ValueId id) const { return terms_[id]; }
  bool is_int(ValueId id) const { return id != kNoneValue && is_int_[id]; }
  std::int64_t int_value(ValueId id) const { return ints_[id]; }
  std::string display(ValueId id) const;
  std::optional<ValueId> find(const std::string& key) const;
  std::size_t size() const { return terms_.size(); }

 private:
  std::vector<Term> terms_;
  std::vector<bool> is_int_;
  std::vector<std::int64_t> ints_;
  std::unordered_map<std::string, ValueId> index_;
};

struct ConstantInstance {
  std::size_t decl = 0;
  std::string name;
  std::vector<ValueId> args;
  ConstantKind kind = ConstantKind::InertialFluent;
  std::vector<ValueId> domain;  // real values; an attribute's rest value is index domain.size()
  bool has_none = false;
  bool boolean = false;  // domain is exactly [false, true]
  std::optional<std::uint32_t> parent;  // attribute -> parent action instance
  std::string text;                     // display form, e.g. numOnBank(bank1, missionaries)
  std::string key;                      // compact form, e.g. numOnBank(bank1,missionaries)

  bool is_action() const {
    return kind == ConstantKind::ExogenousAction || kind == ConstantKind::Attribute ||
           kind == ConstantKind::AdditiveAction;
  }
  bool is_fluent() const { return !is_action(); }
  bool is_additive() const {
    return kind == ConstantKind::AdditiveFluent || kind == ConstantKind::AdditiveAction;
  }
  std::uint32_t domain_size() const {
    return static_cast<std::uint32_t>(domain.size() + (has_none ? 1 : 0));
  }
  std::uint32_t none_index() const { return static_cast<std::uint32_t>(domain.size()); }
  bool is_boolean() const { return boolean; }
};

enum class GKind : std::uint8_t { True, False, Atom, Not, And, Or };

struct GFormula {
  GKind kind = GKind::True;
  std::uint32_t inst = 0;
  std::uint32_t val = 0;  // index into the instance's domain
  std::vector<GFormula> kids;

  static GFormula truth(bool v);
  static GFormula atom(std::uint32_t inst, std::uint32_t val);
  static GFormula negate(GFormula f);
  static GFormula conj(std::vector<GFormula> fs);
  static GFormula disj(std::vector<GFormula> fs);
  bool is_true() const { return kind == GKind::True; }
  bool is_false() const { return kind == GKind::False; }
};

struct GAtom {
  std::uint32_t inst = 0;
  std::uint32_t val = 0;
  bool operator==(const GAtom&) const = default;
};

enum class GroundForm { Static, ActionDynamic, FluentDynamic };

// Static: head/condition at step t. ActionDynamic: everything at t (t < k).
// FluentDynamic: head/condition at t+1, after at t.
struct GroundLaw {
  GroundForm form = GroundForm::Static;
  bool is_default = false;  // supports its head but never forces it
  bool head_false = false;
  std::vector<GAtom> head;
  GFormula condition;
  GFormula after;
  std::size_t origin = 0;
  std::string binding;  // e.g. "V=boat, G=missionaries"
};

// Fires at step t when action and condition both hold at t.
struct GroundContribution {
  GFormula action;
  GFormula condition;
  std::uint32_t target = 0;
  std::int64_t amount = 0;
  std::size_t origin = 0;
  std::string binding;
};

enum class MarkerKind { InertiaDefault, ExogenousChoice, AdditiveAggregation };

struct Marker {
  MarkerKind kind;
  std::uint32_t inst;
};

struct GroundOptions {
  std::size_t instance_cap = 2'000'000;
  std::size_t expansion_cap = 1'000'000;  // value tuples per comparison
};

struct GroundStats {
  std::size_t instances = 0;
  std::size_t pruned = 0;
};

class GroundProgram {
 public:
  Program source;
  std::vector<BasicLaw> basic_laws;
  ValueTable values;
  std::vector<ConstantInstance> instances;
  std::vector<std::uint32_t> fluents;  // instance ids
  std::vector<std::uint32_t> actions;
  std::vector<GroundLaw> laws;
  std::vector<GroundContribution> contributions;
  std::vector<Marker> markers;
  GroundStats stats;
  GroundOptions options;

  std::optional<std::uint32_t> find_instance(const std::string& key) const;
  std::optional<std::uint32_t> find_instance(std::size_t decl, const std::vector<ValueId>& args) const;
  std::optional<std::uint32_t> value_index(std::uint32_t inst, ValueId v) const;
  std::string atom_text(const GAtom& a) const;
  std::string law_text(const GroundLaw& l) const;
  std::string source_law_text(std::size_t origin) const;

  // Grounds an arbitrary formula over this program's signature. Free
  // variables are read universally (conjunction over all assignments).
  GFormula ground_formula(const Formula& f);

  // Line-oriented dump, one ground law per line.
  std::string dump() const;

  ValueId true_value() const { return true_id_; }
  ValueId false_value() const { return false_id_; }

  // internal
  std::map<std::string, std::vector<ValueId>> domains;
  std::map<std::string, std::string> variable_sorts;
  std::map<std::pair<std::size_t, std::vector<ValueId>>, std::uint32_t> instance_index;
  std::unordered_map<std::string, std::uint32_t> instance_by_key;
  ValueId true_id_ = 0;
  ValueId false_id_ = 0;
};

std::string to_string(const GFormula& f, const GroundProgram& g);

// Validates (throwing ValidationFailed with the diagnostics text on errors),
// expands and grounds.
std::shared_ptr<GroundProgram> ground(const Program& p, const GroundOptions& opts = {});

// A run of the transition system. states[t] and actions[t] are indexed by
// instance id and hold value indices; fluent entries of actions[t] and action
// entries of states[t] are unused.
struct Trajectory {
  std::vector<std::vector<std::uint32_t>> states;
  std::vector<std::vector<std::uint32_t>> actions;
  int length() const { return static_cast<int>(states.size()) - 1; }
  bool operator==(const Trajectory&) const = default;
};

// Truth of a ground formula given fluent values and (optionally) action
// values; action atoms are false when `actions` is null.
bool holds(const GFormula& f, const std::vector<std::uint32_t>& fluents,
           const std::vector<std::uint32_t>* actions, const GroundProgram& g);

class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diags)
      : Error(ErrorCode::ValidationFailed, format_diagnostics(diags)),
        diagnostics(std::move(diags)) {}
  std::vector<Diagnostic> diagnostics;
};

}  // namespace bcplus
