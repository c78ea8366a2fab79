#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "bcplus/normalize.hpp"

namespace bcplus {

const char* basic_form_name(BasicForm f) {
  switch (f) {
    case BasicForm::Static: return "static";
    case BasicForm::ActionDynamic: return "actionDynamic";
    case BasicForm::FluentDynamic: return "fluentDynamic";
    case BasicForm::Default: return "default";
    case BasicForm::Contribution: return "contribution";
  }
  return "law";
}

std::string to_string(const BasicLaw& b) {
  std::ostringstream os;
  os << basic_form_name(b.form) << "(";
  switch (b.form) {
    case BasicForm::Static:
    case BasicForm::ActionDynamic:
      os << to_string(b.head) << ", " << to_string(b.condition);
      break;
    case BasicForm::FluentDynamic:
      os << to_string(b.head) << ", " << to_string(b.condition) << ", "
         << (b.after ? to_string(*b.after) : "true");
      break;
    case BasicForm::Default:
      os << to_string(b.head) << ", " << to_string(b.condition);
      if (b.after) os << ", after " << to_string(*b.after);
      break;
    case BasicForm::Contribution:
      os << to_string(b.action) << ", " << to_display(b.target) << ", "
         << (b.sign < 0 ? "-" : "+") << to_display(b.amount) << ", " << to_string(b.condition);
      break;
  }
  os << ")";
  return os.str();
}

std::string unabbreviated(const BasicLaw& b) {
  switch (b.form) {
    case BasicForm::Static:
    case BasicForm::ActionDynamic:
      return to_string(b.head) + " if " + to_string(b.condition);
    case BasicForm::FluentDynamic:
      return to_string(b.head) + " if " + to_string(b.condition) + " after " +
             (b.after ? to_string(*b.after) : "true");
    case BasicForm::Default:
    case BasicForm::Contribution:
      break;
  }
  return to_string(to_causal_law(b));
}

namespace {

// "a & H" as written: nested conjunctions are spliced, a `true` operand is kept.
Formula literal_conj(const std::vector<Formula>& parts) {
  Formula f;
  f.kind = FormulaKind::And;
  for (const auto& p : parts) {
    if (p.kind == FormulaKind::And)
      f.children.insert(f.children.end(), p.children.begin(), p.children.end());
    else
      f.children.push_back(p);
  }
  return f;
}

const ConstantDecl* constant_of(const Term& t, const Program& p) {
  if (t.kind != TermKind::Symbol) return nullptr;
  return p.find_constant(t.name);
}

void head_constants(const Formula& f, const Program& p, std::vector<const ConstantDecl*>& out) {
  switch (f.kind) {
    case FormulaKind::Atom:
      if (auto c = constant_of(f.terms[0], p)) out.push_back(c);
      return;
    case FormulaKind::Compare:
      for (const auto& t : f.terms)
        if (auto c = constant_of(t, p)) out.push_back(c);
      return;
    default:
      for (const auto& c : f.children) head_constants(c, p, out);
  }
}

std::string additive_target_message(const ConstantDecl& c) {
  return "the target of an increments/decrements law must be an additive constant "
         "(additiveFluent or additiveAction); '" + c.name + "' is declared " +
         (c.kind == ConstantKind::Unknown ? c.raw_kind : constant_kind_name(c.kind));
}

std::string additive_head_message(const ConstantDecl& c) {
  return "'" + c.name + "' is an additive constant; only increments/decrements laws may change "
         "it, so it must not appear in the head of any other law";
}

}  // namespace

bool mentions_action(const Term& t, const Program& p) {
  if (auto c = constant_of(t, p); c && c->is_action()) return true;
  return std::any_of(t.args.begin(), t.args.end(),
                     [&](const Term& a) { return mentions_action(a, p); });
}

bool mentions_action(const Formula& f, const Program& p) {
  for (const auto& t : f.terms)
    if (mentions_action(t, p)) return true;
  for (const auto& c : f.children)
    if (mentions_action(c, p)) return true;
  return false;
}

std::vector<BasicLaw> expand_shorthand(const CausalLaw& law, const Program& p) {
  std::vector<BasicLaw> out;
  BasicLaw b;
  auto check_head = [&](const Formula& head) {
    std::vector<const ConstantDecl*> cs;
    head_constants(head, p, cs);
    for (auto c : cs)
      if (c->is_additive()) throw Error(ErrorCode::AdditiveHeadMisuse, additive_head_message(*c));
  };
  switch (law.kind) {
    case LawKind::Static:
    case LawKind::ActionDynamic: {
      check_head(law.head);
      bool action = mentions_action(law.head, p) ||
                    ((law.head.is_true() || law.head.is_false()) && mentions_action(law.condition, p));
      b.form = (law.kind == LawKind::ActionDynamic || action) ? BasicForm::ActionDynamic
                                                              : BasicForm::Static;
      b.head = law.head;
      b.condition = law.condition;
      break;
    }
    case LawKind::FluentDynamic:
      check_head(law.head);
      b.form = BasicForm::FluentDynamic;
      b.head = law.head;
      b.condition = law.condition;
      b.after = law.after ? *law.after : Formula::truth(true);
      break;
    case LawKind::Causes:
      check_head(law.head);
      b.form = BasicForm::FluentDynamic;
      b.head = law.head;
      b.condition = Formula::truth(true);
      b.after = literal_conj({law.action, law.condition});
      break;
    case LawKind::Impossible:
      if (mentions_action(law.condition, p))
        throw Error(ErrorCode::ImpossibleContainsAction,
                    "'impossible F' requires F to be a fluent formula; it mentions an action or "
                    "attribute: " + to_string(law.condition));
      b.form = BasicForm::Static;
      b.head = Formula::truth(false);
      b.condition = law.condition;
      break;
    case LawKind::Nonexecutable: {
      b.form = BasicForm::FluentDynamic;
      b.head = Formula::truth(false);
      b.condition = Formula::truth(true);
      b.after = literal_conj({law.action, law.condition});
      break;
    }
    case LawKind::Always:
      b.form = BasicForm::FluentDynamic;
      b.head = Formula::truth(false);
      b.condition = Formula::truth(true);
      b.after = Formula::negation(law.condition);
      break;
    case LawKind::Default:
      check_head(law.head);
      b.form = BasicForm::Default;
      b.head = law.head;
      b.condition = law.condition;
      b.after = law.after;
      break;
    case LawKind::Increments:
    case LawKind::Decrements: {
      auto c = constant_of(law.target, p);
      if (!c || !c->is_additive()) {
        ConstantDecl fake;
        fake.name = to_string(law.target);
        fake.kind = ConstantKind::Unknown;
        fake.raw_kind = "a non-constant";
        throw Error(ErrorCode::AdditiveHeadMisuse, additive_target_message(c ? *c : fake));
      }
      b.form = BasicForm::Contribution;
      b.action = law.action;
      b.target = law.target;
      b.amount = law.amount;
      b.sign = law.kind == LawKind::Increments ? 1 : -1;
      b.condition = law.condition;
      break;
    }
  }
  out.push_back(std::move(b));
  return out;
}

CausalLaw to_causal_law(const BasicLaw& b) {
  CausalLaw l;
  l.head = b.head;
  l.condition = b.condition;
  switch (b.form) {
    case BasicForm::Static: l.kind = LawKind::Static; break;
    case BasicForm::ActionDynamic: l.kind = LawKind::ActionDynamic; break;
    case BasicForm::FluentDynamic:
      l.kind = LawKind::FluentDynamic;
      l.after = b.after ? *b.after : Formula::truth(true);
      break;
    case BasicForm::Default:
      l.kind = LawKind::Default;
      l.after = b.after;
      break;
    case BasicForm::Contribution:
      l.kind = b.sign < 0 ? LawKind::Decrements : LawKind::Increments;
      l.head = Formula{};
      l.action = b.action;
      l.target = b.target;
      l.amount = b.amount;
      break;
  }
  return l;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class Validator {
 public:
  explicit Validator(const Program& p) : p_(p) {}

  std::vector<Diagnostic> run() {
    declarations();
    for (const auto& l : p_.laws) law(l);
    for (const auto& q : p_.queries) query(q);
    return std::move(diags_);
  }

 private:
  const Program& p_;
  std::vector<Diagnostic> diags_;
  std::set<std::string> sorts_;
  std::map<std::string, std::string> vars_;
  std::map<std::string, std::set<std::string>> domain_keys_;
  std::set<std::string> objects_;

  void error(SourceLoc loc, std::string msg) {
    diags_.push_back({Severity::Error, std::move(msg), loc.line, loc.column});
  }
  void warning(SourceLoc loc, std::string msg) {
    diags_.push_back({Severity::Warning, std::move(msg), loc.line, loc.column});
  }

  bool sort_known(const std::string& s) const { return s == "boolean" || sorts_.count(s); }

  const std::set<std::string>* domain_keys(const std::string& sort) {
    auto it = domain_keys_.find(sort);
    if (it != domain_keys_.end()) return &it->second;
    std::set<std::string> keys;
    try {
      for (const auto& t : sort_domain(p_.sorts, p_.objects, sort)) keys.insert(to_string(t));
    } catch (const Error&) {
      return nullptr;
    }
    return &domain_keys_.emplace(sort, std::move(keys)).first->second;
  }

  void declarations() {
    for (const auto& s : p_.sorts) {
      if (sorts_.count(s.name)) error(s.loc, "sort '" + s.name + "' declared twice");
      sorts_.insert(s.name);
    }
    for (const auto& s : p_.sorts)
      for (const auto& sup : s.supersorts)
        if (!sorts_.count(sup)) error(s.loc, "supersort '" + sup + "' is not declared");
    for (const auto& s : p_.sorts) {
      try {
        sort_domain(p_.sorts, p_.objects, s.name);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::CyclicSortHierarchy) {
          error(s.loc, e.what());
          break;
        }
      }
    }
    for (const auto& o : p_.objects) {
      if (!sorts_.count(o.sort)) {
        error(o.loc, "object '" + to_display(o.value) + "' belongs to undeclared sort '" + o.sort + "'");
        continue;
      }
      if (o.value.kind == TermKind::Range && o.value.args[0].value > o.value.args[1].value)
        error(o.loc, "empty range " + to_display(o.value));
      if (o.value.kind == TermKind::Symbol)
        for (const auto& a : o.value.args)
          if (a.kind == TermKind::Symbol && !sort_known(a.name))
            error(o.loc, "constructor argument '" + a.name + "' is not a declared sort");
    }
    for (const auto& s : p_.sorts)
      if (auto keys = domain_keys(s.name)) objects_.insert(keys->begin(), keys->end());
    objects_.insert("true");
    objects_.insert("false");

    for (const auto& v : p_.variables) {
      if (vars_.count(v.name)) error(v.loc, "variable '" + v.name + "' declared twice");
      if (!sort_known(v.sort))
        error(v.loc, "variable '" + v.name + "' has undeclared sort '" + v.sort + "'");
      vars_[v.name] = v.sort;
    }

    std::set<std::string> names;
    for (const auto& c : p_.constants) {
      if (names.count(c.name)) error(c.loc, "constant '" + c.name + "' declared twice");
      names.insert(c.name);
      for (const auto& a : c.arg_sorts)
        if (!sort_known(a))
          error(c.loc, "argument '" + a + "' of constant '" + c.name + "' is not a declared sort");
      if (c.kind == ConstantKind::Unknown) {
        error(c.loc, "unknown constant kind '" + c.raw_kind + "' for '" + c.name +
                         "'; expected inertialFluent, additiveFluent, exogenousAction, "
                         "attribute or additiveAction");
        continue;
      }
      if (!sort_known(c.value_sort)) {
        error(c.loc, "value sort '" + c.value_sort + "' of '" + c.name + "' is not declared");
      } else if (c.is_additive()) {
        bool numeric = true;
        try {
          for (const auto& t : sort_domain(p_.sorts, p_.objects, c.value_sort))
            numeric = numeric && t.kind == TermKind::Integer;
        } catch (const Error&) {
        }
        if (!numeric)
          error(c.loc, "additive constant '" + c.name + "' needs an integer value sort");
      }
      if (c.kind == ConstantKind::ExogenousAction && c.explicit_value_sort &&
          c.value_sort != "boolean")
        error(c.loc, "exogenous action '" + c.name + "' must be boolean");
      if (c.kind != ConstantKind::Attribute && !c.parent.empty())
        error(c.loc, "only attributes name a parent action with 'of'");
    }
    for (const auto& c : p_.constants) {
      if (c.kind != ConstantKind::Attribute) continue;
      if (c.parent.empty()) {
        error(c.loc, "attribute '" + c.name + "' must name its action with 'of'");
        continue;
      }
      const ConstantDecl* parent = p_.find_constant(c.parent);
      if (!parent) {
        error(c.loc, "attribute '" + c.name + "' refers to undeclared action '" + c.parent + "'");
        continue;
      }
      if (parent->kind != ConstantKind::ExogenousAction) {
        error(c.loc, "parent '" + c.parent + "' of attribute '" + c.name +
                         "' must be an exogenousAction");
        continue;
      }
      if (parent->arg_sorts.empty()) {
        error(c.loc, "attribute '" + c.name + "' is attached to '" + c.parent +
                         "', which has no arguments; give the action an argument and start the "
                         "attribute's arguments with it");
        continue;
      }
      if (c.parent_arg_sorts != parent->arg_sorts)
        error(c.loc, "attribute '" + c.name + "' names its parent as '" + c.parent + "(" +
                         join(c.parent_arg_sorts) + ")' but the action is declared as '" +
                         c.parent + "(" + join(parent->arg_sorts) + ")'");
      bool prefix = c.arg_sorts.size() >= parent->arg_sorts.size() &&
                    std::equal(parent->arg_sorts.begin(), parent->arg_sorts.end(),
                               c.arg_sorts.begin());
      if (!prefix)
        error(c.loc, "attribute '" + c.name + "' must take the arguments of '" + c.parent + "(" +
                         join(parent->arg_sorts) + ")' as its first arguments, in order");
    }
  }

  static std::string join(const std::vector<std::string>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", " : "") + xs[i];
    return out;
  }

  // ------------------------------------------------------------------ terms

  bool mentions_constant(const Term& t) const {
    if (constant_of(t, p_)) return true;
    return std::any_of(t.args.begin(), t.args.end(),
                       [&](const Term& a) { return mentions_constant(a); });
  }

  void term(const Term& t, SourceLoc loc, bool arith_operand) {
    switch (t.kind) {
      case TermKind::Integer: return;
      case TermKind::Range: error(loc, "a range is only allowed in object declarations"); return;
      case TermKind::Variable:
        if (!vars_.count(t.name)) error(loc, "undeclared variable '" + t.name + "'");
        return;
      case TermKind::Arith:
        for (const auto& a : t.args) term(a, loc, true);
        return;
      case TermKind::Symbol: break;
    }
    if (const ConstantDecl* c = constant_of(t, p_)) {
      if (t.args.size() != c->arg_sorts.size()) {
        error(loc, "constant '" + c->name + "' takes " + std::to_string(c->arg_sorts.size()) +
                       " argument(s), got " + std::to_string(t.args.size()));
        return;
      }
      if (arith_operand &&
          (c->kind == ConstantKind::Attribute || c->kind == ConstantKind::AdditiveAction))
        error(loc, std::string(c->kind == ConstantKind::Attribute ? "attribute" : "additive action") +
                       " '" + to_display(t) + "' cannot be an arithmetic operand; bind it to a "
                       "variable first (e.g. N = " + to_display(t) + ") and use the variable");
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        const Term& a = t.args[i];
        if (mentions_constant(a)) {
          error(loc, "constant '" + to_display(a) + "' appears as an argument of '" + c->name +
                         "'; introduce a variable (e.g. X = " + to_display(a) + ") instead");
          continue;
        }
        term(a, loc, false);
        if (a.kind == TermKind::Symbol && a.is_ground()) {
          auto keys = domain_keys(c->arg_sorts[i]);
          if (keys && objects_.count(to_string(a)) && !keys->count(to_string(a)))
            error(loc, "'" + to_display(a) + "' is not an object of sort '" + c->arg_sorts[i] +
                           "' (argument " + std::to_string(i + 1) + " of '" + c->name + "')");
        }
      }
      return;
    }
    for (const auto& a : t.args) term(a, loc, arith_operand);
    if (t.is_ground() && !objects_.count(to_string(t))) {
      if (t.args.empty())
        error(loc, "undeclared identifier '" + t.name + "'");
      else
        error(loc, "undeclared constant or object '" + to_display(t) + "'");
    } else if (arith_operand && t.args.empty()) {
      error(loc, "'" + t.name + "' is not an integer");
    }
  }

  void formula(const Formula& f) {
    switch (f.kind) {
      case FormulaKind::True:
      case FormulaKind::False: return;
      case FormulaKind::Atom: {
        const Term& t = f.terms[0];
        const ConstantDecl* c = constant_of(t, p_);
        if (!c) {
          if (t.kind == TermKind::Symbol && !objects_.count(to_string(t)) && t.is_ground())
            error(f.loc, "undeclared identifier '" + t.name + "'");
          else
            error(f.loc, "'" + to_display(t) + "' is not a boolean constant");
          return;
        }
        term(t, f.loc, false);
        if (c->value_sort != "boolean")
          error(f.loc, "'" + to_display(t) + "' is not boolean; compare it with a value of sort '" +
                           c->value_sort + "'");
        return;
      }
      case FormulaKind::Compare: {
        for (const auto& t : f.terms) term(t, f.loc, false);
        // a constant compared with an object outside its value sort
        for (int side = 0; side < 2; ++side) {
          const ConstantDecl* c = constant_of(f.terms[side], p_);
          const Term& other = f.terms[1 - side];
          if (!c || other.kind != TermKind::Symbol || !other.is_ground() ||
              constant_of(other, p_))
            continue;
          auto keys = domain_keys(c->value_sort);
          if (keys && objects_.count(to_string(other)) && !keys->count(to_string(other)))
            error(f.loc, "'" + to_display(other) + "' is not a value of '" + c->name + "' (sort '" +
                             c->value_sort + "')");
        }
        return;
      }
      default:
        for (const auto& c : f.children) formula(c);
    }
  }

  // Head of a definite law: conjunction of atoms c=v, c, ~c, or false.
  bool definite_head(const Formula& f) const {
    switch (f.kind) {
      case FormulaKind::True:
      case FormulaKind::False: return true;
      case FormulaKind::Atom: return constant_of(f.terms[0], p_) != nullptr;
      case FormulaKind::Not:
        return f.children[0].kind == FormulaKind::Atom &&
               constant_of(f.children[0].terms[0], p_) != nullptr;
      case FormulaKind::Compare: {
        if (f.cmp != CompareOp::Eq) return false;
        bool l = constant_of(f.terms[0], p_) != nullptr;
        bool r = constant_of(f.terms[1], p_) != nullptr;
        if (l == r) return false;
        return !mentions_constant(l ? f.terms[1] : f.terms[0]);
      }
      case FormulaKind::And:
        return std::all_of(f.children.begin(), f.children.end(),
                           [&](const Formula& c) { return definite_head(c); });
      default: return false;
    }
  }

  void head(const Formula& f, SourceLoc loc) {
    if (!definite_head(f)) {
      error(loc, "the head '" + to_string(f) + "' must be an atom c=v, c, ~c, false, or a "
                 "conjunction of such atoms");
      return;
    }
    std::vector<const ConstantDecl*> cs;
    head_constants(f, p_, cs);
    for (auto c : cs)
      if (c->is_additive()) error(loc, additive_head_message(*c));
  }

  void fluent_only(const Formula& f, SourceLoc loc, const char* what) {
    if (mentions_action(f, p_))
      error(loc, std::string(what) + " '" + to_string(f) +
                     "' must be a fluent formula (no actions or attributes)");
  }

  void law(const CausalLaw& l) {
    formula(l.head);
    formula(l.condition);
    if (l.after) formula(*l.after);
    formula(l.action);
    switch (l.kind) {
      case LawKind::Static:
      case LawKind::ActionDynamic: {
        head(l.head, l.loc);
        bool head_action = mentions_action(l.head, p_);
        if (head_action) {
          std::vector<const ConstantDecl*> cs;
          head_constants(l.head, p_, cs);
          for (auto c : cs)
            if (!c->is_action())
              error(l.loc, "the head of an action dynamic law may only mention actions; '" +
                               c->name + "' is a fluent");
        } else if (!l.head.is_false() && !l.head.is_true() && mentions_action(l.condition, p_)) {
          error(l.loc, "a static law cannot mention actions in its condition; use 'after' or "
                       "'causes'");
        }
        break;
      }
      case LawKind::FluentDynamic:
        head(l.head, l.loc);
        fluent_only(l.head, l.loc, "the head");
        fluent_only(l.condition, l.loc, "the if-part");
        break;
      case LawKind::Causes:
        head(l.head, l.loc);
        fluent_only(l.head, l.loc, "the effect");
        if (!mentions_action(l.action, p_))
          error(l.loc, "'" + to_string(l.action) + "' before 'causes' must mention an action");
        break;
      case LawKind::Impossible:
        if (mentions_action(l.condition, p_))
          error(l.loc, "'impossible F' requires F to be a fluent formula; use 'nonexecutable' "
                       "for conditions on actions");
        break;
      case LawKind::Nonexecutable: {
        std::vector<Formula> parts;
        if (l.action.kind == FormulaKind::And)
          parts = l.action.children;
        else
          parts.push_back(l.action);
        for (const auto& a : parts) {
          bool ok = (a.kind == FormulaKind::Atom || a.kind == FormulaKind::Compare) &&
                    mentions_action(a, p_);
          if (!ok)
            error(l.loc, "nonexecutable expects a conjunction of action atoms before 'if'; '" +
                             to_string(a) + "' is not one");
        }
        break;
      }
      case LawKind::Always:
        always_hazard(l);
        break;
      case LawKind::Default: {
        head(l.head, l.loc);
        std::vector<const ConstantDecl*> cs;
        head_constants(l.head, p_, cs);
        if (cs.size() != 1 || l.head.kind == FormulaKind::And)
          error(l.loc, "a default law needs exactly one atom c=v in its head");
        if (l.after) {
          fluent_only(l.head, l.loc, "the head");
          fluent_only(l.condition, l.loc, "the if-part");
        }
        break;
      }
      case LawKind::Increments:
      case LawKind::Decrements: {
        const ConstantDecl* c = constant_of(l.target, p_);
        term(l.target, l.loc, false);
        term(l.amount, l.loc, true);
        if (!c || !c->is_additive()) {
          ConstantDecl fake;
          fake.name = to_display(l.target);
          fake.kind = ConstantKind::Unknown;
          fake.raw_kind = "an object, not a constant";
          error(l.loc, additive_target_message(c ? *c : fake));
        }
        if (mentions_constant(l.amount))
          error(l.loc, "the amount '" + to_display(l.amount) +
                           "' must not mention constants; bind it to a variable in the if-part");
        if (!mentions_action(l.action, p_))
          error(l.loc, "'" + to_string(l.action) + "' before '" + law_kind_name(l.kind) +
                           "' must mention an action");
        break;
      }
    }
    for (const Formula* f : {&l.head, &l.condition, &l.action}) nested(*f, l.loc);
    if (l.after) nested(*l.after, l.loc);
  }

  void nested(const Formula&, SourceLoc) {
    // Reported by term() while checking constant arguments.
  }

  // `always B1 & B2 & cond` where Bi bind variables to constants reads the
  // bindings universally; the intended form is `always (B1 & B2) -> cond`.
  void always_hazard(const CausalLaw& l) {
    const Formula& f = l.condition;
    if (f.kind != FormulaKind::And) return;
    std::vector<std::string> bound;
    for (const auto& c : f.children) {
      if (c.kind != FormulaKind::Compare || c.cmp != CompareOp::Eq) continue;
      for (int side = 0; side < 2; ++side)
        if (c.terms[side].kind == TermKind::Variable && constant_of(c.terms[1 - side], p_))
          bound.push_back(c.terms[side].name);
    }
    if (bound.empty()) return;
    std::string names;
    for (std::size_t i = 0; i < bound.size(); ++i) names += (i ? ", " : "") + bound[i];
    warning(l.loc, "variables " + names + " in this 'always' law are universally quantified, so "
                   "the law demands every value at once; write it as an implication, "
                   "'always (bindings) -> condition'");
  }

  void query(const Query& q) {
    for (const auto& tf : q.items) {
      formula(tf.formula);
      if (tf.step && *tf.step < 0) error(tf.loc, "step index must be non-negative");
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate_program(const Program& p) {
  try {
    return Validator(p).run();
  } catch (const Error& e) {
    return {{Severity::Error, e.what(), 1, 1}};
  }
}

}  // namespace bcplus
