#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "bcplus/normalize.hpp"

namespace bcplus {

// ---------------------------------------------------------------------------
// Values

ValueId ValueTable::intern(const Term& ground) {
  std::string key = to_string(ground);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  auto id = static_cast<ValueId>(terms_.size());
  Term t = ground;
  t.loc = {};
  terms_.push_back(t);
  is_int_.push_back(t.kind == TermKind::Integer);
  ints_.push_back(t.kind == TermKind::Integer ? t.value : 0);
  index_.emplace(std::move(key), id);
  return id;
}

ValueId ValueTable::intern_int(std::int64_t v) { return intern(Term::integer(v)); }

std::string ValueTable::display(ValueId id) const {
  if (id == kNoneValue) return "none";
  return to_display(terms_[id]);
}

std::optional<ValueId> ValueTable::find(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------------------------
// Ground formulas

GFormula GFormula::truth(bool v) {
  GFormula f;
  f.kind = v ? GKind::True : GKind::False;
  return f;
}

GFormula GFormula::atom(std::uint32_t inst, std::uint32_t val) {
  GFormula f;
  f.kind = GKind::Atom;
  f.inst = inst;
  f.val = val;
  return f;
}

GFormula GFormula::negate(GFormula f) {
  if (f.kind == GKind::True) return truth(false);
  if (f.kind == GKind::False) return truth(true);
  if (f.kind == GKind::Not) return std::move(f.kids[0]);
  GFormula n;
  n.kind = GKind::Not;
  n.kids.push_back(std::move(f));
  return n;
}

namespace {
GFormula gnary(GKind kind, std::vector<GFormula> fs) {
  GKind unit = kind == GKind::And ? GKind::True : GKind::False;
  GKind zero = kind == GKind::And ? GKind::False : GKind::True;
  GFormula out;
  out.kind = kind;
  for (auto& f : fs) {
    if (f.kind == unit) continue;
    if (f.kind == zero) return GFormula::truth(zero == GKind::True);
    if (f.kind == kind)
      for (auto& k : f.kids) out.kids.push_back(std::move(k));
    else
      out.kids.push_back(std::move(f));
  }
  if (out.kids.empty()) return GFormula::truth(unit == GKind::True);
  if (out.kids.size() == 1) return std::move(out.kids[0]);
  return out;
}
}  // namespace

GFormula GFormula::conj(std::vector<GFormula> fs) { return gnary(GKind::And, std::move(fs)); }
GFormula GFormula::disj(std::vector<GFormula> fs) { return gnary(GKind::Or, std::move(fs)); }

// ---------------------------------------------------------------------------
// GroundProgram lookups and printing

std::optional<std::uint32_t> GroundProgram::find_instance(const std::string& key) const {
  auto it = instance_by_key.find(key);
  if (it == instance_by_key.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> GroundProgram::find_instance(std::size_t decl,
                                                          const std::vector<ValueId>& args) const {
  auto it = instance_index.find({decl, args});
  if (it == instance_index.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> GroundProgram::value_index(std::uint32_t inst, ValueId v) const {
  const auto& d = instances[inst].domain;
  auto it = std::find(d.begin(), d.end(), v);
  if (it == d.end()) return std::nullopt;
  return static_cast<std::uint32_t>(it - d.begin());
}

std::string GroundProgram::atom_text(const GAtom& a) const {
  const auto& ci = instances[a.inst];
  if (ci.is_boolean()) return (a.val == 1 ? "" : "~") + ci.text;
  if (a.val >= ci.domain.size()) return ci.text + "=none";
  return ci.text + "=" + values.display(ci.domain[a.val]);
}

std::string to_string(const GFormula& f, const GroundProgram& g) {
  switch (f.kind) {
    case GKind::True: return "true";
    case GKind::False: return "false";
    case GKind::Atom: return g.atom_text({f.inst, f.val});
    case GKind::Not: {
      std::string inner = to_string(f.kids[0], g);
      return f.kids[0].kind == GKind::Atom ? "~" + inner : "~(" + inner + ")";
    }
    case GKind::And:
    case GKind::Or: {
      std::string out;
      const char* sep = f.kind == GKind::And ? " & " : " | ";
      for (std::size_t i = 0; i < f.kids.size(); ++i) {
        if (i) out += sep;
        bool paren = f.kids[i].kind == GKind::And || f.kids[i].kind == GKind::Or;
        out += paren ? "(" + to_string(f.kids[i], g) + ")" : to_string(f.kids[i], g);
      }
      return out;
    }
  }
  return "?";
}

std::string GroundProgram::law_text(const GroundLaw& l) const {
  std::string head;
  if (l.head_false) {
    head = "false";
  } else {
    for (std::size_t i = 0; i < l.head.size(); ++i)
      head += (i ? " & " : "") + atom_text(l.head[i]);
  }
  std::string out;
  switch (l.form) {
    case GroundForm::Static: out = "[static] "; break;
    case GroundForm::ActionDynamic: out = "[action] "; break;
    case GroundForm::FluentDynamic: out = "[dynamic] "; break;
  }
  if (l.is_default) out += "default ";
  out += head;
  if (!l.condition.is_true()) out += " if " + to_string(l.condition, *this);
  if (l.form == GroundForm::FluentDynamic) out += " after " + to_string(l.after, *this);
  return out;
}

std::string GroundProgram::source_law_text(std::size_t origin) const {
  if (origin >= source.laws.size()) return "";
  return to_string(source.laws[origin]);
}

std::string GroundProgram::dump() const {
  std::ostringstream os;
  os << "% instances\n";
  for (const auto& ci : instances) {
    os << ci.text << " :: " << constant_kind_name(ci.kind) << " {";
    for (std::size_t i = 0; i < ci.domain.size(); ++i)
      os << (i ? ", " : "") << values.display(ci.domain[i]);
    if (ci.has_none) os << (ci.domain.empty() ? "" : ", ") << "none";
    os << "}\n";
  }
  os << "% laws\n";
  for (const auto& l : laws) os << law_text(l) << "\n";
  os << "% contributions\n";
  for (const auto& c : contributions) {
    os << to_string(c.action, *this) << " adds " << c.amount << " to "
       << instances[c.target].text;
    if (!c.condition.is_true()) os << " if " << to_string(c.condition, *this);
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Grounder

namespace {

struct CTerm {
  enum Kind { Value, Var, Const, Ctor, Arith } kind = Value;
  ValueId value = 0;
  int var = -1;
  std::size_t decl = 0;
  std::string name;
  ArithOp op = ArithOp::Add;
  std::vector<CTerm> args;
  bool has_const = false;
};

struct CFormula {
  FormulaKind kind = FormulaKind::True;
  CompareOp cmp = CompareOp::Eq;
  std::vector<CTerm> terms;
  std::vector<CFormula> kids;
  bool has_const = false;
  std::vector<int> vars;  // variables mentioned (Compare pruners only)
};

using Env = std::vector<ValueId>;
using ConstAssign = std::vector<std::pair<std::uint32_t, ValueId>>;

class Grounder {
 public:
  Grounder(GroundProgram& g) : g_(g) {
    for (std::size_t i = 0; i < g_.source.constants.size(); ++i)
      decl_index_[g_.source.constants[i].name] = i;
  }

  std::vector<std::string> var_names;  // index -> name

  int var_index(const std::string& name) {
    auto it = std::find(var_names.begin(), var_names.end(), name);
    if (it != var_names.end()) return static_cast<int>(it - var_names.begin());
    var_names.push_back(name);
    return static_cast<int>(var_names.size() - 1);
  }

  CTerm compile(const Term& t) {
    CTerm c;
    switch (t.kind) {
      case TermKind::Integer:
        c.kind = CTerm::Value;
        c.value = g_.values.intern_int(t.value);
        return c;
      case TermKind::Range:
        throw Error(ErrorCode::NonIntegerArithmetic, "range used as a value");
      case TermKind::Variable:
        c.kind = CTerm::Var;
        c.var = var_index(t.name);
        return c;
      case TermKind::Arith:
        c.kind = CTerm::Arith;
        c.op = t.op;
        for (const auto& a : t.args) {
          c.args.push_back(compile(a));
          c.has_const = c.has_const || c.args.back().has_const;
        }
        return c;
      case TermKind::Symbol: break;
    }
    auto it = decl_index_.find(t.name);
    c.name = t.name;
    for (const auto& a : t.args) {
      c.args.push_back(compile(a));
      c.has_const = c.has_const || c.args.back().has_const;
    }
    if (it != decl_index_.end()) {
      c.kind = CTerm::Const;
      c.decl = it->second;
      c.has_const = true;
      return c;
    }
    if (t.is_ground() && t.args.empty()) {
      c.kind = CTerm::Value;
      c.value = g_.values.intern(t);
      return c;
    }
    c.kind = CTerm::Ctor;
    return c;
  }

  CFormula compile(const Formula& f) {
    CFormula c;
    c.kind = f.kind;
    c.cmp = f.cmp;
    for (const auto& t : f.terms) {
      c.terms.push_back(compile(t));
      c.has_const = c.has_const || c.terms.back().has_const;
    }
    for (const auto& k : f.children) {
      c.kids.push_back(compile(k));
      c.has_const = c.has_const || c.kids.back().has_const;
    }
    if (f.kind == FormulaKind::Compare) {
      std::vector<std::string> vs;
      collect_variables(f, vs);
      for (const auto& v : vs) c.vars.push_back(var_index(v));
    }
    return c;
  }

  // -------------------------------------------------------------- evaluation

  std::int64_t as_int(ValueId v) const {
    if (v == kNoneValue || !g_.values.is_int(v))
      throw Error(ErrorCode::NonIntegerArithmetic,
                  "arithmetic on non-integer value '" + g_.values.display(v) + "'");
    return g_.values.int_value(v);
  }

  // nullopt: a constant instance that does not exist (argument outside its sort)
  std::optional<std::uint32_t> instance_of(const CTerm& t, const Env& env) {
    std::vector<ValueId> args;
    for (const auto& a : t.args) args.push_back(value(a, env, nullptr));
    return g_.find_instance(t.decl, args);
  }

  ValueId value(const CTerm& t, const Env& env, const ConstAssign* ca) {
    switch (t.kind) {
      case CTerm::Value: return t.value;
      case CTerm::Var: return env[t.var];
      case CTerm::Const: {
        auto inst = instance_of(t, env);
        if (ca && inst)
          for (const auto& [i, v] : *ca)
            if (i == *inst) return v;
        throw Error(ErrorCode::UnassignedConstant, "constant '" + t.name + "' has no value here");
      }
      case CTerm::Ctor: {
        std::vector<Term> args;
        for (const auto& a : t.args) args.push_back(g_.values.term(value(a, env, ca)));
        return g_.values.intern(Term::symbol(t.name, std::move(args)));
      }
      case CTerm::Arith: break;
    }
    std::int64_t a = as_int(value(t.args[0], env, ca));
    std::int64_t r = 0;
    if (t.op == ArithOp::Neg) {
      r = -a;
    } else if (t.op == ArithOp::Abs) {
      r = a < 0 ? -a : a;
    } else {
      std::int64_t b = as_int(value(t.args[1], env, ca));
      switch (t.op) {
        case ArithOp::Add: r = a + b; break;
        case ArithOp::Sub: r = a - b; break;
        case ArithOp::Mul: r = a * b; break;
        case ArithOp::Div:
          if (b == 0) throw Error(ErrorCode::NonIntegerArithmetic, "division by zero");
          r = floor_div(a, b);
          break;
        case ArithOp::Mod:
          if (b == 0) throw Error(ErrorCode::NonIntegerArithmetic, "modulo by zero");
          r = floor_mod(a, b);
          break;
        default: break;
      }
    }
    return g_.values.intern_int(r);
  }

  bool compare(CompareOp op, ValueId a, ValueId b) const {
    switch (op) {
      case CompareOp::Eq: return a == b;
      case CompareOp::Ne: return a != b;
      case CompareOp::Lt: return as_int(a) < as_int(b);
      case CompareOp::Gt: return as_int(a) > as_int(b);
      case CompareOp::Le: return as_int(a) <= as_int(b);
      case CompareOp::Ge: return as_int(a) >= as_int(b);
    }
    return false;
  }

  // Instances of all constants in t; false if one does not exist.
  bool collect_instances(const CTerm& t, const Env& env, std::vector<std::uint32_t>& out) {
    if (t.kind == CTerm::Const) {
      auto inst = instance_of(t, env);
      if (!inst) return false;
      if (std::find(out.begin(), out.end(), *inst) == out.end()) out.push_back(*inst);
      return true;
    }
    for (const auto& a : t.args)
      if (!collect_instances(a, env, out)) return false;
    return true;
  }

  GFormula ground(const CFormula& f, const Env& env) {
    switch (f.kind) {
      case FormulaKind::True: return GFormula::truth(true);
      case FormulaKind::False: return GFormula::truth(false);
      case FormulaKind::Atom: {
        const CTerm& t = f.terms[0];
        if (t.kind != CTerm::Const) return GFormula::truth(false);
        auto inst = instance_of(t, env);
        if (!inst || !g_.instances[*inst].is_boolean()) return GFormula::truth(false);
        return GFormula::atom(*inst, 1);
      }
      case FormulaKind::Compare: return ground_compare(f, env);
      case FormulaKind::Not: return GFormula::negate(ground(f.kids[0], env));
      case FormulaKind::And:
      case FormulaKind::Or: {
        std::vector<GFormula> ks;
        for (const auto& k : f.kids) {
          ks.push_back(ground(k, env));
          // short-circuit
          if (f.kind == FormulaKind::And && ks.back().is_false()) return GFormula::truth(false);
          if (f.kind == FormulaKind::Or && ks.back().is_true()) return GFormula::truth(true);
        }
        return f.kind == FormulaKind::And ? GFormula::conj(std::move(ks))
                                          : GFormula::disj(std::move(ks));
      }
      case FormulaKind::Implies: {
        auto a = ground(f.kids[0], env);
        if (a.is_false()) return GFormula::truth(true);
        return GFormula::disj({GFormula::negate(std::move(a)), ground(f.kids[1], env)});
      }
    }
    return GFormula::truth(false);
  }

  GFormula ground_compare(const CFormula& f, const Env& env) {
    const CTerm& l = f.terms[0];
    const CTerm& r = f.terms[1];
    if (!f.has_const) return GFormula::truth(compare(f.cmp, value(l, env, nullptr), value(r, env, nullptr)));
    bool eqne = f.cmp == CompareOp::Eq || f.cmp == CompareOp::Ne;
    for (int side = 0; side < 2 && eqne; ++side) {
      const CTerm& c = side ? r : l;
      const CTerm& o = side ? l : r;
      if (c.kind != CTerm::Const || o.has_const) continue;
      auto inst = instance_of(c, env);
      bool eq = f.cmp == CompareOp::Eq;
      if (!inst) return GFormula::truth(!eq);
      auto idx = g_.value_index(*inst, value(o, env, nullptr));
      if (!idx) return GFormula::truth(!eq);
      auto a = GFormula::atom(*inst, *idx);
      return eq ? a : GFormula::negate(std::move(a));
    }
    // general case: enumerate the values of the constants involved
    std::vector<std::uint32_t> insts;
    if (!collect_instances(l, env, insts) || !collect_instances(r, env, insts))
      return GFormula::truth(f.cmp == CompareOp::Ne);
    std::size_t total = 1;
    for (auto i : insts) {
      total *= std::max<std::size_t>(1, g_.instances[i].domain.size());
      if (total > g_.options.expansion_cap)
        throw Error(ErrorCode::GroundingBudgetExceeded,
                    "comparison expands to more than " + std::to_string(g_.options.expansion_cap) +
                        " value combinations");
    }
    for (auto i : insts)
      if (g_.instances[i].domain.empty()) return GFormula::truth(false);
    std::vector<GFormula> out;
    std::vector<std::size_t> idx(insts.size(), 0);
    ConstAssign ca(insts.size());
    while (true) {
      for (std::size_t k = 0; k < insts.size(); ++k)
        ca[k] = {insts[k], g_.instances[insts[k]].domain[idx[k]]};
      bool holds = false;
      try {
        holds = compare(f.cmp, value(l, env, &ca), value(r, env, &ca));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NonIntegerArithmetic) throw;
      }
      if (holds) {
        std::vector<GFormula> conj;
        for (std::size_t k = 0; k < insts.size(); ++k)
          conj.push_back(GFormula::atom(insts[k], static_cast<std::uint32_t>(idx[k])));
        out.push_back(GFormula::conj(std::move(conj)));
      }
      std::size_t k = insts.size();
      bool done = true;
      while (k > 0) {
        --k;
        if (++idx[k] < g_.instances[insts[k]].domain.size()) {
          done = false;
          break;
        }
        idx[k] = 0;
      }
      if (done) break;
    }
    return GFormula::disj(std::move(out));
  }

  // Head formula to a list of atoms. nullopt: vacuous (true). Empty list with
  // head_false set: constraint.
  std::optional<std::vector<GAtom>> head_atoms(const GFormula& h, bool& head_false) {
    head_false = false;
    if (h.is_true()) return std::nullopt;
    if (h.is_false()) {
      head_false = true;
      return std::vector<GAtom>{};
    }
    std::vector<GAtom> out;
    auto one = [&](const GFormula& a) {
      if (a.kind == GKind::Atom) {
        out.push_back({a.inst, a.val});
        return;
      }
      if (a.kind == GKind::Not && a.kids[0].kind == GKind::Atom &&
          g_.instances[a.kids[0].inst].is_boolean()) {
        out.push_back({a.kids[0].inst, 1u - a.kids[0].val});
        return;
      }
      throw Error(ErrorCode::ValidationFailed, "head is not a conjunction of atoms: " +
                                                   to_string(a, g_));
    };
    if (h.kind == GKind::And)
      for (const auto& k : h.kids) one(k);
    else
      one(h);
    return out;
  }

  // ------------------------------------------------------------- enumeration

  struct Pruner {
    const CFormula* f;
    int level;
  };

  void top_conjuncts(const CFormula& f, std::vector<const CFormula*>& out) {
    if (f.kind == FormulaKind::And)
      for (const auto& k : f.kids) top_conjuncts(k, out);
    else
      out.push_back(&f);
  }

  // Calls leaf(env) for every assignment of vars (in order) that passes the
  // constant-free top-level comparisons of the given bodies.
  void enumerate(const std::vector<int>& order, const std::vector<const CFormula*>& bodies,
                 const std::function<void(const Env&)>& leaf) {
    std::vector<const CFormula*> conj;
    for (auto b : bodies) top_conjuncts(*b, conj);
    std::vector<std::vector<const CFormula*>> at(order.size() + 1);
    for (auto c : conj) {
      if (c->kind != FormulaKind::Compare || c->has_const) continue;
      int level = 0;
      for (int v : c->vars) {
        auto pos = std::find(order.begin(), order.end(), v) - order.begin();
        level = std::max<int>(level, static_cast<int>(pos) + 1);
      }
      at[level].push_back(c);
    }
    Env env(var_names.size(), 0);
    std::vector<const std::vector<ValueId>*> doms;
    for (int v : order) {
      auto sort_it = g_.variable_sorts.find(var_names[v]);
      if (sort_it == g_.variable_sorts.end())
        throw Error(ErrorCode::ValidationFailed, "undeclared variable '" + var_names[v] + "'");
      doms.push_back(&g_.domains.at(sort_it->second));
    }
    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
      for (auto c : at[depth]) {
        bool ok = false;
        try {
          ok = compare(c->cmp, value(c->terms[0], env, nullptr), value(c->terms[1], env, nullptr));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::NonIntegerArithmetic) throw;
        }
        if (!ok) {
          ++g_.stats.pruned;
          return;
        }
      }
      if (depth == order.size()) {
        if (++g_.stats.instances > g_.options.instance_cap)
          throw Error(ErrorCode::GroundingBudgetExceeded,
                      "grounding produced more than " + std::to_string(g_.options.instance_cap) +
                          " law instances");
        leaf(env);
        return;
      }
      for (ValueId v : *doms[depth]) {
        env[order[depth]] = v;
        rec(depth + 1);
      }
    };
    rec(0);
  }

  std::string binding(const std::vector<int>& order, const Env& env) const {
    std::string out;
    for (std::size_t i = 0; i < order.size(); ++i)
      out += (i ? ", " : "") + var_names[order[i]] + "=" + g_.values.display(env[order[i]]);
    return out;
  }

  void law(const BasicLaw& b) {
    var_names.clear();
    CFormula cond = compile(b.condition);
    CFormula after = compile(b.after ? *b.after : Formula::truth(true));
    CFormula action = compile(b.form == BasicForm::Contribution ? b.action : Formula::truth(true));
    CFormula head = compile(b.form == BasicForm::Contribution ? Formula::truth(true) : b.head);
    CTerm target, amount;
    if (b.form == BasicForm::Contribution) {
      target = compile(b.target);
      amount = compile(b.amount);
    }
    std::vector<int> order(var_names.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    enumerate(order, {&cond, &after, &action}, [&](const Env& env) {
      if (b.form == BasicForm::Contribution) {
        GFormula act = ground(action, env);
        if (act.is_false()) return;
        GFormula c = ground(cond, env);
        if (c.is_false()) return;
        auto inst = instance_of(target, env);
        if (!inst) return;
        GroundContribution gc;
        gc.action = std::move(act);
        gc.condition = std::move(c);
        gc.target = *inst;
        gc.amount = b.sign * as_int(value(amount, env, nullptr));
        gc.origin = b.origin;
        gc.binding = binding(order, env);
        g_.contributions.push_back(std::move(gc));
        return;
      }
      GroundLaw gl;
      gl.condition = ground(cond, env);
      if (gl.condition.is_false()) return;
      if (b.form == BasicForm::FluentDynamic || (b.form == BasicForm::Default && b.after)) {
        gl.after = ground(after, env);
        if (gl.after.is_false()) return;
      }
      bool head_false = false;
      auto atoms = head_atoms(ground(head, env), head_false);
      if (!atoms) return;
      gl.head = std::move(*atoms);
      gl.head_false = head_false;
      if (b.form == BasicForm::Default && head_false) return;  // nothing to support
      switch (b.form) {
        case BasicForm::Static: gl.form = GroundForm::Static; break;
        case BasicForm::ActionDynamic: gl.form = GroundForm::ActionDynamic; break;
        case BasicForm::FluentDynamic: gl.form = GroundForm::FluentDynamic; break;
        case BasicForm::Default: {
          gl.is_default = true;
          bool on_action = std::any_of(gl.head.begin(), gl.head.end(), [&](const GAtom& a) {
            return g_.instances[a.inst].is_action();
          });
          gl.form = b.after ? GroundForm::FluentDynamic
                            : (on_action ? GroundForm::ActionDynamic : GroundForm::Static);
          break;
        }
        default: break;
      }
      gl.origin = b.origin;
      gl.binding = binding(order, env);
      g_.laws.push_back(std::move(gl));
    });
  }

  GFormula universal(const Formula& f) {
    var_names.clear();
    CFormula c = compile(f);
    std::vector<int> order(var_names.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::vector<GFormula> parts;
    bool falsified = false;
    std::vector<const CFormula*> none;
    enumerate(order, none, [&](const Env& env) {
      if (falsified) return;
      auto gf = ground(c, env);
      if (gf.is_false()) falsified = true;
      parts.push_back(std::move(gf));
    });
    if (falsified) return GFormula::truth(false);
    return GFormula::conj(std::move(parts));
  }

 private:
  GroundProgram& g_;
  std::map<std::string, std::size_t> decl_index_;
};

void build_instances(GroundProgram& g) {
  const Program& p = g.source;
  auto domain_ids = [&](const std::string& sort) -> const std::vector<ValueId>& {
    auto it = g.domains.find(sort);
    if (it != g.domains.end()) return it->second;
    std::vector<ValueId> ids;
    for (const auto& t : sort_domain(p.sorts, p.objects, sort)) ids.push_back(g.values.intern(t));
    return g.domains.emplace(sort, std::move(ids)).first->second;
  };
  g.false_id_ = g.values.intern(Term::symbol("false"));
  g.true_id_ = g.values.intern(Term::symbol("true"));
  for (const auto& s : p.sorts) domain_ids(s.name);
  domain_ids("boolean");
  for (const auto& v : p.variables) {
    g.variable_sorts[v.name] = v.sort;
    domain_ids(v.sort);
  }

  for (std::size_t d = 0; d < p.constants.size(); ++d) {
    const ConstantDecl& c = p.constants[d];
    const auto& vdom = domain_ids(c.value_sort);
    if (vdom.empty())
      throw Error(ErrorCode::DomainEmpty,
                  "value sort '" + c.value_sort + "' of '" + c.name + "' has no objects");
    std::vector<const std::vector<ValueId>*> doms;
    bool empty = false;
    for (const auto& s : c.arg_sorts) {
      doms.push_back(&domain_ids(s));
      empty = empty || doms.back()->empty();
    }
    if (empty) continue;
    std::vector<std::size_t> idx(doms.size(), 0);
    while (true) {
      ConstantInstance ci;
      ci.decl = d;
      ci.name = c.name;
      ci.kind = c.kind;
      std::vector<Term> arg_terms;
      for (std::size_t i = 0; i < doms.size(); ++i) {
        ci.args.push_back((*doms[i])[idx[i]]);
        arg_terms.push_back(g.values.term(ci.args.back()));
      }
      Term t = Term::symbol(c.name, std::move(arg_terms));
      ci.text = to_display(t);
      ci.key = to_string(t);
      ci.domain = vdom;
      ci.has_none = c.kind == ConstantKind::Attribute;
      ci.boolean = !ci.has_none && vdom.size() == 2 && vdom[0] == g.false_id_ &&
                   vdom[1] == g.true_id_;
      auto id = static_cast<std::uint32_t>(g.instances.size());
      g.instance_index[{d, ci.args}] = id;
      g.instance_by_key[ci.key] = id;
      g.instances.push_back(std::move(ci));
      if (g.instances.size() > g.options.instance_cap)
        throw Error(ErrorCode::GroundingBudgetExceeded, "too many constant instances");
      std::size_t i = doms.size();
      bool done = true;
      while (i > 0) {
        --i;
        if (++idx[i] < doms[i]->size()) {
          done = false;
          break;
        }
        idx[i] = 0;
      }
      if (done) break;
    }
  }

  for (std::uint32_t i = 0; i < g.instances.size(); ++i) {
    auto& ci = g.instances[i];
    if (ci.kind == ConstantKind::Attribute) {
      const ConstantDecl& c = p.constants[ci.decl];
      const ConstantDecl* parent = p.find_constant(c.parent);
      std::size_t pd = static_cast<std::size_t>(parent - p.constants.data());
      std::vector<ValueId> pargs(ci.args.begin(), ci.args.begin() + parent->arg_sorts.size());
      ci.parent = g.find_instance(pd, pargs);
    }
    (ci.is_action() ? g.actions : g.fluents).push_back(i);
    switch (ci.kind) {
      case ConstantKind::InertialFluent: g.markers.push_back({MarkerKind::InertiaDefault, i}); break;
      case ConstantKind::ExogenousAction:
      case ConstantKind::Attribute: g.markers.push_back({MarkerKind::ExogenousChoice, i}); break;
      default: g.markers.push_back({MarkerKind::AdditiveAggregation, i}); break;
    }
  }
}

}  // namespace

GFormula GroundProgram::ground_formula(const Formula& f) {
  Grounder gr(*this);
  return gr.universal(f);
}

std::shared_ptr<GroundProgram> ground(const Program& p, const GroundOptions& opts) {
  auto diags = validate_program(p);
  if (has_errors(diags)) throw ValidationError(std::move(diags));
  auto g = std::make_shared<GroundProgram>();
  g->source = p;
  g->options = opts;
  for (std::size_t i = 0; i < p.laws.size(); ++i)
    for (auto& b : expand_shorthand(p.laws[i], p)) {
      b.origin = i;
      g->basic_laws.push_back(std::move(b));
    }
  build_instances(*g);
  Grounder gr(*g);
  for (const auto& b : g->basic_laws) gr.law(b);
  return g;
}

}  // namespace bcplus

namespace bcplus {

bool holds(const GFormula& f, const std::vector<std::uint32_t>& fluents,
           const std::vector<std::uint32_t>* actions, const GroundProgram& g) {
  switch (f.kind) {
    case GKind::True: return true;
    case GKind::False: return false;
    case GKind::Atom:
      if (g.instances[f.inst].is_action()) return actions && (*actions)[f.inst] == f.val;
      return fluents[f.inst] == f.val;
    case GKind::Not: return !holds(f.kids[0], fluents, actions, g);
    case GKind::And:
      for (const auto& k : f.kids)
        if (!holds(k, fluents, actions, g)) return false;
      return true;
    case GKind::Or:
      for (const auto& k : f.kids)
        if (holds(k, fluents, actions, g)) return true;
      return false;
  }
  return false;
}

}  // namespace bcplus
