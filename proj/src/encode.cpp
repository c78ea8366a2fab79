#include <algorithm>
#include <map>
#include <set>

#include "bcplus/encode.hpp"

namespace bcplus {

Encoder::Encoder(GroundProgram& g, int horizon) : g_(g), k_(horizon) {
  if (horizon < 0) throw Error(ErrorCode::HorizonNegative, "horizon must be non-negative");
  vars_.resize(g_.instances.size());
  for (std::uint32_t i = 0; i < g_.instances.size(); ++i) {
    const auto& ci = g_.instances[i];
    int steps = ci.is_action() ? k_ : k_ + 1;
    for (int t = 0; t < steps; ++t) {
      FdVar v;
      if (ci.is_boolean()) {
        v.boolean = true;
        v.lits.push_back(fresh());
      } else {
        for (std::uint32_t d = 0; d < ci.domain_size(); ++d) v.lits.push_back(fresh());
        exactly_one(v.lits);
      }
      vars_[i].push_back(std::move(v));
    }
  }
  // attribute takes its rest value exactly when the parent action does not occur
  for (std::uint32_t i = 0; i < g_.instances.size(); ++i) {
    const auto& ci = g_.instances[i];
    if (ci.kind != ConstantKind::Attribute) continue;
    for (int t = 0; t < k_; ++t) {
      int none = atom(i, ci.none_index(), t);
      if (!ci.parent) {
        clause({none});
        continue;
      }
      int parent = atom(*ci.parent, 1, t);
      clause({none, parent});
      clause({-none, -parent});
    }
  }

  support_.assign(static_cast<std::size_t>(k_) + 1, {});
  for (auto& s : support_) {
    s.resize(g_.instances.size());
    for (std::uint32_t i = 0; i < g_.instances.size(); ++i)
      if (g_.instances[i].kind == ConstantKind::InertialFluent)
        s[i].resize(g_.instances[i].domain_size());
  }
  for (const auto& l : g_.laws) {
    switch (l.form) {
      case GroundForm::Static:
        for (int t = 0; t <= k_; ++t) encode_law(l, t);
        break;
      case GroundForm::ActionDynamic:
      case GroundForm::FluentDynamic:
        for (int t = 0; t < k_; ++t) encode_law(l, t);
        break;
    }
  }
  for (int t = 0; t < k_; ++t) {
    encode_completion(t);
    encode_additive(t);
  }
}

const Encoder::FdVar& Encoder::fd(std::uint32_t inst, int step) const {
  return vars_[inst][static_cast<std::size_t>(step)];
}

int Encoder::atom(std::uint32_t inst, std::uint32_t val, int step) const {
  const FdVar& v = fd(inst, step);
  if (v.boolean) return val == 1 ? v.lits[0] : -v.lits[0];
  return v.lits[val];
}

void Encoder::exactly_one(const std::vector<int>& lits) {
  clause(lits);
  if (lits.size() <= 8) {
    for (std::size_t a = 0; a < lits.size(); ++a)
      for (std::size_t b = a + 1; b < lits.size(); ++b) clause({-lits[a], -lits[b]});
    return;
  }
  // sequential (ladder) at-most-one
  std::vector<int> s;
  for (std::size_t i = 0; i + 1 < lits.size(); ++i) s.push_back(fresh());
  clause({-lits[0], s[0]});
  for (std::size_t i = 1; i + 1 < lits.size(); ++i) {
    clause({-lits[i], s[i]});
    clause({-s[i - 1], s[i]});
    clause({-lits[i], -s[i - 1]});
  }
  clause({-lits.back(), -s.back()});
}

int Encoder::constant_true() {
  if (!true_lit_) {
    true_lit_ = fresh();
    clause({true_lit_});
  }
  return true_lit_;
}

int Encoder::literal(const GFormula& f, int fstep, int astep) {
  switch (f.kind) {
    case GKind::True: return constant_true();
    case GKind::False: return -constant_true();
    case GKind::Atom: {
      bool action = g_.instances[f.inst].is_action();
      int step = action ? astep : fstep;
      if (action && (step < 0 || step >= k_)) return -constant_true();
      return atom(f.inst, f.val, step);
    }
    case GKind::Not: return -literal(f.kids[0], fstep, astep);
    case GKind::And:
    case GKind::Or: {
      std::vector<int> ks;
      for (const auto& k : f.kids) ks.push_back(literal(k, fstep, astep));
      int x = fresh();
      // And: x <-> all ks. Or is the dual with negated literals.
      int s = f.kind == GKind::And ? 1 : -1;
      std::vector<int> back{s * x};
      for (int k : ks) {
        clause({-s * x, s * k});
        back.push_back(-s * k);
      }
      clause(back);
      return x;
    }
  }
  return -constant_true();
}

bool Encoder::as_literals(const GFormula& f, int fstep, int astep, std::vector<int>& out) {
  switch (f.kind) {
    case GKind::True: return true;
    case GKind::Atom: out.push_back(literal(f, fstep, astep)); return true;
    case GKind::Not:
      if (f.kids[0].kind != GKind::Atom) return false;
      out.push_back(literal(f, fstep, astep));
      return true;
    case GKind::And:
      for (const auto& k : f.kids) out.push_back(literal(k, fstep, astep));
      return true;
    default: return false;
  }
}

// Static at t: everything at t. ActionDynamic at t: everything at t.
// FluentDynamic at t: head and condition at t+1, after at t.
void Encoder::encode_law(const GroundLaw& l, int t) {
  int hstep = l.form == GroundForm::FluentDynamic ? t + 1 : t;
  std::vector<int> body;
  if (!as_literals(l.condition, hstep, hstep, body)) body.push_back(literal(l.condition, hstep, hstep));
  if (l.form == GroundForm::FluentDynamic)
    if (!as_literals(l.after, t, t, body)) body.push_back(literal(l.after, t, t));

  bool supports_inertial = !l.head_false && hstep > 0 &&
                           std::any_of(l.head.begin(), l.head.end(), [&](const GAtom& a) {
                             return g_.instances[a.inst].kind == ConstantKind::InertialFluent;
                           });
  if (supports_inertial) {
    int b;
    if (body.empty()) {
      b = constant_true();
    } else if (body.size() == 1) {
      b = body[0];
    } else {
      b = fresh();
      std::vector<int> back{b};
      for (int x : body) {
        clause({-b, x});
        back.push_back(-x);
      }
      clause(back);
    }
    for (const auto& a : l.head)
      if (g_.instances[a.inst].kind == ConstantKind::InertialFluent)
        support_[static_cast<std::size_t>(hstep)][a.inst][a.val].push_back(b);
  }
  if (l.is_default) return;

  std::vector<int> neg;
  for (int x : body) neg.push_back(-x);
  if (l.head_false) {
    clause(neg);
    return;
  }
  for (const auto& a : l.head) {
    auto c = neg;
    int step = g_.instances[a.inst].is_action() ? t : hstep;
    c.push_back(atom(a.inst, a.val, step));
    clause(std::move(c));
  }
}

void Encoder::encode_completion(int t) {
  for (std::uint32_t i = 0; i < g_.instances.size(); ++i) {
    const auto& ci = g_.instances[i];
    if (ci.kind != ConstantKind::InertialFluent) continue;
    for (std::uint32_t v = 0; v < ci.domain_size(); ++v) {
      std::vector<int> c{-atom(i, v, t + 1), atom(i, v, t)};
      for (int s : support_[static_cast<std::size_t>(t) + 1][i][v]) c.push_back(s);
      clause(std::move(c));
    }
  }
}

namespace {

// Atoms a conjunction forces; two conjunctions forcing different values of
// one instance can never hold together.
void forced_atoms(const GFormula& f, const GroundProgram& g, std::vector<GAtom>& out) {
  switch (f.kind) {
    case GKind::Atom: out.push_back({f.inst, f.val}); break;
    case GKind::Not:
      if (f.kids[0].kind == GKind::Atom && g.instances[f.kids[0].inst].is_boolean())
        out.push_back({f.kids[0].inst, 1 - f.kids[0].val});
      break;
    case GKind::And:
      for (const auto& k : f.kids) forced_atoms(k, g, out);
      break;
    default: break;
  }
}

bool exclusive(const std::vector<GAtom>& x, const std::vector<GAtom>& y) {
  for (const auto& a : x)
    for (const auto& b : y)
      if (a.inst == b.inst && a.val != b.val) return true;
  return false;
}

}  // namespace

// Partial sums over groups of pairwise exclusive terms: s_0 = 0 and
// s_i = s_{i-1} + a_j when term j of group i fires, s_{i-1} when none does.
// Values of s_i are limited to those from which [lo, hi] is still reachable.
std::vector<std::pair<std::int64_t, int>> Encoder::sum_chain(const std::vector<Group>& groups,
                                                             std::int64_t lo, std::int64_t hi) {
  std::size_t n = groups.size();
  std::vector<std::int64_t> rest_min(n + 1, 0), rest_max(n + 1, 0);
  for (std::size_t i = n; i > 0; --i) {
    std::int64_t mn = 0, mx = 0;
    for (const auto& [f, a] : groups[i - 1]) {
      mn = std::min(mn, a);
      mx = std::max(mx, a);
    }
    rest_min[i - 1] = rest_min[i] + mn;
    rest_max[i - 1] = rest_max[i] + mx;
  }
  std::map<std::int64_t, int> prev{{0, constant_true()}};
  for (std::size_t i = 0; i < n; ++i) {
    const Group& grp = groups[i];
    std::map<std::int64_t, int> cur;
    auto viable = [&](std::int64_t w) { return w + rest_min[i + 1] <= hi && w + rest_max[i + 1] >= lo; };
    for (const auto& [w, _] : prev) {
      if (viable(w)) cur[w] = 0;
      for (const auto& [f, a] : grp)
        if (viable(w + a)) cur[w + a] = 0;
    }
    for (auto& [w, lit] : cur) lit = fresh();
    auto lit_at = [](const std::map<std::int64_t, int>& m, std::int64_t w) {
      auto it = m.find(w);
      return it == m.end() ? 0 : it->second;
    };
    for (const auto& [w, p] : prev) {
      std::vector<int> none{-p};
      for (const auto& [f, a] : grp) none.push_back(f);
      if (int s = lit_at(cur, w)) none.push_back(s);
      clause(none);
      for (const auto& [f, a] : grp) {
        std::vector<int> c{-p, -f};
        if (int s = lit_at(cur, w + a)) c.push_back(s);
        clause(c);
      }
    }
    for (const auto& [w, s] : cur) {
      std::vector<int> from{-s};
      std::vector<int> none{-s};
      for (const auto& [f, a] : grp) none.push_back(f);
      if (int p = lit_at(prev, w)) {
        from.push_back(p);
        none.push_back(p);
      }
      clause(none);
      for (const auto& [f, a] : grp) {
        std::vector<int> c{-s, -f};
        if (int p = lit_at(prev, w - a)) {
          c.push_back(p);
          if (std::find(from.begin(), from.end(), p) == from.end()) from.push_back(p);
        }
        clause(c);
      }
      clause(from);
    }
    prev = std::move(cur);
  }
  return {prev.begin(), prev.end()};
}

void Encoder::encode_additive(int t) {
  struct Term {
    std::vector<GAtom> forced;
    int lit;
    std::int64_t amount;
  };
  std::vector<std::vector<Term>> terms(g_.instances.size());
  for (const auto& c : g_.contributions) {
    if (c.amount == 0) continue;
    GFormula fire = GFormula::conj({c.action, c.condition});
    Term term{{}, literal(fire, t, t), c.amount};
    forced_atoms(fire, g_, term.forced);
    terms[c.target].push_back(std::move(term));
  }
  for (std::uint32_t i = 0; i < g_.instances.size(); ++i) {
    const auto& ci = g_.instances[i];
    if (!ci.is_additive()) continue;
    // greedy partition into groups of pairwise exclusive terms
    std::vector<Group> groups;
    std::vector<std::vector<const Term*>> members;
    for (const auto& term : terms[i]) {
      std::size_t j = 0;
      for (; j < groups.size(); ++j)
        if (std::all_of(members[j].begin(), members[j].end(),
                        [&](const Term* m) { return exclusive(m->forced, term.forced); }))
          break;
      if (j == groups.size()) {
        groups.emplace_back();
        members.emplace_back();
      }
      groups[j].push_back({term.lit, term.amount});
      members[j].push_back(&term);
    }
    std::int64_t dmin = INT64_MAX, dmax = INT64_MIN;
    for (ValueId v : ci.domain) {
      dmin = std::min(dmin, g_.values.int_value(v));
      dmax = std::max(dmax, g_.values.int_value(v));
    }
    std::map<std::int64_t, std::uint32_t> index;
    for (std::uint32_t d = 0; d < ci.domain.size(); ++d) index[g_.values.int_value(ci.domain[d])] = d;

    if (ci.kind == ConstantKind::AdditiveAction) {
      auto sums = sum_chain(groups, dmin, dmax);
      for (const auto& [w, s] : sums) {
        auto it = index.find(w);
        if (it == index.end())
          clause({-s});
        else
          clause({-s, atom(i, it->second, t)});
      }
      continue;
    }
    if (groups.empty()) {
      for (std::uint32_t d = 0; d < ci.domain.size(); ++d) clause({-atom(i, d, t), atom(i, d, t + 1)});
      continue;
    }
    auto sums = sum_chain(groups, dmin - dmax, dmax - dmin);
    for (const auto& [u, du] : index)
      for (const auto& [w, s] : sums) {
        auto it = index.find(u + w);
        if (it == index.end())
          clause({-atom(i, du, t), -s});
        else
          clause({-atom(i, du, t), -s, atom(i, it->second, t + 1)});
      }
  }
}

void Encoder::assert_formula(const GFormula& f, int step) {
  std::vector<int> lits;
  if (f.kind == GKind::And) {
    for (const auto& k : f.kids) clause({literal(k, step, step)});
    return;
  }
  clause({literal(f, step, step)});
}

void Encoder::assert_query(const Query& q) {
  for (const auto& item : q.items) {
    int step = item.step ? *item.step : k_;
    if (step > k_) {
      clause({-constant_true()});
      continue;
    }
    assert_formula(g_.ground_formula(item.formula), step);
  }
}

Trajectory Encoder::decode() const {
  Trajectory tr;
  auto value_of = [&](std::uint32_t i, int t) -> std::uint32_t {
    const FdVar& v = fd(i, t);
    if (v.boolean) return solver_.value(v.lits[0]) ? 1 : 0;
    for (std::uint32_t d = 0; d < v.lits.size(); ++d)
      if (solver_.value(v.lits[d])) return d;
    return 0;
  };
  for (int t = 0; t <= k_; ++t) {
    std::vector<std::uint32_t> s(g_.instances.size(), 0), a(g_.instances.size(), 0);
    for (std::uint32_t i = 0; i < g_.instances.size(); ++i) {
      if (g_.instances[i].is_fluent())
        s[i] = value_of(i, t);
      else if (t < k_)
        a[i] = value_of(i, t);
    }
    tr.states.push_back(std::move(s));
    if (t < k_) tr.actions.push_back(std::move(a));
  }
  return tr;
}

std::vector<int> Encoder::blocking_clause(const Trajectory& tr) const {
  std::vector<int> c;
  for (int t = 0; t <= k_; ++t)
    for (std::uint32_t i = 0; i < g_.instances.size(); ++i) {
      if (g_.instances[i].is_fluent())
        c.push_back(-atom(i, tr.states[static_cast<std::size_t>(t)][i], t));
      else if (t < k_)
        c.push_back(-atom(i, tr.actions[static_cast<std::size_t>(t)][i], t));
    }
  return c;
}

std::string Encoder::dimacs() const {
  std::vector<std::string> comments;
  comments.push_back("horizon " + std::to_string(k_));
  for (std::uint32_t i = 0; i < g_.instances.size(); ++i) {
    const auto& ci = g_.instances[i];
    for (std::size_t t = 0; t < vars_[i].size(); ++t) {
      const FdVar& v = vars_[i][t];
      if (v.boolean) {
        comments.push_back(std::to_string(v.lits[0]) + " " + ci.text + "@" + std::to_string(t));
        continue;
      }
      for (std::uint32_t d = 0; d < v.lits.size(); ++d)
        comments.push_back(std::to_string(v.lits[d]) + " " + g_.atom_text({i, d}) + "@" +
                           std::to_string(t));
    }
  }
  return to_dimacs(solver_.num_vars(), solver_.original_clauses(), comments);
}

}  // namespace bcplus
