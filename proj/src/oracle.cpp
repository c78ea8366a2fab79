#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>

#include "bcplus/oracle.hpp"

namespace bcplus {

std::string Violation::str() const {
  std::string out = "step " + std::to_string(step) + ": " + message;
  if (!law.empty()) out += "\n  law: " + law;
  if (!binding.empty()) out += "\n  binding: " + binding;
  return out;
}

namespace {

void fluents_of(const GFormula& f, const GroundProgram& g, std::set<std::uint32_t>& out) {
  if (f.kind == GKind::Atom) {
    if (g.instances[f.inst].is_fluent()) out.insert(f.inst);
    return;
  }
  for (const auto& k : f.kids) fluents_of(k, g, out);
}

bool head_holds(const GroundLaw& l, const std::vector<std::uint32_t>& s,
                const std::vector<std::uint32_t>* a, const GroundProgram& g) {
  if (l.head_false) return false;
  for (const auto& h : l.head) {
    bool action = g.instances[h.inst].is_action();
    std::uint32_t v = action ? (a ? (*a)[h.inst] : ~0u) : s[h.inst];
    if (v != h.val) return false;
  }
  return true;
}

// Conjunctions of atoms in a formula that must hold for it to be true.
void forced_atoms(const GFormula& f, std::vector<GAtom>& out) {
  if (f.kind == GKind::Atom) out.push_back({f.inst, f.val});
  if (f.kind == GKind::And)
    for (const auto& k : f.kids) forced_atoms(k, out);
}

}  // namespace

Oracle::Oracle(const GroundProgram& g, OracleOptions opts) : g_(g), opts_(opts) {
  position_.assign(g_.instances.size(), -1);
  for (std::size_t p = 0; p < g_.fluents.size(); ++p) {
    auto i = g_.fluents[p];
    position_[i] = static_cast<int>(p);
    (g_.instances[i].kind == ConstantKind::AdditiveFluent ? additive_ : inertial_).push_back(i);
  }
  static_at_.resize(g_.fluents.size() + 1);
  dynamic_at_.resize(g_.fluents.size() + 1);
  for (std::size_t li = 0; li < g_.laws.size(); ++li) {
    const auto& l = g_.laws[li];
    std::set<std::uint32_t> fl;
    fluents_of(l.condition, g_, fl);
    for (const auto& h : l.head)
      if (g_.instances[h.inst].is_fluent()) fl.insert(h.inst);
    int level = 0;
    for (auto f : fl) level = std::max(level, position_[f] + 1);
    switch (l.form) {
      case GroundForm::Static:
        static_laws_.push_back(li);
        if (!l.is_default) static_at_[static_cast<std::size_t>(level)].push_back(li);
        break;
      case GroundForm::FluentDynamic:
        dynamic_laws_.push_back(li);
        if (!l.is_default) dynamic_at_[static_cast<std::size_t>(level)].push_back(li);
        break;
      case GroundForm::ActionDynamic: action_laws_.push_back(li); break;
    }
  }
}

void Oracle::count() {
  if (++visited_ > opts_.state_cap)
    throw Error(ErrorCode::StateSpaceTooLarge,
                "explicit search visited more than " + std::to_string(opts_.state_cap) + " candidates");
}

std::vector<std::vector<std::uint32_t>> Oracle::states(const GFormula& filter) {
  std::vector<Vec> cands(g_.fluents.size());
  std::vector<GAtom> fixed;
  forced_atoms(filter, fixed);
  for (std::size_t p = 0; p < g_.fluents.size(); ++p) {
    auto i = g_.fluents[p];
    std::optional<std::uint32_t> only;
    for (const auto& a : fixed)
      if (a.inst == i) only = a.val;
    if (only) {
      cands[p] = {*only};
    } else {
      for (std::uint32_t v = 0; v < g_.instances[i].domain_size(); ++v) cands[p].push_back(v);
    }
  }
  std::vector<Vec> out;
  Vec s(g_.instances.size(), 0);
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    count();
    for (auto li : static_at_[depth]) {
      const auto& l = g_.laws[li];
      if (holds(l.condition, s, nullptr, g_) && !head_holds(l, s, nullptr, g_)) return;
    }
    if (depth == g_.fluents.size()) {
      if (holds(filter, s, nullptr, g_)) out.push_back(s);
      return;
    }
    for (auto v : cands[depth]) {
      s[g_.fluents[depth]] = v;
      rec(depth + 1);
    }
  };
  rec(0);
  return out;
}

bool Oracle::fill_additive_actions(const Vec& s, Vec& a) const {
  std::map<std::uint32_t, std::int64_t> sums;
  for (auto i : g_.actions)
    if (g_.instances[i].kind == ConstantKind::AdditiveAction) sums[i] = 0;
  if (sums.empty()) return true;
  for (const auto& c : g_.contributions)
    if (sums.count(c.target) && holds(c.action, s, &a, g_) && holds(c.condition, s, &a, g_))
      sums[c.target] += c.amount;
  for (auto [i, v] : sums) {
    auto id = g_.values.find(std::to_string(v));
    auto idx = id ? g_.value_index(i, *id) : std::nullopt;
    if (!idx) return false;
    a[i] = *idx;
  }
  return true;
}

std::vector<std::vector<std::uint32_t>> Oracle::action_vectors(const Vec& s) {
  std::vector<std::uint32_t> exo;
  std::map<std::uint32_t, std::vector<std::uint32_t>> attrs;  // parent -> attributes
  Vec base(g_.instances.size(), 0);
  for (auto i : g_.actions) {
    const auto& ci = g_.instances[i];
    if (ci.kind == ConstantKind::ExogenousAction) exo.push_back(i);
    if (ci.kind == ConstantKind::Attribute) {
      base[i] = ci.none_index();
      if (ci.parent) attrs[*ci.parent].push_back(i);
    }
  }
  std::vector<Vec> out;
  Vec a = base;
  // attributes of the chosen actions, as a product
  std::function<void(const std::vector<std::uint32_t>&, std::size_t)> attr_rec =
      [&](const std::vector<std::uint32_t>& list, std::size_t k) {
        if (k == list.size()) {
          Vec full = a;
          if (!fill_additive_actions(s, full)) return;
          for (auto li : action_laws_) {
            const auto& l = g_.laws[li];
            if (holds(l.condition, s, &full, g_) && !head_holds(l, s, &full, g_)) return;
          }
          out.push_back(std::move(full));
          return;
        }
        auto i = list[k];
        for (std::uint32_t v = 0; v < g_.instances[i].domain.size(); ++v) {
          a[i] = v;
          attr_rec(list, k + 1);
        }
        a[i] = g_.instances[i].none_index();
      };
  std::vector<std::uint32_t> chosen;
  std::function<void(std::size_t)> pick = [&](std::size_t from) {
    std::vector<std::uint32_t> list;
    for (auto e : chosen)
      for (auto at : attrs[e]) list.push_back(at);
    attr_rec(list, 0);
    if (static_cast<int>(chosen.size()) >= opts_.concurrency) return;
    for (std::size_t k = from; k < exo.size(); ++k) {
      chosen.push_back(exo[k]);
      a[exo[k]] = 1;
      pick(k + 1);
      a[exo[k]] = 0;
      chosen.pop_back();
    }
  };
  pick(0);
  return out;
}

std::vector<std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> Oracle::successors(
    const Vec& s) {
  std::vector<std::pair<Vec, Vec>> out;
  for (auto& a : action_vectors(s)) {
    count();
    Vec n(g_.instances.size(), 0);
    // additive fluents are determined by the contributions
    std::map<std::uint32_t, std::int64_t> sums;
    for (auto i : additive_) sums[i] = 0;
    for (const auto& c : g_.contributions)
      if (sums.count(c.target) && holds(c.action, s, &a, g_) && holds(c.condition, s, &a, g_))
        sums[c.target] += c.amount;
    std::vector<Vec> cands(g_.fluents.size());
    bool ok = true;
    for (auto i : additive_) {
      std::int64_t v = g_.values.int_value(g_.instances[i].domain[s[i]]) + sums[i];
      auto id = g_.values.find(std::to_string(v));
      auto idx = id ? g_.value_index(i, *id) : std::nullopt;
      if (!idx) {
        ok = false;
        break;
      }
      cands[static_cast<std::size_t>(position_[i])] = {*idx};
    }
    if (!ok) continue;
    std::vector<bool> active(g_.laws.size(), false);
    for (auto li : dynamic_laws_) active[li] = holds(g_.laws[li].after, s, &a, g_);
    // candidate values: inertia plus any head a law could supply
    for (auto i : inertial_) cands[static_cast<std::size_t>(position_[i])] = {s[i]};
    auto offer = [&](const GroundLaw& l) {
      if (l.head_false) return;
      for (const auto& h : l.head) {
        if (g_.instances[h.inst].kind != ConstantKind::InertialFluent) continue;
        auto& c = cands[static_cast<std::size_t>(position_[h.inst])];
        if (std::find(c.begin(), c.end(), h.val) == c.end()) c.push_back(h.val);
      }
    };
    for (auto li : static_laws_) offer(g_.laws[li]);
    for (auto li : dynamic_laws_)
      if (active[li]) offer(g_.laws[li]);

    Vec& next = n;
    std::function<void(std::size_t)> rec = [&](std::size_t depth) {
      for (auto li : static_at_[depth]) {
        const auto& l = g_.laws[li];
        if (holds(l.condition, next, nullptr, g_) && !head_holds(l, next, nullptr, g_)) return;
      }
      for (auto li : dynamic_at_[depth]) {
        if (!active[li]) continue;
        const auto& l = g_.laws[li];
        if (holds(l.condition, next, nullptr, g_) && !head_holds(l, next, nullptr, g_)) return;
      }
      if (depth == g_.fluents.size()) {
        // every changed inertial value needs a law supporting it
        for (auto i : inertial_) {
          if (next[i] == s[i]) continue;
          bool supported = false;
          for (auto li : static_laws_) {
            const auto& l = g_.laws[li];
            if (l.head_false || !holds(l.condition, next, nullptr, g_)) continue;
            for (const auto& h : l.head) supported = supported || (h.inst == i && h.val == next[i]);
            if (supported) break;
          }
          for (auto li : dynamic_laws_) {
            if (supported) break;
            const auto& l = g_.laws[li];
            if (!active[li] || l.head_false || !holds(l.condition, next, nullptr, g_)) continue;
            for (const auto& h : l.head) supported = supported || (h.inst == i && h.val == next[i]);
          }
          if (!supported) return;
        }
        out.emplace_back(a, next);
        return;
      }
      for (auto v : cands[depth]) {
        next[g_.fluents[depth]] = v;
        rec(depth + 1);
      }
    };
    rec(0);
  }
  return out;
}

BfsResult Oracle::shortest_plan(const GFormula& init, const GFormula& goal, int bound) {
  BfsResult res;
  auto key = [&](const Vec& s) {
    Vec k;
    for (auto i : g_.fluents) k.push_back(s[i]);
    return k;
  };
  struct Node {
    Vec state;
    long parent;
    Vec action;
    int depth;
  };
  std::vector<Node> nodes;
  std::map<Vec, long> seen;
  std::deque<long> queue;
  for (auto& s : states(init)) {
    auto k = key(s);
    if (seen.count(k)) continue;
    seen[k] = static_cast<long>(nodes.size());
    nodes.push_back({s, -1, {}, 0});
    queue.push_back(static_cast<long>(nodes.size() - 1));
  }
  bool cut = false;
  while (!queue.empty()) {
    long id = queue.front();
    queue.pop_front();
    if (holds(goal, nodes[static_cast<std::size_t>(id)].state, nullptr, g_)) {
      res.found = true;
      res.length = nodes[static_cast<std::size_t>(id)].depth;
      std::vector<long> chain;
      for (long c = id; c >= 0; c = nodes[static_cast<std::size_t>(c)].parent) chain.push_back(c);
      std::reverse(chain.begin(), chain.end());
      for (std::size_t k = 0; k < chain.size(); ++k) {
        const Node& nd = nodes[static_cast<std::size_t>(chain[k])];
        res.plan.states.push_back(nd.state);
        if (k > 0) res.plan.actions.push_back(nd.action);
      }
      res.states_seen = nodes.size();
      return res;
    }
    int depth = nodes[static_cast<std::size_t>(id)].depth;
    if (depth >= bound) {
      cut = true;
      continue;
    }
    Vec cur = nodes[static_cast<std::size_t>(id)].state;
    for (auto& [a, n] : successors(cur)) {
      auto k = key(n);
      if (seen.count(k)) continue;
      seen[k] = static_cast<long>(nodes.size());
      nodes.push_back({std::move(n), id, std::move(a), depth + 1});
      queue.push_back(static_cast<long>(nodes.size() - 1));
    }
  }
  res.states_seen = nodes.size();
  res.exhausted = !cut;
  return res;
}

// ---------------------------------------------------------------------------
// Plan validation

std::optional<Violation> Oracle::law_violation(const GroundLaw& l, int step,
                                               const std::string& what) const {
  Violation v;
  v.step = step;
  v.message = what + ": " + g_.law_text(l);
  v.law = g_.source_law_text(l.origin);
  v.binding = l.binding;
  return v;
}

std::optional<Violation> Oracle::check_state(const Vec& s, int step) const {
  for (auto i : g_.fluents)
    if (s[i] >= g_.instances[i].domain.size())
      return Violation{step, "value out of domain for " + g_.instances[i].text, "", ""};
  for (auto li : static_laws_) {
    const auto& l = g_.laws[li];
    if (l.is_default) continue;
    if (holds(l.condition, s, nullptr, g_) && !head_holds(l, s, nullptr, g_))
      return law_violation(l, step, "static law violated");
  }
  return std::nullopt;
}

std::optional<Violation> Oracle::check_transition(const Vec& s, const Vec& a, const Vec& n,
                                                  int step) const {
  for (auto i : g_.actions) {
    const auto& ci = g_.instances[i];
    if (a[i] >= ci.domain_size())
      return Violation{step, "value out of domain for " + ci.text, "", ""};
    if (ci.kind == ConstantKind::Attribute) {
      bool parent = ci.parent && a[*ci.parent] == 1;
      if (parent == (a[i] == ci.none_index()))
        return Violation{step, "attribute " + ci.text +
                                   (parent ? " has no value although its action occurs"
                                           : " has a value although its action does not occur"),
                         "", ""};
    }
  }
  int occurring = 0;
  for (auto i : g_.actions)
    if (g_.instances[i].kind == ConstantKind::ExogenousAction && a[i] == 1) ++occurring;
  if (occurring > opts_.concurrency)
    return Violation{step, std::to_string(occurring) + " actions occur together; the limit is " +
                               std::to_string(opts_.concurrency),
                     "", ""};
  Vec full = a;
  if (!fill_additive_actions(s, full) || full != a)
    return Violation{step, "additive action value differs from the sum of its contributions", "", ""};
  for (auto li : action_laws_) {
    const auto& l = g_.laws[li];
    if (l.is_default) continue;
    if (holds(l.condition, s, &a, g_) && !head_holds(l, s, &a, g_))
      return law_violation(l, step, "action law violated");
  }
  for (auto li : dynamic_laws_) {
    const auto& l = g_.laws[li];
    if (l.is_default) continue;
    if (holds(l.after, s, &a, g_) && holds(l.condition, n, nullptr, g_) && !head_holds(l, n, nullptr, g_))
      return law_violation(l, step, "dynamic law violated");
  }
  std::map<std::uint32_t, std::int64_t> sums;
  for (auto i : additive_) sums[i] = 0;
  std::map<std::uint32_t, const GroundContribution*> last;
  for (const auto& c : g_.contributions)
    if (sums.count(c.target) && holds(c.action, s, &a, g_) && holds(c.condition, s, &a, g_)) {
      sums[c.target] += c.amount;
      last[c.target] = &c;
    }
  for (auto i : additive_) {
    std::int64_t before = g_.values.int_value(g_.instances[i].domain[s[i]]);
    std::int64_t after = g_.values.int_value(g_.instances[i].domain[n[i]]);
    if (after != before + sums[i]) {
      Violation v{step, g_.instances[i].text + " goes from " + std::to_string(before) + " to " +
                            std::to_string(after) + " but its contributions add " +
                            std::to_string(sums[i]),
                  "", ""};
      if (last.count(i)) {
        v.law = g_.source_law_text(last[i]->origin);
        v.binding = last[i]->binding;
      }
      return v;
    }
  }
  for (auto i : inertial_) {
    if (n[i] == s[i]) continue;
    bool supported = false;
    for (auto li : static_laws_) {
      const auto& l = g_.laws[li];
      if (l.head_false || !holds(l.condition, n, nullptr, g_)) continue;
      for (const auto& h : l.head) supported = supported || (h.inst == i && h.val == n[i]);
    }
    for (auto li : dynamic_laws_) {
      const auto& l = g_.laws[li];
      if (l.head_false || !holds(l.after, s, &a, g_) || !holds(l.condition, n, nullptr, g_)) continue;
      for (const auto& h : l.head) supported = supported || (h.inst == i && h.val == n[i]);
    }
    if (!supported)
      return Violation{step, g_.instances[i].text + " changes from " +
                                 g_.atom_text({i, s[i]}) + " to " + g_.atom_text({i, n[i]}) +
                                 " with no law causing it",
                       "", ""};
  }
  return std::nullopt;
}

std::optional<Violation> Oracle::validate(const Trajectory& t) const {
  if (t.states.empty()) return Violation{0, "empty plan", "", ""};
  if (t.actions.size() + 1 != t.states.size())
    return Violation{0, "plan has " + std::to_string(t.states.size()) + " states but " +
                            std::to_string(t.actions.size()) + " action steps",
                     "", ""};
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    if (auto v = check_state(t.states[k], static_cast<int>(k))) return v;
    if (k + 1 < t.states.size())
      if (auto v = check_transition(t.states[k], t.actions[k], t.states[k + 1], static_cast<int>(k)))
        return v;
  }
  return std::nullopt;
}

std::optional<Violation> Oracle::validate(const Trajectory& t, const Query& q,
                                          GroundProgram& g) const {
  if (auto v = validate(t)) return v;
  int k = t.length();
  if (q.maxstep && *q.maxstep != k)
    return Violation{k, "plan length " + std::to_string(k) + " differs from maxstep " +
                            std::to_string(*q.maxstep),
                     "", ""};
  for (const auto& item : q.items) {
    int step = item.step ? *item.step : k;
    if (step > k)
      return Violation{step, "query refers to step " + std::to_string(step) + " beyond the plan", "", ""};
    GFormula f = g.ground_formula(item.formula);
    const Vec* a = step < k ? &t.actions[static_cast<std::size_t>(step)] : nullptr;
    if (!holds(f, t.states[static_cast<std::size_t>(step)], a, g))
      return Violation{step, "query condition does not hold: " + to_string(item.formula), "", ""};
  }
  return std::nullopt;
}

}  // namespace bcplus

namespace bcplus {

std::pair<GFormula, GFormula> query_endpoints(GroundProgram& g, const Query& q) {
  std::vector<GFormula> init, goal;
  for (const auto& item : q.items) {
    if (mentions_action(item.formula, g.source))
      throw Error(ErrorCode::ValidationFailed,
                  "explicit search handles fluent conditions only: " + to_string(item.formula));
    bool at_max = !item.step || (q.maxstep && *item.step == *q.maxstep);
    if (item.step && *item.step == 0 && !(q.maxstep && *q.maxstep == 0))
      init.push_back(g.ground_formula(item.formula));
    else if (at_max)
      goal.push_back(g.ground_formula(item.formula));
    else
      throw Error(ErrorCode::ValidationFailed,
                  "explicit search handles step 0 and maxstep conditions only");
  }
  return {GFormula::conj(std::move(init)), GFormula::conj(std::move(goal))};
}

}  // namespace bcplus
