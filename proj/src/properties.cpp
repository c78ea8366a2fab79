#include "bcplus/properties.hpp"

namespace bcplus {

namespace {

const std::vector<std::uint32_t>* actions_at(const Trajectory& t, int step) {
  if (step < 0 || step >= t.length()) return nullptr;
  return &t.actions[static_cast<std::size_t>(step)];
}

std::string at(int step) { return "step " + std::to_string(step) + ": "; }

bool head_holds(const GroundLaw& l, const std::vector<std::uint32_t>& s,
                const std::vector<std::uint32_t>* a, const GroundProgram& g) {
  if (l.head_false) return false;
  for (const auto& h : l.head)
    if (!holds(GFormula::atom(h.inst, h.val), s, a, g)) return false;
  return true;
}

}  // namespace

std::optional<std::string> check_constraints(const GroundProgram& g, const Trajectory& t) {
  int k = t.length();
  for (const auto& l : g.laws) {
    if (l.is_default) continue;
    int first = 0, last = l.form == GroundForm::Static ? k : k - 1;
    for (int step = first; step <= last; ++step) {
      const auto& s = t.states[static_cast<std::size_t>(step)];
      const auto* a = actions_at(t, step);
      bool body, head;
      if (l.form == GroundForm::FluentDynamic) {
        const auto& n = t.states[static_cast<std::size_t>(step) + 1];
        body = holds(l.after, s, a, g) && holds(l.condition, n, nullptr, g);
        head = head_holds(l, n, nullptr, g);
      } else {
        body = holds(l.condition, s, a, g);
        head = head_holds(l, s, a, g);
      }
      if (body && !head)
        return at(step) + "violates " + g.law_text(l) + (l.binding.empty() ? "" : " [" + l.binding + "]");
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_completion(const GroundProgram& g, const Trajectory& t) {
  int k = t.length();
  for (int step = 0; step < k; ++step) {
    const auto& s = t.states[static_cast<std::size_t>(step)];
    const auto& n = t.states[static_cast<std::size_t>(step) + 1];
    const auto& a = t.actions[static_cast<std::size_t>(step)];
    for (std::uint32_t i = 0; i < g.instances.size(); ++i) {
      const auto& ci = g.instances[i];
      if (ci.kind == ConstantKind::Attribute) {
        bool none = a[i] == ci.none_index();
        bool parent = ci.parent && a[*ci.parent] == 1;
        if (none == parent)
          return at(step) + ci.text + (parent ? " has no value although its action occurs"
                                              : " has a value although its action does not occur");
      }
      if (ci.kind != ConstantKind::InertialFluent || s[i] == n[i]) continue;
      bool supported = false;
      for (const auto& l : g.laws) {
        if (l.head_false) continue;
        bool mentions = false;
        for (const auto& h : l.head)
          if (h.inst == i && h.val == n[i]) mentions = true;
        if (!mentions) continue;
        if (l.form == GroundForm::Static)
          supported = holds(l.condition, n, nullptr, g);
        else if (l.form == GroundForm::FluentDynamic)
          supported = holds(l.after, s, &a, g) && holds(l.condition, n, nullptr, g);
        if (supported) break;
      }
      if (!supported)
        return at(step + 1) + ci.text + " changed to " + g.atom_text({i, n[i]}) +
               " without a law causing it";
    }
  }
  return std::nullopt;
}

std::optional<std::string> check_additive(const GroundProgram& g, const Trajectory& t) {
  int k = t.length();
  for (int step = 0; step < k; ++step) {
    const auto& s = t.states[static_cast<std::size_t>(step)];
    const auto& n = t.states[static_cast<std::size_t>(step) + 1];
    const auto& a = t.actions[static_cast<std::size_t>(step)];
    std::vector<std::int64_t> delta(g.instances.size(), 0);
    for (const auto& c : g.contributions)
      if (holds(c.action, s, &a, g) && holds(c.condition, s, &a, g)) delta[c.target] += c.amount;
    for (std::uint32_t i = 0; i < g.instances.size(); ++i) {
      const auto& ci = g.instances[i];
      auto value = [&](std::uint32_t v) { return g.values.int_value(ci.domain[v]); };
      if (ci.kind == ConstantKind::AdditiveFluent) {
        if (value(n[i]) != value(s[i]) + delta[i])
          return at(step) + ci.text + " goes from " + std::to_string(value(s[i])) + " to " +
                 std::to_string(value(n[i])) + " but the contributions add " + std::to_string(delta[i]);
      } else if (ci.kind == ConstantKind::AdditiveAction) {
        if (value(a[i]) != delta[i])
          return at(step) + ci.text + " is " + std::to_string(value(a[i])) +
                 " but the contributions add " + std::to_string(delta[i]);
      }
    }
  }
  return std::nullopt;
}

}  // namespace bcplus
