#include <algorithm>
#include <cmath>
#include <sstream>

#include "bcplus/error.hpp"
#include "bcplus/sat.hpp"

namespace bcplus {

// assigns_[v]: 0 = v true, 1 = v false, 2 = unassigned. A literal 2v+s is
// true iff assigns_[v] ^ s == 0.

int SatSolver::new_var() {
  assigns_.push_back(2);
  polarity_.push_back(1);  // first decision: false
  levels_.push_back(0);
  reasons_.push_back(-1);
  activity_.push_back(0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_pos_.push_back(-1);
  heap_insert(static_cast<std::uint32_t>(assigns_.size() - 1));
  return static_cast<int>(assigns_.size());
}

bool SatSolver::add_clause(std::vector<int> dimacs) {
  original_.push_back(dimacs);
  if (!ok_) return false;
  cancel_until(0);
  std::vector<Lit> lits;
  for (int d : dimacs) lits.push_back(mk(d));
  std::sort(lits.begin(), lits.end());
  std::vector<Lit> out;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    Lit l = lits[i];
    if (lit_value(l) == 0) return true;
    if (i && lits[i - 1] == neg(l)) return true;  // sorted: l and ~l adjacent
    if (lit_value(l) == 1) continue;
    if (!out.empty() && out.back() == l) continue;
    out.push_back(l);
  }
  if (out.empty()) return ok_ = false;
  if (out.size() == 1) {
    enqueue(out[0], -1);
    if (propagate() >= 0) ok_ = false;
    return ok_;
  }
  clauses_.push_back({std::move(out), false, false, 0});
  attach(static_cast<std::uint32_t>(clauses_.size() - 1));
  return true;
}

void SatSolver::attach(std::uint32_t cref) {
  const auto& c = clauses_[cref].lits;
  watches_[neg(c[0])].push_back({cref, c[1]});
  watches_[neg(c[1])].push_back({cref, c[0]});
}

void SatSolver::enqueue(Lit l, std::int64_t reason) {
  assigns_[var(l)] = static_cast<std::uint8_t>(l & 1u);
  levels_[var(l)] = level();
  reasons_[var(l)] = reason;
  trail_.push_back(l);
}

// Returns the conflicting clause index or -1.
std::int64_t SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];  // p became true; visit clauses watching ~p
    ++stats_.propagations;
    auto& ws = watches_[p];
    std::size_t i = 0, j = 0;
    Lit false_lit = neg(p);
    while (i < ws.size()) {
      Watch w = ws[i];
      if (lit_value(w.blocker) == 0) {
        ws[j++] = ws[i++];
        continue;
      }
      Clause& c = clauses_[w.cref];
      if (c.deleted) {
        ++i;
        continue;
      }
      auto& lits = c.lits;
      if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
      ++i;
      Lit first = lits[0];
      if (first != w.blocker && lit_value(first) == 0) {
        ws[j++] = {w.cref, first};
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < lits.size(); ++k) {
        if (lit_value(lits[k]) != 1) {
          std::swap(lits[1], lits[k]);
          watches_[neg(lits[1])].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.cref, first};
      if (lit_value(first) == 1) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.cref;
      }
      enqueue(first, w.cref);
    }
    ws.resize(j);
  }
  return -1;
}

void SatSolver::bump_var(std::uint32_t v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void SatSolver::bump_clause(Clause& c) {
  if ((c.activity += cla_inc_) > 1e20) {
    for (auto cr : learnts_) clauses_[cr].activity *= 1e-20;
    cla_inc_ *= 1e-20;
  }
}

void SatSolver::analyze(std::uint32_t confl, std::vector<Lit>& learnt, int& bt_level) {
  learnt.clear();
  learnt.push_back(0);
  int pending = 0;
  Lit p = 0;
  bool have_p = false;
  std::size_t index = trail_.size();
  std::int64_t cref = confl;
  do {
    Clause& c = clauses_[static_cast<std::size_t>(cref)];
    if (c.learnt) bump_clause(c);
    for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
      Lit q = c.lits[k];
      std::uint32_t v = var(q);
      if (!seen_[v] && levels_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (levels_[v] >= level())
          ++pending;
        else
          learnt.push_back(q);
      }
    }
    while (!seen_[var(trail_[--index])]) {
    }
    p = trail_[index];
    have_p = true;
    cref = reasons_[var(p)];
    seen_[var(p)] = 0;
    --pending;
    if (pending > 0) {
      // reason clauses keep the implied literal first
      Clause& rc = clauses_[static_cast<std::size_t>(cref)];
      if (rc.lits[0] != p) {
        auto it = std::find(rc.lits.begin(), rc.lits.end(), p);
        std::swap(*it, rc.lits[0]);
      }
    }
  } while (pending > 0);
  learnt[0] = neg(p);

  // recursive minimization
  analyze_clear_.assign(learnt.begin(), learnt.end());
  std::uint32_t abstract = 0;
  for (std::size_t k = 1; k < learnt.size(); ++k) abstract |= 1u << (levels_[var(learnt[k])] & 31);
  std::size_t j = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k)
    if (reasons_[var(learnt[k])] < 0 || !redundant(learnt[k], abstract)) learnt[j++] = learnt[k];
  learnt.resize(j);

  bt_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k)
      if (levels_[var(learnt[k])] > levels_[var(learnt[max_i])]) max_i = k;
    std::swap(learnt[1], learnt[max_i]);
    bt_level = levels_[var(learnt[1])];
  }
  for (Lit l : analyze_clear_) seen_[var(l)] = 0;
}

bool SatSolver::redundant(Lit p, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  std::size_t top = analyze_clear_.size();
  while (!analyze_stack_.empty()) {
    Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    Clause& c = clauses_[static_cast<std::size_t>(reasons_[var(q)])];
    if (c.lits[0] != neg(q) && c.lits[0] != q) {
      auto it = std::find_if(c.lits.begin(), c.lits.end(),
                             [&](Lit l) { return var(l) == var(q); });
      std::swap(*it, c.lits[0]);
    }
    for (std::size_t k = 1; k < c.lits.size(); ++k) {
      Lit l = c.lits[k];
      std::uint32_t v = var(l);
      if (seen_[v] || levels_[v] == 0) continue;
      if (reasons_[v] >= 0 && (abstract_levels & (1u << (levels_[v] & 31)))) {
        seen_[v] = 1;
        analyze_stack_.push_back(l);
        analyze_clear_.push_back(l);
      } else {
        for (std::size_t m = top; m < analyze_clear_.size(); ++m) seen_[var(analyze_clear_[m])] = 0;
        analyze_clear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void SatSolver::cancel_until(int lvl) {
  if (level() <= lvl) return;
  for (std::size_t i = trail_.size(); i > trail_lim_[static_cast<std::size_t>(lvl)]; --i) {
    std::uint32_t v = var(trail_[i - 1]);
    polarity_[v] = assigns_[v];
    assigns_[v] = 2;
    reasons_[v] = -1;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[static_cast<std::size_t>(lvl)]);
  trail_lim_.resize(static_cast<std::size_t>(lvl));
  qhead_ = trail_.size();
}

SatSolver::Lit SatSolver::pick_branch() {
  while (!heap_.empty()) {
    std::uint32_t v = heap_pop();
    if (assigns_[v] == 2) return 2 * v + polarity_[v];
  }
  return ~0u;
}

void SatSolver::reduce_db() {
  std::vector<std::uint32_t> keep;
  std::sort(learnts_.begin(), learnts_.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (clauses_[a].activity != clauses_[b].activity)
      return clauses_[a].activity < clauses_[b].activity;
    return a < b;
  });
  std::size_t half = learnts_.size() / 2;
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    Clause& c = clauses_[learnts_[i]];
    bool locked = false;
    Lit l0 = c.lits[0];
    if (lit_value(l0) == 0 && reasons_[var(l0)] == static_cast<std::int64_t>(learnts_[i])) locked = true;
    if (i < half && c.lits.size() > 2 && !locked) {
      c.deleted = true;
      c.lits.clear();
      c.lits.shrink_to_fit();
    } else {
      keep.push_back(learnts_[i]);
    }
  }
  learnts_ = std::move(keep);
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(),
                            [&](const Watch& w) { return clauses_[w.cref].deleted; }),
             ws.end());
}

namespace {
double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}
}  // namespace

SatResult SatSolver::solve(const SatLimits& limits) {
  cancelled_ = false;
  model_.clear();
  if (!ok_) return SatResult::Unsat;
  cancel_until(0);
  if (propagate() >= 0) {
    ok_ = false;
    return SatResult::Unsat;
  }
  auto start = std::chrono::steady_clock::now();
  std::uint64_t conflicts_at_start = stats_.conflicts;
  std::size_t max_learnts = std::max<std::size_t>(clauses_.size() / 3, 5000);
  int restart_no = 0;
  std::vector<Lit> learnt;
  while (true) {
    std::uint64_t budget = static_cast<std::uint64_t>(luby(2, restart_no++) * 100);
    std::uint64_t local = 0;
    while (true) {
      std::int64_t confl = propagate();
      if (confl >= 0) {
        ++stats_.conflicts;
        ++local;
        if (level() == 0) {
          ok_ = false;
          return SatResult::Unsat;
        }
        int bt = 0;
        analyze(static_cast<std::uint32_t>(confl), learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          clauses_.push_back({learnt, true, false, 0});
          auto cref = static_cast<std::uint32_t>(clauses_.size() - 1);
          attach(cref);
          learnts_.push_back(cref);
          bump_clause(clauses_[cref]);
          enqueue(learnt[0], cref);
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        if ((stats_.conflicts & 255) == 0) {
          if (limits.stop.stop_requested()) {
            cancelled_ = true;
            cancel_until(0);
            return SatResult::Unknown;
          }
          double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          if (secs > limits.max_seconds) {
            cancel_until(0);
            return SatResult::Unknown;
          }
        }
        if (stats_.conflicts - conflicts_at_start >= limits.max_conflicts) {
          cancel_until(0);
          return SatResult::Unknown;
        }
        continue;
      }
      if (local >= budget) {
        ++stats_.restarts;
        cancel_until(0);
        break;
      }
      if (learnts_.size() >= max_learnts + trail_.size()) {
        reduce_db();
        max_learnts += max_learnts / 10;
      }
      Lit next = pick_branch();
      if (next == ~0u) {
        model_.resize(assigns_.size());
        for (std::size_t v = 0; v < assigns_.size(); ++v) model_[v] = assigns_[v] == 0;
        cancel_until(0);
        return SatResult::Sat;
      }
      ++stats_.decisions;
      trail_lim_.push_back(trail_.size());
      enqueue(next, -1);
    }
  }
}

// ---------------------------------------------------------------- heap

void SatSolver::heap_insert(std::uint32_t v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void SatSolver::heap_up(std::size_t i) {
  std::uint32_t v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int>(i);
}

void SatSolver::heap_down(std::size_t i) {
  std::uint32_t v = heap_[i];
  while (true) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int>(i);
}

std::uint32_t SatSolver::heap_pop() {
  std::uint32_t top = heap_[0];
  heap_pos_[top] = -1;
  std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

std::string to_dimacs(int num_vars, const std::vector<std::vector<int>>& clauses,
                      const std::vector<std::string>& comments) {
  std::ostringstream os;
  for (const auto& c : comments) os << "c " << c << "\n";
  os << "p cnf " << num_vars << " " << clauses.size() << "\n";
  for (const auto& cl : clauses) {
    for (int l : cl) os << l << " ";
    os << "0\n";
  }
  return os.str();
}

}  // namespace bcplus
