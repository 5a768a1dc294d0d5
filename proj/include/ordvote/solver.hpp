#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "ordvote/formula.hpp"

namespace ordvote::sat {

struct SolveBudget {
  long long max_conflicts = -1;  // < 0 means unlimited
  double max_seconds = -1;       // < 0 means unlimited
};

struct SolveResult {
  Status status = Status::budget;
  std::vector<bool> model;  // indexed 1..num_vars when sat
  long long conflicts = 0;
  long long decisions = 0;
  long long propagations = 0;
};

// Model check independent of any solving engine.
inline bool model_satisfies(const std::vector<std::vector<int>>& clauses,
                            const std::vector<bool>& model) {
  for (const auto& cl : clauses) {
    bool ok = false;
    for (int l : cl) {
      size_t v = (size_t)(l > 0 ? l : -l);
      if (v < model.size() && (l > 0 ? model[v] : !model[v])) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

inline bool model_satisfies(const CnfInstance& cnf, const std::vector<bool>& model) {
  return model_satisfies(cnf.clauses, model);
}

namespace detail {

// Conflict-driven clause learning on top of the usual DPLL skeleton:
// two-watched-literal unit propagation, first-UIP learning with basic
// self-subsumption minimization, activity-ordered decisions with phase
// saving, Luby restarts and periodic deletion of inactive learnt clauses.
class CdclSolver {
 public:
  explicit CdclSolver(int num_vars)
      : nvars_(num_vars),
        watches_(2 * num_vars),
        assigns_(num_vars + 1, 0),
        level_(num_vars + 1, 0),
        reason_(num_vars + 1, -1),
        activity_(num_vars + 1, 0.0),
        polarity_(num_vars + 1, 0),
        seen_(num_vars + 1, 0),
        heap_pos_(num_vars + 1, -1) {
    for (int v = 1; v <= nvars_; ++v) heap_insert(v);
  }

  bool ok() const { return ok_; }

  void add_clause(std::vector<int> lits) {
    if (!ok_) return;
    std::sort(lits.begin(), lits.end());
    lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
    for (size_t i = 0; i + 1 < lits.size(); ++i)
      if (lits[i] == -lits[i + 1]) return;  // tautology
    // Clauses are only added at level 0, so assigned values are facts:
    // drop false literals, skip satisfied clauses.
    std::vector<int> kept;
    for (int l : lits) {
      int8_t v = value_lit(l);
      if (v == 1) return;
      if (v == 0) kept.push_back(l);
    }
    if (kept.empty()) {
      ok_ = false;
      return;
    }
    if (kept.size() == 1) {
      unchecked_enqueue(kept[0], -1);
      return;
    }
    alloc_clause(kept, false);
  }

  Status solve(const SolveBudget& budget, std::vector<bool>& model_out) {
    start_ = std::chrono::steady_clock::now();
    budget_ = budget;
    if (!ok_) return Status::unsat;
    if (propagate() >= 0) return Status::unsat;
    max_learnts_ = std::max(20000.0, 0.4 * (double)num_clauses_);
    int restarts = 0;
    for (;;) {
      long long bound = (long long)(128.0 * luby(2.0, restarts++));
      Status st = search(bound);
      if (st == Status::sat) {
        model_out.assign(nvars_ + 1, false);
        for (int v = 1; v <= nvars_; ++v) model_out[v] = assigns_[v] == 1;
        cancel_until(0);
        return Status::sat;
      }
      if (st == Status::unsat) return Status::unsat;
      if (out_of_budget()) {
        cancel_until(0);
        return Status::budget;
      }
    }
  }

  long long conflicts = 0, decisions = 0, propagations = 0;

 private:
  static constexpr int kHeader = 3;  // size, flags, activity bits

  struct Watcher {
    int cref;
    int blocker;
  };

  static int lidx(int l) { return 2 * (std::abs(l) - 1) + (l < 0 ? 1 : 0); }

  int8_t value_lit(int l) const {
    int8_t v = assigns_[std::abs(l)];
    return l > 0 ? v : (int8_t)-v;
  }

  int decision_level() const { return (int)trail_lim_.size(); }

  int clause_size(int cref) const { return arena_[cref]; }
  int* clause_lits(int cref) { return &arena_[cref + kHeader]; }
  bool clause_learnt(int cref) const { return arena_[cref + 1] & 1; }
  bool clause_deleted(int cref) const { return arena_[cref + 1] & 2; }

  float clause_act(int cref) const {
    float f;
    std::memcpy(&f, &arena_[cref + 2], sizeof(f));
    return f;
  }
  void set_clause_act(int cref, float f) { std::memcpy(&arena_[cref + 2], &f, sizeof(f)); }

  int alloc_clause(const std::vector<int>& lits, bool learnt) {
    int cref = (int)arena_.size();
    arena_.push_back((int)lits.size());
    arena_.push_back(learnt ? 1 : 0);
    arena_.push_back(0);
    for (int l : lits) arena_.push_back(l);
    watches_[lidx(lits[0])].push_back({cref, lits[1]});
    watches_[lidx(lits[1])].push_back({cref, lits[0]});
    if (learnt)
      learnts_.push_back(cref);
    else
      ++num_clauses_;
    return cref;
  }

  void unchecked_enqueue(int l, int from) {
    int v = std::abs(l);
    assigns_[v] = l > 0 ? 1 : -1;
    level_[v] = decision_level();
    reason_[v] = from;
    trail_.push_back(l);
  }

  int propagate() {
    int confl = -1;
    while (qhead_ < trail_.size()) {
      int p = trail_[qhead_++];
      ++propagations;
      auto& ws = watches_[lidx(-p)];
      size_t i = 0, j = 0;
      while (i < ws.size()) {
        Watcher w = ws[i++];
        if (value_lit(w.blocker) == 1) {
          ws[j++] = w;
          continue;
        }
        int cref = w.cref;
        int size = clause_size(cref);
        int* lits = clause_lits(cref);
        int false_lit = -p;
        if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
        Watcher keep{cref, lits[0]};
        if (lits[0] != w.blocker && value_lit(lits[0]) == 1) {
          ws[j++] = keep;
          continue;
        }
        bool moved = false;
        for (int k = 2; k < size; ++k) {
          if (value_lit(lits[k]) != -1) {
            std::swap(lits[1], lits[k]);
            watches_[lidx(lits[1])].push_back(keep);
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = keep;
        if (value_lit(lits[0]) == -1) {
          confl = cref;
          qhead_ = trail_.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          unchecked_enqueue(lits[0], cref);
        }
      }
      ws.resize(j);
      if (confl >= 0) break;
    }
    return confl;
  }

  void bump_var(int v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
      for (int x = 1; x <= nvars_; ++x) activity_[x] *= 1e-100;
      var_inc_ *= 1e-100;
    }
    heap_bump(v);
  }

  void bump_clause(int cref) {
    float a = clause_act(cref) + (float)cla_inc_;
    set_clause_act(cref, a);
    if (a > 1e20f) {
      for (int c : learnts_) set_clause_act(c, clause_act(c) * 1e-20f);
      cla_inc_ *= 1e-20;
    }
  }

  void analyze(int confl, std::vector<int>& learnt, int& bt_level) {
    learnt.clear();
    learnt.push_back(0);
    std::vector<int> to_clear;
    int counter = 0;
    int p = 0;
    size_t index = trail_.size();

    for (;;) {
      int size = clause_size(confl);
      int* lits = clause_lits(confl);
      if (clause_learnt(confl)) bump_clause(confl);
      for (int k = (p == 0 ? 0 : 1); k < size; ++k) {
        int q = lits[k];
        int v = std::abs(q);
        if (!seen_[v] && level_[v] > 0) {
          seen_[v] = 1;
          to_clear.push_back(v);
          bump_var(v);
          if (level_[v] >= decision_level())
            ++counter;
          else
            learnt.push_back(q);
        }
      }
      while (!seen_[std::abs(trail_[--index])]) {}
      p = trail_[index];
      confl = reason_[std::abs(p)];
      seen_[std::abs(p)] = 0;
      if (--counter == 0) break;
    }
    learnt[0] = -p;

    // Self-subsumption: drop literals whose whole reason is already present.
    size_t out = 1;
    for (size_t k = 1; k < learnt.size(); ++k) {
      int v = std::abs(learnt[k]);
      int r = reason_[v];
      bool redundant = r >= 0;
      if (redundant) {
        int rs = clause_size(r);
        int* rl = clause_lits(r);
        for (int t = 1; t < rs && redundant; ++t) {
          int rv = std::abs(rl[t]);
          if (!seen_[rv] && level_[rv] > 0) redundant = false;
        }
      }
      if (!redundant) learnt[out++] = learnt[k];
    }
    learnt.resize(out);

    if (learnt.size() == 1) {
      bt_level = 0;
    } else {
      size_t max_i = 1;
      for (size_t k = 2; k < learnt.size(); ++k)
        if (level_[std::abs(learnt[k])] > level_[std::abs(learnt[max_i])]) max_i = k;
      std::swap(learnt[1], learnt[max_i]);
      bt_level = level_[std::abs(learnt[1])];
    }
    for (int v : to_clear) seen_[v] = 0;
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (int c = (int)trail_.size() - 1; c >= (int)trail_lim_[lvl]; --c) {
      int v = std::abs(trail_[c]);
      polarity_[v] = trail_[c] > 0;
      assigns_[v] = 0;
      reason_[v] = -1;
      heap_insert(v);
    }
    qhead_ = trail_lim_[lvl];
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
  }

  Status search(long long conflict_bound) {
    long long local_conflicts = 0;
    std::vector<int> learnt;
    for (;;) {
      int confl = propagate();
      if (confl >= 0) {
        ++conflicts;
        ++local_conflicts;
        if (decision_level() == 0) return Status::unsat;
        int bt = 0;
        analyze(confl, learnt, bt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          unchecked_enqueue(learnt[0], -1);
        } else {
          int cref = alloc_clause(learnt, true);
          bump_clause(cref);
          unchecked_enqueue(learnt[0], cref);
        }
        var_inc_ /= 0.95;
        cla_inc_ /= 0.999;
        if ((conflicts & 1023) == 0 && out_of_budget()) {
          cancel_until(0);
          return Status::budget;
        }
        if (local_conflicts >= conflict_bound) {
          cancel_until(0);
          return Status::budget;  // restart; caller re-checks real budget
        }
        if ((double)learnts_.size() >= max_learnts_ + trail_.size()) reduce_db();
      } else {
        int v = next_branch();
        if (v == 0) return Status::sat;
        ++decisions;
        trail_lim_.push_back(trail_.size());
        unchecked_enqueue(polarity_[v] ? v : -v, -1);
      }
    }
  }

  bool out_of_budget() {
    if (budget_.max_conflicts >= 0 && conflicts >= budget_.max_conflicts) return true;
    if (budget_.max_seconds >= 0) {
      double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      if (sec >= budget_.max_seconds) return true;
    }
    return false;
  }

  bool clause_locked(int cref) {
    int* lits = clause_lits(cref);
    return value_lit(lits[0]) == 1 && reason_[std::abs(lits[0])] == cref;
  }

  void reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(),
              [&](int a, int b) { return clause_act(a) < clause_act(b); });
    size_t keep_from = learnts_.size() / 2;
    std::vector<int> kept;
    for (size_t i = 0; i < learnts_.size(); ++i) {
      int cref = learnts_[i];
      if (i < keep_from && clause_size(cref) > 2 && !clause_locked(cref))
        arena_[cref + 1] |= 2;  // deleted
      else
        kept.push_back(cref);
    }
    learnts_ = std::move(kept);
    max_learnts_ *= 1.3;
    garbage_collect();
  }

  void garbage_collect() {
    std::vector<int> fresh;
    fresh.reserve(arena_.size());
    std::vector<std::pair<int, int>> remap;  // old cref -> new cref, ascending
    for (size_t cref = 0; cref < arena_.size();) {
      int size = arena_[cref];
      if (!(arena_[cref + 1] & 2)) {
        remap.emplace_back((int)cref, (int)fresh.size());
        for (int k = 0; k < size + kHeader; ++k) fresh.push_back(arena_[cref + k]);
      }
      cref += size + kHeader;
    }
    auto renum = [&](int old) {
      auto it = std::lower_bound(remap.begin(), remap.end(), std::make_pair(old, 0),
                                 [](const auto& x, const auto& y) { return x.first < y.first; });
      return it->second;
    };
    for (int v = 1; v <= nvars_; ++v)
      if (reason_[v] >= 0) reason_[v] = renum(reason_[v]);
    for (int& c : learnts_) c = renum(c);
    arena_ = std::move(fresh);
    for (auto& ws : watches_) ws.clear();
    for (size_t cref = 0; cref < arena_.size();) {
      int size = arena_[cref];
      int* lits = &arena_[cref + kHeader];
      watches_[lidx(lits[0])].push_back({(int)cref, lits[1]});
      watches_[lidx(lits[1])].push_back({(int)cref, lits[0]});
      cref += size + kHeader;
    }
  }

  int next_branch() {
    while (!heap_.empty()) {
      int v = heap_pop_max();
      if (assigns_[v] == 0) return v;
    }
    return 0;
  }

  // Indexed binary max-heap on variable activity.
  void heap_insert(int v) {
    if (heap_pos_[v] >= 0) return;
    heap_.push_back(v);
    heap_pos_[v] = (int)heap_.size() - 1;
    heap_up(heap_pos_[v]);
  }

  void heap_bump(int v) {
    if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
  }

  int heap_pop_max() {
    int v = heap_[0];
    heap_pos_[v] = -1;
    int last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
      heap_[0] = last;
      heap_pos_[last] = 0;
      heap_down(0);
    }
    return v;
  }

  void heap_up(int i) {
    int v = heap_[i];
    while (i > 0) {
      int parent = (i - 1) / 2;
      if (activity_[heap_[parent]] >= activity_[v]) break;
      heap_[i] = heap_[parent];
      heap_pos_[heap_[i]] = i;
      i = parent;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  void heap_down(int i) {
    int v = heap_[i];
    size_t n = heap_.size();
    for (;;) {
      size_t l = 2 * (size_t)i + 1, r = l + 1;
      if (l >= n) break;
      size_t c = (r < n && activity_[heap_[r]] > activity_[heap_[l]]) ? r : l;
      if (activity_[heap_[c]] <= activity_[v]) break;
      heap_[i] = heap_[c];
      heap_pos_[heap_[i]] = i;
      i = (int)c;
    }
    heap_[i] = v;
    heap_pos_[v] = i;
  }

  static double luby(double y, int x) {
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

  int nvars_;
  bool ok_ = true;
  std::vector<int> arena_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<int> learnts_;
  long long num_clauses_ = 0;
  std::vector<int8_t> assigns_;
  std::vector<int> level_;
  std::vector<int> reason_;
  std::vector<int> trail_;
  std::vector<size_t> trail_lim_;
  size_t qhead_ = 0;
  std::vector<double> activity_;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  std::vector<char> polarity_;
  std::vector<char> seen_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  double max_learnts_ = 1e9;
  SolveBudget budget_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace detail

inline SolveResult solve_embedded(const CnfInstance& cnf, SolveBudget budget = {},
                                  const std::vector<std::vector<int>>& extra_clauses = {}) {
  detail::CdclSolver solver(cnf.num_vars);
  for (const auto& cl : cnf.clauses) solver.add_clause(cl);
  for (const auto& cl : extra_clauses) solver.add_clause(cl);
  SolveResult res;
  std::vector<bool> model;
  res.status = solver.solve(budget, model);
  res.conflicts = solver.conflicts;
  res.decisions = solver.decisions;
  res.propagations = solver.propagations;
  if (res.status == Status::sat) {
    if (!model_satisfies(cnf, model) || !model_satisfies(extra_clauses, model))
      throw std::logic_error("embedded solver produced a model violating a clause");
    res.model = std::move(model);
  }
  return res;
}

}  // namespace ordvote::sat
