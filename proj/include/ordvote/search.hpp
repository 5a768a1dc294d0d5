#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "ordvote/canonical.hpp"
#include "ordvote/encoding.hpp"
#include "ordvote/error.hpp"
#include "ordvote/external.hpp"
#include "ordvote/matrix.hpp"
#include "ordvote/methods.hpp"
#include "ordvote/profile.hpp"
#include "ordvote/solver.hpp"

namespace ordvote {

// ---- exhaustive enumeration -------------------------------------------

// Every linear matrix on n labeled alternatives with canonical weights:
// a rank permutation over the unordered pairs times an orientation each,
// m! * 2^m matrices for m = n(n-1)/2.
inline void enumerate_linear_matrices(int n, const std::function<void(const LinearMatrix&)>& fn) {
  std::vector<std::pair<Alt, Alt>> pairs;
  for (Alt a = 0; a < n; ++a)
    for (Alt b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  int m = (int)pairs.size();
  std::vector<int> rank(m);
  std::iota(rank.begin(), rank.end(), 1);
  do {
    for (unsigned orient = 0; orient < (1u << m); ++orient) {
      std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
      for (int i = 0; i < m; ++i) {
        auto [a, b] = pairs[i];
        if ((orient >> i) & 1u) std::swap(a, b);
        w[a][b] = 2 * rank[i];
        w[b][a] = -2 * rank[i];
      }
      fn(LinearMatrix(MarginMatrix::from_weights(n, std::move(w))));
    }
  } while (std::next_permutation(rank.begin(), rank.end()));
}

// Every margin matrix on n labeled alternatives up to order-preserving
// reweighting: each unordered pair is assigned a strength level (0 = tied at
// zero) such that the nonzero levels used are exactly 1..L, plus an
// orientation per nonzero pair.
inline void enumerate_ordinal_matrices(int n, const std::function<void(const MarginMatrix&)>& fn) {
  std::vector<std::pair<Alt, Alt>> pairs;
  for (Alt a = 0; a < n; ++a)
    for (Alt b = a + 1; b < n; ++b) pairs.emplace_back(a, b);
  int m = (int)pairs.size();
  std::vector<int> level(m, 0);

  auto emit_orientations = [&]() {
    std::vector<int> nonzero;
    for (int i = 0; i < m; ++i)
      if (level[i] > 0) nonzero.push_back(i);
    for (unsigned orient = 0; orient < (1u << nonzero.size()); ++orient) {
      std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
      for (size_t k = 0; k < nonzero.size(); ++k) {
        auto [a, b] = pairs[nonzero[k]];
        if ((orient >> k) & 1u) std::swap(a, b);
        w[a][b] = 2 * level[nonzero[k]];
        w[b][a] = -2 * level[nonzero[k]];
      }
      fn(MarginMatrix::from_weights(n, std::move(w)));
    }
  };

  auto levels_valid = [&]() {
    int maxl = 0;
    for (int l : level) maxl = std::max(maxl, l);
    std::vector<char> present(maxl + 1, 0);
    for (int l : level) present[l] = 1;
    for (int l = 1; l <= maxl; ++l)
      if (!present[l]) return false;
    return true;
  };

  auto rec = [&](auto&& self, int i) -> void {
    if (i == m) {
      if (levels_valid()) emit_orientations();
      return;
    }
    for (int l = 0; l <= m; ++l) {
      level[i] = l;
      self(self, i + 1);
    }
  };
  rec(rec, 0);
}

inline MarginMatrix random_linear_matrix(int n, std::mt19937_64& rng) {
  int m = n * (n - 1) / 2;
  std::vector<int> rank(m);
  std::iota(rank.begin(), rank.end(), 1);
  for (int i = m - 1; i > 0; --i) std::swap(rank[i], rank[rng() % (i + 1)]);
  std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
  int i = 0;
  for (Alt a = 0; a < n; ++a) {
    for (Alt b = a + 1; b < n; ++b, ++i) {
      int v = 2 * rank[i];
      if (rng() & 1u) v = -v;
      w[a][b] = v;
      w[b][a] = -v;
    }
  }
  return MarginMatrix::from_weights(n, std::move(w));
}

// Random valid matrix with ties: each unordered pair gets an even weight
// with |w| <= 2*max_level (0 allowed unless forbidden).
inline MarginMatrix random_tied_matrix(int n, std::mt19937_64& rng, int max_level,
                                       bool allow_zero = true) {
  std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
  for (Alt a = 0; a < n; ++a) {
    for (Alt b = a + 1; b < n; ++b) {
      int lo = allow_zero ? 0 : 1;
      int lvl = lo + (int)(rng() % (std::uint64_t)(max_level - lo + 1));
      int v = 2 * lvl;
      if (rng() & 1u) v = -v;
      w[a][b] = v;
      w[b][a] = -v;
    }
  }
  return MarginMatrix::from_weights(n, std::move(w));
}

struct ExhaustiveReport {
  long long matrices = 0;
  long long ssv_outside_sc = 0;
  long long sv_ssv_disagree = 0;
  double seconds = 0;
};

// Checks every linear matrix on n <= 4 alternatives: the simple stable
// voting winner must be undefeated and must agree with stable voting.
inline ExhaustiveReport run_exhaustive(int n) {
  if (n < 2 || n > 4) fail(Errc::too_large, "exhaustive scan supported for 2 <= n <= 4");
  ExhaustiveReport rep;
  auto t0 = std::chrono::steady_clock::now();
  enumerate_linear_matrices(n, [&](const LinearMatrix& lm) {
    ++rep.matrices;
    Alt ssv = ssv_winner(lm).winner;
    auto sc = split_cycle_winners(lm.matrix());
    if (!std::binary_search(sc.begin(), sc.end(), ssv)) ++rep.ssv_outside_sc;
    if (sv_winner(lm) != ssv) ++rep.sv_ssv_disagree;
  });
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// ---- solve + verify pipeline -------------------------------------------

struct ProveConfig {
  int n = 0;
  sat::Mode mode = sat::Mode::counterexample;
  sat::TargetOptions target;
  bool symmetry_breaking = true;  // forced off for tournament-class
  std::string solver_cmd;         // empty: embedded engine
  sat::SolveBudget budget;
  int enumerate = 0;              // > 0: collect up to this many models
  int max_n = 8;
};

struct ProveOutcome {
  sat::Status status = sat::Status::budget;
  std::optional<MarginMatrix> matrix;      // decoded witness when SAT
  std::vector<MarginMatrix> enumerated;    // models found in enumeration
  int num_vars = 0;
  long long num_clauses = 0;
  double seconds = 0;
};

namespace detail {

inline void verify_decoded(const MarginMatrix& m, sat::Mode mode, bool breaking,
                           const sat::TargetOptions& opt) {
  LinearMatrix lm(m);
  Alt winner = ssv_winner(lm).winner;
  auto sc = split_cycle_winners(m);
  auto in_sc = [&](Alt a) { return std::binary_search(sc.begin(), sc.end(), a); };

  switch (mode) {
    case sat::Mode::any:
      return;
    case sat::Mode::counterexample:
    case sat::Mode::minimal_counterexample:
    case sat::Mode::single_sc_winner:
      (void)breaking;
      if (winner != 0) fail(Errc::verification_failed, "decoded winner is not alternative 0");
      if (in_sc(winner)) fail(Errc::verification_failed, "decoded winner is undefeated");
      if (mode == sat::Mode::minimal_counterexample &&
          !sc_defeats(m, m.size() - 1, 0))
        fail(Errc::verification_failed, "last alternative does not defeat the winner");
      if (mode == sat::Mode::single_sc_winner && sc.size() != 1)
        fail(Errc::verification_failed, "more than one undefeated alternative");
      return;
    case sat::Mode::tournament_class:
      if (tournament_bits(m) != opt.class_bits)
        fail(Errc::verification_failed, "decoded majority graph differs from the class");
      if (in_sc(winner)) fail(Errc::verification_failed, "decoded winner is undefeated");
      return;
    case sat::Mode::reversal_symmetry: {
      if (winner != 0) fail(Errc::verification_failed, "decoded winner is not alternative 0");
      Alt rev = ssv_winner(LinearMatrix(m.reversed())).winner;
      if (rev != 0)
        fail(Errc::verification_failed, "alternative 0 does not win the reversed election");
      return;
    }
  }
}

inline sat::SolveResult dispatch_solve(const sat::CnfInstance& cnf, const std::string& solver_cmd,
                                       sat::SolveBudget budget,
                                       const std::vector<std::vector<int>>& extra) {
  if (solver_cmd.empty()) return sat::solve_embedded(cnf, budget, extra);
  if (extra.empty()) return sat::solve_external(cnf, solver_cmd, budget);
  sat::CnfInstance ext = cnf;
  for (const auto& cl : extra) ext.clauses.push_back(cl);
  return sat::solve_external(ext, solver_cmd, budget);
}

}  // namespace detail

// Builds the formula, solves it, decodes and independently re-checks every
// SAT model with the voting-method implementations before reporting it.
// With cfg.enumerate > 0, keeps blocking found pair orderings and re-solving.
inline ProveOutcome run_prove(const ProveConfig& cfg) {
  auto t0 = std::chrono::steady_clock::now();
  sat::EncodedInstance inst =
      sat::build_instance(cfg.n, cfg.mode, cfg.target, cfg.symmetry_breaking, cfg.max_n);
  ProveOutcome out;
  out.num_vars = inst.cnf.num_vars;
  out.num_clauses = (long long)inst.cnf.clauses.size();

  std::vector<std::vector<int>> blocked;
  int want = cfg.enumerate > 0 ? cfg.enumerate : 1;
  for (int round = 0; round < want; ++round) {
    sat::SolveResult res = detail::dispatch_solve(inst.cnf, cfg.solver_cmd, cfg.budget, blocked);
    out.status = res.status;
    if (res.status != sat::Status::sat) break;
    LinearMatrix lm = sat::decode_model(res.model, inst.catalog);
    detail::verify_decoded(lm.matrix(), cfg.mode, inst.symmetry_breaking, cfg.target);
    out.matrix = lm.matrix();
    if (cfg.enumerate > 0) {
      out.enumerated.push_back(lm.matrix());
      blocked.push_back(sat::blocking_clause(res.model, inst.catalog));
    } else {
      break;
    }
  }
  if (cfg.enumerate > 0 && !out.enumerated.empty() && out.status == sat::Status::unsat)
    out.status = sat::Status::sat;  // enumeration exhausted after finding models
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// ---- counterexample expansion ------------------------------------------

// Grows a counterexample by new alternatives a_1..a_k: the pairs
// (winner, a_k), ..., (winner, a_1) lead the order from the top, every old
// alternative beats every new one, old pairs keep their relative order, and
// new alternatives beat each other by id. The winner stays the winner and
// stays defeated, which is re-verified.
inline MarginMatrix expand_counterexample(const MarginMatrix& base, int target_n) {
  LinearMatrix lm(base);
  int n0 = base.size();
  if (target_n < n0) fail(Errc::bad_input, "target size smaller than the fixture");
  Alt winner = ssv_winner(lm).winner;
  {
    auto sc = split_cycle_winners(base);
    if (std::binary_search(sc.begin(), sc.end(), winner))
      fail(Errc::verification_failed, "fixture winner is undefeated; nothing to expand");
  }
  if (target_n == n0) return base;

  int n = target_n;
  std::vector<std::pair<Alt, Alt>> ascending;
  // Weakest block: pairs among new alternatives, lower id beats higher.
  for (Alt u = n0; u < n; ++u)
    for (Alt v = u + 1; v < n; ++v) ascending.emplace_back(u, v);
  // Old alternatives other than the winner beat every new one.
  for (Alt c = 0; c < n0; ++c) {
    if (c == winner) continue;
    for (Alt u = n0; u < n; ++u) ascending.emplace_back(c, u);
  }
  // Old pairs in their existing order.
  for (auto [a, b] : base.pairs_by_strength())
    if (base.weight(a, b) > 0) ascending.emplace_back(a, b);
  // Strongest block: (winner, a_1) .. (winner, a_k).
  for (Alt u = n0; u < n; ++u) ascending.emplace_back(winner, u);

  std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
  for (size_t i = 0; i < ascending.size(); ++i) {
    auto [a, b] = ascending[i];
    w[a][b] = 2 * (int)(i + 1);
    w[b][a] = -w[a][b];
  }
  MarginMatrix expanded = MarginMatrix::from_weights(n, std::move(w));

  LinearMatrix elm(expanded);
  if (ssv_winner(elm).winner != winner)
    fail(Errc::verification_failed, "expansion changed the winner");
  auto sc = split_cycle_winners(expanded);
  if (std::binary_search(sc.begin(), sc.end(), winner))
    fail(Errc::verification_failed, "expansion made the winner undefeated");
  return expanded;
}

// ---- tournament class sweep ----------------------------------------------

struct ClassSweepResult {
  std::vector<sat::Status> status;  // per class, in manifest order
  int sat_classes = 0;
};

inline ClassSweepResult class_sweep(int n, const std::vector<std::string>& classes,
                                    const std::string& solver_cmd, sat::SolveBudget per_instance,
                                    int workers) {
  ClassSweepResult result;
  result.status.assign(classes.size(), sat::Status::budget);
  std::atomic<size_t> next{0};
  if (workers < 1) workers = 1;

  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= classes.size()) return;
      ProveConfig cfg;
      cfg.n = n;
      cfg.mode = sat::Mode::tournament_class;
      cfg.target.class_bits = classes[i];
      cfg.symmetry_breaking = false;
      cfg.solver_cmd = solver_cmd;
      cfg.budget = per_instance;
      result.status[i] = run_prove(cfg).status;
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (auto s : result.status)
    if (s == sat::Status::sat) ++result.sat_classes;
  return result;
}

// ---- sampling statistics ---------------------------------------------------

inline double mean_sc_winner_count(int n, int voters, int profiles, std::uint64_t seed) {
  double total = 0;
  for (int i = 0; i < profiles; ++i) {
    Profile p = sample_impartial_culture(n, voters, seed + (std::uint64_t)i);
    total += (double)split_cycle_winners(margins(p)).size();
  }
  return total / profiles;
}

}  // namespace ordvote
