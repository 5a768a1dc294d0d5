#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "ordvote/error.hpp"
#include "ordvote/linearize.hpp"
#include "ordvote/matrix.hpp"

namespace ordvote {

namespace detail {

inline unsigned full_mask(int n) { return (n >= 32) ? 0u : ((1u << n) - 1u); }

// BFS from `from` to `to` over majority edges inside `mask` whose weight is
// at least `min_weight` (i.e. edges not strictly weaker than the reference
// pair; ties count, which matches "possibly tied for weakest").
inline bool reachable_over(const MarginMatrix& m, unsigned mask, Alt from, Alt to,
                           int min_weight, std::vector<Alt>* path = nullptr) {
  int n = m.size();
  std::vector<Alt> parent(n, -2);
  std::vector<Alt> queue;
  queue.push_back(from);
  parent[from] = -1;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    Alt x = queue[qi];
    if (x == to) {
      if (path) {
        path->clear();
        for (Alt v = to; v != -1; v = parent[v]) path->push_back(v);
        std::reverse(path->begin(), path->end());
      }
      return true;
    }
    for (Alt y = 0; y < n; ++y) {
      if (!((mask >> y) & 1u) || parent[y] != -2) continue;
      int w = m.weight(x, y);
      if (w > 0 && w >= min_weight) {
        parent[y] = x;
        queue.push_back(y);
      }
    }
  }
  return false;
}

inline bool sc_defeats_mask(const MarginMatrix& m, unsigned mask, Alt a, Alt b) {
  if (m.weight(a, b) <= 0) return false;
  return !reachable_over(m, mask, b, a, m.weight(a, b));
}

inline std::vector<Alt> sc_winners_mask(const MarginMatrix& m, unsigned mask) {
  int n = m.size();
  std::vector<Alt> winners;
  for (Alt b = 0; b < n; ++b) {
    if (!((mask >> b) & 1u)) continue;
    bool defeated = false;
    for (Alt a = 0; a < n && !defeated; ++a)
      if (a != b && ((mask >> a) & 1u)) defeated = sc_defeats_mask(m, mask, a, b);
    if (!defeated) winners.push_back(b);
  }
  return winners;
}

inline Alt ssv_winner_mask(const MarginMatrix& m, unsigned mask, std::vector<Alt>& memo,
                           std::pair<Alt, Alt>* witness = nullptr) {
  if (memo[mask] >= 0) return memo[mask];
  int n = m.size();
  if ((mask & (mask - 1)) == 0) {  // singleton
    Alt a = 0;
    while (!((mask >> a) & 1u)) ++a;
    memo[mask] = a;
    return a;
  }
  Alt best_a = -1, best_b = -1;
  bool have = false;
  for (Alt y = 0; y < n; ++y) {
    if (!((mask >> y) & 1u)) continue;
    Alt a = ssv_winner_mask(m, mask & ~(1u << y), memo);
    if (!have || m.weight(a, y) > m.weight(best_a, best_b)) {
      best_a = a;
      best_b = y;
      have = true;
    }
  }
  memo[mask] = best_a;
  if (witness) *witness = {best_a, best_b};
  return best_a;
}

}  // namespace detail

// True when a beats b head-to-head and that victory is not the weakest
// (possibly tied) edge of any majority cycle; equivalently there is no path
// from b back to a over edges at least as strong as (a,b).
inline bool sc_defeats(const MarginMatrix& m, Alt a, Alt b) {
  if (a == b || a < 0 || b < 0 || a >= m.size() || b >= m.size())
    fail(Errc::bad_alternative, "sc_defeats needs two distinct alternatives");
  return detail::sc_defeats_mask(m, detail::full_mask(m.size()), a, b);
}

// When a has a positive margin over b but does not defeat b, returns a cycle
// [a, b, x1, ..., xk] (closing back to a) in which (a,b) is weakest-or-tied.
inline std::optional<std::vector<Alt>> sc_escape_cycle(const MarginMatrix& m, Alt a, Alt b) {
  if (m.weight(a, b) <= 0) return std::nullopt;
  std::vector<Alt> path;
  if (!detail::reachable_over(m, detail::full_mask(m.size()), b, a, m.weight(a, b), &path))
    return std::nullopt;
  std::vector<Alt> cycle;
  cycle.push_back(a);
  for (size_t i = 0; i + 1 < path.size(); ++i) cycle.push_back(path[i]);
  return cycle;
}

struct DefeatRelation {
  int n = 0;
  std::vector<std::pair<Alt, Alt>> defeats;
  // Each majority edge that is not a defeat, with a witnessing cycle.
  std::map<std::pair<Alt, Alt>, std::vector<Alt>> escape_cycles;
};

inline DefeatRelation defeat_relation(const MarginMatrix& m) {
  DefeatRelation d;
  d.n = m.size();
  for (Alt a = 0; a < m.size(); ++a) {
    for (Alt b = 0; b < m.size(); ++b) {
      if (a == b || m.weight(a, b) <= 0) continue;
      if (sc_defeats(m, a, b))
        d.defeats.emplace_back(a, b);
      else
        d.escape_cycles[{a, b}] = *sc_escape_cycle(m, a, b);
    }
  }
  return d;
}

// The undefeated alternatives. Never empty: a cycle of defeats would need a
// weakest edge, which by definition is not a defeat.
inline std::vector<Alt> split_cycle_winners(const MarginMatrix& m) {
  return detail::sc_winners_mask(m, detail::full_mask(m.size()));
}

struct SsvTrace {
  Alt winner = -1;
  // Top-level witnessing match (winner, deleted); absent for one alternative.
  std::optional<std::pair<Alt, Alt>> witness;
  // Winner of every sub-election, indexed by the bitmask of surviving
  // alternatives; -1 for the empty mask.
  std::vector<Alt> sub_winner;
};

// Simple stable voting: the winner is the first coordinate of the strongest
// pair (a,b) such that a wins the election with b deleted. Memoized over
// subsets of alternatives.
inline SsvTrace ssv_winner(const LinearMatrix& lm) {
  const MarginMatrix& m = lm.matrix();
  int n = m.size();
  SsvTrace t;
  t.sub_winner.assign(1u << n, -1);
  std::pair<Alt, Alt> wit{-1, -1};
  unsigned full = detail::full_mask(n);
  t.winner = detail::ssv_winner_mask(m, full, t.sub_winner, &wit);
  if (n > 1) t.witness = wit;
  return t;
}

// Stable voting: as ssv_winner, but the pair (a,b) must additionally have a
// undefeated in the current (sub-)election.
inline Alt sv_winner(const LinearMatrix& lm) {
  const MarginMatrix& m = lm.matrix();
  int n = m.size();
  std::vector<Alt> memo(1u << n, -1);

  auto rec = [&](auto&& self, unsigned mask) -> Alt {
    if (memo[mask] >= 0) return memo[mask];
    if ((mask & (mask - 1)) == 0) {
      Alt a = 0;
      while (!((mask >> a) & 1u)) ++a;
      return memo[mask] = a;
    }
    std::vector<char> undefeated(n, 0);
    for (Alt a : detail::sc_winners_mask(m, mask)) undefeated[a] = 1;
    Alt best_a = -1, best_b = -1;
    for (Alt y = 0; y < n; ++y) {
      if (!((mask >> y) & 1u)) continue;
      Alt a = self(self, mask & ~(1u << y));
      if (!undefeated[a]) continue;
      if (best_a < 0 || m.weight(a, y) > m.weight(best_a, best_b)) {
        best_a = a;
        best_b = y;
      }
    }
    if (best_a < 0)
      fail(Errc::verification_failed, "no stable-voting candidate pair in sub-election");
    return memo[mask] = best_a;
  };
  return rec(rec, detail::full_mask(n));
}

// Independent three-alternative rule: the alternative with no head-to-head
// loss, or failing that the one whose single loss is smallest.
inline Alt three_alt_oracle(const LinearMatrix& lm) {
  if (lm.size() != 3) fail(Errc::not_three_alternatives, "oracle requires exactly 3 alternatives");
  const MarginMatrix& m = lm.matrix();
  Alt best = -1;
  int best_loss = 0;
  for (Alt a = 0; a < 3; ++a) {
    int loss = 0;
    for (Alt b = 0; b < 3; ++b) loss = std::max(loss, m.weight(b, a));
    if (best < 0 || loss < best_loss) {
      best = a;
      best_loss = loss;
    }
  }
  return best;
}

// Simultaneous elimination under ties: all first coordinates of the
// strongest pairs (a,b) with a winning some election with b deleted.
inline std::vector<Alt> ssv_se_winners(const MarginMatrix& m) {
  int n = m.size();
  std::vector<std::vector<Alt>> memo(1u << n);
  std::vector<char> done(1u << n, 0);

  auto rec = [&](auto&& self, unsigned mask) -> const std::vector<Alt>& {
    if (done[mask]) return memo[mask];
    done[mask] = 1;
    if ((mask & (mask - 1)) == 0) {
      Alt a = 0;
      while (!((mask >> a) & 1u)) ++a;
      memo[mask] = {a};
      return memo[mask];
    }
    bool have = false;
    int best_w = 0;
    std::vector<Alt> winners;
    for (Alt y = 0; y < n; ++y) {
      if (!((mask >> y) & 1u)) continue;
      for (Alt a : self(self, mask & ~(1u << y))) {
        int w = m.weight(a, y);
        if (!have || w > best_w) {
          have = true;
          best_w = w;
          winners.clear();
        }
        if (w == best_w) winners.push_back(a);
      }
    }
    std::sort(winners.begin(), winners.end());
    winners.erase(std::unique(winners.begin(), winners.end()), winners.end());
    memo[mask] = std::move(winners);
    return memo[mask];
  };
  return rec(rec, detail::full_mask(n));
}

// Parallel-universe tiebreaking: the union of simple stable voting winners
// over every linearization of the tied matrix.
inline std::vector<Alt> ssv_put_winners(const MarginMatrix& m, long long budget = 1'000'000) {
  LinearizationRange range(m);
  long long total = range.count();
  if (total > budget)
    fail(Errc::budget_exceeded, std::to_string(total) + " linearizations exceed budget " +
                                    std::to_string(budget));
  std::vector<Alt> winners;
  for (long long i = 0; i < total; ++i) winners.push_back(ssv_winner(range.at(i)).winner);
  std::sort(winners.begin(), winners.end());
  winners.erase(std::unique(winners.begin(), winners.end()), winners.end());
  return winners;
}

}  // namespace ordvote
