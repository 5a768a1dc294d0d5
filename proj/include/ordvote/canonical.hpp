#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ordvote/error.hpp"
#include "ordvote/matrix.hpp"

namespace ordvote {

// Lexicographically least flattened weight matrix over all relabelings of a
// linear matrix (weights normalized first, so the key is the rank sequence).
// Two linear matrices are isomorphic iff their canonical forms are equal.
inline std::pair<std::vector<Alt>, LinearMatrix> canonical_form(const LinearMatrix& lm) {
  int n = lm.size();
  if (n > 9) fail(Errc::too_large, "canonical form scans all permutations; n <= 9 required");
  MarginMatrix norm = lm.matrix().normalized();

  std::vector<Alt> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Alt> best_perm = perm;
  std::vector<int> best_key;
  do {
    std::vector<int> key;
    key.reserve(n * n);
    std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) w[perm[a]][perm[b]] = norm.weight(a, b);
    for (int a = 0; a < n; ++a) key.insert(key.end(), w[a].begin(), w[a].end());
    if (best_key.empty() || key < best_key) {
      best_key = std::move(key);
      best_perm = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));

  return {best_perm, LinearMatrix(relabel(norm, best_perm))};
}

namespace detail {

// Adjacency bits for i<j in row-major order: '1' means i beats j.
inline std::string adjacency_bits(const std::vector<std::vector<char>>& adj) {
  int n = (int)adj.size();
  std::string bits;
  bits.reserve(n * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) bits.push_back(adj[i][j] ? '1' : '0');
  return bits;
}

inline std::vector<std::vector<char>> adjacency_from_bits(const std::string& bits, int n) {
  if ((int)bits.size() != n * (n - 1) / 2)
    fail(Errc::bad_input, "tournament bitstring has wrong length for n=" + std::to_string(n));
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  int k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j, ++k) {
      adj[i][j] = bits[k] == '1';
      adj[j][i] = !adj[i][j];
    }
  }
  return adj;
}

inline std::string min_bits_over_relabelings(const std::vector<std::vector<char>>& adj) {
  int n = (int)adj.size();
  std::vector<Alt> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::string best;
  std::vector<std::vector<char>> relabeled(n, std::vector<char>(n, 0));
  do {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) relabeled[perm[i]][perm[j]] = adj[i][j];
    std::string bits = adjacency_bits(relabeled);
    if (best.empty() || bits < best) best = std::move(bits);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace detail

// Raw adjacency bitstring of the majority graph; requires a tournament
// (no zero margins off the diagonal).
inline std::string tournament_bits(const MarginMatrix& m) {
  int n = m.size();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (m.weight(a, b) == 0)
        fail(Errc::not_tournament,
             "zero margin between " + std::to_string(a) + " and " + std::to_string(b));
      adj[a][b] = m.weight(a, b) > 0;
      adj[b][a] = !adj[a][b];
    }
  }
  return detail::adjacency_bits(adj);
}

inline std::string canonical_tournament_bits(const std::string& bits, int n) {
  return detail::min_bits_over_relabelings(detail::adjacency_from_bits(bits, n));
}

// Canonical isomorphism-class id of the majority tournament.
inline std::string tournament_class(const MarginMatrix& m) {
  return canonical_tournament_bits(tournament_bits(m), m.size());
}

// Every tournament isomorphism class on n vertices, one canonical bitstring
// each, sorted. Built by extending (k-1)-vertex class representatives with
// all orientation patterns for a new vertex and canonicalizing.
inline std::vector<std::string> enumerate_tournament_classes(int n) {
  if (n < 1 || n > 7) fail(Errc::too_large, "class enumeration supported for 1 <= n <= 7");
  std::set<std::string> reps = {""};
  for (int k = 1; k < n; ++k) {
    std::set<std::string> next;
    for (const auto& bits : reps) {
      auto adj = k == 1 ? std::vector<std::vector<char>>(1, std::vector<char>(1, 0))
                        : detail::adjacency_from_bits(bits, k);
      for (unsigned pattern = 0; pattern < (1u << k); ++pattern) {
        std::vector<std::vector<char>> ext(k + 1, std::vector<char>(k + 1, 0));
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j) ext[i][j] = adj[i][j];
        for (int i = 0; i < k; ++i) {
          ext[i][k] = (pattern >> i) & 1u;
          ext[k][i] = !ext[i][k];
        }
        next.insert(detail::min_bits_over_relabelings(ext));
      }
    }
    reps = std::move(next);
  }
  return {reps.begin(), reps.end()};
}

// Linear matrix whose majority tournament matches the given orientation bits;
// strengths are assigned in row-major pair order (arbitrary but fixed).
inline LinearMatrix matrix_from_tournament_bits(const std::string& bits, int n) {
  auto adj = detail::adjacency_from_bits(bits, n);
  std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
  int rank = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ++rank;
      if (adj[i][j]) {
        w[i][j] = 2 * rank;
        w[j][i] = -2 * rank;
      } else {
        w[j][i] = 2 * rank;
        w[i][j] = -2 * rank;
      }
    }
  }
  return LinearMatrix(MarginMatrix::from_weights(n, std::move(w)));
}

}  // namespace ordvote
