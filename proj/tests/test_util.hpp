#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "ordvote/json_io.hpp"
#include "ordvote/matrix.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
  return std::string(ORDVOTE_DATA_DIR) + "/" + name;
}

inline ordvote::MarginMatrix fixture(const std::string& name) {
  return ordvote::load_matrix(data_path(name)).matrix;
}

// Defeat check straight from the definition: enumerate the simple cycles
// through the edge (a,b) by walking simple paths b -> a over majority edges
// of any strength; (a,b) escapes defeat iff some cycle has no edge strictly
// weaker than it. Independent of the reachability-based implementation.
inline bool sc_defeats_brute(const ordvote::MarginMatrix& m, ordvote::Alt a, ordvote::Alt b) {
  if (m.weight(a, b) <= 0) return false;
  int n = m.size();
  int ref = m.weight(a, b);
  std::vector<char> visited(n, 0);
  bool escaped = false;

  auto dfs = [&](auto&& self, ordvote::Alt at, int weakest_other) -> void {
    if (escaped) return;
    if (at == a) {
      if (weakest_other >= ref) escaped = true;
      return;
    }
    for (ordvote::Alt next = 0; next < n; ++next) {
      if (visited[next] || m.weight(at, next) <= 0) continue;
      if (next == a) {
        self(self, a, std::min(weakest_other, m.weight(at, a)));
        continue;
      }
      visited[next] = 1;
      self(self, next, std::min(weakest_other, m.weight(at, next)));
      visited[next] = 0;
    }
  };
  visited[b] = 1;
  dfs(dfs, b, 1 << 30);
  return !escaped;
}

// Ordered set partition counts (Fubini numbers) via the first-block
// recurrence; used as the independent oracle for matrix-class enumeration.
inline long long fubini(int m) {
  std::vector<std::vector<long long>> choose(m + 1, std::vector<long long>(m + 1, 0));
  for (int i = 0; i <= m; ++i) {
    choose[i][0] = 1;
    for (int j = 1; j <= i; ++j)
      choose[i][j] = choose[i - 1][j - 1] + (j <= i - 1 ? choose[i - 1][j] : 0);
  }
  std::vector<long long> a(m + 1, 0);
  a[0] = 1;
  for (int k = 1; k <= m; ++k)
    for (int j = 1; j <= k; ++j) a[k] += choose[k][j] * a[k - j];
  return a[m];
}

inline bool contains(const std::vector<int>& sorted, int x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

}  // namespace testutil
