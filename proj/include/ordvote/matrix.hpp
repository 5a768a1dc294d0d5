#pragma once

#include <algorithm>
#include <cstdlib>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ordvote/error.hpp"

namespace ordvote {

using Alt = int;

struct MajorityGraph {
  int n = 0;
  std::vector<std::pair<Alt, Alt>> edges;  // (a,b) with positive margin of a over b, sorted

  bool has_edge(Alt a, Alt b) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
  }
};

struct Restriction;

// A margin matrix: a skew-symmetric integer matrix with even entries. The
// induced relation (a,b) > (c,d) iff w[a][b] > w[c][d] is a strict weak order
// on ordered pairs and automatically satisfies skew-symmetry of the order:
// (a,b) outranks (c,d) iff (d,c) outranks (b,a). Even entries keep every
// matrix realizable as the pairwise margins of a preference profile.
class MarginMatrix {
 public:
  MarginMatrix() = default;

  static MarginMatrix from_weights(int n, std::vector<std::vector<int>> w) {
    std::vector<std::string> problems;
    if (n < 1) problems.push_back("need at least one alternative, got n=" + std::to_string(n));
    if ((int)w.size() != n) {
      problems.push_back("weight matrix has " + std::to_string(w.size()) + " rows, expected " +
                         std::to_string(n));
    } else {
      for (int a = 0; a < n; ++a)
        if ((int)w[a].size() != n)
          problems.push_back("row " + std::to_string(a) + " has " + std::to_string(w[a].size()) +
                             " entries, expected " + std::to_string(n));
    }
    if (!problems.empty()) fail(Errc::bad_shape, join(problems));

    Errc first = Errc::bad_shape;
    bool any = false;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (w[a][b] % 2 != 0) {
          if (!any) { first = Errc::odd_entry; any = true; }
          problems.push_back("odd entry w[" + std::to_string(a) + "][" + std::to_string(b) +
                             "]=" + std::to_string(w[a][b]));
        }
      }
    }
    for (int a = 0; a < n; ++a) {
      for (int b = a; b < n; ++b) {
        if (w[a][b] != -w[b][a]) {
          if (!any) { first = Errc::not_skew_symmetric; any = true; }
          problems.push_back("w[" + std::to_string(a) + "][" + std::to_string(b) + "]=" +
                             std::to_string(w[a][b]) + " but w[" + std::to_string(b) + "][" +
                             std::to_string(a) + "]=" + std::to_string(w[b][a]));
        }
      }
    }
    if (!problems.empty()) fail(first, join(problems));

    MarginMatrix m;
    m.n_ = n;
    m.w_ = std::move(w);
    return m;
  }

  int size() const { return n_; }

  int weight(Alt a, Alt b) const { return w_[a][b]; }

  const std::vector<std::vector<int>>& weights() const { return w_; }

  // True when no two off-diagonal pairs tie: equivalently, all n(n-1)
  // off-diagonal entries are pairwise distinct (a zero entry ties with its
  // own mirror, so zeros are excluded as well).
  bool is_linear() const {
    std::vector<int> vals;
    vals.reserve(n_ * (n_ - 1));
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (a != b) vals.push_back(w_[a][b]);
    std::sort(vals.begin(), vals.end());
    return std::adjacent_find(vals.begin(), vals.end()) == vals.end();
  }

  MajorityGraph majority_graph() const {
    MajorityGraph g;
    g.n = n_;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (w_[a][b] > 0) g.edges.emplace_back(a, b);
    return g;
  }

  Restriction restrict(Alt b) const;

  MarginMatrix reversed() const {
    MarginMatrix m;
    m.n_ = n_;
    m.w_.assign(n_, std::vector<int>(n_, 0));
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b) m.w_[a][b] = -w_[a][b];
    return m;
  }

  // Re-derives the canonical weights 0, +-2, +-4, ... by order class: tied
  // zero pairs stay 0, the weakest positive class becomes 2, the next 4, etc.
  // Preserves the induced order exactly; idempotent.
  MarginMatrix normalized() const {
    std::vector<int> pos;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (w_[a][b] > 0) pos.push_back(w_[a][b]);
    std::sort(pos.begin(), pos.end());
    pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
    std::map<int, int> rank;
    for (size_t i = 0; i < pos.size(); ++i) rank[pos[i]] = 2 * (int)(i + 1);

    MarginMatrix m;
    m.n_ = n_;
    m.w_.assign(n_, std::vector<int>(n_, 0));
    for (int a = 0; a < n_; ++a) {
      for (int b = 0; b < n_; ++b) {
        if (w_[a][b] > 0)
          m.w_[a][b] = rank[w_[a][b]];
        else if (w_[a][b] < 0)
          m.w_[a][b] = -rank[-w_[a][b]];
      }
    }
    return m;
  }

  // Off-diagonal ordered pairs sorted weakest to strongest.
  std::vector<std::pair<Alt, Alt>> pairs_by_strength() const {
    std::vector<std::pair<Alt, Alt>> ps;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (a != b) ps.emplace_back(a, b);
    std::stable_sort(ps.begin(), ps.end(), [&](const auto& p, const auto& q) {
      return w_[p.first][p.second] < w_[q.first][q.second];
    });
    return ps;
  }

  friend bool operator==(const MarginMatrix& x, const MarginMatrix& y) {
    return x.n_ == y.n_ && x.w_ == y.w_;
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) s += "; ";
      s += v[i];
    }
    return s;
  }

  int n_ = 0;
  std::vector<std::vector<int>> w_;
};

// Result of deleting one alternative: the smaller matrix plus the map from
// new dense ids back to the original ids (kept[new_id] == old_id).
struct Restriction {
  MarginMatrix matrix;
  std::vector<Alt> kept;

  Alt to_old(Alt new_id) const { return kept[new_id]; }
};

inline Restriction MarginMatrix::restrict(Alt b) const {
  if (n_ == 1) fail(Errc::last_alternative, "cannot delete the only alternative");
  if (b < 0 || b >= n_) fail(Errc::bad_alternative, "alternative " + std::to_string(b));
  Restriction r;
  for (int a = 0; a < n_; ++a)
    if (a != b) r.kept.push_back(a);
  std::vector<std::vector<int>> w(n_ - 1, std::vector<int>(n_ - 1, 0));
  for (int i = 0; i < n_ - 1; ++i)
    for (int j = 0; j < n_ - 1; ++j) w[i][j] = w_[r.kept[i]][r.kept[j]];
  r.matrix = MarginMatrix::from_weights(n_ - 1, std::move(w));
  return r;
}

class LinearMatrix {
 public:
  explicit LinearMatrix(MarginMatrix m) : m_(std::move(m)) {
    if (!m_.is_linear()) fail(Errc::not_linear, "matrix has tied or zero margins");
  }

  const MarginMatrix& matrix() const { return m_; }
  int size() const { return m_.size(); }
  int weight(Alt a, Alt b) const { return m_.weight(a, b); }

 private:
  MarginMatrix m_;
};

// Applies a relabeling of alternatives: perm[old_id] == new_id.
inline MarginMatrix relabel(const MarginMatrix& m, const std::vector<Alt>& perm) {
  int n = m.size();
  if ((int)perm.size() != n) fail(Errc::bad_input, "permutation size mismatch");
  std::vector<char> hit(n, 0);
  for (Alt p : perm) {
    if (p < 0 || p >= n || hit[p]) fail(Errc::bad_input, "not a permutation");
    hit[p] = 1;
  }
  std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) w[perm[a]][perm[b]] = m.weight(a, b);
  return MarginMatrix::from_weights(n, std::move(w));
}

}  // namespace ordvote
