#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "ordvote/error.hpp"
#include "ordvote/matrix.hpp"

namespace ordvote {

// All linear extensions of a margin matrix's pair ordering. A linearization
// totally orders each tied class, keeping the order skew-symmetric: ordering
// a positive class forces the mirrored order on its negative twin, and the
// zero class is split by repeatedly picking a strongest member, whose mirror
// then becomes the weakest remaining. Deterministic: class members are
// processed in (min id, max id, orientation) order and extensions are
// indexable 0..count()-1.
class LinearizationRange {
 public:
  explicit LinearizationRange(const MarginMatrix& m) : n_(m.size()) {
    std::map<int, std::vector<std::pair<Alt, Alt>>> by_weight;  // weight > 0 -> oriented pairs
    for (int a = 0; a < n_; ++a) {
      for (int b = a + 1; b < n_; ++b) {
        int w = m.weight(a, b);
        if (w > 0)
          by_weight[w].emplace_back(a, b);
        else if (w < 0)
          by_weight[-w].emplace_back(b, a);
        else
          zero_pairs_.emplace_back(a, b);
      }
    }
    for (auto& [w, members] : by_weight) {
      std::sort(members.begin(), members.end(), by_pair_key);
      classes_.push_back(std::move(members));
    }
  }

  // Saturates instead of overflowing; compare against budgets only.
  long long count() const {
    long long c = 1;
    int m = (int)zero_pairs_.size();
    for (int j = 1; j <= m; ++j) c = sat_mul(c, 2 * j);
    for (const auto& cls : classes_) c = sat_mul(c, factorial((int)cls.size()));
    return c;
  }

  LinearMatrix at(long long index) const {
    if (index < 0 || index >= count()) fail(Errc::bad_input, "linearization index out of range");

    // Ascending (weakest first) list of oriented pairs of the extension.
    std::vector<std::pair<Alt, Alt>> order;

    // Zero class: pick the strongest remaining member, force its mirror last.
    int m = (int)zero_pairs_.size();
    std::vector<std::pair<Alt, Alt>> avail;
    for (auto [a, b] : zero_pairs_) {
      avail.emplace_back(a, b);
      avail.emplace_back(b, a);
    }
    std::vector<std::pair<Alt, Alt>> picks;
    for (int t = 0; t < m; ++t) {
      long long radix = 2 * (m - t);
      long long d = index % radix;
      index /= radix;
      auto pick = avail[d];
      auto mir = std::make_pair(pick.second, pick.first);
      avail.erase(std::remove(avail.begin(), avail.end(), pick), avail.end());
      avail.erase(std::remove(avail.begin(), avail.end(), mir), avail.end());
      picks.push_back(pick);
    }
    for (int t = m - 1; t >= 0; --t) order.push_back(picks[t]);

    // Tied positive classes, weakest class first, k-th lexicographic order.
    for (const auto& cls : classes_) {
      long long f = factorial((int)cls.size());
      long long d = index % f;
      index /= f;
      auto members = cls;
      for (auto p : unrank_permutation((int)cls.size(), d)) order.push_back(members[p]);
    }

    std::vector<std::vector<int>> w(n_, std::vector<int>(n_, 0));
    for (size_t pos = 0; pos < order.size(); ++pos) {
      auto [a, b] = order[pos];
      w[a][b] = 2 * (int)(pos + 1);
      w[b][a] = -2 * (int)(pos + 1);
    }
    return LinearMatrix(MarginMatrix::from_weights(n_, std::move(w)));
  }

 private:
  static bool by_pair_key(const std::pair<Alt, Alt>& x, const std::pair<Alt, Alt>& y) {
    auto key = [](const std::pair<Alt, Alt>& p) {
      return std::make_tuple(std::min(p.first, p.second), std::max(p.first, p.second),
                             p.first > p.second);
    };
    return key(x) < key(y);
  }

  static long long sat_mul(long long a, long long b) {
    const long long cap = std::numeric_limits<long long>::max() / 2;
    if (a > cap / (b > 0 ? b : 1)) return cap;
    return a * b;
  }

  static long long factorial(int k) {
    long long f = 1;
    for (int i = 2; i <= k; ++i) f = sat_mul(f, i);
    return f;
  }

  // Lexicographic unranking: returns the rank-th permutation of 0..k-1.
  static std::vector<int> unrank_permutation(int k, long long rank) {
    std::vector<int> pool(k);
    for (int i = 0; i < k; ++i) pool[i] = i;
    std::vector<int> out;
    for (int i = k; i >= 1; --i) {
      long long f = factorial(i - 1);
      long long d = rank / f;
      rank %= f;
      out.push_back(pool[d]);
      pool.erase(pool.begin() + d);
    }
    return out;
  }

  int n_;
  std::vector<std::vector<std::pair<Alt, Alt>>> classes_;  // ascending by weight
  std::vector<std::pair<Alt, Alt>> zero_pairs_;            // (min,max)
};

}  // namespace ordvote
