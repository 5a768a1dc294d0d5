#pragma once

#include <cassert>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ordvote/canonical.hpp"
#include "ordvote/error.hpp"
#include "ordvote/formula.hpp"
#include "ordvote/matrix.hpp"

namespace ordvote::sat {

// Variable layout, in deterministic block order:
//   s[(a,b),(c,d)]  pair-order variables; (a,b) stronger than (c,d);
//                   s[(a,b),(c,d)] and s[(d,c),(b,a)] share one index
//   SSV[V,a]        a wins the sub-election on subset V
//   r[(a,b),c]      c reachable from b over edges stronger than (a,b)
//   SC[b]           b is undefeated
//   SSVR[V,a]       reversed-order winner family (reversal mode only)
// Tseitin auxiliaries are appended after the catalog by the CNF builder.
class VarCatalog {
 public:
  VarCatalog(int n, bool with_reversed = false) : n_(n), with_reversed_(with_reversed) {
    p_ = n * (n - 1);
    s_idx_.assign((size_t)p_ * p_, 0);
    int next = 0;
    for (int p = 0; p < p_; ++p) {
      for (int q = 0; q < p_; ++q) {
        if (p == q || s_idx_[(size_t)p * p_ + q] != 0) continue;
        ++next;
        s_idx_[(size_t)p * p_ + q] = next;
        s_idx_[(size_t)mirror(q) * p_ + mirror(p)] = next;
      }
    }
    s_count_ = next;
    assert(s_count_ == p_ * p_ / 2);

    ssv_rel_.assign(((size_t)1 << n) * n, 0);
    int rel = 0;
    for (unsigned mask = 1; mask < (1u << n); ++mask)
      for (int a = 0; a < n; ++a)
        if ((mask >> a) & 1u) ssv_rel_[(size_t)mask * n + a] = ++rel;
    ssv_count_ = rel;

    r_offset_ = s_count_ + ssv_count_;
    sc_offset_ = r_offset_ + p_ * n;
    rev_offset_ = sc_offset_ + n;
    num_vars_ = rev_offset_ + (with_reversed_ ? ssv_count_ : 0);
  }

  int n() const { return n_; }
  int num_pairs() const { return p_; }
  int num_vars() const { return num_vars_; }
  int num_s_vars() const { return s_count_; }
  bool with_reversed() const { return with_reversed_; }

  int pair_id(Alt a, Alt b) const { return a * (n_ - 1) + (b > a ? b - 1 : b); }

  std::pair<Alt, Alt> pair_alts(int pid) const {
    int a = pid / (n_ - 1);
    int r = pid % (n_ - 1);
    return {a, r + (r >= a ? 1 : 0)};
  }

  int mirror(int pid) const {
    auto [a, b] = pair_alts(pid);
    return pair_id(b, a);
  }

  int s_var(int p, int q) const { return s_idx_[(size_t)p * p_ + q]; }

  int s_var(Alt a, Alt b, Alt c, Alt d) const { return s_var(pair_id(a, b), pair_id(c, d)); }

  int ssv_var(unsigned mask, Alt a) const { return s_count_ + ssv_rel_[(size_t)mask * n_ + a]; }

  int r_var(int pid, Alt c) const { return r_offset_ + pid * n_ + c + 1; }

  int sc_var(Alt b) const { return sc_offset_ + b + 1; }

  int ssv_rev_var(unsigned mask, Alt a) const {
    return rev_offset_ + ssv_rel_[(size_t)mask * n_ + a];
  }

  bool is_s_var(int var) const { return var >= 1 && var <= s_count_; }

  nlohmann::json var_map() const {
    nlohmann::json j;
    j["n"] = n_;
    j["num_vars"] = num_vars_;
    nlohmann::json s = nlohmann::json::array();
    for (int p = 0; p < p_; ++p) {
      for (int q = 0; q < p_; ++q) {
        if (p == q) continue;
        auto [a, b] = pair_alts(p);
        auto [c, d] = pair_alts(q);
        s.push_back({{"stronger", {a, b}}, {"weaker", {c, d}}, {"var", s_var(p, q)}});
      }
    }
    j["s"] = std::move(s);
    nlohmann::json ssv = nlohmann::json::array();
    for (unsigned mask = 1; mask < (1u << n_); ++mask) {
      for (int a = 0; a < n_; ++a) {
        if (!((mask >> a) & 1u)) continue;
        std::vector<int> subset;
        for (int x = 0; x < n_; ++x)
          if ((mask >> x) & 1u) subset.push_back(x);
        ssv.push_back({{"subset", subset}, {"alt", a}, {"var", ssv_var(mask, a)}});
      }
    }
    j["ssv"] = std::move(ssv);
    nlohmann::json r = nlohmann::json::array();
    for (int p = 0; p < p_; ++p) {
      auto [a, b] = pair_alts(p);
      for (int c = 0; c < n_; ++c)
        r.push_back({{"edge", {a, b}}, {"to", c}, {"var", r_var(p, c)}});
    }
    j["r"] = std::move(r);
    nlohmann::json sc = nlohmann::json::array();
    for (int b = 0; b < n_; ++b) sc.push_back({{"alt", b}, {"var", sc_var(b)}});
    j["sc"] = std::move(sc);
    return j;
  }

 private:
  int n_;
  bool with_reversed_;
  int p_ = 0;
  int s_count_ = 0;
  int ssv_count_ = 0;
  int r_offset_ = 0;
  int sc_offset_ = 0;
  int rev_offset_ = 0;
  int num_vars_ = 0;
  std::vector<int> s_idx_;
  std::vector<int> ssv_rel_;
};

enum class Mode {
  any,                     // no target: any valid linear matrix
  counterexample,          // winner of the full election is defeated
  minimal_counterexample,  // plus: the defeater is the last witness n
  single_sc_winner,        // plus: at most one undefeated alternative
  tournament_class,        // orientations fixed to a class representative
  reversal_symmetry,       // same alternative wins both orientations
};

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::any: return "any";
    case Mode::counterexample: return "counterexample";
    case Mode::minimal_counterexample: return "minimal-counterexample";
    case Mode::single_sc_winner: return "single-sc-winner";
    case Mode::tournament_class: return "tournament-class";
    case Mode::reversal_symmetry: return "reversal-symmetry";
  }
  return "?";
}

inline Mode mode_from_string(const std::string& s) {
  for (Mode m : {Mode::any, Mode::counterexample, Mode::minimal_counterexample,
                 Mode::single_sc_winner, Mode::tournament_class, Mode::reversal_symmetry})
    if (s == mode_name(m)) return m;
  fail(Errc::bad_input, "unknown mode \"" + s + "\"");
}

struct TargetOptions {
  bool with_minimal = false;    // single_sc_winner only
  std::string class_bits;       // tournament_class representative
};

// Builds the conjecture formula in stages: the base axioms (pair order is a
// linear order; winner recursion; reachability; undefeatedness), optional
// symmetry breaking (alternative 0 wins every prefix sub-election witnessed
// by the pair (0,i)), and a target. The SC and r constraints are
// one-directional implications, so decoded models must never trust SC or r
// values; decode_model reads only the s block.
class ConjectureEncoder {
 public:
  ConjectureEncoder(int n, Mode mode, int max_n = 8)
      : n_(n), mode_(mode), cat_(n, mode == Mode::reversal_symmetry), fb_(cat_.num_vars()) {
    if (n < 2 || n > max_n)
      fail(Errc::too_large, "n=" + std::to_string(n) + " outside supported 2.." +
                                std::to_string(max_n));
  }

  const VarCatalog& catalog() const { return cat_; }
  const FormulaBuilder& formula() const { return fb_; }
  Mode mode() const { return mode_; }
  bool has_symmetry_breaking() const { return breaking_; }

  void build_base() {
    const VarCatalog& c = cat_;
    int P = c.num_pairs();

    // The pair order is transitive, asymmetric and connected; skew-symmetry
    // is structural (shared s indices).
    for (int p = 0; p < P; ++p) {
      for (int q = 0; q < P; ++q) {
        if (q == p) continue;
        fb_.require_clause({-c.s_var(p, q), -c.s_var(q, p)});
        fb_.require_clause({c.s_var(p, q), c.s_var(q, p)});
        for (int t = 0; t < P; ++t) {
          if (t == p || t == q) continue;
          fb_.require_clause({-c.s_var(p, q), -c.s_var(q, t), c.s_var(p, t)});
        }
      }
    }

    emit_ssv_family([&](unsigned mask, Alt a) { return c.ssv_var(mask, a); },
                    [&](int p, int q) { return c.s_var(p, q); });

    // Reachability base and propagation over strictly stronger edges.
    for (int p = 0; p < P; ++p) {
      auto [a, b] = c.pair_alts(p);
      (void)a;
      fb_.require_unit(c.r_var(p, b));
      for (int q = 0; q < P; ++q) {
        if (q == p) continue;
        auto [x, d] = c.pair_alts(q);
        fb_.require_clause(
            {-c.r_var(p, x), -c.s_var(q, c.mirror(q)), -c.s_var(q, p), c.r_var(p, d)});
      }
    }

    // Everyone with a positive margin over b being reachable over stronger
    // edges implies b undefeated.
    for (Alt b = 0; b < n_; ++b) {
      std::vector<FormulaBuilder::NodeId> kids{fb_.lit(c.sc_var(b))};
      for (Alt a = 0; a < n_; ++a) {
        if (a == b) continue;
        int pab = c.pair_id(a, b);
        kids.push_back(fb_.conj({fb_.lit(c.s_var(pab, c.mirror(pab))),
                                 fb_.lit(-c.r_var(pab, a))}));
      }
      fb_.require(fb_.disj(std::move(kids)));
    }

    base_built_ = true;
  }

  void add_symmetry_breaking() {
    if (!base_built_) fail(Errc::incompatible_modes, "build the base first");
    if (mode_ == Mode::tournament_class)
      fail(Errc::incompatible_modes, "class search replaces symmetry breaking");
    const VarCatalog& c = cat_;
    for (int i = 1; i < n_; ++i) {
      unsigned shorter = (1u << i) - 1u;
      unsigned prefix = (1u << (i + 1)) - 1u;
      fb_.require_unit(c.ssv_var(shorter, 0));
      int top = c.pair_id(0, i);
      for (Alt x = 0; x <= i; ++x) {
        for (Alt d = 0; d <= i; ++d) {
          if (x == d || (x == 0 && d == i)) continue;
          fb_.require_clause(
              {-c.ssv_var(prefix & ~(1u << d), x), c.s_var(top, c.pair_id(x, d))});
        }
      }
    }
    breaking_ = true;
  }

  void add_target(const TargetOptions& opt = {}) {
    if (!base_built_) fail(Errc::incompatible_modes, "build the base first");
    const VarCatalog& c = cat_;
    unsigned full = (1u << n_) - 1u;

    switch (mode_) {
      case Mode::any:
        break;

      case Mode::counterexample:
        add_counterexample_units();
        break;

      case Mode::minimal_counterexample:
        add_counterexample_units();
        add_minimal_units();
        break;

      case Mode::single_sc_winner:
        add_counterexample_units();
        if (opt.with_minimal) {
          if (n_ >= 8)
            fail(Errc::incompatible_modes,
                 "minimal-counterexample clauses exclude smaller cases that exist at n >= 8");
          add_minimal_units();
        }
        for (Alt a = 0; a < n_; ++a)
          for (Alt b = a + 1; b < n_; ++b)
            fb_.require_clause({-c.sc_var(a), -c.sc_var(b)});
        break;

      case Mode::tournament_class: {
        if (breaking_) fail(Errc::incompatible_modes, "class search replaces symmetry breaking");
        auto adj = detail::adjacency_from_bits(opt.class_bits, n_);
        for (Alt a = 0; a < n_; ++a) {
          for (Alt b = a + 1; b < n_; ++b) {
            int pid = adj[a][b] ? c.pair_id(a, b) : c.pair_id(b, a);
            fb_.require_unit(c.s_var(pid, c.mirror(pid)));
          }
        }
        // Winner can sit anywhere in the fixed labeling.
        std::vector<FormulaBuilder::NodeId> kids;
        for (Alt a = 0; a < n_; ++a)
          kids.push_back(fb_.conj({fb_.lit(c.ssv_var(full, a)), fb_.lit(-c.sc_var(a))}));
        fb_.require(fb_.disj(std::move(kids)));
        break;
      }

      case Mode::reversal_symmetry:
        // Second winner family over the reversed order: the s lookup swaps
        // its arguments, everything else is shared.
        emit_ssv_family([&](unsigned mask, Alt a) { return c.ssv_rev_var(mask, a); },
                        [&](int p, int q) { return c.s_var(q, p); });
        fb_.require_unit(c.ssv_var(full, 0));
        fb_.require_unit(c.ssv_rev_var(full, 0));
        break;
    }
    target_added_ = true;
  }

  CnfInstance to_cnf() const {
    std::string tag = mode_name(mode_);
    return fb_.to_cnf(tag);
  }

 private:
  void add_counterexample_units() {
    fb_.require_unit(cat_.ssv_var((1u << n_) - 1u, 0));
    fb_.require_unit(-cat_.sc_var(0));
  }

  void add_minimal_units() {
    if (!breaking_)
      fail(Errc::incompatible_modes, "minimal-counterexample clauses assume symmetry breaking");
    const VarCatalog& c = cat_;
    Alt last = n_ - 1;
    int p_last_first = c.pair_id(last, 0);
    fb_.require_unit(c.sc_var(last));
    fb_.require_unit(c.s_var(p_last_first, c.mirror(p_last_first)));
    fb_.require_unit(-c.r_var(p_last_first, last));
  }

  template <typename SsvLookup, typename SLookup>
  void emit_ssv_family(SsvLookup ssv, SLookup s) {
    const VarCatalog& c = cat_;
    for (unsigned mask = 1; mask < (1u << n_); ++mask) {
      std::vector<Alt> members;
      for (Alt a = 0; a < n_; ++a)
        if ((mask >> a) & 1u) members.push_back(a);

      std::vector<int> at_least;
      for (Alt a : members) at_least.push_back(ssv(mask, a));
      fb_.require_clause(std::move(at_least));
      for (size_t i = 0; i < members.size(); ++i)
        for (size_t j = i + 1; j < members.size(); ++j)
          fb_.require_clause({-ssv(mask, members[i]), -ssv(mask, members[j])});

      if (members.size() < 2) continue;
      for (Alt a : members) {
        for (Alt b : members) {
          if (a == b) continue;
          int pab = c.pair_id(a, b);
          std::vector<FormulaBuilder::NodeId> kids{
              fb_.lit(ssv(mask, a)), fb_.lit(-ssv(mask & ~(1u << b), a))};
          for (Alt x : members) {
            for (Alt d : members) {
              if (x == d || (x == a && d == b)) continue;
              kids.push_back(fb_.conj({fb_.lit(ssv(mask & ~(1u << d), x)),
                                       fb_.lit(-s(pab, c.pair_id(x, d)))}));
            }
          }
          fb_.require(fb_.disj(std::move(kids)));
        }
      }
    }
  }

  int n_;
  Mode mode_;
  VarCatalog cat_;
  FormulaBuilder fb_;
  bool base_built_ = false;
  bool breaking_ = false;
  bool target_added_ = false;
};

struct EncodedInstance {
  CnfInstance cnf;
  VarCatalog catalog;
  Mode mode = Mode::any;
  bool symmetry_breaking = false;
};

inline EncodedInstance build_instance(int n, Mode mode, const TargetOptions& opt = {},
                                      bool symmetry_breaking = true, int max_n = 8) {
  ConjectureEncoder enc(n, mode, max_n);
  enc.build_base();
  if (mode == Mode::tournament_class) symmetry_breaking = false;
  if (symmetry_breaking) enc.add_symmetry_breaking();
  enc.add_target(opt);
  return EncodedInstance{enc.to_cnf(), enc.catalog(), mode, symmetry_breaking};
}

// Rebuilds the matrix from the s block alone: the rank of a pair is the
// number of pairs it beats. SC and r values in the model are one-directional
// and must be recomputed, never read. Any rank structure that is not a
// linear order means the encoding is broken.
inline LinearMatrix decode_model(const std::vector<bool>& model, const VarCatalog& cat) {
  int P = cat.num_pairs();
  int n = cat.n();
  std::vector<int> rank(P, 0);
  for (int p = 0; p < P; ++p)
    for (int q = 0; q < P; ++q)
      if (q != p && model[cat.s_var(p, q)]) ++rank[p];

  std::vector<char> used(P, 0);
  for (int p = 0; p < P; ++p) {
    if (rank[p] < 0 || rank[p] >= P || used[rank[p]])
      fail(Errc::not_linear_decoded, "pair ranks do not form a linear order");
    used[rank[p]] = 1;
  }
  for (int p = 0; p < P; ++p)
    if (rank[p] + rank[cat.mirror(p)] != P - 1)
      fail(Errc::not_linear_decoded, "pair ranks are not skew-symmetric");

  std::vector<std::vector<int>> w(n, std::vector<int>(n, 0));
  for (int p = 0; p < P; ++p) {
    if (rank[p] < P / 2) continue;
    auto [a, b] = cat.pair_alts(p);
    w[a][b] = 2 * (rank[p] - P / 2 + 1);
    w[b][a] = -w[a][b];
  }
  try {
    return LinearMatrix(MarginMatrix::from_weights(n, std::move(w)));
  } catch (const Error&) {
    fail(Errc::not_linear_decoded, "decoded weights are not a valid linear matrix");
  }
}

// Excludes exactly this pair ordering from further models.
inline std::vector<int> blocking_clause(const std::vector<bool>& model, const VarCatalog& cat) {
  std::vector<int> clause;
  clause.reserve(cat.num_s_vars());
  for (int v = 1; v <= cat.num_s_vars(); ++v) clause.push_back(model[v] ? -v : v);
  return clause;
}

}  // namespace ordvote::sat
