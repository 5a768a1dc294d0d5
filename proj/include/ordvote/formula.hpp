#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "ordvote/error.hpp"

namespace ordvote::sat {

enum class Status { sat, unsat, budget };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::sat: return "SAT";
    case Status::unsat: return "UNSAT";
    case Status::budget: return "BUDGET";
  }
  return "?";
}

// CNF with positive-integer variables, DIMACS literal convention. Variables
// 1..num_catalog_vars are the problem variables; the rest are Tseitin
// auxiliaries. Clauses are sorted, duplicate-free, never tautological.
struct CnfInstance {
  int num_vars = 0;
  int num_catalog_vars = 0;
  std::string mode;
  std::vector<std::vector<int>> clauses;
};

inline std::string emit_dimacs(const CnfInstance& c) {
  std::ostringstream out;
  out << "p cnf " << c.num_vars << " " << c.clauses.size() << "\n";
  for (const auto& cl : c.clauses) {
    for (int lit : cl) out << lit << " ";
    out << "0\n";
  }
  return out.str();
}

inline CnfInstance parse_dimacs(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  CnfInstance cnf;
  bool have_header = false;
  std::vector<int> current;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    if (line[0] == 'p') {
      long clause_count = 0;
      if (std::sscanf(line.c_str(), "p cnf %d %ld", &cnf.num_vars, &clause_count) != 2)
        fail(Errc::bad_input, "bad DIMACS header: " + line);
      cnf.num_catalog_vars = cnf.num_vars;
      have_header = true;
      continue;
    }
    std::istringstream ls(line);
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        cnf.clauses.push_back(current);
        current.clear();
      } else {
        if (std::abs(lit) > cnf.num_vars) fail(Errc::bad_input, "literal out of range in DIMACS");
        current.push_back(lit);
      }
    }
  }
  if (!have_header) fail(Errc::bad_input, "missing DIMACS header");
  if (!current.empty()) fail(Errc::bad_input, "unterminated clause in DIMACS");
  return cnf;
}

struct ParsedOutput {
  Status status = Status::budget;
  std::vector<bool> model;  // indexed 1..num_vars, valid when status == sat
};

// Accepts the usual solver output: an "s SATISFIABLE"/"s UNSATISFIABLE"
// status line and "v" value lines. Anything without a recognizable status
// line is reported as BUDGET (out of time / unknown).
inline ParsedOutput parse_solver_output(const std::string& text, int num_vars) {
  ParsedOutput out;
  bool have_status = false;
  bool saw_values = false;
  std::vector<bool> model(num_vars + 1, false);

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() < 1) continue;
    if (line[0] == 's' && (line.size() == 1 || line[1] == ' ')) {
      if (line.find("UNSATISFIABLE") != std::string::npos) {
        out.status = Status::unsat;
        have_status = true;
      } else if (line.find("SATISFIABLE") != std::string::npos) {
        out.status = Status::sat;
        have_status = true;
      }
    } else if (line[0] == 'v' && (line.size() == 1 || line[1] == ' ')) {
      std::istringstream vs(line.substr(1));
      std::string tok;
      while (vs >> tok) {
        char* end = nullptr;
        long lit = std::strtol(tok.c_str(), &end, 10);
        if (end == tok.c_str() || *end != '\0')
          fail(Errc::malformed_solver_output, "bad value token \"" + tok + "\"");
        if (lit == 0) break;
        long var = lit > 0 ? lit : -lit;
        if (var > num_vars)
          fail(Errc::malformed_solver_output, "variable " + std::to_string(var) + " out of range");
        model[var] = lit > 0;
        saw_values = true;
      }
    }
  }

  if (!have_status) return ParsedOutput{Status::budget, {}};
  if (out.status == Status::sat) {
    if (!saw_values) fail(Errc::malformed_solver_output, "SATISFIABLE without value lines");
    out.model = std::move(model);
  }
  return out;
}

inline std::string format_model_lines(const std::vector<bool>& model, int num_vars) {
  std::ostringstream out;
  int per_line = 0;
  out << "v";
  for (int v = 1; v <= num_vars; ++v) {
    if (per_line == 20) {
      out << "\nv";
      per_line = 0;
    }
    out << " " << (model[v] ? v : -v);
    ++per_line;
  }
  out << " 0\n";
  return out.str();
}

// Boolean formulas over DIMACS literals with AND / OR / NOT / IMPLIES.
// require() adds a constraint; to_cnf() produces an equisatisfiable CNF by a
// Tseitin transformation with definitional (biconditional) auxiliaries, so a
// model restricted to problem variables satisfies the formula and auxiliary
// values are forced by unit propagation of their definitions. Constraints
// that are already clauses pass through without auxiliaries.
class FormulaBuilder {
 public:
  using NodeId = int;

  explicit FormulaBuilder(int num_vars) : num_vars_(num_vars) {}

  NodeId lit(int dimacs_lit) {
    nodes_.push_back(Node{Kind::lit, dimacs_lit, {}});
    return (NodeId)nodes_.size() - 1;
  }

  NodeId neg(NodeId x) {
    nodes_.push_back(Node{Kind::nnot, 0, {x}});
    return (NodeId)nodes_.size() - 1;
  }

  NodeId conj(std::vector<NodeId> kids) {
    if (kids.empty()) fail(Errc::bad_input, "empty conjunction");
    nodes_.push_back(Node{Kind::nand, 0, std::move(kids)});
    return (NodeId)nodes_.size() - 1;
  }

  NodeId disj(std::vector<NodeId> kids) {
    if (kids.empty()) fail(Errc::bad_input, "empty disjunction");
    nodes_.push_back(Node{Kind::nor, 0, std::move(kids)});
    return (NodeId)nodes_.size() - 1;
  }

  NodeId implies(NodeId a, NodeId b) {
    nodes_.push_back(Node{Kind::nimp, 0, {a, b}});
    return (NodeId)nodes_.size() - 1;
  }

  void require(NodeId root) { roots_.push_back(root); }

  void require_clause(std::vector<int> lits) { clause_roots_.push_back(std::move(lits)); }

  void require_unit(int l) { clause_roots_.push_back({l}); }

  int num_vars() const { return num_vars_; }
  size_t num_constraints() const { return roots_.size() + clause_roots_.size(); }

  CnfInstance to_cnf(std::string mode_tag = "") const {
    Emitter em(num_vars_);
    for (const auto& cl : clause_roots_) em.emit_clause(cl);
    for (NodeId r : roots_) em.clausify_root(*this, r, false);
    CnfInstance cnf;
    cnf.num_catalog_vars = num_vars_;
    cnf.num_vars = em.next_var - 1;
    cnf.mode = std::move(mode_tag);
    cnf.clauses = std::move(em.clauses);
    return cnf;
  }

  // Direct evaluation over problem variables; used to cross-check the CNF.
  bool eval(const std::vector<bool>& assignment) const {
    for (const auto& cl : clause_roots_) {
      bool sat_cl = false;
      for (int l : cl)
        if (lit_true(l, assignment)) {
          sat_cl = true;
          break;
        }
      if (!sat_cl) return false;
    }
    for (NodeId r : roots_)
      if (!eval_node(r, false, assignment)) return false;
    return true;
  }

 private:
  enum class Kind { lit, nnot, nand, nor, nimp };
  struct Node {
    Kind kind;
    int lit;
    std::vector<NodeId> kids;
  };

  static bool lit_true(int l, const std::vector<bool>& a) {
    return l > 0 ? a[l] : !a[-l];
  }

  bool eval_node(NodeId id, bool negated, const std::vector<bool>& a) const {
    const Node& nd = nodes_[id];
    switch (nd.kind) {
      case Kind::lit: return lit_true(negated ? -nd.lit : nd.lit, a);
      case Kind::nnot: return eval_node(nd.kids[0], !negated, a);
      case Kind::nimp: {
        bool v = !eval_node(nd.kids[0], false, a) || eval_node(nd.kids[1], false, a);
        return negated ? !v : v;
      }
      case Kind::nand: {
        // negated AND = OR of negations
        for (NodeId k : nd.kids) {
          bool v = eval_node(k, negated, a);
          if (!negated && !v) return false;
          if (negated && v) return true;
        }
        return !negated;
      }
      case Kind::nor: {
        for (NodeId k : nd.kids) {
          bool v = eval_node(k, negated, a);
          if (!negated && v) return true;
          if (negated && !v) return false;
        }
        return negated;
      }
    }
    return false;
  }

  struct VecHash {
    size_t operator()(const std::vector<int>& v) const {
      size_t h = 1469598103934665603ull;
      for (int x : v) {
        h ^= (size_t)(uint32_t)x;
        h *= 1099511628211ull;
      }
      return h;
    }
  };

  struct Emitter {
    explicit Emitter(int catalog_vars) : next_var(catalog_vars + 1) {}

    int next_var;
    std::vector<std::vector<int>> clauses;
    std::unordered_set<std::vector<int>, VecHash> seen;
    // (is_and, sorted child literals) -> defined auxiliary
    std::unordered_map<std::vector<int>, int, VecHash> defs;

    void emit_clause(std::vector<int> cl) {
      std::sort(cl.begin(), cl.end());
      cl.erase(std::unique(cl.begin(), cl.end()), cl.end());
      for (size_t i = 0; i + 1 < cl.size(); ++i)
        if (cl[i] == -cl[i + 1]) return;  // tautology
      if (cl.empty()) fail(Errc::bad_input, "empty clause (contradictory constraint)");
      if (seen.insert(cl).second) clauses.push_back(std::move(cl));
    }

    void clausify_root(const FormulaBuilder& fb, NodeId id, bool negated) {
      const Node& nd = fb.nodes_[id];
      switch (nd.kind) {
        case Kind::lit:
          emit_clause({negated ? -nd.lit : nd.lit});
          return;
        case Kind::nnot:
          clausify_root(fb, nd.kids[0], !negated);
          return;
        case Kind::nimp:
          if (negated) {  // a AND NOT b
            clausify_root(fb, nd.kids[0], false);
            clausify_root(fb, nd.kids[1], true);
          } else {
            break;  // treat as OR below
          }
          return;
        case Kind::nand:
          if (!negated) {
            for (NodeId k : nd.kids) clausify_root(fb, k, false);
            return;
          }
          break;  // negated AND is an OR
        case Kind::nor:
          if (negated) {  // AND of negations
            for (NodeId k : nd.kids) clausify_root(fb, k, true);
            return;
          }
          break;
      }
      std::vector<int> lits;
      collect_or(fb, id, negated, lits);
      emit_clause(std::move(lits));
    }

    // Flattens an OR-shaped subtree into literals, Tseitin-encoding any
    // conjunctive subterm into a defined auxiliary literal.
    void collect_or(const FormulaBuilder& fb, NodeId id, bool negated, std::vector<int>& out) {
      const Node& nd = fb.nodes_[id];
      switch (nd.kind) {
        case Kind::lit:
          out.push_back(negated ? -nd.lit : nd.lit);
          return;
        case Kind::nnot:
          collect_or(fb, nd.kids[0], !negated, out);
          return;
        case Kind::nimp:
          if (!negated) {
            collect_or(fb, nd.kids[0], true, out);
            collect_or(fb, nd.kids[1], false, out);
          } else {  // a AND NOT b
            out.push_back(encode_and(fb, {{nd.kids[0], false}, {nd.kids[1], true}}));
          }
          return;
        case Kind::nor:
          if (!negated) {
            for (NodeId k : nd.kids) collect_or(fb, k, false, out);
          } else {
            std::vector<std::pair<NodeId, bool>> kids;
            for (NodeId k : nd.kids) kids.emplace_back(k, true);
            out.push_back(encode_and(fb, kids));
          }
          return;
        case Kind::nand:
          if (negated) {
            for (NodeId k : nd.kids) collect_or(fb, k, true, out);
          } else {
            std::vector<std::pair<NodeId, bool>> kids;
            for (NodeId k : nd.kids) kids.emplace_back(k, false);
            out.push_back(encode_and(fb, kids));
          }
          return;
      }
    }

    // Returns a literal g with g <-> AND(kids); definitional clauses added.
    int encode_and(const FormulaBuilder& fb, const std::vector<std::pair<NodeId, bool>>& kids) {
      std::vector<int> lits;
      for (auto [k, kneg] : kids) encode_term(fb, k, kneg, lits);
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      if (lits.size() == 1) return lits[0];
      std::vector<int> key = lits;
      key.push_back(1 << 30);  // AND marker
      auto it = defs.find(key);
      if (it != defs.end()) return it->second;
      int g = next_var++;
      std::vector<int> long_cl{g};
      for (int l : lits) {
        emit_clause({-g, l});
        long_cl.push_back(-l);
      }
      emit_clause(std::move(long_cl));
      defs.emplace(std::move(key), g);
      return g;
    }

    int encode_or(const FormulaBuilder& fb, const std::vector<std::pair<NodeId, bool>>& kids) {
      std::vector<int> lits;
      for (auto [k, kneg] : kids) encode_term(fb, k, kneg, lits);
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      if (lits.size() == 1) return lits[0];
      std::vector<int> key = lits;
      key.push_back(1 << 29);  // OR marker
      auto it = defs.find(key);
      if (it != defs.end()) return it->second;
      int g = next_var++;
      std::vector<int> long_cl{-g};
      for (int l : lits) {
        emit_clause({g, -l});
        long_cl.push_back(l);
      }
      emit_clause(std::move(long_cl));
      defs.emplace(std::move(key), g);
      return g;
    }

    // Encodes one subterm to a single literal, resolving negation.
    void encode_term(const FormulaBuilder& fb, NodeId id, bool negated, std::vector<int>& out) {
      const Node& nd = fb.nodes_[id];
      switch (nd.kind) {
        case Kind::lit:
          out.push_back(negated ? -nd.lit : nd.lit);
          return;
        case Kind::nnot:
          encode_term(fb, nd.kids[0], !negated, out);
          return;
        case Kind::nimp:
          if (negated) {
            out.push_back(encode_and(fb, {{nd.kids[0], false}, {nd.kids[1], true}}));
          } else {
            out.push_back(encode_or(fb, {{nd.kids[0], true}, {nd.kids[1], false}}));
          }
          return;
        case Kind::nand: {
          std::vector<std::pair<NodeId, bool>> kids;
          for (NodeId k : nd.kids) kids.emplace_back(k, negated);
          out.push_back(negated ? encode_or(fb, kids) : encode_and(fb, kids));
          return;
        }
        case Kind::nor: {
          std::vector<std::pair<NodeId, bool>> kids;
          for (NodeId k : nd.kids) kids.emplace_back(k, negated);
          out.push_back(negated ? encode_and(fb, kids) : encode_or(fb, kids));
          return;
        }
      }
    }
  };

  int num_vars_;
  std::vector<Node> nodes_;
  std::vector<NodeId> roots_;
  std::vector<std::vector<int>> clause_roots_;
};

}  // namespace ordvote::sat
