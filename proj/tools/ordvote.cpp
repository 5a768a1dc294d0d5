// Command-line interface: winner computation for margin-matrix voting
// methods, exhaustive small-n checks, SAT-based searches with independent
// verification of every model, profile realization, sampling, and
// tournament class listings. JSON on stdout; diagnostics on stderr.
//
// Exit codes: 0 = requested claim holds / SAT found as requested,
// 1 = violation found while proving / UNSAT while seeking, 2 = error.
// The `solve` subcommand follows solver conventions instead (10/20).

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ordvote/canonical.hpp"
#include "ordvote/encoding.hpp"
#include "ordvote/error.hpp"
#include "ordvote/external.hpp"
#include "ordvote/json_io.hpp"
#include "ordvote/linearize.hpp"
#include "ordvote/matrix.hpp"
#include "ordvote/methods.hpp"
#include "ordvote/profile.hpp"
#include "ordvote/search.hpp"
#include "ordvote/solver.hpp"

using nlohmann::json;
using namespace ordvote;

namespace {

void emit(const json& j) { std::cout << j.dump(1) << "\n"; }

std::string default_solver_cmd() {
  const char* env = std::getenv("SOLVER_CMD");
  return env ? env : "";
}

json winners_report(const MatrixFile& mf, const std::string& method, long long put_budget) {
  const MarginMatrix& m = mf.matrix;
  json rep;
  rep["method"] = method;
  auto defeats = defeat_relation(m);
  json dj = json::array();
  for (auto [a, b] : defeats.defeats) dj.push_back({a, b});
  rep["defeats"] = std::move(dj);

  std::vector<Alt> winners;
  if (method == "sc") {
    winners = split_cycle_winners(m);
  } else if (method == "ssv") {
    auto trace = ssv_winner(LinearMatrix(m));
    winners = {trace.winner};
    if (trace.witness) rep["witness"] = {trace.witness->first, trace.witness->second};
  } else if (method == "sv") {
    winners = {sv_winner(LinearMatrix(m))};
  } else if (method == "ssv-se") {
    winners = ssv_se_winners(m);
  } else if (method == "ssv-put") {
    winners = ssv_put_winners(m, put_budget);
  } else {
    fail(Errc::bad_input, "unknown method \"" + method + "\"");
  }
  rep["winners"] = winners;
  if (!mf.labels.empty()) {
    json names = json::array();
    for (Alt w : winners) names.push_back(mf.labels[w]);
    rep["winner_labels"] = std::move(names);
  }
  return rep;
}

sat::SolveBudget make_budget(double timeout) {
  sat::SolveBudget b;
  b.max_seconds = timeout;
  return b;
}

int status_exit(sat::Status st, const std::string& expect) {
  if (!expect.empty()) {
    if (st == sat::Status::budget) return 2;
    bool match = (expect == "sat") == (st == sat::Status::sat);
    return match ? 0 : 1;
  }
  switch (st) {
    case sat::Status::sat: return 0;
    case sat::Status::unsat: return 1;
    case sat::Status::budget: return 2;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ordinal margin voting methods and SAT-based search"};
  app.require_subcommand(1);

  // ---- winners ----
  std::string w_matrix, w_method;
  long long w_budget = 1'000'000;
  auto* cmd_winners = app.add_subcommand("winners", "winner set of a matrix file");
  cmd_winners->add_option("--matrix", w_matrix, "matrix JSON file")->required();
  cmd_winners->add_option("--method", w_method, "sc|ssv|sv|ssv-se|ssv-put")->required();
  cmd_winners->add_option("--budget", w_budget, "linearization budget for ssv-put");

  // ---- exhaustive ----
  int e_n = 3;
  auto* cmd_exhaustive = app.add_subcommand("exhaustive", "scan all linear matrices, n <= 4");
  cmd_exhaustive->add_option("--n", e_n, "alternatives (2..4)")->required();

  // ---- prove ----
  int p_n = 5, p_enumerate = 0, p_class = -1;
  std::string p_mode = "minimal-counterexample", p_solver = default_solver_cmd();
  std::string p_out, p_expect;
  double p_timeout = -1;
  bool p_minimal = false, p_no_breaking = false;
  auto* cmd_prove = app.add_subcommand("prove", "build, solve and verify a search instance");
  cmd_prove->add_option("--n", p_n, "alternatives (2..8)")->required();
  cmd_prove->add_option("--mode", p_mode,
                        "any|counterexample|minimal-counterexample|single-sc-winner|"
                        "tournament-class|reversal-symmetry");
  cmd_prove->add_option("--class", p_class, "tournament class index (sorted manifest)");
  cmd_prove->add_flag("--minimal", p_minimal, "add minimal-counterexample clauses (single-sc-winner)");
  cmd_prove->add_flag("--no-symmetry-breaking", p_no_breaking, "omit symmetry breaking");
  cmd_prove->add_option("--enumerate", p_enumerate, "enumerate up to N models with blocking clauses");
  cmd_prove->add_option("--solver", p_solver, "external solver command (default: embedded)");
  cmd_prove->add_option("--timeout", p_timeout, "budget in seconds");
  cmd_prove->add_option("--out", p_out, "write decoded matrix JSON here");
  cmd_prove->add_option("--expect", p_expect, "sat|unsat: exit 0 iff the outcome matches");

  // ---- expand ----
  std::string x_fixture, x_out;
  int x_n = 8;
  auto* cmd_expand = app.add_subcommand("expand", "grow a counterexample to more alternatives");
  cmd_expand->add_option("--fixture", x_fixture, "counterexample matrix JSON")->required();
  cmd_expand->add_option("--n", x_n, "target alternative count")->required();
  cmd_expand->add_option("--out", x_out, "output matrix JSON");

  // ---- realize ----
  std::string r_matrix, r_out;
  auto* cmd_realize = app.add_subcommand("realize", "profile whose margins equal the matrix");
  cmd_realize->add_option("--matrix", r_matrix, "matrix JSON file")->required();
  cmd_realize->add_option("--out", r_out, "output profile JSON");

  // ---- margins ----
  std::string m_profile, m_out;
  auto* cmd_margins = app.add_subcommand("margins", "margin matrix of a profile");
  cmd_margins->add_option("--profile", m_profile, "profile JSON file")->required();
  cmd_margins->add_option("--out", m_out, "output matrix JSON");

  // ---- sample ----
  int s_n = 7, s_voters = 10'000, s_profiles = 1;
  std::uint64_t s_seed = 1;
  bool s_sc_mean = false;
  std::string s_out;
  auto* cmd_sample = app.add_subcommand("sample", "impartial-culture profiles");
  cmd_sample->add_option("--n", s_n, "alternatives");
  cmd_sample->add_option("--voters", s_voters, "ballots per profile (even)");
  cmd_sample->add_option("--seed", s_seed, "random seed");
  cmd_sample->add_option("--profiles", s_profiles, "number of profiles");
  cmd_sample->add_flag("--sc-mean", s_sc_mean, "report mean undefeated-set size over profiles");
  cmd_sample->add_option("--out", s_out, "write the (last) profile JSON here");

  // ---- classes ----
  int c_n = 7;
  std::string c_out;
  auto* cmd_classes = app.add_subcommand("classes", "tournament isomorphism class manifest");
  cmd_classes->add_option("--n", c_n, "vertices (1..7)")->required();
  cmd_classes->add_option("--out", c_out, "write one bitstring per line here");

  // ---- encode ----
  int en_n = 5, en_class = -1;
  std::string en_mode = "minimal-counterexample", en_out;
  bool en_minimal = false, en_no_breaking = false;
  auto* cmd_encode = app.add_subcommand("encode", "emit DIMACS CNF plus variable-map sidecar");
  cmd_encode->add_option("--n", en_n, "alternatives (2..8)")->required();
  cmd_encode->add_option("--mode", en_mode, "target mode (see prove)");
  cmd_encode->add_option("--class", en_class, "tournament class index");
  cmd_encode->add_flag("--minimal", en_minimal, "add minimal-counterexample clauses");
  cmd_encode->add_flag("--no-symmetry-breaking", en_no_breaking, "omit symmetry breaking");
  cmd_encode->add_option("--out", en_out, "output path stem (.cnf, .vars.json)")->required();

  // ---- solve ----
  std::string so_cnf;
  double so_timeout = -1;
  auto* cmd_solve = app.add_subcommand("solve", "embedded solver on a DIMACS file");
  cmd_solve->add_option("--cnf", so_cnf, "DIMACS CNF path")->required();
  cmd_solve->add_option("--timeout", so_timeout, "budget in seconds");
  cmd_solve->allow_extras();  // tolerate a bare positional path

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_winners) {
      emit(winners_report(load_matrix(w_matrix), w_method, w_budget));
      return 0;
    }

    if (*cmd_exhaustive) {
      auto rep = run_exhaustive(e_n);
      json j;
      j["n"] = e_n;
      j["matrices"] = rep.matrices;
      j["ssv_outside_sc"] = rep.ssv_outside_sc;
      j["sv_ssv_disagree"] = rep.sv_ssv_disagree;
      j["seconds"] = rep.seconds;
      emit(j);
      return (rep.ssv_outside_sc == 0 && rep.sv_ssv_disagree == 0) ? 0 : 1;
    }

    if (*cmd_prove) {
      ProveConfig cfg;
      cfg.n = p_n;
      cfg.mode = sat::mode_from_string(p_mode);
      cfg.target.with_minimal = p_minimal;
      cfg.symmetry_breaking = !p_no_breaking;
      cfg.solver_cmd = p_solver;
      cfg.budget = make_budget(p_timeout);
      cfg.enumerate = p_enumerate;
      if (cfg.mode == sat::Mode::tournament_class) {
        if (p_class < 0) fail(Errc::bad_input, "tournament-class mode needs --class");
        auto classes = enumerate_tournament_classes(p_n);
        if (p_class >= (int)classes.size())
          fail(Errc::bad_input, "class index out of range (have " +
                                    std::to_string(classes.size()) + ")");
        cfg.target.class_bits = classes[p_class];
      }
      ProveOutcome out = run_prove(cfg);
      json j;
      j["n"] = p_n;
      j["mode"] = p_mode;
      j["status"] = sat::status_name(out.status);
      j["vars"] = out.num_vars;
      j["clauses"] = out.num_clauses;
      j["seconds"] = out.seconds;
      if (out.matrix) {
        j["verified"] = true;
        j["matrix"] = matrix_to_json(*out.matrix);
        if (!p_out.empty()) save_json_file(p_out, matrix_to_json(*out.matrix));
      }
      if (p_enumerate > 0) j["models"] = out.enumerated.size();
      emit(j);
      return status_exit(out.status, p_expect);
    }

    if (*cmd_expand) {
      MatrixFile mf = load_matrix(x_fixture);
      MarginMatrix grown = expand_counterexample(mf.matrix, x_n);
      json j = matrix_to_json(grown);
      if (!x_out.empty())
        save_json_file(x_out, j);
      else
        emit(j);
      return 0;
    }

    if (*cmd_realize) {
      MatrixFile mf = load_matrix(r_matrix);
      Profile p = realize(mf.matrix);
      json j = profile_to_json(p);
      if (!r_out.empty())
        save_json_file(r_out, j);
      else
        emit(j);
      return 0;
    }

    if (*cmd_margins) {
      Profile p = load_profile(m_profile);
      json j = matrix_to_json(margins(p));
      if (!m_out.empty())
        save_json_file(m_out, j);
      else
        emit(j);
      return 0;
    }

    if (*cmd_sample) {
      if (s_sc_mean) {
        double mean = mean_sc_winner_count(s_n, s_voters, s_profiles, s_seed);
        json j;
        j["n"] = s_n;
        j["voters"] = s_voters;
        j["profiles"] = s_profiles;
        j["seed"] = s_seed;
        j["mean_sc_winners"] = mean;
        emit(j);
        return 0;
      }
      Profile last;
      for (int i = 0; i < s_profiles; ++i)
        last = sample_impartial_culture(s_n, s_voters, s_seed + (std::uint64_t)i);
      json j = profile_to_json(last);
      if (!s_out.empty())
        save_json_file(s_out, j);
      else
        emit(j);
      return 0;
    }

    if (*cmd_classes) {
      auto classes = enumerate_tournament_classes(c_n);
      if (!c_out.empty()) {
        std::ofstream out(c_out);
        for (const auto& bits : classes) out << bits << "\n";
      } else {
        json j;
        j["n"] = c_n;
        j["count"] = classes.size();
        j["classes"] = classes;
        emit(j);
      }
      return 0;
    }

    if (*cmd_encode) {
      sat::Mode mode = sat::mode_from_string(en_mode);
      sat::TargetOptions opt;
      opt.with_minimal = en_minimal;
      if (mode == sat::Mode::tournament_class) {
        if (en_class < 0) fail(Errc::bad_input, "tournament-class mode needs --class");
        auto classes = enumerate_tournament_classes(en_n);
        if (en_class >= (int)classes.size()) fail(Errc::bad_input, "class index out of range");
        opt.class_bits = classes[en_class];
      }
      auto inst = sat::build_instance(en_n, mode, opt, !en_no_breaking);
      std::ofstream cnf_out(en_out + ".cnf");
      cnf_out << sat::emit_dimacs(inst.cnf);
      save_json_file(en_out + ".vars.json", inst.catalog.var_map());
      std::cerr << "wrote " << en_out << ".cnf (" << inst.cnf.num_vars << " vars, "
                << inst.cnf.clauses.size() << " clauses) and " << en_out << ".vars.json\n";
      return 0;
    }

    if (*cmd_solve) {
      std::ifstream in(so_cnf);
      if (!in) fail(Errc::bad_input, "cannot open " + so_cnf);
      std::stringstream buf;
      buf << in.rdbuf();
      sat::CnfInstance cnf = sat::parse_dimacs(buf.str());
      sat::SolveResult res = sat::solve_embedded(cnf, make_budget(so_timeout));
      std::printf("c %d vars %zu clauses, %lld conflicts %lld decisions\n", cnf.num_vars,
                  cnf.clauses.size(), res.conflicts, res.decisions);
      if (res.status == sat::Status::sat) {
        std::printf("s SATISFIABLE\n%s", sat::format_model_lines(res.model, cnf.num_vars).c_str());
        return 10;
      }
      if (res.status == sat::Status::unsat) {
        std::printf("s UNSATISFIABLE\n");
        return 20;
      }
      std::printf("s UNKNOWN\n");
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
