#pragma once

#include <stdexcept>
#include <string>

namespace ordvote {

enum class Errc {
  bad_shape,
  odd_entry,
  not_skew_symmetric,
  bad_alternative,
  last_alternative,
  not_linear,
  not_three_alternatives,
  not_tournament,
  too_large,
  budget_exceeded,
  odd_voter_count,
  odd_margin,
  incompatible_modes,
  not_linear_decoded,
  malformed_solver_output,
  solver_spawn_failure,
  verification_failed,
  bad_input,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::bad_shape: return "BadShape";
    case Errc::odd_entry: return "OddEntry";
    case Errc::not_skew_symmetric: return "NotSkewSymmetric";
    case Errc::bad_alternative: return "BadAlternative";
    case Errc::last_alternative: return "LastAlternative";
    case Errc::not_linear: return "NotLinear";
    case Errc::not_three_alternatives: return "NotThreeAlternatives";
    case Errc::not_tournament: return "NotTournament";
    case Errc::too_large: return "TooLarge";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::odd_voter_count: return "OddVoterCount";
    case Errc::odd_margin: return "OddBallotCountProducingOddMargins";
    case Errc::incompatible_modes: return "IncompatibleModes";
    case Errc::not_linear_decoded: return "NotLinearDecoded";
    case Errc::malformed_solver_output: return "MalformedSolverOutput";
    case Errc::solver_spawn_failure: return "SolverSpawnFailure";
    case Errc::verification_failed: return "VerificationFailed";
    case Errc::bad_input: return "BadInput";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace ordvote
