#pragma once

#include <optional>
#include <string>

#include "pricegame/examples.hpp"
#include "pricegame/io.hpp"
#include "pricegame/solver.hpp"
#include "pricegame/verifier.hpp"

namespace pricegame {

/// What a run does with the loaded document:
///   Solve           run the formulation's solver, then certify its point
///   Verify          certify the document's embedded candidate point
///   Enumerate       exhaustively certify every feasible grid point
///   PotentialCheck  construct and sample-verify the potential(s)
enum class RunMode { Solve, Verify, Enumerate, PotentialCheck };

std::string to_string(RunMode m);
RunMode run_mode_from_string(const std::string& s);

/// Table is the human-readable summary; Records is the newline-delimited
/// structured stream (one record per line).
enum class ReportFormat { Table, Records };

std::string to_string(ReportFormat f);
ReportFormat report_format_from_string(const std::string& s);

struct RunSpec {
  std::string input;  // file path or builtin:<name>
  /// Overrides the document's formulation; scenario documents default to
  /// taking_t1 when unset.
  std::optional<Formulation> formulation;
  RunMode mode = RunMode::Solve;
  SolverConfig config;
  Tolerances tol;
  ReportFormat format = ReportFormat::Table;
  std::string output_path;  // records are written here when nonempty
};

struct RunOutcome {
  /// 0: certified / successful enumeration / potential holds
  /// 2: refuted or inconclusive / potential fails
  /// 1: errors (unreadable or malformed input, domain violations, budget)
  int exit_code = 0;
  std::string records;
  std::string table;
  std::string error;  // diagnostic when exit_code == 1
};

/// Execute one run. Does not throw: failures land in exit_code 1 with the
/// diagnostic in `error`. Identical specs produce identical outcomes.
RunOutcome run(const RunSpec& spec);

/// Set tag matching a formulation's equilibrium notion (F1 / F2 / A).
SetTag point_tag_for(Formulation f);

/// Check kind matching a formulation's deviation semantics.
CheckKind check_kind_for(Formulation f);

/// One-shot solve dispatched on the game's formulation; builds the potential
/// the formulation needs internally (sum of own terms for the anticipative
/// kinds, the validated full-game candidate for modified price taking).
SolveResult solve_formulation(const GameInstance& game, const SolverConfig& config = {},
                              const Tolerances& tol = {});

/// One-shot check dispatched on the game's formulation. The point must
/// already carry the matching tag (see point_tag_for).
EquilibriumCertificate check_formulation(const GameInstance& game, const FeasiblePoint& point,
                                         const SolverConfig& config = {},
                                         const Tolerances& tol = {});

}  // namespace pricegame
