#pragma once

#include "pricegame/game.hpp"
#include "pricegame/potential.hpp"

namespace pricegame {

/// Knobs shared by the solvers, the checkers and the enumerator.
///   grid_refinements   rounds of action-grid shrinking around the incumbent
///                      argmax (0 = the declared grids, certificates exact)
///   multistarts        independent starts of the best-response sweep
///   seed               drives multistart draws and sampling
///   max_br_iterations  sweep cap for the best-response solver
///   br_damping         step factor applied to player moves (price replies
///                      are always exact)
///   enumeration_budget refuse exhaustive work above this many evaluations
///   lipschitz_bound    optional payoff Lipschitz constant; > 0 adds an
///                      off-grid validity note to certificates
///   potential_samples  sample count for potential verification
///   price_grid_points  override for box-shaped price regions
struct SolverConfig {
  int grid_refinements = 0;
  int multistarts = 1;
  std::uint64_t seed = 0;
  int max_br_iterations = 200;
  double br_damping = 0.5;
  std::size_t enumeration_budget = 2000000;
  double lipschitz_bound = 0.0;
  int potential_samples = 1000;
  std::optional<int> price_grid_points;
};

enum class SolveMethod { P1Max, P2Max, PtMax, BestResponse };

std::string to_string(SolveMethod m);

struct SolveResult {
  FeasiblePoint point;
  double surrogate_value = 0.0;
  SolveMethod method = SolveMethod::P1Max;
  int iterations = 0;
  std::size_t evaluations = 0;
  bool converged = true;
  /// Price-taking runs: whether each player's deviation set at the returned
  /// point equals its full action grid, and the conjunction.
  std::vector<char> gamma_full_by_player;
  bool gamma_full = false;
};

/// Maximize h(p, x) + pi(x) over the pairs (x in the joint grid, p solving
/// S(x)). Grid argmaxes are anticipative equilibria of the unrestricted
/// game. Needs a joint-decision shared term (single player excepted) and a
/// verified players-only potential.
SolveResult solve_e1(const GameInstance& game, const PotentialFunction& pi,
                     const SolverConfig& config = {}, const Tolerances& tol = {});

/// Maximize the per-player sum of h(p, x_i) plus pi(x) over consistent
/// conjecture points (all conjectures equal and solving S(x)). Grid
/// argmaxes are consistent-conjecture equilibria. Needs an own-action
/// shared term and a verified players-only potential.
SolveResult solve_e2_consistent(const GameInstance& game, const PotentialFunction& pi,
                                const SolverConfig& config = {}, const Tolerances& tol = {});

/// Maximize a validated full-game potential over x in the joint grid and
/// p in the M(x) candidates. Grid argmaxes are equilibria of the modified
/// price-taking game. The result reports, per player, whether the deviation
/// set at the argmax covers the full action grid; when every flag is true
/// the point is an equilibrium of the unmodified price-taking game too.
SolveResult solve_tm(const GameInstance& game, const PotentialFunction& full_potential,
                     const SolverConfig& config = {}, const Tolerances& tol = {});

/// Damped Gauss-Seidel best-response sweeps at price-taking semantics:
/// players argmax over their own grid at the current price, the price
/// player replies exactly. Converged when an undamped sweep no longer
/// moves; the best converged start (by total payoff) wins.
SolveResult solve_t1_best_response(const GameInstance& game, const SolverConfig& config = {},
                                   const Tolerances& tol = {});

}  // namespace pricegame
