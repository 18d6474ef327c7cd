#pragma once

#include <optional>

#include "pricegame/game.hpp"
#include "pricegame/solver.hpp"

namespace pricegame {

enum class Verdict { Certified, Refuted, Inconclusive };

std::string to_string(Verdict v);

/// Which equilibrium notion a check applies:
///   E1            anticipative, deviator expects the best price reply
///   E2Consistent  anticipative with consistent conjectures; deviations
///                 must keep the shared conjecture optimal
///   T             price-taking, deviations over the full own grid
///   Tm            price-taking, deviations restricted to Gamma_i(p, x^-i)
enum class CheckKind { E1, E2Consistent, T, Tm };

std::string to_string(CheckKind k);

struct DeviationWitness {
  int player = -1;  // -1: the price player
  Vec from;         // deviating player's incumbent block (price for -1)
  Vec to;           // improving block (price for -1)
  Vec price;        // price under which the improvement was measured
  double improvement = 0.0;
};

struct EquilibriumCertificate {
  FeasiblePoint point;
  CheckKind kind = CheckKind::E1;
  Verdict verdict = Verdict::Inconclusive;
  /// Best improvement found per player over its deviation set (<= eps_dev
  /// when certified; may be slightly negative when the incumbent pair is
  /// not itself a grid candidate; 0 for an empty deviation set).
  Vec per_player_gap;
  /// Price-taking checks: f(x, p) above the best value on M(x); there is
  /// no price deviator in the anticipative checks, where optimality of p
  /// is a precondition instead.
  double price_player_gap = 0.0;
  /// Price-taking checks: per player, whether the restricted deviation set
  /// covered the full action grid, and the conjunction. Empty otherwise.
  std::vector<char> gamma_full_by_player;
  bool gamma_full = false;
  Tolerances tol;
  std::size_t evaluations = 0;
  /// The argmax deviation over all deviators, recorded even when certified;
  /// unset only when nothing was evaluated (no players, no price choice).
  std::optional<DeviationWitness> worst;
  std::string note;
};

/// Anticipative check. The point carries one price; deviations scan the
/// deviator's full grid and expect the best price reply among SOL[S(x')].
/// The candidate must lie in F1 (decision in the joint action set and the
/// price solving S(x)); anything else is a DomainError.
EquilibriumCertificate check_e1(const GameInstance& game, const FeasiblePoint& point,
                                const SolverConfig& config = {}, const Tolerances& tol = {});

/// Consistent-conjecture check. The point carries one conjecture per player
/// (a single price is broadcast). The candidate must lie in F2 with equal
/// conjectures (DomainError otherwise). With several players a deviation
/// must keep the shared conjecture optimal at the new decision; a single
/// player re-optimizes its conjecture freely.
EquilibriumCertificate check_e2_consistent(const GameInstance& game, const FeasiblePoint& point,
                                           const SolverConfig& config = {},
                                           const Tolerances& tol = {});

/// Price-taking check, deviations over the full own grid at the fixed
/// price. The candidate must lie in A (DomainError otherwise); a feasible
/// but suboptimal price is a price-player refutation.
EquilibriumCertificate check_t(const GameInstance& game, const FeasiblePoint& point,
                               const SolverConfig& config = {}, const Tolerances& tol = {});

/// Modified price-taking check: like check_t with deviations restricted to
/// the blocks keeping p inside M(x_i', x^-i). Records per player whether
/// that restriction was binding.
EquilibriumCertificate check_tm(const GameInstance& game, const FeasiblePoint& point,
                                const SolverConfig& config = {}, const Tolerances& tol = {});

/// Exhaustively check every feasible grid point of the kind's domain (the
/// solved-price fibers for the anticipative kinds, the whole of M(x) for
/// the price-taking kinds) and return the certified points in grid order.
/// Work above config.enumeration_budget raises BudgetError carrying the
/// estimate.
std::vector<EquilibriumCertificate> enumerate_equilibria(const GameInstance& game, CheckKind kind,
                                                         const SolverConfig& config = {},
                                                         const Tolerances& tol = {});

}  // namespace pricegame
