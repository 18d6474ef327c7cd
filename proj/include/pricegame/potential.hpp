#pragma once

#include <functional>
#include <optional>

#include "pricegame/game.hpp"

namespace pricegame {

enum class PotentialKind { SumOfOwnTerms, UserSupplied };

/// PlayersOnly: pi(x), difference identity against the own terms g_i.
/// FullGame: Pi(x, p), difference identities against both the player
/// payoffs (price fixed) and the price objective (decisions fixed).
enum class PotentialScope { PlayersOnly, FullGame };

struct PotentialFunction {
  std::function<double(std::span<const double> x, std::span<const double> p)> value;
  PotentialKind kind = PotentialKind::UserSupplied;
  PotentialScope scope = PotentialScope::PlayersOnly;
  bool verified = false;
};

/// One sampled unilateral move and the two difference values that should
/// have matched. player == -1 marks a price-player move.
struct PotentialMove {
  int player = -1;
  Vec x_before;
  Vec x_after;
  Vec p_before;
  Vec p_after;
  double potential_delta = 0.0;
  double payoff_delta = 0.0;
};

struct PotentialReport {
  bool holds = true;
  double max_violation = 0.0;
  int samples = 0;
  std::optional<PotentialMove> witness;  // worst violating move when !holds
};

/// pi(x) = sum of the players' own terms. Requires every own term to be
/// flagged (and validated) as own-action only; throws UsageError naming the
/// first player whose term couples to rivals.
PotentialFunction construct_sum_potential(const GameInstance& game);

/// Samples unilateral moves and checks the difference identities for the
/// candidate's scope; eps_pot bounds the allowed mismatch. PlayersOnly:
/// pi(x') - pi(x) vs g_i(x') - g_i(x). FullGame adds the fixed-price payoff
/// identity and, where M(x) has more than one candidate price, the price
/// objective identity Pi(x,p') - Pi(x,p) vs f(x,p) - f(x,p'). Moves stay in
/// Gamma_i(p, x^-i) for modified price-taking games with coupled regions.
PotentialReport verify_potential(const GameInstance& game, const PotentialFunction& candidate,
                                 int samples = 1000, std::uint64_t seed = 0,
                                 const Tolerances& tol = {});

/// Full-game candidate Pi(x, p) = h + pi(x) - f(x, p) for the modified
/// price-taking formulation (h summed per player when it is own-action
/// only; f == 0 when the price objective is null). The candidate is
/// verified by sampling before it is returned; when the identities fail the
/// construction refuses with a UsageError quoting the worst witness move.
PotentialFunction construct_tm_potential(const GameInstance& game, int samples = 1000,
                                         std::uint64_t seed = 0, const Tolerances& tol = {});

}  // namespace pricegame
