#include "pricegame/potential.hpp"

#include <cmath>
#include <utility>

namespace pricegame {

PotentialFunction construct_sum_potential(const GameInstance& game) {
  game.validate_structure();
  for (std::size_t i = 0; i < game.num_players(); ++i)
    if (!game.players[i].own_term_depends_only_on_self)
      throw UsageError("player " + std::to_string(i + 1) +
                       " own term couples to rivals' decisions; the sum potential needs "
                       "own-action terms");
  std::vector<std::function<double(std::span<const double>)>> terms;
  terms.reserve(game.num_players());
  for (const auto& pl : game.players) terms.push_back(pl.own_term);
  PotentialFunction out;
  out.value = [terms = std::move(terms)](std::span<const double> x, std::span<const double>) {
    double s = 0.0;
    for (const auto& t : terms) s += t(x);
    return s;
  };
  out.kind = PotentialKind::SumOfOwnTerms;
  out.scope = PotentialScope::PlayersOnly;
  // the difference identity is exact for own-action terms
  out.verified = true;
  return out;
}

PotentialReport verify_potential(const GameInstance& game, const PotentialFunction& candidate,
                                 int samples, std::uint64_t seed, const Tolerances& tol) {
  game.validate_structure();
  if (!candidate.value) throw UsageError("potential candidate has no value function");
  Rng rng(seed);
  JointGrid grid(game);
  for (std::size_t i = 0; i < game.num_players(); ++i)
    if (grid.player_points(i).empty())
      throw InfeasibleError("player " + std::to_string(i + 1) + " has no feasible grid point");

  const bool full = candidate.scope == PotentialScope::FullGame;
  const bool gamma_moves =
      full && game.formulation == Formulation::TakingTm && game.price.depends_on_x;

  PotentialReport report;
  PotentialMove worst;
  Vec x(game.joint_dims());
  for (int s = 0; s < samples; ++s) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const auto& pts = grid.player_points(i);
      const Vec& pick = pts[rng.bounded(pts.size())];
      std::copy(pick.begin(), pick.end(), x.begin() + static_cast<std::ptrdiff_t>(off));
      off += pick.size();
    }
    std::vector<Vec> prices = price_feasible_points(game, x);
    if (prices.empty()) continue;
    const Vec& p = prices[rng.bounded(prices.size())];

    // player side: unilateral block move at fixed price
    std::size_t i = rng.bounded(game.num_players());
    std::vector<Vec> moves =
        gamma_moves ? gamma_set(game, p, i, x, tol) : grid.player_points(i);
    if (!moves.empty()) {
      const Vec& to = moves[rng.bounded(moves.size())];
      auto [boff, blen] = game.block(i);
      Vec xafter(x);
      std::copy(to.begin(), to.end(), xafter.begin() + static_cast<std::ptrdiff_t>(boff));
      double lhs = candidate.value(xafter, p) - candidate.value(x, p);
      double rhs = full ? game.payoff(i, xafter, p) - game.payoff(i, x, p)
                        : game.players[i].own_term(xafter) - game.players[i].own_term(x);
      double gap = std::fabs(lhs - rhs);
      ++report.samples;
      if (gap > report.max_violation) {
        report.max_violation = gap;
        worst = PotentialMove{static_cast<int>(i), x, xafter, p, p, lhs, rhs};
      }
      (void)blen;
    }

    // price side: move within M(x) at fixed decisions
    if (full && prices.size() >= 2) {
      std::size_t j = rng.bounded(prices.size() - 1);
      const Vec& q = prices[j + (prices[j] == p ? 1 : 0)];
      double lhs = candidate.value(x, q) - candidate.value(x, p);
      double rhs = game.price.objective ? game.price.objective(x, p) - game.price.objective(x, q)
                                        : 0.0;
      double gap = std::fabs(lhs - rhs);
      ++report.samples;
      if (gap > report.max_violation) {
        report.max_violation = gap;
        worst = PotentialMove{-1, x, x, p, q, lhs, rhs};
      }
    }
  }
  report.holds = report.max_violation <= tol.eps_pot;
  if (!report.holds) report.witness = std::move(worst);
  return report;
}

PotentialFunction construct_tm_potential(const GameInstance& game, int samples,
                                         std::uint64_t seed, const Tolerances& tol) {
  if (game.formulation != Formulation::TakingTm)
    throw UsageError(
        "the full-game potential construction applies to the modified price-taking formulation");
  PotentialFunction pi = construct_sum_potential(game);

  const bool own_only = game.shared.depends_only_on_own_action;
  auto h = game.shared.h;
  auto f = game.price.objective;  // null means f == 0
  std::vector<std::pair<std::size_t, std::size_t>> blocks;
  blocks.reserve(game.num_players());
  for (std::size_t i = 0; i < game.num_players(); ++i) blocks.push_back(game.block(i));
  auto pival = pi.value;

  PotentialFunction out;
  out.value = [own_only, h, f, blocks = std::move(blocks), pival](
                  std::span<const double> x, std::span<const double> p) {
    double hv = 0.0;
    if (own_only) {
      for (auto [boff, blen] : blocks) hv += h(p, x.subspan(boff, blen));
    } else {
      hv = h(p, x);
    }
    double fv = f ? f(x, p) : 0.0;
    return hv + pival(x, p) - fv;
  };
  out.kind = PotentialKind::SumOfOwnTerms;
  out.scope = PotentialScope::FullGame;

  PotentialReport rep = verify_potential(game, out, samples, seed, tol);
  if (!rep.holds) {
    const PotentialMove& w = *rep.witness;
    std::string side =
        w.player < 0
            ? "the price player moving " + format_vec(w.p_before) + " -> " + format_vec(w.p_after) +
                  " at x = " + format_vec(w.x_before)
            : "player " + std::to_string(w.player + 1) + " moving " + format_vec(w.x_before) +
                  " -> " + format_vec(w.x_after) + " at p = " + format_vec(w.p_before);
    throw UsageError("full-game potential candidate refused: " + side +
                     " changes its objective by " + format_double(w.payoff_delta) +
                     " but the candidate by " + format_double(w.potential_delta));
  }
  out.verified = true;
  return out;
}

}  // namespace pricegame
