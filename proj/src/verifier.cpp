#include "pricegame/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace pricegame {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "Certified";
    case Verdict::Refuted: return "Refuted";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

std::string to_string(CheckKind k) {
  switch (k) {
    case CheckKind::E1: return "e1";
    case CheckKind::E2Consistent: return "e2_consistent";
    case CheckKind::T: return "t";
    case CheckKind::Tm: return "tm";
  }
  return "?";
}

namespace {

struct SolCache {
  const GameInstance* game;
  Tolerances tol;
  std::optional<int> override_pts;
  std::map<Vec, std::vector<Vec>> memo;

  const std::vector<Vec>& sol(const Vec& x) {
    auto it = memo.find(x);
    if (it != memo.end()) return it->second;
    return memo.emplace(x, solve_price_problem(*game, x, tol, override_pts)).first->second;
  }
};

void require_formulation(const GameInstance& game, CheckKind kind) {
  switch (kind) {
    case CheckKind::E1:
      if (game.formulation != Formulation::AnticipativeE1)
        throw UsageError("the anticipative check applies to the anticipative formulation");
      return;
    case CheckKind::E2Consistent:
      if (game.formulation != Formulation::AnticipativeE2Consistent)
        throw UsageError(
            "the consistent-conjecture check applies to the consistent-conjecture formulation");
      return;
    case CheckKind::T:
    case CheckKind::Tm:
      if (game.formulation != Formulation::TakingT1 && game.formulation != Formulation::TakingTm)
        throw UsageError("price-taking checks apply to price-taking formulations");
      return;
  }
}

double max_grid_step(const GameInstance& game) {
  double d = 0.0;
  for (const auto& pl : game.players)
    for (std::size_t k = 0; k < pl.action.dims(); ++k)
      if (pl.action.points(k) > 1) d = std::max(d, pl.action.step(k));
  return d;
}

EquilibriumCertificate check_point(const GameInstance& game, CheckKind kind,
                                   const FeasiblePoint& point, const SolverConfig& config,
                                   const Tolerances& tol, SolCache& cache) {
  game.validate_structure();
  require_formulation(game, kind);

  EquilibriumCertificate cert;
  cert.point = point;
  cert.kind = kind;
  cert.tol = tol;

  const Vec& x = point.x;
  if (!game.x_feasible(x))
    throw DomainError("candidate decision lies outside the joint action set");

  const std::size_t n = game.num_players();
  std::vector<Vec> conjectures;
  if (kind == CheckKind::E2Consistent) {
    if (point.prices.size() == 1)
      conjectures.assign(n, point.prices[0]);
    else if (point.prices.size() == n)
      conjectures = point.prices;
    else
      throw UsageError("the consistent-conjecture check expects one conjecture per player");
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (conjectures[i].size() != conjectures[i + 1].size() ||
          sup_distance(conjectures[i], conjectures[i + 1]) > tol.eps_eq)
        throw DomainError("candidate conjectures are not consistent");
  } else if (point.prices.size() != 1) {
    throw UsageError("this check expects exactly one price vector");
  }
  const Vec& p = kind == CheckKind::E2Consistent ? conjectures[0] : point.prices[0];
  if (p.size() != static_cast<std::size_t>(game.price_dimension))
    throw UsageError("price vector dimension mismatch");

  const bool taking = kind == CheckKind::T || kind == CheckKind::Tm;
  if (taking) {
    if (!price_feasible(game, x, p, tol))
      throw DomainError("candidate price lies outside M(x)");
  } else {
    if (!price_solves(game, x, p, tol))
      throw DomainError("candidate price does not solve the price problem at x");
  }

  double worst_improvement = -std::numeric_limits<double>::infinity();
  std::optional<DeviationWitness> worst;
  auto offer = [&](DeviationWitness w) {
    if (w.improvement > worst_improvement) {
      worst_improvement = w.improvement;
      worst = std::move(w);
    }
  };

  // the price player deviates only in the price-taking games; elsewhere
  // optimality of p is part of the candidate's domain
  if (taking) {
    if (game.price.objective) {
      const Vec& q = cache.sol(x).front();
      cert.evaluations += 1;
      cert.price_player_gap = game.price.objective(x, p) - game.price.objective(x, q);
      offer(DeviationWitness{-1, p, q, p, cert.price_player_gap});
    } else if (game.price.closed_form && !game.price.feasible_set) {
      // singleton M(x): the candidate already matches r(x) within tolerance
      cert.price_player_gap = 0.0;
    }
  }

  cert.gamma_full = taking;
  if (taking) cert.gamma_full_by_player.assign(n, 1);
  cert.per_player_gap.assign(n, 0.0);
  bool truncated = false;
  Vec trial(x);
  for (std::size_t i = 0; i < n && !truncated; ++i) {
    auto [off, len] = game.block(i);
    double incumbent = game.payoff(i, x, p);
    double best = -std::numeric_limits<double>::infinity();
    const Vec* best_block = nullptr;
    Vec best_price = p;

    std::vector<Vec> blocks;
    if (kind == CheckKind::Tm) {
      blocks = gamma_set(game, p, i, x, tol);
      if (blocks.size() != game.players[i].own_grid().size()) {
        cert.gamma_full_by_player[i] = 0;
        cert.gamma_full = false;
      }
    } else {
      blocks = game.players[i].own_grid();
    }

    for (const Vec& b : blocks) {
      if (cert.evaluations >= config.enumeration_budget) {
        truncated = true;
        cert.note = "the deviation scan for player " + std::to_string(i + 1) +
                    " exceeded the evaluation budget";
        break;
      }
      std::copy(b.begin(), b.end(), trial.begin() + static_cast<std::ptrdiff_t>(off));
      switch (kind) {
        case CheckKind::T:
        case CheckKind::Tm: {
          double v = game.payoff(i, trial, p);
          ++cert.evaluations;
          if (v > best) {
            best = v;
            best_block = &b;
          }
          break;
        }
        case CheckKind::E1: {
          for (const Vec& q : cache.sol(trial)) {
            double v = game.payoff(i, trial, q);
            ++cert.evaluations;
            if (v > best) {
              best = v;
              best_block = &b;
              best_price = q;
            }
          }
          break;
        }
        case CheckKind::E2Consistent: {
          if (n == 1) {
            for (const Vec& q : cache.sol(trial)) {
              double v = game.payoff(i, trial, q);
              ++cert.evaluations;
              if (v > best) {
                best = v;
                best_block = &b;
                best_price = q;
              }
            }
          } else {
            ++cert.evaluations;
            if (price_solves(game, trial, p, tol)) {
              double v = game.payoff(i, trial, p);
              if (v > best) {
                best = v;
                best_block = &b;
              }
            }
          }
          break;
        }
      }
    }
    std::copy(x.begin() + static_cast<std::ptrdiff_t>(off),
              x.begin() + static_cast<std::ptrdiff_t>(off + len),
              trial.begin() + static_cast<std::ptrdiff_t>(off));
    if (truncated) break;

    double gap = best_block ? best - incumbent : 0.0;
    cert.per_player_gap[i] = gap;
    if (best_block) {
      Vec from(x.begin() + static_cast<std::ptrdiff_t>(off),
               x.begin() + static_cast<std::ptrdiff_t>(off + len));
      offer(DeviationWitness{static_cast<int>(i), std::move(from), *best_block, best_price, gap});
    }
  }

  if (truncated) {
    cert.verdict = Verdict::Inconclusive;
    return cert;
  }
  cert.worst = std::move(worst);
  double max_gap = cert.price_player_gap;
  for (double g : cert.per_player_gap) max_gap = std::max(max_gap, g);
  if (max_gap > tol.eps_dev) {
    cert.verdict = Verdict::Refuted;
  } else {
    cert.verdict = Verdict::Certified;
    if (config.lipschitz_bound > 0.0) {
      double extended = tol.eps_dev + config.lipschitz_bound * max_grid_step(game);
      cert.note = "grid certificate; off-grid deviations improve by at most " +
                  format_double(extended) + " under the declared Lipschitz bound";
    }
  }
  return cert;
}

}  // namespace

EquilibriumCertificate check_e1(const GameInstance& game, const FeasiblePoint& point,
                                const SolverConfig& config, const Tolerances& tol) {
  SolCache cache{&game, tol, config.price_grid_points, {}};
  return check_point(game, CheckKind::E1, point, config, tol, cache);
}

EquilibriumCertificate check_e2_consistent(const GameInstance& game, const FeasiblePoint& point,
                                           const SolverConfig& config, const Tolerances& tol) {
  SolCache cache{&game, tol, config.price_grid_points, {}};
  return check_point(game, CheckKind::E2Consistent, point, config, tol, cache);
}

EquilibriumCertificate check_t(const GameInstance& game, const FeasiblePoint& point,
                               const SolverConfig& config, const Tolerances& tol) {
  SolCache cache{&game, tol, config.price_grid_points, {}};
  return check_point(game, CheckKind::T, point, config, tol, cache);
}

EquilibriumCertificate check_tm(const GameInstance& game, const FeasiblePoint& point,
                                const SolverConfig& config, const Tolerances& tol) {
  SolCache cache{&game, tol, config.price_grid_points, {}};
  return check_point(game, CheckKind::Tm, point, config, tol, cache);
}

std::vector<EquilibriumCertificate> enumerate_equilibria(const GameInstance& game, CheckKind kind,
                                                         const SolverConfig& config,
                                                         const Tolerances& tol) {
  game.validate_structure();
  require_formulation(game, kind);
  const bool taking = kind == CheckKind::T || kind == CheckKind::Tm;

  JointGrid grid(game);
  std::size_t deviations = 1;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    if (grid.player_points(i).empty())
      throw InfeasibleError("player " + std::to_string(i + 1) + " has no feasible grid point");
    deviations += grid.player_points(i).size();
  }
  // representative price fiber size, from the first grid decision (filters
  // act per block, so the joint of first feasible blocks is feasible)
  std::size_t fiber = 1;
  {
    Vec x0;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const Vec& b = grid.player_points(i).front();
      x0.insert(x0.end(), b.begin(), b.end());
    }
    fiber = std::max<std::size_t>(
        1, price_feasible_points(game, x0, config.price_grid_points).size());
  }
  std::size_t required = grid.size() * deviations * (taking ? fiber : 1);
  if (required > config.enumeration_budget)
    throw BudgetError("enumerating equilibria needs about " + std::to_string(required) +
                          " evaluations; the budget is " +
                          std::to_string(config.enumeration_budget),
                      required, config.enumeration_budget);

  SolCache cache{&game, tol, config.price_grid_points, {}};
  std::vector<EquilibriumCertificate> found;
  grid.for_each([&](std::span<const double> xs) {
    Vec x(xs.begin(), xs.end());
    // anticipative kinds live on the solved-price fiber; price-taking kinds
    // admit any price in M(x)
    std::vector<Vec> fiber_prices =
        taking ? price_feasible_points(game, x, config.price_grid_points) : cache.sol(x);
    for (const Vec& p : fiber_prices) {
      FeasiblePoint point;
      point.x = x;
      if (kind == CheckKind::E2Consistent) {
        point.prices.assign(game.num_players(), p);
        point.tag = SetTag::F2;
      } else {
        point.prices = {p};
        point.tag = kind == CheckKind::E1 ? SetTag::F1 : SetTag::A;
      }
      EquilibriumCertificate cert = check_point(game, kind, point, config, tol, cache);
      if (cert.verdict == Verdict::Certified) found.push_back(std::move(cert));
    }
  });
  return found;
}

}  // namespace pricegame
