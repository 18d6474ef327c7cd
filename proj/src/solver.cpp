#include "pricegame/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pricegame/potential.hpp"

namespace pricegame {

std::string to_string(SolveMethod m) {
  switch (m) {
    case SolveMethod::P1Max: return "p1_max";
    case SolveMethod::P2Max: return "p2_max";
    case SolveMethod::PtMax: return "pt_max";
    case SolveMethod::BestResponse: return "best_response";
  }
  return "?";
}

namespace {

std::vector<std::vector<Vec>> player_grids(const GameInstance& game) {
  std::vector<std::vector<Vec>> grids;
  grids.reserve(game.num_players());
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    grids.push_back(game.players[i].own_grid());
    if (grids.back().empty())
      throw InfeasibleError("player " + std::to_string(i + 1) +
                            " has no feasible grid point in its action box");
  }
  return grids;
}

std::size_t joint_cells(const std::vector<std::vector<Vec>>& grids) {
  std::size_t n = 1;
  for (const auto& g : grids) n *= g.size();
  return n;
}

void check_budget(std::size_t required, const SolverConfig& config, const char* what) {
  if (required > config.enumeration_budget)
    throw BudgetError(std::string(what) + " needs " + std::to_string(required) +
                          " evaluations; the budget is " +
                          std::to_string(config.enumeration_budget),
                      required, config.enumeration_budget);
}

void for_each_joint(const GameInstance& game, const std::vector<std::vector<Vec>>& grids,
                    const std::function<void(std::span<const double>)>& fn) {
  std::size_t n = grids.size();
  for (const auto& g : grids)
    if (g.empty()) return;
  Vec x(game.joint_dims());
  std::vector<std::size_t> idx(n, 0);
  auto write_block = [&](std::size_t i) {
    auto [off, len] = game.block(i);
    (void)len;
    const Vec& src = grids[i][idx[i]];
    std::copy(src.begin(), src.end(), x.begin() + static_cast<std::ptrdiff_t>(off));
  };
  for (std::size_t i = 0; i < n; ++i) write_block(i);
  for (;;) {
    fn(x);
    std::size_t i = n;
    for (;;) {
      if (i == 0) return;
      --i;
      if (++idx[i] < grids[i].size()) {
        write_block(i);
        break;
      }
      idx[i] = 0;
      write_block(i);
    }
  }
}

/// Box shrunk around `center` with the step halved `round` times; point
/// counts and degenerate dimensions are preserved, bounds stay inside the
/// original box.
ActionBox refine_box(const ActionBox& orig, std::span<const double> center, int round) {
  ActionBox b = orig;
  for (std::size_t k = 0; k < orig.dims(); ++k) {
    if (orig.points(k) == 1) continue;
    double step = orig.step(k) / std::exp2(round);
    double half = step * static_cast<double>(orig.grid_points[k] - 1) / 2.0;
    double lo = center[k] - half, hi = center[k] + half;
    if (lo < orig.lower[k]) {
      lo = orig.lower[k];
      hi = std::min(orig.upper[k], lo + 2.0 * half);
    } else if (hi > orig.upper[k]) {
      hi = orig.upper[k];
      lo = std::max(orig.lower[k], hi - 2.0 * half);
    }
    b.lower[k] = lo;
    b.upper[k] = hi;
  }
  return b;
}

struct ScanBest {
  double value = -std::numeric_limits<double>::infinity();
  Vec x;
  Vec p;
  std::size_t evaluations = 0;
  int rounds = 0;
};

/// Exhaustive argmax of `value` over (joint grid) x (prices_at(x)), with
/// optional refinement rounds shrinking the action grids around the
/// incumbent. First maximum in scan order wins ties.
ScanBest scan_argmax(
    const GameInstance& game, const SolverConfig& config,
    const std::function<std::vector<Vec>(std::span<const double>)>& prices_at,
    const std::function<double(std::span<const double>, std::span<const double>)>& value,
    const char* what) {
  ScanBest best;
  std::vector<std::vector<Vec>> grids = player_grids(game);
  for (int round = 0; round <= std::max(0, config.grid_refinements); ++round) {
    if (round > 0) {
      grids.clear();
      for (std::size_t i = 0; i < game.num_players(); ++i) {
        PlayerSpec shrunk = game.players[i];
        auto [off, len] = game.block(i);
        shrunk.action = refine_box(game.players[i].action,
                                   std::span<const double>(best.x).subspan(off, len), round);
        // a filter may empty the shrunken box; the round then scans nothing
        // and the incumbent from the previous round stands
        grids.push_back(shrunk.own_grid());
      }
    }
    check_budget(joint_cells(grids), config, what);
    for_each_joint(game, grids, [&](std::span<const double> x) {
      for (const Vec& p : prices_at(x)) {
        double v = value(x, p);
        ++best.evaluations;
        if (v > best.value) {
          best.value = v;
          best.x.assign(x.begin(), x.end());
          best.p = p;
        }
      }
    });
    best.rounds = round + 1;
    if (best.x.empty())
      throw InfeasibleError(std::string(what) + " found no candidate point");
  }
  return best;
}

double sum_shared(const GameInstance& game, std::span<const double> x,
                  std::span<const double> p) {
  if (!game.shared.depends_only_on_own_action) return game.shared.h(p, x);
  double s = 0.0;
  for (std::size_t i = 0; i < game.num_players(); ++i) s += game.shared.h(p, game.own_block(i, x));
  return s;
}

void require_players_potential(const PotentialFunction& pi) {
  if (!pi.value || pi.scope != PotentialScope::PlayersOnly || !pi.verified)
    throw UsageError("the surrogate needs a verified players-only potential");
}

}  // namespace

SolveResult solve_e1(const GameInstance& game, const PotentialFunction& pi,
                     const SolverConfig& config, const Tolerances& tol) {
  game.validate_structure();
  if (game.formulation != Formulation::AnticipativeE1)
    throw UsageError("solve_e1 applies to the anticipative formulation");
  if (game.shared.depends_only_on_own_action && game.num_players() > 1)
    throw UsageError(
        "the anticipative surrogate needs a shared term over the joint decision; use the "
        "consistent-conjecture solver for own-action shared terms");
  require_players_potential(pi);

  ScanBest best = scan_argmax(
      game, config,
      [&](std::span<const double> x) { return solve_price_problem(game, x, tol, config.price_grid_points); },
      [&](std::span<const double> x, std::span<const double> p) {
        return sum_shared(game, x, p) + pi.value(x, p);
      },
      "the anticipative surrogate scan");

  SolveResult out;
  out.point = FeasiblePoint{best.x, {best.p}, SetTag::F1};
  out.surrogate_value = best.value;
  out.method = SolveMethod::P1Max;
  out.iterations = best.rounds;
  out.evaluations = best.evaluations;
  return out;
}

SolveResult solve_e2_consistent(const GameInstance& game, const PotentialFunction& pi,
                                const SolverConfig& config, const Tolerances& tol) {
  game.validate_structure();
  if (game.formulation != Formulation::AnticipativeE2Consistent)
    throw UsageError("solve_e2_consistent applies to the consistent-conjecture formulation");
  require_players_potential(pi);

  ScanBest best = scan_argmax(
      game, config,
      [&](std::span<const double> x) { return solve_price_problem(game, x, tol, config.price_grid_points); },
      [&](std::span<const double> x, std::span<const double> p) {
        return sum_shared(game, x, p) + pi.value(x, p);
      },
      "the consistent-conjecture surrogate scan");

  SolveResult out;
  out.point.x = best.x;
  out.point.prices.assign(game.num_players(), best.p);
  out.point.tag = SetTag::F2;
  out.surrogate_value = best.value;
  out.method = SolveMethod::P2Max;
  out.iterations = best.rounds;
  out.evaluations = best.evaluations;
  return out;
}

SolveResult solve_tm(const GameInstance& game, const PotentialFunction& full_potential,
                     const SolverConfig& config, const Tolerances& tol) {
  game.validate_structure();
  if (game.formulation != Formulation::TakingTm)
    throw UsageError("solve_tm applies to the modified price-taking formulation");
  if (!full_potential.value || full_potential.scope != PotentialScope::FullGame ||
      !full_potential.verified)
    throw UsageError("solve_tm needs a validated full-game potential");

  ScanBest best = scan_argmax(
      game, config,
      [&](std::span<const double> x) { return price_feasible_points(game, x, config.price_grid_points); },
      [&](std::span<const double> x, std::span<const double> p) {
        return full_potential.value(x, p);
      },
      "the potential scan");

  SolveResult out;
  out.point = FeasiblePoint{best.x, {best.p}, SetTag::A};
  out.surrogate_value = best.value;
  out.method = SolveMethod::PtMax;
  out.iterations = best.rounds;
  out.evaluations = best.evaluations;
  out.gamma_full = true;
  for (std::size_t i = 0; i < game.num_players(); ++i) {
    bool full = gamma_set(game, out.point.prices[0], i, out.point.x, tol).size() ==
                game.players[i].own_grid().size();
    out.gamma_full_by_player.push_back(full ? 1 : 0);
    if (!full) out.gamma_full = false;
  }
  return out;
}

SolveResult solve_t1_best_response(const GameInstance& game, const SolverConfig& config,
                                   const Tolerances& tol) {
  game.validate_structure();
  if (game.formulation != Formulation::TakingT1 && game.formulation != Formulation::TakingTm)
    throw UsageError("the best-response solver applies to price-taking formulations");
  std::vector<std::vector<Vec>> grids = player_grids(game);
  const std::size_t n = game.num_players();
  const double damping = std::clamp(config.br_damping, 1e-3, 1.0);
  Rng rng(config.seed);

  SolveResult out;
  out.method = SolveMethod::BestResponse;
  out.converged = false;
  double best_total = -std::numeric_limits<double>::infinity();

  for (int start = 0; start < std::max(1, config.multistarts); ++start) {
    Vec x(game.joint_dims());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& pts = grids[i];
      const Vec& pick =
          start == 0 ? pts[(pts.size() - 1) / 2] : pts[rng.bounded(pts.size())];
      auto [off, len] = game.block(i);
      (void)len;
      std::copy(pick.begin(), pick.end(), x.begin() + static_cast<std::ptrdiff_t>(off));
    }

    Vec p;
    int sweeps = 0;
    auto sweep = [&](double step) {
      p = solve_price_problem(game, x, tol, config.price_grid_points).front();
      double move = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        auto [off, len] = game.block(i);
        double bestv = -std::numeric_limits<double>::infinity();
        const Vec* bestb = nullptr;
        Vec trial(x);
        for (const Vec& b : grids[i]) {
          std::copy(b.begin(), b.end(), trial.begin() + static_cast<std::ptrdiff_t>(off));
          double v = game.payoff(i, trial, p);
          ++out.evaluations;
          if (v > bestv) {
            bestv = v;
            bestb = &b;
          }
        }
        for (std::size_t k = 0; k < len; ++k) {
          double before = x[off + k];
          double after = before + step * ((*bestb)[k] - before);
          move = std::max(move, std::fabs(after - before));
          x[off + k] = after;
        }
      }
      ++sweeps;
      return move;
    };

    bool settled = false;
    for (int it = 0; it < std::max(1, config.max_br_iterations); ++it) {
      if (sweep(damping) < tol.eps_dev) {
        settled = true;
        break;
      }
    }
    // polish onto the grid and confirm the fixed point with full steps
    sweep(1.0);
    bool converged = settled && sweep(1.0) <= tol.eps_dev;

    p = solve_price_problem(game, x, tol, config.price_grid_points).front();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += game.payoff(i, x, p);

    bool better = (converged && !out.converged) ||
                  (converged == out.converged && total > best_total);
    if (start == 0 || better) {
      out.point = FeasiblePoint{x, {p}, SetTag::A};
      out.surrogate_value = total;
      out.iterations = sweeps;
      out.converged = converged;
      best_total = total;
    }
  }
  out.gamma_full = true;  // full-grid deviations are the point of this method
  out.gamma_full_by_player.assign(game.num_players(), 1);
  return out;
}

}  // namespace pricegame
