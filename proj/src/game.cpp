#include "pricegame/game.hpp"

#include <algorithm>
#include <cmath>

namespace pricegame {

namespace {

double box_slack(double lo, double hi) {
  double m = std::max({1.0, std::fabs(lo), std::fabs(hi)});
  return 1e-12 * m;
}

std::vector<Vec> box_grid_generic(const Vec& lower, const Vec& upper,
                                  const std::vector<int>& grid_points) {
  std::size_t d = lower.size();
  std::vector<std::size_t> counts(d);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    counts[k] = upper[k] == lower[k] ? 1 : static_cast<std::size_t>(grid_points[k]);
    total *= counts[k];
  }
  std::vector<Vec> out;
  out.reserve(total);
  Vec point(d);
  std::vector<std::size_t> idx(d, 0);
  for (;;) {
    for (std::size_t k = 0; k < d; ++k) {
      point[k] = counts[k] == 1 ? lower[k]
                                : lower[k] + static_cast<double>(idx[k]) * (upper[k] - lower[k]) /
                                                 static_cast<double>(grid_points[k] - 1);
    }
    out.push_back(point);
    // odometer, last dimension fastest => lexicographic ascending
    std::size_t k = d;
    while (k > 0) {
      --k;
      if (++idx[k] < counts[k]) break;
      idx[k] = 0;
      if (k == 0) return out;
    }
    if (d == 0) return out;
  }
}

}  // namespace

bool ActionBox::contains(std::span<const double> v) const {
  if (v.size() != dims()) return false;
  for (std::size_t k = 0; k < dims(); ++k) {
    double s = box_slack(lower[k], upper[k]);
    if (v[k] < lower[k] - s || v[k] > upper[k] + s) return false;
  }
  return true;
}

void ActionBox::validate(const std::string& what) const {
  if (lower.size() != upper.size() || lower.size() != grid_points.size())
    throw UsageError(what + ": bound/grid size mismatch");
  if (lower.empty()) throw UsageError(what + ": empty box");
  for (std::size_t k = 0; k < dims(); ++k) {
    if (!std::isfinite(lower[k]) || !std::isfinite(upper[k]))
      throw UsageError(what + ": non-finite bound in dimension " + std::to_string(k + 1));
    if (lower[k] > upper[k])
      throw UsageError(what + ": lower > upper in dimension " + std::to_string(k + 1));
    if (grid_points[k] < 2)
      throw UsageError(what + ": grid_points must be >= 2 in dimension " + std::to_string(k + 1));
  }
}

std::vector<Vec> ActionBox::grid() const { return box_grid_generic(lower, upper, grid_points); }

std::vector<Vec> PlayerSpec::own_grid() const {
  std::vector<Vec> pts = action.grid();
  if (!own_filter) return pts;
  std::vector<Vec> out;
  out.reserve(pts.size());
  for (auto& p : pts)
    if (own_filter(p)) out.push_back(std::move(p));
  return out;
}

std::string to_string(Formulation f) {
  switch (f) {
    case Formulation::AnticipativeE1: return "anticipative_e1";
    case Formulation::AnticipativeE2Consistent: return "anticipative_e2";
    case Formulation::TakingT1: return "taking_t1";
    case Formulation::TakingTm: return "taking_tm";
  }
  return "?";
}

Formulation formulation_from_string(const std::string& s) {
  if (s == "anticipative_e1" || s == "e1") return Formulation::AnticipativeE1;
  if (s == "anticipative_e2" || s == "e2") return Formulation::AnticipativeE2Consistent;
  if (s == "taking_t1" || s == "t1") return Formulation::TakingT1;
  if (s == "taking_tm" || s == "tm") return Formulation::TakingTm;
  throw UsageError("unknown formulation '" + s + "'");
}

std::string to_string(SetTag t) {
  switch (t) {
    case SetTag::F1: return "F1";
    case SetTag::F2: return "F2";
    case SetTag::A: return "A";
  }
  return "?";
}

std::size_t GameInstance::joint_dims() const {
  std::size_t n = 0;
  for (const auto& pl : players) n += pl.action.dims();
  return n;
}

std::pair<std::size_t, std::size_t> GameInstance::block(std::size_t i) const {
  std::size_t off = 0;
  for (std::size_t j = 0; j < i; ++j) off += players[j].action.dims();
  return {off, players[i].action.dims()};
}

std::span<const double> GameInstance::own_block(std::size_t i, std::span<const double> x) const {
  auto [off, len] = block(i);
  return x.subspan(off, len);
}

bool GameInstance::x_feasible(std::span<const double> x) const {
  if (x.size() != joint_dims()) return false;
  std::size_t off = 0;
  for (const auto& pl : players) {
    auto blockspan = x.subspan(off, pl.action.dims());
    if (!pl.action.contains(blockspan)) return false;
    if (pl.own_filter && !pl.own_filter(blockspan)) return false;
    off += pl.action.dims();
  }
  return true;
}

double GameInstance::payoff(std::size_t i, std::span<const double> x,
                            std::span<const double> p) const {
  double hval;
  if (shared.depends_only_on_own_action)
    hval = shared.h(p, own_block(i, x));
  else
    hval = shared.h(p, x);
  return hval + players[i].own_term(x);
}

void GameInstance::validate_structure() const {
  if (price_dimension < 1) throw UsageError("price_dimension must be >= 1");
  // zero players is legal: the price player alone still has a problem to solve
  if (!players.empty() && !shared.h) throw UsageError("shared term is missing");
  if (!price.feasible_set && !price.closed_form)
    throw UsageError("price problem needs a feasible set or a closed-form rule");
  for (std::size_t i = 0; i < players.size(); ++i) {
    players[i].action.validate("player " + std::to_string(i + 1) + " action box");
    if (!players[i].own_term)
      throw UsageError("player " + std::to_string(i + 1) + " own term is missing");
  }
  if (formulation == Formulation::AnticipativeE2Consistent) {
    if (!shared.depends_only_on_own_action)
      throw UsageError(
          "anticipative_e2 requires the shared term to depend only on the acting player's block");
    for (const auto& pl : players)
      if (pl.action.dims() != players[0].action.dims())
        throw UsageError("anticipative_e2 requires equal block dimensions across players");
  }
}

// --- price problem -----------------------------------------------------------

namespace {

std::vector<Vec> region_candidates(const PriceRegion& region, std::optional<int> override_pts,
                                   std::size_t price_dim) {
  if (std::holds_alternative<PriceBox>(region)) {
    const auto& box = std::get<PriceBox>(region);
    if (box.lower.size() != price_dim)
      throw UsageError("price box dimension mismatch");
    for (std::size_t k = 0; k < box.lower.size(); ++k)
      if (box.lower[k] > box.upper[k])
        throw InfeasibleError("empty price region: lower > upper in price dimension " +
                              std::to_string(k + 1));
    std::vector<int> counts = box.grid_points;
    if (override_pts)
      counts.assign(box.lower.size(), *override_pts);
    return box_grid_generic(box.lower, box.upper, counts);
  }
  const auto& pts = std::get<std::vector<Vec>>(region);
  if (pts.empty()) throw InfeasibleError("empty explicit price set");
  for (const auto& p : pts)
    if (p.size() != price_dim) throw UsageError("explicit price point dimension mismatch");
  return pts;
}

bool region_contains(const PriceRegion& region, std::span<const double> p, double eps_sol) {
  if (std::holds_alternative<PriceBox>(region)) {
    const auto& box = std::get<PriceBox>(region);
    if (p.size() != box.lower.size()) return false;
    for (std::size_t k = 0; k < box.lower.size(); ++k) {
      double s = box_slack(box.lower[k], box.upper[k]);
      if (p[k] < box.lower[k] - s || p[k] > box.upper[k] + s) return false;
    }
    return true;
  }
  for (const auto& q : std::get<std::vector<Vec>>(region)) {
    if (q.size() == p.size() && sup_distance(q, p) <= eps_sol) return true;
  }
  return false;
}

}  // namespace

std::vector<Vec> price_feasible_points(const GameInstance& game, std::span<const double> x,
                                       std::optional<int> price_points_override) {
  if (!game.price.feasible_set) {
    Vec p = game.price.closed_form(x);
    if (p.size() != static_cast<std::size_t>(game.price_dimension))
      throw UsageError("closed-form price rule returned wrong dimension");
    for (double v : p)
      if (!std::isfinite(v)) throw EvalError("closed-form price rule returned a non-finite value");
    return {std::move(p)};
  }
  return region_candidates(game.price.feasible_set(x), price_points_override,
                           static_cast<std::size_t>(game.price_dimension));
}

std::vector<Vec> solve_price_problem(const GameInstance& game, std::span<const double> x,
                                     const Tolerances& tol,
                                     std::optional<int> price_points_override) {
  if (game.price.closed_form) {
    Vec p = game.price.closed_form(x);
    if (p.size() != static_cast<std::size_t>(game.price_dimension))
      throw UsageError("closed-form price rule returned wrong dimension");
    for (double v : p)
      if (!std::isfinite(v)) throw EvalError("closed-form price rule returned a non-finite value");
    return {std::move(p)};
  }
  std::vector<Vec> candidates = price_feasible_points(game, x, price_points_override);
  if (!game.price.objective) return candidates;

  std::vector<double> fv(candidates.size());
  double fmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double v = game.price.objective(x, candidates[i]);
    if (!std::isfinite(v))
      throw EvalError("price objective is non-finite on M(x)");
    fv[i] = v;
    fmin = std::min(fmin, v);
  }
  std::vector<Vec> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (fv[i] <= fmin + tol.eps_sol) out.push_back(candidates[i]);
  return out;
}

bool price_feasible(const GameInstance& game, std::span<const double> x, std::span<const double> p,
                    const Tolerances& tol) {
  if (p.size() != static_cast<std::size_t>(game.price_dimension)) return false;
  if (!game.price.feasible_set) {
    Vec r = game.price.closed_form(x);
    return sup_distance(r, p) <= tol.eps_sol;
  }
  return region_contains(game.price.feasible_set(x), p, tol.eps_sol);
}

bool price_solves(const GameInstance& game, std::span<const double> x, std::span<const double> p,
                  const Tolerances& tol) {
  if (p.size() != static_cast<std::size_t>(game.price_dimension)) return false;
  if (game.price.closed_form) {
    Vec r = game.price.closed_form(x);
    return sup_distance(r, p) <= tol.eps_sol;
  }
  PriceRegion region = game.price.feasible_set(x);
  if (!region_contains(region, p, tol.eps_sol)) return false;
  if (!game.price.objective) return true;
  double fp = game.price.objective(x, p);
  if (!std::isfinite(fp)) return false;
  std::vector<Vec> candidates = region_candidates(region, std::nullopt,
                                                  static_cast<std::size_t>(game.price_dimension));
  double fmin = std::numeric_limits<double>::infinity();
  for (const auto& q : candidates) {
    double v = game.price.objective(x, q);
    if (!std::isfinite(v)) throw EvalError("price objective is non-finite on M(x)");
    fmin = std::min(fmin, v);
  }
  return fp <= fmin + tol.eps_sol;
}

// --- membership --------------------------------------------------------------

bool member_f1(const GameInstance& game, std::span<const double> x, std::span<const double> p,
               const Tolerances& tol) {
  return game.x_feasible(x) && price_solves(game, x, p, tol);
}

bool member_f2(const GameInstance& game, std::span<const double> x,
               const std::vector<Vec>& conjectures, const Tolerances& tol) {
  if (game.formulation != Formulation::AnticipativeE2Consistent)
    throw UsageError("consistent-conjecture membership needs an anticipative "
                     "consistent-conjecture game");
  if (conjectures.size() != game.num_players()) return false;
  if (!game.x_feasible(x)) return false;
  for (std::size_t i = 0; i < conjectures.size(); ++i)
    for (std::size_t j = i + 1; j < conjectures.size(); ++j)
      if (conjectures[i].size() != conjectures[j].size() ||
          sup_distance(conjectures[i], conjectures[j]) > tol.eps_eq)
        return false;
  for (const auto& p : conjectures)
    if (!price_solves(game, x, p, tol)) return false;
  return true;
}

bool member_a(const GameInstance& game, std::span<const double> x, std::span<const double> p,
              const Tolerances& tol) {
  return game.x_feasible(x) && price_feasible(game, x, p, tol);
}

std::vector<Vec> gamma_set(const GameInstance& game, std::span<const double> p, std::size_t i,
                           std::span<const double> x_rivals, const Tolerances& tol) {
  if (game.formulation != Formulation::TakingT1 && game.formulation != Formulation::TakingTm)
    throw UsageError("gamma_set is defined for price-taking formulations only");
  if (i >= game.num_players()) throw UsageError("gamma_set: no such player");
  std::vector<Vec> own = game.players[i].own_grid();
  if (!game.price.depends_on_x) return own;

  Vec x(x_rivals.begin(), x_rivals.end());
  if (x.size() != game.joint_dims()) throw UsageError("gamma_set: joint decision size mismatch");
  auto [off, len] = game.block(i);
  std::vector<Vec> out;
  for (const auto& xi : own) {
    std::copy(xi.begin(), xi.end(), x.begin() + static_cast<std::ptrdiff_t>(off));
    if (price_feasible(game, x, p, tol)) out.push_back(xi);
  }
  return out;
}

// --- payoff with validation ---------------------------------------------------

double evaluate_payoff(const GameInstance& game, std::size_t i, std::span<const double> x,
                       std::span<const double> p, const Tolerances& tol) {
  if (i >= game.num_players()) throw UsageError("evaluate_payoff: no such player");
  if (x.size() != game.joint_dims())
    throw DomainError("joint decision has " + std::to_string(x.size()) + " coordinates, expected " +
                      std::to_string(game.joint_dims()));
  std::size_t off = 0;
  for (std::size_t j = 0; j < game.num_players(); ++j) {
    const auto& pl = game.players[j];
    for (std::size_t k = 0; k < pl.action.dims(); ++k) {
      double v = x[off + k];
      double s = box_slack(pl.action.lower[k], pl.action.upper[k]);
      if (!(v >= pl.action.lower[k] - s && v <= pl.action.upper[k] + s))
        throw DomainError("player " + std::to_string(j + 1) + " coordinate " +
                          std::to_string(k + 1) + " = " + format_double(v) + " outside [" +
                          format_double(pl.action.lower[k]) + ", " +
                          format_double(pl.action.upper[k]) + "]");
    }
    auto blockspan = x.subspan(off, pl.action.dims());
    if (pl.own_filter && !pl.own_filter(blockspan))
      throw DomainError("player " + std::to_string(j + 1) + " block violates its feasibility filter");
    off += pl.action.dims();
  }
  if (p.size() != static_cast<std::size_t>(game.price_dimension))
    throw DomainError("price vector has " + std::to_string(p.size()) + " coordinates, expected " +
                      std::to_string(game.price_dimension));
  if (!game.price.feasible_set) {
    Vec r = game.price.closed_form(x);
    for (std::size_t k = 0; k < r.size(); ++k)
      if (std::fabs(r[k] - p[k]) > tol.eps_sol)
        throw DomainError("price coordinate " + std::to_string(k + 1) + " = " + format_double(p[k]) +
                          " does not match the closed-form value " + format_double(r[k]));
  } else {
    PriceRegion region = game.price.feasible_set(x);
    if (std::holds_alternative<PriceBox>(region)) {
      const auto& box = std::get<PriceBox>(region);
      for (std::size_t k = 0; k < box.lower.size(); ++k) {
        double s = box_slack(box.lower[k], box.upper[k]);
        if (!(p[k] >= box.lower[k] - s && p[k] <= box.upper[k] + s))
          throw DomainError("price coordinate " + std::to_string(k + 1) + " = " +
                            format_double(p[k]) + " outside M(x) bounds [" +
                            format_double(box.lower[k]) + ", " + format_double(box.upper[k]) + "]");
      }
    } else {
      const auto& pts = std::get<std::vector<Vec>>(region);
      Vec lo = pts.front(), hi = pts.front();
      for (const auto& q : pts)
        for (std::size_t k = 0; k < q.size(); ++k) {
          lo[k] = std::min(lo[k], q[k]);
          hi[k] = std::max(hi[k], q[k]);
        }
      for (std::size_t k = 0; k < lo.size(); ++k) {
        double s = box_slack(lo[k], hi[k]) + tol.eps_sol;
        if (!(p[k] >= lo[k] - s && p[k] <= hi[k] + s))
          throw DomainError("price coordinate " + std::to_string(k + 1) + " = " +
                            format_double(p[k]) + " outside the bounding box of M(x)");
      }
    }
  }
  return game.payoff(i, x, p);
}

// --- joint grid ---------------------------------------------------------------

JointGrid::JointGrid(const GameInstance& game) : game_(&game) {
  per_player_.reserve(game.num_players());
  size_ = 1;
  for (const auto& pl : game.players) {
    per_player_.push_back(pl.own_grid());
    size_ *= per_player_.back().size();
  }
}

void JointGrid::for_each(const std::function<void(std::span<const double>)>& fn) const {
  if (size_ == 0) return;
  std::size_t n = per_player_.size();
  Vec x(game_->joint_dims());
  std::vector<std::size_t> idx(n, 0);
  std::vector<std::size_t> offsets(n);
  std::size_t off = 0;
  for (std::size_t i = 0; i < n; ++i) {
    offsets[i] = off;
    off += game_->players[i].action.dims();
  }
  auto write_block = [&](std::size_t i) {
    const Vec& src = per_player_[i][idx[i]];
    std::copy(src.begin(), src.end(), x.begin() + static_cast<std::ptrdiff_t>(offsets[i]));
  };
  for (std::size_t i = 0; i < n; ++i) write_block(i);
  for (;;) {
    fn(x);
    std::size_t i = n;
    for (;;) {
      if (i == 0) return;
      --i;
      if (++idx[i] < per_player_[i].size()) {
        write_block(i);
        break;
      }
      idx[i] = 0;
      write_block(i);
    }
  }
}

// --- load-time validation ------------------------------------------------------

void validate_instance(const GameInstance& game, int samples, std::uint64_t seed,
                       const Tolerances& tol) {
  game.validate_structure();
  Rng rng(seed);
  JointGrid grid(game);
  for (std::size_t i = 0; i < game.num_players(); ++i)
    if (grid.player_points(i).empty())
      throw InfeasibleError("player " + std::to_string(i + 1) +
                            " has no feasible grid point in its action box");

  auto random_joint = [&](Vec& x) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      const auto& pts = grid.player_points(i);
      const Vec& pick = pts[rng.bounded(pts.size())];
      std::copy(pick.begin(), pick.end(), x.begin() + static_cast<std::ptrdiff_t>(off));
      off += pick.size();
    }
  };

  Vec x(game.joint_dims());
  for (int s = 0; s < samples; ++s) {
    random_joint(x);
    // price structure at x
    std::vector<Vec> sol = solve_price_problem(game, x, tol);
    if (sol.empty()) throw InfeasibleError("price problem has no solution at a sampled x");
    if (game.price.closed_form && game.price.feasible_set) {
      Vec r = game.price.closed_form(x);
      if (!region_contains(game.price.feasible_set(x), r, tol.eps_sol))
        throw UsageError("closed-form price lies outside M(x) at a sampled x");
    }
    const Vec& p = sol.front();
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      double g = game.players[i].own_term(x);
      if (!std::isfinite(g))
        throw EvalError("player " + std::to_string(i + 1) + " own term is non-finite at a sampled x");
      double j = game.payoff(i, x, p);
      if (!std::isfinite(j))
        throw EvalError("player " + std::to_string(i + 1) + " payoff is non-finite at a sampled point");
    }
    // own-term cross-dependence claims
    for (std::size_t i = 0; i < game.num_players(); ++i) {
      if (!game.players[i].own_term_depends_only_on_self) continue;
      if (game.num_players() == 1) continue;
      double before = game.players[i].own_term(x);
      Vec y(x);
      std::size_t j = (i + 1) % game.num_players();
      const auto& pts = grid.player_points(j);
      const Vec& pick = pts[rng.bounded(pts.size())];
      auto [off, len] = game.block(j);
      std::copy(pick.begin(), pick.end(), y.begin() + static_cast<std::ptrdiff_t>(off));
      double after = game.players[i].own_term(y);
      double scale = std::max({1.0, std::fabs(before), std::fabs(after)});
      if (std::fabs(before - after) > 1e-9 * scale)
        throw UsageError("player " + std::to_string(i + 1) +
                         " own term is flagged self-only but changed when player " +
                         std::to_string(j + 1) + " moved");
    }
  }
}

}  // namespace pricegame
