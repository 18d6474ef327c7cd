#include "pricegame/gep.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pricegame/potential.hpp"

namespace pricegame {

namespace {

// grid arithmetic noise allowance for the coupling constraints
constexpr double kFeasSlack = 1e-9;

const std::vector<std::string> kCapVar{"x"};
const std::vector<std::string> kFuelVar{"q"};

void check_bounds(const std::string& what, const BoundsSpec& b) {
  if (!std::isfinite(b.lower) || !std::isfinite(b.upper))
    throw UsageError(what + " bounds must be finite");
  if (b.lower < 0.0) throw UsageError(what + " lower bound must be nonnegative");
  if (b.lower > b.upper) throw UsageError(what + " bounds are inverted");
  if (b.grid_points < 2) throw UsageError(what + " needs at least 2 grid points");
}

}  // namespace

void EldcCurve::validate() const {
  if (breakpoints.empty())
    throw UsageError("the load duration curve needs at least one breakpoint");
  for (std::size_t k = 0; k < breakpoints.size(); ++k) {
    auto [y, v] = breakpoints[k];
    if (!std::isfinite(y) || !std::isfinite(v))
      throw UsageError("load duration breakpoint " + std::to_string(k + 1) + " is not finite");
    if (v < 0.0 || v > 1.0)
      throw UsageError("load duration value at breakpoint " + std::to_string(k + 1) +
                       " must lie in [0, 1]");
    if (k > 0) {
      if (y <= breakpoints[k - 1].first)
        throw UsageError("load duration breakpoints must have strictly increasing loads");
      if (v > breakpoints[k - 1].second)
        throw UsageError("load duration values must be nonincreasing");
    }
  }
}

double eldc_eval(const EldcCurve& curve, double y) {
  if (y < 0.0) throw DomainError("load level must be nonnegative, got " + format_double(y));
  return pwl_eval(curve.breakpoints, y);
}

void GepScenario::validate() const {
  if (horizon < 1) throw UsageError("horizon must be at least one period");
  if (companies.empty()) throw UsageError("the scenario needs at least one company");
  if (loads.size() != static_cast<std::size_t>(horizon))
    throw UsageError("loads must list one value per period; got " + std::to_string(loads.size()) +
                     " for horizon " + std::to_string(horizon));
  for (std::size_t t = 0; t < loads.size(); ++t)
    if (!(loads[t] >= 0.0) || !std::isfinite(loads[t]))
      throw UsageError("load for period " + std::to_string(t + 1) + " must be nonnegative");
  if (!(rho_avg >= 0.0 && rho_avg < 1.0))
    throw UsageError("avg outage rate must lie in [0, 1)");
  if (!(existing_capacity >= 0.0))
    throw UsageError("existing capacity must be nonnegative");
  if (!std::isfinite(outage_cost)) throw UsageError("outage cost must be finite");
  eldc.validate();
  for (std::size_t i = 0; i < companies.size(); ++i) {
    const GepCompany& c = companies[i];
    const std::string who = "company " + std::to_string(i + 1);
    if (!c.capital_cost.valid()) throw UsageError(who + ": capital cost expression is missing");
    if (!c.fuel_cost.valid()) throw UsageError(who + ": fuel cost expression is missing");
    for (const std::string& v : c.capital_cost.variables())
      if (v != "x")
        throw UsageError(who + ": capital cost references unknown variable '" + v + "'");
    for (const std::string& v : c.fuel_cost.variables())
      if (v != "q") throw UsageError(who + ": fuel cost references unknown variable '" + v + "'");
    if (!(c.forced_outage_rate >= 0.0 && c.forced_outage_rate < 1.0))
      throw UsageError(who + ": forced outage rate must lie in [0, 1)");
    if (c.ramp_up && c.ramp_down && *c.ramp_down > *c.ramp_up)
      throw UsageError(who + ": ramp-down limit exceeds ramp-up limit");
    check_bounds(who + " capacity", c.capacity_bounds);
    check_bounds(who + " reserve", c.reserve_bounds);
    check_bounds(who + " energy", c.energy_bounds);
    check_bounds(who + " real-time", c.rt_bounds);
  }
}

CompanyDecision split_company_decision(std::span<const double> block, int horizon) {
  const std::size_t T = static_cast<std::size_t>(horizon);
  if (horizon < 1 || block.size() != 1 + 3 * T)
    throw UsageError("decision block has dimension " + std::to_string(block.size()) +
                     "; horizon " + std::to_string(horizon) + " needs " +
                     std::to_string(1 + 3 * T));
  CompanyDecision d;
  d.capacity = block[0];
  d.reserve.assign(block.begin() + 1, block.begin() + 1 + static_cast<std::ptrdiff_t>(T));
  d.energy.assign(block.begin() + 1 + static_cast<std::ptrdiff_t>(T),
                  block.begin() + 1 + static_cast<std::ptrdiff_t>(2 * T));
  d.realtime.assign(block.begin() + 1 + static_cast<std::ptrdiff_t>(2 * T),
                    block.begin() + 1 + static_cast<std::ptrdiff_t>(3 * T));
  return d;
}

Vec flatten_company_decision(const CompanyDecision& d) {
  Vec out;
  out.reserve(1 + d.reserve.size() + d.energy.size() + d.realtime.size());
  out.push_back(d.capacity);
  out.insert(out.end(), d.reserve.begin(), d.reserve.end());
  out.insert(out.end(), d.energy.begin(), d.energy.end());
  out.insert(out.end(), d.realtime.begin(), d.realtime.end());
  return out;
}

bool decision_feasible(const GepCompany& company, const CompanyDecision& d) {
  const std::size_t T = d.reserve.size();
  if (d.energy.size() != T || d.realtime.size() != T) return false;
  for (std::size_t t = 0; t < T; ++t) {
    if (d.reserve[t] < -kFeasSlack || d.reserve[t] > d.capacity + kFeasSlack) return false;
    if (d.energy[t] > d.capacity - d.reserve[t] + kFeasSlack) return false;
    if (d.realtime[t] > d.capacity - d.energy[t] + kFeasSlack) return false;
  }
  for (std::size_t t = 0; t + 1 < T; ++t) {
    double delta = (d.energy[t + 1] + d.realtime[t + 1]) - (d.energy[t] + d.realtime[t]);
    if (company.ramp_up && delta > *company.ramp_up + kFeasSlack) return false;
    if (company.ramp_down && delta < *company.ramp_down - kFeasSlack) return false;
  }
  return true;
}

double marginal_fuel_cost(const GepCompany& company, double q, MarketKind kind) {
  const double at[1] = {q};
  if (auto exact = company.fuel_cost.derivative("q")) return exact->bind(kFuelVar).eval(at);
  double step = (kind == MarketKind::Energy ? company.energy_bounds : company.rt_bounds).step();
  auto fuel = company.fuel_cost.bind(kFuelVar);
  const double ahead[1] = {q + step};
  return (fuel.eval(ahead) - fuel.eval(at)) / step;
}

double reserve_price(const GepScenario& scen, double total_reserve) {
  if (total_reserve < 0.0)
    throw DomainError("total reserve must be nonnegative, got " + format_double(total_reserve));
  return static_cast<double>(scen.horizon) * (1.0 - scen.rho_avg) *
         eldc_eval(scen.eldc, scen.existing_capacity + total_reserve) * scen.outage_cost;
}

double merit_order_price(const GepScenario& scen, std::span<const double> quantities,
                         double target, MarketKind kind) {
  if (scen.companies.empty()) throw UsageError("merit order needs at least one company");
  if (quantities.size() != scen.companies.size())
    throw UsageError("merit order needs one submitted quantity per company; got " +
                     std::to_string(quantities.size()) + " for " +
                     std::to_string(scen.companies.size()));
  if (target < 0.0)
    throw DomainError("clearing target must be nonnegative, got " + format_double(target));
  const std::size_t n = scen.companies.size();
  Vec mc(n);
  for (std::size_t i = 0; i < n; ++i)
    mc[i] = marginal_fuel_cost(scen.companies[i], quantities[i], kind);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return mc[a] < mc[b]; });
  if (target <= 0.0) return mc[order.front()];
  double running = 0.0;
  for (std::size_t i : order) {
    running += quantities[i];
    if (running >= target - kFeasSlack) return mc[i];
  }
  double top = mc[order.back()];
  return top + (scen.scarcity_adder ? *scen.scarcity_adder : 10.0 * top);
}

Vec flatten_gep_prices(const GepPrices& prices) {
  Vec out;
  out.reserve(prices.reserve.size() + prices.energy.size() + prices.realtime.size());
  out.insert(out.end(), prices.reserve.begin(), prices.reserve.end());
  out.insert(out.end(), prices.energy.begin(), prices.energy.end());
  out.insert(out.end(), prices.realtime.begin(), prices.realtime.end());
  return out;
}

GepPrices split_gep_prices(std::span<const double> p, int horizon) {
  const std::size_t T = static_cast<std::size_t>(horizon);
  if (horizon < 1 || p.size() != 3 * T)
    throw UsageError("price vector has dimension " + std::to_string(p.size()) + "; horizon " +
                     std::to_string(horizon) + " needs " + std::to_string(3 * T));
  GepPrices out;
  out.reserve.assign(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(T));
  out.energy.assign(p.begin() + static_cast<std::ptrdiff_t>(T),
                    p.begin() + static_cast<std::ptrdiff_t>(2 * T));
  out.realtime.assign(p.begin() + static_cast<std::ptrdiff_t>(2 * T),
                      p.begin() + static_cast<std::ptrdiff_t>(3 * T));
  return out;
}

GepPrices gep_prices(const GepScenario& scen, std::span<const double> joint_x) {
  const std::size_t T = static_cast<std::size_t>(scen.horizon);
  const std::size_t n = scen.companies.size();
  const std::size_t blen = 1 + 3 * T;
  if (joint_x.size() != n * blen)
    throw UsageError("joint decision has dimension " + std::to_string(joint_x.size()) +
                     "; the scenario needs " + std::to_string(n * blen));
  GepPrices out;
  out.reserve.resize(T);
  out.energy.resize(T);
  out.realtime.resize(T);
  Vec energy(n), rt(n);
  for (std::size_t t = 0; t < T; ++t) {
    double total_reserve = 0.0;
    double outage_target = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::span<const double> block = joint_x.subspan(i * blen, blen);
      total_reserve += block[1 + t];
      energy[i] = block[1 + T + t];
      rt[i] = block[1 + 2 * T + t];
      outage_target += scen.companies[i].forced_outage_rate * energy[i];
    }
    out.reserve[t] = reserve_price(scen, total_reserve);
    out.energy[t] = merit_order_price(scen, energy, scen.loads[t], MarketKind::Energy);
    out.realtime[t] = merit_order_price(scen, rt, outage_target, MarketKind::RealTime);
  }
  return out;
}

GameInstance build_gep_game(const GepScenario& scen, Formulation formulation) {
  scen.validate();
  if (formulation != Formulation::TakingT1 &&
      formulation != Formulation::AnticipativeE2Consistent)
    throw UsageError(
        "the expansion game builds as price-taking or consistent-conjecture only");
  const std::size_t T = static_cast<std::size_t>(scen.horizon);
  const std::size_t dim = 1 + 3 * T;

  GameInstance game;
  game.formulation = formulation;
  game.price_dimension = static_cast<int>(3 * T);
  game.name = scen.name.empty() ? "expansion game" : scen.name;

  for (std::size_t i = 0; i < scen.companies.size(); ++i) {
    const GepCompany& c = scen.companies[i];
    PlayerSpec pl;
    pl.id = static_cast<int>(i + 1);
    pl.action.lower.resize(dim);
    pl.action.upper.resize(dim);
    pl.action.grid_points.resize(dim);
    auto set = [&pl](std::size_t k, const BoundsSpec& b) {
      pl.action.lower[k] = b.lower;
      pl.action.upper[k] = b.upper;
      pl.action.grid_points[k] = b.grid_points;
    };
    set(0, c.capacity_bounds);
    for (std::size_t t = 0; t < T; ++t) {
      set(1 + t, c.reserve_bounds);
      set(1 + T + t, c.energy_bounds);
      set(1 + 2 * T + t, c.rt_bounds);
    }
    auto capital = c.capital_cost.bind(kCapVar);
    auto fuel = c.fuel_cost.bind(kFuelVar);
    const std::size_t boff = i * dim;
    pl.own_term = [capital, fuel, boff, dim, T](std::span<const double> joint) {
      std::span<const double> b = joint.subspan(boff, dim);
      const double xc[1] = {b[0]};
      double cost = capital.eval(xc);
      for (std::size_t t = 0; t < T; ++t) {
        const double q[1] = {b[1 + T + t] + b[1 + 2 * T + t]};
        cost += fuel.eval(q);
      }
      return -cost;
    };
    pl.own_term_depends_only_on_self = true;
    pl.own_filter = [c, horizon = scen.horizon](std::span<const double> own) {
      return decision_feasible(c, split_company_decision(own, horizon));
    };
    game.players.push_back(std::move(pl));
  }

  // revenue on the company's own quantities at the posted price series
  game.shared.depends_only_on_own_action = true;
  game.shared.h = [T](std::span<const double> p, std::span<const double> own) {
    double v = 0.0;
    for (std::size_t t = 0; t < T; ++t)
      v += p[t] * own[1 + t] + p[T + t] * own[1 + T + t] + p[2 * T + t] * own[1 + 2 * T + t];
    return v;
  };

  game.price.closed_form = [scen](std::span<const double> x) {
    return flatten_gep_prices(gep_prices(scen, x));
  };
  game.price.depends_on_x = true;
  game.validate_structure();
  return game;
}

namespace {

double midpoint_violation(const Expr::Bound& f, double lo, double hi, int samples, Rng& rng) {
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    double a = rng.uniform(lo, hi);
    double b = rng.uniform(lo, hi);
    const double va[1] = {a};
    const double vb[1] = {b};
    const double vm[1] = {0.5 * (a + b)};
    double gap = f.eval(vm) - 0.5 * (f.eval(va) + f.eval(vb));
    if (gap > worst) worst = gap;
  }
  return worst;
}

void attach_views(const GepScenario& scen, const SolverConfig& config, GepSolution& out) {
  const std::size_t T = static_cast<std::size_t>(scen.horizon);
  const std::size_t dim = 1 + 3 * T;
  std::span<const double> x(out.result.point.x);
  for (std::size_t i = 0; i < scen.companies.size(); ++i)
    out.decisions.push_back(split_company_decision(x.subspan(i * dim, dim), scen.horizon));
  out.prices = split_gep_prices(out.result.point.prices.front(), scen.horizon);

  Rng rng(config.seed + 0x632be59bd9b4e019ULL);
  int samples = std::max(1, config.potential_samples);
  out.costs_convex = true;
  out.convexity_violation = 0.0;
  for (std::size_t i = 0; i < scen.companies.size(); ++i) {
    const GepCompany& c = scen.companies[i];
    struct Curve {
      const Expr* expr;
      const std::vector<std::string>* vars;
      double lo, hi;
      const char* what;
    };
    const Curve curves[] = {
        {&c.capital_cost, &kCapVar, c.capacity_bounds.lower, c.capacity_bounds.upper, "capital"},
        {&c.fuel_cost, &kFuelVar, c.energy_bounds.lower + c.rt_bounds.lower,
         c.energy_bounds.upper + c.rt_bounds.upper, "fuel"},
    };
    for (const Curve& cur : curves) {
      if (cur.hi <= cur.lo) continue;
      double v = midpoint_violation(cur.expr->bind(*cur.vars), cur.lo, cur.hi, samples, rng);
      if (v > out.convexity_violation) out.convexity_violation = v;
      if (v > 1e-9 && out.costs_convex) {
        out.costs_convex = false;
        out.convexity_note = std::string(cur.what) + " cost of company " + std::to_string(i + 1) +
                             " fails midpoint convexity by " + format_double(v);
      }
    }
  }
  if (out.costs_convex)
    out.convexity_note = "sampled midpoint convexity holds for every cost curve";
}

}  // namespace

GepSolution solve_gep_price_taking(const GepScenario& scen, const SolverConfig& config,
                                   const Tolerances& tol) {
  GameInstance game = build_gep_game(scen, Formulation::TakingT1);
  GepSolution out;
  out.result = solve_t1_best_response(game, config, tol);
  out.certificate = check_t(game, out.result.point, config, tol);
  attach_views(scen, config, out);
  return out;
}

GepSolution solve_gep_anticipative(const GepScenario& scen, const SolverConfig& config,
                                   const Tolerances& tol) {
  GameInstance game = build_gep_game(scen, Formulation::AnticipativeE2Consistent);
  PotentialFunction pi = construct_sum_potential(game);
  GepSolution out;
  out.result = solve_e2_consistent(game, pi, config, tol);
  out.certificate = check_e2_consistent(game, out.result.point, config, tol);
  attach_views(scen, config, out);
  return out;
}

}  // namespace pricegame
