#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pricegame/expr.hpp"
#include "pricegame/game.hpp"
#include "pricegame/solver.hpp"
#include "pricegame/verifier.hpp"

namespace pricegame {

/// Equivalent load duration curve: fraction of time the system load exceeds
/// a given level. Breakpoints (load MW, value in [0,1]), strictly increasing
/// loads, nonincreasing values; linear between points, clamped outside.
struct EldcCurve {
  std::vector<std::pair<double, double>> breakpoints;

  void validate() const;  // throws UsageError on a malformed curve
};

/// Curve value at load level y >= 0. Negative y is a DomainError.
double eldc_eval(const EldcCurve& curve, double y);

/// Box and grid resolution for one scalar decision variable.
struct BoundsSpec {
  double lower = 0.0;
  double upper = 0.0;
  int grid_points = 2;

  double step() const {
    return upper > lower ? (upper - lower) / static_cast<double>(grid_points - 1) : 1.0;
  }
};

/// One generation company. capital_cost is an expression of the capacity
/// variable "x"; fuel_cost an expression of the period production "q"
/// (energy plus real-time). Ramp limits bound the change of q between
/// consecutive periods; a missing limit is unbounded on that side.
struct GepCompany {
  std::string name;
  Expr capital_cost;
  Expr fuel_cost;
  double forced_outage_rate = 0.0;
  std::optional<double> ramp_up;
  std::optional<double> ramp_down;
  BoundsSpec capacity_bounds;
  BoundsSpec reserve_bounds;
  BoundsSpec energy_bounds;
  BoundsSpec rt_bounds;
};

/// A generation expansion planning instance. Quantities are MW, prices
/// currency per MWh, periods unit length (energy and power coincide).
struct GepScenario {
  int horizon = 1;
  std::vector<GepCompany> companies;
  Vec loads;
  EldcCurve eldc;
  double rho_avg = 0.0;
  double outage_cost = 0.0;
  double existing_capacity = 0.0;
  std::optional<double> scarcity_adder;  // default: 10x the costliest unit
  std::string name;

  /// Field-level invariants (sizes, ranges, expression variables).
  /// Throws UsageError naming the offending field.
  void validate() const;
};

/// One company's decision split into named pieces. Flattened block layout:
/// [capacity, reserve(1..T), energy(1..T), realtime(1..T)], dimension 1+3T.
struct CompanyDecision {
  double capacity = 0.0;
  Vec reserve;
  Vec energy;
  Vec realtime;
};

CompanyDecision split_company_decision(std::span<const double> block, int horizon);
Vec flatten_company_decision(const CompanyDecision& d);

/// The per-company coupling constraints:
///   0 <= reserve_t <= capacity
///   energy_t <= capacity - reserve_t
///   realtime_t <= capacity - energy_t
///   ramp_down <= (energy+realtime)_{t+1} - (energy+realtime)_t <= ramp_up
bool decision_feasible(const GepCompany& company, const CompanyDecision& d);

enum class MarketKind { Energy, RealTime };

/// Marginal fuel cost at submitted quantity q: the derivative of the fuel
/// curve when it exists in the expression basis, else the forward difference
/// over one grid step of the submitting market.
double marginal_fuel_cost(const GepCompany& company, double q, MarketKind kind);

/// Reserve price P = T (1 - rho_avg) ELDC(C0 + total_reserve) a.
/// Negative total_reserve is a DomainError.
double reserve_price(const GepScenario& scen, double total_reserve);

/// Merit-order clearing price: companies sorted by marginal fuel cost at
/// their submitted quantity, quantities accumulated in cost order until the
/// running sum first reaches the target; returns the marginal company's
/// cost. Submissions short of the target price at the costliest unit plus
/// the scarcity adder; a zero target prices at the cheapest unit.
double merit_order_price(const GepScenario& scen, std::span<const double> quantities,
                         double target, MarketKind kind);

/// The three price series, one value per period.
struct GepPrices {
  Vec reserve;   // from the load duration curve and total reserve
  Vec energy;    // merit order against the period load
  Vec realtime;  // merit order against expected outage replacement
};

/// Flat layout [reserve(1..T), energy(1..T), realtime(1..T)], dimension 3T.
Vec flatten_gep_prices(const GepPrices& prices);
GepPrices split_gep_prices(std::span<const double> p, int horizon);

/// All prices from the aggregate joint decision: reserve from total
/// submitted reserve, energy clearing against the period load, real-time
/// clearing against the outage-weighted energy total.
GepPrices gep_prices(const GepScenario& scen, std::span<const double> joint_x);

/// Compile the scenario into a playable instance. Per-company decision is
/// the flattened CompanyDecision block; the shared term pays the three price
/// series on the company's own quantities; the own term is minus capital
/// minus fuel cost; prices are a closed-form rule, not an optimization; the
/// coupling constraints act as the player's feasibility filter. Only the
/// price-taking and consistent-conjecture formulations are supported.
GameInstance build_gep_game(const GepScenario& scen, Formulation formulation);

/// Solver output bundled with its certificate and scenario-level views.
struct GepSolution {
  SolveResult result;
  EquilibriumCertificate certificate;
  std::vector<CompanyDecision> decisions;
  GepPrices prices;
  /// Sampled midpoint-convexity of every capital and fuel curve (the
  /// equilibrium existence hypothesis); worst sampled violation and a note
  /// naming the first non-convex curve.
  bool costs_convex = true;
  double convexity_violation = 0.0;
  std::string convexity_note;
};

/// Price-taking run: best-response sweeps with the closed-form price reply,
/// then a full deviation check at the settled point.
GepSolution solve_gep_price_taking(const GepScenario& scen, const SolverConfig& config = {},
                                   const Tolerances& tol = {});

/// Anticipative run: the consistent-conjecture surrogate maximized with the
/// sum-of-own-terms potential, then the conjecture deviation check.
GepSolution solve_gep_anticipative(const GepScenario& scen, const SolverConfig& config = {},
                                   const Tolerances& tol = {});

}  // namespace pricegame
