#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pricegame/util.hpp"

namespace pricegame {

/// Default tolerances:
///   eps_sol  price-problem optimality slack
///   eps_eq   conjecture-consistency slack
///   eps_dev  deviation-gap threshold for certification
///   eps_pot  potential difference-identity slack
struct Tolerances {
  double eps_sol = 1e-6;
  double eps_eq = 1e-9;
  double eps_dev = 1e-6;
  double eps_pot = 1e-8;
};

/// Axis-aligned action box with a uniform grid per dimension.
/// grid_points >= 2 per dimension; a dimension with lower == upper is
/// treated as a single grid value.
struct ActionBox {
  Vec lower;
  Vec upper;
  std::vector<int> grid_points;

  std::size_t dims() const { return lower.size(); }
  double step(std::size_t k) const {
    return (upper[k] - lower[k]) / static_cast<double>(grid_points[k] - 1);
  }
  std::size_t points(std::size_t k) const {
    return upper[k] == lower[k] ? 1 : static_cast<std::size_t>(grid_points[k]);
  }
  double coord(std::size_t k, std::size_t j) const {
    return points(k) == 1 ? lower[k] : lower[k] + static_cast<double>(j) * step(k);
  }
  std::size_t cell_count() const {
    std::size_t n = 1;
    for (std::size_t k = 0; k < dims(); ++k) n *= points(k);
    return n;
  }
  bool contains(std::span<const double> v) const;
  void validate(const std::string& what) const;

  /// All grid points in lexicographic order (first coordinate slowest).
  std::vector<Vec> grid() const;
};

/// One strategic player: action set (box intersected with an optional
/// feasibility filter on the own block) and own payoff term g_i.
/// own_term receives the full joint decision; own_term_depends_only_on_self
/// asserts it ignores rivals' blocks (required for the sum potential).
struct PlayerSpec {
  int id = 0;
  ActionBox action;
  std::function<double(std::span<const double> joint_x)> own_term;
  bool own_term_depends_only_on_self = true;
  std::function<bool(std::span<const double> own_block)> own_filter;  // optional

  /// Filtered grid of this player's own block, lexicographic order.
  std::vector<Vec> own_grid() const;
};

/// Payoff term common to all players. When depends_only_on_own_action is
/// set, h is evaluated as h(p, x_i) on the acting player's block (all
/// player blocks must then share one dimension); otherwise h(p, x) on the
/// full joint decision.
struct SharedTerm {
  std::function<double(std::span<const double> p, std::span<const double> x_part)> h;
  bool depends_only_on_own_action = false;
};

/// Price feasibility region for a fixed x: either a box with its own grid
/// or a finite explicit set of price vectors.
struct PriceBox {
  Vec lower;
  Vec upper;
  std::vector<int> grid_points;
};
using PriceRegion = std::variant<PriceBox, std::vector<Vec>>;

/// Price-determining problem S(x): minimize f(x, p) over p in M(x),
/// or a closed-form rule p = r(x). A null objective means f == 0 (the
/// degenerate price player whose gap is trivially zero).
struct PriceProblem {
  std::function<double(std::span<const double> x, std::span<const double> p)> objective;
  std::function<PriceRegion(std::span<const double> x)> feasible_set;
  bool depends_on_x = false;
  std::function<Vec(std::span<const double> x)> closed_form;  // optional
};

enum class Formulation {
  AnticipativeE1,
  AnticipativeE2Consistent,
  TakingT1,
  TakingTm,
};

std::string to_string(Formulation f);
Formulation formulation_from_string(const std::string& s);

enum class SetTag { F1, F2, A };

std::string to_string(SetTag t);

/// A candidate point: joint decision plus one price vector (F1, A) or one
/// price conjecture per player (F2).
struct FeasiblePoint {
  Vec x;
  std::vector<Vec> prices;
  SetTag tag = SetTag::F1;
};

struct GameInstance {
  std::vector<PlayerSpec> players;
  SharedTerm shared;
  PriceProblem price;
  Formulation formulation = Formulation::AnticipativeE1;
  int price_dimension = 1;
  std::string name;

  std::size_t num_players() const { return players.size(); }
  std::size_t joint_dims() const;
  /// Offset and length of player i's block inside the joint decision.
  std::pair<std::size_t, std::size_t> block(std::size_t i) const;
  std::span<const double> own_block(std::size_t i, std::span<const double> x) const;

  /// x inside every player's box and filter.
  bool x_feasible(std::span<const double> x) const;

  /// Payoff J_i(x, p) = h(p, .) + g_i(x); no domain validation. The public
  /// evaluate_payoff operation wraps this with precondition checks.
  double payoff(std::size_t i, std::span<const double> x, std::span<const double> p) const;

  /// Structural invariants (box shapes, formulation flags). Throws UsageError.
  void validate_structure() const;
};

/// Payoff with domain validation: x must lie in the joint box (and pass
/// player filters), p in the bounding box of M(x) (within eps_sol of r(x)
/// for closed-form-only instances). Violations raise DomainError naming the
/// offending coordinate.
double evaluate_payoff(const GameInstance& game, std::size_t i, std::span<const double> x,
                       std::span<const double> p, const Tolerances& tol = {});

/// All price grid points of M(x) whose objective lies within eps_sol of the
/// grid minimum, in grid order. Closed form short-circuits to {r(x)}.
/// price_points_override replaces the per-dimension grid counts of a box
/// region when given.
std::vector<Vec> solve_price_problem(const GameInstance& game, std::span<const double> x,
                                     const Tolerances& tol = {},
                                     std::optional<int> price_points_override = std::nullopt);

/// p solves S(x) in the value sense: p in M(x) and f(x,p) within eps_sol of
/// the grid minimum (closed form: |p - r(x)|_inf <= eps_sol).
bool price_solves(const GameInstance& game, std::span<const double> x, std::span<const double> p,
                  const Tolerances& tol = {});

/// Membership in F1 = {(x,p) : x in X, p in SOL[S(x)]}.
bool member_f1(const GameInstance& game, std::span<const double> x, std::span<const double> p,
               const Tolerances& tol = {});

/// Membership in F2: x in X, all conjectures pairwise equal within eps_eq,
/// and every conjecture solves S(x).
bool member_f2(const GameInstance& game, std::span<const double> x,
               const std::vector<Vec>& conjectures, const Tolerances& tol = {});

/// Membership in A = {(x,p) : x in X, p in M(x)}.
bool member_a(const GameInstance& game, std::span<const double> x, std::span<const double> p,
              const Tolerances& tol = {});

/// p inside M(x): box containment, or within eps_sol of an explicit point /
/// the closed-form value.
bool price_feasible(const GameInstance& game, std::span<const double> x,
                    std::span<const double> p, const Tolerances& tol = {});

/// Candidate price points of M(x) before any objective filtering: the box
/// grid, the explicit set, or the single closed-form value.
std::vector<Vec> price_feasible_points(const GameInstance& game, std::span<const double> x,
                                       std::optional<int> price_points_override = std::nullopt);

/// Gamma_i(p, x^{-i}) = grid points x_i of X_i with p in M(x_i, x^{-i}).
/// x_rivals supplies the joint decision; player i's block in it is ignored.
/// Price-taking formulations only. When M does not depend on x this is the
/// full filtered grid of X_i.
std::vector<Vec> gamma_set(const GameInstance& game, std::span<const double> p, std::size_t i,
                           std::span<const double> x_rivals, const Tolerances& tol = {});

/// Joint grid over all players' filtered own grids, lexicographic order
/// (player 1's block most significant).
class JointGrid {
 public:
  explicit JointGrid(const GameInstance& game);
  std::size_t size() const { return size_; }
  std::size_t num_players() const { return per_player_.size(); }
  const std::vector<Vec>& player_points(std::size_t i) const { return per_player_[i]; }

  /// Calls fn(x) for every joint grid point; x is reused storage.
  void for_each(const std::function<void(std::span<const double>)>& fn) const;

 private:
  const GameInstance* game_;
  std::vector<std::vector<Vec>> per_player_;
  std::size_t size_;
};

/// Sampling validation run by the file loader: finiteness of terms, flag
/// consistency, closed-form containment in M, nonempty M on the grid.
/// Throws UsageError / InfeasibleError / EvalError with the player index or
/// field named.
void validate_instance(const GameInstance& game, int samples = 64, std::uint64_t seed = 0,
                       const Tolerances& tol = {});

}  // namespace pricegame
