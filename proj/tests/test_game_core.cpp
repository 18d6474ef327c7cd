#include <cmath>
#include <limits>

#include "doctest.h"
#include "pricegame/game.hpp"

using namespace pricegame;

namespace {

// Two quantity setters, inverse demand p = 10 - (x1 + x2), quadratic cost.
GameInstance cournot() {
  GameInstance g;
  g.name = "cournot";
  g.formulation = Formulation::AnticipativeE1;
  g.price_dimension = 1;
  for (int i = 0; i < 2; ++i) {
    PlayerSpec pl;
    pl.id = i + 1;
    pl.action = ActionBox{{0.0}, {5.0}, {11}};
    std::size_t off = static_cast<std::size_t>(i);
    pl.own_term = [off](std::span<const double> x) { return -x[off] * x[off]; };
    g.players.push_back(std::move(pl));
  }
  g.shared.depends_only_on_own_action = true;
  g.shared.h = [](std::span<const double> p, std::span<const double> own) {
    return p[0] * own[0];
  };
  g.price.closed_form = [](std::span<const double> x) { return Vec{10.0 - (x[0] + x[1])}; };
  g.price.depends_on_x = true;
  return g;
}

// Price problem min |p - x1| + |p - x2| over a fixed box: every grid point
// between the two decisions solves it.
GameInstance median_game() {
  GameInstance g;
  g.name = "median";
  g.formulation = Formulation::AnticipativeE1;
  g.price_dimension = 1;
  for (int i = 0; i < 2; ++i) {
    PlayerSpec pl;
    pl.id = i + 1;
    pl.action = ActionBox{{0.0}, {5.0}, {6}};
    pl.own_term = [](std::span<const double>) { return 0.0; };
    g.players.push_back(std::move(pl));
  }
  g.shared.h = [](std::span<const double>, std::span<const double>) { return 0.0; };
  g.price.feasible_set = [](std::span<const double>) {
    return PriceRegion{PriceBox{{0.0}, {10.0}, {21}}};
  };
  g.price.objective = [](std::span<const double> x, std::span<const double> p) {
    return std::fabs(p[0] - x[0]) + std::fabs(p[0] - x[1]);
  };
  return g;
}

// Price-taking game with a coupled region M(x) = [0, x1 + x2].
GameInstance coupled_region_game() {
  GameInstance g;
  g.name = "coupled";
  g.formulation = Formulation::TakingTm;
  g.price_dimension = 1;
  for (int i = 0; i < 2; ++i) {
    PlayerSpec pl;
    pl.id = i + 1;
    pl.action = ActionBox{{0.0}, {5.0}, {6}};
    std::size_t off = static_cast<std::size_t>(i);
    pl.own_term = [off](std::span<const double> x) { return -x[off] * x[off]; };
    g.players.push_back(std::move(pl));
  }
  g.shared.depends_only_on_own_action = true;
  g.shared.h = [](std::span<const double> p, std::span<const double> own) {
    return p[0] * own[0];
  };
  g.price.feasible_set = [](std::span<const double> x) {
    return PriceRegion{PriceBox{{0.0}, {x[0] + x[1]}, {7}}};
  };
  g.price.depends_on_x = true;
  return g;
}

}  // namespace

TEST_CASE("payoff evaluation on the quantity game") {
  GameInstance g = cournot();
  Vec x{2.0, 3.0}, p{5.0};
  CHECK(evaluate_payoff(g, 0, x, p) == doctest::Approx(6.0));
  CHECK(evaluate_payoff(g, 1, x, p) == doctest::Approx(6.0));

  Vec wrong_p{4.9};
  CHECK_THROWS_AS(evaluate_payoff(g, 0, x, wrong_p), DomainError);
  Vec outside{7.0, 3.0};
  CHECK_THROWS_AS(evaluate_payoff(g, 0, outside, p), DomainError);
  Vec short_x{2.0};
  CHECK_THROWS_AS(evaluate_payoff(g, 0, short_x, p), DomainError);
  CHECK_THROWS_AS(evaluate_payoff(g, 5, x, p), UsageError);
}

TEST_CASE("closed-form price rule short-circuits the price problem") {
  GameInstance g = cournot();
  Vec x{2.0, 3.0};
  auto sol = solve_price_problem(g, x);
  REQUIRE(sol.size() == 1);
  CHECK(sol[0][0] == doctest::Approx(5.0));
  Vec p5{5.0}, p4{4.0};
  CHECK(price_solves(g, x, p5));
  CHECK_FALSE(price_solves(g, x, p4));
  CHECK(member_f1(g, x, p5));
  CHECK_FALSE(member_f1(g, x, p4));
  Vec far{7.0, 3.0};
  CHECK_FALSE(member_f1(g, far, p5));
}

TEST_CASE("grid price solutions keep every value-optimal point in grid order") {
  GameInstance g = median_game();
  Vec x{2.0, 4.0};
  auto sol = solve_price_problem(g, x);
  REQUIRE(sol.size() == 5);
  Vec expected{2.0, 2.5, 3.0, 3.5, 4.0};
  for (std::size_t i = 0; i < sol.size(); ++i) CHECK(sol[i][0] == doctest::Approx(expected[i]));

  Vec p3{3.0}, p15{1.5}, p_out{10.5};
  CHECK(price_solves(g, x, p3));
  CHECK_FALSE(price_solves(g, x, p15));
  CHECK(member_a(g, x, p15));       // feasible but not optimal
  CHECK_FALSE(member_a(g, x, p_out));
  CHECK(member_f1(g, x, p3));
}

TEST_CASE("consistent-conjecture membership needs equal optimal conjectures") {
  GameInstance g = median_game();
  Vec x{2.0, 4.0};
  CHECK_THROWS_AS((void)member_f2(g, x, {{2.5}, {2.5}}), UsageError);
  g.formulation = Formulation::AnticipativeE2Consistent;
  g.shared.depends_only_on_own_action = true;  // h is identically zero here
  CHECK(member_f2(g, x, {{2.5}, {2.5}}));
  CHECK(member_f2(g, x, {{3.0}, {3.0}}));
  CHECK_FALSE(member_f2(g, x, {{2.0}, {4.0}}));    // optimal but unequal
  CHECK_FALSE(member_f2(g, x, {{1.5}, {1.5}}));    // equal but suboptimal
  CHECK_FALSE(member_f2(g, x, {{3.0}}));           // one conjecture per player
}

TEST_CASE("explicit price sets and missing objectives") {
  GameInstance g = median_game();
  g.price.feasible_set = [](std::span<const double>) {
    return PriceRegion{std::vector<Vec>{{1.0}, {5.0}}};
  };
  g.price.objective = [](std::span<const double>, std::span<const double> p) {
    return (p[0] - 4.0) * (p[0] - 4.0);
  };
  Vec x{2.0, 4.0};
  auto sol = solve_price_problem(g, x);
  REQUIRE(sol.size() == 1);
  CHECK(sol[0][0] == 5.0);

  g.price.objective = nullptr;  // f == 0: every feasible price solves
  sol = solve_price_problem(g, x);
  CHECK(sol.size() == 2);
  Vec p1{1.0};
  CHECK(price_solves(g, x, p1));

  g.price.feasible_set = [](std::span<const double>) { return PriceRegion{std::vector<Vec>{}}; };
  CHECK_THROWS_AS(solve_price_problem(g, x), InfeasibleError);
}

TEST_CASE("price grid override refines the solution set") {
  GameInstance g = median_game();
  g.price.feasible_set = [](std::span<const double>) {
    return PriceRegion{PriceBox{{0.0}, {10.0}, {3}}};
  };
  g.price.objective = [](std::span<const double>, std::span<const double> p) {
    return (p[0] - 3.0) * (p[0] - 3.0);
  };
  Vec x{2.0, 4.0};
  auto coarse = solve_price_problem(g, x);
  REQUIRE(coarse.size() == 1);
  CHECK(coarse[0][0] == 5.0);  // nearest of {0, 5, 10}
  auto fine = solve_price_problem(g, x, Tolerances{}, 41);
  REQUIRE(fine.size() == 1);
  CHECK(fine[0][0] == doctest::Approx(3.0));
}

TEST_CASE("price-taking deviation sets respect the coupled region") {
  GameInstance g = coupled_region_game();
  Vec p{3.0};
  Vec joint{0.0, 1.0};  // player 1 block ignored, rival fixed at 1
  auto gamma = gamma_set(g, p, 0, joint);
  REQUIRE(gamma.size() == 4);
  Vec expected{2.0, 3.0, 4.0, 5.0};
  for (std::size_t i = 0; i < gamma.size(); ++i) CHECK(gamma[i][0] == expected[i]);

  GameInstance e1 = cournot();
  CHECK_THROWS_AS(gamma_set(e1, p, 0, joint), UsageError);
}

TEST_CASE("widening the price region never shrinks a deviation set") {
  GameInstance g = coupled_region_game();
  GameInstance wide = coupled_region_game();
  wide.price.feasible_set = [](std::span<const double> x) {
    return PriceRegion{PriceBox{{0.0}, {2.0 + x[0] + x[1]}, {7}}};
  };
  for (double pv : {0.0, 1.5, 3.0, 6.0}) {
    for (double rival : {0.0, 1.0, 4.0}) {
      Vec p{pv}, joint{0.0, rival};
      auto narrow_set = gamma_set(g, p, 0, joint);
      auto wide_set = gamma_set(wide, p, 0, joint);
      for (const auto& xi : narrow_set) {
        bool found = false;
        for (const auto& yi : wide_set)
          if (yi == xi) found = true;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("region-independent price-taking games deviate over the full grid") {
  GameInstance g = median_game();
  g.formulation = Formulation::TakingT1;
  Vec p{3.0}, joint{0.0, 0.0};
  CHECK(gamma_set(g, p, 0, joint).size() == 6);
}

TEST_CASE("joint grid iterates player one slowest") {
  GameInstance g;
  g.formulation = Formulation::TakingT1;
  PlayerSpec a;
  a.id = 1;
  a.action = ActionBox{{0.0}, {1.0}, {2}};
  a.own_term = [](std::span<const double>) { return 0.0; };
  PlayerSpec b = a;
  b.id = 2;
  b.action = ActionBox{{0.0}, {1.0}, {3}};
  g.players = {a, b};
  g.shared.h = [](std::span<const double>, std::span<const double>) { return 0.0; };
  g.price.closed_form = [](std::span<const double>) { return Vec{0.0}; };

  JointGrid grid(g);
  CHECK(grid.size() == 6);
  std::vector<Vec> seen;
  grid.for_each([&](std::span<const double> x) { seen.emplace_back(x.begin(), x.end()); });
  std::vector<Vec> expected{{0.0, 0.0}, {0.0, 0.5}, {0.0, 1.0},
                            {1.0, 0.0}, {1.0, 0.5}, {1.0, 1.0}};
  CHECK(seen == expected);
}

TEST_CASE("own filters and degenerate dimensions shrink grids") {
  PlayerSpec pl;
  pl.action = ActionBox{{0.0}, {2.0}, {3}};
  pl.own_filter = [](std::span<const double> own) { return own[0] <= 1.0; };
  auto grid = pl.own_grid();
  REQUIRE(grid.size() == 2);
  CHECK(grid[0][0] == 0.0);
  CHECK(grid[1][0] == 1.0);

  ActionBox degenerate{{2.0}, {2.0}, {5}};
  CHECK(degenerate.points(0) == 1);
  auto g = degenerate.grid();
  REQUIRE(g.size() == 1);
  CHECK(g[0][0] == 2.0);
}

TEST_CASE("action box validation names the offending dimension") {
  ActionBox bad{{1.0}, {0.0}, {3}};
  CHECK_THROWS_AS(bad.validate("box"), UsageError);
  ActionBox one_point{{0.0}, {1.0}, {1}};
  CHECK_THROWS_AS(one_point.validate("box"), UsageError);
  ActionBox inf_box{{0.0}, {std::numeric_limits<double>::infinity()}, {3}};
  CHECK_THROWS_AS(inf_box.validate("box"), UsageError);
}

TEST_CASE("instance validation catches structural lies") {
  GameInstance ok = cournot();
  CHECK_NOTHROW(validate_instance(ok));

  GameInstance liar = cournot();
  liar.players[0].own_term = [](std::span<const double> x) { return x[1]; };  // rival dependence
  CHECK_THROWS_AS(validate_instance(liar), UsageError);

  GameInstance nonfinite = cournot();
  nonfinite.players[1].own_term = [](std::span<const double>) {
    return std::numeric_limits<double>::infinity();
  };
  CHECK_THROWS_AS(validate_instance(nonfinite), EvalError);

  GameInstance starved = cournot();
  starved.players[0].own_filter = [](std::span<const double>) { return false; };
  CHECK_THROWS_AS(validate_instance(starved), InfeasibleError);

  GameInstance e2 = cournot();
  e2.formulation = Formulation::AnticipativeE2Consistent;
  e2.shared.depends_only_on_own_action = false;
  CHECK_THROWS_AS(validate_instance(e2), UsageError);
}

TEST_CASE("formulation and set tags round-trip through names") {
  CHECK(to_string(Formulation::TakingTm) == "taking_tm");
  CHECK(formulation_from_string("taking_tm") == Formulation::TakingTm);
  CHECK(formulation_from_string("e2") == Formulation::AnticipativeE2Consistent);
  CHECK_THROWS_AS(formulation_from_string("nope"), UsageError);
  CHECK(to_string(SetTag::F2) == "F2");
  CHECK(to_string(SetTag::A) == "A");
}
