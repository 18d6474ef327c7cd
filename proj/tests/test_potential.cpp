#include <cmath>
#include <string>

#include "doctest.h"
#include "pricegame/potential.hpp"

using namespace pricegame;

namespace {

GameInstance quadratic_cost_duopoly() {
  GameInstance g;
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

// Own terms and region couple across players, but the shared term is price
// free and the price objective ignores x: the full-game candidate is exact.
GameInstance separable_modified_game() {
  GameInstance g;
  g.formulation = Formulation::TakingTm;
  g.price_dimension = 1;
  for (int i = 0; i < 2; ++i) {
    PlayerSpec pl;
    pl.id = i + 1;
    pl.action = ActionBox{{0.0}, {2.0}, {5}};
    std::size_t off = static_cast<std::size_t>(i);
    pl.own_term = [off](std::span<const double> x) { return -x[off] * x[off]; };
    g.players.push_back(std::move(pl));
  }
  g.shared.h = [](std::span<const double>, std::span<const double> x) {
    return x[0] + 2.0 * x[1];
  };
  g.price.objective = [](std::span<const double>, std::span<const double> p) {
    return (p[0] - 1.0) * (p[0] - 1.0);
  };
  g.price.feasible_set = [](std::span<const double> x) {
    return PriceRegion{PriceBox{{0.0}, {2.0 + x[0] + x[1]}, {11}}};
  };
  g.price.depends_on_x = true;
  return g;
}

// Revenue h = p * (x1 + x2) also enters the price objective: no candidate
// of the h + pi - f form satisfies either difference identity.
GameInstance bilinear_modified_game() {
  GameInstance g;
  g.formulation = Formulation::TakingTm;
  g.price_dimension = 1;
  for (int i = 0; i < 2; ++i) {
    PlayerSpec pl;
    pl.id = i + 1;
    pl.action = ActionBox{{0.0}, {2.0}, {5}};
    std::size_t off = static_cast<std::size_t>(i);
    pl.own_term = [off](std::span<const double> x) { return -x[off] * x[off]; };
    g.players.push_back(std::move(pl));
  }
  g.shared.h = [](std::span<const double> p, std::span<const double> x) {
    return p[0] * (x[0] + x[1]);
  };
  g.price.objective = [](std::span<const double> x, std::span<const double> p) {
    return p[0] * (x[0] + x[1]) + 0.5 * p[0] * p[0];
  };
  g.price.feasible_set = [](std::span<const double>) {
    return PriceRegion{PriceBox{{0.0}, {4.0}, {5}}};
  };
  return g;
}

}  // namespace

TEST_CASE("sum potential adds the own terms and passes verification") {
  GameInstance g = quadratic_cost_duopoly();
  PotentialFunction pi = construct_sum_potential(g);
  CHECK(pi.kind == PotentialKind::SumOfOwnTerms);
  CHECK(pi.scope == PotentialScope::PlayersOnly);
  Vec x{2.0, 3.0}, p{5.0};
  CHECK(pi.value(x, p) == doctest::Approx(-13.0));

  PotentialReport rep = verify_potential(g, pi, 500, 1);
  CHECK(rep.holds);
  CHECK(rep.max_violation <= 1e-8);
  CHECK(rep.samples >= 500);
  CHECK_FALSE(rep.witness.has_value());
}

TEST_CASE("sum potential refuses terms that couple to rivals") {
  GameInstance g = quadratic_cost_duopoly();
  g.players[0].own_term = [](std::span<const double> x) { return -x[0] * x[0] + x[1]; };
  g.players[0].own_term_depends_only_on_self = false;
  try {
    construct_sum_potential(g);
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("player 1") != std::string::npos);
  }
}

TEST_CASE("verification flags a wrong candidate with a witness move") {
  GameInstance g = quadratic_cost_duopoly();
  PotentialFunction wrong;
  wrong.value = [](std::span<const double> x, std::span<const double>) { return x[0]; };
  wrong.scope = PotentialScope::PlayersOnly;
  PotentialReport rep = verify_potential(g, wrong, 200, 3);
  CHECK_FALSE(rep.holds);
  CHECK(rep.max_violation > 1e-3);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->player >= 0);
  CHECK(std::fabs(rep.witness->potential_delta - rep.witness->payoff_delta) ==
        doctest::Approx(rep.max_violation));
}

TEST_CASE("full-game candidate is exact for separable modified games") {
  GameInstance g = separable_modified_game();
  PotentialFunction cand = construct_tm_potential(g, 800, 2);
  CHECK(cand.verified);
  CHECK(cand.scope == PotentialScope::FullGame);
  // h + pi - f at x = (1, 1), p = 0: 3 + (-2) - 1
  Vec x{1.0, 1.0}, p{0.0};
  CHECK(cand.value(x, p) == doctest::Approx(0.0));

  PotentialReport rep = verify_potential(g, cand, 800, 5);
  CHECK(rep.holds);
}

TEST_CASE("full-game candidate refuses price-coupled revenue games") {
  GameInstance g = bilinear_modified_game();
  try {
    construct_tm_potential(g, 500, 4);
    FAIL("expected UsageError");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("refused") != std::string::npos);
  }
}

TEST_CASE("full-game construction is restricted to the modified formulation") {
  GameInstance g = separable_modified_game();
  g.formulation = Formulation::TakingT1;
  CHECK_THROWS_AS(construct_tm_potential(g), UsageError);
}
