#include "pricegame/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "pricegame/potential.hpp"
#include "pricegame/solver.hpp"
#include "pricegame/verifier.hpp"

using namespace pricegame;

namespace {

// quadratic-cost duopoly with a joint revenue term and a linear inverse
// demand rule; grid step 0.5 on [0, 5]
const char* kDuopolyDoc = R"json({
  "name": "duopoly",
  "formulation": "anticipative_e1",
  "price_dimension": 1,
  "players": [
    {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x1^2)"},
    {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x2^2)"}
  ],
  "shared_term": "p*(x1+x2)",
  "price": {"closed_form": ["10-(x1+x2)"]}
})json";

const char* kScenarioDoc = R"json({
  "horizon": 2,
  "name": "twin",
  "companies": [
    {"name": "alpha", "capital_cost": "0.5*x^2", "fuel_cost": "0.25 * q^2",
     "forced_outage_rate": 0.05, "ramp_up": 1.5, "ramp_down": null,
     "capacity_bounds": {"lower": 0, "upper": 4, "grid_points": 5},
     "reserve_bounds": {"lower": 0, "upper": 2, "grid_points": 3},
     "energy_bounds": {"lower": 0, "upper": 2, "grid_points": 3},
     "rt_bounds": {"lower": 0, "upper": 1, "grid_points": 2}},
    {"capital_cost": "x", "fuel_cost": "pwl(q, 0,0, 2,1)",
     "forced_outage_rate": 0,
     "capacity_bounds": {"lower": 0, "upper": 4, "grid_points": 5},
     "reserve_bounds": {"lower": 0, "upper": 2, "grid_points": 3},
     "energy_bounds": {"lower": 0, "upper": 2, "grid_points": 3},
     "rt_bounds": {"lower": 0, "upper": 1, "grid_points": 2}}
  ],
  "loads": [4, 3.5],
  "eldc_breakpoints": [[0, 1], [10, 0]],
  "rho_avg": 0.1,
  "outage_cost": 4,
  "existing_capacity": 3,
  "scarcity_adder": 2
})json";

nlohmann::json reparse(const std::string& record) { return nlohmann::json::parse(record); }

}  // namespace

TEST_CASE("scenario documents parse with exact field values") {
  GepScenario s = parse_scenario(kScenarioDoc, "twin.json");
  CHECK(s.horizon == 2);
  CHECK(s.name == "twin");
  REQUIRE(s.companies.size() == 2);
  CHECK(s.companies[0].name == "alpha");
  CHECK(s.companies[0].capital_cost.source() == "0.5*x^2");
  CHECK(s.companies[0].fuel_cost.source() == "0.25 * q^2");
  CHECK(s.companies[0].forced_outage_rate == 0.05);
  REQUIRE(s.companies[0].ramp_up.has_value());
  CHECK(*s.companies[0].ramp_up == 1.5);
  CHECK(!s.companies[0].ramp_down.has_value());
  CHECK(s.companies[0].capacity_bounds.lower == 0.0);
  CHECK(s.companies[0].capacity_bounds.upper == 4.0);
  CHECK(s.companies[0].capacity_bounds.grid_points == 5);
  CHECK(s.companies[1].name == "");
  CHECK(!s.companies[1].ramp_up.has_value());
  CHECK(s.companies[1].fuel_cost.source() == "pwl(q, 0,0, 2,1)");
  CHECK(s.loads == Vec{4.0, 3.5});
  REQUIRE(s.eldc.breakpoints.size() == 2);
  CHECK(s.eldc.breakpoints[0] == std::pair{0.0, 1.0});
  CHECK(s.eldc.breakpoints[1] == std::pair{10.0, 0.0});
  CHECK(s.rho_avg == 0.1);
  CHECK(s.outage_cost == 4.0);
  CHECK(s.existing_capacity == 3.0);
  REQUIRE(s.scarcity_adder.has_value());
  CHECK(*s.scarcity_adder == 2.0);
}

TEST_CASE("scenario serialization is canonical and parse round-trips exactly") {
  GepScenario s = parse_scenario(kScenarioDoc, "twin.json");
  std::string text1 = serialize_scenario(s);
  GepScenario s2 = parse_scenario(text1, "round");
  std::string text2 = serialize_scenario(s2);
  CHECK(text1 == text2);  // canonical text is a fixed point

  CHECK(s2.horizon == s.horizon);
  CHECK(s2.loads == s.loads);
  CHECK(s2.rho_avg == s.rho_avg);
  CHECK(s2.companies[0].capital_cost.source() == s.companies[0].capital_cost.source());
  CHECK(s2.companies[0].fuel_cost.source() == s.companies[0].fuel_cost.source());
  CHECK(s2.companies[0].ramp_up == s.companies[0].ramp_up);
  CHECK(s2.companies[1].name == "");
  CHECK(s2.eldc.breakpoints == s.eldc.breakpoints);
  CHECK(s2.scarcity_adder == s.scarcity_adder);

  // integers stay integers, absent optionals stay absent
  CHECK(text1.find("\"horizon\": 2") != std::string::npos);
  CHECK(text1.find("\"grid_points\": 5") != std::string::npos);
  CHECK(text1.find("\"ramp_up\": 1.5") != std::string::npos);
  CHECK(text1.find("ramp_down") == std::string::npos);
  CHECK(text1.find("\"fuel_cost\": \"0.25 * q^2\"") != std::string::npos);
  CHECK(text1.back() == '\n');
}

TEST_CASE("scenario files save and load from disk") {
  GepScenario s = parse_scenario(kScenarioDoc, "twin.json");
  auto path = std::filesystem::temp_directory_path() / "pricegame_io_roundtrip.json";
  save_scenario(s, path.string());
  GepScenario s2 = load_scenario(path.string());
  CHECK(serialize_scenario(s2) == serialize_scenario(s));
  std::filesystem::remove(path);

  CHECK_THROWS_WITH_AS(load_document((path / "missing.json").string()),
                       doctest::Contains("cannot read"), ParseError);
}

TEST_CASE("scenario parse rejects malformed documents with field paths") {
  auto mutate = [](const std::string& drop_key) {
    nlohmann::json doc = nlohmann::json::parse(kScenarioDoc);
    doc.erase(drop_key);
    return doc.dump();
  };
  CHECK_THROWS_WITH_AS(parse_scenario(mutate("loads"), "bad.json"),
                       doctest::Contains("loads: missing required field"), ParseError);
  CHECK_THROWS_WITH_AS(parse_scenario(mutate("eldc_breakpoints"), "bad.json"),
                       doctest::Contains("eldc_breakpoints"), ParseError);

  nlohmann::json doc = nlohmann::json::parse(kScenarioDoc);
  doc["extra"] = 1;
  CHECK_THROWS_WITH_AS(parse_scenario(doc.dump(), "bad.json"),
                       doctest::Contains("extra: unknown field"), ParseError);

  doc = nlohmann::json::parse(kScenarioDoc);
  doc["companies"][0]["fuel_cost"] = "(((";
  CHECK_THROWS_WITH_AS(parse_scenario(doc.dump(), "bad.json"),
                       doctest::Contains("companies[0].fuel_cost"), ParseError);

  doc = nlohmann::json::parse(kScenarioDoc);
  doc["companies"][1]["capacity_bounds"]["grid_points"] = 2.5;
  CHECK_THROWS_WITH_AS(parse_scenario(doc.dump(), "bad.json"),
                       doctest::Contains("companies[1].capacity_bounds.grid_points"), ParseError);

  doc = nlohmann::json::parse(kScenarioDoc);
  doc["eldc_breakpoints"][1] = nlohmann::json::array({10.0});
  CHECK_THROWS_WITH_AS(parse_scenario(doc.dump(), "bad.json"),
                       doctest::Contains("eldc_breakpoints[1]"), ParseError);

  doc = nlohmann::json::parse(kScenarioDoc);
  doc["loads"][0] = "a";
  CHECK_THROWS_WITH_AS(parse_scenario(doc.dump(), "bad.json"),
                       doctest::Contains("loads[0]: expected a number"), ParseError);

  // semantic faults surface through the scenario validator, origin-tagged
  doc = nlohmann::json::parse(kScenarioDoc);
  doc["rho_avg"] = 1.5;
  CHECK_THROWS_WITH_AS(parse_scenario(doc.dump(), "bad.json"),
                       doctest::Contains("outage rate"), UsageError);
  try {
    parse_scenario(doc.dump(), "bad.json");
  } catch (const UsageError& e) {
    CHECK(std::string(e.what()).find("bad.json: ") == 0);
  }

  CHECK_THROWS_WITH_AS(parse_document("{not json", "garbled.json"),
                       doctest::Contains("garbled.json"), ParseError);
  CHECK_THROWS_WITH_AS(parse_document("[1, 2]", "list.json"), doctest::Contains("top level"),
                       ParseError);
}

TEST_CASE("game documents compile to evaluable instances") {
  InputDocument doc = parse_document(kDuopolyDoc, "duopoly.json");
  REQUIRE(doc.game.has_value());
  CHECK(!doc.is_scenario());
  GameInstance& game = *doc.game;
  CHECK(game.name == "duopoly");
  CHECK(game.formulation == Formulation::AnticipativeE1);
  CHECK(game.num_players() == 2);
  CHECK(game.joint_dims() == 2);
  CHECK(game.price_dimension == 1);
  CHECK(game.players[0].own_term_depends_only_on_self);
  CHECK(game.players[1].own_term_depends_only_on_self);
  CHECK(!game.shared.depends_only_on_own_action);
  CHECK(game.price.depends_on_x);  // the price rule reads the decisions

  Vec x{2.0, 2.0};
  CHECK(game.price.closed_form(x) == Vec{6.0});
  CHECK(evaluate_payoff(game, 0, x, Vec{6.0}) == 20.0);  // 6*4 - 4
  CHECK(game.players[1].own_term(x) == -4.0);
}

TEST_CASE("a loaded game solves and certifies") {
  GameInstance game = *parse_document(kDuopolyDoc, "duopoly.json").game;
  PotentialFunction pi = construct_sum_potential(game);
  REQUIRE(verify_potential(game, pi).holds);
  SolveResult res = solve_e1(game, pi);
  // interior optimum of (10-s)s - x1^2 - x2^2 sits at x = 5/3 each; on the
  // 0.5 grid the value 16.5 is tied and the scan meets (1.5, 1.5) first
  CHECK(res.point.x == Vec{1.5, 1.5});
  CHECK(res.point.prices.front() == Vec{7.0});
  CHECK(res.surrogate_value == 16.5);
  EquilibriumCertificate cert = check_e1(game, res.point);
  CHECK(cert.verdict == Verdict::Certified);
}

TEST_CASE("embedded candidates load and feed the verifier") {
  nlohmann::json doc = nlohmann::json::parse(kDuopolyDoc);
  doc["candidate"] = {{"x", {2.0, 2.0}}, {"price", {6.0}}};
  InputDocument in = parse_document(doc.dump(), "duopoly.json");
  REQUIRE(in.candidate.has_value());
  CHECK(in.candidate->x == Vec{2.0, 2.0});
  REQUIRE(in.candidate->prices.size() == 1);
  CHECK(in.candidate->prices[0] == Vec{6.0});

  // with the joint revenue term the deviator takes rival revenue into
  // account, so (2, 2) is refuted: x1 -> 1.5 gains (8.5)(3.5) - 2.25
  //   = 27.5 against 6*4 - 4 = 20 + rival cost ... payoff goes 20 -> 20.5
  EquilibriumCertificate cert = check_e1(*in.game, *in.candidate);
  CHECK(cert.verdict == Verdict::Refuted);
  REQUIRE(cert.worst.has_value());
  CHECK(cert.worst->improvement == 0.5);
  CHECK(cert.worst->to == Vec{1.5});

  doc["candidate"] = {{"x", {2.0}}, {"price", {6.0}}};
  CHECK_THROWS_WITH_AS(parse_document(doc.dump(), "duopoly.json"),
                       doctest::Contains("candidate.x"), ParseError);
  doc["candidate"] = {{"x", {2.0, 2.0}}, {"price", {6.0}}, {"prices", {{6.0}}}};
  CHECK_THROWS_WITH_AS(parse_document(doc.dump(), "duopoly.json"),
                       doctest::Contains("exactly one of"), ParseError);
  doc["candidate"] = {{"x", {2.0, 2.0}}, {"prices", {{6.0}, {6.0, 1.0}}}};
  CHECK_THROWS_WITH_AS(parse_document(doc.dump(), "duopoly.json"),
                       doctest::Contains("candidate.prices[1]"), ParseError);

  // scenario candidates size against companies x (1 + 3T) and 3T
  nlohmann::json scen = nlohmann::json::parse(kScenarioDoc);
  scen["candidate"] = {{"x", {4, 1, 0, 2, 2, 0, 0, 4, 1, 0, 2, 2, 0, 0}},
                       {"prices", {{1, 1, 2, 2, 0, 0}}}};
  InputDocument sin = parse_document(scen.dump(), "twin.json");
  REQUIRE(sin.candidate.has_value());
  CHECK(sin.candidate->x.size() == 14);
  scen["candidate"] = {{"x", {1, 2, 3}}, {"prices", {{1, 1, 2, 2, 0, 0}}}};
  CHECK_THROWS_WITH_AS(parse_document(scen.dump(), "twin.json"),
                       doctest::Contains("expected 14 coordinates"), ParseError);
}

TEST_CASE("own-action shared terms switch the evaluation basis") {
  const char* doc = R"json({
    "formulation": "anticipative_e2",
    "price_dimension": 1,
    "players": [
      {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x1^2)"},
      {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x2^2)"}
    ],
    "shared_term": "p*own",
    "price": {"closed_form": ["10-(x1+x2)"]}
  })json";
  GameInstance game = *parse_document(doc, "own.json").game;
  CHECK(game.shared.depends_only_on_own_action);
  Vec x{2.0, 2.0};
  CHECK(evaluate_payoff(game, 0, x, Vec{6.0}) == 8.0);  // 6*2 - 4

  PotentialFunction pi = construct_sum_potential(game);
  SolveResult res = solve_e2_consistent(game, pi);
  // sum of own revenues equals the joint term, so the surrogate surface is
  // the same as in the joint-form duopoly
  CHECK(res.point.x == Vec{1.5, 1.5});
  CHECK(res.surrogate_value == 16.5);
  CHECK(check_e2_consistent(game, res.point).verdict == Verdict::Certified);
}

TEST_CASE("variable aliases x1_1 and p1 match their short forms") {
  const char* doc = R"json({
    "formulation": "anticipative_e1",
    "price_dimension": 1,
    "players": [
      {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x1_1^2)"},
      {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x2^2)"}
    ],
    "shared_term": "p1*(x1_1+x2)",
    "price": {"closed_form": ["10-(x1+x2_1)"]}
  })json";
  GameInstance game = *parse_document(doc, "alias.json").game;
  CHECK(game.players[0].own_term_depends_only_on_self);
  Vec x{2.0, 1.5};
  CHECK(game.price.closed_form(x) == Vec{6.5});
  CHECK(evaluate_payoff(game, 0, x, Vec{6.5}) == 6.5 * 3.5 - 4.0);
}

TEST_CASE("multi-dimensional blocks use xi_k names") {
  const char* doc = R"json({
    "formulation": "taking_t1",
    "price_dimension": 1,
    "players": [
      {"action": {"lower": [0, 0], "upper": [2, 4], "grid_points": [3, 5]},
       "own_term": "-(x1_1 + 2*x1_2)"}
    ],
    "shared_term": "p*(x1_1+x1_2)",
    "price": {"closed_form": ["3"]}
  })json";
  GameInstance game = *parse_document(doc, "block.json").game;
  CHECK(game.joint_dims() == 2);
  Vec x{1.0, 2.0};
  CHECK(evaluate_payoff(game, 0, x, Vec{3.0}) == 4.0);  // 3*3 - 5
}

TEST_CASE("price boxes with decision-dependent bounds load") {
  const char* doc = R"json({
    "formulation": "taking_tm",
    "price_dimension": 1,
    "players": [
      {"action": {"lower": [0], "upper": [3], "grid_points": [7]},
       "own_term": "-((x1-2)^2)"}
    ],
    "shared_term": "p*x1",
    "price": {"objective": "(p-4)^2",
              "box": {"lower": [0], "upper": ["1+x1"], "grid_points": [5]}}
  })json";
  GameInstance game = *parse_document(doc, "capped.json").game;
  CHECK(game.price.depends_on_x);
  auto sol = solve_price_problem(game, Vec{1.0});
  REQUIRE(sol.size() == 1);
  CHECK(sol[0] == Vec{2.0});  // box [0, 2], objective pulls to the top
}

TEST_CASE("constant regions leave the price problem decision-free") {
  const char* doc = R"json({
    "formulation": "taking_t1",
    "price_dimension": 1,
    "players": [
      {"action": {"lower": [0], "upper": [3], "grid_points": [7]}, "own_term": "0-x1"}
    ],
    "shared_term": "p*x1",
    "price": {"objective": "(p-x1)^2",
              "box": {"lower": [0], "upper": [10], "grid_points": [21]}}
  })json";
  GameInstance game = *parse_document(doc, "t1.json").game;
  CHECK(!game.price.depends_on_x);  // objective reads x, the region does not
  CHECK(solve_price_problem(game, Vec{1.5}) == std::vector<Vec>{Vec{1.5}});
  CHECK(solve_price_problem(game, Vec{3.0}) == std::vector<Vec>{Vec{3.0}});
}

TEST_CASE("explicit price point sets load") {
  const char* doc = R"json({
    "formulation": "taking_tm",
    "price_dimension": 1,
    "players": [
      {"action": {"lower": [0], "upper": [3], "grid_points": [4]}, "own_term": "0-x1"}
    ],
    "shared_term": "p*x1",
    "price": {"objective": "(p-x1)^2", "points": [[0], [1.5], [3]]}
  })json";
  GameInstance game = *parse_document(doc, "points.json").game;
  CHECK(!game.price.depends_on_x);
  CHECK(solve_price_problem(game, Vec{1.4}) == std::vector<Vec>{Vec{1.5}});
}

TEST_CASE("a game document may have no strategic players") {
  const char* doc = R"json({
    "formulation": "taking_t1",
    "price_dimension": 1,
    "players": [],
    "shared_term": "0",
    "price": {"objective": "p^2", "box": {"lower": [0], "upper": [1], "grid_points": [3]}}
  })json";
  GameInstance game = *parse_document(doc, "empty.json").game;
  CHECK(game.num_players() == 0);
  CHECK(solve_price_problem(game, Vec{}) == std::vector<Vec>{Vec{0.0}});
}

TEST_CASE("game parse rejects malformed documents with field paths") {
  auto doc = [] { return nlohmann::json::parse(kDuopolyDoc); };

  nlohmann::json d = doc();
  d["formulation"] = "nash";
  CHECK_THROWS_WITH_AS(parse_document(d.dump(), "bad.json"),
                       doctest::Contains("formulation: unknown formulation"), ParseError);

  d = doc();
  d["price_dimension"] = 0;
  CHECK_THROWS_WITH_AS(parse_document(d.dump(), "bad.json"),
                       doctest::Contains("price_dimension"), ParseError);

  d = doc();
  d["players"][0]["own_term"] = "-(x3^2)";
  CHECK_THROWS_WITH_AS(parse_document(d.dump(), "bad.json"),
                       doctest::Contains("players[0].own_term"), ParseError);

  d = doc();
  d["shared_term"] = "p*own + x1";
  CHECK_THROWS_WITH_AS(parse_document(d.dump(), "bad.json"), doctest::Contains("shared_term"),
                       ParseError);

  d = doc();
  d["price"] = nlohmann::json::object();
  CHECK_THROWS_WITH_AS(parse_document(d.dump(), "bad.json"),
                       doctest::Contains("closed form, a box or an explicit point set"),
                       ParseError);

  d = doc();
  d["price"]["box"] = {{"lower", {0}}, {"upper", {10}}, {"grid_points", {5}}};
  d["price"]["points"] = {{1.0}};
  CHECK_THROWS_WITH_AS(parse_document(d.dump(), "bad.json"),
                       doctest::Contains("mutually exclusive"), ParseError);

  d = doc();
  d["players"][0]["action"]["upper"] = {5, 5};
  CHECK_THROWS_WITH_AS(parse_document(d.dump(), "bad.json"),
                       doctest::Contains("players[0].action"), ParseError);

  // the sampling validator runs as part of loading
  d = doc();
  d["price"]["closed_form"] = {"20"};
  d["price"]["box"] = {{"lower", {0}}, {"upper", {10}}, {"grid_points", {5}}};
  CHECK_THROWS_WITH_AS(parse_document(d.dump(), "bad.json"),
                       doctest::Contains("closed-form price lies outside"), UsageError);
}

TEST_CASE("certificate records carry the fixed field set") {
  EquilibriumCertificate cert;
  cert.point = FeasiblePoint{Vec{2.0}, {Vec{6.0}}, SetTag::A};
  cert.kind = CheckKind::T;
  cert.verdict = Verdict::Refuted;
  cert.per_player_gap = Vec{0.5};
  cert.price_player_gap = 0.0;
  cert.gamma_full_by_player = {1};
  cert.gamma_full = true;
  cert.evaluations = 5;
  cert.worst = DeviationWitness{0, Vec{2.0}, Vec{1.5}, Vec{6.0}, 0.5};
  cert.note = "grid-exact";

  std::string rec = certificate_record(cert);
  CHECK(rec.back() == '\n');
  CHECK(rec.find('\n') == rec.size() - 1);  // one line per record
  CHECK(rec == certificate_record(cert));   // byte-stable

  nlohmann::json j = reparse(rec);
  for (const char* key : {"point", "gaps", "verdict", "witness", "tolerances"})
    CHECK(j.contains(key));
  CHECK(j["verdict"] == "Refuted");
  CHECK(j["kind"] == "t");
  CHECK(j["point"]["x"] == nlohmann::json::array({2.0}));
  CHECK(j["point"]["prices"][0] == nlohmann::json::array({6.0}));
  CHECK(j["point"]["tag"] == "A");
  CHECK(j["gaps"]["players"][0] == 0.5);
  CHECK(j["gaps"]["price"] == 0.0);
  CHECK(j["witness"]["player"] == 0);
  CHECK(j["witness"]["to"] == nlohmann::json::array({1.5}));
  CHECK(j["witness"]["improvement"] == 0.5);
  CHECK(j["tolerances"]["eps_dev"] == 1e-6);
  CHECK(j["tolerances"]["eps_sol"] == 1e-6);
  CHECK(j["gamma_full"] == true);
  CHECK(j["evaluations"] == 5);
  CHECK(j["note"] == "grid-exact");

  cert.worst.reset();
  CHECK(reparse(certificate_record(cert))["witness"].is_null());
}

TEST_CASE("solve and potential records serialize") {
  SolveResult res;
  res.point = FeasiblePoint{Vec{1.5, 1.5}, {Vec{7.0}}, SetTag::F1};
  res.surrogate_value = 16.5;
  res.method = SolveMethod::BestResponse;
  res.iterations = 3;
  res.evaluations = 42;
  res.converged = true;
  nlohmann::json j = reparse(solve_record(res));
  CHECK(j["surrogate_value"] == 16.5);
  CHECK(j["method"] == "best_response");
  CHECK(j["iterations"] == 3);
  CHECK(j["converged"] == true);
  CHECK(j["point"]["x"] == nlohmann::json::array({1.5, 1.5}));

  PotentialReport rep;
  rep.holds = false;
  rep.max_violation = 0.25;
  rep.samples = 1000;
  PotentialMove move;
  move.player = 1;
  move.x_before = Vec{0.0};
  move.x_after = Vec{1.0};
  move.p_before = Vec{2.0};
  move.p_after = Vec{2.0};
  move.potential_delta = 1.0;
  move.payoff_delta = 0.75;
  rep.witness = move;
  j = reparse(potential_record(rep, PotentialScope::FullGame));
  CHECK(j["holds"] == false);
  CHECK(j["max_violation"] == 0.25);
  CHECK(j["scope"] == "full_game");
  CHECK(j["witness"]["player"] == 1);
  CHECK(j["witness"]["payoff_delta"] == 0.75);
  j = reparse(potential_record(PotentialReport{}, PotentialScope::PlayersOnly));
  CHECK(j["holds"] == true);
  CHECK(j["scope"] == "players_only");
  CHECK(j["witness"].is_null());
}
