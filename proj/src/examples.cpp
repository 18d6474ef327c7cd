#include "pricegame/examples.hpp"

namespace pricegame {
namespace {

const char* kCournotText = R"json({
  "name": "cournot",
  "formulation": "anticipative_e1",
  "price_dimension": 1,
  "players": [
    {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x1^2)"},
    {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x2^2)"}
  ],
  "shared_term": "p*own",
  "price": {"closed_form": ["10-(x1+x2)"]},
  "candidate": {"x": [2, 2], "price": [6]}
}
)json";

const char* kDuopolyJointText = R"json({
  "name": "duopoly-joint",
  "formulation": "anticipative_e1",
  "price_dimension": 1,
  "players": [
    {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x1^2)"},
    {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x2^2)"}
  ],
  "shared_term": "p*(x1+x2)",
  "price": {"closed_form": ["10-(x1+x2)"]}
}
)json";

const char* kDuopolyOwnText = R"json({
  "name": "duopoly-own",
  "formulation": "anticipative_e2",
  "price_dimension": 1,
  "players": [
    {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x1^2)"},
    {"action": {"lower": [0], "upper": [5], "grid_points": [11]}, "own_term": "-(x2^2)"}
  ],
  "shared_term": "p*own",
  "price": {"closed_form": ["10-(x1+x2)"]}
}
)json";

const char* kFlatBottomText = R"json({
  "name": "flat-bottom",
  "formulation": "anticipative_e1",
  "price_dimension": 1,
  "players": [
    {"action": {"lower": [0], "upper": [2], "grid_points": [5]}, "own_term": "-(0.5*x1^2)"}
  ],
  "shared_term": "p*x1",
  "price": {"objective": "max(max(p-(x1+1), (x1+1)-p)-1, 0)",
            "box": {"lower": [0], "upper": [4], "grid_points": [9]}}
}
)json";

const char* kMovingWindowText = R"json({
  "name": "moving-window",
  "formulation": "taking_tm",
  "price_dimension": 1,
  "players": [
    {"action": {"lower": [0], "upper": [3], "grid_points": [7]}, "own_term": "-(0.25*x1^2)"}
  ],
  "shared_term": "p*x1",
  "price": {"objective": "(p-2)^2",
            "box": {"lower": ["x1"], "upper": ["x1+2"], "grid_points": [5]}},
  "candidate": {"x": [2], "price": [2]}
}
)json";

const char* kGepToyText = R"json({
  "name": "gep-toy",
  "horizon": 1,
  "companies": [
    {"name": "solo", "capital_cost": "0.5*x^2", "fuel_cost": "0.25*q^2",
     "forced_outage_rate": 0,
     "capacity_bounds": {"lower": 0, "upper": 4, "grid_points": 9},
     "reserve_bounds": {"lower": 0, "upper": 4, "grid_points": 9},
     "energy_bounds": {"lower": 0, "upper": 4, "grid_points": 9},
     "rt_bounds": {"lower": 0, "upper": 2, "grid_points": 5}}
  ],
  "loads": [4],
  "eldc_breakpoints": [[0, 1], [10, 0]],
  "rho_avg": 0,
  "outage_cost": 4,
  "existing_capacity": 4,
  "scarcity_adder": 2
}
)json";

const char* kGepSymText = R"json({
  "name": "gep-sym",
  "horizon": 1,
  "companies": [
    {"name": "alpha", "capital_cost": "0.5*x^2", "fuel_cost": "0.25*q^2",
     "forced_outage_rate": 0,
     "capacity_bounds": {"lower": 0, "upper": 4, "grid_points": 5},
     "reserve_bounds": {"lower": 0, "upper": 2, "grid_points": 3},
     "energy_bounds": {"lower": 0, "upper": 2, "grid_points": 3},
     "rt_bounds": {"lower": 0, "upper": 1, "grid_points": 2}},
    {"name": "beta", "capital_cost": "0.5*x^2", "fuel_cost": "0.25*q^2",
     "forced_outage_rate": 0,
     "capacity_bounds": {"lower": 0, "upper": 4, "grid_points": 5},
     "reserve_bounds": {"lower": 0, "upper": 2, "grid_points": 3},
     "energy_bounds": {"lower": 0, "upper": 2, "grid_points": 3},
     "rt_bounds": {"lower": 0, "upper": 1, "grid_points": 2}}
  ],
  "loads": [4],
  "eldc_breakpoints": [[0, 1], [10, 0]],
  "rho_avg": 0,
  "outage_cost": 4,
  "existing_capacity": 3,
  "scarcity_adder": 2
}
)json";

const char* kGepWithholdText = R"json({
  "name": "gep-withhold",
  "horizon": 1,
  "companies": [
    {"name": "hold", "capital_cost": "0.05*x^2", "fuel_cost": "q",
     "forced_outage_rate": 0,
     "capacity_bounds": {"lower": 0, "upper": 4, "grid_points": 9},
     "reserve_bounds": {"lower": 0, "upper": 4, "grid_points": 9},
     "energy_bounds": {"lower": 0, "upper": 2, "grid_points": 5},
     "rt_bounds": {"lower": 0, "upper": 1, "grid_points": 3}}
  ],
  "loads": [0],
  "eldc_breakpoints": [[0, 1], [10, 0]],
  "rho_avg": 0,
  "outage_cost": 1,
  "existing_capacity": 3,
  "scarcity_adder": 1
}
)json";

std::vector<ExampleEntry> build_catalog() {
  std::vector<ExampleEntry> entries;
  entries.push_back(
      {"cournot",
       "classic duopoly: own revenue p*own, cost x_i^2, inverse demand 10-(x1+x2), grid step 0.5",
       "first-order conditions 10 - 4*q - q_rival = 0 give q = 2 each and price 6; every other "
       "grid point was refuted by a hand best-response scan",
       "enumerate finds exactly x=(2, 2) at price 6; verify certifies the embedded candidate "
       "with zero gaps",
       kCournotText, false});
  entries.push_back(
      {"duopoly-joint",
       "duopoly sharing the joint revenue p*(x1+x2); same costs and demand rule as cournot",
       "the surrogate surface (10-s)*s - x1^2 - x2^2 peaks at x = 5/3 each; on the 0.5 grid the "
       "tied maximum 16.5 is met first at (1.5, 1.5)",
       "solve returns x=(1.5, 1.5), price 7, surrogate value 16.5, and the point certifies",
       kDuopolyJointText, false});
  entries.push_back(
      {"duopoly-own",
       "consistent-conjecture duopoly: own revenue p*own with one shared price conjecture",
       "the conjecture-consistent surrogate equals the joint-form surface, so the same hand "
       "optimum applies; deviations must keep the conjecture optimal, which pins the fiber",
       "solve returns x=(1.5, 1.5), surrogate value 16.5, certified under consistent conjectures",
       kDuopolyOwnText, false});
  entries.push_back(
      {"flat-bottom",
       "single producer whose price objective is flat on [x1, x1+2]: the price problem has a "
       "whole interval of solutions",
       "the best reply picks the top of the flat interval, so the surrogate is "
       "(x1+2)*x1 - 0.5*x1^2, increasing on [0, 2]; hand maximum at the upper bound",
       "solve returns x=(2), price 4, surrogate value 6, certified",
       kFlatBottomText, false});
  entries.push_back(
      {"moving-window",
       "price-taking producer with a decision-coupled price window M(x) = [x1, x1+2]: deviations "
       "that would push the price outside the window are excluded",
       "at the embedded candidate (x=2, p=2) the restricted deviation set is [0, 2] where "
       "2x - 0.25x^2 peaks at 2; unrestricted deviation to x=3 gains 0.75 by hand",
       "verify certifies the candidate under restricted deviations (restriction binding); the "
       "unrestricted check refutes it with witness x=3, improvement 0.75",
       kMovingWindowText, false});
  entries.push_back(
      {"gep-toy",
       "one-company expansion toy, one period; decision block per company is capacity, then "
       "per-period reserve, energy and real-time quantities",
       "stationarity by hand: reserve price 2 at total reserve 1, energy clears short at "
       "marginal cost 0.5 plus adder 2, and capacity 2 balances 0.5*x^2 against reserve revenue",
       "solve (price-taking) returns capacity 2, reserve 1, energy 1, real-time 0 with prices "
       "(2, 2.5, 0), certified with zero gaps",
       kGepToyText, true});
  entries.push_back(
      {"gep-sym",
       "two identical companies, one period; same cost curves as gep-toy on coarser grids",
       "the single-company optimum splits evenly; an exhaustive scan of either company's grid "
       "at the rival's block confirmed the swap-symmetric point is a best response",
       "solve (price-taking) returns capacity 2, reserve 1, energy 1, real-time 0 for both "
       "companies with prices (2, 2.5, 0), certified",
       kGepSymText, true});
  entries.push_back(
      {"gep-withhold",
       "one company whose reserve revenue follows the load duration curve; the anticipative "
       "solution withholds capacity to keep the reserve price high",
       "linear fuel makes energy and real-time margins vanish, so only the reserve market "
       "matters: the price-taking fixed point solves r = 10*(0.7 - r/10) at r = 3.5, while "
       "the anticipative surrogate 0.7*r - 0.15*r^2 peaks on the half-step grid at 2.5",
       "price-taking settles capacity = reserve = 3.5 at reserve price 0.35; the anticipative "
       "run withholds to capacity = reserve = 2.5; both certify and the decisions differ by "
       "two grid steps",
       kGepWithholdText, true});
  return entries;
}

}  // namespace

const std::vector<ExampleEntry>& example_catalog() {
  static const std::vector<ExampleEntry> catalog = build_catalog();
  return catalog;
}

const ExampleEntry& find_example(const std::string& name) {
  for (const auto& e : example_catalog())
    if (e.name == name) return e;
  std::string names;
  for (const auto& e : example_catalog()) {
    if (!names.empty()) names += ", ";
    names += e.name;
  }
  throw UsageError("unknown builtin '" + name + "'; available: " + names);
}

bool is_builtin(const std::string& input) { return input.rfind("builtin:", 0) == 0; }

InputDocument load_input(const std::string& path_or_builtin) {
  if (is_builtin(path_or_builtin)) {
    const ExampleEntry& e = find_example(path_or_builtin.substr(8));
    return parse_document(e.text, path_or_builtin);
  }
  return load_document(path_or_builtin);
}

std::string render_example_catalog() {
  std::string out = "bundled instances (pass builtin:<name> as --input):\n";
  for (const auto& e : example_catalog()) {
    out += "\nbuiltin:" + e.name + (e.scenario ? "  [scenario]\n" : "  [game]\n");
    out += "  " + e.summary + "\n";
    out += "  oracle: " + e.oracle + "\n";
    out += "  expect: " + e.expected + "\n";
  }
  return out;
}

}  // namespace pricegame
