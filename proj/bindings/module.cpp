#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <vector>

#include "pricegame/examples.hpp"
#include "pricegame/gep.hpp"
#include "pricegame/io.hpp"
#include "pricegame/potential.hpp"
#include "pricegame/runner.hpp"
#include "pricegame/solver.hpp"
#include "pricegame/util.hpp"
#include "pricegame/verifier.hpp"

namespace py = pybind11;
using namespace pricegame;

namespace {

std::vector<bool> to_bool_list(const std::vector<char>& v) {
  return std::vector<bool>(v.begin(), v.end());
}

}  // namespace

PYBIND11_MODULE(_pricegame, m) {
  m.doc() = "equilibrium solvers and brute-force verifiers for price-coupling games";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<UsageError>(m, "UsageError");
  py::register_exception<DomainError>(m, "DomainError");
  py::register_exception<InfeasibleError>(m, "InfeasibleError");
  py::register_exception<EvalError>(m, "EvalError");
  py::register_exception<BudgetError>(m, "BudgetError");

  py::enum_<Formulation>(m, "Formulation")
      .value("anticipative_e1", Formulation::AnticipativeE1)
      .value("anticipative_e2", Formulation::AnticipativeE2Consistent)
      .value("taking_t1", Formulation::TakingT1)
      .value("taking_tm", Formulation::TakingTm);
  m.def("formulation_from_string", &formulation_from_string, py::arg("name"));

  py::enum_<SetTag>(m, "SetTag")
      .value("F1", SetTag::F1)
      .value("F2", SetTag::F2)
      .value("A", SetTag::A);

  py::enum_<Verdict>(m, "Verdict")
      .value("Certified", Verdict::Certified)
      .value("Refuted", Verdict::Refuted)
      .value("Inconclusive", Verdict::Inconclusive);

  py::enum_<CheckKind>(m, "CheckKind")
      .value("e1", CheckKind::E1)
      .value("e2_consistent", CheckKind::E2Consistent)
      .value("t", CheckKind::T)
      .value("tm", CheckKind::Tm);

  py::enum_<SolveMethod>(m, "SolveMethod")
      .value("p1_max", SolveMethod::P1Max)
      .value("p2_max", SolveMethod::P2Max)
      .value("pt_max", SolveMethod::PtMax)
      .value("best_response", SolveMethod::BestResponse);

  py::enum_<PotentialScope>(m, "PotentialScope")
      .value("players_only", PotentialScope::PlayersOnly)
      .value("full_game", PotentialScope::FullGame);

  py::enum_<RunMode>(m, "RunMode")
      .value("solve", RunMode::Solve)
      .value("verify", RunMode::Verify)
      .value("enumerate", RunMode::Enumerate)
      .value("potential_check", RunMode::PotentialCheck);
  m.def("run_mode_from_string", &run_mode_from_string, py::arg("name"));

  py::enum_<ReportFormat>(m, "ReportFormat")
      .value("table", ReportFormat::Table)
      .value("records", ReportFormat::Records);

  py::class_<Tolerances>(m, "Tolerances")
      .def(py::init<>())
      .def_readwrite("eps_sol", &Tolerances::eps_sol)
      .def_readwrite("eps_eq", &Tolerances::eps_eq)
      .def_readwrite("eps_dev", &Tolerances::eps_dev)
      .def_readwrite("eps_pot", &Tolerances::eps_pot);

  py::class_<SolverConfig>(m, "SolverConfig")
      .def(py::init<>())
      .def_readwrite("grid_refinements", &SolverConfig::grid_refinements)
      .def_readwrite("multistarts", &SolverConfig::multistarts)
      .def_readwrite("seed", &SolverConfig::seed)
      .def_readwrite("max_br_iterations", &SolverConfig::max_br_iterations)
      .def_readwrite("br_damping", &SolverConfig::br_damping)
      .def_readwrite("enumeration_budget", &SolverConfig::enumeration_budget)
      .def_readwrite("lipschitz_bound", &SolverConfig::lipschitz_bound)
      .def_readwrite("potential_samples", &SolverConfig::potential_samples)
      .def_readwrite("price_grid_points", &SolverConfig::price_grid_points);

  py::class_<FeasiblePoint>(m, "FeasiblePoint")
      .def(py::init<>())
      .def(py::init([](Vec x, std::vector<Vec> prices, SetTag tag) {
             return FeasiblePoint{std::move(x), std::move(prices), tag};
           }),
           py::arg("x"), py::arg("prices"), py::arg("tag") = SetTag::F1)
      .def_readwrite("x", &FeasiblePoint::x)
      .def_readwrite("prices", &FeasiblePoint::prices)
      .def_readwrite("tag", &FeasiblePoint::tag);

  py::class_<GameInstance>(m, "GameInstance")
      .def_property_readonly("name", [](const GameInstance& g) { return g.name; })
      .def_readwrite("formulation", &GameInstance::formulation)
      .def_property_readonly("price_dimension",
                             [](const GameInstance& g) { return g.price_dimension; })
      .def_property_readonly("num_players", &GameInstance::num_players)
      .def_property_readonly("joint_dims", &GameInstance::joint_dims)
      .def("x_feasible",
           [](const GameInstance& g, const Vec& x) { return g.x_feasible(x); }, py::arg("x"))
      .def("validate_structure", &GameInstance::validate_structure);

  m.def(
      "evaluate_payoff",
      [](const GameInstance& g, std::size_t i, const Vec& x, const Vec& p, const Tolerances& tol) {
        return evaluate_payoff(g, i, x, p, tol);
      },
      py::arg("game"), py::arg("player"), py::arg("x"), py::arg("p"),
      py::arg("tol") = Tolerances{});
  m.def(
      "solve_price_problem",
      [](const GameInstance& g, const Vec& x, const Tolerances& tol,
         std::optional<int> price_points_override) {
        return solve_price_problem(g, x, tol, price_points_override);
      },
      py::arg("game"), py::arg("x"), py::arg("tol") = Tolerances{},
      py::arg("price_points_override") = std::nullopt);
  m.def(
      "price_solves",
      [](const GameInstance& g, const Vec& x, const Vec& p, const Tolerances& tol) {
        return price_solves(g, x, p, tol);
      },
      py::arg("game"), py::arg("x"), py::arg("p"), py::arg("tol") = Tolerances{});
  m.def(
      "member_f1",
      [](const GameInstance& g, const Vec& x, const Vec& p, const Tolerances& tol) {
        return member_f1(g, x, p, tol);
      },
      py::arg("game"), py::arg("x"), py::arg("p"), py::arg("tol") = Tolerances{});
  m.def(
      "member_f2",
      [](const GameInstance& g, const Vec& x, const std::vector<Vec>& conjectures,
         const Tolerances& tol) { return member_f2(g, x, conjectures, tol); },
      py::arg("game"), py::arg("x"), py::arg("conjectures"), py::arg("tol") = Tolerances{});
  m.def(
      "member_a",
      [](const GameInstance& g, const Vec& x, const Vec& p, const Tolerances& tol) {
        return member_a(g, x, p, tol);
      },
      py::arg("game"), py::arg("x"), py::arg("p"), py::arg("tol") = Tolerances{});
  m.def(
      "gamma_set",
      [](const GameInstance& g, const Vec& p, std::size_t i, const Vec& x_rivals,
         const Tolerances& tol) { return gamma_set(g, p, i, x_rivals, tol); },
      py::arg("game"), py::arg("p"), py::arg("player"), py::arg("x_rivals"),
      py::arg("tol") = Tolerances{});

  py::class_<PotentialFunction>(m, "PotentialFunction")
      .def_readonly("kind", &PotentialFunction::kind)
      .def_readonly("scope", &PotentialFunction::scope)
      .def_readonly("verified", &PotentialFunction::verified)
      .def("__call__",
           [](const PotentialFunction& f, const Vec& x, const Vec& p) { return f.value(x, p); },
           py::arg("x"), py::arg("p") = Vec{});

  py::class_<PotentialMove>(m, "PotentialMove")
      .def_readonly("player", &PotentialMove::player)
      .def_readonly("x_before", &PotentialMove::x_before)
      .def_readonly("x_after", &PotentialMove::x_after)
      .def_readonly("p_before", &PotentialMove::p_before)
      .def_readonly("p_after", &PotentialMove::p_after)
      .def_readonly("potential_delta", &PotentialMove::potential_delta)
      .def_readonly("payoff_delta", &PotentialMove::payoff_delta);

  py::class_<PotentialReport>(m, "PotentialReport")
      .def_readonly("holds", &PotentialReport::holds)
      .def_readonly("max_violation", &PotentialReport::max_violation)
      .def_readonly("samples", &PotentialReport::samples)
      .def_readonly("witness", &PotentialReport::witness);

  m.def("construct_sum_potential", &construct_sum_potential, py::arg("game"));
  m.def("verify_potential", &verify_potential, py::arg("game"), py::arg("candidate"),
        py::arg("samples") = 1000, py::arg("seed") = 0, py::arg("tol") = Tolerances{});
  m.def("construct_tm_potential", &construct_tm_potential, py::arg("game"),
        py::arg("samples") = 1000, py::arg("seed") = 0, py::arg("tol") = Tolerances{});

  py::class_<SolveResult>(m, "SolveResult")
      .def_readonly("point", &SolveResult::point)
      .def_readonly("surrogate_value", &SolveResult::surrogate_value)
      .def_readonly("method", &SolveResult::method)
      .def_readonly("iterations", &SolveResult::iterations)
      .def_readonly("evaluations", &SolveResult::evaluations)
      .def_readonly("converged", &SolveResult::converged)
      .def_property_readonly(
          "gamma_full_by_player",
          [](const SolveResult& r) { return to_bool_list(r.gamma_full_by_player); })
      .def_readonly("gamma_full", &SolveResult::gamma_full);

  m.def("solve_e1", &solve_e1, py::arg("game"), py::arg("potential"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def("solve_e2_consistent", &solve_e2_consistent, py::arg("game"), py::arg("potential"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def("solve_tm", &solve_tm, py::arg("game"), py::arg("full_potential"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def("solve_t1_best_response", &solve_t1_best_response, py::arg("game"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def("solve_formulation", &solve_formulation, py::arg("game"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});

  py::class_<DeviationWitness>(m, "DeviationWitness")
      .def_readonly("player", &DeviationWitness::player)
      .def_readonly("from_block", &DeviationWitness::from)
      .def_readonly("to_block", &DeviationWitness::to)
      .def_readonly("price", &DeviationWitness::price)
      .def_readonly("improvement", &DeviationWitness::improvement);

  py::class_<EquilibriumCertificate>(m, "EquilibriumCertificate")
      .def_readonly("point", &EquilibriumCertificate::point)
      .def_readonly("kind", &EquilibriumCertificate::kind)
      .def_readonly("verdict", &EquilibriumCertificate::verdict)
      .def_readonly("per_player_gap", &EquilibriumCertificate::per_player_gap)
      .def_readonly("price_player_gap", &EquilibriumCertificate::price_player_gap)
      .def_property_readonly(
          "gamma_full_by_player",
          [](const EquilibriumCertificate& c) { return to_bool_list(c.gamma_full_by_player); })
      .def_readonly("gamma_full", &EquilibriumCertificate::gamma_full)
      .def_readonly("tol", &EquilibriumCertificate::tol)
      .def_readonly("evaluations", &EquilibriumCertificate::evaluations)
      .def_readonly("worst", &EquilibriumCertificate::worst)
      .def_readonly("note", &EquilibriumCertificate::note);

  m.def("check_e1", &check_e1, py::arg("game"), py::arg("point"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def("check_e2_consistent", &check_e2_consistent, py::arg("game"), py::arg("point"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def("check_t", &check_t, py::arg("game"), py::arg("point"), py::arg("config") = SolverConfig{},
        py::arg("tol") = Tolerances{});
  m.def("check_tm", &check_tm, py::arg("game"), py::arg("point"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def("check_formulation", &check_formulation, py::arg("game"), py::arg("point"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def("enumerate_equilibria", &enumerate_equilibria, py::arg("game"), py::arg("kind"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def("point_tag_for", &point_tag_for, py::arg("formulation"));
  m.def("check_kind_for", &check_kind_for, py::arg("formulation"));

  py::class_<GepScenario>(m, "GepScenario")
      .def_property_readonly("name", [](const GepScenario& s) { return s.name; })
      .def_property_readonly("horizon", [](const GepScenario& s) { return s.horizon; })
      .def_property_readonly("num_companies",
                             [](const GepScenario& s) { return s.companies.size(); })
      .def_property_readonly("company_names",
                             [](const GepScenario& s) {
                               std::vector<std::string> names;
                               for (const GepCompany& c : s.companies) names.push_back(c.name);
                               return names;
                             })
      .def_property_readonly("loads", [](const GepScenario& s) { return s.loads; })
      .def_property_readonly("rho_avg", [](const GepScenario& s) { return s.rho_avg; })
      .def_property_readonly("outage_cost", [](const GepScenario& s) { return s.outage_cost; })
      .def_property_readonly("existing_capacity",
                             [](const GepScenario& s) { return s.existing_capacity; })
      .def_property_readonly("scarcity_adder",
                             [](const GepScenario& s) { return s.scarcity_adder; })
      .def("validate", &GepScenario::validate);

  py::class_<CompanyDecision>(m, "CompanyDecision")
      .def_readonly("capacity", &CompanyDecision::capacity)
      .def_readonly("reserve", &CompanyDecision::reserve)
      .def_readonly("energy", &CompanyDecision::energy)
      .def_readonly("realtime", &CompanyDecision::realtime);

  py::class_<GepPrices>(m, "GepPrices")
      .def_readonly("reserve", &GepPrices::reserve)
      .def_readonly("energy", &GepPrices::energy)
      .def_readonly("realtime", &GepPrices::realtime);

  py::class_<GepSolution>(m, "GepSolution")
      .def_readonly("result", &GepSolution::result)
      .def_readonly("certificate", &GepSolution::certificate)
      .def_readonly("decisions", &GepSolution::decisions)
      .def_readonly("prices", &GepSolution::prices)
      .def_readonly("costs_convex", &GepSolution::costs_convex)
      .def_readonly("convexity_violation", &GepSolution::convexity_violation)
      .def_readonly("convexity_note", &GepSolution::convexity_note);

  m.def("build_gep_game", &build_gep_game, py::arg("scenario"), py::arg("formulation"));
  m.def("solve_gep_price_taking", &solve_gep_price_taking, py::arg("scenario"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def("solve_gep_anticipative", &solve_gep_anticipative, py::arg("scenario"),
        py::arg("config") = SolverConfig{}, py::arg("tol") = Tolerances{});
  m.def(
      "gep_prices",
      [](const GepScenario& s, const Vec& joint_x) { return gep_prices(s, joint_x); },
      py::arg("scenario"), py::arg("joint_x"));
  m.def("reserve_price", &reserve_price, py::arg("scenario"), py::arg("total_reserve"));
  m.def(
      "split_company_decision",
      [](const Vec& block, int horizon) { return split_company_decision(block, horizon); },
      py::arg("block"), py::arg("horizon"));
  m.def("flatten_company_decision", &flatten_company_decision, py::arg("decision"));
  m.def("flatten_gep_prices", &flatten_gep_prices, py::arg("prices"));
  m.def(
      "split_gep_prices",
      [](const Vec& p, int horizon) { return split_gep_prices(p, horizon); }, py::arg("p"),
      py::arg("horizon"));

  py::class_<InputDocument>(m, "InputDocument")
      .def_readonly("game", &InputDocument::game)
      .def_readonly("scenario", &InputDocument::scenario)
      .def_readonly("candidate", &InputDocument::candidate)
      .def("is_scenario", &InputDocument::is_scenario);

  m.def("parse_document", &parse_document, py::arg("text"), py::arg("origin") = "input");
  m.def("load_document", &load_document, py::arg("path"));
  m.def("parse_scenario", &parse_scenario, py::arg("text"), py::arg("origin") = "scenario");
  m.def("load_scenario", &load_scenario, py::arg("path"));
  m.def("serialize_scenario", &serialize_scenario, py::arg("scenario"));
  m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));
  m.def("certificate_record", &certificate_record, py::arg("certificate"));
  m.def("solve_record", &solve_record, py::arg("result"));
  m.def("potential_record", &potential_record, py::arg("report"), py::arg("scope"));

  py::class_<ExampleEntry>(m, "ExampleEntry")
      .def_readonly("name", &ExampleEntry::name)
      .def_readonly("summary", &ExampleEntry::summary)
      .def_readonly("oracle", &ExampleEntry::oracle)
      .def_readonly("expected", &ExampleEntry::expected)
      .def_readonly("text", &ExampleEntry::text)
      .def_readonly("scenario", &ExampleEntry::scenario);

  m.def("example_catalog", &example_catalog);
  m.def("render_example_catalog", &render_example_catalog);
  m.def("load_input", &load_input, py::arg("input"));

  py::class_<RunSpec>(m, "RunSpec")
      .def(py::init<>())
      .def_readwrite("input", &RunSpec::input)
      .def_readwrite("formulation", &RunSpec::formulation)
      .def_readwrite("mode", &RunSpec::mode)
      .def_readwrite("config", &RunSpec::config)
      .def_readwrite("tol", &RunSpec::tol)
      .def_readwrite("format", &RunSpec::format)
      .def_readwrite("output_path", &RunSpec::output_path);

  py::class_<RunOutcome>(m, "RunOutcome")
      .def_readonly("exit_code", &RunOutcome::exit_code)
      .def_readonly("records", &RunOutcome::records)
      .def_readonly("table", &RunOutcome::table)
      .def_readonly("error", &RunOutcome::error);

  m.def("run", &run, py::arg("spec"));
}
