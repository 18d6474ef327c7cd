#include "pricegame/runner.hpp"

#include <fstream>
#include <utility>

#include <json.hpp>

#include "pricegame/gep.hpp"
#include "pricegame/potential.hpp"
#include "pricegame/util.hpp"
#include "pricegame/verifier.hpp"

namespace pricegame {

namespace {

using nlohmann::json;

int verdict_exit(Verdict v) { return v == Verdict::Certified ? 0 : 2; }

std::string yes_no(bool b) { return b ? "yes" : "no"; }

void append_point_lines(std::string& t, const FeasiblePoint& pt) {
  t += "decision: " + format_vec(pt.x) + "\n";
  if (pt.prices.size() == 1) {
    t += "price: " + format_vec(pt.prices[0]) + "\n";
  } else {
    for (std::size_t i = 0; i < pt.prices.size(); ++i)
      t += "conjecture " + std::to_string(i + 1) + ": " + format_vec(pt.prices[i]) + "\n";
  }
}

void append_certificate_lines(std::string& t, const EquilibriumCertificate& cert) {
  t += "verdict: " + to_string(cert.verdict) + "\n";
  t += "player gaps: " + format_vec(cert.per_player_gap) + "\n";
  if (cert.kind == CheckKind::T || cert.kind == CheckKind::Tm) {
    t += "price gap: " + format_double(cert.price_player_gap) + "\n";
    t += "deviation sets cover the full grids: " + yes_no(cert.gamma_full) + "\n";
  }
  if (cert.worst) {
    const DeviationWitness& w = *cert.worst;
    std::string who =
        w.player < 0 ? std::string("price player") : "player " + std::to_string(w.player + 1);
    t += "worst deviation: " + who + " " + format_vec(w.from) + " -> " + format_vec(w.to) +
         " improves by " + format_double(w.improvement) + "\n";
  }
  t += "evaluations: " + std::to_string(cert.evaluations) + "\n";
  if (!cert.note.empty()) t += "note: " + cert.note + "\n";
}

std::string run_header(const RunSpec& spec, Formulation f, const std::string& name) {
  std::string t = "input: " + spec.input + "\n";
  if (!name.empty()) t += "instance: " + name + "\n";
  t += "formulation: " + to_string(f) + "\n";
  t += "mode: " + to_string(spec.mode) + "\n";
  return t;
}

void append_solve_lines(std::string& t, const SolveResult& res) {
  t += "method: " + to_string(res.method) + "\n";
  t += "iterations: " + std::to_string(res.iterations) +
       "  evaluations: " + std::to_string(res.evaluations) +
       "  converged: " + yes_no(res.converged) + "\n";
  append_point_lines(t, res.point);
  t += "surrogate value: " + format_double(res.surrogate_value) + "\n";
}

/// Scenario-level view of a solved expansion run: per-company decision
/// blocks, the three price series and the convexity probe.
std::string expansion_record(const GepScenario& scen, const GepSolution& sol) {
  json rec;
  if (!scen.name.empty()) rec["scenario"] = scen.name;
  json companies = json::array();
  for (std::size_t i = 0; i < scen.companies.size(); ++i) {
    const CompanyDecision& d = sol.decisions[i];
    json c;
    if (!scen.companies[i].name.empty()) c["name"] = scen.companies[i].name;
    c["capacity"] = d.capacity;
    c["reserve"] = d.reserve;
    c["energy"] = d.energy;
    c["realtime"] = d.realtime;
    companies.push_back(std::move(c));
  }
  rec["companies"] = std::move(companies);
  rec["prices"] = {{"reserve", sol.prices.reserve},
                   {"energy", sol.prices.energy},
                   {"realtime", sol.prices.realtime}};
  rec["costs_convex"] = sol.costs_convex;
  if (!sol.convexity_note.empty()) rec["convexity_note"] = sol.convexity_note;
  return rec.dump() + "\n";
}

void append_expansion_lines(std::string& t, const GepScenario& scen, const GepSolution& sol) {
  for (std::size_t i = 0; i < scen.companies.size(); ++i) {
    const CompanyDecision& d = sol.decisions[i];
    std::string label = scen.companies[i].name.empty() ? "company " + std::to_string(i + 1)
                                                       : "company " + scen.companies[i].name;
    t += label + ": capacity " + format_double(d.capacity) + "  reserve " +
         format_vec(d.reserve) + "  energy " + format_vec(d.energy) + "  real-time " +
         format_vec(d.realtime) + "\n";
  }
  for (int tp = 0; tp < scen.horizon; ++tp) {
    t += "period " + std::to_string(tp + 1) + ": reserve " +
         format_double(sol.prices.reserve[static_cast<std::size_t>(tp)]) + "  energy " +
         format_double(sol.prices.energy[static_cast<std::size_t>(tp)]) + "  real-time " +
         format_double(sol.prices.realtime[static_cast<std::size_t>(tp)]) + "\n";
  }
  t += "costs convex: " + yes_no(sol.costs_convex);
  if (!sol.convexity_note.empty()) t += " (" + sol.convexity_note + ")";
  t += "\n";
}

FeasiblePoint required_candidate(const InputDocument& doc, Formulation f) {
  if (!doc.candidate)
    throw UsageError("verify mode needs a 'candidate' object in the input document");
  FeasiblePoint pt = *doc.candidate;
  pt.tag = point_tag_for(f);
  return pt;
}

RunOutcome run_game(const RunSpec& spec, InputDocument& doc) {
  RunOutcome out;
  GameInstance game = std::move(*doc.game);
  if (spec.formulation && *spec.formulation != game.formulation) {
    game.formulation = *spec.formulation;
    game.validate_structure();
  }
  out.table = run_header(spec, game.formulation, game.name);

  switch (spec.mode) {
    case RunMode::Solve: {
      SolveResult res = solve_formulation(game, spec.config, spec.tol);
      EquilibriumCertificate cert = check_formulation(game, res.point, spec.config, spec.tol);
      out.records = solve_record(res) + certificate_record(cert);
      append_solve_lines(out.table, res);
      append_certificate_lines(out.table, cert);
      out.exit_code = verdict_exit(cert.verdict);
      break;
    }
    case RunMode::Verify: {
      FeasiblePoint pt = required_candidate(doc, game.formulation);
      EquilibriumCertificate cert = check_formulation(game, pt, spec.config, spec.tol);
      out.records = certificate_record(cert);
      append_point_lines(out.table, pt);
      append_certificate_lines(out.table, cert);
      out.exit_code = verdict_exit(cert.verdict);
      break;
    }
    case RunMode::Enumerate: {
      std::vector<EquilibriumCertificate> found =
          enumerate_equilibria(game, check_kind_for(game.formulation), spec.config, spec.tol);
      out.table += "equilibria found: " + std::to_string(found.size()) + "\n";
      for (const EquilibriumCertificate& cert : found) {
        out.records += certificate_record(cert);
        std::string line = "  decision " + format_vec(cert.point.x);
        if (cert.point.prices.size() == 1)
          line += "  price " + format_vec(cert.point.prices[0]);
        out.table += line + "\n";
      }
      out.exit_code = 0;
      break;
    }
    case RunMode::PotentialCheck: {
      PotentialFunction pi = construct_sum_potential(game);
      PotentialReport players = verify_potential(game, pi, spec.config.potential_samples,
                                                 spec.config.seed, spec.tol);
      out.records = potential_record(players, PotentialScope::PlayersOnly);
      out.table += "players-only potential (sum of own terms): holds " + yes_no(players.holds) +
                   ", max violation " + format_double(players.max_violation) + " over " +
                   std::to_string(players.samples) + " samples\n";
      bool ok = players.holds;
      if (game.formulation == Formulation::TakingTm) {
        try {
          PotentialFunction full = construct_tm_potential(
              game, spec.config.potential_samples, spec.config.seed, spec.tol);
          PotentialReport rep = verify_potential(game, full, spec.config.potential_samples,
                                                 spec.config.seed, spec.tol);
          out.records += potential_record(rep, PotentialScope::FullGame);
          out.table += "full-game potential: holds " + yes_no(rep.holds) + ", max violation " +
                       format_double(rep.max_violation) + " over " +
                       std::to_string(rep.samples) + " samples\n";
          ok = ok && rep.holds;
        } catch (const UsageError& e) {
          PotentialReport refused;
          refused.holds = false;
          refused.samples = 0;
          out.records += potential_record(refused, PotentialScope::FullGame);
          out.table += std::string("full-game potential: construction refused (") + e.what() +
                       ")\n";
          ok = false;
        }
      }
      out.exit_code = ok ? 0 : 2;
      break;
    }
  }
  return out;
}

RunOutcome run_scenario(const RunSpec& spec, InputDocument& doc) {
  RunOutcome out;
  const GepScenario& scen = *doc.scenario;
  Formulation f = spec.formulation.value_or(Formulation::TakingT1);
  out.table = run_header(spec, f, scen.name);

  if (spec.mode == RunMode::Solve) {
    GepSolution sol;
    if (f == Formulation::TakingT1) {
      sol = solve_gep_price_taking(scen, spec.config, spec.tol);
    } else if (f == Formulation::AnticipativeE2Consistent) {
      sol = solve_gep_anticipative(scen, spec.config, spec.tol);
    } else {
      throw UsageError("the expansion game solves as taking_t1 or anticipative_e2 (got " +
                       to_string(f) + ")");
    }
    out.records =
        solve_record(sol.result) + expansion_record(scen, sol) + certificate_record(sol.certificate);
    append_solve_lines(out.table, sol.result);
    append_expansion_lines(out.table, scen, sol);
    append_certificate_lines(out.table, sol.certificate);
    out.exit_code = verdict_exit(sol.certificate.verdict);
    return out;
  }

  GameInstance game = build_gep_game(scen, f);
  switch (spec.mode) {
    case RunMode::Verify: {
      FeasiblePoint pt = required_candidate(doc, f);
      EquilibriumCertificate cert = check_formulation(game, pt, spec.config, spec.tol);
      out.records = certificate_record(cert);
      append_point_lines(out.table, pt);
      append_certificate_lines(out.table, cert);
      out.exit_code = verdict_exit(cert.verdict);
      break;
    }
    case RunMode::Enumerate: {
      std::vector<EquilibriumCertificate> found =
          enumerate_equilibria(game, check_kind_for(f), spec.config, spec.tol);
      out.table += "equilibria found: " + std::to_string(found.size()) + "\n";
      for (const EquilibriumCertificate& cert : found) {
        out.records += certificate_record(cert);
        out.table += "  decision " + format_vec(cert.point.x) + "\n";
      }
      out.exit_code = 0;
      break;
    }
    case RunMode::PotentialCheck: {
      PotentialFunction pi = construct_sum_potential(game);
      PotentialReport rep = verify_potential(game, pi, spec.config.potential_samples,
                                             spec.config.seed, spec.tol);
      out.records = potential_record(rep, PotentialScope::PlayersOnly);
      out.table += "players-only potential (sum of own terms): holds " + yes_no(rep.holds) +
                   ", max violation " + format_double(rep.max_violation) + " over " +
                   std::to_string(rep.samples) + " samples\n";
      out.exit_code = rep.holds ? 0 : 2;
      break;
    }
    case RunMode::Solve:
      break;  // handled above
  }
  return out;
}

}  // namespace

SetTag point_tag_for(Formulation f) {
  switch (f) {
    case Formulation::AnticipativeE1:
      return SetTag::F1;
    case Formulation::AnticipativeE2Consistent:
      return SetTag::F2;
    default:
      return SetTag::A;
  }
}

CheckKind check_kind_for(Formulation f) {
  switch (f) {
    case Formulation::AnticipativeE1:
      return CheckKind::E1;
    case Formulation::AnticipativeE2Consistent:
      return CheckKind::E2Consistent;
    case Formulation::TakingT1:
      return CheckKind::T;
    case Formulation::TakingTm:
      return CheckKind::Tm;
  }
  throw UsageError("unknown formulation");
}

SolveResult solve_formulation(const GameInstance& game, const SolverConfig& config,
                              const Tolerances& tol) {
  switch (game.formulation) {
    case Formulation::AnticipativeE1: {
      PotentialFunction pi = construct_sum_potential(game);
      return solve_e1(game, pi, config, tol);
    }
    case Formulation::AnticipativeE2Consistent: {
      PotentialFunction pi = construct_sum_potential(game);
      return solve_e2_consistent(game, pi, config, tol);
    }
    case Formulation::TakingT1:
      return solve_t1_best_response(game, config, tol);
    case Formulation::TakingTm: {
      PotentialFunction full =
          construct_tm_potential(game, config.potential_samples, config.seed, tol);
      return solve_tm(game, full, config, tol);
    }
  }
  throw UsageError("unknown formulation");
}

EquilibriumCertificate check_formulation(const GameInstance& game, const FeasiblePoint& point,
                                         const SolverConfig& config, const Tolerances& tol) {
  switch (game.formulation) {
    case Formulation::AnticipativeE1:
      return check_e1(game, point, config, tol);
    case Formulation::AnticipativeE2Consistent:
      return check_e2_consistent(game, point, config, tol);
    case Formulation::TakingT1:
      return check_t(game, point, config, tol);
    case Formulation::TakingTm:
      return check_tm(game, point, config, tol);
  }
  throw UsageError("unknown formulation");
}

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::Solve:
      return "solve";
    case RunMode::Verify:
      return "verify";
    case RunMode::Enumerate:
      return "enumerate";
    case RunMode::PotentialCheck:
      return "potential-check";
  }
  return "?";
}

RunMode run_mode_from_string(const std::string& s) {
  if (s == "solve") return RunMode::Solve;
  if (s == "verify") return RunMode::Verify;
  if (s == "enumerate") return RunMode::Enumerate;
  if (s == "potential-check") return RunMode::PotentialCheck;
  throw UsageError("unknown mode '" + s +
                   "' (expected solve, verify, enumerate or potential-check)");
}

std::string to_string(ReportFormat f) {
  return f == ReportFormat::Table ? "table" : "records";
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "table") return ReportFormat::Table;
  if (s == "records") return ReportFormat::Records;
  throw UsageError("unknown format '" + s + "' (expected table or records)");
}

RunOutcome run(const RunSpec& spec) {
  RunOutcome out;
  try {
    InputDocument doc = load_input(spec.input);
    out = doc.is_scenario() ? run_scenario(spec, doc) : run_game(spec, doc);
    if (!spec.output_path.empty()) {
      std::ofstream file(spec.output_path, std::ios::binary);
      file << out.records;
      if (!file) throw UsageError("cannot write output file: " + spec.output_path);
    }
  } catch (const std::exception& e) {
    out = RunOutcome{};
    out.exit_code = 1;
    out.error = e.what();
  }
  return out;
}

}  // namespace pricegame
