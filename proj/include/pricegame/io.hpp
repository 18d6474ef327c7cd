#pragma once

#include <optional>
#include <string>

#include "pricegame/game.hpp"
#include "pricegame/gep.hpp"
#include "pricegame/potential.hpp"
#include "pricegame/verifier.hpp"

namespace pricegame {

/// A parsed input document: exactly one of `game` / `scenario` is set.
/// Expansion scenarios are recognized by their top-level "horizon" key;
/// every other document is read as a compiled game instance.
///
/// Game documents carry their payoff terms, price rule and feasible region
/// as expression text over a fixed vocabulary:
///   x1..xN        player blocks (block k of a multi-dimensional player i
///                 is xi_k; a one-dimensional block answers to both xi and
///                 xi_1)
///   p, p1..pk     prices (bare p only when the price dimension is 1)
///   own, own_1..  the acting player's block inside a shared term, which
///                 switches the term to own-action form
/// own_term fields may reference any block; referencing only the owner's
/// block marks the term as own-action only, which the sum potential needs.
///
/// An optional "candidate" object ({"x": [...], "price": [...]} or
/// {"x": [...], "prices": [[...], ...]}) feeds the verify mode. Its tag is
/// left at F1; the caller retags it to match the formulation under check.
struct InputDocument {
  std::optional<GameInstance> game;
  std::optional<GepScenario> scenario;
  std::optional<FeasiblePoint> candidate;

  bool is_scenario() const { return scenario.has_value(); }
};

/// Parse a document from source text. `origin` names the source in
/// diagnostics. Structural problems raise ParseError with a path-to-field
/// message ("companies[1].fuel_cost: ..."); semantic problems surface as
/// the validators' own UsageError / InfeasibleError. Game documents are
/// sample-validated on load.
InputDocument parse_document(const std::string& text, const std::string& origin = "input");

/// Read and parse a document from disk.
InputDocument load_document(const std::string& path);

GepScenario parse_scenario(const std::string& text, const std::string& origin = "scenario");
GepScenario load_scenario(const std::string& path);

/// Canonical scenario text: keys sorted, two-space indent, cost curves kept
/// as their expression source, shortest round-trip numbers. serialize is a
/// right inverse of parse (parse(serialize(s)) reproduces s exactly), and
/// canonical text is a fixed point of parse-then-serialize.
std::string serialize_scenario(const GepScenario& scenario);
void save_scenario(const GepScenario& scenario, const std::string& path);

/// One-line structured records, newline terminated, keys sorted, stable
/// across reruns. The certificate record always carries the fields
///   point, gaps, verdict, witness, tolerances
/// plus kind, gamma flags, evaluations and the free-text note.
std::string certificate_record(const EquilibriumCertificate& cert);
std::string solve_record(const SolveResult& result);
std::string potential_record(const PotentialReport& report, PotentialScope scope);

}  // namespace pricegame
