#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pricegame/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"price-coupling equilibrium runner"};
  app.require_subcommand(0, 1);

  std::string input;
  std::string formulation;
  std::string mode = "solve";
  std::string format = "table";
  std::string output;
  int grid = 0;
  int multistarts = 1;
  double tol_dev = -1.0;
  double tol_sol = -1.0;
  std::uint64_t seed = 0;

  app.add_option("--input", input, "input document (file path or builtin:<name>)");
  app.add_option("--formulation", formulation,
                 "override the document's formulation "
                 "(anticipative_e1, anticipative_e2, taking_t1, taking_tm)");
  app.add_option("--mode", mode, "solve, verify, enumerate or potential-check")
      ->capture_default_str();
  app.add_option("--grid", grid, "rounds of grid refinement around the incumbent argmax")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tol-dev", tol_dev, "deviation-gap tolerance for certification")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol-sol", tol_sol, "price-optimality tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "seed for multistarts and sampling");
  app.add_option("--multistarts", multistarts, "independent solver starts")
      ->check(CLI::PositiveNumber);
  app.add_option("--output", output, "write the structured records to this file");
  app.add_option("--format", format, "stdout format: table or records")->capture_default_str();

  auto* list = app.add_subcommand("list-examples", "print the bundled instance catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*list) {
    std::cout << pricegame::render_example_catalog();
    return 0;
  }
  if (input.empty()) {
    std::cerr << "error: --input is required (or use the list-examples subcommand)\n";
    return 1;
  }

  pricegame::RunSpec spec;
  spec.input = input;
  try {
    if (!formulation.empty())
      spec.formulation = pricegame::formulation_from_string(formulation);
    spec.mode = pricegame::run_mode_from_string(mode);
    spec.format = pricegame::report_format_from_string(format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  spec.config.grid_refinements = grid;
  spec.config.multistarts = multistarts;
  spec.config.seed = seed;
  if (tol_dev > 0) spec.tol.eps_dev = tol_dev;
  if (tol_sol > 0) spec.tol.eps_sol = tol_sol;
  spec.output_path = output;

  pricegame::RunOutcome out = pricegame::run(spec);
  if (out.exit_code == 1) {
    std::cerr << "error: " << out.error << "\n";
    return 1;
  }
  std::cout << (spec.format == pricegame::ReportFormat::Records ? out.records : out.table);
  return out.exit_code;
}
