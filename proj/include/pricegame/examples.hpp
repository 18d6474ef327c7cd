#pragma once

#include <string>
#include <vector>

#include "pricegame/io.hpp"

namespace pricegame {

/// One bundled instance: a complete input document plus the outcome its
/// oracle pins down. `oracle` states how the expected outcome was fixed
/// (closed-form algebra or an exhaustive hand scan), `expected` what a run
/// should reproduce.
struct ExampleEntry {
  std::string name;  // addressed as builtin:<name>
  std::string summary;
  std::string oracle;
  std::string expected;
  std::string text;  // the document itself
  bool scenario = false;
};

const std::vector<ExampleEntry>& example_catalog();

/// Catalog entry by name; unknown names raise UsageError listing what is
/// available.
const ExampleEntry& find_example(const std::string& name);

/// True when the input names a bundled instance ("builtin:<name>").
bool is_builtin(const std::string& input);

/// Parse "builtin:<name>" from the catalog, anything else from disk.
InputDocument load_input(const std::string& path_or_builtin);

/// Human-readable catalog: name, summary, oracle and expected outcome per
/// bundled instance.
std::string render_example_catalog();

}  // namespace pricegame
