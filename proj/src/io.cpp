#include "pricegame/io.hpp"

#include <array>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <utility>

#include "json.hpp"

namespace pricegame {
namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// checked access with path-to-field diagnostics

std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string elem_path(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ParseError(path + ": " + what);
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

const json& need(const json& obj, const char* key, const std::string& path) {
  const json* j = find(obj, key);
  if (!j) fail(join_path(path, key), "missing required field");
  return *j;
}

void need_object(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed) {
      if (it.key() == k) {
        known = true;
        break;
      }
    }
    if (!known) fail(join_path(path, it.key()), "unknown field");
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

const json& as_array(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

Vec number_vec(const json& j, const std::string& path) {
  as_array(j, path);
  Vec v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_number(j[i], elem_path(path, i)));
  return v;
}

std::vector<int> integer_vec(const json& j, const std::string& path) {
  as_array(j, path);
  std::vector<int> v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(as_integer(j[i], elem_path(path, i)));
  return v;
}

Expr as_expr(const json& j, const std::string& path) {
  if (j.is_number()) return Expr::constant(j.get<double>());
  if (!j.is_string()) fail(path, "expected an expression string or a number");
  try {
    return Expr::parse(j.get<std::string>());
  } catch (const ParseError& e) {
    fail(path, e.what());
  }
}

// ---------------------------------------------------------------------------
// variable slots: names exposed to expressions and where each value lives

enum class SlotSrc : std::uint8_t { Decision, Price };

struct SlotRef {
  SlotSrc src;
  std::size_t index;
};

struct SlotEnv {
  std::vector<std::string> names;
  std::vector<SlotRef> refs;

  void add(std::string name, SlotSrc src, std::size_t index) {
    names.push_back(std::move(name));
    refs.push_back({src, index});
  }
};

// x1.. / xi_k over the concatenated blocks; one-dim blocks answer to both
SlotEnv decision_env(const std::vector<std::size_t>& dims) {
  SlotEnv env;
  std::size_t off = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::string base = "x" + std::to_string(i + 1);
    if (dims[i] == 1) env.add(base, SlotSrc::Decision, off);
    for (std::size_t k = 0; k < dims[i]; ++k)
      env.add(base + "_" + std::to_string(k + 1), SlotSrc::Decision, off + k);
    off += dims[i];
  }
  return env;
}

void add_price_slots(SlotEnv& env, int price_dim) {
  if (price_dim == 1) env.add("p", SlotSrc::Price, 0);
  for (int k = 0; k < price_dim; ++k)
    env.add("p" + std::to_string(k + 1), SlotSrc::Price, static_cast<std::size_t>(k));
}

// own / own_k over one block, for own-action shared terms
SlotEnv own_block_env(std::size_t block_dim, int price_dim) {
  SlotEnv env;
  if (block_dim == 1) env.add("own", SlotSrc::Decision, 0);
  for (std::size_t k = 0; k < block_dim; ++k)
    env.add("own_" + std::to_string(k + 1), SlotSrc::Decision, k);
  add_price_slots(env, price_dim);
  return env;
}

/// An expression bound to a slot environment; evaluation gathers the slot
/// values from a decision span and a price span.
struct CompiledExpr {
  Expr::Bound bound;
  std::vector<SlotRef> refs;

  double operator()(std::span<const double> decision, std::span<const double> price) const {
    std::array<double, 64> small;
    std::vector<double> big;
    double* slots = small.data();
    if (refs.size() > small.size()) {
      big.resize(refs.size());
      slots = big.data();
    }
    for (std::size_t i = 0; i < refs.size(); ++i)
      slots[i] = refs[i].src == SlotSrc::Price ? price[refs[i].index] : decision[refs[i].index];
    return bound.eval(std::span<const double>(slots, refs.size()));
  }

  double at(std::span<const double> decision) const { return (*this)(decision, {}); }
};

CompiledExpr compile(const Expr& e, const SlotEnv& env, const std::string& path) {
  try {
    return CompiledExpr{e.bind(env.names), env.refs};
  } catch (const UsageError& u) {
    fail(path, u.what());
  }
}

bool own_only_vars(const std::vector<std::string>& vars, std::size_t player_1based,
                   std::size_t dim) {
  const std::string base = "x" + std::to_string(player_1based);
  const std::string pre = base + "_";
  for (const auto& v : vars) {
    if (dim == 1 && v == base) continue;
    if (v.size() > pre.size() && v.compare(0, pre.size(), pre) == 0) continue;
    return false;
  }
  return true;
}

bool uses_own_slots(const std::vector<std::string>& vars) {
  for (const auto& v : vars)
    if (v == "own" || v.compare(0, 4, "own_") == 0) return true;
  return false;
}

// ---------------------------------------------------------------------------
// game documents

ActionBox parse_action_box(const json& j, const std::string& path) {
  need_object(j, path);
  reject_unknown_keys(j, {"lower", "upper", "grid_points"}, path);
  ActionBox box;
  box.lower = number_vec(need(j, "lower", path), join_path(path, "lower"));
  box.upper = number_vec(need(j, "upper", path), join_path(path, "upper"));
  box.grid_points = integer_vec(need(j, "grid_points", path), join_path(path, "grid_points"));
  if (box.lower.empty()) fail(join_path(path, "lower"), "expected at least one coordinate");
  if (box.upper.size() != box.lower.size() || box.grid_points.size() != box.lower.size())
    fail(path, "lower, upper and grid_points must have the same length");
  return box;
}

GameInstance parse_game_json(const json& doc) {
  reject_unknown_keys(
      doc, {"name", "formulation", "price_dimension", "players", "shared_term", "price",
            "candidate"},
      "");
  GameInstance game;
  if (const json* n = find(doc, "name")) game.name = as_string(*n, "name");
  const std::string formulation = as_string(need(doc, "formulation", ""), "formulation");
  try {
    game.formulation = formulation_from_string(formulation);
  } catch (const UsageError& u) {
    fail("formulation", u.what());
  }
  game.price_dimension = as_integer(need(doc, "price_dimension", ""), "price_dimension");
  if (game.price_dimension < 1) fail("price_dimension", "must be a positive integer");

  const json& players = as_array(need(doc, "players", ""), "players");
  std::vector<Expr> own_exprs;
  std::vector<std::size_t> dims;
  for (std::size_t i = 0; i < players.size(); ++i) {
    const std::string path = elem_path("players", i);
    need_object(players[i], path);
    reject_unknown_keys(players[i], {"action", "own_term"}, path);
    PlayerSpec pl;
    pl.id = static_cast<int>(i + 1);
    pl.action = parse_action_box(need(players[i], "action", path), join_path(path, "action"));
    own_exprs.push_back(as_expr(need(players[i], "own_term", path), join_path(path, "own_term")));
    dims.push_back(pl.action.dims());
    game.players.push_back(std::move(pl));
  }

  SlotEnv x_env = decision_env(dims);
  SlotEnv xp_env = x_env;
  add_price_slots(xp_env, game.price_dimension);

  for (std::size_t i = 0; i < game.players.size(); ++i) {
    const std::string path = join_path(elem_path("players", i), "own_term");
    CompiledExpr ce = compile(own_exprs[i], x_env, path);
    game.players[i].own_term = [ce](std::span<const double> x) { return ce.at(x); };
    game.players[i].own_term_depends_only_on_self =
        own_only_vars(own_exprs[i].variables(), i + 1, dims[i]);
  }

  Expr shared_expr = as_expr(need(doc, "shared_term", ""), "shared_term");
  const auto shared_vars = shared_expr.variables();
  if (uses_own_slots(shared_vars)) {
    if (game.players.empty())
      fail("shared_term", "own-action form needs at least one player");
    for (std::size_t d : dims)
      if (d != dims[0])
        fail("shared_term", "own-action form needs every player block to share one dimension");
    CompiledExpr ce =
        compile(shared_expr, own_block_env(dims[0], game.price_dimension), "shared_term");
    game.shared.h = [ce](std::span<const double> p, std::span<const double> x_part) {
      return ce(x_part, p);
    };
    game.shared.depends_only_on_own_action = true;
  } else {
    CompiledExpr ce = compile(shared_expr, xp_env, "shared_term");
    game.shared.h = [ce](std::span<const double> p, std::span<const double> x_part) {
      return ce(x_part, p);
    };
    game.shared.depends_only_on_own_action = false;
  }

  const json& price = need(doc, "price", "");
  need_object(price, "price");
  reject_unknown_keys(price, {"objective", "closed_form", "box", "points"}, "price");
  bool region_depends = false;

  if (const json* obj = find(price, "objective")) {
    CompiledExpr ce = compile(as_expr(*obj, "price.objective"), xp_env, "price.objective");
    game.price.objective = [ce](std::span<const double> x, std::span<const double> p) {
      return ce(x, p);
    };
  }

  if (const json* cf = find(price, "closed_form")) {
    const std::string path = "price.closed_form";
    as_array(*cf, path);
    if (static_cast<int>(cf->size()) != game.price_dimension)
      fail(path, "expected one expression per price dimension");
    std::vector<CompiledExpr> rules;
    for (std::size_t k = 0; k < cf->size(); ++k) {
      Expr e = as_expr((*cf)[k], elem_path(path, k));
      if (!e.variables().empty()) region_depends = true;
      rules.push_back(compile(e, x_env, elem_path(path, k)));
    }
    game.price.closed_form = [rules](std::span<const double> x) {
      Vec p;
      p.reserve(rules.size());
      for (const auto& r : rules) p.push_back(r.at(x));
      return p;
    };
  }

  const json* box = find(price, "box");
  const json* points = find(price, "points");
  if (box && points) fail("price", "box and points are mutually exclusive");
  if (!box && !points && !game.price.closed_form)
    fail("price", "needs a closed form, a box or an explicit point set");

  if (box) {
    const std::string path = "price.box";
    need_object(*box, path);
    reject_unknown_keys(*box, {"lower", "upper", "grid_points"}, path);
    const json& lo = as_array(need(*box, "lower", path), join_path(path, "lower"));
    const json& hi = as_array(need(*box, "upper", path), join_path(path, "upper"));
    std::vector<int> grid =
        integer_vec(need(*box, "grid_points", path), join_path(path, "grid_points"));
    if (static_cast<int>(lo.size()) != game.price_dimension ||
        static_cast<int>(hi.size()) != game.price_dimension ||
        static_cast<int>(grid.size()) != game.price_dimension)
      fail(path, "lower, upper and grid_points must each have one entry per price dimension");
    std::vector<CompiledExpr> lo_rules, hi_rules;
    for (std::size_t k = 0; k < lo.size(); ++k) {
      Expr el = as_expr(lo[k], elem_path(join_path(path, "lower"), k));
      Expr eh = as_expr(hi[k], elem_path(join_path(path, "upper"), k));
      if (!el.variables().empty() || !eh.variables().empty()) region_depends = true;
      lo_rules.push_back(compile(el, x_env, elem_path(join_path(path, "lower"), k)));
      hi_rules.push_back(compile(eh, x_env, elem_path(join_path(path, "upper"), k)));
    }
    game.price.feasible_set = [lo_rules, hi_rules, grid](std::span<const double> x) {
      PriceBox b;
      b.grid_points = grid;
      for (const auto& r : lo_rules) b.lower.push_back(r.at(x));
      for (const auto& r : hi_rules) b.upper.push_back(r.at(x));
      return PriceRegion{std::move(b)};
    };
  } else if (points) {
    const std::string path = "price.points";
    as_array(*points, path);
    if (points->empty()) fail(path, "expected at least one price vector");
    std::vector<Vec> pts;
    for (std::size_t i = 0; i < points->size(); ++i) {
      Vec p = number_vec((*points)[i], elem_path(path, i));
      if (static_cast<int>(p.size()) != game.price_dimension)
        fail(elem_path(path, i), "expected one coordinate per price dimension");
      pts.push_back(std::move(p));
    }
    game.price.feasible_set = [pts](std::span<const double>) { return PriceRegion{pts}; };
  }

  game.price.depends_on_x = region_depends;
  return game;
}

// ---------------------------------------------------------------------------
// scenario documents

BoundsSpec parse_bounds(const json& j, const std::string& path) {
  need_object(j, path);
  reject_unknown_keys(j, {"lower", "upper", "grid_points"}, path);
  BoundsSpec b;
  b.lower = as_number(need(j, "lower", path), join_path(path, "lower"));
  b.upper = as_number(need(j, "upper", path), join_path(path, "upper"));
  b.grid_points = as_integer(need(j, "grid_points", path), join_path(path, "grid_points"));
  return b;
}

GepCompany parse_company(const json& j, const std::string& path) {
  need_object(j, path);
  reject_unknown_keys(j,
                      {"name", "capital_cost", "fuel_cost", "forced_outage_rate", "ramp_up",
                       "ramp_down", "capacity_bounds", "reserve_bounds", "energy_bounds",
                       "rt_bounds"},
                      path);
  GepCompany c;
  if (const json* n = find(j, "name")) c.name = as_string(*n, join_path(path, "name"));
  c.capital_cost = as_expr(need(j, "capital_cost", path), join_path(path, "capital_cost"));
  c.fuel_cost = as_expr(need(j, "fuel_cost", path), join_path(path, "fuel_cost"));
  c.forced_outage_rate =
      as_number(need(j, "forced_outage_rate", path), join_path(path, "forced_outage_rate"));
  if (const json* r = find(j, "ramp_up"))
    if (!r->is_null()) c.ramp_up = as_number(*r, join_path(path, "ramp_up"));
  if (const json* r = find(j, "ramp_down"))
    if (!r->is_null()) c.ramp_down = as_number(*r, join_path(path, "ramp_down"));
  c.capacity_bounds =
      parse_bounds(need(j, "capacity_bounds", path), join_path(path, "capacity_bounds"));
  c.reserve_bounds =
      parse_bounds(need(j, "reserve_bounds", path), join_path(path, "reserve_bounds"));
  c.energy_bounds = parse_bounds(need(j, "energy_bounds", path), join_path(path, "energy_bounds"));
  c.rt_bounds = parse_bounds(need(j, "rt_bounds", path), join_path(path, "rt_bounds"));
  return c;
}

GepScenario parse_scenario_json(const json& doc) {
  reject_unknown_keys(doc,
                      {"horizon", "companies", "loads", "eldc_breakpoints", "rho_avg",
                       "outage_cost", "existing_capacity", "scarcity_adder", "name", "candidate"},
                      "");
  GepScenario s;
  s.horizon = as_integer(need(doc, "horizon", ""), "horizon");
  const json& comps = as_array(need(doc, "companies", ""), "companies");
  for (std::size_t i = 0; i < comps.size(); ++i)
    s.companies.push_back(parse_company(comps[i], elem_path("companies", i)));
  s.loads = number_vec(need(doc, "loads", ""), "loads");
  const json& bps = as_array(need(doc, "eldc_breakpoints", ""), "eldc_breakpoints");
  for (std::size_t i = 0; i < bps.size(); ++i) {
    const std::string path = elem_path("eldc_breakpoints", i);
    as_array(bps[i], path);
    if (bps[i].size() != 2) fail(path, "expected a [load, value] pair");
    s.eldc.breakpoints.emplace_back(as_number(bps[i][0], elem_path(path, 0)),
                                    as_number(bps[i][1], elem_path(path, 1)));
  }
  s.rho_avg = as_number(need(doc, "rho_avg", ""), "rho_avg");
  s.outage_cost = as_number(need(doc, "outage_cost", ""), "outage_cost");
  s.existing_capacity = as_number(need(doc, "existing_capacity", ""), "existing_capacity");
  if (const json* a = find(doc, "scarcity_adder"))
    if (!a->is_null()) s.scarcity_adder = as_number(*a, "scarcity_adder");
  if (const json* n = find(doc, "name")) s.name = as_string(*n, "name");
  return s;
}

// ---------------------------------------------------------------------------

std::optional<FeasiblePoint> parse_candidate(const json& doc, std::size_t joint_dims,
                                             int price_dim) {
  const json* c = find(doc, "candidate");
  if (!c) return std::nullopt;
  need_object(*c, "candidate");
  reject_unknown_keys(*c, {"x", "price", "prices"}, "candidate");
  FeasiblePoint pt;
  pt.x = number_vec(need(*c, "x", "candidate"), "candidate.x");
  if (pt.x.size() != joint_dims)
    fail("candidate.x", "expected " + std::to_string(joint_dims) + " coordinates, got " +
                            std::to_string(pt.x.size()));
  const json* single = find(*c, "price");
  const json* multi = find(*c, "prices");
  if (!!single == !!multi) fail("candidate", "needs exactly one of 'price' and 'prices'");
  if (single) {
    pt.prices.push_back(number_vec(*single, "candidate.price"));
  } else {
    as_array(*multi, "candidate.prices");
    if (multi->empty()) fail("candidate.prices", "expected at least one price vector");
    for (std::size_t i = 0; i < multi->size(); ++i)
      pt.prices.push_back(number_vec((*multi)[i], elem_path("candidate.prices", i)));
  }
  for (std::size_t i = 0; i < pt.prices.size(); ++i)
    if (static_cast<int>(pt.prices[i].size()) != price_dim)
      fail(single ? "candidate.price" : elem_path("candidate.prices", i),
           "expected " + std::to_string(price_dim) + " coordinates, got " +
               std::to_string(pt.prices[i].size()));
  return pt;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path + "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

json bounds_json(const BoundsSpec& b) {
  json j;
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  j["grid_points"] = b.grid_points;
  return j;
}

json point_json(const FeasiblePoint& pt) {
  json prices = json::array();
  for (const auto& p : pt.prices) prices.push_back(p);
  json j;
  j["x"] = pt.x;
  j["prices"] = std::move(prices);
  j["tag"] = to_string(pt.tag);
  return j;
}

json witness_json(const DeviationWitness& w) {
  json j;
  j["player"] = w.player;
  j["from"] = w.from;
  j["to"] = w.to;
  j["price"] = w.price;
  j["improvement"] = w.improvement;
  return j;
}

}  // namespace

InputDocument parse_document(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(origin + ": " + e.what());
  }
  try {
    if (!doc.is_object()) throw ParseError("top level: expected an object");
    InputDocument out;
    if (doc.contains("horizon")) {
      GepScenario scen = parse_scenario_json(doc);
      scen.validate();
      const std::size_t joint =
          scen.companies.size() * static_cast<std::size_t>(1 + 3 * scen.horizon);
      out.candidate = parse_candidate(doc, joint, 3 * scen.horizon);
      out.scenario = std::move(scen);
    } else {
      GameInstance game = parse_game_json(doc);
      game.validate_structure();
      validate_instance(game);
      out.candidate = parse_candidate(doc, game.joint_dims(), game.price_dimension);
      out.game = std::move(game);
    }
    return out;
  } catch (const ParseError& e) {
    throw ParseError(origin + ": " + e.what());
  } catch (const UsageError& e) {
    throw UsageError(origin + ": " + e.what());
  } catch (const InfeasibleError& e) {
    throw InfeasibleError(origin + ": " + e.what());
  } catch (const EvalError& e) {
    throw EvalError(origin + ": " + e.what());
  }
}

InputDocument load_document(const std::string& path) {
  return parse_document(read_file(path), path);
}

GepScenario parse_scenario(const std::string& text, const std::string& origin) {
  InputDocument doc = parse_document(text, origin);
  if (!doc.scenario)
    throw ParseError(origin + ": expected a scenario document (no 'horizon' field)");
  return std::move(*doc.scenario);
}

GepScenario load_scenario(const std::string& path) {
  return parse_scenario(read_file(path), path);
}

std::string serialize_scenario(const GepScenario& s) {
  json doc;
  doc["horizon"] = s.horizon;
  json comps = json::array();
  for (const auto& c : s.companies) {
    json jc;
    if (!c.name.empty()) jc["name"] = c.name;
    jc["capital_cost"] = c.capital_cost.source();
    jc["fuel_cost"] = c.fuel_cost.source();
    jc["forced_outage_rate"] = c.forced_outage_rate;
    if (c.ramp_up) jc["ramp_up"] = *c.ramp_up;
    if (c.ramp_down) jc["ramp_down"] = *c.ramp_down;
    jc["capacity_bounds"] = bounds_json(c.capacity_bounds);
    jc["reserve_bounds"] = bounds_json(c.reserve_bounds);
    jc["energy_bounds"] = bounds_json(c.energy_bounds);
    jc["rt_bounds"] = bounds_json(c.rt_bounds);
    comps.push_back(std::move(jc));
  }
  doc["companies"] = std::move(comps);
  doc["loads"] = s.loads;
  json bps = json::array();
  for (const auto& [x, y] : s.eldc.breakpoints) bps.push_back(json::array({x, y}));
  doc["eldc_breakpoints"] = std::move(bps);
  doc["rho_avg"] = s.rho_avg;
  doc["outage_cost"] = s.outage_cost;
  doc["existing_capacity"] = s.existing_capacity;
  if (s.scarcity_adder) doc["scarcity_adder"] = *s.scarcity_adder;
  if (!s.name.empty()) doc["name"] = s.name;
  return doc.dump(2) + "\n";
}

void save_scenario(const GepScenario& scenario, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write file '" + path + "'");
  out << serialize_scenario(scenario);
}

std::string certificate_record(const EquilibriumCertificate& cert) {
  json rec;
  rec["point"] = point_json(cert.point);
  json gaps;
  gaps["players"] = cert.per_player_gap;
  gaps["price"] = cert.price_player_gap;
  rec["gaps"] = std::move(gaps);
  rec["verdict"] = to_string(cert.verdict);
  rec["witness"] = cert.worst ? witness_json(*cert.worst) : json(nullptr);
  json tol;
  tol["eps_sol"] = cert.tol.eps_sol;
  tol["eps_eq"] = cert.tol.eps_eq;
  tol["eps_dev"] = cert.tol.eps_dev;
  tol["eps_pot"] = cert.tol.eps_pot;
  rec["tolerances"] = std::move(tol);
  rec["kind"] = to_string(cert.kind);
  rec["gamma_full"] = cert.gamma_full;
  json gf = json::array();
  for (char c : cert.gamma_full_by_player) gf.push_back(static_cast<bool>(c));
  rec["gamma_full_by_player"] = std::move(gf);
  rec["evaluations"] = cert.evaluations;
  rec["note"] = cert.note;
  return rec.dump() + "\n";
}

std::string solve_record(const SolveResult& result) {
  json rec;
  rec["point"] = point_json(result.point);
  rec["surrogate_value"] = result.surrogate_value;
  rec["method"] = to_string(result.method);
  rec["iterations"] = result.iterations;
  rec["evaluations"] = result.evaluations;
  rec["converged"] = result.converged;
  rec["gamma_full"] = result.gamma_full;
  json gf = json::array();
  for (char c : result.gamma_full_by_player) gf.push_back(static_cast<bool>(c));
  rec["gamma_full_by_player"] = std::move(gf);
  return rec.dump() + "\n";
}

std::string potential_record(const PotentialReport& report, PotentialScope scope) {
  json rec;
  rec["holds"] = report.holds;
  rec["max_violation"] = report.max_violation;
  rec["samples"] = report.samples;
  rec["scope"] = scope == PotentialScope::PlayersOnly ? "players_only" : "full_game";
  if (report.witness) {
    json w;
    w["player"] = report.witness->player;
    w["x_before"] = report.witness->x_before;
    w["x_after"] = report.witness->x_after;
    w["p_before"] = report.witness->p_before;
    w["p_after"] = report.witness->p_after;
    w["potential_delta"] = report.witness->potential_delta;
    w["payoff_delta"] = report.witness->payoff_delta;
    rec["witness"] = std::move(w);
  } else {
    rec["witness"] = json(nullptr);
  }
  return rec.dump() + "\n";
}

}  // namespace pricegame
