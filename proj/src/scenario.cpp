#include "invplan/scenario.hpp"

#include "invplan/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace invplan {

using nlohmann::json;

NameTable Scenario::names() const {
  NameTable t;
  for (int r = 0; r < grid.restaurant_count(); ++r) t[grid.restaurants()[r].id] = {r};
  auto add = [&](const std::string& name, std::vector<int> members) {
    std::sort(members.begin(), members.end());
    auto [it, inserted] = t.emplace(name, members);
    if (!inserted && it->second != members) {
      throw ValidationError({"name '" + name + "' refers to different restaurant sets"});
    }
  };
  for (const auto& u : hypotheses.utilities) add(u.name, u.restaurants);
  for (const auto& [chain, ids] : chains) {
    std::vector<int> members;
    for (const auto& id : ids) {
      const int r = grid.find_restaurant(id);
      if (r < 0) throw ValidationError({"chain '" + chain + "' names unknown restaurant '" + id + "'"});
      members.push_back(r);
    }
    add(chain, members);
  }
  return t;
}

std::vector<std::string> validate(const Scenario& s) {
  std::vector<std::string> errors = validate(s.grid, s.config_space);
  if (!errors.empty()) return errors;

  const auto in_space = [&](const WorldConfig& c) {
    return std::find(s.config_space.begin(), s.config_space.end(), c) != s.config_space.end();
  };
  if (s.config_space.empty()) errors.push_back("configSpace is empty");
  if (!in_space(s.true_config)) errors.push_back("trueConfig is not in configSpace");
  for (const auto& e : s.hypotheses.validate(s.grid.restaurant_count())) errors.push_back(e);
  for (const Belief& b : s.hypotheses.prior_levels) {
    for (const auto& entry : b.entries()) {
      if (!in_space(entry.first)) {
        errors.push_back("agent prior puts mass on " + describe(entry.first, s.grid) + " outside configSpace");
      }
    }
  }
  try {
    s.names();
  } catch (const ValidationError& e) {
    for (const auto& p : e.problems()) errors.push_back(p);
  }
  for (std::size_t i = 0; i < s.episodes.size(); ++i) {
    const Episode& ep = s.episodes[i];
    const std::string where = "episode " + std::to_string(i) + ": ";
    const Cell c = ep.start.position;
    if (!s.grid.in_bounds(c) || s.grid.is_wall(c) || s.grid.restaurant_at(c) >= 0) {
      errors.push_back(where + "start must be a free cell inside the grid");
      continue;
    }
    if (ep.true_config != s.true_config) errors.push_back(where + "true configuration differs from trueConfig");
    try {
      for (const WorldConfig& config : s.config_space) reachable_states(s.grid, config, ep.start);
      replay(s.grid, ep);
    } catch (const ValidationError& e) {
      for (const auto& p : e.problems()) errors.push_back(where + p);
    } catch (const IllegalActionError& e) {
      errors.push_back(where + e.what());
    }
  }
  return errors;
}

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw ParseError(path + ": " + what); }

void check_keys(const json& j, const std::string& path, std::initializer_list<const char*> required,
                std::initializer_list<const char*> optional = {}) {
  if (!j.is_object()) bad(path, "expected an object");
  for (const char* k : required) {
    if (!j.contains(k)) bad(path, std::string("missing field '") + k + "'");
  }
  for (const auto& [key, value] : j.items()) {
    const auto match = [&](const char* k) { return key == k; };
    if (std::none_of(required.begin(), required.end(), match) && std::none_of(optional.begin(), optional.end(), match)) {
      bad(path, "unknown field '" + key + "'");
    }
  }
}

double get_real(const json& j, const std::string& path) {
  if (!j.is_number()) bad(path, "expected a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) bad(path, "expected an integer");
  return j.get<int>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) bad(path, "expected a string");
  return j.get<std::string>();
}

const json& get_array(const json& j, const std::string& path) {
  if (!j.is_array()) bad(path, "expected an array");
  return j;
}

Cell get_cell(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) bad(path, "expected an [x, y] pair");
  return {get_int(j[0], path + "[0]"), get_int(j[1], path + "[1]")};
}

WorldConfig get_config(const json& j, const std::string& path, const GridSpec& grid) {
  if (!j.is_object()) bad(path, "expected an object mapping restaurant ids to Open/Closed");
  WorldConfig c;
  std::set<int> seen;
  for (const auto& [id, status] : j.items()) {
    const int r = grid.find_restaurant(id);
    if (r < 0) bad(path, "unknown restaurant '" + id + "'");
    const std::string v = get_string(status, path + "." + id);
    if (v == "Open") {
      c = c.with(r, Status::Open);
    } else if (v != "Closed") {
      bad(path + "." + id, "expected \"Open\" or \"Closed\"");
    }
    seen.insert(r);
  }
  if (static_cast<int>(seen.size()) != grid.restaurant_count()) bad(path, "must list every restaurant");
  return c;
}

GridSpec get_grid(const json& j) {
  check_keys(j, "grid", {"width", "height", "horizon", "start", "walls", "restaurants"});
  std::set<Cell> walls;
  const json& w = get_array(j["walls"], "grid.walls");
  for (std::size_t i = 0; i < w.size(); ++i) walls.insert(get_cell(w[i], "grid.walls[" + std::to_string(i) + "]"));
  if (!j["restaurants"].is_object()) bad("grid.restaurants", "expected an object");
  std::vector<Restaurant> restaurants;
  for (const auto& [id, cell] : j["restaurants"].items()) {
    restaurants.push_back({id, get_cell(cell, "grid.restaurants." + id)});
  }
  return GridSpec(get_int(j["width"], "grid.width"), get_int(j["height"], "grid.height"), std::move(walls),
                  std::move(restaurants), get_cell(j["start"], "grid.start"),
                  get_int(j["horizon"], "grid.horizon"));
}

std::vector<double> get_reals(const json& j, const std::string& path) {
  std::vector<double> out;
  const json& a = get_array(j, path);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(get_real(a[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

HypothesisGrid get_hypotheses(const json& j, const GridSpec& grid, const WorldConfig& truth) {
  check_keys(j, "hypotheses", {"timeCost", "k", "alpha", "types", "agentPriors", "utilities"}, {"alphaWeights"});
  HypothesisGrid h;
  h.time_cost = get_real(j["timeCost"], "hypotheses.timeCost");
  h.k_levels = get_reals(j["k"], "hypotheses.k");
  h.alpha_levels = get_reals(j["alpha"], "hypotheses.alpha");
  if (j.contains("alphaWeights")) h.alpha_weights = get_reals(j["alphaWeights"], "hypotheses.alphaWeights");
  const json& types = get_array(j["types"], "hypotheses.types");
  for (std::size_t i = 0; i < types.size(); ++i) {
    const std::string path = "hypotheses.types[" + std::to_string(i) + "]";
    auto t = parse_agent_type(get_string(types[i], path));
    if (!t) bad(path, "expected NonDiscounting, Naive or Sophisticated");
    h.types.push_back(*t);
  }
  const json& priors = get_array(j["agentPriors"], "hypotheses.agentPriors");
  for (std::size_t i = 0; i < priors.size(); ++i) {
    const std::string path = "hypotheses.agentPriors[" + std::to_string(i) + "]";
    if (!priors[i].is_object()) bad(path, "expected an object mapping restaurant ids to open probabilities");
    std::vector<std::pair<int, double>> open;
    for (const auto& [id, p] : priors[i].items()) {
      const int r = grid.find_restaurant(id);
      if (r < 0) bad(path, "unknown restaurant '" + id + "'");
      const double v = get_real(p, path + "." + id);
      if (!(v >= 0.0 && v <= 1.0)) bad(path + "." + id, "probability must lie in [0, 1]");
      open.emplace_back(r, v);
    }
    h.prior_levels.push_back(independent_belief(truth, open));
  }
  const json& utilities = get_array(j["utilities"], "hypotheses.utilities");
  for (std::size_t i = 0; i < utilities.size(); ++i) {
    const std::string path = "hypotheses.utilities[" + std::to_string(i) + "]";
    check_keys(utilities[i], path, {"name", "restaurants", "levels"});
    UtilityDimension d;
    d.name = get_string(utilities[i]["name"], path + ".name");
    const json& rs = get_array(utilities[i]["restaurants"], path + ".restaurants");
    for (std::size_t k = 0; k < rs.size(); ++k) {
      const std::string id = get_string(rs[k], path + ".restaurants[" + std::to_string(k) + "]");
      const int r = grid.find_restaurant(id);
      if (r < 0) bad(path + ".restaurants", "unknown restaurant '" + id + "'");
      d.restaurants.push_back(r);
    }
    std::sort(d.restaurants.begin(), d.restaurants.end());
    const json& levels = get_array(utilities[i]["levels"], path + ".levels");
    for (std::size_t k = 0; k < levels.size(); ++k) {
      const std::string lp = path + ".levels[" + std::to_string(k) + "]";
      if (!levels[k].is_array() || levels[k].size() != 2) bad(lp, "expected an [immediate, delayed] pair");
      d.levels.emplace_back(get_real(levels[k][0], lp + "[0]"), get_real(levels[k][1], lp + "[1]"));
    }
    h.utilities.push_back(std::move(d));
  }
  return h;
}

Episode get_episode(const json& j, const std::string& path, const WorldConfig& truth) {
  check_keys(j, path, {"start", "actions"});
  Episode e{truth, State::initial(get_cell(j["start"], path + ".start")), {}};
  const json& actions = get_array(j["actions"], path + ".actions");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    const std::string ap = path + ".actions[" + std::to_string(i) + "]";
    auto a = parse_action(get_string(actions[i], ap));
    if (!a) bad(ap, "expected one of N, S, E, W, P");
    e.actions.push_back(*a);
  }
  return e;
}

// --- canonical emitter ---

std::string format_real(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

bool is_scalar_array(const json& j) {
  return j.is_array() && std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
}

void emit(const json& j, std::ostringstream& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  const std::string close(static_cast<std::size_t>(indent), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) out << ",\n";
      first = false;
      out << pad << json(key).dump() << ": ";
      emit(value, out, indent + 2);
    }
    out << '\n' << close << '}';
  } else if (j.is_array()) {
    if (j.empty()) {
      out << "[]";
    } else if (is_scalar_array(j)) {
      out << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ", ";
        emit(j[i], out, indent);
      }
      out << ']';
    } else {
      out << "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        emit(j[i], out, indent + 2);
      }
      out << '\n' << close << ']';
    }
  } else if (j.is_number_float()) {
    out << format_real(j.get<double>());
  } else {
    out << j.dump();
  }
}

json cell_json(Cell c) { return json::array({c.x, c.y}); }

json config_json(const WorldConfig& c, const GridSpec& grid) {
  json j = json::object();
  for (int r = 0; r < grid.restaurant_count(); ++r) j[grid.restaurants()[r].id] = c.is_open(r) ? "Open" : "Closed";
  return j;
}

json reals_json(const std::vector<double>& v) {
  json j = json::array();
  for (double x : v) j.push_back(x);
  return j;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  check_keys(j, "scenario", {"name", "description", "grid", "trueConfig", "configSpace", "hypotheses", "episodes"},
             {"chains"});
  Scenario s;
  s.name = get_string(j["name"], "name");
  s.description = get_string(j["description"], "description");
  s.grid = get_grid(j["grid"]);
  s.true_config = get_config(j["trueConfig"], "trueConfig", s.grid);
  const json& space = get_array(j["configSpace"], "configSpace");
  for (std::size_t i = 0; i < space.size(); ++i) {
    s.config_space.push_back(get_config(space[i], "configSpace[" + std::to_string(i) + "]", s.grid));
  }
  if (j.contains("chains")) {
    if (!j["chains"].is_object()) bad("chains", "expected an object");
    for (const auto& [chain, ids] : j["chains"].items()) {
      const json& a = get_array(ids, "chains." + chain);
      for (std::size_t i = 0; i < a.size(); ++i) {
        s.chains[chain].push_back(get_string(a[i], "chains." + chain + "[" + std::to_string(i) + "]"));
      }
    }
  }
  s.hypotheses = get_hypotheses(j["hypotheses"], s.grid, s.true_config);
  const json& episodes = get_array(j["episodes"], "episodes");
  for (std::size_t i = 0; i < episodes.size(); ++i) {
    s.episodes.push_back(get_episode(episodes[i], "episodes[" + std::to_string(i) + "]", s.true_config));
  }
  auto errors = validate(s);
  if (!errors.empty()) throw ValidationError(std::move(errors));
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

std::string serialize_scenario(const Scenario& s) {
  const GridSpec& g = s.grid;
  json grid = json::object();
  grid["width"] = g.width();
  grid["height"] = g.height();
  grid["horizon"] = g.horizon();
  grid["start"] = cell_json(g.start());
  grid["walls"] = json::array();
  for (const Cell& c : g.walls()) grid["walls"].push_back(cell_json(c));
  grid["restaurants"] = json::object();
  for (const auto& r : g.restaurants()) grid["restaurants"][r.id] = cell_json(r.cell);

  const HypothesisGrid& h = s.hypotheses;
  json hyp = json::object();
  hyp["timeCost"] = h.time_cost;
  hyp["k"] = reals_json(h.k_levels);
  hyp["alpha"] = reals_json(h.alpha_levels);
  if (!h.alpha_weights.empty()) hyp["alphaWeights"] = reals_json(h.alpha_weights);
  hyp["types"] = json::array();
  for (AgentType t : h.types) hyp["types"].push_back(std::string(to_string(t)));
  hyp["agentPriors"] = json::array();
  for (const Belief& b : h.prior_levels) {
    json level = json::object();
    for (int r = 0; r < g.restaurant_count(); ++r) {
      const double p = b.prob_open(r);
      const double truth = s.true_config.is_open(r) ? 1.0 : 0.0;
      if (p != truth) level[g.restaurants()[r].id] = p;
    }
    hyp["agentPriors"].push_back(level);
  }
  hyp["utilities"] = json::array();
  for (const auto& u : h.utilities) {
    json d = json::object();
    d["name"] = u.name;
    d["restaurants"] = json::array();
    for (int r : u.restaurants) d["restaurants"].push_back(g.restaurants()[r].id);
    d["levels"] = json::array();
    for (const auto& [imm, del] : u.levels) d["levels"].push_back(json::array({imm, del}));
    hyp["utilities"].push_back(d);
  }

  json j = json::object();
  j["name"] = s.name;
  j["description"] = s.description;
  j["grid"] = grid;
  j["trueConfig"] = config_json(s.true_config, g);
  j["configSpace"] = json::array();
  for (const auto& c : s.config_space) j["configSpace"].push_back(config_json(c, g));
  j["chains"] = json::object();
  for (const auto& [chain, ids] : s.chains) j["chains"][chain] = ids;
  j["hypotheses"] = hyp;
  j["episodes"] = json::array();
  for (const Episode& e : s.episodes) {
    json ep = json::object();
    ep["start"] = cell_json(e.start.position);
    ep["actions"] = json::array();
    for (Action a : e.actions) ep["actions"].push_back(std::string(to_string(a)));
    j["episodes"].push_back(ep);
  }
  std::ostringstream out;
  emit(j, out, 0);
  out << '\n';
  return out.str();
}

void save_scenario(const Scenario& s, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
  out << serialize_scenario(s);
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

std::vector<PropertyPredicate> parse_properties(const std::string& text, const NameTable& names) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  check_keys(j, "properties file", {"properties"});
  const json& props = get_array(j["properties"], "properties");
  std::vector<PropertyPredicate> out;
  for (std::size_t i = 0; i < props.size(); ++i) {
    const std::string path = "properties[" + std::to_string(i) + "]";
    check_keys(props[i], path, {"name", "predicate"});
    out.push_back({get_string(props[i]["name"], path + ".name"),
                   parse_predicate(get_string(props[i]["predicate"], path + ".predicate"), names)});
  }
  return out;
}

std::vector<PropertyPredicate> load_properties(const std::filesystem::path& path, const NameTable& names) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string() + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_properties(buf.str(), names);
}

HypothesisGrid restrict_types(const HypothesisGrid& grid, const std::vector<AgentType>& types) {
  HypothesisGrid out = grid;
  out.types.clear();
  for (AgentType t : grid.types) {
    if (std::find(types.begin(), types.end(), t) != types.end()) out.types.push_back(t);
  }
  return out;
}

SearchResult canonical_parameter_search(const Scenario& s, const std::vector<AgentType>& types) {
  if (s.episodes.empty()) throw NotFoundError("scenario has no target episode");
  const Episode& target = s.episodes.front();
  const HypothesisGrid& h = s.hypotheses;
  if (h.alpha_levels.empty()) throw NotFoundError("hypothesis grid has no alpha levels");
  const auto top_alpha = static_cast<std::size_t>(
      std::max_element(h.alpha_levels.begin(), h.alpha_levels.end()) - h.alpha_levels.begin());
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto c = h.coordinates(i);
    if (c[HypothesisGrid::kAlphaDigit] != top_alpha) continue;
    const AgentType t = h.types[c[HypothesisGrid::kTypeDigit]];
    if (!types.empty() && std::find(types.begin(), types.end(), t) == types.end()) continue;
    if (t == AgentType::NonDiscounting && c[HypothesisGrid::kKDigit] != 0) continue;
    AgentParams p = h.params(i, s.grid.restaurant_count());
    const auto rollout = argmax_rollout(p, s.grid, target.true_config, target.start);
    if (rollout && rollout->actions == target.actions) return {i, std::move(p)};
  }
  throw NotFoundError("no hypothesis reproduces the target trajectory");
}

}  // namespace invplan
