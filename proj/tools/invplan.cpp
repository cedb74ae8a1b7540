#include "invplan/error.hpp"
#include "invplan/inference.hpp"
#include "invplan/rollout.hpp"
#include "invplan/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace invplan;

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kParse = 2, kValidation = 3, kDegenerate = 4 };

std::string real17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(path + ": cannot open for writing");
  out << text;
  if (!out) throw std::runtime_error(path + ": write failed");
}

std::vector<AgentType> parse_types(const std::vector<std::string>& names) {
  std::vector<AgentType> out;
  for (const std::string& item : names) {
    std::stringstream ss(item);
    std::string part;
    while (std::getline(ss, part, ',')) {
      if (part.empty()) continue;
      const auto t = parse_agent_type(part);
      if (!t) throw ParseError("unknown agent type '" + part + "'");
      out.push_back(*t);
    }
  }
  return out;
}

std::string actions_text(const std::vector<Action>& actions) {
  std::string s;
  for (Action a : actions) s += to_string(a);
  return s;
}

json params_json(const AgentParams& p, const Scenario& s) {
  json j = json::object();
  j["type"] = std::string(to_string(p.type));
  j["k"] = p.k;
  j["alpha"] = p.alpha;
  j["timeCost"] = p.utilities.time_cost;
  json u = json::object();
  json open = json::object();
  for (int r = 0; r < s.grid.restaurant_count(); ++r) {
    const std::string& id = s.grid.restaurants()[r].id;
    u[id] = json::array({p.utilities.immediate[r], p.utilities.delayed[r]});
    open[id] = p.prior.prob_open(r);
  }
  j["utilities"] = u;
  j["priorOpen"] = open;
  return j;
}

// index,type,k,alpha,popen(R)...,Uimm(D),Udel(D)...,logLikelihood,weight
std::string posterior_csv(const Posterior& post, const Scenario& s) {
  const HypothesisGrid& h = post.hypotheses;
  std::ostringstream out;
  out << "index,type,k,alpha";
  for (const auto& r : s.grid.restaurants()) out << ",popen(" << r.id << ")";
  for (const auto& d : h.utilities) out << ",Uimm(" << d.name << "),Udel(" << d.name << ")";
  out << ",logLikelihood,weight\n";
  for (std::size_t i = 0; i < post.weights.size(); ++i) {
    const AgentParams p = post.params(i);
    out << i << ',' << to_string(p.type) << ',' << real17(p.k) << ',' << real17(p.alpha);
    for (int r = 0; r < s.grid.restaurant_count(); ++r) out << ',' << real17(p.prior.prob_open(r));
    for (const auto& d : h.utilities) {
      const int r = d.restaurants.front();
      out << ',' << real17(p.utilities.immediate[r]) << ',' << real17(p.utilities.delayed[r]);
    }
    out << ',' << real17(post.log_likelihoods[i]) << ',' << real17(post.weights[i]) << '\n';
  }
  return out.str();
}

std::string matrix_csv(const Matrix& m) {
  std::ostringstream out;
  out << m.x_name << " \\ " << m.y_name;
  for (const auto& l : m.y_labels) out << ',' << l;
  out << '\n';
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    out << m.x_labels[i];
    for (double v : m.values[i]) out << ',' << real17(v);
    out << '\n';
  }
  return out.str();
}

json scores_json(std::vector<std::pair<std::string, double>> scores) {
  std::stable_sort(scores.begin(), scores.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  json j = json::array();
  for (const auto& [name, v] : scores) j.push_back({{"property", name}, {"score", v}});
  return j;
}

HypothesisGrid restricted(const Scenario& s, const std::vector<std::string>& types) {
  if (types.empty()) return s.hypotheses;
  HypothesisGrid g = restrict_types(s.hypotheses, parse_types(types));
  if (g.types.empty()) throw ValidationError({"--restrict-types leaves no agent type in the grid"});
  return g;
}

// --- subcommands ---

int cmd_validate(const std::string& path) {
  const Scenario s = load_scenario(path);
  std::cerr << path << ": ok (" << s.hypotheses.size() << " hypotheses, " << s.episodes.size() << " episodes)\n";
  return kOk;
}

int cmd_format(const std::string& path, const std::string& out) {
  write_text(out, serialize_scenario(load_scenario(path)));
  return kOk;
}

int cmd_simulate(const std::string& path, std::size_t index, std::uint64_t seed, bool argmax, const std::string& out) {
  Scenario s = load_scenario(path);
  if (index >= s.hypotheses.size()) {
    throw std::out_of_range("hypothesis index " + std::to_string(index) + " is outside the grid (size " +
                            std::to_string(s.hypotheses.size()) + ")");
  }
  const AgentParams p = s.hypotheses.params(index, s.grid.restaurant_count());
  Episode e;
  if (argmax) {
    auto r = argmax_rollout(p, s.grid, s.true_config);
    if (!r) throw NotFoundError("argmax rollout hits a tie");
    e = *r;
  } else {
    e = simulate(p, s.grid, s.true_config, seed);
  }
  s.episodes = {e};
  s.description = "Episode sampled from hypothesis " + std::to_string(index) +
                  (argmax ? " (argmax)" : " with seed " + std::to_string(seed));
  write_text(out, serialize_scenario(s));
  return kOk;
}

int cmd_infer(const std::string& path, const std::string& out, const std::string& summary_path,
              const std::vector<std::string>& events, const std::vector<std::string>& types, unsigned jobs,
              bool as_json) {
  const Scenario s = load_scenario(path);
  const NameTable names = s.names();
  std::vector<Predicate> preds;
  for (const auto& e : events) preds.push_back(parse_predicate(e, names));
  const HypothesisGrid grid = restricted(s, types);
  const Posterior post = posterior(grid, s.grid, s.episodes, jobs);
  if (!out.empty()) write_text(out, posterior_csv(post, s));

  std::size_t best = 0;
  for (std::size_t i = 1; i < post.weights.size(); ++i) {
    if (post.weights[i] > post.weights[best]) best = i;
  }
  json summary = json::object();
  summary["scenario"] = s.name;
  summary["hypotheses"] = post.weights.size();
  summary["episodes"] = s.episodes.size();
  summary["types"] = json::array();
  for (AgentType t : grid.types) summary["types"].push_back(std::string(to_string(t)));
  summary["events"] = json::object();
  for (const auto& p : preds) summary["events"][p.text()] = event_probability(post, p);
  summary["map"] = {{"index", best}, {"weight", post.weights[best]}, {"params", params_json(post.params(best), s)}};
  if (!summary_path.empty()) write_text(summary_path, summary.dump(2) + "\n");
  if (as_json) {
    std::cout << summary.dump(2) << '\n';
  } else {
    std::cout << s.name << ": " << post.weights.size() << " hypotheses, " << s.episodes.size() << " episodes\n";
    for (const auto& p : preds) std::cout << "P(" << p.text() << ") = " << event_probability(post, p) << '\n';
    std::cout << "MAP hypothesis " << best << " (weight " << post.weights[best] << ")\n";
  }
  return kOk;
}

int cmd_marginal(const std::string& path, const std::string& x, const std::string& y, const std::string& slice,
                 bool likelihood, const std::vector<std::string>& types, unsigned jobs, const std::string& out) {
  const Scenario s = load_scenario(path);
  const NameTable names = s.names();
  const Field fx = parse_field(x, names);
  const Field fy = parse_field(y, names);
  std::optional<Predicate> sl;
  if (!slice.empty()) sl = parse_predicate(slice, names);
  const Posterior post = posterior(restricted(s, types), s.grid, s.episodes, jobs);
  const Matrix m = marginal2d(post, fx, fy, sl, likelihood ? MatrixKind::Likelihood : MatrixKind::Posterior);
  write_text(out, matrix_csv(m));
  return kOk;
}

int cmd_properties(const std::string& path, const std::string& props_path, unsigned jobs, const std::string& out) {
  const Scenario s = load_scenario(path);
  const auto props = load_properties(props_path, s.names());
  const auto scores = property_likelihoods(s.hypotheses, s.grid, s.episodes, props, jobs);
  write_text(out, scores_json(scores).dump(2) + "\n");
  return kOk;
}

int cmd_search(const std::string& path, const std::vector<std::string>& types, bool as_json) {
  const Scenario s = load_scenario(path);
  const SearchResult r = canonical_parameter_search(s, parse_types(types));
  const auto rollout = argmax_rollout(r.params, s.grid, s.episodes.front().true_config, s.episodes.front().start);
  if (as_json) {
    json j = {{"index", r.index}, {"params", params_json(r.params, s)}, {"actions", actions_text(rollout->actions)}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "hypothesis " << r.index << ": " << params_json(r.params, s).dump() << '\n'
              << "rollout " << actions_text(rollout->actions) << '\n';
  }
  return kOk;
}

// Results for the bundled scenarios, one file each, into `out_dir`.
int cmd_reproduce(const std::string& data_dir, const std::string& out_dir, unsigned jobs) {
  const fs::path data(data_dir), out(out_dir);
  fs::create_directories(out);
  auto scenario = [&](const char* name) { return load_scenario(data / "scenarios" / (std::string(name) + ".json")); };
  auto save = [&](const char* name, const std::string& text) {
    write_text((out / name).string(), text);
    std::cerr << "wrote " << (out / name).string() << '\n';
  };

  json fixtures = json::object();
  for (const char* name : {"naive-donut", "sophisticated-veg"}) {
    const Scenario s = scenario(name);
    const SearchResult r = canonical_parameter_search(s);
    fixtures[name] = {{"index", r.index}, {"params", params_json(r.params, s)},
                      {"actions", actions_text(s.episodes.front().actions)}};
  }
  save("fixtures.json", fixtures.dump(2) + "\n");

  {
    const Scenario s = scenario("naive-donut");
    const NameTable names = s.names();
    const Posterior post = posterior(s.hypotheses, s.grid, s.episodes, jobs);
    save("naive-donut-veg.csv",
         matrix_csv(marginal2d(post, parse_field("U(Donut)", names), parse_field("U(Veg)", names),
                               parse_predicate("type == Naive && k == 0.5 && alpha == 100", names),
                               MatrixKind::Likelihood)));
  }
  {
    const Scenario s = scenario("sophisticated-noodle-closed");
    const NameTable names = s.names();
    const Posterior post = posterior(s.hypotheses, s.grid, s.episodes, jobs);
    save("noodle-closed-popen.csv",
         matrix_csv(marginal2d(post, parse_field("U(Noodle)", names), parse_field("popen(Noodle)", names),
                               parse_predicate("type == Sophisticated && k == 1 && alpha == 10 && popen(D1) == 1",
                                               names),
                               MatrixKind::Likelihood)));
    save("noodle-closed-veg-k.csv",
         matrix_csv(marginal2d(post, parse_field("U(Veg)", names), parse_field("k", names),
                               parse_predicate("type == Sophisticated && alpha == 10", names),
                               MatrixKind::Likelihood)));
    const auto props = load_properties(data / "properties" / "explanations-sophisticated.json", names);
    save("properties-noodle-closed.json", scores_json(property_likelihoods(post, props)).dump(2) + "\n");
  }
  {
    const Scenario s = scenario("naive-uncertain");
    const auto props = load_properties(data / "properties" / "explanations-naive.json", s.names());
    save("properties-naive-uncertain.json",
         scores_json(property_likelihoods(s.hypotheses, s.grid, s.episodes, props, jobs)).dump(2) + "\n");
  }
  {
    const Scenario s = scenario("three-episodes");
    const Predicate veg = parse_predicate("prefers(Veg, Donut)", s.names());
    const std::vector<double> ll = score_hypotheses(s.hypotheses, s.grid, s.episodes, jobs);
    const int n = s.grid.restaurant_count();
    json j = json::object();
    j["event"] = veg.text();
    j["full"] = event_probability(normalize_posterior(s.hypotheses, n, ll), veg);
    j["nonDiscounting"] = event_probability(
        posterior(restrict_types(s.hypotheses, {AgentType::NonDiscounting}), s.grid, s.episodes, jobs), veg);
    // Down-weighting either end of the alpha grid in steps.
    for (const auto& [key, end] : {std::pair{"lowestAlphaDownweighted", 0}, std::pair{"largestAlphaDownweighted", 1}}) {
      j[key] = json::array();
      for (double w : {1.0, 0.5, 0.25}) {
        HypothesisGrid g = s.hypotheses;
        g.alpha_weights.assign(g.alpha_levels.size(), 1.0);
        (end == 0 ? g.alpha_weights.front() : g.alpha_weights.back()) = w;
        j[key].push_back(
            {{"weights", g.alpha_weights}, {"probability", event_probability(normalize_posterior(g, n, ll), veg)}});
      }
    }
    save("three-episodes.json", j.dump(2) + "\n");
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian inverse planning for discounting, possibly mistaken gridworld agents"};
  app.require_subcommand(1);
  unsigned jobs = 0;

  std::string scenario, out, summary, props, x, y, slice, data_dir = "data";
  std::vector<std::string> events, types;
  std::size_t index = 0;
  std::uint64_t seed = 0;
  bool as_json = false, argmax = false, likelihood = false;

  auto* validate = app.add_subcommand("validate", "Check a scenario file");
  validate->add_option("scenario", scenario, "Scenario file")->required();

  auto* format = app.add_subcommand("format", "Rewrite a scenario in canonical form");
  format->add_option("scenario", scenario, "Scenario file")->required();
  format->add_option("-o,--out", out, "Output file (default stdout)");

  auto* sim = app.add_subcommand("simulate", "Sample an episode from one grid hypothesis");
  sim->add_option("scenario", scenario, "Scenario file")->required();
  sim->add_option("-i,--index", index, "Hypothesis index")->required();
  sim->add_option("-s,--seed", seed, "Random seed");
  sim->add_flag("--argmax", argmax, "Take the most probable action at every step");
  sim->add_option("-o,--out", out, "Output scenario file (default stdout)");

  auto* infer = app.add_subcommand("infer", "Posterior over the hypothesis grid");
  infer->add_option("scenario", scenario, "Scenario file")->required();
  infer->add_option("-o,--out", out, "Posterior CSV");
  infer->add_option("--summary", summary, "Summary JSON file");
  infer->add_option("-e,--event", events, "Event predicate (repeatable)");
  infer->add_option("--restrict-types", types, "Comma-separated agent types");
  infer->add_option("-j,--jobs", jobs, "Worker threads (0 = all cores)");
  infer->add_flag("--json", as_json, "Print the summary as JSON");

  auto* marginal = app.add_subcommand("marginal", "Two-dimensional posterior or likelihood matrix");
  marginal->add_option("scenario", scenario, "Scenario file")->required();
  marginal->add_option("-x", x, "Row field, e.g. U(Veg)")->required();
  marginal->add_option("-y", y, "Column field, e.g. k")->required();
  marginal->add_option("--slice", slice, "Predicate selecting hypotheses");
  marginal->add_flag("--likelihood", likelihood, "Divide each cell by its prior mass");
  marginal->add_option("--restrict-types", types, "Comma-separated agent types");
  marginal->add_option("-j,--jobs", jobs, "Worker threads (0 = all cores)");
  marginal->add_option("-o,--out", out, "Output CSV (default stdout)");

  auto* properties = app.add_subcommand("properties", "Normalized marginal likelihood of properties");
  properties->add_option("scenario", scenario, "Scenario file")->required();
  properties->add_option("properties", props, "Properties file")->required();
  properties->add_option("-j,--jobs", jobs, "Worker threads (0 = all cores)");
  properties->add_option("-o,--out", out, "Output JSON (default stdout)");

  auto* search = app.add_subcommand("search", "First hypothesis whose argmax rollout matches episode 0");
  search->add_option("scenario", scenario, "Scenario file")->required();
  search->add_option("--types", types, "Comma-separated agent types");
  search->add_flag("--json", as_json, "Print JSON");

  auto* reproduce = app.add_subcommand("reproduce", "Write the bundled scenarios' results as data files");
  reproduce->add_option("--data", data_dir, "Directory holding scenarios/ and properties/");
  reproduce->add_option("-o,--out", out, "Output directory")->required();
  reproduce->add_option("-j,--jobs", jobs, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    if (*validate) return cmd_validate(scenario);
    if (*format) return cmd_format(scenario, out);
    if (*sim) return cmd_simulate(scenario, index, seed, argmax, out);
    if (*infer) return cmd_infer(scenario, out, summary, events, types, jobs, as_json);
    if (*marginal) return cmd_marginal(scenario, x, y, slice, likelihood, types, jobs, out);
    if (*properties) return cmd_properties(scenario, props, jobs, out);
    if (*search) return cmd_search(scenario, types, as_json);
    if (*reproduce) return cmd_reproduce(data_dir, out, jobs);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const UnknownDimensionError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kParse;
  } catch (const ValidationError& e) {
    std::cerr << "validation failed:\n";
    for (const auto& p : e.problems()) std::cerr << "  - " << p << '\n';
    return kValidation;
  } catch (const DegenerateInferenceError& e) {
    std::cerr << "inference failed: " << e.what() << '\n';
    return kDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}
