#pragma once

#include "invplan/hypothesis.hpp"
#include "invplan/inference.hpp"
#include "invplan/predicate.hpp"
#include "invplan/rollout.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace invplan {

struct Scenario {
  std::string name;
  std::string description;
  GridSpec grid;
  WorldConfig true_config;
  std::vector<WorldConfig> config_space;
  // Restaurant kinds with several branches, e.g. Donut -> {D1, D2}.
  std::map<std::string, std::vector<std::string>> chains;
  HypothesisGrid hypotheses;
  std::vector<Episode> episodes;

  // Restaurant ids, utility dimension names and chain names.
  NameTable names() const;

  bool operator==(const Scenario&) const = default;
};

// All problems with `s`; empty when it is valid.
std::vector<std::string> validate(const Scenario& s);

// Strict parse: unknown or missing fields are ParseErrors naming the JSON path.
// Throws ValidationError listing every violated invariant.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

// Canonical text: sorted keys, two-space indent, cells as [x, y], reals with at
// most 12 significant digits, trailing newline.
std::string serialize_scenario(const Scenario& s);
void save_scenario(const Scenario& s, const std::filesystem::path& path);

// Property file: {"properties": [{"name": ..., "predicate": ...}, ...]}.
std::vector<PropertyPredicate> load_properties(const std::filesystem::path& path, const NameTable& names);
std::vector<PropertyPredicate> parse_properties(const std::string& text, const NameTable& names);

// First hypothesis in index order, with alpha fixed at its largest level, whose
// argmax rollout from the target episode's start reproduces the target's actions.
// The target is the scenario's first episode. Throws NotFoundError.
struct SearchResult {
  std::size_t index;
  AgentParams params;
};
SearchResult canonical_parameter_search(const Scenario& s, const std::vector<AgentType>& types = {});

// Same grid restricted to the listed agent types.
HypothesisGrid restrict_types(const HypothesisGrid& grid, const std::vector<AgentType>& types);

}  // namespace invplan
