#pragma once

#include "invplan/agent.hpp"
#include "invplan/belief_planner.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <vector>

namespace invplan {

struct Episode {
  WorldConfig true_config;
  State start;
  std::vector<Action> actions;
  bool operator==(const Episode&) const = default;
};

// States visited by replaying `episode` under its true configuration: one entry per
// action (the state it was taken in) plus the final state. Throws IllegalActionError.
std::vector<State> replay(const GridSpec& grid, const Episode& episode);

// An agent acting in a world it observes step by step. Starts from params.prior and
// conditions on each observation it is handed. Planning tables persist across
// reset(), so one instance can score many episodes for the same hypothesis.
class AgentModel {
 public:
  AgentModel(const AgentParams& params, const GridSpec& grid);

  void reset();
  // Conditions the belief on `obs`, then returns the delay-0 choice at `state`.
  ActionDistribution step(const State& state, const Observation& obs);

 private:
  std::unique_ptr<Planner> full_;      // point-mass prior
  std::unique_ptr<BeliefPlanner> uncertain_;
  BeliefPlanner::BeliefId root_ = 0;
  BeliefPlanner::BeliefId current_ = 0;
};

// Samples an episode from the agent's own act distribution in `config`.
Episode simulate(const AgentParams& params, const GridSpec& grid, const WorldConfig& config, std::uint64_t seed,
                 std::optional<State> start = std::nullopt);

// Deterministic rollout taking the most probable action at every step. Returns
// nullopt when some step's top two probabilities are within `tie_margin`.
std::optional<Episode> argmax_rollout(const AgentParams& params, const GridSpec& grid, const WorldConfig& config,
                                      std::optional<State> start = std::nullopt, double tie_margin = 1e-6);

// act_distribution at every non-Done state reachable from the grid start.
std::map<std::uint32_t, std::pair<State, ActionDistribution>> policy_table(const AgentParams& params,
                                                                           const GridSpec& grid,
                                                                           const WorldConfig& config);

}  // namespace invplan
