#include "invplan/rollout.hpp"

#include "invplan/error.hpp"

#include <random>

namespace invplan {

std::vector<State> replay(const GridSpec& grid, const Episode& episode) {
  std::vector<State> states{episode.start};
  State s = episode.start;
  for (Action a : episode.actions) {
    if (s.done()) throw IllegalActionError("episode continues after reaching Done");
    if (!available_actions(s, grid, episode.true_config).contains(a)) {
      throw IllegalActionError("action " + std::string(to_string(a)) + " is illegal at " + describe(s, grid));
    }
    s = transition(s, a, grid, episode.true_config);
    states.push_back(s);
  }
  return states;
}

AgentModel::AgentModel(const AgentParams& params, const GridSpec& grid) {
  if (params.prior.is_point_mass()) {
    full_ = std::make_unique<Planner>(params, grid, params.prior.entries().front().first);
  } else {
    uncertain_ = std::make_unique<BeliefPlanner>(params, grid);
    root_ = uncertain_->intern(params.prior);
  }
  reset();
}

void AgentModel::reset() { current_ = root_; }

ActionDistribution AgentModel::step(const State& state, const Observation& obs) {
  if (full_) {
    if (!obs.consistent_with(full_->config())) {
      throw ImpossibleObservationError("observation contradicts the agent's certain belief");
    }
    return full_->act(state);
  }
  current_ = uncertain_->update(current_, obs);
  return uncertain_->choice(current_, state, 0);
}

namespace {

double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

Episode simulate(const AgentParams& params, const GridSpec& grid, const WorldConfig& config, std::uint64_t seed,
                 std::optional<State> start) {
  std::mt19937_64 rng(seed);
  AgentModel agent(params, grid);
  Episode ep{config, start.value_or(State::initial(grid.start())), {}};
  State s = ep.start;
  while (!s.done()) {
    const ActionDistribution dist = agent.step(s, observe(grid, config, s.position));
    const double u = unit_interval(rng);
    std::size_t pick = dist.actions.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < dist.actions.size(); ++i) {
      acc += dist.probs[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    ep.actions.push_back(dist.actions[pick]);
    s = transition(s, dist.actions[pick], grid, config);
  }
  return ep;
}

std::optional<Episode> argmax_rollout(const AgentParams& params, const GridSpec& grid, const WorldConfig& config,
                                      std::optional<State> start, double tie_margin) {
  AgentModel agent(params, grid);
  Episode ep{config, start.value_or(State::initial(grid.start())), {}};
  State s = ep.start;
  while (!s.done()) {
    const ActionDistribution dist = agent.step(s, observe(grid, config, s.position));
    const auto [best, margin] = dist.argmax();
    if (dist.actions.size() > 1 && margin <= tie_margin) return std::nullopt;
    ep.actions.push_back(dist.actions[best]);
    s = transition(s, dist.actions[best], grid, config);
  }
  return ep;
}

std::map<std::uint32_t, std::pair<State, ActionDistribution>> policy_table(const AgentParams& params,
                                                                           const GridSpec& grid,
                                                                           const WorldConfig& config) {
  Planner planner(params, grid, config);
  std::map<std::uint32_t, std::pair<State, ActionDistribution>> table;
  for (const State& s : reachable_states(grid, config, State::initial(grid.start()))) {
    table.emplace(s.key(), std::make_pair(s, planner.act(s)));
  }
  return table;
}

}  // namespace invplan
