#include "invplan/agent.hpp"

#include "invplan/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace invplan {

std::string_view to_string(AgentType t) {
  switch (t) {
    case AgentType::NonDiscounting: return "NonDiscounting";
    case AgentType::Naive: return "Naive";
    case AgentType::Sophisticated: return "Sophisticated";
  }
  return "?";
}

std::optional<AgentType> parse_agent_type(std::string_view text) {
  if (text == "NonDiscounting") return AgentType::NonDiscounting;
  if (text == "Naive") return AgentType::Naive;
  if (text == "Sophisticated") return AgentType::Sophisticated;
  return std::nullopt;
}

double discount_factor(double k, int delay) { return 1.0 / (1.0 + k * static_cast<double>(delay)); }

double ActionDistribution::prob(Action a) const {
  const int i = actions.index_of(a);
  return i < 0 ? 0.0 : probs[static_cast<std::size_t>(i)];
}

std::pair<std::size_t, double> ActionDistribution::argmax() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < actions.size(); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  double second = 0.0;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i != best) second = std::max(second, probs[i]);
  }
  return {best, probs[best] - second};
}

std::array<double, 4> softmax(const std::array<double, 4>& values, std::size_t n, double alpha) {
  std::array<double, 4> out{};
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) top = std::max(top, alpha * values[i]);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = std::exp(alpha * values[i] - top);
    total += out[i];
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= total;
  return out;
}

Planner::Planner(AgentParams params, const GridSpec& grid, const WorldConfig& config)
    : params_(std::move(params)), grid_(grid), config_(config) {
}

const Planner::Entry& Planner::entry(const State& state, int delay) {
  if (params_.time_consistent()) delay = 0;
  const std::uint64_t key = (static_cast<std::uint64_t>(state.key()) << 16) | static_cast<std::uint64_t>(delay);
  if (const Entry* hit = memo_.find(key)) return *hit;

  Entry e;
  e.actions = available_actions(state, grid_, config_);
  const double weight = params_.time_consistent() ? 1.0 : discount_factor(params_.k, delay);
  const int next_delay = delay + 1;
  const int successor_choice_delay = params_.type == AgentType::Sophisticated ? 0 : next_delay;
  for (std::size_t i = 0; i < e.actions.size(); ++i) {
    const Action a = e.actions[i];
    double value = weight * utility(state, a, params_.utilities);
    const State next = transition(state, a, grid_, config_);
    if (!next.done()) {
      const Entry& chooser = entry(next, successor_choice_delay);
      const Entry& valued = entry(next, next_delay);
      for (std::size_t j = 0; j < chooser.actions.size(); ++j) value += chooser.prob[j] * valued.eu[j];
    }
    e.eu[i] = value;
  }
  e.prob = softmax(e.eu, e.actions.size(), params_.alpha);
  return memo_.insert(key, e);
}

double Planner::expected_utility(const State& state, Action action, int delay) {
  const Entry& e = entry(state, delay);
  const int i = e.actions.index_of(action);
  if (i < 0) throw IllegalActionError("action " + std::string(to_string(action)) + " is not available");
  return e.eu[static_cast<std::size_t>(i)];
}

ActionDistribution Planner::choice(const State& state, int delay) {
  if (state.done()) throw IllegalActionError("choice requested in a Done state");
  const Entry& e = entry(state, delay);
  return ActionDistribution{e.actions, e.prob};
}

double expected_utility(const State& state, Action action, int delay, const AgentParams& params,
                        const GridSpec& grid, const WorldConfig& config) {
  Planner p(params, grid, config);
  return p.expected_utility(state, action, delay);
}

ActionDistribution choice_distribution(const State& state, int delay, const AgentParams& params,
                                       const GridSpec& grid, const WorldConfig& config) {
  Planner p(params, grid, config);
  return p.choice(state, delay);
}

ActionDistribution act_distribution(const State& state, const AgentParams& params, const GridSpec& grid,
                                    const WorldConfig& config) {
  return choice_distribution(state, 0, params, grid, config);
}

}  // namespace invplan
