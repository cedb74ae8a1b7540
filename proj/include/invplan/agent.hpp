#pragma once

#include "invplan/belief.hpp"
#include "invplan/memo_table.hpp"
#include "invplan/world.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace invplan {

enum class AgentType : std::uint8_t { NonDiscounting, Naive, Sophisticated };

std::string_view to_string(AgentType t);
std::optional<AgentType> parse_agent_type(std::string_view text);

struct AgentParams {
  Belief prior;
  UtilityParams utilities;
  AgentType type = AgentType::NonDiscounting;
  double k = 0.0;
  double alpha = 0.0;

  // True when the discount factor is identically 1, so delay is irrelevant.
  bool time_consistent() const { return type == AgentType::NonDiscounting || k == 0.0; }
};

// Hyperbolic weight 1 / (1 + k d).
double discount_factor(double k, int delay);

struct ActionDistribution {
  ActionSet actions;
  std::array<double, 4> probs{};

  // Zero for actions outside the support.
  double prob(Action a) const;
  // Index of the most probable action and its margin over the runner-up.
  std::pair<std::size_t, double> argmax() const;
};

// Stable softmax of `alpha * values` over the first `n` entries.
std::array<double, 4> softmax(const std::array<double, 4>& values, std::size_t n, double alpha);

// Memoized choice / expected-utility recursion for an agent that knows the world
// configuration it plans in. One instance per hypothesis and configuration; not
// thread-safe, but distinct instances share nothing.
class Planner {
 public:
  Planner(AgentParams params, const GridSpec& grid, const WorldConfig& config);

  double expected_utility(const State& state, Action action, int delay);
  ActionDistribution choice(const State& state, int delay);
  ActionDistribution act(const State& state) { return choice(state, 0); }

  const AgentParams& params() const { return params_; }
  const WorldConfig& config() const { return config_; }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Entry {
    ActionSet actions;
    std::array<double, 4> eu{};
    std::array<double, 4> prob{};
  };

  const Entry& entry(const State& state, int delay);

  AgentParams params_;
  const GridSpec& grid_;
  WorldConfig config_;
  MemoTable<Entry> memo_{1024};
};

// Free-function forms; each builds a fresh planner.
double expected_utility(const State& state, Action action, int delay, const AgentParams& params,
                        const GridSpec& grid, const WorldConfig& config);
ActionDistribution choice_distribution(const State& state, int delay, const AgentParams& params,
                                       const GridSpec& grid, const WorldConfig& config);
ActionDistribution act_distribution(const State& state, const AgentParams& params, const GridSpec& grid,
                                    const WorldConfig& config);

}  // namespace invplan
