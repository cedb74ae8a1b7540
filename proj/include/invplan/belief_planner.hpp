#pragma once

#include "invplan/agent.hpp"
#include "invplan/belief.hpp"
#include "invplan/memo_table.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <unordered_map>
#include <vector>

namespace invplan {

// Choice / expected-utility recursion for an agent that is uncertain about the
// world configuration. Beliefs are interned: every distinct belief reached while
// planning gets a small integer id, and memo entries key on (state, delay, id).
//
// The belief passed to `choice` / `expected_utility` is the agent's belief after
// conditioning on the observation at the current position.
class BeliefPlanner {
 public:
  using BeliefId = std::uint32_t;

  BeliefPlanner(AgentParams params, const GridSpec& grid);

  BeliefId intern(const Belief& belief);
  // Id of belief_update(belief(id), obs), cached.
  BeliefId update(BeliefId id, const Observation& obs);
  const Belief& belief(BeliefId id) const { return beliefs_[id]; }

  double expected_utility(BeliefId belief, const State& state, Action action, int delay);
  ActionDistribution choice(BeliefId belief, const State& state, int delay);

  const AgentParams& params() const { return params_; }
  std::size_t memo_size() const { return memo_.size(); }

 private:
  struct Entry {
    ActionSet actions;
    std::array<double, 4> eu{};
    std::array<double, 4> prob{};
  };

  const Entry& entry(BeliefId belief, const State& state, int delay);

  AgentParams params_;
  const GridSpec& grid_;
  std::deque<Belief> beliefs_;
  std::vector<std::uint32_t> possibly_open_;
  std::map<std::vector<std::pair<std::uint32_t, std::int64_t>>, BeliefId> belief_ids_;
  std::unordered_map<std::uint64_t, BeliefId> updates_;
  MemoTable<Entry> memo_{8192};
};

// Free-function forms: condition `belief` on `obs`, then evaluate.
double eu_uncertain(const Belief& belief, const Observation& obs, const State& state, Action action, int delay,
                    const AgentParams& params, const GridSpec& grid);
ActionDistribution choice_distribution_uncertain(const Belief& belief, const Observation& obs, const State& state,
                                                 int delay, const AgentParams& params, const GridSpec& grid);

}  // namespace invplan
