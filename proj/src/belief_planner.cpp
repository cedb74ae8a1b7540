#include "invplan/belief_planner.hpp"

#include "invplan/error.hpp"

namespace invplan {

BeliefPlanner::BeliefPlanner(AgentParams params, const GridSpec& grid) : params_(std::move(params)), grid_(grid) {
  updates_.reserve(64);
}

BeliefPlanner::BeliefId BeliefPlanner::intern(const Belief& belief) {
  auto [it, inserted] = belief_ids_.emplace(belief.fingerprint(), static_cast<BeliefId>(beliefs_.size()));
  if (inserted) {
    beliefs_.push_back(belief);
    possibly_open_.push_back(belief.possibly_open_mask());
  }
  return it->second;
}

BeliefPlanner::BeliefId BeliefPlanner::update(BeliefId id, const Observation& obs) {
  if (obs.empty()) return id;
  const std::uint64_t key = (static_cast<std::uint64_t>(id) << 40) ^ obs.key();
  if (auto it = updates_.find(key); it != updates_.end()) return it->second;
  const BeliefId next = intern(belief_update(beliefs_[id], obs));
  updates_.emplace(key, next);
  return next;
}

const BeliefPlanner::Entry& BeliefPlanner::entry(BeliefId belief, const State& state, int delay) {
  if (params_.time_consistent()) delay = 0;
  const std::uint64_t key = (static_cast<std::uint64_t>(state.key()) << 32) |
                            (static_cast<std::uint64_t>(delay) << 24) | static_cast<std::uint64_t>(belief);
  if (const Entry* hit = memo_.find(key)) return *hit;

  // Deque storage keeps this reference valid while interning grows beliefs_.
  const Belief& current = beliefs_[belief];
  Entry e;
  e.actions = available_actions(state, grid_, possibly_open_[belief]);
  const double weight = params_.time_consistent() ? 1.0 : discount_factor(params_.k, delay);
  const int next_delay = delay + 1;
  const int successor_choice_delay = params_.type == AgentType::Sophisticated ? 0 : next_delay;

  struct Branch {
    State next;
    BeliefId belief;
    double weight;
  };
  std::vector<Branch> branches;
  branches.reserve(current.entries().size());
  for (std::size_t i = 0; i < e.actions.size(); ++i) {
    const Action a = e.actions[i];
    double value = weight * utility(state, a, params_.utilities);

    branches.clear();
    for (const auto& [config, w] : current.entries()) {
      const State next = transition(state, a, grid_, config);
      if (next.done()) continue;
      const BeliefId nb = update(belief, observe(grid_, config, next.position));
      bool merged = false;
      for (Branch& b : branches) {
        if (b.belief == nb && b.next == next) {
          b.weight += w;
          merged = true;
          break;
        }
      }
      if (!merged) branches.push_back({next, nb, w});
    }
    for (const Branch& b : branches) {
      const Entry& chooser = entry(b.belief, b.next, successor_choice_delay);
      const Entry& valued = entry(b.belief, b.next, next_delay);
      double future = 0.0;
      for (std::size_t j = 0; j < chooser.actions.size(); ++j) future += chooser.prob[j] * valued.eu[j];
      value += b.weight * future;
    }
    e.eu[i] = value;
  }
  e.prob = softmax(e.eu, e.actions.size(), params_.alpha);
  return memo_.insert(key, e);
}

double BeliefPlanner::expected_utility(BeliefId belief, const State& state, Action action, int delay) {
  const Entry& e = entry(belief, state, delay);
  const int i = e.actions.index_of(action);
  if (i < 0) throw IllegalActionError("action " + std::string(to_string(action)) + " is not available");
  return e.eu[static_cast<std::size_t>(i)];
}

ActionDistribution BeliefPlanner::choice(BeliefId belief, const State& state, int delay) {
  if (state.done()) throw IllegalActionError("choice requested in a Done state");
  const Entry& e = entry(belief, state, delay);
  return ActionDistribution{e.actions, e.prob};
}

double eu_uncertain(const Belief& belief, const Observation& obs, const State& state, Action action, int delay,
                    const AgentParams& params, const GridSpec& grid) {
  BeliefPlanner planner(params, grid);
  const auto id = planner.intern(belief_update(belief, obs));
  return planner.expected_utility(id, state, action, delay);
}

ActionDistribution choice_distribution_uncertain(const Belief& belief, const Observation& obs, const State& state,
                                                 int delay, const AgentParams& params, const GridSpec& grid) {
  BeliefPlanner planner(params, grid);
  const auto id = planner.intern(belief_update(belief, obs));
  return planner.choice(id, state, delay);
}

}  // namespace invplan
