#pragma once

// Brute-force reference for the planners and the inference engine. Nothing here
// is memoized and none of the library's transition, observation, belief or
// planning code is called; only GridSpec geometry and hypothesis enumeration
// are shared. Cost is exponential in the horizon, so keep worlds tiny.

#include "invplan/hypothesis.hpp"
#include "invplan/rollout.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using invplan::Action;
using invplan::AgentParams;
using invplan::AgentType;
using invplan::GridSpec;

enum Phase { kMoving, kArrived, kEating, kDone };

struct St {
  int x, y, t;
  Phase phase;
  int r;
};

using Belief = std::vector<std::pair<std::uint32_t, double>>;  // (open mask, weight)

inline St start_of(const invplan::State& s) {
  return St{s.position.x, s.position.y, s.time, static_cast<Phase>(s.phase), s.restaurant};
}

inline std::pair<int, int> delta(Action a) {
  switch (a) {
    case Action::North: return {0, -1};
    case Action::South: return {0, 1};
    case Action::East: return {1, 0};
    case Action::West: return {-1, 0};
    default: return {0, 0};
  }
}

// Legal actions, treating restaurants whose bit is set in `passable` as enterable.
inline std::vector<Action> legal(const St& s, const GridSpec& g, std::uint32_t passable) {
  if (s.phase == kArrived || s.phase == kEating) return {Action::Proceed};
  std::vector<Action> out;
  for (Action a : {Action::North, Action::South, Action::East, Action::West}) {
    const auto [dx, dy] = delta(a);
    const invplan::Cell c{s.x + dx, s.y + dy};
    if (c.x < 0 || c.y < 0 || c.x >= g.width() || c.y >= g.height() || g.walls().contains(c)) continue;
    int r = -1;
    for (int i = 0; i < g.restaurant_count(); ++i) {
      if (g.restaurants()[i].cell == c) r = i;
    }
    if (r >= 0 && !((passable >> r) & 1U)) continue;
    out.push_back(a);
  }
  return out;
}

inline St next(const St& s, Action a, const GridSpec& g, std::uint32_t open) {
  St n = s;
  if (s.phase == kMoving) {
    const auto [dx, dy] = delta(a);
    n.x += dx;
    n.y += dy;
    n.t += 1;
    for (int i = 0; i < g.restaurant_count(); ++i) {
      const auto& c = g.restaurants()[i].cell;
      if (c.x == n.x && c.y == n.y) {
        if (!((open >> i) & 1U)) throw std::logic_error("oracle: entered a closed restaurant");
        n.phase = kArrived;
        n.r = i;
        return n;
      }
    }
    if (n.t >= g.horizon()) n.phase = kDone;
  } else if (s.phase == kArrived) {
    if (s.t + 1 > g.horizon()) {
      n.phase = kDone;
    } else {
      n.phase = kEating;
      n.t += 1;
    }
  } else {
    n.phase = kDone;
  }
  return n;
}

inline double reward(const St& s, const AgentParams& p) {
  if (s.phase == kMoving) return p.utilities.time_cost;
  if (s.phase == kArrived) return p.utilities.immediate[s.r];
  return p.utilities.delayed[s.r];
}

// Keeps the configurations that agree with what is visible from (x, y).
inline Belief condition(const Belief& b, const St& s, const GridSpec& g, std::uint32_t truth) {
  std::uint32_t seen = 0;
  for (int i = 0; i < g.restaurant_count(); ++i) {
    const auto& c = g.restaurants()[i].cell;
    if (std::abs(c.x - s.x) + std::abs(c.y - s.y) <= 1) seen |= 1U << i;
  }
  Belief out;
  double total = 0.0;
  for (const auto& [m, w] : b) {
    if ((m & seen) == (truth & seen)) {
      out.emplace_back(m, w);
      total += w;
    }
  }
  if (out.empty()) throw std::logic_error("oracle: impossible observation");
  for (auto& e : out) e.second /= total;
  return out;
}

inline std::vector<double> softmax_of(const std::vector<double>& v, double alpha) {
  double top = v[0];
  for (double x : v) top = std::max(top, x);
  std::vector<double> p(v.size());
  double z = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) z += p[i] = std::exp(alpha * (v[i] - top));
  for (double& x : p) x /= z;
  return p;
}

inline double discount(const AgentParams& p, int d) {
  return p.type == AgentType::NonDiscounting ? 1.0 : 1.0 / (1.0 + p.k * d);
}

inline std::vector<double> q_values(const Belief& b, const St& s, int d, const AgentParams& p, const GridSpec& g);

// Sum over the agent's choices at (b, s') of C(a') * EU(a' at delay d + 1).
inline double continuation(const Belief& b, const St& s, int d, const AgentParams& p, const GridSpec& g) {
  const int choose_at = p.type == AgentType::Sophisticated ? 0 : d + 1;
  const std::vector<double> valued = q_values(b, s, d + 1, p, g);
  const std::vector<double> chooser = choose_at == d + 1 ? valued : q_values(b, s, choose_at, p, g);
  const std::vector<double> c = softmax_of(chooser, p.alpha);
  double v = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) v += c[i] * valued[i];
  return v;
}

// EU of every legal action at (b, s) and delay d; `b` already reflects what is
// visible from s. Legal actions are those legal in some configuration of b.
inline std::vector<double> q_values(const Belief& b, const St& s, int d, const AgentParams& p, const GridSpec& g) {
  std::uint32_t passable = 0;
  for (const auto& e : b) passable |= e.first;
  std::vector<double> out;
  for (Action a : legal(s, g, passable)) {
    double v = discount(p, d) * reward(s, p);
    for (const auto& [m, w] : b) {
      const St n = next(s, a, g, m);
      if (n.phase == kDone) continue;
      v += w * continuation(condition(b, n, g, m), n, d, p, g);
    }
    out.push_back(v);
  }
  return out;
}

inline Belief belief_of(const invplan::Belief& b) {
  Belief out;
  for (const auto& [c, w] : b.entries()) out.emplace_back(c.open_mask, w);
  return out;
}

inline std::vector<Action> legal_actions(const Belief& b, const St& s, const GridSpec& g) {
  std::uint32_t passable = 0;
  for (const auto& e : b) passable |= e.first;
  return legal(s, g, passable);
}

// log P(actions | params) for one episode, belief reset to the prior.
inline double episode_log_likelihood(const AgentParams& p, const GridSpec& g, const invplan::Episode& e) {
  const std::uint32_t truth = e.true_config.open_mask;
  Belief b = belief_of(p.prior);
  St s = start_of(e.start);
  double total = 0.0;
  for (Action a : e.actions) {
    b = condition(b, s, g, truth);
    const auto acts = legal_actions(b, s, g);
    const auto probs = softmax_of(q_values(b, s, 0, p, g), p.alpha);
    const auto it = std::find(acts.begin(), acts.end(), a);
    if (it == acts.end()) return -INFINITY;
    total += std::log(probs[static_cast<std::size_t>(it - acts.begin())]);
    s = next(s, a, g, truth);
  }
  return total;
}

inline double log_likelihood(const AgentParams& p, const GridSpec& g, const std::vector<invplan::Episode>& eps) {
  double total = 0.0;
  for (const auto& e : eps) total += episode_log_likelihood(p, g, e);
  return total;
}

// Normalized posterior weights, prior recomputed from the grid's level counts.
inline std::vector<double> posterior(const invplan::HypothesisGrid& h, const GridSpec& g,
                                     const std::vector<invplan::Episode>& eps) {
  const std::size_t n = h.size();
  double alpha_total = 0.0;
  for (std::size_t i = 0; i < h.alpha_levels.size(); ++i) {
    alpha_total += h.alpha_weights.empty() ? 1.0 : h.alpha_weights[i];
  }
  std::vector<double> w(n);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t ai = h.coordinates(i)[invplan::HypothesisGrid::kAlphaDigit];
    const double prior = (h.alpha_weights.empty() ? 1.0 : h.alpha_weights[ai]) / alpha_total /
                         static_cast<double>(n / h.alpha_levels.size());
    z += w[i] = prior * std::exp(oracle::log_likelihood(h.params(i, g.restaurant_count()), g, eps));
  }
  for (double& x : w) x /= z;
  return w;
}

}  // namespace oracle
