#include "invplan/hypothesis.hpp"

#include <cmath>
#include <set>

namespace invplan {

std::vector<std::size_t> HypothesisGrid::radices() const {
  std::vector<std::size_t> r{types.size(), k_levels.size(), alpha_levels.size(), prior_levels.size()};
  for (const auto& u : utilities) r.push_back(u.levels.size());
  return r;
}

std::size_t HypothesisGrid::size() const {
  std::size_t n = 1;
  for (std::size_t r : radices()) n *= r;
  return n;
}

std::vector<std::size_t> HypothesisGrid::coordinates(std::size_t index) const {
  const auto r = radices();
  std::vector<std::size_t> c(r.size());
  for (std::size_t i = r.size(); i-- > 0;) {
    c[i] = index % r[i];
    index /= r[i];
  }
  return c;
}

AgentParams HypothesisGrid::params(std::size_t index, int restaurant_count) const {
  const auto c = coordinates(index);
  AgentParams p;
  p.type = types[c[kTypeDigit]];
  p.k = k_levels[c[kKDigit]];
  p.alpha = alpha_levels[c[kAlphaDigit]];
  p.prior = prior_levels[c[kPriorDigit]];
  p.utilities.time_cost = time_cost;
  p.utilities.immediate.assign(static_cast<std::size_t>(restaurant_count), 0.0);
  p.utilities.delayed.assign(static_cast<std::size_t>(restaurant_count), 0.0);
  for (std::size_t d = 0; d < utilities.size(); ++d) {
    const auto& [imm, del] = utilities[d].levels[c[kFirstUtilityDigit + d]];
    for (int r : utilities[d].restaurants) {
      p.utilities.immediate[static_cast<std::size_t>(r)] = imm;
      p.utilities.delayed[static_cast<std::size_t>(r)] = del;
    }
  }
  return p;
}

double HypothesisGrid::prior_weight(std::size_t index) const {
  double w = 1.0 / static_cast<double>(size());
  if (!alpha_weights.empty()) {
    double total = 0.0;
    for (double a : alpha_weights) total += a;
    const std::size_t a = coordinates(index)[kAlphaDigit];
    w *= static_cast<double>(alpha_levels.size()) * alpha_weights[a] / total;
  }
  return w;
}

std::vector<std::string> HypothesisGrid::validate(int restaurant_count) const {
  std::vector<std::string> errors;
  if (types.empty()) errors.push_back("hypotheses.types is empty");
  if (k_levels.empty()) errors.push_back("hypotheses.k is empty");
  if (alpha_levels.empty()) errors.push_back("hypotheses.alpha is empty");
  if (prior_levels.empty()) errors.push_back("hypotheses.agentPriors is empty");
  if (time_cost > 0.0) errors.push_back("hypotheses.timeCost must be <= 0");
  for (double k : k_levels) {
    if (!(k >= 0.0) || !std::isfinite(k)) errors.push_back("k levels must be finite and >= 0");
  }
  for (double a : alpha_levels) {
    if (!(a >= 0.0) || !std::isfinite(a)) errors.push_back("alpha levels must be finite and >= 0");
  }
  if (!alpha_weights.empty()) {
    if (alpha_weights.size() != alpha_levels.size()) {
      errors.push_back("hypotheses.alphaWeights must match hypotheses.alpha in length");
    }
    for (double w : alpha_weights) {
      if (!(w > 0.0) || !std::isfinite(w)) errors.push_back("alpha weights must be finite and > 0");
    }
  }
  std::set<AgentType> seen_types;
  for (AgentType t : types) {
    if (!seen_types.insert(t).second) errors.push_back("hypotheses.types lists a type twice");
  }
  std::vector<int> cover(static_cast<std::size_t>(restaurant_count), 0);
  std::set<std::string> names;
  for (const auto& u : utilities) {
    if (!names.insert(u.name).second) errors.push_back("duplicate utility dimension '" + u.name + "'");
    if (u.levels.empty()) errors.push_back("utility dimension '" + u.name + "' has no levels");
    if (u.restaurants.empty()) errors.push_back("utility dimension '" + u.name + "' names no restaurants");
    for (int r : u.restaurants) {
      if (r >= 0 && r < restaurant_count) ++cover[static_cast<std::size_t>(r)];
    }
    for (const auto& [imm, del] : u.levels) {
      if (!std::isfinite(imm) || !std::isfinite(del)) errors.push_back("utility levels must be finite");
    }
  }
  for (int r = 0; r < restaurant_count; ++r) {
    if (cover[static_cast<std::size_t>(r)] != 1) {
      errors.push_back("restaurant #" + std::to_string(r) + " must belong to exactly one utility dimension");
    }
  }
  return errors;
}

std::vector<std::pair<double, double>> split_levels(const std::vector<double>& totals) {
  std::vector<std::pair<double, double>> out;
  for (double u : totals) {
    out.emplace_back(u, 0.0);
    if (u != 0.0) out.emplace_back(u / 2.0, u / 2.0);
  }
  return out;
}

}  // namespace invplan
