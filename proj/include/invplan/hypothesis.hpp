#pragma once

#include "invplan/agent.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace invplan {

// One enumerated utility axis. Every listed restaurant takes the same
// (immediate, delayed) pair, which is how identical chain branches are tied.
struct UtilityDimension {
  std::string name;
  std::vector<int> restaurants;
  std::vector<std::pair<double, double>> levels;
  bool operator==(const UtilityDimension&) const = default;
};

// Discretized hypothesis space. Hypotheses are indexed in mixed radix with the
// digit order (type, k, alpha, prior, utility dimensions...), last digit fastest.
struct HypothesisGrid {
  std::vector<UtilityDimension> utilities;
  double time_cost = 0.0;
  std::vector<double> k_levels;
  std::vector<double> alpha_levels;
  // Relative prior weight per alpha level; empty means uniform.
  std::vector<double> alpha_weights;
  std::vector<Belief> prior_levels;
  std::vector<AgentType> types;

  std::size_t size() const;
  // Level index along each digit, in the order documented above.
  std::vector<std::size_t> coordinates(std::size_t index) const;
  AgentParams params(std::size_t index, int restaurant_count) const;
  // Normalized prior weight of `index`.
  double prior_weight(std::size_t index) const;

  // Problems with the grid relative to `restaurant_count` restaurants.
  std::vector<std::string> validate(int restaurant_count) const;

  bool operator==(const HypothesisGrid&) const = default;

  static constexpr std::size_t kTypeDigit = 0;
  static constexpr std::size_t kKDigit = 1;
  static constexpr std::size_t kAlphaDigit = 2;
  static constexpr std::size_t kPriorDigit = 3;
  static constexpr std::size_t kFirstUtilityDigit = 4;

 private:
  std::vector<std::size_t> radices() const;
};

// {(u, 0), (u/2, u/2)} for each total u, dropping the duplicate at u = 0.
std::vector<std::pair<double, double>> split_levels(const std::vector<double>& totals);

}  // namespace invplan
