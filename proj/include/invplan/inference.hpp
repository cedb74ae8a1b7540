#pragma once

#include "invplan/hypothesis.hpp"
#include "invplan/predicate.hpp"
#include "invplan/rollout.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace invplan {

// Probability of the observed actions under the agent's delay-0 choices, with the
// agent's belief starting at params.prior and conditioned on what it sees at each
// step. A step outside the agent's support yields 0.
double episode_likelihood(const AgentParams& params, const GridSpec& grid, const Episode& episode);

// Sum of per-episode log likelihoods with one shared agent model. Episodes are
// independent given the hypothesis and reset the agent's belief. -inf when any
// observed action has zero probability.
double log_likelihood(const AgentParams& params, const GridSpec& grid, const std::vector<Episode>& episodes);

// Log likelihood of every hypothesis in `hypotheses`, in index order. Scoring fans
// out over `jobs` threads (0 = hardware concurrency); results do not depend on it.
std::vector<double> score_hypotheses(const HypothesisGrid& hypotheses, const GridSpec& grid,
                                     const std::vector<Episode>& episodes, unsigned jobs = 0);

struct Posterior {
  HypothesisGrid hypotheses;
  int restaurant_count = 0;
  std::vector<double> log_likelihoods;
  std::vector<double> weights;

  AgentParams params(std::size_t index) const { return hypotheses.params(index, restaurant_count); }
};

// Normalizes prior x likelihood. Throws DegenerateInferenceError when every
// hypothesis has zero likelihood.
Posterior normalize_posterior(const HypothesisGrid& hypotheses, int restaurant_count,
                              std::vector<double> log_likelihoods);

Posterior posterior(const HypothesisGrid& hypotheses, const GridSpec& grid, const std::vector<Episode>& episodes,
                    unsigned jobs = 0);

double event_probability(const Posterior& post, const Predicate& predicate);

struct Matrix {
  std::string x_name, y_name;
  std::vector<double> x_levels, y_levels;
  std::vector<std::string> x_labels, y_labels;
  std::vector<std::vector<double>> values;  // values[i][j]: x level i, y level j

  double total() const;
};

enum class MatrixKind {
  Posterior,   // posterior mass per cell
  Likelihood,  // posterior mass per cell divided by the cell's prior mass
};

// Matrix over the (x level, y level) pairs taken by hypotheses satisfying `slice`,
// renormalized to sum to 1 unless the slice carries no mass. Likelihood cells
// are the prior-weighted mean likelihood within the cell, so levels that more
// grid points share (e.g. a total utility with several splits) are not favored.
Matrix marginal2d(const Posterior& post, const Field& x, const Field& y,
                  const std::optional<Predicate>& slice = std::nullopt, MatrixKind kind = MatrixKind::Posterior);

// For each property c: the prior-weighted mean likelihood over hypotheses
// satisfying c, normalized across the properties. Throws EmptyPropertyError when a
// property matches no hypothesis.
std::vector<std::pair<std::string, double>> property_likelihoods(const Posterior& post,
                                                                 const std::vector<PropertyPredicate>& properties);
std::vector<std::pair<std::string, double>> property_likelihoods(const HypothesisGrid& hypotheses,
                                                                 const GridSpec& grid,
                                                                 const std::vector<Episode>& episodes,
                                                                 const std::vector<PropertyPredicate>& properties,
                                                                 unsigned jobs = 0);

}  // namespace invplan
