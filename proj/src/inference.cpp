#include "invplan/inference.hpp"

#include "invplan/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

namespace invplan {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double episode_log_likelihood(AgentModel& agent, const GridSpec& grid, const Episode& episode) {
  agent.reset();
  double total = 0.0;
  State s = episode.start;
  for (Action a : episode.actions) {
    if (s.done()) throw IllegalActionError("episode continues after reaching Done");
    const ActionDistribution dist = agent.step(s, observe(grid, episode.true_config, s.position));
    const double p = dist.prob(a);
    if (p <= 0.0) return kNegInf;
    total += std::log(p);
    s = transition(s, a, grid, episode.true_config);
  }
  return total;
}

}  // namespace

double episode_likelihood(const AgentParams& params, const GridSpec& grid, const Episode& episode) {
  AgentModel agent(params, grid);
  return std::exp(episode_log_likelihood(agent, grid, episode));
}

double log_likelihood(const AgentParams& params, const GridSpec& grid, const std::vector<Episode>& episodes) {
  AgentModel agent(params, grid);
  double total = 0.0;
  for (const Episode& e : episodes) {
    total += episode_log_likelihood(agent, grid, e);
    if (total == kNegInf) break;
  }
  return total;
}

std::vector<double> score_hypotheses(const HypothesisGrid& hypotheses, const GridSpec& grid,
                                     const std::vector<Episode>& episodes, unsigned jobs) {
  const std::size_t n = hypotheses.size();
  std::vector<double> out(n, 0.0);
  // NonDiscounting agents ignore k, so only the first k level is evaluated.
  std::vector<std::size_t> work;
  std::vector<std::size_t> alias(n);
  const std::size_t k_count = hypotheses.k_levels.size();
  const std::size_t k_stride = n / (hypotheses.types.size() * k_count);
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = hypotheses.coordinates(i);
    if (hypotheses.types[c[HypothesisGrid::kTypeDigit]] == AgentType::NonDiscounting &&
        c[HypothesisGrid::kKDigit] != 0) {
      alias[i] = i - c[HypothesisGrid::kKDigit] * k_stride;
    } else {
      alias[i] = i;
      work.push_back(i);
    }
  }

  const int restaurants = grid.restaurant_count();
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    try {
      for (std::size_t w = next++; w < work.size() && !failed; w = next++) {
        const std::size_t i = work[w];
        out[i] = log_likelihood(hypotheses.params(i, restaurants), grid, episodes);
      }
    } catch (...) {
      if (!failed.exchange(true)) failure = std::current_exception();
    }
  };

  if (jobs == 0) jobs = std::max(1U, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(1, work.size())));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  for (std::size_t i = 0; i < n; ++i) out[i] = out[alias[i]];
  return out;
}

Posterior normalize_posterior(const HypothesisGrid& hypotheses, int restaurant_count,
                              std::vector<double> log_likelihoods) {
  Posterior post{hypotheses, restaurant_count, std::move(log_likelihoods), {}};
  const std::size_t n = post.log_likelihoods.size();
  std::vector<double> log_joint(n);
  double top = kNegInf;
  for (std::size_t i = 0; i < n; ++i) {
    log_joint[i] = post.log_likelihoods[i] + std::log(hypotheses.prior_weight(i));
    top = std::max(top, log_joint[i]);
  }
  if (top == kNegInf) throw DegenerateInferenceError("no hypothesis in the grid can produce the observed actions");
  post.weights.resize(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    post.weights[i] = std::exp(log_joint[i] - top);
    total += post.weights[i];
  }
  for (double& w : post.weights) w /= total;
  return post;
}

Posterior posterior(const HypothesisGrid& hypotheses, const GridSpec& grid, const std::vector<Episode>& episodes,
                    unsigned jobs) {
  return normalize_posterior(hypotheses, grid.restaurant_count(),
                             score_hypotheses(hypotheses, grid, episodes, jobs));
}

double event_probability(const Posterior& post, const Predicate& predicate) {
  double total = 0.0;
  for (std::size_t i = 0; i < post.weights.size(); ++i) {
    if (post.weights[i] > 0.0 && predicate(post.params(i))) total += post.weights[i];
  }
  return total;
}

double Matrix::total() const {
  double t = 0.0;
  for (const auto& row : values) {
    for (double v : row) t += v;
  }
  return t;
}

Matrix marginal2d(const Posterior& post, const Field& x, const Field& y, const std::optional<Predicate>& slice,
                  MatrixKind kind) {
  if (x.text() == y.text()) throw UnknownDimensionError("marginal dimensions must differ, got '" + x.text() + "' twice");
  const std::size_t n = post.weights.size();
  std::vector<double> xs(n), ys(n);
  std::vector<bool> keep(n);
  std::set<double> x_set, y_set;
  for (std::size_t i = 0; i < n; ++i) {
    const AgentParams p = post.params(i);
    keep[i] = !slice || (*slice)(p);
    if (!keep[i]) continue;
    xs[i] = x.value(p);
    ys[i] = y.value(p);
    x_set.insert(xs[i]);
    y_set.insert(ys[i]);
  }
  Matrix m;
  m.x_name = x.text();
  m.y_name = y.text();
  m.x_levels.assign(x_set.begin(), x_set.end());
  m.y_levels.assign(y_set.begin(), y_set.end());
  for (double v : m.x_levels) m.x_labels.push_back(x.label(v));
  for (double v : m.y_levels) m.y_labels.push_back(y.label(v));
  m.values.assign(m.x_levels.size(), std::vector<double>(m.y_levels.size(), 0.0));
  auto prior = m.values;
  auto index_of = [](const std::vector<double>& levels, double v) {
    return static_cast<std::size_t>(std::lower_bound(levels.begin(), levels.end(), v) - levels.begin());
  };
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    const std::size_t r = index_of(m.x_levels, xs[i]);
    const std::size_t c = index_of(m.y_levels, ys[i]);
    m.values[r][c] += post.weights[i];
    prior[r][c] += post.hypotheses.prior_weight(i);
  }
  if (kind == MatrixKind::Likelihood) {
    for (std::size_t r = 0; r < m.values.size(); ++r) {
      for (std::size_t c = 0; c < m.values[r].size(); ++c) {
        if (prior[r][c] > 0.0) m.values[r][c] /= prior[r][c];
      }
    }
  }
  const double total = m.total();
  if (total > 0.0) {
    for (auto& row : m.values) {
      for (double& v : row) v /= total;
    }
  }
  return m;
}

std::vector<std::pair<std::string, double>> property_likelihoods(const Posterior& post,
                                                                 const std::vector<PropertyPredicate>& properties) {
  const std::size_t n = post.log_likelihoods.size();
  double top = kNegInf;
  for (double ll : post.log_likelihoods) top = std::max(top, ll);
  if (top == kNegInf) throw DegenerateInferenceError("no hypothesis in the grid can produce the observed actions");

  std::vector<AgentParams> params;
  params.reserve(n);
  for (std::size_t i = 0; i < n; ++i) params.push_back(post.params(i));

  std::vector<std::pair<std::string, double>> out;
  double sum = 0.0;
  for (const PropertyPredicate& prop : properties) {
    double mass = 0.0, prior = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (!prop.test(params[i])) continue;
      const double w = post.hypotheses.prior_weight(i);
      prior += w;
      mass += w * std::exp(post.log_likelihoods[i] - top);
    }
    if (prior <= 0.0) throw EmptyPropertyError("property '" + prop.name + "' matches no hypothesis");
    out.emplace_back(prop.name, mass / prior);
    sum += mass / prior;
  }
  if (sum <= 0.0) throw DegenerateInferenceError("every property has zero likelihood");
  for (auto& [name, v] : out) v /= sum;
  return out;
}

std::vector<std::pair<std::string, double>> property_likelihoods(const HypothesisGrid& hypotheses,
                                                                 const GridSpec& grid,
                                                                 const std::vector<Episode>& episodes,
                                                                 const std::vector<PropertyPredicate>& properties,
                                                                 unsigned jobs) {
  return property_likelihoods(posterior(hypotheses, grid, episodes, jobs), properties);
}

}  // namespace invplan
