#include "invplan/belief.hpp"

#include "invplan/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace invplan {

Observation observe(const GridSpec& grid, const WorldConfig& config, Cell position) {
  Observation obs;
  for (int r = 0; r < grid.restaurant_count(); ++r) {
    if (manhattan(grid.restaurants()[r].cell, position) <= 1) {
      obs.seen_mask |= 1U << r;
      if (config.is_open(r)) obs.open_mask |= 1U << r;
    }
  }
  return obs;
}

Belief::Belief(std::vector<Entry> weights) {
  double total = 0.0;
  for (const auto& [config, w] : weights) {
    if (!std::isfinite(w) || w < 0.0) throw std::invalid_argument("belief weights must be finite and non-negative");
    if (w > 0.0) {
      entries_.emplace_back(config, w);
      total += w;
    }
  }
  if (entries_.empty()) throw std::invalid_argument("belief has no mass");
  std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < entries_.size(); ++i) {
    if (entries_[i].first == entries_[i - 1].first) throw std::invalid_argument("belief lists a configuration twice");
  }
  for (auto& e : entries_) e.second /= total;
}

Belief Belief::point_mass(const WorldConfig& config) { return Belief({{config, 1.0}}); }

double Belief::weight(const WorldConfig& config) const {
  for (const auto& [c, w] : entries_) {
    if (c == config) return w;
  }
  return 0.0;
}

double Belief::prob_open(int restaurant) const {
  double p = 0.0;
  for (const auto& [c, w] : entries_) {
    if (c.is_open(restaurant)) p += w;
  }
  return p;
}

std::uint32_t Belief::possibly_open_mask() const {
  std::uint32_t m = 0;
  for (const auto& e : entries_) m |= e.first.open_mask;
  return m;
}

std::vector<std::pair<std::uint32_t, std::int64_t>> Belief::fingerprint() const {
  std::vector<std::pair<std::uint32_t, std::int64_t>> fp;
  fp.reserve(entries_.size());
  for (const auto& [c, w] : entries_) fp.emplace_back(c.open_mask, std::llround(w * 1e12));
  return fp;
}

Belief independent_belief(const WorldConfig& base, const std::vector<std::pair<int, double>>& open_probs) {
  std::vector<Belief::Entry> out{{base, 1.0}};
  for (const auto& [r, p] : open_probs) {
    std::vector<Belief::Entry> next;
    for (const auto& [c, w] : out) {
      next.emplace_back(c.with(r, Status::Open), w * p);
      next.emplace_back(c.with(r, Status::Closed), w * (1.0 - p));
    }
    out = std::move(next);
  }
  return Belief(std::move(out));
}

Belief belief_update(const Belief& belief, const Observation& obs) {
  if (obs.empty()) return belief;
  std::vector<Belief::Entry> kept;
  kept.reserve(belief.entries().size());
  for (const auto& e : belief.entries()) {
    if (obs.consistent_with(e.first)) kept.push_back(e);
  }
  if (kept.size() == belief.entries().size()) return belief;
  if (kept.empty()) throw ImpossibleObservationError("observation contradicts every configuration in the belief");
  return Belief(std::move(kept));
}

}  // namespace invplan
