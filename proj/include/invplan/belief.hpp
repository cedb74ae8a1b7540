#pragma once

#include "invplan/world.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace invplan {

// Noise-free sighting of the restaurants within Manhattan distance 1.
struct Observation {
  std::uint32_t seen_mask = 0;
  std::uint32_t open_mask = 0;  // only bits inside seen_mask are meaningful

  bool empty() const { return seen_mask == 0; }
  bool consistent_with(const WorldConfig& c) const {
    return (c.open_mask & seen_mask) == (open_mask & seen_mask);
  }
  std::uint64_t key() const { return (static_cast<std::uint64_t>(seen_mask) << 32) | (open_mask & seen_mask); }
  bool operator==(const Observation& o) const { return key() == o.key(); }
};

Observation observe(const GridSpec& grid, const WorldConfig& config, Cell position);

// Finite weight table over world configurations. Entries are kept sorted by
// configuration and carry strictly positive weight.
class Belief {
 public:
  using Entry = std::pair<WorldConfig, double>;

  Belief() = default;
  // Drops non-positive weights and normalizes. Throws std::invalid_argument if no
  // mass remains or a weight is negative or non-finite.
  explicit Belief(std::vector<Entry> weights);
  static Belief point_mass(const WorldConfig& config);

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool is_point_mass() const { return entries_.size() == 1; }
  double weight(const WorldConfig& config) const;
  // Probability that restaurant `r` is open.
  double prob_open(int restaurant) const;
  // Union of open bits across the support.
  std::uint32_t possibly_open_mask() const;

  // Support plus weights rounded to 12 decimals.
  std::vector<std::pair<std::uint32_t, std::int64_t>> fingerprint() const;

  bool operator==(const Belief&) const = default;

 private:
  std::vector<Entry> entries_;
};

// Independent per-restaurant open probabilities over the restaurants listed in
// `open_probs` (restaurant index, probability); unlisted restaurants take their
// status from `base`.
Belief independent_belief(const WorldConfig& base, const std::vector<std::pair<int, double>>& open_probs);

// Zeroes configurations contradicting `obs` and renormalizes. An observation that
// removes nothing returns the belief unchanged. Throws ImpossibleObservationError
// when no configuration survives.
Belief belief_update(const Belief& belief, const Observation& obs);

}  // namespace invplan
