#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace invplan {

struct Cell {
  int x = 0;
  int y = 0;
  auto operator<=>(const Cell&) const = default;
};

inline int manhattan(Cell a, Cell b) {
  return (a.x > b.x ? a.x - b.x : b.x - a.x) + (a.y > b.y ? a.y - b.y : b.y - a.y);
}

// y grows downwards: North is y-1.
enum class Action : std::uint8_t { North, South, East, West, Proceed };

inline constexpr std::array<Action, 4> kMoves = {Action::North, Action::South, Action::East,
                                                 Action::West};

std::string_view to_string(Action a);
std::optional<Action> parse_action(std::string_view text);
Cell step(Cell c, Action a);

enum class Status : std::uint8_t { Open, Closed };

struct Restaurant {
  std::string id;
  Cell cell;
  bool operator==(const Restaurant&) const = default;
};

// Geometry of one decision problem. Restaurants are addressed by their index in
// `restaurants()` everywhere inside the library; ids only matter at the edges.
class GridSpec {
 public:
  static constexpr int kMaxRestaurants = 30;

  GridSpec() = default;
  GridSpec(int width, int height, std::set<Cell> walls, std::vector<Restaurant> restaurants,
           Cell start, int horizon);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::set<Cell>& walls() const { return walls_; }
  const std::vector<Restaurant>& restaurants() const { return restaurants_; }
  int restaurant_count() const { return static_cast<int>(restaurants_.size()); }
  Cell start() const { return start_; }
  int horizon() const { return horizon_; }

  bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
  bool is_wall(Cell c) const;
  // Index of the restaurant occupying `c`, or -1.
  int restaurant_at(Cell c) const;
  // Index of restaurant `id`, or -1.
  int find_restaurant(std::string_view id) const;
  // Throws std::out_of_range for unknown ids.
  int restaurant_index(std::string_view id) const;

  bool operator==(const GridSpec& other) const;

 private:
  int width_ = 0;
  int height_ = 0;
  std::set<Cell> walls_;
  std::vector<Restaurant> restaurants_;
  Cell start_;
  int horizon_ = 1;
  // -2 wall, -1 free, otherwise restaurant index. Out-of-bounds entries are skipped.
  std::vector<std::int16_t> layout_;
};

// Latent open/closed status of every restaurant, one bit per restaurant index.
struct WorldConfig {
  std::uint32_t open_mask = 0;

  static WorldConfig all_open(const GridSpec& grid);
  bool is_open(int restaurant) const { return (open_mask >> restaurant) & 1U; }
  Status status(int restaurant) const { return is_open(restaurant) ? Status::Open : Status::Closed; }
  WorldConfig with(int restaurant, Status s) const;

  auto operator<=>(const WorldConfig&) const = default;
};

std::string describe(const WorldConfig& config, const GridSpec& grid);

struct UtilityParams {
  std::vector<double> immediate;  // by restaurant index
  std::vector<double> delayed;
  double time_cost = 0.0;
  bool operator==(const UtilityParams&) const = default;
};

enum class Phase : std::uint8_t { Moving, Arrived, Eating, Done };

struct State {
  Cell position;
  int time = 0;
  Phase phase = Phase::Moving;
  int restaurant = -1;  // set for Arrived and Eating

  static State initial(Cell position) { return State{position, 0, Phase::Moving, -1}; }
  bool done() const { return phase == Phase::Done; }
  // Dense 32-bit encoding; requires coordinates and time below 256.
  std::uint32_t key() const;

  bool operator==(const State&) const = default;
};

std::string describe(const State& s, const GridSpec& grid);

class ActionSet {
 public:
  void push(Action a) { items_[size_++] = a; }
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  Action operator[](std::size_t i) const { return items_[i]; }
  const Action* begin() const { return items_.data(); }
  const Action* end() const { return items_.data() + size_; }
  bool contains(Action a) const;
  int index_of(Action a) const;

 private:
  std::array<Action, 4> items_{};
  std::size_t size_ = 0;
};

// Moves are blocked by walls, the grid edge and restaurants whose bit is clear in
// `passable_mask`. Used directly by the belief planner with the union of support configs.
ActionSet available_actions(const State& state, const GridSpec& grid, std::uint32_t passable_mask);
ActionSet available_actions(const State& state, const GridSpec& grid, const WorldConfig& config);

State transition(const State& state, Action action, const GridSpec& grid, const WorldConfig& config);

double utility(const State& state, Action action, const UtilityParams& u);

// Non-Done states reachable from `start` under `config`, in breadth-first order.
std::vector<State> reachable_states(const GridSpec& grid, const WorldConfig& config, const State& start);

// Empty iff the grid invariants hold and no reachable Moving state is a dead end
// under any of `configs`.
std::vector<std::string> validate(const GridSpec& grid, const std::vector<WorldConfig>& configs);

}  // namespace invplan
