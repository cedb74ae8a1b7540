#include "invplan/world.hpp"

#include "invplan/error.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace invplan {

std::string_view to_string(Action a) {
  switch (a) {
    case Action::North: return "N";
    case Action::South: return "S";
    case Action::East: return "E";
    case Action::West: return "W";
    case Action::Proceed: return "P";
  }
  return "?";
}

std::optional<Action> parse_action(std::string_view text) {
  if (text == "N") return Action::North;
  if (text == "S") return Action::South;
  if (text == "E") return Action::East;
  if (text == "W") return Action::West;
  if (text == "P") return Action::Proceed;
  return std::nullopt;
}

Cell step(Cell c, Action a) {
  switch (a) {
    case Action::North: return {c.x, c.y - 1};
    case Action::South: return {c.x, c.y + 1};
    case Action::East: return {c.x + 1, c.y};
    case Action::West: return {c.x - 1, c.y};
    case Action::Proceed: return c;
  }
  return c;
}

GridSpec::GridSpec(int width, int height, std::set<Cell> walls, std::vector<Restaurant> restaurants,
                   Cell start, int horizon)
    : width_(width),
      height_(height),
      walls_(std::move(walls)),
      restaurants_(std::move(restaurants)),
      start_(start),
      horizon_(horizon) {
  if (width_ > 0 && height_ > 0) {
    layout_.assign(static_cast<std::size_t>(width_) * height_, -1);
    for (const Cell& w : walls_) {
      if (in_bounds(w)) layout_[w.y * width_ + w.x] = -2;
    }
    for (std::size_t i = 0; i < restaurants_.size(); ++i) {
      const Cell c = restaurants_[i].cell;
      if (in_bounds(c)) layout_[c.y * width_ + c.x] = static_cast<std::int16_t>(i);
    }
  }
}

bool GridSpec::is_wall(Cell c) const {
  return in_bounds(c) && layout_[c.y * width_ + c.x] == -2;
}

int GridSpec::restaurant_at(Cell c) const {
  if (!in_bounds(c)) return -1;
  const int v = layout_[c.y * width_ + c.x];
  return v >= 0 ? v : -1;
}

int GridSpec::find_restaurant(std::string_view id) const {
  for (std::size_t i = 0; i < restaurants_.size(); ++i) {
    if (restaurants_[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int GridSpec::restaurant_index(std::string_view id) const {
  const int i = find_restaurant(id);
  if (i < 0) throw std::out_of_range("unknown restaurant '" + std::string(id) + "'");
  return i;
}

bool GridSpec::operator==(const GridSpec& other) const {
  return width_ == other.width_ && height_ == other.height_ && walls_ == other.walls_ &&
         restaurants_ == other.restaurants_ && start_ == other.start_ && horizon_ == other.horizon_;
}

WorldConfig WorldConfig::all_open(const GridSpec& grid) {
  const int n = grid.restaurant_count();
  return WorldConfig{n >= 32 ? ~0U : ((1U << n) - 1U)};
}

WorldConfig WorldConfig::with(int restaurant, Status s) const {
  WorldConfig c = *this;
  if (s == Status::Open) {
    c.open_mask |= (1U << restaurant);
  } else {
    c.open_mask &= ~(1U << restaurant);
  }
  return c;
}

std::string describe(const WorldConfig& config, const GridSpec& grid) {
  std::ostringstream out;
  out << '{';
  for (int r = 0; r < grid.restaurant_count(); ++r) {
    if (r) out << ", ";
    out << grid.restaurants()[r].id << ": " << (config.is_open(r) ? "Open" : "Closed");
  }
  out << '}';
  return out.str();
}

std::uint32_t State::key() const {
  const auto ph = static_cast<std::uint32_t>(phase);
  const auto r = static_cast<std::uint32_t>(restaurant + 1);
  return (static_cast<std::uint32_t>(position.x) & 0xFF) |
         ((static_cast<std::uint32_t>(position.y) & 0xFF) << 8) |
         ((static_cast<std::uint32_t>(time) & 0xFF) << 16) | (ph << 24) | (r << 26);
}

std::string describe(const State& s, const GridSpec& grid) {
  std::ostringstream out;
  out << "(" << s.position.x << "," << s.position.y << ") t=" << s.time << ' ';
  switch (s.phase) {
    case Phase::Moving: out << "Moving"; break;
    case Phase::Arrived: out << "Arrived(" << grid.restaurants().at(s.restaurant).id << ')'; break;
    case Phase::Eating: out << "Eating(" << grid.restaurants().at(s.restaurant).id << ')'; break;
    case Phase::Done: out << "Done"; break;
  }
  return out.str();
}

bool ActionSet::contains(Action a) const { return index_of(a) >= 0; }

int ActionSet::index_of(Action a) const {
  for (std::size_t i = 0; i < size_; ++i) {
    if (items_[i] == a) return static_cast<int>(i);
  }
  return -1;
}

ActionSet available_actions(const State& state, const GridSpec& grid, std::uint32_t passable_mask) {
  ActionSet out;
  switch (state.phase) {
    case Phase::Arrived:
    case Phase::Eating:
      out.push(Action::Proceed);
      return out;
    case Phase::Done:
      throw IllegalActionError("no actions are available in a Done state");
    case Phase::Moving:
      break;
  }
  for (Action a : kMoves) {
    const Cell dest = step(state.position, a);
    if (!grid.in_bounds(dest) || grid.is_wall(dest)) continue;
    const int r = grid.restaurant_at(dest);
    if (r >= 0 && !((passable_mask >> r) & 1U)) continue;
    out.push(a);
  }
  if (out.empty()) {
    throw ValidationError({"dead-end reachable state at " + describe(state, grid)});
  }
  return out;
}

ActionSet available_actions(const State& state, const GridSpec& grid, const WorldConfig& config) {
  return available_actions(state, grid, config.open_mask);
}

State transition(const State& state, Action action, const GridSpec& grid, const WorldConfig& config) {
  if (state.done()) throw IllegalActionError("transition from a Done state");
  State next = state;
  switch (state.phase) {
    case Phase::Moving: {
      if (action == Action::Proceed) throw IllegalActionError("Proceed while moving");
      const Cell dest = step(state.position, action);
      if (!grid.in_bounds(dest) || grid.is_wall(dest)) {
        throw IllegalActionError("move " + std::string(to_string(action)) + " from " +
                                 describe(state, grid) + " is blocked");
      }
      const int r = grid.restaurant_at(dest);
      if (r >= 0 && !config.is_open(r)) {
        throw IllegalActionError("move into closed restaurant " + grid.restaurants()[r].id);
      }
      next.position = dest;
      next.time = state.time + 1;
      if (r >= 0) {
        next.phase = Phase::Arrived;
        next.restaurant = r;
      } else if (next.time >= grid.horizon()) {
        next.phase = Phase::Done;
      }
      return next;
    }
    case Phase::Arrived:
      if (action != Action::Proceed) throw IllegalActionError("only Proceed is legal after arriving");
      // The delayed step is cut off once the horizon is used up.
      if (state.time + 1 > grid.horizon()) {
        next.phase = Phase::Done;
      } else {
        next.phase = Phase::Eating;
        next.time = state.time + 1;
      }
      return next;
    case Phase::Eating:
      if (action != Action::Proceed) throw IllegalActionError("only Proceed is legal while eating");
      next.phase = Phase::Done;
      return next;
    case Phase::Done:
      break;
  }
  throw IllegalActionError("transition from a Done state");
}

double utility(const State& state, Action /*action*/, const UtilityParams& u) {
  switch (state.phase) {
    case Phase::Moving: return u.time_cost;
    case Phase::Arrived: return u.immediate[state.restaurant];
    case Phase::Eating: return u.delayed[state.restaurant];
    case Phase::Done: break;
  }
  throw IllegalActionError("utility of a Done state");
}

std::vector<State> reachable_states(const GridSpec& grid, const WorldConfig& config, const State& start) {
  std::vector<State> order;
  if (start.done()) return order;
  std::unordered_set<std::uint32_t> seen;
  std::deque<State> queue{start};
  seen.insert(start.key());
  while (!queue.empty()) {
    const State s = queue.front();
    queue.pop_front();
    order.push_back(s);
    for (Action a : available_actions(s, grid, config)) {
      const State n = transition(s, a, grid, config);
      if (n.done() || !seen.insert(n.key()).second) continue;
      queue.push_back(n);
    }
  }
  return order;
}

std::vector<std::string> validate(const GridSpec& grid, const std::vector<WorldConfig>& configs) {
  std::vector<std::string> errors;
  auto cell_str = [](Cell c) {
    return "[" + std::to_string(c.x) + ", " + std::to_string(c.y) + "]";
  };
  if (grid.width() <= 0 || grid.height() <= 0) errors.push_back("width and height must be positive");
  if (grid.width() > 255 || grid.height() > 255) errors.push_back("width and height must be below 256");
  if (grid.horizon() < 1) errors.push_back("horizon must be at least 1");
  if (grid.horizon() > 250) errors.push_back("horizon must be at most 250");
  if (grid.restaurant_count() > GridSpec::kMaxRestaurants) errors.push_back("too many restaurants");
  for (const Cell& w : grid.walls()) {
    if (!grid.in_bounds(w)) errors.push_back("wall " + cell_str(w) + " lies outside the grid");
  }
  if (!grid.in_bounds(grid.start())) errors.push_back("start " + cell_str(grid.start()) + " lies outside the grid");
  if (grid.walls().contains(grid.start())) errors.push_back("start " + cell_str(grid.start()) + " is a wall");
  std::set<Cell> used;
  std::set<std::string> ids;
  for (const Restaurant& r : grid.restaurants()) {
    if (r.id.empty()) errors.push_back("restaurant with empty id");
    if (!ids.insert(r.id).second) errors.push_back("duplicate restaurant id '" + r.id + "'");
    if (!grid.in_bounds(r.cell)) errors.push_back("restaurant " + r.id + " lies outside the grid");
    if (grid.walls().contains(r.cell)) errors.push_back("restaurant " + r.id + " is on a wall");
    if (r.cell == grid.start()) errors.push_back("restaurant " + r.id + " is on the start cell");
    if (!used.insert(r.cell).second) errors.push_back("restaurant " + r.id + " shares a cell");
  }
  if (!errors.empty()) return errors;

  for (const WorldConfig& config : configs) {
    try {
      reachable_states(grid, config, State::initial(grid.start()));
    } catch (const ValidationError& e) {
      for (const auto& p : e.problems()) errors.push_back(p + " under " + describe(config, grid));
    }
  }
  return errors;
}

}  // namespace invplan
