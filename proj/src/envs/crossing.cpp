#include "advlab/envs/crossing.hpp"

#include "advlab/diff/random.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <stdexcept>

namespace advlab::envs {
namespace {

constexpr int kGenerationAttempts = 64;

bool blocks(Cell c) { return c == Cell::Wall || c == Cell::Lava; }

CrossingGrid generate_once(int size, int num_obstacles, Cell obstacle, Rng& rng) {
  CrossingGrid g;
  g.size = size;
  g.cells.assign(static_cast<std::size_t>(size * size), Cell::Empty);
  for (int i = 0; i < size; ++i) {
    g.at(i, 0) = g.at(i, size - 1) = g.at(0, i) = g.at(size - 1, i) = Cell::Wall;
  }
  g.at(size - 2, size - 2) = Cell::Goal;

  // Candidate rivers: (is_row, coordinate) at even positions strictly inside.
  std::vector<std::pair<bool, int>> candidates;
  for (int k = 2; k < size - 2; k += 2) candidates.emplace_back(true, k);
  for (int k = 2; k < size - 2; k += 2) candidates.emplace_back(false, k);
  rng.shuffle(candidates);
  candidates.resize(static_cast<std::size_t>(num_obstacles));

  std::vector<int> rows, cols;
  for (auto [is_row, k] : candidates) (is_row ? rows : cols).push_back(k);
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  for (int yr : rows)
    for (int x = 1; x < size - 1; ++x) g.at(x, yr) = obstacle;
  for (int xc : cols)
    for (int y = 1; y < size - 1; ++y) g.at(xc, y) = obstacle;

  // A monotone route through the rooms decides where each gap goes.
  std::vector<bool> route;  // true = cross the next row river (move down)
  route.insert(route.end(), rows.size(), true);
  route.insert(route.end(), cols.size(), false);
  rng.shuffle(route);

  std::vector<int> row_limits{0};
  row_limits.insert(row_limits.end(), rows.begin(), rows.end());
  row_limits.push_back(size - 1);
  std::vector<int> col_limits{0};
  col_limits.insert(col_limits.end(), cols.begin(), cols.end());
  col_limits.push_back(size - 1);

  std::size_t room_r = 0, room_c = 0;
  for (bool down : route) {
    if (down) {
      const int yr = row_limits[room_r + 1];
      const int x = static_cast<int>(rng.integer(col_limits[room_c] + 1, col_limits[room_c + 1]));
      g.at(x, yr) = Cell::Empty;
      ++room_r;
    } else {
      const int xc = col_limits[room_c + 1];
      const int y = static_cast<int>(rng.integer(row_limits[room_r] + 1, row_limits[room_r + 1]));
      g.at(xc, y) = Cell::Empty;
      ++room_c;
    }
  }
  return g;
}

std::int32_t type_code(Cell c) {
  switch (c) {
    case Cell::Empty: return kTypeEmpty;
    case Cell::Wall: return kTypeWall;
    case Cell::Lava: return kTypeLava;
    case Cell::Goal: return kTypeGoal;
  }
  return kTypeUnseen;
}

std::int32_t color_code(Cell c) {
  switch (c) {
    case Cell::Empty: return kColorNone;
    case Cell::Wall: return kColorGrey;
    case Cell::Lava: return kColorRed;
    case Cell::Goal: return kColorGreen;
  }
  return kColorNone;
}

}  // namespace

CrossingGrid crossing_generate(int size, int num_obstacles, Cell obstacle, std::uint64_t seed) {
  if (size < 5 || size % 2 == 0) throw std::invalid_argument("crossing_generate: size must be odd and >= 5");
  if (obstacle != Cell::Wall && obstacle != Cell::Lava) throw std::invalid_argument("crossing_generate: bad obstacle");
  const int per_axis = (size - 3) / 2;
  if (num_obstacles < 0 || num_obstacles > 2 * per_axis) {
    throw std::invalid_argument("crossing_generate: obstacle count does not fit the grid");
  }
  Rng rng(seed, 0xC2055);
  for (int attempt = 0; attempt < kGenerationAttempts; ++attempt) {
    CrossingGrid g = generate_once(size, num_obstacles, obstacle, rng);
    if (crossing_reachable(g)) return g;
  }
  throw std::runtime_error("crossing_generate: no reachable layout found");
}

bool crossing_reachable(const CrossingGrid& g) {
  std::vector<char> seen(g.cells.size(), 0);
  std::deque<std::pair<int, int>> queue{{1, 1}};
  if (blocks(g.at(1, 1))) return false;
  seen[static_cast<std::size_t>(g.size + 1)] = 1;
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    if (g.at(x, y) == Cell::Goal) return true;
    for (int d = 0; d < 4; ++d) {
      const int nx = x + kDx[d], ny = y + kDy[d];
      if (!g.inside(nx, ny) || blocks(g.at(nx, ny))) continue;
      auto& s = seen[static_cast<std::size_t>(ny * g.size + nx)];
      if (s) continue;
      s = 1;
      queue.emplace_back(nx, ny);
    }
  }
  return false;
}

std::vector<int> heading_distances(const CrossingGrid& g) {
  const int n = g.size;
  std::vector<int> dist(static_cast<std::size_t>(n * n * 4), -1);
  auto idx = [n](int x, int y, int h) { return static_cast<std::size_t>((y * n + x) * 4 + h); };
  std::deque<std::array<int, 3>> queue;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x)
      if (g.at(x, y) == Cell::Goal)
        for (int h = 0; h < 4; ++h) {
          dist[idx(x, y, h)] = 0;
          queue.push_back({x, y, h});
        }

  // Reverse search: a predecessor must be a non-terminal open cell.
  while (!queue.empty()) {
    const auto [x, y, h] = queue.front();
    queue.pop_front();
    const int d = dist[idx(x, y, h)];
    auto relax = [&](int px, int py, int ph) {
      if (!g.inside(px, py) || g.at(px, py) != Cell::Empty) return;
      auto& slot = dist[idx(px, py, ph)];
      if (slot >= 0) return;
      slot = d + 1;
      queue.push_back({px, py, ph});
    };
    relax(x - kDx[h], y - kDy[h], h);
    if (g.at(x, y) == Cell::Empty) {
      relax(x, y, (h + 1) % 4);  // turned left into h
      relax(x, y, (h + 3) % 4);  // turned right into h
    }
  }
  return dist;
}

CrossingEnv::CrossingEnv(TaskSpec spec) : spec_(std::move(spec)) {
  if (!spec_.is_crossing()) throw std::invalid_argument("CrossingEnv: wrong family");
}

void CrossingEnv::set_grid(CrossingGrid grid) {
  grid_ = std::make_shared<const CrossingGrid>(std::move(grid));
  distances_ = std::make_shared<const std::vector<int>>(heading_distances(*grid_));
}

void CrossingEnv::reset(std::uint64_t episode_seed) {
  const Cell obstacle = spec_.family == Family::LavaCrossing ? Cell::Lava : Cell::Wall;
  set_grid(crossing_generate(spec_.grid_size, spec_.num_obstacles, obstacle, episode_seed));
  x_ = 1;
  y_ = 1;
  heading_ = 0;
  steps_ = 0;
  done_ = false;
  success_ = false;
  died_ = false;
  switched_on_ = false;
  flash_ = false;
}

void CrossingEnv::place_agent(int x, int y, int heading) {
  if (!grid_ || !grid_->inside(x, y) || heading < 0 || heading > 3) throw std::out_of_range("place_agent");
  x_ = x;
  y_ = y;
  heading_ = heading;
}

bool CrossingEnv::lights_on() const {
  switch (spec_.variant) {
    case Variant::SwitchOnce: return switched_on_;
    case Variant::SwitchFaulty: return flash_;
    default: return true;
  }
}

StepResult CrossingEnv::step(int action) {
  if (done_) throw std::logic_error("CrossingEnv: step after episode end");
  if (action < 0 || action >= num_actions()) throw std::logic_error("CrossingEnv: invalid action");
  ++steps_;
  flash_ = false;
  StepResult r;
  switch (action) {
    case kTurnLeft:
      heading_ = (heading_ + 3) % 4;
      break;
    case kTurnRight:
      heading_ = (heading_ + 1) % 4;
      break;
    case kForward: {
      const int nx = x_ + kDx[heading_], ny = y_ + kDy[heading_];
      const Cell c = grid_->at(nx, ny);
      if (c == Cell::Wall) break;
      x_ = nx;
      y_ = ny;
      if (c == Cell::Lava) {
        died_ = true;
        r.done = true;
      } else if (c == Cell::Goal) {
        success_ = true;
        r.done = true;
        r.reward = 1.0 - static_cast<double>(steps_) / spec_.max_episode_steps;
      }
      break;
    }
    case kSwitch:
      if (spec_.variant == Variant::SwitchOnce) switched_on_ = true;
      if (spec_.variant == Variant::SwitchFaulty) flash_ = true;
      break;
  }
  if (!r.done && steps_ >= spec_.max_episode_steps) r.done = true;
  done_ = r.done;
  return r;
}

Observation CrossingEnv::observe_lit() const {
  Observation o;
  o.encoding = Encoding::CrossingGrid;
  o.legal = (ActionMask{1} << num_actions()) - 1;
  o.tokens.assign(kViewSize * kViewSize * 3, 0);
  const int right = (heading_ + 1) % 4;
  for (int vy = 0; vy < kViewSize; ++vy) {
    const int ahead = kViewSize - 1 - vy;
    for (int vx = 0; vx < kViewSize; ++vx) {
      const int lateral = vx - kViewSize / 2;
      const int wx = x_ + ahead * kDx[heading_] + lateral * kDx[right];
      const int wy = y_ + ahead * kDy[heading_] + lateral * kDy[right];
      const std::size_t base = static_cast<std::size_t>((vy * kViewSize + vx) * 3);
      if (!grid_->inside(wx, wy)) {
        o.tokens[base] = kTypeUnseen;
        continue;
      }
      const Cell c = grid_->at(wx, wy);
      o.tokens[base] = type_code(c);
      o.tokens[base + 1] = color_code(c);
      o.tokens[base + 2] = kStateNone;
    }
  }
  return o;
}

Observation CrossingEnv::observe() const { return apply_darkness(observe_lit(), lights_on()); }

Observation apply_darkness(const Observation& obs, bool lights_on) {
  if (lights_on) return obs;
  if (obs.encoding != Encoding::CrossingGrid) throw std::invalid_argument("apply_darkness: not a crossing observation");
  Observation dark = obs;
  for (std::size_t i = 0; i + 2 < dark.tokens.size(); i += 3) {
    dark.tokens[i] = kTypeDark;
    dark.tokens[i + 1] = kColorDark;
    dark.tokens[i + 2] = kStateDark;
  }
  return dark;
}

int CrossingEnv::distance_to_goal() const { return distance_to_goal(x_, y_, heading_); }

int CrossingEnv::distance_to_goal(int x, int y, int heading) const {
  return (*distances_)[static_cast<std::size_t>((y * grid_->size + x) * 4 + heading)];
}

std::string CrossingEnv::state_bytes() const {
  std::string s;
  s.reserve(grid_->cells.size() + 32);
  s.push_back(static_cast<char>(grid_->size));
  for (Cell c : grid_->cells) s.push_back(static_cast<char>('0' + static_cast<int>(c)));
  auto put = [&s](int v) { s.append(reinterpret_cast<const char*>(&v), sizeof(v)); };
  put(x_);
  put(y_);
  put(heading_);
  put(steps_);
  s.push_back(static_cast<char>(done_ | success_ << 1 | died_ << 2 | switched_on_ << 3 | flash_ << 4));
  return s;
}

}  // namespace advlab::envs
