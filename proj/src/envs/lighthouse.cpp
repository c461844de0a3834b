#include "advlab/envs/lighthouse.hpp"

#include "advlab/diff/random.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace advlab::envs {
namespace {

// Corner knowledge categories of the 2D encoding.
constexpr int kUnseen = 0;
constexpr int kSeenEmpty = 1;
constexpr int kSeenGoal = 2;
constexpr int kVisibleGoal = 3;

}  // namespace

LighthouseEnv::LighthouseEnv(TaskSpec spec) : spec_(std::move(spec)) {
  if (spec_.family == Family::Lighthouse1D) {
    dims_ = 1;
  } else if (spec_.family == Family::Lighthouse2D) {
    dims_ = 2;
  } else {
    throw std::invalid_argument("LighthouseEnv: wrong family");
  }
}

LighthouseEnv::Point LighthouseEnv::corner(int index) const {
  Point p{0, 0};
  for (int d = 0; d < dims_; ++d) p[static_cast<std::size_t>(d)] = (index >> d & 1) ? half_width() : -half_width();
  return p;
}

int LighthouseEnv::corner_index(const Point& p) const {
  int index = 0;
  for (int d = 0; d < dims_; ++d) {
    if (p[static_cast<std::size_t>(d)] > 0) index |= 1 << d;
  }
  return index;
}

int LighthouseEnv::chebyshev(const Point& a, const Point& b) const {
  int m = 0;
  for (int d = 0; d < dims_; ++d) m = std::max(m, std::abs(a[static_cast<std::size_t>(d)] - b[static_cast<std::size_t>(d)]));
  return m;
}

void LighthouseEnv::update_closest() {
  for (int c = 0; c < num_corners(); ++c) {
    auto& slot = closest_[static_cast<std::size_t>(c)];
    slot = std::min(slot, chebyshev(position_, corner(c)));
  }
}

void LighthouseEnv::reset(std::uint64_t episode_seed) {
  Rng rng(episode_seed, 0x11647);
  reset_with_goal(static_cast<int>(rng.integer(0, num_corners())));
}

void LighthouseEnv::reset_with_goal(int corner_id) {
  if (corner_id < 0 || corner_id >= num_corners()) throw std::out_of_range("LighthouseEnv: bad corner");
  goal_ = corner(corner_id);
  position_ = {0, 0};
  steps_ = 0;
  done_ = false;
  closest_.fill(1 << 30);
  trajectory_.assign(1, position_);
  actions_.clear();
  update_closest();
}

LighthouseEnv::Point LighthouseEnv::action_delta(int action) const {
  if (dims_ == 1) {
    if (action == 0) return {-1, 0};
    if (action == 1) return {1, 0};
  } else {
    switch (action) {
      case 0: return {0, 1};
      case 1: return {0, -1};
      case 2: return {-1, 0};
      case 3: return {1, 0};
      default: break;
    }
  }
  throw std::out_of_range("LighthouseEnv: invalid action");
}

StepResult LighthouseEnv::step(int action) {
  if (done_) throw std::logic_error("LighthouseEnv: step after episode end");
  const Point delta = action_delta(action);
  for (int d = 0; d < dims_; ++d) {
    auto& x = position_[static_cast<std::size_t>(d)];
    x = std::clamp(x + delta[static_cast<std::size_t>(d)], -half_width(), half_width());
  }
  ++steps_;
  trajectory_.push_back(position_);
  actions_.push_back(action);
  update_closest();

  StepResult r;
  if (position_ == goal_) {
    r.reward = 0.99;
    r.done = true;
  } else if (steps_ >= spec_.max_episode_steps) {
    r.reward = -1.0;
    r.done = true;
  } else {
    r.reward = -0.01;
  }
  done_ = r.done;
  return r;
}

Observation LighthouseEnv::observe() const { return observe_with_radius(spec_.view_radius); }

Observation LighthouseEnv::observe_with_radius(int radius) const {
  Observation o;
  o.legal = (ActionMask{1} << num_actions()) - 1;
  if (!actions_.empty()) o.last_action = actions_.back();

  if (dims_ == 1) {
    // Per-step view tuples: 2 marks the goal corner, 1 a non-goal corner.
    o.encoding = Encoding::Lighthouse1D;
    const int n = half_width();
    o.tokens.reserve(trajectory_.size() * static_cast<std::size_t>(2 * radius + 2) + 1);
    o.tokens.push_back(static_cast<std::int32_t>(trajectory_.size()));
    for (const Point& p : trajectory_) {
      for (int k = -radius; k <= radius; ++k) {
        const int cell = p[0] + k;
        std::int32_t code = 0;
        if (cell == goal_[0]) {
          code = 2;
        } else if (cell == n || cell == -n) {
          code = 1;
        }
        o.tokens.push_back(code);
      }
    }
    for (std::size_t q = 1; q < trajectory_.size(); ++q) {
      o.tokens.push_back(trajectory_[q][0] - trajectory_[q - 1][0]);
    }
    return o;
  }

  o.encoding = Encoding::Lighthouse2D;
  int index = 0;
  for (int c = 0; c < 4; ++c) {
    int status = kUnseen;
    const bool is_goal = corner(c) == goal_;
    if (closest_approach(c) <= radius) status = is_goal ? kSeenGoal : kSeenEmpty;
    if (is_goal && chebyshev(position_, goal_) <= radius) status = kVisibleGoal;
    index = index * 4 + status;
  }
  const std::size_t n_actions = actions_.size();
  const int prev1 = n_actions >= 1 ? actions_[n_actions - 1] + 1 : 0;
  const int prev2 = n_actions >= 2 ? actions_[n_actions - 2] + 1 : 0;
  index = (index * 5 + prev1) * 5 + prev2;
  o.tokens = {index};
  return o;
}

std::string LighthouseEnv::state_bytes() const {
  std::string s;
  auto put = [&s](int v) { s.append(reinterpret_cast<const char*>(&v), sizeof(v)); };
  put(dims_);
  put(goal_[0]);
  put(goal_[1]);
  put(steps_);
  for (const Point& p : trajectory_) {
    put(p[0]);
    put(p[1]);
  }
  return s;
}

std::vector<std::uint8_t> lighthouse2d_binary(const Observation& obs) {
  if (obs.encoding != Encoding::Lighthouse2D || obs.tokens.size() != 1) {
    throw std::invalid_argument("lighthouse2d_binary: not a 2D lighthouse observation");
  }
  std::vector<std::uint8_t> v(kLighthouse2DEncodingSize, 0);
  v.at(static_cast<std::size_t>(obs.tokens[0])) = 1;
  return v;
}

double lighthouse1d_optimal_length(int half_width, int view_radius) {
  return 0.5 * half_width + 0.5 * (3.0 * half_width - 2.0 * view_radius);
}

}  // namespace advlab::envs
