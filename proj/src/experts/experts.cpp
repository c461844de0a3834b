#include "advlab/experts/experts.hpp"

#include "advlab/envs/crossing.hpp"
#include "advlab/envs/lighthouse.hpp"
#include "advlab/envs/poisoned_doors.hpp"

#include <cstdlib>
#include <stdexcept>

namespace advlab::experts {
namespace {

template <typename T>
const T& as(const Env& env, const char* who) {
  const auto* e = dynamic_cast<const T*>(&env);
  if (e == nullptr) throw std::invalid_argument(std::string(who) + ": wrong environment type");
  if (e->done()) throw std::logic_error(std::string(who) + ": queried on a terminal state");
  return *e;
}

// 2D move that reduces the larger remaining offset (x wins ties; positive
// directions are up/right).
int step_towards_2d(int dx, int dy) {
  if (dx == 0 && dy == 0) throw std::logic_error("lighthouse expert: no displacement");
  if (std::abs(dx) >= std::abs(dy)) return dx > 0 ? 3 : 2;
  return dy > 0 ? 0 : 1;
}

}  // namespace

Vector one_hot(int n, int index) {
  Vector v = Vector::Zero(n);
  v(index) = 1.0;
  return v;
}

int sample_action(const Vector& dist, Rng& rng) { return rng.categorical(dist); }

Vector ShortestPathExpert::distribution(const Env& env) const {
  const auto& e = as<envs::CrossingEnv>(env, "shortest_path_expert");
  const int d = e.distance_to_goal();
  if (d <= 0) throw std::logic_error("shortest_path_expert: goal unreachable");
  const auto& g = e.grid();
  // Forward first, then left, then right.
  const int fx = e.x() + envs::kDx[e.heading()], fy = e.y() + envs::kDy[e.heading()];
  const envs::Cell front = g.at(fx, fy);
  if (front == envs::Cell::Goal) return one_hot(e.num_actions(), envs::kForward);
  if (front == envs::Cell::Empty && e.distance_to_goal(fx, fy, e.heading()) == d - 1) {
    return one_hot(e.num_actions(), envs::kForward);
  }
  if (e.distance_to_goal(e.x(), e.y(), (e.heading() + 3) % 4) == d - 1) {
    return one_hot(e.num_actions(), envs::kTurnLeft);
  }
  if (e.distance_to_goal(e.x(), e.y(), (e.heading() + 1) % 4) == d - 1) {
    return one_hot(e.num_actions(), envs::kTurnRight);
  }
  throw std::logic_error("shortest_path_expert: inconsistent distance table");
}

Vector LighthouseExpert::distribution(const Env& env) const {
  const auto& e = as<envs::LighthouseEnv>(env, "lighthouse_expert");
  const int j = privilege_;
  const auto pos = e.position();

  if (e.dims() == 1) {
    if (e.closest_approach(e.goal_corner()) <= j) return one_hot(2, e.goal()[0] > pos[0] ? 1 : 0);
    // Sweep right until the right corner has been seen, then left.
    return one_hot(2, e.closest_approach(1) > j ? 1 : 0);
  }

  const int goal = e.goal_corner();
  if (e.closest_approach(goal) <= j) {
    const auto g = e.goal();
    return one_hot(4, step_towards_2d(g[0] - pos[0], g[1] - pos[1]));
  }
  // Nearest unexplored corner by steps needed to bring it into view.
  // Candidate order (+,+), (+,-), (-,+), (-,-) settles ties.
  static constexpr int kOrder[4] = {3, 1, 2, 0};
  int best = -1, best_cost = 0, bdx = 0, bdy = 0;
  for (int c : kOrder) {
    if (e.closest_approach(c) <= j) continue;
    const auto p = e.corner(c);
    const int rx = std::max(0, std::abs(p[0] - pos[0]) - j), ry = std::max(0, std::abs(p[1] - pos[1]) - j);
    const int cost = rx + ry;
    if (best < 0 || cost < best_cost) {
      best = c;
      best_cost = cost;
      bdx = p[0] > pos[0] ? rx : -rx;
      bdy = p[1] > pos[1] ? ry : -ry;
    }
  }
  if (best < 0) throw std::logic_error("lighthouse_expert: every corner seen but goal unknown");
  return one_hot(4, step_towards_2d(bdx, bdy));
}

Vector PoisonedDoorsExpert::distribution(const Env& env) const {
  const auto& e = as<envs::PoisonedDoorsEnv>(env, "pd_expert");
  if (e.phase() == envs::PoisonedDoorsEnv::Phase::ChooseDoor) {
    return one_hot(e.num_actions(), e.door_action(e.good_door()));
  }
  const int next = e.code()[static_cast<std::size_t>(e.digits_entered())];
  return one_hot(e.num_actions(), e.digit_action(next));
}

Vector CorruptExpert::distribution(const Env& env) const {
  const auto& e = as<envs::CrossingEnv>(env, "corrupt_expert");
  if (e.distance_to_goal() <= radius_) {
    return Vector::Constant(e.num_actions(), 1.0 / e.num_actions());
  }
  return inner_->distribution(env);
}

std::shared_ptr<const Expert> make_expert(const envs::TaskSpec& spec) {
  if (spec.is_crossing()) {
    auto sp = std::make_shared<const ShortestPathExpert>();
    if (spec.variant == envs::Variant::Corrupt) return std::make_shared<const CorruptExpert>(sp, spec.corrupt_distance);
    return sp;
  }
  if (spec.is_lighthouse()) return std::make_shared<const LighthouseExpert>(spec.expert_radius);
  return std::make_shared<const PoisonedDoorsExpert>();
}

}  // namespace advlab::experts
