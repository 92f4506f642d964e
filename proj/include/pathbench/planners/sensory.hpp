#pragma once

// Planners that physically move an agent cell by cell: Bug1, Bug2 and a greedy
// potential-field descent. The agent's cells are recorded in trace.agent_track
// and, on success, form the reported path.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "pathbench/grid.hpp"
#include "pathbench/planners/common.hpp"

namespace pathbench {

namespace detail {

// 2D wall follower over the four cardinal directions.
// Heading indices: 0 = +x, 1 = +y, 2 = -x, 3 = -y.
class WallFollower {
 public:
  WallFollower(const GridMap& map, Hand hand) : map_(map), hand_(hand) {}

  static Point dir(int h) {
    static constexpr Point dirs[4] = {{1, 0, 0}, {0, 1, 0}, {-1, 0, 0}, {0, -1, 0}};
    return dirs[((h % 4) + 4) % 4];
  }
  static int heading_of(Point d) {
    for (int h = 0; h < 4; ++h)
      if (dir(h) == d) return h;
    return 0;
  }

  // Direction on the wall-hand side of heading h.
  int hand_side(int h) const { return hand_ == Hand::right ? (h + 1) % 4 : (h + 3) % 4; }
  int away_side(int h) const { return hand_ == Hand::right ? (h + 3) % 4 : (h + 1) % 4; }

  // Heading that keeps a wall in direction `contact` on the hand side.
  int heading_for_contact(int contact) const { return away_side(contact); }

  // One hand-rule step: hand side, straight, away side, back. Returns the new
  // position and updates the heading; nullopt when boxed in.
  std::optional<Point> step(Point p, int& h) const {
    for (int turn : {hand_side(h), h, away_side(h), (h + 2) % 4}) {
      const Point q = p + dir(turn);
      if (map_.free(q)) {
        h = turn;
        return q;
      }
    }
    return std::nullopt;
  }

 private:
  const GridMap& map_;
  Hand hand_;
};

struct BugRun {
  const Scenario& s;
  const MoveSet& moves;
  std::int64_t budget;
  Deadline deadline;
  PlannerTrace trace;
  std::int64_t used = 0;

  // Moves the agent to q. False when the step budget or the deadline ran out.
  bool move_to(Point q) {
    trace.agent_track.push_back(q);
    ++used;
    ++trace.steps;
    return used < budget && !deadline.expired();
  }

  bool can_step(Point from, Point to) const { return adjacent(s.grid(), from, to, moves); }
};

// Picks the cardinal contact direction for a blocked greedy step from p towards
// next, stepping aside first when only the diagonal cell is blocked.
inline std::optional<int> contact_direction(const GridMap& map, Point p, Point next, Point& sidestep) {
  const Point o = next - p;
  sidestep = p;
  if (o.x != 0 && o.y != 0) {
    const Point cx{o.x, 0, 0}, cy{0, o.y, 0};
    if (!map.free(p + cx)) return WallFollower::heading_of(cx);
    if (!map.free(p + cy)) return WallFollower::heading_of(cy);
    // only the diagonal is blocked: shift along x, the blocked cell is then a cardinal neighbour
    sidestep = p + cx;
    return WallFollower::heading_of(cy);
  }
  return WallFollower::heading_of(o);
}

inline PlanOutcome finish_bug(BugRun& run, PlanStatus status, std::string reason) {
  // explored = distinct cells the agent occupied
  std::set<Point> seen;
  run.trace.explored.clear();
  for (const Point& p : run.trace.agent_track)
    if (seen.insert(p).second) run.trace.explored.push_back(p);
  run.trace.node_bytes = run.trace.agent_track.size() * sizeof(Point) + seen.size() * (sizeof(Point) + 4 * sizeof(void*));
  if (status == PlanStatus::success) {
    auto track = run.trace.agent_track;
    return success(std::move(track), std::move(run.trace));
  }
  const Point last = run.trace.agent_track.back();
  return failure(status, last, std::move(run.trace), std::move(reason));
}

}  // namespace detail

// Bug2: follow the fixed start-goal m-line; on contact wall-follow until the
// m-line is met again strictly closer to the goal.
inline PlanOutcome plan_bug2(const Scenario& s, const MoveSet& moves, const BugConfig& cfg, double timeout_s = 120.0) {
  s.validate();
  const GridMap& map = s.grid();
  if (map.dimension() != 2) throw UnsupportedError("bug2 supports 2D maps only");
  detail::BugRun run{s, moves, default_budget(map, cfg.step_budget), Deadline(timeout_s), {}};
  detail::WallFollower follower(map, cfg.wall_follow_hand);
  run.trace.agent_track.push_back(s.start);

  const auto mline = grid_line(s.start, s.goal);
  std::map<Point, std::size_t> on_line;
  for (std::size_t i = 0; i < mline.size(); ++i) on_line.emplace(mline[i], i);

  Point pos = s.start;
  std::size_t line_idx = 0;
  double last_hit = std::numeric_limits<double>::infinity();
  while (pos != s.goal) {
    const Point next = mline[line_idx + 1];
    if (run.can_step(pos, next)) {
      if (!run.move_to(next)) return detail::finish_bug(run, PlanStatus::stuck, "step budget exhausted");
      pos = next;
      ++line_idx;
      continue;
    }
    // hit point
    const double hit_dist = euclidean(pos, s.goal);
    if (hit_dist >= last_hit) return detail::finish_bug(run, PlanStatus::stuck, "no progress between hit points");
    last_hit = hit_dist;
    const std::size_t hit_idx = line_idx;
    Point side;
    int heading = follower.heading_for_contact(*detail::contact_direction(map, pos, next, side));
    if (side != pos) {
      if (!map.free(side)) return detail::finish_bug(run, PlanStatus::stuck, "boxed in");
      if (!run.move_to(side)) return detail::finish_bug(run, PlanStatus::stuck, "step budget exhausted");
      pos = side;
    }
    std::set<std::pair<Point, int>> states{{pos, heading}};
    for (;;) {
      const auto q = follower.step(pos, heading);
      if (!q) return detail::finish_bug(run, PlanStatus::stuck, "boxed in");
      if (!run.move_to(*q)) return detail::finish_bug(run, PlanStatus::stuck, "step budget exhausted");
      pos = *q;
      if (pos == s.goal) return detail::finish_bug(run, PlanStatus::success, {});
      const auto it = on_line.find(pos);
      if (it != on_line.end() && it->second > hit_idx && euclidean(pos, s.goal) < hit_dist &&
          run.can_step(pos, mline[it->second + 1])) {
        line_idx = it->second;
        break;
      }
      if (!states.insert({pos, heading}).second)
        return detail::finish_bug(run, PlanStatus::stuck, "wall following looped without reaching the m-line");
    }
  }
  return detail::finish_bug(run, PlanStatus::success, {});
}

// Bug1: on contact circumnavigate the whole obstacle, remember the boundary cell
// closest to the goal, return to it and leave from there.
inline PlanOutcome plan_bug1(const Scenario& s, const MoveSet& moves, const BugConfig& cfg, double timeout_s = 120.0) {
  s.validate();
  const GridMap& map = s.grid();
  if (map.dimension() != 2) throw UnsupportedError("bug1 supports 2D maps only");
  detail::BugRun run{s, moves, default_budget(map, cfg.step_budget), Deadline(timeout_s), {}};
  detail::WallFollower follower(map, cfg.wall_follow_hand);
  run.trace.agent_track.push_back(s.start);

  Point pos = s.start;
  double last_hit = std::numeric_limits<double>::infinity();
  while (pos != s.goal) {
    const auto line = grid_line(pos, s.goal);
    const Point next = line[1];
    if (run.can_step(pos, next)) {
      if (!run.move_to(next)) return detail::finish_bug(run, PlanStatus::stuck, "step budget exhausted");
      pos = next;
      continue;
    }
    const double hit_dist = euclidean(pos, s.goal);
    if (hit_dist >= last_hit) return detail::finish_bug(run, PlanStatus::stuck, "no progress between hit points");
    last_hit = hit_dist;
    Point side;
    int heading = follower.heading_for_contact(*detail::contact_direction(map, pos, next, side));
    if (side != pos) {
      if (!map.free(side)) return detail::finish_bug(run, PlanStatus::stuck, "boxed in");
      if (!run.move_to(side)) return detail::finish_bug(run, PlanStatus::stuck, "step budget exhausted");
      pos = side;
    }

    // circumnavigate until the follower state repeats
    std::vector<Point> loop{pos};
    std::map<std::pair<Point, int>, std::size_t> states{{{pos, heading}, 0}};
    std::size_t repeat_at = 0;
    for (;;) {
      const auto q = follower.step(pos, heading);
      if (!q) return detail::finish_bug(run, PlanStatus::stuck, "boxed in");
      if (!run.move_to(*q)) return detail::finish_bug(run, PlanStatus::stuck, "step budget exhausted");
      pos = *q;
      if (pos == s.goal) return detail::finish_bug(run, PlanStatus::success, {});
      loop.push_back(pos);
      const auto [it, fresh] = states.emplace(std::pair{pos, heading}, loop.size() - 1);
      if (!fresh) {
        repeat_at = it->second;
        break;
      }
    }

    // closest boundary cell; earliest occurrence on ties
    std::size_t best = 0;
    for (std::size_t i = 1; i < loop.size(); ++i)
      if (euclidean(loop[i], s.goal) < euclidean(loop[best], s.goal)) best = i;
    const Point leave = loop[best];
    if (euclidean(leave, s.goal) >= hit_dist)
      return detail::finish_bug(run, PlanStatus::stuck, "obstacle encloses the goal or the agent");

    // return to it along the boundary, continuing around the loop when that is shorter
    const std::size_t last = loop.size() - 1;
    const std::size_t back_steps = last - best;
    if (best >= repeat_at && best - repeat_at < back_steps) {
      for (std::size_t i = repeat_at + 1; i <= best; ++i)
        if (!run.move_to(loop[i])) return detail::finish_bug(run, PlanStatus::stuck, "step budget exhausted");
    } else {
      for (std::size_t i = last; i-- > best;)
        if (!run.move_to(loop[i])) return detail::finish_bug(run, PlanStatus::stuck, "step budget exhausted");
    }
    pos = leave;
    const auto away = grid_line(pos, s.goal);
    if (pos != s.goal && !run.can_step(pos, away[1]))
      return detail::finish_bug(run, PlanStatus::stuck, "cannot leave the obstacle towards the goal");
  }
  return detail::finish_bug(run, PlanStatus::success, {});
}

// Greedy descent of attract * |p - goal| + repulse * sum 1/2 (1/d - 1/r)^2 over
// obstacle cells within the influence radius r.
inline double field_potential(const GridMap& map, Point p, Point goal, const PotentialFieldConfig& cfg) {
  double u = cfg.attract_gain * euclidean(p, goal);
  const int r = static_cast<int>(std::floor(cfg.influence_radius));
  const int zr = map.dimension() == 3 ? r : 0;
  for (int dz = -zr; dz <= zr; ++dz)
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        const Point q{p.x + dx, p.y + dy, p.z + dz};
        if (!map.in_bounds(q) || !map.blocked(q)) continue;
        const double d = euclidean(p, q);
        if (d > cfg.influence_radius || d == 0.0) continue;
        const double k = 1.0 / d - 1.0 / cfg.influence_radius;
        u += cfg.repulse_gain * 0.5 * k * k;
      }
  return u;
}

inline PlanOutcome plan_potential_field(const Scenario& s, const MoveSet& moves, const PotentialFieldConfig& cfg,
                                        double timeout_s = 120.0) {
  s.validate();
  const GridMap& map = s.grid();
  Deadline deadline(timeout_s);
  PlannerTrace trace;
  trace.agent_track.push_back(s.start);
  const std::int64_t budget = default_budget(map, cfg.step_budget);

  std::vector<double> cache(map.cell_count(), std::numeric_limits<double>::quiet_NaN());
  auto potential = [&](Point p) {
    double& u = cache[map.index(p)];
    if (std::isnan(u)) {
      u = field_potential(map, p, s.goal, cfg);
      trace.explored.push_back(p);
    }
    return u;
  };
  auto finish = [&](PlanStatus st, std::string reason) {
    trace.node_bytes = trace.explored.size() * (sizeof(double) + sizeof(Point)) + trace.agent_track.size() * sizeof(Point);
    if (st == PlanStatus::success) {
      auto track = trace.agent_track;
      return success(std::move(track), std::move(trace));
    }
    const Point last = trace.agent_track.back();
    return failure(st, last, std::move(trace), std::move(reason));
  };

  Point pos = s.start;
  for (std::int64_t step = 0; pos != s.goal; ++step) {
    if (step >= budget) return finish(PlanStatus::stuck, "step budget exhausted");
    if (deadline.expired()) return finish(PlanStatus::budget_exhausted, "timeout");
    const double here = potential(pos);
    std::optional<Point> best;
    double best_u = here;
    for_each_neighbor(map, pos, moves, [&](const Neighbor& n) {
      const double u = potential(n.point);
      if (u < best_u) {
        best_u = u;
        best = n.point;
      }
    });
    if (!best) return finish(PlanStatus::stuck, "local minimum");
    pos = *best;
    trace.agent_track.push_back(pos);
    ++trace.steps;
  }
  return finish(PlanStatus::success, {});
}

}  // namespace pathbench
