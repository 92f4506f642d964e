#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pathbench/error.hpp"
#include "pathbench/grid.hpp"

namespace pathbench {

enum class PlanStatus { success, no_path, budget_exhausted, stuck };

inline std::string status_name(PlanStatus s) {
  switch (s) {
    case PlanStatus::success: return "success";
    case PlanStatus::no_path: return "no_path";
    case PlanStatus::budget_exhausted: return "budget_exhausted";
    case PlanStatus::stuck: return "stuck";
  }
  return "unknown";
}

inline std::optional<PlanStatus> parse_status(const std::string& s) {
  for (auto st : {PlanStatus::success, PlanStatus::no_path, PlanStatus::budget_exhausted, PlanStatus::stuck})
    if (status_name(st) == s) return st;
  return std::nullopt;
}

// What a planner touched while solving. Used for metrics and trace rendering.
struct PlannerTrace {
  std::vector<Point> explored;                    // expanded / evaluated cells, first-visit order
  std::vector<Point> samples;                     // points drawn by sampling planners
  std::vector<std::pair<Point, Point>> tree_edges;  // tree or roadmap edges
  std::vector<Point> waypoints;                   // sampling planners: the tree-level route
  std::vector<Point> agent_track;                 // cells physically traversed (bug / field planners)
  std::size_t node_bytes = 0;                     // peak bytes of planner-owned storage
  std::size_t steps = 0;                          // expansions or iterations

  friend bool operator==(const PlannerTrace&, const PlannerTrace&) = default;
};

struct PlanOutcome {
  PlanStatus status = PlanStatus::no_path;
  std::optional<Path> path;
  PlannerTrace trace;
  double wall_time = 0.0;  // seconds
  Point final_position;
  std::string failure_reason;

  bool success() const noexcept { return status == PlanStatus::success; }
};

enum class Hand { left, right };

struct RrtConfig {
  int step_size = 4;
  double goal_bias = 0.05;
  int max_iters = 10000;
};

struct RrtStarConfig {
  int step_size = 4;
  double goal_bias = 0.05;
  int max_iters = 10000;
  double rewire_radius = 8.0;
};

struct RrtConnectConfig {
  int step_size = 4;
  int max_iters = 10000;
};

struct SprmConfig {
  int num_samples = 500;
  double connect_radius = 10.0;
};

struct PotentialFieldConfig {
  double attract_gain = 1.0;
  double repulse_gain = 100.0;
  double influence_radius = 5.0;
  std::int64_t step_budget = 0;  // 0 means 10 x cell count
};

struct BugConfig {
  Hand wall_follow_hand = Hand::right;
  std::int64_t step_budget = 0;  // 0 means 10 x cell count
};

struct PlannerConfig {
  RrtConfig rrt;
  RrtStarConfig rrt_star;
  RrtConnectConfig rrt_connect;
  SprmConfig sprm;
  PotentialFieldConfig potential_field;
  BugConfig bug;
  double timeout_s = 120.0;

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0)) throw PreconditionError(std::string("planner config: ") + name + " must be positive");
    };
    auto probability = [](double v, const char* name) {
      if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError(std::string("planner config: ") + name + " must be in [0,1]");
    };
    positive(rrt.step_size, "rrt.step_size");
    positive(rrt.max_iters, "rrt.max_iters");
    probability(rrt.goal_bias, "rrt.goal_bias");
    positive(rrt_star.step_size, "rrt_star.step_size");
    positive(rrt_star.max_iters, "rrt_star.max_iters");
    positive(rrt_star.rewire_radius, "rrt_star.rewire_radius");
    probability(rrt_star.goal_bias, "rrt_star.goal_bias");
    positive(rrt_connect.step_size, "rrt_connect.step_size");
    positive(rrt_connect.max_iters, "rrt_connect.max_iters");
    positive(sprm.num_samples, "sprm.num_samples");
    positive(sprm.connect_radius, "sprm.connect_radius");
    positive(potential_field.attract_gain, "potential_field.attract_gain");
    positive(potential_field.repulse_gain, "potential_field.repulse_gain");
    positive(potential_field.influence_radius, "potential_field.influence_radius");
    if (potential_field.step_budget < 0) throw PreconditionError("planner config: potential_field.step_budget must be >= 0");
    if (bug.step_budget < 0) throw PreconditionError("planner config: bug.step_budget must be >= 0");
    positive(timeout_s, "timeout_s");
  }
};

// Cooperative per-invocation time limit, polled from planner loops.
class Deadline {
 public:
  explicit Deadline(double seconds)
      : end_(std::chrono::steady_clock::now() +
             std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds))) {}

  // Cheap to call every iteration; reads the clock on the first and every 256th call.
  bool expired() {
    if (calls_++ & 0xFF) return false;
    return std::chrono::steady_clock::now() >= end_;
  }

 private:
  std::chrono::steady_clock::time_point end_;
  std::uint32_t calls_ = 0;
};

// Peak-tracking byte counter for planner-owned data structures.
class MemoryMeter {
 public:
  void observe(std::size_t bytes) noexcept { peak_ = std::max(peak_, bytes); }
  std::size_t peak() const noexcept { return peak_; }

 private:
  std::size_t peak_ = 0;
};

inline PlanOutcome failure(PlanStatus status, Point final_position, PlannerTrace trace, std::string reason = {}) {
  PlanOutcome out;
  out.status = status;
  out.final_position = final_position;
  out.trace = std::move(trace);
  out.failure_reason = std::move(reason);
  return out;
}

inline PlanOutcome success(std::vector<Point> points, PlannerTrace trace) {
  PlanOutcome out;
  out.status = PlanStatus::success;
  out.final_position = points.back();
  out.path = Path::from_points(std::move(points));
  out.trace = std::move(trace);
  return out;
}

inline std::int64_t default_budget(const GridMap& map, std::int64_t configured) {
  return configured > 0 ? configured : 10 * static_cast<std::int64_t>(map.cell_count());
}

// Grid walk between two line-of-sight-connected cells: the cheapest MoveSet path
// that stays inside the segment's supercover. Sampling planners report paths as
// such walks so every planner is measured on the same move graph.
inline std::vector<Point> walk_segment(const GridMap& map, const MoveSet& moves, Point a, Point b) {
  if (a == b) return {a};
  const auto cells = supercover(a, b);
  std::unordered_map<std::size_t, int> slot;
  for (std::size_t i = 0; i < cells.size(); ++i) slot.emplace(map.index(cells[i]), static_cast<int>(i));
  const int n = static_cast<int>(cells.size());
  std::vector<double> dist(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const int src = slot.at(map.index(a)), dst = slot.at(map.index(b));
  dist[static_cast<std::size_t>(src)] = 0.0;
  open.push({0.0, src});
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    if (u == dst) break;
    for_each_neighbor(map, cells[static_cast<std::size_t>(u)], moves, [&](const Neighbor& nb) {
      const auto it = slot.find(map.index(nb.point));
      if (it == slot.end()) return;
      const int v = it->second;
      const double nd = d + nb.cost;
      if (nd < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = nd;
        parent[static_cast<std::size_t>(v)] = u;
        open.push({nd, v});
      }
    });
  }
  if (parent[static_cast<std::size_t>(dst)] < 0) throw PreconditionError("walk_segment: endpoints not connected");
  std::vector<Point> out;
  for (int v = dst; v >= 0; v = parent[static_cast<std::size_t>(v)]) out.push_back(cells[static_cast<std::size_t>(v)]);
  std::reverse(out.begin(), out.end());
  return out;
}

inline std::vector<Point> walk_waypoints(const GridMap& map, const MoveSet& moves, const std::vector<Point>& waypoints) {
  std::vector<Point> out;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    if (i == 0) {
      out.push_back(waypoints[0]);
      continue;
    }
    const auto seg = walk_segment(map, moves, waypoints[i - 1], waypoints[i]);
    out.insert(out.end(), seg.begin() + 1, seg.end());
  }
  return out;
}

}  // namespace pathbench
