#pragma once

// Graph-search planners on the MoveSet graph: A*, Dijkstra and wavefront.

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <tuple>
#include <vector>

#include "pathbench/grid.hpp"
#include "pathbench/planners/common.hpp"

namespace pathbench {

// Octile distance and its 3D analogue: exact move-graph distance on an empty map.
inline double octile_distance(Point a, Point b) noexcept {
  std::array<int, 3> d{std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)};
  std::sort(d.begin(), d.end(), std::greater<>());
  static const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  return r3 * d[2] + r2 * (d[1] - d[2]) + (d[0] - d[1]);
}

namespace detail {

struct OpenEntry {
  double f;
  double h;
  Point p;
  // min-heap order on (f, h, point)
  friend bool operator>(const OpenEntry& a, const OpenEntry& b) noexcept {
    if (a.f != b.f) return a.f > b.f;
    if (a.h != b.h) return a.h > b.h;
    return a.p > b.p;
  }
};

template <typename Heuristic>
PlanOutcome best_first(const Scenario& s, const MoveSet& moves, Heuristic heuristic, Deadline deadline) {
  s.validate();
  const GridMap& map = s.grid();
  PlannerTrace trace;
  MemoryMeter meter;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(map.cell_count(), inf);
  std::vector<std::int64_t> parent(map.cell_count(), -1);
  std::vector<std::uint8_t> closed(map.cell_count(), 0);
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<>> open;
  std::size_t touched = 1;
  constexpr std::size_t node_record = sizeof(double) + sizeof(std::int64_t) + sizeof(std::uint8_t);

  g[map.index(s.start)] = 0.0;
  const double h0 = heuristic(s.start);
  open.push({h0, h0, s.start});
  bool found = false;
  while (!open.empty()) {
    if (deadline.expired()) {
      trace.node_bytes = meter.peak();
      return failure(PlanStatus::budget_exhausted, s.start, std::move(trace), "timeout");
    }
    const OpenEntry top = open.top();
    open.pop();
    const std::size_t ui = map.index(top.p);
    if (closed[ui]) continue;
    closed[ui] = 1;
    trace.explored.push_back(top.p);
    ++trace.steps;
    if (top.p == s.goal) {
      found = true;
      break;
    }
    const double gu = g[ui];
    for_each_neighbor(map, top.p, moves, [&](const Neighbor& n) {
      const std::size_t vi = map.index(n.point);
      if (closed[vi]) return;
      const double ng = gu + n.cost;
      if (ng < g[vi]) {
        if (g[vi] == inf) ++touched;
        g[vi] = ng;
        parent[vi] = static_cast<std::int64_t>(ui);
        const double h = heuristic(n.point);
        open.push({ng + h, h, n.point});
      }
    });
    meter.observe(open.size() * sizeof(OpenEntry) + touched * node_record);
  }
  trace.node_bytes = std::max(meter.peak(), sizeof(OpenEntry) + node_record);
  if (!found) return failure(PlanStatus::no_path, s.start, std::move(trace), "goal unreachable");
  std::vector<Point> pts;
  for (std::int64_t v = static_cast<std::int64_t>(map.index(s.goal)); v >= 0; v = parent[static_cast<std::size_t>(v)])
    pts.push_back(map.point_at(static_cast<std::size_t>(v)));
  std::reverse(pts.begin(), pts.end());
  return success(std::move(pts), std::move(trace));
}

}  // namespace detail

inline PlanOutcome plan_astar(const Scenario& s, const MoveSet& moves, double timeout_s = 120.0) {
  const Point goal = s.goal;
  return detail::best_first(s, moves, [goal](Point p) { return octile_distance(p, goal); }, Deadline(timeout_s));
}

inline PlanOutcome plan_dijkstra(const Scenario& s, const MoveSet& moves, double timeout_s = 120.0) {
  return detail::best_first(s, moves, [](Point) { return 0.0; }, Deadline(timeout_s));
}

// Breadth-first wave from the goal, then greedy descent from the start. Among
// neighbours with the smallest wave value the cheaper move wins, then the one
// closer to the goal, then the lexicographically smaller cell.
inline PlanOutcome plan_wavefront(const Scenario& s, const MoveSet& moves, double timeout_s = 120.0) {
  s.validate();
  const GridMap& map = s.grid();
  Deadline deadline(timeout_s);
  PlannerTrace trace;
  MemoryMeter meter;
  constexpr int unset = std::numeric_limits<int>::max();
  std::vector<int> wave(map.cell_count(), unset);
  std::deque<Point> queue{s.goal};
  wave[map.index(s.goal)] = 0;
  std::size_t labelled = 1;
  bool reached = false;
  while (!queue.empty()) {
    if (deadline.expired()) {
      trace.node_bytes = meter.peak();
      return failure(PlanStatus::budget_exhausted, s.start, std::move(trace), "timeout");
    }
    const Point p = queue.front();
    queue.pop_front();
    trace.explored.push_back(p);
    ++trace.steps;
    if (p == s.start) {
      reached = true;
      break;
    }
    const int next = wave[map.index(p)] + 1;
    for_each_neighbor(map, p, moves, [&](const Neighbor& n) {
      int& w = wave[map.index(n.point)];
      if (w != unset) return;
      w = next;
      ++labelled;
      queue.push_back(n.point);
    });
    meter.observe(queue.size() * sizeof(Point) + labelled * sizeof(int));
  }
  trace.node_bytes = std::max(meter.peak(), sizeof(Point) + sizeof(int));
  if (!reached) return failure(PlanStatus::no_path, s.start, std::move(trace), "goal unreachable");

  std::vector<Point> pts{s.start};
  Point cur = s.start;
  while (cur != s.goal) {
    Point best = cur;
    int best_wave = wave[map.index(cur)];
    double best_cost = 0.0, best_dist = 0.0;
    bool have = false;
    for_each_neighbor(map, cur, moves, [&](const Neighbor& n) {
      const int w = wave[map.index(n.point)];
      if (w == unset || w >= wave[map.index(cur)]) return;
      const double d = euclidean(n.point, s.goal);
      const auto key = std::tuple(w, n.cost, d, n.point);
      if (!have || key < std::tuple(best_wave, best_cost, best_dist, best)) {
        best = n.point;
        best_wave = w;
        best_cost = n.cost;
        best_dist = d;
        have = true;
      }
    });
    cur = best;
    pts.push_back(cur);
  }
  return success(std::move(pts), std::move(trace));
}

}  // namespace pathbench
