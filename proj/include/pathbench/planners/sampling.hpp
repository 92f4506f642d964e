#pragma once

// Sampling-based planners: sPRM, RRT, RRT* and RRT-Connect. Samples are free cell
// centres; edges are checked with line_of_sight. The reported path is the grid
// walk through the tree-level waypoints (kept in trace.waypoints).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "pathbench/grid.hpp"
#include "pathbench/planners/common.hpp"
#include "pathbench/rng.hpp"

namespace pathbench {

namespace detail {

inline std::vector<std::size_t> free_indices(const GridMap& map) {
  std::vector<std::size_t> out;
  out.reserve(map.cell_count());
  for (std::size_t i = 0; i < map.cell_count(); ++i)
    if (!map.cells()[i]) out.push_back(i);
  return out;
}

inline Point steer(Point from, Point to, int step) {
  const double d = euclidean(from, to);
  if (d <= step) return to;
  const double t = step / d;
  Point p;
  for (int a = 0; a < 3; ++a) p[a] = from[a] + static_cast<int>(std::lround((to[a] - from[a]) * t));
  return p;
}

// Tree with parent links, costs and child lists, plus a cell-occupancy index.
struct Tree {
  std::vector<Point> nodes;
  std::vector<int> parent;
  std::vector<double> cost;
  std::vector<std::vector<int>> children;
  std::vector<int> slot;  // cell index -> node id, -1 when absent

  Tree(const GridMap& map, Point root) : slot(map.cell_count(), -1) {
    nodes.push_back(root);
    parent.push_back(-1);
    cost.push_back(0.0);
    children.emplace_back();
    slot[map.index(root)] = 0;
  }

  int add(const GridMap& map, Point p, int par) {
    const int id = static_cast<int>(nodes.size());
    nodes.push_back(p);
    parent.push_back(par);
    cost.push_back(par >= 0 ? cost[static_cast<std::size_t>(par)] + euclidean(nodes[static_cast<std::size_t>(par)], p) : 0.0);
    children.emplace_back();
    if (par >= 0) children[static_cast<std::size_t>(par)].push_back(id);
    slot[map.index(p)] = id;
    return id;
  }

  int find(const GridMap& map, Point p) const { return slot[map.index(p)]; }

  int nearest(Point q) const {
    int best = 0;
    std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const auto d = squared_distance(nodes[i], q);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  std::vector<Point> branch(int id) const {
    std::vector<Point> out;
    for (int v = id; v >= 0; v = parent[static_cast<std::size_t>(v)]) out.push_back(nodes[static_cast<std::size_t>(v)]);
    std::reverse(out.begin(), out.end());
    return out;
  }

  void reparent(int id, int new_parent) {
    auto& old_children = children[static_cast<std::size_t>(parent[static_cast<std::size_t>(id)])];
    old_children.erase(std::find(old_children.begin(), old_children.end(), id));
    parent[static_cast<std::size_t>(id)] = new_parent;
    children[static_cast<std::size_t>(new_parent)].push_back(id);
    // refresh cost-to-come for the whole subtree
    std::vector<int> stack{id};
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      const auto pv = static_cast<std::size_t>(parent[static_cast<std::size_t>(v)]);
      cost[static_cast<std::size_t>(v)] = cost[pv] + euclidean(nodes[pv], nodes[static_cast<std::size_t>(v)]);
      for (int c : children[static_cast<std::size_t>(v)]) stack.push_back(c);
    }
  }

  std::size_t bytes() const {
    return nodes.size() * (sizeof(Point) + sizeof(int) + sizeof(double) + sizeof(std::vector<int>)) +
           (nodes.size() > 0 ? (nodes.size() - 1) * sizeof(int) : 0);
  }

  void export_edges(PlannerTrace& trace) const {
    for (std::size_t i = 1; i < nodes.size(); ++i)
      trace.tree_edges.emplace_back(nodes[static_cast<std::size_t>(parent[i])], nodes[i]);
  }

  int closest_to(Point goal) const { return nearest(goal); }
};

inline PlanOutcome finish_tree_success(const GridMap& map, const MoveSet& moves, std::vector<Point> waypoints,
                                       PlannerTrace trace) {
  trace.waypoints = waypoints;
  return success(walk_waypoints(map, moves, waypoints), std::move(trace));
}

}  // namespace detail

inline PlanOutcome plan_sprm(const Scenario& s, const MoveSet& moves, const SprmConfig& cfg, double timeout_s = 120.0) {
  s.validate();
  const GridMap& map = s.grid();
  Deadline deadline(timeout_s);
  PlannerTrace trace;
  if (s.start == s.goal) return success({s.start}, std::move(trace));

  Rng rng(derive_seed(s.seed, hash_name("sprm")));
  const auto free_cells = detail::free_indices(map);
  std::vector<Point> nodes{s.start, s.goal};
  std::vector<std::uint8_t> used(map.cell_count(), 0);
  used[map.index(s.start)] = used[map.index(s.goal)] = 1;
  for (int i = 0; i < cfg.num_samples; ++i) {
    const Point p = map.point_at(free_cells[rng.index(free_cells.size())]);
    trace.samples.push_back(p);
    if (used[map.index(p)]) continue;
    used[map.index(p)] = 1;
    nodes.push_back(p);
  }

  const std::size_t n = nodes.size();
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  std::size_t edge_count = 0;
  const double r2 = cfg.connect_radius * cfg.connect_radius;
  for (std::size_t i = 0; i < n; ++i) {
    if (deadline.expired()) return failure(PlanStatus::budget_exhausted, s.start, std::move(trace), "timeout");
    for (std::size_t j = i + 1; j < n; ++j) {
      if (static_cast<double>(squared_distance(nodes[i], nodes[j])) > r2) continue;
      if (!line_of_sight(map, nodes[i], nodes[j])) continue;
      const double d = euclidean(nodes[i], nodes[j]);
      adj[i].emplace_back(static_cast<int>(j), d);
      adj[j].emplace_back(static_cast<int>(i), d);
      trace.tree_edges.emplace_back(nodes[i], nodes[j]);
      ++edge_count;
    }
  }

  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<int> parent(n, -1);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  dist[0] = 0.0;
  open.push({0.0, 0});
  while (!open.empty()) {
    const auto [d, u] = open.top();
    open.pop();
    if (d > dist[static_cast<std::size_t>(u)]) continue;
    ++trace.steps;
    if (u == 1) break;
    for (const auto& [v, w] : adj[static_cast<std::size_t>(u)]) {
      if (d + w < dist[static_cast<std::size_t>(v)]) {
        dist[static_cast<std::size_t>(v)] = d + w;
        parent[static_cast<std::size_t>(v)] = u;
        open.push({d + w, v});
      }
    }
  }
  trace.node_bytes = n * (sizeof(Point) + sizeof(double) + sizeof(int) + sizeof(adj[0])) +
                     2 * edge_count * sizeof(std::pair<int, double>);
  if (parent[1] < 0) return failure(PlanStatus::no_path, s.start, std::move(trace), "roadmap does not connect start and goal");
  std::vector<Point> waypoints;
  for (int v = 1; v >= 0; v = parent[static_cast<std::size_t>(v)]) waypoints.push_back(nodes[static_cast<std::size_t>(v)]);
  std::reverse(waypoints.begin(), waypoints.end());
  return detail::finish_tree_success(map, moves, std::move(waypoints), std::move(trace));
}

inline PlanOutcome plan_rrt(const Scenario& s, const MoveSet& moves, const RrtConfig& cfg, double timeout_s = 120.0) {
  s.validate();
  const GridMap& map = s.grid();
  Deadline deadline(timeout_s);
  PlannerTrace trace;
  if (s.start == s.goal) return success({s.start}, std::move(trace));

  Rng rng(derive_seed(s.seed, hash_name("rrt")));
  const auto free_cells = detail::free_indices(map);
  detail::Tree tree(map, s.start);
  bool timed_out = false;
  // the goal-connection test applies to the root as to every added node
  int goal_node = euclidean(s.start, s.goal) <= cfg.step_size && line_of_sight(map, s.start, s.goal)
                      ? tree.add(map, s.goal, 0)
                      : -1;
  for (int iter = 0; iter < cfg.max_iters && goal_node < 0; ++iter) {
    if (deadline.expired()) {
      timed_out = true;
      break;
    }
    ++trace.steps;
    const Point sample = rng.bernoulli(cfg.goal_bias) ? s.goal : map.point_at(free_cells[rng.index(free_cells.size())]);
    trace.samples.push_back(sample);
    const int near = tree.nearest(sample);
    const Point from = tree.nodes[static_cast<std::size_t>(near)];
    const Point to = detail::steer(from, sample, cfg.step_size);
    if (!map.free(to) || tree.find(map, to) >= 0 || !line_of_sight(map, from, to)) continue;
    const int id = tree.add(map, to, near);
    if (to == s.goal) {
      goal_node = id;
    } else if (euclidean(to, s.goal) <= cfg.step_size && line_of_sight(map, to, s.goal)) {
      goal_node = tree.add(map, s.goal, id);
    }
  }
  trace.node_bytes = tree.bytes();
  tree.export_edges(trace);
  if (goal_node < 0) {
    const Point best = tree.nodes[static_cast<std::size_t>(tree.closest_to(s.goal))];
    return failure(PlanStatus::budget_exhausted, best, std::move(trace), timed_out ? "timeout" : "iteration budget exhausted");
  }
  return detail::finish_tree_success(map, moves, tree.branch(goal_node), std::move(trace));
}

inline PlanOutcome plan_rrt_star(const Scenario& s, const MoveSet& moves, const RrtStarConfig& cfg,
                                 double timeout_s = 120.0) {
  s.validate();
  const GridMap& map = s.grid();
  Deadline deadline(timeout_s);
  PlannerTrace trace;
  if (s.start == s.goal) return success({s.start}, std::move(trace));

  Rng rng(derive_seed(s.seed, hash_name("rrt_star")));
  const auto free_cells = detail::free_indices(map);
  detail::Tree tree(map, s.start);
  const double radius2 = cfg.rewire_radius * cfg.rewire_radius;
  auto near_set = [&](Point p) {
    std::vector<int> out;
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
      if (static_cast<double>(squared_distance(tree.nodes[i], p)) <= radius2) out.push_back(static_cast<int>(i));
    return out;
  };
  // cheapest line-of-sight parent for p among candidates, starting from `best`
  auto choose_parent = [&](Point p, int best, const std::vector<int>& candidates) {
    double best_cost = tree.cost[static_cast<std::size_t>(best)] + euclidean(tree.nodes[static_cast<std::size_t>(best)], p);
    for (int j : candidates) {
      const auto ju = static_cast<std::size_t>(j);
      const double c = tree.cost[ju] + euclidean(tree.nodes[ju], p);
      if (c < best_cost - 1e-12 && line_of_sight(map, tree.nodes[ju], p)) {
        best = j;
        best_cost = c;
      }
    }
    return best;
  };

  bool timed_out = false;
  // the goal-connection test applies to the root as to every added node
  int goal_node = euclidean(s.start, s.goal) <= cfg.step_size && line_of_sight(map, s.start, s.goal)
                      ? tree.add(map, s.goal, 0)
                      : -1;
  for (int iter = 0; iter < cfg.max_iters && goal_node < 0; ++iter) {
    if (deadline.expired()) {
      timed_out = true;
      break;
    }
    ++trace.steps;
    const Point sample = rng.bernoulli(cfg.goal_bias) ? s.goal : map.point_at(free_cells[rng.index(free_cells.size())]);
    trace.samples.push_back(sample);
    const int near = tree.nearest(sample);
    const Point from = tree.nodes[static_cast<std::size_t>(near)];
    const Point to = detail::steer(from, sample, cfg.step_size);
    if (!map.free(to) || tree.find(map, to) >= 0 || !line_of_sight(map, from, to)) continue;

    const auto neighbourhood = near_set(to);
    const int id = tree.add(map, to, choose_parent(to, near, neighbourhood));
    for (int j : neighbourhood) {
      const auto ju = static_cast<std::size_t>(j);
      if (j == tree.parent[static_cast<std::size_t>(id)] || j == 0) continue;
      const double c = tree.cost[static_cast<std::size_t>(id)] + euclidean(to, tree.nodes[ju]);
      if (c < tree.cost[ju] - 1e-12 && line_of_sight(map, to, tree.nodes[ju])) tree.reparent(j, id);
    }

    if (to == s.goal) {
      goal_node = id;
    } else if (euclidean(to, s.goal) <= cfg.step_size && line_of_sight(map, to, s.goal)) {
      goal_node = tree.add(map, s.goal, choose_parent(s.goal, id, near_set(s.goal)));
    }
  }
  trace.node_bytes = tree.bytes();
  tree.export_edges(trace);
  if (goal_node < 0) {
    const Point best = tree.nodes[static_cast<std::size_t>(tree.closest_to(s.goal))];
    return failure(PlanStatus::budget_exhausted, best, std::move(trace), timed_out ? "timeout" : "iteration budget exhausted");
  }
  return detail::finish_tree_success(map, moves, tree.branch(goal_node), std::move(trace));
}

inline PlanOutcome plan_rrt_connect(const Scenario& s, const MoveSet& moves, const RrtConnectConfig& cfg,
                                    double timeout_s = 120.0) {
  s.validate();
  const GridMap& map = s.grid();
  Deadline deadline(timeout_s);
  PlannerTrace trace;
  if (s.start == s.goal) return success({s.start}, std::move(trace));

  Rng rng(derive_seed(s.seed, hash_name("rrt_connect")));
  const auto free_cells = detail::free_indices(map);
  std::array<detail::Tree, 2> trees{detail::Tree(map, s.start), detail::Tree(map, s.goal)};

  enum class Extend { trapped, advanced, reached };
  auto extend = [&](detail::Tree& tree, Point target, int& node) {
    const int near = tree.nearest(target);
    const Point from = tree.nodes[static_cast<std::size_t>(near)];
    const Point to = detail::steer(from, target, cfg.step_size);
    if (!map.free(to) || !line_of_sight(map, from, to)) return Extend::trapped;
    const int existing = tree.find(map, to);
    if (existing >= 0) {
      node = existing;
      return to == target ? Extend::reached : Extend::trapped;
    }
    node = tree.add(map, to, near);
    return to == target ? Extend::reached : Extend::advanced;
  };

  int a = 0;
  std::vector<Point> waypoints;
  if (euclidean(s.start, s.goal) <= cfg.step_size && line_of_sight(map, s.start, s.goal)) waypoints = {s.start, s.goal};
  bool timed_out = false;
  for (int iter = 0; iter < cfg.max_iters && waypoints.empty(); ++iter, a = 1 - a) {
    if (deadline.expired()) {
      timed_out = true;
      break;
    }
    ++trace.steps;
    const Point sample = map.point_at(free_cells[rng.index(free_cells.size())]);
    trace.samples.push_back(sample);
    int new_a = -1;
    if (extend(trees[static_cast<std::size_t>(a)], sample, new_a) == Extend::trapped) continue;
    const Point target = trees[static_cast<std::size_t>(a)].nodes[static_cast<std::size_t>(new_a)];
    auto& other = trees[static_cast<std::size_t>(1 - a)];
    int new_b = -1;
    Extend st;
    do {
      st = extend(other, target, new_b);
    } while (st == Extend::advanced);
    if (st != Extend::reached) continue;

    auto from_a = trees[static_cast<std::size_t>(a)].branch(new_a);
    auto from_b = other.branch(new_b);
    // join at the shared cell; orient start -> goal
    std::reverse(from_b.begin(), from_b.end());
    from_a.insert(from_a.end(), from_b.begin() + 1, from_b.end());
    if (a == 1) std::reverse(from_a.begin(), from_a.end());
    waypoints = std::move(from_a);
  }
  trace.node_bytes = trees[0].bytes() + trees[1].bytes();
  trees[0].export_edges(trace);
  trees[1].export_edges(trace);
  if (waypoints.empty()) {
    const Point best = trees[0].nodes[static_cast<std::size_t>(trees[0].closest_to(s.goal))];
    return failure(PlanStatus::budget_exhausted, best, std::move(trace), timed_out ? "timeout" : "iteration budget exhausted");
  }
  return detail::finish_tree_success(map, moves, std::move(waypoints), std::move(trace));
}

}  // namespace pathbench
