#pragma once

// Planner registry: name lookup and timed invocation.

#include <array>
#include <chrono>
#include <string>
#include <string_view>

#include "pathbench/planners/common.hpp"
#include "pathbench/planners/graph.hpp"
#include "pathbench/planners/sampling.hpp"
#include "pathbench/planners/sensory.hpp"

namespace pathbench {

inline constexpr std::array<std::string_view, 10> planner_names = {
    "astar", "dijkstra", "wavefront", "sprm", "rrt", "rrt_star", "rrt_connect", "bug1", "bug2", "potential_field"};

inline bool is_planner(std::string_view name) {
  for (auto n : planner_names)
    if (n == name) return true;
  return false;
}

// Runs one planner and stamps wall_time around the call only.
inline PlanOutcome run_planner(std::string_view name, const Scenario& s, const MoveSet& moves,
                               const PlannerConfig& cfg = {}) {
  cfg.validate();
  const double t = cfg.timeout_s;
  const auto t0 = std::chrono::steady_clock::now();
  PlanOutcome out;
  if (name == "astar") out = plan_astar(s, moves, t);
  else if (name == "dijkstra") out = plan_dijkstra(s, moves, t);
  else if (name == "wavefront") out = plan_wavefront(s, moves, t);
  else if (name == "sprm") out = plan_sprm(s, moves, cfg.sprm, t);
  else if (name == "rrt") out = plan_rrt(s, moves, cfg.rrt, t);
  else if (name == "rrt_star") out = plan_rrt_star(s, moves, cfg.rrt_star, t);
  else if (name == "rrt_connect") out = plan_rrt_connect(s, moves, cfg.rrt_connect, t);
  else if (name == "bug1") out = plan_bug1(s, moves, cfg.bug, t);
  else if (name == "bug2") out = plan_bug2(s, moves, cfg.bug, t);
  else if (name == "potential_field") out = plan_potential_field(s, moves, cfg.potential_field, t);
  else throw PreconditionError("unknown planner '" + std::string(name) + "'");
  out.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace pathbench
