#pragma once

// Per-run metrics and their aggregation.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pathbench/error.hpp"
#include "pathbench/grid.hpp"
#include "pathbench/planners/common.hpp"

namespace pathbench {

// Cells are one metre wide, so lengths in cells are lengths in metres.
struct MetricSet {
  bool success = false;
  std::optional<double> path_length;     // m, success only
  std::optional<double> distance_left;   // m, failure only
  double time = 0.0;                     // s
  std::optional<double> path_deviation;  // %, success with a successful baseline
  double search_space = 0.0;             // % of free cells
  double max_memory = 0.0;               // MB
  std::optional<double> clearance;       // m, success only
  std::optional<double> smoothness;      // deg, success only

  friend bool operator==(const MetricSet&, const MetricSet&) = default;
};

// Mean absolute turning angle in degrees between consecutive segments.
// Zero-length segments are skipped; fewer than two segments give 0.
inline double smoothness_deg(const std::vector<std::array<double, 3>>& pts) {
  std::vector<std::array<double, 3>> segs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const std::array<double, 3> d{pts[i][0] - pts[i - 1][0], pts[i][1] - pts[i - 1][1], pts[i][2] - pts[i - 1][2]};
    if (d[0] != 0.0 || d[1] != 0.0 || d[2] != 0.0) segs.push_back(d);
  }
  if (segs.size() < 2) return 0.0;
  double total = 0.0;
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const auto& a = segs[i - 1];
    const auto& b = segs[i];
    const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
    const std::array<double, 3> c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    const double cross = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    total += std::atan2(cross, dot);  // in [0, pi], stable near 0 and pi
  }
  return total / static_cast<double>(segs.size() - 1) * 180.0 / std::numbers::pi;
}

inline double smoothness_deg(const std::vector<Point>& pts) {
  std::vector<std::array<double, 3>> v;
  v.reserve(pts.size());
  for (const Point& p : pts) v.push_back({double(p.x), double(p.y), double(p.z)});
  return smoothness_deg(v);
}

inline double search_space_pct(const GridMap& map, const PlannerTrace& trace) {
  const std::size_t free = map.free_count();
  if (free == 0) return 0.0;
  std::vector<std::uint8_t> seen(map.cell_count(), 0);
  std::size_t n = 0;
  auto mark = [&](const Point& p) {
    if (!map.in_bounds(p)) return;
    auto& f = seen[map.index(p)];
    if (!f) {
      f = 1;
      ++n;
    }
  };
  for (const Point& p : trace.explored) mark(p);
  for (const Point& p : trace.samples) mark(p);
  return 100.0 * static_cast<double>(n) / static_cast<double>(free);
}

inline double path_deviation_pct(double length, double baseline) {
  if (baseline == 0.0) return length == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return 100.0 * (length - baseline) / baseline;
}

// `field` is the map's distance transform; computed here when not supplied.
inline MetricSet compute_metrics(const Scenario& s, const PlanOutcome& out, const PlanOutcome& baseline,
                                 const DistanceField* field = nullptr) {
  const GridMap& map = s.grid();
  MetricSet m;
  m.success = out.success();
  m.time = out.wall_time;
  m.search_space = search_space_pct(map, out.trace);
  m.max_memory = static_cast<double>(out.trace.node_bytes) / (1024.0 * 1024.0);
  if (!m.success) {
    m.distance_left = euclidean(out.final_position, s.goal);
    return m;
  }
  const Path& path = *out.path;
  m.path_length = Path::length_of(path.points);
  if (baseline.success())
    m.path_deviation = path_deviation_pct(*m.path_length, Path::length_of(baseline.path->points));
  std::optional<DistanceField> own;
  if (!field) field = &own.emplace(distance_transform(map));
  double c = 0.0;
  for (const Point& p : path.points) c += field->at(map, p);
  m.clearance = c / static_cast<double>(path.points.size());
  m.smoothness = smoothness_deg(path.points);
  return m;
}

struct Stat {
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;  // population
  double min = 0.0;
  double max = 0.0;

  friend bool operator==(const Stat&, const Stat&) = default;
};

inline Stat make_stat(const std::vector<double>& v) {
  Stat s;
  s.count = v.size();
  if (v.empty()) return s;
  double sum = 0.0;
  s.min = s.max = v.front();
  for (double x : v) {
    sum += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(v.size());
  double var = 0.0;
  for (double x : v) var += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(var / static_cast<double>(v.size()));
  return s;
}

inline constexpr std::array<const char*, 8> metric_names = {"path_length", "distance_left", "time",
                                                            "path_deviation", "search_space", "max_memory",
                                                            "clearance", "smoothness"};

// Value of a named metric, absent when undefined for the run.
inline std::optional<double> metric_value(const MetricSet& m, std::string_view name) {
  if (name == "path_length") return m.path_length;
  if (name == "distance_left") return m.distance_left;
  if (name == "time") return m.time;
  if (name == "path_deviation") return m.path_deviation;
  if (name == "search_space") return m.search_space;
  if (name == "max_memory") return m.max_memory;
  if (name == "clearance") return m.clearance;
  if (name == "smoothness") return m.smoothness;
  throw PreconditionError("unknown metric '" + std::string(name) + "'");
}

struct Summary {
  std::size_t runs = 0;
  double success_rate = 0.0;  // %
  std::array<Stat, metric_names.size()> stats;

  const Stat& stat(std::string_view name) const {
    for (std::size_t i = 0; i < metric_names.size(); ++i)
      if (name == metric_names[i]) return stats[i];
    throw PreconditionError("unknown metric '" + std::string(name) + "'");
  }

  friend bool operator==(const Summary&, const Summary&) = default;
};

inline Summary aggregate(const std::vector<MetricSet>& sets) {
  if (sets.empty()) throw PreconditionError("aggregate: empty metric list");
  Summary s;
  s.runs = sets.size();
  std::size_t ok = 0;
  for (const auto& m : sets) ok += m.success;
  s.success_rate = 100.0 * static_cast<double>(ok) / static_cast<double>(sets.size());
  for (std::size_t i = 0; i < metric_names.size(); ++i) {
    std::vector<double> v;
    for (const auto& m : sets)
      if (auto x = metric_value(m, metric_names[i])) v.push_back(*x);
    s.stats[i] = make_stat(v);
  }
  return s;
}

}  // namespace pathbench
