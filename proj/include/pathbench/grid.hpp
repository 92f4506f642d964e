#pragma once

// Grid world: occupancy maps, move sets, geometry queries and solvability.
// Units: one cell is one metre; coordinates are integer cell indices.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pathbench/error.hpp"

namespace pathbench {

// Cell coordinate. 2D maps keep z = 0.
struct Point {
  int x = 0;
  int y = 0;
  int z = 0;

  constexpr int operator[](int axis) const noexcept { return axis == 0 ? x : axis == 1 ? y : z; }
  constexpr int& operator[](int axis) noexcept { return axis == 0 ? x : axis == 1 ? y : z; }

  friend constexpr auto operator<=>(const Point&, const Point&) = default;
  friend constexpr Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend constexpr Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
};

inline std::string to_string(Point p) {
  return "(" + std::to_string(p.x) + "," + std::to_string(p.y) + "," + std::to_string(p.z) + ")";
}

inline double euclidean(Point a, Point b) noexcept {
  const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline std::int64_t squared_distance(Point a, Point b) noexcept {
  const std::int64_t dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

// Dense occupancy grid with optional agent and goal entities.
//
// Cells are stored row-major: index = x + W * (y + H * z). A cell value of 1 is
// blocked, 0 is free. Agent and goal, when set, always sit on free cells.
class GridMap {
 public:
  GridMap() : GridMap(std::vector<int>{1, 1}) {}

  explicit GridMap(std::vector<int> dims, std::vector<std::uint8_t> cells = {},
                   std::optional<Point> agent = std::nullopt, std::optional<Point> goal = std::nullopt)
      : dims_(std::move(dims)), cells_(std::move(cells)) {
    if (dims_.size() != 2 && dims_.size() != 3) throw PreconditionError("map must have 2 or 3 axes");
    std::size_t total = 1;
    for (int d : dims_) {
      if (d <= 0) throw PreconditionError("map extents must be positive");
      total *= static_cast<std::size_t>(d);
    }
    if (cells_.empty()) cells_.assign(total, 0);
    if (cells_.size() != total) throw PreconditionError("cell count does not match map extents");
    for (auto& c : cells_) c = c ? 1 : 0;
    if (agent) set_agent(*agent);
    if (goal) set_goal(*goal);
  }

  int dimension() const noexcept { return static_cast<int>(dims_.size()); }
  const std::vector<int>& dims() const noexcept { return dims_; }
  int extent(int axis) const noexcept { return axis < dimension() ? dims_[axis] : 1; }
  std::size_t cell_count() const noexcept { return cells_.size(); }
  const std::vector<std::uint8_t>& cells() const noexcept { return cells_; }

  bool in_bounds(Point p) const noexcept {
    if (p.x < 0 || p.y < 0 || p.z < 0) return false;
    if (p.x >= extent(0) || p.y >= extent(1)) return false;
    return dimension() == 3 ? p.z < extent(2) : p.z == 0;
  }

  std::size_t index(Point p) const noexcept {
    return static_cast<std::size_t>(p.x) +
           static_cast<std::size_t>(extent(0)) *
               (static_cast<std::size_t>(p.y) + static_cast<std::size_t>(extent(1)) * static_cast<std::size_t>(p.z));
  }

  Point point_at(std::size_t idx) const noexcept {
    const auto w = static_cast<std::size_t>(extent(0));
    const auto h = static_cast<std::size_t>(extent(1));
    return {static_cast<int>(idx % w), static_cast<int>((idx / w) % h), static_cast<int>(idx / (w * h))};
  }

  bool blocked(Point p) const noexcept { return cells_[index(p)] != 0; }
  bool free(Point p) const noexcept { return in_bounds(p) && cells_[index(p)] == 0; }

  void set_blocked(Point p, bool value) {
    if (!in_bounds(p)) throw PreconditionError("cell " + to_string(p) + " out of bounds");
    cells_[index(p)] = value ? 1 : 0;
  }

  std::size_t free_count() const noexcept {
    return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{0}));
  }

  double obstacle_ratio() const noexcept {
    return static_cast<double>(cell_count() - free_count()) / static_cast<double>(cell_count());
  }

  const std::optional<Point>& agent() const noexcept { return agent_; }
  const std::optional<Point>& goal() const noexcept { return goal_; }

  void set_agent(std::optional<Point> p) {
    if (p) require_free(*p, "agent");
    agent_ = p;
  }
  void set_goal(std::optional<Point> p) {
    if (p) require_free(*p, "goal");
    goal_ = p;
  }

  // Re-checks the entity invariants after bulk cell edits.
  void validate() const {
    if (agent_) require_free(*agent_, "agent");
    if (goal_) require_free(*goal_, "goal");
  }

  friend bool operator==(const GridMap&, const GridMap&) = default;

 private:
  void require_free(Point p, const char* what) const {
    if (!in_bounds(p)) throw PreconditionError(std::string(what) + " " + to_string(p) + " out of bounds");
    if (blocked(p)) throw PreconditionError(std::string(what) + " " + to_string(p) + " on a blocked cell");
  }

  std::vector<int> dims_;
  std::vector<std::uint8_t> cells_;
  std::optional<Point> agent_;
  std::optional<Point> goal_;
};

struct Move {
  Point offset;
  double cost = 1.0;
  // Partial offsets that must be free for the move to respect the corner rule.
  std::vector<Point> corners;
};

// 8-connected (2D) or 26-connected (3D) moves, ordered lexicographically by offset.
struct MoveSet {
  std::vector<Move> moves;
  bool corner_rule = true;

  static MoveSet for_dimension(int dimension, bool corner_rule = true) {
    MoveSet set;
    set.corner_rule = corner_rule;
    const int zr = dimension == 3 ? 1 : 0;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -zr; dz <= zr; ++dz) {
          const Point o{dx, dy, dz};
          const int changed = (dx != 0) + (dy != 0) + (dz != 0);
          if (changed == 0) continue;
          Move m{o, std::sqrt(static_cast<double>(changed)), {}};
          // every non-empty proper subset of the changed axes
          std::array<int, 3> axes{};
          int n = 0;
          for (int a = 0; a < 3; ++a)
            if (o[a] != 0) axes[n++] = a;
          for (int mask = 1; mask < (1 << n) - 1; ++mask) {
            Point c{};
            for (int i = 0; i < n; ++i)
              if (mask & (1 << i)) c[axes[i]] = o[axes[i]];
            m.corners.push_back(c);
          }
          set.moves.push_back(std::move(m));
        }
    return set;
  }

  std::size_t size() const noexcept { return moves.size(); }

  // Index of the move with this offset, or -1.
  int index_of(Point offset) const noexcept {
    for (std::size_t i = 0; i < moves.size(); ++i)
      if (moves[i].offset == offset) return static_cast<int>(i);
    return -1;
  }
};

struct Neighbor {
  Point point;
  double cost = 0.0;
  int move_index = 0;
  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

inline bool move_allowed(const GridMap& map, Point p, const Move& m, bool corner_rule) noexcept {
  const Point q = p + m.offset;
  if (!map.free(q)) return false;
  if (corner_rule)
    for (const Point& c : m.corners)
      if (!map.free(p + c)) return false;
  return true;
}

// Calls fn(Neighbor) for each legal successor of a free cell, in move order.
template <typename Fn>
void for_each_neighbor(const GridMap& map, Point p, const MoveSet& moves, Fn&& fn) {
  for (std::size_t i = 0; i < moves.moves.size(); ++i) {
    const Move& m = moves.moves[i];
    if (move_allowed(map, p, m, moves.corner_rule)) fn(Neighbor{p + m.offset, m.cost, static_cast<int>(i)});
  }
}

inline std::vector<Neighbor> neighbors(const GridMap& map, Point p, const MoveSet& moves) {
  if (!map.in_bounds(p)) throw PreconditionError("neighbors: cell " + to_string(p) + " out of bounds");
  if (map.blocked(p)) throw PreconditionError("neighbors: cell " + to_string(p) + " is blocked");
  std::vector<Neighbor> out;
  for_each_neighbor(map, p, moves, [&](const Neighbor& n) { out.push_back(n); });
  return out;
}

// True when `b` is one legal move away from `a`.
inline bool adjacent(const GridMap& map, Point a, Point b, const MoveSet& moves) noexcept {
  const int idx = moves.index_of(b - a);
  return idx >= 0 && map.free(a) && move_allowed(map, a, moves.moves[static_cast<std::size_t>(idx)], moves.corner_rule);
}

// Visits, in order, every cell whose closed square (cube) touches the segment
// between the centres of a and b. Where the segment passes exactly through a
// cell corner all cells sharing that corner are visited. Stops early when fn
// returns false; returns false in that case.
//
// Works in doubled coordinates: centres sit on even integers, cell boundaries
// on odd ones, so every crossing parameter is an exact rational.
template <typename Fn>
bool traverse_segment(Point a, Point b, Fn&& fn) {
  std::array<std::int64_t, 3> span{}, crossed{};
  std::array<int, 3> step{};
  for (int i = 0; i < 3; ++i) {
    const int d = b[i] - a[i];
    span[i] = 2 * static_cast<std::int64_t>(std::abs(d));
    step[i] = (d > 0) - (d < 0);
  }
  Point cur = a;
  if (!fn(cur)) return false;
  for (;;) {
    // next crossing on axis i happens at t = (1 + 2 k_i) / span_i
    int best = -1;
    std::array<bool, 3> tie{};
    for (int i = 0; i < 3; ++i) {
      if (span[i] == 0 || 1 + 2 * crossed[i] >= span[i]) continue;
      if (best < 0) {
        best = i;
        tie = {};
        tie[i] = true;
        continue;
      }
      const std::int64_t lhs = (1 + 2 * crossed[i]) * span[best];
      const std::int64_t rhs = (1 + 2 * crossed[best]) * span[i];
      if (lhs < rhs) {
        best = i;
        tie = {};
        tie[i] = true;
      } else if (lhs == rhs) {
        tie[i] = true;
      }
    }
    if (best < 0) break;
    std::array<int, 3> axes{};
    int n = 0;
    for (int i = 0; i < 3; ++i)
      if (tie[i]) axes[n++] = i;
    for (int mask = 1; mask < (1 << n) - 1; ++mask) {
      Point c = cur;
      for (int k = 0; k < n; ++k)
        if (mask & (1 << k)) c[axes[k]] += step[axes[k]];
      if (!fn(c)) return false;
    }
    for (int k = 0; k < n; ++k) {
      cur[axes[k]] += step[axes[k]];
      ++crossed[axes[k]];
    }
    if (!fn(cur)) return false;
  }
  return true;
}

inline std::vector<Point> supercover(Point a, Point b) {
  std::vector<Point> cells;
  traverse_segment(a, b, [&](Point c) {
    cells.push_back(c);
    return true;
  });
  return cells;
}

inline bool line_of_sight(const GridMap& map, Point a, Point b) {
  if (!map.in_bounds(a) || !map.in_bounds(b)) throw PreconditionError("line_of_sight: endpoint out of bounds");
  return traverse_segment(a, b, [&](Point c) { return !map.blocked(c); });
}

// Diagonal-stepping digital line from a to b: max |delta| steps, each axis
// advancing at most one cell per step. Used for greedy motion along the m-line.
inline std::vector<Point> grid_line(Point a, Point b) {
  const Point d = b - a;
  const int n = std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)});
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  auto round_div = [](std::int64_t num, std::int64_t den) {
    // nearest integer to num/den (den > 0), halves away from zero
    const std::int64_t q = (2 * std::abs(num) + den) / (2 * den);
    return static_cast<int>(num < 0 ? -q : q);
  };
  for (int k = 0; k <= n; ++k) {
    if (n == 0) {
      out.push_back(a);
      break;
    }
    out.push_back({a.x + round_div(static_cast<std::int64_t>(k) * d.x, n),
                   a.y + round_div(static_cast<std::int64_t>(k) * d.y, n),
                   a.z + round_div(static_cast<std::int64_t>(k) * d.z, n)});
  }
  return out;
}

// Per-cell Euclidean distance (metres) to the nearest obstacle.
struct DistanceField {
  std::vector<int> dims;
  std::vector<double> values;

  double at(const GridMap& map, Point p) const { return values[map.index(p)]; }
};

namespace detail {

// Exact 1D squared distance transform (lower envelope of parabolas).
inline void sdt_1d(const double* f, std::size_t n, double* d, std::vector<int>& v, std::vector<double>& z) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  v.assign(n, 0);
  z.assign(n + 1, 0.0);
  std::size_t k = 0;
  std::size_t first = 0;
  while (first < n && f[first] == inf) ++first;
  if (first == n) {
    std::fill(d, d + n, inf);
    return;
  }
  v[0] = static_cast<int>(first);
  z[0] = -inf;
  z[1] = inf;
  for (std::size_t q = first + 1; q < n; ++q) {
    if (f[q] == inf) continue;
    for (;;) {
      const double vk = v[k];
      const double s = ((f[q] + static_cast<double>(q * q)) - (f[v[k]] + vk * vk)) / (2.0 * (static_cast<double>(q) - vk));
      if (s <= z[k] && k > 0) {
        --k;
        continue;
      }
      ++k;
      v[k] = static_cast<int>(q);
      z[k] = s;
      z[k + 1] = inf;
      break;
    }
  }
  k = 0;
  for (std::size_t q = 0; q < n; ++q) {
    while (z[k + 1] < static_cast<double>(q)) ++k;
    const double diff = static_cast<double>(q) - v[k];
    d[q] = diff * diff + f[v[k]];
  }
}

}  // namespace detail

// Distance from every free cell centre to the nearest blocked cell centre, with
// the map border acting as an obstacle face: a cell's distance to the border is
// (coordinate + 0.5) towards the low edge and (extent - coordinate - 0.5) towards
// the high edge. Blocked cells map to 0.
inline DistanceField distance_transform(const GridMap& map) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const std::size_t total = map.cell_count();
  std::vector<double> sq(total);
  for (std::size_t i = 0; i < total; ++i) sq[i] = map.cells()[i] ? 0.0 : inf;

  std::vector<int> v;
  std::vector<double> z, line, out;
  const int dim = map.dimension();
  for (int axis = 0; axis < dim; ++axis) {
    const auto n = static_cast<std::size_t>(map.extent(axis));
    std::size_t stride = 1;
    for (int a = 0; a < axis; ++a) stride *= static_cast<std::size_t>(map.extent(a));
    line.resize(n);
    out.resize(n);
    for (std::size_t base = 0; base < total; ++base) {
      // visit each line once: base must have coordinate 0 along `axis`
      if ((base / stride) % n != 0) continue;
      for (std::size_t i = 0; i < n; ++i) line[i] = sq[base + i * stride];
      detail::sdt_1d(line.data(), n, out.data(), v, z);
      for (std::size_t i = 0; i < n; ++i) sq[base + i * stride] = out[i];
    }
  }

  DistanceField field{map.dims(), std::vector<double>(total)};
  for (std::size_t i = 0; i < total; ++i) {
    if (map.cells()[i]) {
      field.values[i] = 0.0;
      continue;
    }
    const Point p = map.point_at(i);
    double border = inf;
    for (int axis = 0; axis < dim; ++axis) {
      border = std::min(border, p[axis] + 0.5);
      border = std::min(border, map.extent(axis) - p[axis] - 0.5);
    }
    field.values[i] = std::min(std::sqrt(sq[i]), border);
  }
  return field;
}

// One planning problem. The map is shared and never mutated while planners run.
struct Scenario {
  std::shared_ptr<const GridMap> map;
  Point start;
  Point goal;
  std::uint64_t seed = 0;

  const GridMap& grid() const { return *map; }

  void validate() const {
    if (!map) throw PreconditionError("scenario has no map");
    if (!map->free(start)) throw PreconditionError("scenario start " + to_string(start) + " is not a free cell");
    if (!map->free(goal)) throw PreconditionError("scenario goal " + to_string(goal) + " is not a free cell");
  }

  // Scenario using the map's own agent and goal.
  static Scenario from_map(std::shared_ptr<const GridMap> map, std::uint64_t seed) {
    if (!map->agent() || !map->goal()) throw PreconditionError("map has no agent/goal entities");
    Scenario s{map, *map->agent(), *map->goal(), seed};
    s.validate();
    return s;
  }
};

inline bool is_solvable(const Scenario& s, const MoveSet& moves) {
  s.validate();
  if (s.start == s.goal) return true;
  const GridMap& map = s.grid();
  std::vector<std::uint8_t> seen(map.cell_count(), 0);
  std::deque<Point> queue{s.start};
  seen[map.index(s.start)] = 1;
  while (!queue.empty()) {
    const Point p = queue.front();
    queue.pop_front();
    bool found = false;
    for_each_neighbor(map, p, moves, [&](const Neighbor& n) {
      auto& flag = seen[map.index(n.point)];
      if (flag) return;
      flag = 1;
      if (n.point == s.goal) found = true;
      queue.push_back(n.point);
    });
    if (found) return true;
  }
  return false;
}

// Ordered cell sequence with its Euclidean length in metres.
struct Path {
  std::vector<Point> points;
  double cost = 0.0;

  // Segments are grouped by squared length before summing, so two paths made of
  // the same moves in a different order have bit-identical lengths.
  static double length_of(const std::vector<Point>& pts) {
    std::map<std::int64_t, std::size_t> by_sq;
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const std::int64_t dx = pts[i].x - pts[i - 1].x, dy = pts[i].y - pts[i - 1].y, dz = pts[i].z - pts[i - 1].z;
      ++by_sq[dx * dx + dy * dy + dz * dz];
    }
    double c = 0.0;
    for (const auto& [sq, n] : by_sq) c += static_cast<double>(n) * std::sqrt(static_cast<double>(sq));
    return c;
  }

  static Path from_points(std::vector<Point> pts) {
    Path p;
    p.cost = length_of(pts);
    p.points = std::move(pts);
    return p;
  }

  friend bool operator==(const Path&, const Path&) = default;
};

enum class Connectivity { moves, line_of_sight };

// Checks every Path invariant against the map. Returns an empty string when the
// path is valid, otherwise the reason it is not.
inline std::string path_violation(const GridMap& map, const Path& path, Point start, Point goal,
                                  const MoveSet& moves, Connectivity rule) {
  if (path.points.empty()) return "path is empty";
  if (path.points.front() != start) return "path does not begin at the start";
  if (path.points.back() != goal) return "path does not end at the goal";
  for (std::size_t i = 0; i < path.points.size(); ++i) {
    const Point p = path.points[i];
    if (!map.in_bounds(p)) return "point " + std::to_string(i) + " " + to_string(p) + " is out of bounds";
    if (map.blocked(p)) return "point " + std::to_string(i) + " " + to_string(p) + " is blocked";
    if (map.dimension() == 2 && p.z != 0) return "point " + std::to_string(i) + " has a z coordinate on a 2D map";
  }
  for (std::size_t i = 1; i < path.points.size(); ++i) {
    const Point a = path.points[i - 1], b = path.points[i];
    const bool ok = rule == Connectivity::moves ? adjacent(map, a, b, moves) : line_of_sight(map, a, b);
    if (!ok) return "segment " + std::to_string(i - 1) + " " + to_string(a) + "->" + to_string(b) + " is not connected";
  }
  if (std::abs(Path::length_of(path.points) - path.cost) > 1e-9) return "reported cost does not match segment lengths";
  return {};
}

}  // namespace pathbench
