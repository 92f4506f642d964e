#pragma once

// Seeded procedural generation of synthetic maps: uniform random fill, block,
// house floorplans and point clouds. Map i of a spec draws from its own stream
// derive_seed(spec.seed, i), so output depends only on the spec.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pathbench/error.hpp"
#include "pathbench/grid.hpp"
#include "pathbench/rng.hpp"

namespace pathbench {

enum class MapKind { uniform_random_fill, block, house, point_cloud };

inline std::string kind_name(MapKind k) {
  switch (k) {
    case MapKind::uniform_random_fill: return "uniform_random_fill";
    case MapKind::block: return "block";
    case MapKind::house: return "house";
    case MapKind::point_cloud: return "point_cloud";
  }
  return "unknown";
}

inline std::optional<MapKind> parse_kind(const std::string& s) {
  if (s == "uniform_random_fill" || s == "uniform") return MapKind::uniform_random_fill;
  if (s == "block") return MapKind::block;
  if (s == "house") return MapKind::house;
  if (s == "point_cloud" || s == "pointcloud") return MapKind::point_cloud;
  return std::nullopt;
}

struct IntRange {
  int lo = 0;
  int hi = 0;
  friend bool operator==(const IntRange&, const IntRange&) = default;
};

struct RealRange {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const RealRange&, const RealRange&) = default;
};

struct GenSpec {
  MapKind kind = MapKind::uniform_random_fill;
  std::vector<int> dims{64, 64};
  std::optional<RealRange> fill_rate_range;
  std::optional<IntRange> obstacle_count_range;
  std::optional<IntRange> room_min_range;
  std::optional<IntRange> room_max_range;
  std::size_t count = 1;
  std::uint64_t seed = 0;

  // Ranges the kind needs but the caller left out get the generator defaults.
  GenSpec with_defaults() const {
    GenSpec s = *this;
    switch (kind) {
      case MapKind::uniform_random_fill:
        if (!s.fill_rate_range) s.fill_rate_range = RealRange{0.1, 0.3};
        break;
      case MapKind::block:
      case MapKind::point_cloud:
        if (!s.fill_rate_range) s.fill_rate_range = RealRange{0.1, 0.3};
        if (!s.obstacle_count_range) s.obstacle_count_range = IntRange{1, 6};
        break;
      case MapKind::house:
        if (!s.room_min_range) s.room_min_range = IntRange{8, 15};
        if (!s.room_max_range) s.room_max_range = IntRange{35, 45};
        break;
    }
    return s;
  }

  void validate() const {
    if (dims.size() != 2 && dims.size() != 3) throw GenerationError("dims must have 2 or 3 axes");
    for (int d : dims)
      if (d < 4) throw GenerationError("every map extent must be at least 4");
    if (fill_rate_range) {
      const auto [lo, hi] = *fill_rate_range;
      if (!(0.0 <= lo && lo <= hi && hi <= 1.0)) throw GenerationError("fill rate range must satisfy 0 <= lo <= hi <= 1");
    }
    for (const auto* r : {&obstacle_count_range, &room_min_range, &room_max_range})
      if (*r && !(0 <= (*r)->lo && (*r)->lo <= (*r)->hi)) throw GenerationError("integer ranges must satisfy 0 <= lo <= hi");
    if (kind == MapKind::house) {
      const int smallest = *std::min_element(dims.begin(), dims.end());
      if (room_min_range && room_min_range->lo > smallest)
        throw GenerationError("minimum room size " + std::to_string(room_min_range->lo) + " exceeds map extent " +
                              std::to_string(smallest));
      if (room_min_range && room_min_range->lo < 1) throw GenerationError("minimum room size must be at least 1");
      if (room_max_range && room_max_range->lo < 1) throw GenerationError("maximum room size must be at least 1");
    }
    if ((kind == MapKind::block || kind == MapKind::point_cloud) && obstacle_count_range && obstacle_count_range->hi < 1)
      throw GenerationError("obstacle count range must allow at least one obstacle");
  }
};

// Axis-aligned box of cells: lo inclusive, extent cells per axis.
struct Box {
  Point lo;
  Point size{1, 1, 1};

  bool contains(Point p) const noexcept {
    for (int a = 0; a < 3; ++a)
      if (p[a] < lo[a] || p[a] >= lo[a] + size[a]) return false;
    return true;
  }
  friend bool operator==(const Box&, const Box&) = default;
};

struct PointCloudMap {
  int dimension = 2;
  std::vector<std::array<double, 3>> points;
  std::array<double, 3> bounds_min{0, 0, 0};
  std::array<double, 3> bounds_max{0, 0, 0};
  std::optional<Point> agent;
  std::optional<Point> goal;
  friend bool operator==(const PointCloudMap&, const PointCloudMap&) = default;
};

struct GeneratedMap {
  std::size_t index = 0;
  MapKind kind = MapKind::uniform_random_fill;
  GridMap grid;
  // Block and point-cloud kinds: the boxes that make up the obstacles.
  std::vector<Box> boxes;
  // Point-cloud kind only; `grid` is its rasterisation at one cell per unit.
  std::optional<PointCloudMap> cloud;
  friend bool operator==(const GeneratedMap&, const GeneratedMap&) = default;
};

// Blocked iff at least one point falls inside the cell.
inline GridMap rasterize(const PointCloudMap& pc, double resolution) {
  if (!(resolution > 0.0)) throw PreconditionError("rasterize: resolution must be positive");
  if (pc.dimension != 2 && pc.dimension != 3) throw PreconditionError("rasterize: dimension must be 2 or 3");
  std::vector<int> dims;
  for (int a = 0; a < pc.dimension; ++a) {
    const double span = pc.bounds_max[a] - pc.bounds_min[a];
    if (!(span > 0.0)) throw PreconditionError("rasterize: empty bounds on axis " + std::to_string(a));
    dims.push_back(std::max(1, static_cast<int>(std::ceil(span * resolution - 1e-9))));
  }
  GridMap grid(dims);
  for (const auto& p : pc.points) {
    Point c;
    for (int a = 0; a < pc.dimension; ++a) {
      if (p[a] < pc.bounds_min[a] || p[a] > pc.bounds_max[a])
        throw PreconditionError("rasterize: point outside bounds");
      const int i = static_cast<int>(std::floor((p[a] - pc.bounds_min[a]) * resolution));
      c[a] = std::clamp(i, 0, dims[a] - 1);
    }
    grid.set_blocked(c, true);
  }
  return grid;
}

namespace detail {

inline std::size_t cell_total(const std::vector<int>& dims) {
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  return n;
}

// Picks two distinct free cells uniformly; false when fewer than two exist.
inline bool place_entities(GridMap& grid, Rng& rng) {
  std::vector<std::size_t> free_idx;
  for (std::size_t i = 0; i < grid.cell_count(); ++i)
    if (!grid.cells()[i]) free_idx.push_back(i);
  if (free_idx.size() < 2) return false;
  const std::size_t a = rng.index(free_idx.size());
  std::size_t b = rng.index(free_idx.size() - 1);
  if (b >= a) ++b;
  grid.set_agent(grid.point_at(free_idx[a]));
  grid.set_goal(grid.point_at(free_idx[b]));
  return true;
}

inline GridMap make_uniform(const GenSpec& spec, Rng& rng) {
  GridMap grid(spec.dims);
  const std::size_t total = grid.cell_count();
  const double rate = rng.uniform_real(spec.fill_rate_range->lo, spec.fill_rate_range->hi);
  const auto target = static_cast<std::size_t>(std::llround(rate * static_cast<double>(total)));
  if (target + 2 > total) throw GenerationError("fill rate leaves no room for agent and goal");
  for (std::size_t placed = 0; placed < target;) {
    const Point p = grid.point_at(rng.index(total));
    if (grid.blocked(p)) continue;
    grid.set_blocked(p, true);
    ++placed;
  }
  return grid;
}

inline std::vector<Box> random_boxes(const GenSpec& spec, Rng& rng) {
  const int d = static_cast<int>(spec.dims.size());
  const int k = static_cast<int>(rng.uniform_int(spec.obstacle_count_range->lo, spec.obstacle_count_range->hi));
  const double rate = rng.uniform_real(spec.fill_rate_range->lo, spec.fill_rate_range->hi);
  const double per_box = rate * static_cast<double>(cell_total(spec.dims)) / std::max(k, 1);
  const double side = std::pow(std::max(per_box, 1.0), 1.0 / d);
  std::vector<Box> boxes;
  for (int i = 0; i < k; ++i) {
    Box b;
    for (int a = 0; a < d; ++a) {
      const int lo = std::max(1, static_cast<int>(std::lround(side * 0.5)));
      const int hi = std::max(lo, static_cast<int>(std::lround(side * 1.5)));
      b.size[a] = std::min(static_cast<int>(rng.uniform_int(lo, hi)), spec.dims[a] - 1);
      b.lo[a] = static_cast<int>(rng.uniform_int(0, spec.dims[a] - b.size[a]));
    }
    boxes.push_back(b);
  }
  return boxes;
}

inline void stamp(GridMap& grid, const Box& b) {
  for (int z = b.lo.z; z < b.lo.z + b.size.z; ++z)
    for (int y = b.lo.y; y < b.lo.y + b.size.y; ++y)
      for (int x = b.lo.x; x < b.lo.x + b.size.x; ++x) grid.set_blocked({x, y, z}, true);
}

struct Region {
  Point lo;
  Point hi;  // exclusive
};

// Recursive rectangular partition with one-cell walls and one door per wall.
inline GridMap make_house(const GenSpec& spec, Rng& rng) {
  const int d = static_cast<int>(spec.dims.size());
  GridMap grid(spec.dims);
  const int room_min = static_cast<int>(rng.uniform_int(spec.room_min_range->lo, spec.room_min_range->hi));
  const int room_max = static_cast<int>(rng.uniform_int(spec.room_max_range->lo, spec.room_max_range->hi));

  std::vector<Point> doors;
  std::vector<Region> stack;
  Region whole;
  for (int a = 0; a < d; ++a) whole.hi[a] = spec.dims[a];
  if (d == 2) whole.hi.z = 1;
  stack.push_back(whole);

  while (!stack.empty()) {
    const Region r = stack.back();
    stack.pop_back();
    // widest axis that is too long and can host two rooms of room_min plus a wall
    int axis = -1;
    for (int a = 0; a < d; ++a) {
      const int len = r.hi[a] - r.lo[a];
      if (len > room_max && len >= 2 * room_min + 1 && (axis < 0 || len > r.hi[axis] - r.lo[axis])) axis = a;
    }
    if (axis < 0) continue;

    // a wall must not seal a door already cut into the region's boundary walls
    auto blocks_door = [&](int c) {
      for (const Point& door : doors) {
        if (door[axis] != c) continue;
        bool near = true;
        for (int a = 0; a < d && near; ++a)
          if (a != axis) near = door[a] >= r.lo[a] - 1 && door[a] <= r.hi[a];
        if (near) return true;
      }
      return false;
    };
    std::vector<int> candidates;
    for (int c = r.lo[axis] + room_min; c <= r.hi[axis] - 1 - room_min; ++c)
      if (!blocks_door(c)) candidates.push_back(c);
    if (candidates.empty()) continue;
    const int c = candidates[rng.index(candidates.size())];

    Box wall{r.lo, r.hi - r.lo};
    wall.lo[axis] = c;
    wall.size[axis] = 1;
    stamp(grid, wall);
    Point door;
    for (int a = 0; a < 3; ++a)
      door[a] = a == axis ? c : static_cast<int>(rng.uniform_int(r.lo[a], r.hi[a] - 1));
    grid.set_blocked(door, false);
    doors.push_back(door);

    Region left = r, right = r;
    left.hi[axis] = c;
    right.lo[axis] = c + 1;
    stack.push_back(right);
    stack.push_back(left);
  }
  return grid;
}

inline PointCloudMap make_cloud(const GenSpec& spec, Rng& rng, std::vector<Box>& boxes) {
  PointCloudMap pc;
  pc.dimension = static_cast<int>(spec.dims.size());
  for (int a = 0; a < pc.dimension; ++a) pc.bounds_max[a] = spec.dims[a];
  boxes = random_boxes(spec, rng);
  for (const Box& b : boxes) {
    double volume = 1.0;
    for (int a = 0; a < pc.dimension; ++a) volume *= b.size[a];
    const auto n = static_cast<std::size_t>(std::ceil(volume * 1.5));
    for (std::size_t i = 0; i < n; ++i) {
      std::array<double, 3> p{0, 0, 0};
      for (int a = 0; a < pc.dimension; ++a) p[a] = rng.uniform_real(b.lo[a], b.lo[a] + b.size[a]);
      pc.points.push_back(p);
    }
  }
  return pc;
}

}  // namespace detail

inline GeneratedMap generate_one(const GenSpec& raw, std::size_t index) {
  const GenSpec spec = raw.with_defaults();
  spec.validate();
  Rng rng(derive_seed(spec.seed, index));
  constexpr int kMaxAttempts = 100;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    GeneratedMap out;
    out.index = index;
    out.kind = spec.kind;
    switch (spec.kind) {
      case MapKind::uniform_random_fill:
        out.grid = detail::make_uniform(spec, rng);
        break;
      case MapKind::block:
        out.grid = GridMap(spec.dims);
        out.boxes = detail::random_boxes(spec, rng);
        for (const Box& b : out.boxes) detail::stamp(out.grid, b);
        break;
      case MapKind::house:
        out.grid = detail::make_house(spec, rng);
        break;
      case MapKind::point_cloud:
        out.cloud = detail::make_cloud(spec, rng, out.boxes);
        out.grid = rasterize(*out.cloud, 1.0);
        break;
    }
    if (!detail::place_entities(out.grid, rng)) continue;
    if (out.cloud) {
      out.cloud->agent = out.grid.agent();
      out.cloud->goal = out.grid.goal();
    }
    return out;
  }
  throw GenerationError("map " + std::to_string(index) + ": could not place agent and goal after " +
                        std::to_string(kMaxAttempts) + " attempts");
}

inline std::vector<GeneratedMap> generate(const GenSpec& spec) {
  std::vector<GeneratedMap> maps;
  maps.reserve(spec.count);
  for (std::size_t i = 0; i < spec.count; ++i) maps.push_back(generate_one(spec, i));
  return maps;
}

// Map modifications. Each returns a new map and leaves the input untouched.
struct SetAgent {
  Point cell;
};
struct SetGoal {
  Point cell;
};
struct PunchDoor {
  Point cell;
};
// Flips occupancy of every cell in [lo, hi] (inclusive corners).
struct InvertRegion {
  Point lo;
  Point hi;
};
using MapTransform = std::variant<SetAgent, SetGoal, PunchDoor, InvertRegion>;

inline GridMap transform(const GridMap& map, const MapTransform& t) {
  GridMap out = map;
  std::visit(
      [&](const auto& op) {
        using T = std::decay_t<decltype(op)>;
        if constexpr (std::is_same_v<T, SetAgent>) {
          out.set_agent(op.cell);
        } else if constexpr (std::is_same_v<T, SetGoal>) {
          out.set_goal(op.cell);
        } else if constexpr (std::is_same_v<T, PunchDoor>) {
          if (!out.in_bounds(op.cell) || !out.blocked(op.cell))
            throw PreconditionError("punch_door: " + to_string(op.cell) + " is not a wall cell");
          out.set_blocked(op.cell, false);
        } else {
          for (int z = op.lo.z; z <= op.hi.z; ++z)
            for (int y = op.lo.y; y <= op.hi.y; ++y)
              for (int x = op.lo.x; x <= op.hi.x; ++x) {
                const Point p{x, y, z};
                if (!out.in_bounds(p)) throw PreconditionError("invert_region: " + to_string(p) + " out of bounds");
                out.set_blocked(p, !out.blocked(p));
              }
        }
      },
      t);
  out.validate();
  return out;
}

}  // namespace pathbench
