#include <gtest/gtest.h>

#include <deque>
#include <random>

#include "pathbench/map_gen.hpp"
#include "test_support.hpp"

using namespace pathbench;

namespace {

// Flood fill from one free cell; true iff every free cell is reached.
bool fully_connected(const GridMap& map) {
  const auto moves = MoveSet::for_dimension(map.dimension());
  const auto cells = pbtest::free_cells(map);
  if (cells.empty()) return true;
  std::vector<char> seen(map.cell_count(), 0);
  std::deque<Point> q{cells.front()};
  seen[map.index(cells.front())] = 1;
  std::size_t reached = 1;
  while (!q.empty()) {
    const Point p = q.front();
    q.pop_front();
    for (const auto& n : neighbors(map, p, moves)) {
      if (seen[map.index(n.point)]) continue;
      seen[map.index(n.point)] = 1;
      ++reached;
      q.push_back(n.point);
    }
  }
  return reached == cells.size();
}

}  // namespace

TEST(Generate, UniformFillRespectsRange) {
  GenSpec spec;
  spec.kind = MapKind::uniform_random_fill;
  spec.dims = {64, 64};
  spec.fill_rate_range = RealRange{0.1, 0.3};
  spec.count = 40;
  spec.seed = 3;
  const auto maps = generate(spec);
  ASSERT_EQ(maps.size(), 40u);
  const double quantum = 1.0 / (64 * 64);
  for (const auto& m : maps) {
    EXPECT_GE(m.grid.obstacle_ratio(), 0.1 - quantum);
    EXPECT_LE(m.grid.obstacle_ratio(), 0.3 + quantum);
    ASSERT_TRUE(m.grid.agent() && m.grid.goal());
    EXPECT_NE(*m.grid.agent(), *m.grid.goal());
    EXPECT_TRUE(m.grid.free(*m.grid.agent()));
    EXPECT_TRUE(m.grid.free(*m.grid.goal()));
  }
}

TEST(Generate, ZeroFillIsEmpty) {
  GenSpec spec;
  spec.dims = {16, 16};
  spec.fill_rate_range = RealRange{0.0, 0.0};
  spec.count = 3;
  for (const auto& m : generate(spec)) EXPECT_EQ(m.grid.free_count(), m.grid.cell_count());
}

TEST(Generate, BlockKindIsUnionOfBoxes) {
  GenSpec spec;
  spec.kind = MapKind::block;
  spec.dims = {16, 16, 16};
  spec.obstacle_count_range = IntRange{1, 6};
  spec.count = 30;
  spec.seed = 9;
  for (const auto& m : generate(spec)) {
    EXPECT_GE(m.boxes.size(), 1u);
    EXPECT_LE(m.boxes.size(), 6u);
    for (std::size_t i = 0; i < m.grid.cell_count(); ++i) {
      const Point p = m.grid.point_at(i);
      const bool in_box = std::any_of(m.boxes.begin(), m.boxes.end(), [&](const Box& b) { return b.contains(p); });
      ASSERT_EQ(m.grid.blocked(p), in_box);
    }
  }
}

TEST(Generate, HouseMapsAreConnected) {
  for (const auto& dims : {std::vector<int>{64, 64}, std::vector<int>{16, 16, 16}, std::vector<int>{28, 28, 28}}) {
    GenSpec spec;
    spec.kind = MapKind::house;
    spec.dims = dims;
    if (dims[0] < 64) {
      spec.room_min_range = IntRange{3, 4};
      spec.room_max_range = IntRange{6, 9};
    } else {
      spec.room_min_range = IntRange{8, 15};
      spec.room_max_range = IntRange{35, 45};
    }
    spec.count = 25;
    spec.seed = 21;
    for (const auto& m : generate(spec)) {
      EXPECT_LT(m.grid.free_count(), m.grid.cell_count()) << "house without walls";
      EXPECT_TRUE(fully_connected(m.grid));
    }
  }
}

TEST(Generate, HouseRejectsInfeasibleRooms) {
  GenSpec spec;
  spec.kind = MapKind::house;
  spec.dims = {16, 16};
  spec.room_min_range = IntRange{20, 22};
  spec.room_max_range = IntRange{30, 40};
  EXPECT_THROW(generate(spec), GenerationError);
}

TEST(Generate, RejectsBadSpecs) {
  GenSpec spec;
  spec.dims = {3, 10};
  EXPECT_THROW(generate(spec), GenerationError);
  spec.dims = {10, 10};
  spec.fill_rate_range = RealRange{0.4, 0.2};
  EXPECT_THROW(generate(spec), GenerationError);
  spec.fill_rate_range = RealRange{1.0, 1.0};
  EXPECT_THROW(generate(spec), GenerationError);
}

TEST(Generate, DeterministicForSeed) {
  for (auto kind : {MapKind::uniform_random_fill, MapKind::block, MapKind::house, MapKind::point_cloud}) {
    GenSpec spec;
    spec.kind = kind;
    spec.dims = {32, 32};
    spec.room_min_range = IntRange{4, 6};
    spec.room_max_range = IntRange{10, 14};
    spec.count = 5;
    spec.seed = 77;
    EXPECT_EQ(generate(spec), generate(spec));
    auto other = spec;
    other.seed = 78;
    EXPECT_NE(generate(spec), generate(other));
    // map i does not depend on how many maps were requested
    auto longer = spec;
    longer.count = 8;
    EXPECT_EQ(generate(longer)[4], generate(spec)[4]);
  }
}

TEST(Generate, PointCloudKind) {
  GenSpec spec;
  spec.kind = MapKind::point_cloud;
  spec.dims = {32, 24};
  spec.count = 5;
  spec.seed = 4;
  for (const auto& m : generate(spec)) {
    ASSERT_TRUE(m.cloud.has_value());
    EXPECT_GE(m.boxes.size(), 1u);
    EXPECT_LE(m.boxes.size(), 6u);
    for (const auto& p : m.cloud->points) {
      EXPECT_GE(p[0], 0.0);
      EXPECT_LE(p[0], 32.0);
      EXPECT_GE(p[1], 0.0);
      EXPECT_LE(p[1], 24.0);
    }
    EXPECT_EQ(m.grid, [&] {
      GridMap g = rasterize(*m.cloud, 1.0);
      g.set_agent(m.grid.agent());
      g.set_goal(m.grid.goal());
      return g;
    }());
  }
}

TEST(Rasterize, TrivialCases) {
  PointCloudMap pc;
  pc.bounds_max = {8, 8, 0};
  EXPECT_EQ(rasterize(pc, 1.0).free_count(), 64u);
  pc.points.push_back({2.5, 3.5, 0});
  const auto g = rasterize(pc, 1.0);
  EXPECT_EQ(g.free_count(), 63u);
  EXPECT_TRUE(g.blocked({2, 3}));
  PointCloudMap empty_bounds;
  EXPECT_THROW(rasterize(empty_bounds, 1.0), PreconditionError);
  EXPECT_THROW(rasterize(pc, 0.0), PreconditionError);
}

TEST(Rasterize, MatchesDirectCellTest) {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> ux(0.0, 10.0), uy(0.0, 6.0);
  PointCloudMap pc;
  pc.bounds_max = {10, 6, 0};
  for (int i = 0; i < 1000; ++i) pc.points.push_back({ux(eng), uy(eng), 0});
  const double res = 2.0;
  const auto g = rasterize(pc, res);
  ASSERT_EQ(g.dims(), (std::vector<int>{20, 12}));
  for (int x = 0; x < 20; ++x)
    for (int y = 0; y < 12; ++y) {
      bool any = false;
      for (const auto& p : pc.points)
        any |= p[0] >= x / res && p[0] < (x + 1) / res && p[1] >= y / res && p[1] < (y + 1) / res;
      EXPECT_EQ(g.blocked({x, y}), any);
    }
}

TEST(Transform, Operations) {
  GridMap m({6, 6});
  m.set_blocked({2, 2}, true);
  m.set_agent(Point{0, 0});
  m.set_goal(Point{5, 5});

  const auto moved = transform(m, SetAgent{{1, 0}});
  EXPECT_EQ(*moved.agent(), (Point{1, 0}));
  EXPECT_EQ(moved.cells(), m.cells());
  EXPECT_EQ(*m.agent(), (Point{0, 0}));

  const auto door = transform(m, PunchDoor{{2, 2}});
  EXPECT_FALSE(door.blocked({2, 2}));
  EXPECT_TRUE(m.blocked({2, 2}));
  EXPECT_THROW(transform(m, PunchDoor{{3, 3}}), PreconditionError);

  EXPECT_THROW(transform(m, SetGoal{{2, 2}}), PreconditionError);

  const auto inv = transform(m, InvertRegion{{1, 1}, {3, 3}});
  EXPECT_FALSE(inv.blocked({2, 2}));
  EXPECT_TRUE(inv.blocked({1, 1}));
  EXPECT_THROW(transform(m, InvertRegion{{0, 0}, {1, 1}}), PreconditionError);  // would bury the agent
}
