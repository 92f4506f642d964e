#include <gtest/gtest.h>

#include <bitset>
#include <random>
#include <set>

#include "pathbench/grid.hpp"
#include "test_support.hpp"

using namespace pathbench;

TEST(MoveSet, TwoDimensionalCostsAndOrder) {
  const auto moves = MoveSet::for_dimension(2);
  ASSERT_EQ(moves.size(), 8u);
  for (std::size_t i = 1; i < moves.size(); ++i) EXPECT_LT(moves.moves[i - 1].offset, moves.moves[i].offset);
  for (const auto& m : moves.moves) {
    const bool diagonal = m.offset.x != 0 && m.offset.y != 0;
    EXPECT_DOUBLE_EQ(m.cost, diagonal ? std::sqrt(2.0) : 1.0);
    EXPECT_EQ(m.offset.z, 0);
  }
}

TEST(MoveSet, ThreeDimensionalCosts) {
  const auto moves = MoveSet::for_dimension(3);
  ASSERT_EQ(moves.size(), 26u);
  int counts[4] = {};
  for (const auto& m : moves.moves) {
    const int changed = (m.offset.x != 0) + (m.offset.y != 0) + (m.offset.z != 0);
    ++counts[changed];
    EXPECT_DOUBLE_EQ(m.cost, std::sqrt(double(changed)));
    EXPECT_GT(m.cost, 0.0);
  }
  EXPECT_EQ(counts[1], 6);
  EXPECT_EQ(counts[2], 12);
  EXPECT_EQ(counts[3], 8);
}

TEST(Neighbors, EmptyMapCentre) {
  GridMap m2({3, 3});
  EXPECT_EQ(neighbors(m2, {1, 1}, MoveSet::for_dimension(2)).size(), 8u);
  GridMap m3({3, 3, 3});
  EXPECT_EQ(neighbors(m3, {1, 1, 1}, MoveSet::for_dimension(3)).size(), 26u);
}

TEST(Neighbors, CornerRuleDropsCutDiagonal) {
  // y grows downward: north of (1,1) is (1,0), east is (2,1)
  GridMap m({3, 3});
  m.set_blocked({1, 0}, true);
  m.set_blocked({2, 1}, true);
  const auto moves = MoveSet::for_dimension(2);
  const auto ns = neighbors(m, {1, 1}, moves);
  for (const auto& n : ns) EXPECT_NE(n.point, (Point{2, 0}));
  // cardinal moves survive whenever their target is free
  std::set<Point> got;
  for (const auto& n : ns) got.insert(n.point);
  EXPECT_TRUE(got.count({0, 1}));
  EXPECT_TRUE(got.count({1, 2}));
  // without the rule the diagonal comes back
  auto loose = moves;
  loose.corner_rule = false;
  bool has_ne = false;
  for (const auto& n : neighbors(m, {1, 1}, loose)) has_ne |= n.point == Point{2, 0};
  EXPECT_TRUE(has_ne);
}

TEST(Neighbors, RejectsBlockedOrOutside) {
  GridMap m({3, 3});
  m.set_blocked({0, 0}, true);
  const auto moves = MoveSet::for_dimension(2);
  EXPECT_THROW(neighbors(m, {0, 0}, moves), PreconditionError);
  EXPECT_THROW(neighbors(m, {3, 0}, moves), PreconditionError);
  EXPECT_THROW(neighbors(m, {-1, 1}, moves), PreconditionError);
}

TEST(Neighbors, MatchesLonghandFilterOnRandomMaps) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto dims = seed % 2 ? std::vector<int>{6, 5, 4} : std::vector<int>{9, 7};
    const auto map = pbtest::random_map(dims, 0.3, seed);
    const auto moves = MoveSet::for_dimension(map.dimension());
    for (const Point p : pbtest::free_cells(map)) {
      std::vector<Point> expected;
      for (const auto& m : moves.moves)
        if (pbtest::oracle_move_ok(map, p, p + m.offset)) expected.push_back(p + m.offset);
      std::vector<Point> got;
      for (const auto& n : neighbors(map, p, moves)) got.push_back(n.point);
      ASSERT_EQ(got, expected) << "seed " << seed << " at " << to_string(p);
    }
  }
}

TEST(LineOfSight, TrivialCases) {
  GridMap m({5, 5});
  EXPECT_TRUE(line_of_sight(m, {2, 2}, {2, 2}));
  EXPECT_TRUE(line_of_sight(m, {0, 3}, {4, 3}));
  for (int y = 0; y < 5; ++y) m.set_blocked({2, y}, true);
  EXPECT_FALSE(line_of_sight(m, {0, 0}, {4, 4}));
  EXPECT_FALSE(line_of_sight(m, {0, 3}, {4, 1}));
  EXPECT_TRUE(line_of_sight(m, {0, 0}, {1, 4}));
}

TEST(LineOfSight, FullBlockedColumnMatchesBruteForce) {
  // 5x5, column x=2 blocked: every segment from the left half to the right half
  // must cross it, and the brute-force cover must contain an x=2 cell.
  GridMap m({5, 5});
  for (int y = 0; y < 5; ++y) m.set_blocked({2, y}, true);
  for (int ay = 0; ay < 5; ++ay)
    for (int by = 0; by < 5; ++by) {
      const auto cover = pbtest::brute_supercover({0, ay}, {4, by});
      const bool crosses = std::any_of(cover.begin(), cover.end(), [](Point c) { return c.x == 2; });
      EXPECT_TRUE(crosses);
      EXPECT_FALSE(line_of_sight(m, {0, ay}, {4, by}));
    }
}

TEST(LineOfSight, TraversalEqualsBruteForceSupercover) {
  std::mt19937 eng(7);
  std::uniform_int_distribution<int> c(-6, 6);
  for (int trial = 0; trial < 3000; ++trial) {
    const bool three = trial % 3 == 0;
    const Point a{c(eng), c(eng), three ? c(eng) : 0};
    const Point b{c(eng), c(eng), three ? c(eng) : 0};
    auto got = supercover(a, b);
    // consecutive cells touch
    for (std::size_t i = 1; i < got.size(); ++i) {
      const Point d = got[i] - got[i - 1];
      ASSERT_LE(std::max({std::abs(d.x), std::abs(d.y), std::abs(d.z)}), 1);
    }
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got, pbtest::brute_supercover(a, b)) << to_string(a) << " -> " << to_string(b);
  }
}

TEST(LineOfSight, SymmetricOnRandomMaps) {
  std::mt19937 eng(11);
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto map = pbtest::random_map(seed % 4 == 0 ? std::vector<int>{8, 8, 8} : std::vector<int>{16, 16}, 0.2, seed);
    const auto cells = pbtest::free_cells(map);
    for (int k = 0; k < 200; ++k) {
      const Point a = cells[eng() % cells.size()];
      const Point b = map.point_at(eng() % map.cell_count());
      ASSERT_EQ(line_of_sight(map, a, b), line_of_sight(map, b, a));
    }
  }
}

TEST(LineOfSight, DiagonalStepAgreesWithCornerRule) {
  auto map = pbtest::random_map({12, 12}, 0.35, 5);
  const auto moves = MoveSet::for_dimension(2);
  for (const Point p : pbtest::free_cells(map))
    for (const auto& m : moves.moves) {
      const Point q = p + m.offset;
      if (!map.free(q)) continue;
      EXPECT_EQ(line_of_sight(map, p, q), adjacent(map, p, q, moves));
    }
}

TEST(GridLine, StepsAreUnitAndCostIsOctile) {
  for (const auto& [a, b] : std::vector<std::pair<Point, Point>>{{{0, 0}, {7, 3}}, {{5, 9}, {1, 2}}, {{3, 3}, {3, 3}}}) {
    const auto line = grid_line(a, b);
    EXPECT_EQ(line.front(), a);
    EXPECT_EQ(line.back(), b);
    for (std::size_t i = 1; i < line.size(); ++i) {
      const Point d = line[i] - line[i - 1];
      EXPECT_LE(std::max(std::abs(d.x), std::abs(d.y)), 1);
    }
    const int dx = std::abs(b.x - a.x), dy = std::abs(b.y - a.y);
    const double octile = std::sqrt(2.0) * std::min(dx, dy) + std::abs(dx - dy);
    EXPECT_NEAR(Path::length_of(line), octile, 1e-12);
  }
}

TEST(DistanceTransform, Examples) {
  GridMap free3({3, 3});
  auto f = distance_transform(free3);
  EXPECT_DOUBLE_EQ(f.at(free3, {1, 1}), pbtest::brute_clearance(free3, {1, 1}));
  EXPECT_DOUBLE_EQ(f.at(free3, {1, 1}), 1.5);

  GridMap m({7, 7});
  m.set_blocked({3, 3}, true);
  f = distance_transform(m);
  EXPECT_DOUBLE_EQ(f.at(m, {3, 2}), 1.0);
  EXPECT_DOUBLE_EQ(f.at(m, {4, 3}), 1.0);
  EXPECT_DOUBLE_EQ(f.at(m, {3, 3}), 0.0);
}

TEST(DistanceTransform, AgreesWithBruteForce) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::mt19937 eng(static_cast<unsigned>(seed));
    const bool three = seed % 5 == 0;
    const std::vector<int> dims = three ? std::vector<int>{1 + int(eng() % 6), 1 + int(eng() % 6), 1 + int(eng() % 6)}
                                        : std::vector<int>{1 + int(eng() % 12), 1 + int(eng() % 12)};
    const auto map = pbtest::random_map(dims, (seed % 7) / 10.0, seed);
    const auto field = distance_transform(map);
    for (std::size_t i = 0; i < map.cell_count(); ++i)
      ASSERT_NEAR(field.values[i], pbtest::brute_clearance(map, map.point_at(i)), 1e-9) << "seed " << seed;
  }
}

TEST(Solvability, TrivialCases) {
  auto map = std::make_shared<GridMap>(std::vector<int>{5, 5});
  const auto moves = MoveSet::for_dimension(2);
  EXPECT_TRUE(is_solvable(Scenario{map, {2, 2}, {2, 2}, 0}, moves));
  auto walled = std::make_shared<GridMap>(*map);
  for (int y = 0; y < 5; ++y) walled->set_blocked({2, y}, true);
  EXPECT_FALSE(is_solvable(Scenario{walled, {0, 0}, {4, 4}, 0}, moves));
  EXPECT_TRUE(is_solvable(Scenario{map, {0, 0}, {4, 4}, 0}, moves));
}

TEST(Solvability, MatchesTransitiveClosure) {
  const auto moves = MoveSet::for_dimension(2);
  constexpr int N = 16 * 16;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto map = std::make_shared<GridMap>(pbtest::random_map({16, 16}, 0.1 + 0.3 * (seed % 5) / 4.0, seed));
    std::vector<std::bitset<N>> reach(N);
    for (int i = 0; i < N; ++i) {
      const Point p = map->point_at(i);
      if (map->blocked(p)) continue;
      reach[i].set(i);
      for (int j = 0; j < N; ++j)
        if (pbtest::oracle_move_ok(*map, p, map->point_at(j))) reach[i].set(j);
    }
    for (int k = 0; k < N; ++k)
      for (int i = 0; i < N; ++i)
        if (reach[i].test(k)) reach[i] |= reach[k];
    const auto cells = pbtest::free_cells(*map);
    std::mt19937 eng(static_cast<unsigned>(seed));
    for (int t = 0; t < 40; ++t) {
      const Point s = cells[eng() % cells.size()], g = cells[eng() % cells.size()];
      ASSERT_EQ(is_solvable(Scenario{map, s, g, 0}, moves), reach[map->index(s)].test(map->index(g)));
    }
  }
}

TEST(GridMapInvariants, EntitiesMustBeFree) {
  GridMap m({4, 4});
  m.set_blocked({1, 1}, true);
  EXPECT_THROW(m.set_agent(Point{1, 1}), PreconditionError);
  EXPECT_THROW(m.set_goal(Point{4, 0}), PreconditionError);
  EXPECT_THROW(GridMap({4, 4}, std::vector<std::uint8_t>(15)), PreconditionError);
  EXPECT_THROW(GridMap(std::vector<int>{4}), PreconditionError);
  m.set_agent(Point{0, 0});
  EXPECT_EQ(m.point_at(m.index({3, 2})), (Point{3, 2}));
}
