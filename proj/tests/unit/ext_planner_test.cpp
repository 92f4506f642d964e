#include <gtest/gtest.h>

#include <chrono>

#include "pathbench/ext_planner.hpp"
#include "pathbench/metrics.hpp"
#include "pathbench/planners.hpp"
#include "test_support.hpp"

using namespace pathbench;

namespace {

std::string adapter(const std::string& mode) { return std::string("'") + PB_EXT_REFERENCE_PATH + "' " + mode; }

}  // namespace

TEST(External, EchoAdapterMatchesInProcessAStar) {
  const auto moves = MoveSet::for_dimension(2);
  int runs = 0;
  for (std::uint64_t seed = 0; runs < 12; ++seed) {
    Scenario s;
    pbtest::random_scenario({24, 24}, 0.3, 8000 + seed, s);  // includes unsolvable ones
    if (!s.map) continue;
    ++runs;
    const auto local = plan_astar(s, moves);
    const auto ext = run_external(adapter("echo-astar"), s, 20.0);
    EXPECT_EQ(ext.status, local.status) << ext.failure_reason;
    EXPECT_EQ(ext.path, local.path);
    EXPECT_EQ(ext.final_position, local.final_position);
    EXPECT_EQ(ext.trace.explored, local.trace.explored);
    EXPECT_EQ(ext.trace.node_bytes, local.trace.node_bytes);
    auto a = compute_metrics(s, local, local);
    auto b = compute_metrics(s, ext, local);
    a.time = b.time = 0.0;
    EXPECT_EQ(a, b);
  }
}

TEST(External, ThreeDimensionalRequest) {
  Scenario s;
  ASSERT_TRUE(pbtest::random_scenario({8, 8, 8}, 0.2, 4, s));
  const auto ext = run_external(adapter("echo-astar"), s, 20.0);
  EXPECT_EQ(ext.path, plan_astar(s, MoveSet::for_dimension(3)).path);
}

TEST(External, InvalidPathRejected) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Scenario s;
    if (!pbtest::random_scenario({16, 16}, seed ? 0.2 : 0.0, 9000 + seed, s)) continue;
    const auto ext = run_external(adapter("invalid-path"), s, 20.0);
    EXPECT_EQ(ext.status, PlanStatus::no_path);
    EXPECT_FALSE(ext.path.has_value());
    EXPECT_EQ(ext.failure_reason.rfind("invalid path", 0), 0u) << ext.failure_reason;
  }
}

TEST(External, SilentChildTimesOut) {
  Scenario s;
  ASSERT_TRUE(pbtest::random_scenario({8, 8}, 0.1, 1, s));
  const auto t0 = std::chrono::steady_clock::now();
  const auto ext = run_external(adapter("silent"), s, 0.4);
  const double took = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  EXPECT_EQ(ext.status, PlanStatus::budget_exhausted);
  EXPECT_LT(took, 5.0);
  EXPECT_GE(ext.wall_time, 0.35);
}

TEST(External, ProtocolFailuresCountAsFailures) {
  Scenario s;
  ASSERT_TRUE(pbtest::random_scenario({8, 8}, 0.1, 2, s));
  for (const auto& cmd : {adapter("garbage"), adapter("exit-nonzero"), std::string("true"), std::string("/nonexistent/planner"),
                          std::string("echo '{\"protocol\":\"pb-ext/1\",\"status\":\"maybe\"}'")}) {
    const auto ext = run_external(cmd, s, 5.0);
    EXPECT_EQ(ext.status, PlanStatus::no_path) << cmd;
    EXPECT_FALSE(ext.path.has_value());
    EXPECT_EQ(ext.failure_reason.rfind("protocol error", 0), 0u) << cmd << ": " << ext.failure_reason;
  }
}

TEST(External, RequestRoundTrip) {
  Scenario s;
  ASSERT_TRUE(pbtest::random_scenario({9, 7}, 0.2, 3, s));
  const auto back = parse_ext_request(make_ext_request(s, json::object(), 1.0));
  EXPECT_EQ(back.start, s.start);
  EXPECT_EQ(back.goal, s.goal);
  EXPECT_EQ(back.seed, s.seed);
  EXPECT_EQ(back.grid().cells(), s.grid().cells());
  EXPECT_THROW(parse_ext_request(json{{"protocol", "pb-ext/0"}}), ProtocolError);
}
