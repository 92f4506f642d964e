// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/test_support.hpp"
#include "pathbench/analyzer.hpp"
#include "pathbench/datagen.hpp"
#include "pathbench/ext_planner.hpp"
#include "pathbench/map_gen.hpp"
#include "pathbench/map_io.hpp"
#include "pathbench/metrics.hpp"
#include "pathbench/planners.hpp"

namespace fs = std::filesystem;
using namespace pathbench;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  int failures = 0;

  // Records a failed check; keeps the first few messages.
  void fail(const std::string& why) {
    if (failures++ < 3) detail << (pass ? "" : "; ") << why;
    pass = false;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(double v, int prec = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

// BFS over free cells with the longhand move rule; independent of the library's
// solvability check.
bool oracle_solvable(const GridMap& map, Point s, Point g) {
  if (!map.free(s) || !map.free(g)) return false;
  std::vector<char> seen(map.cell_count(), 0);
  std::deque<Point> q{s};
  seen[map.index(s)] = 1;
  const int zr = map.dimension() == 3 ? 1 : 0;
  while (!q.empty()) {
    const Point p = q.front();
    q.pop_front();
    if (p == g) return true;
    for (int dx = -1; dx <= 1; ++dx)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dz = -zr; dz <= zr; ++dz) {
          const Point n{p.x + dx, p.y + dy, p.z + dz};
          if (!pbtest::oracle_move_ok(map, p, n) || seen[map.index(n)]) continue;
          seen[map.index(n)] = 1;
          q.push_back(n);
        }
  }
  return false;
}

std::size_t oracle_components(const GridMap& map) {
  std::vector<char> seen(map.cell_count(), 0);
  std::size_t comps = 0;
  const int zr = map.dimension() == 3 ? 1 : 0;
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    if (map.cells()[i] || seen[i]) continue;
    ++comps;
    std::deque<Point> q{map.point_at(i)};
    seen[i] = 1;
    while (!q.empty()) {
      const Point p = q.front();
      q.pop_front();
      for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy)
          for (int dz = -zr; dz <= zr; ++dz) {
            const Point n{p.x + dx, p.y + dy, p.z + dz};
            if (!pbtest::oracle_move_ok(map, p, n) || seen[map.index(n)]) continue;
            seen[map.index(n)] = 1;
            q.push_back(n);
          }
    }
  }
  return comps;
}

GenSpec uniform(std::vector<int> dims, double lo, double hi, std::size_t count, std::uint64_t seed) {
  GenSpec g;
  g.kind = MapKind::uniform_random_fill;
  g.dims = std::move(dims);
  g.fill_rate_range = RealRange{lo, hi};
  g.count = count;
  g.seed = seed;
  return g;
}

std::vector<Scenario> scenarios_of(const GenSpec& spec) {
  std::vector<Scenario> out;
  for (std::size_t i = 0; i < spec.count; ++i) {
    auto map = std::make_shared<const GridMap>(generate_one(spec, i).grid);
    out.push_back(Scenario::from_map(map, derive_seed(spec.seed, 1000 + i)));
  }
  return out;
}

AnalysisOptions options(bool strict = false) {
  AnalysisOptions o;
  o.environment = "acceptance";
  o.timing_strict = strict;
  return o;
}

double path_cost(const PlanOutcome& o) { return Path::length_of(o.path->points); }

// ---- criteria ----

Verdict optimality() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto moves = MoveSet::for_dimension(2);
  double worst = 0.0;
  std::size_t solvable = 0;
  for (const auto& s : scenarios_of(uniform({16, 16}, 0.1, 0.3, 500, 101))) {
    const double oracle = pbtest::brute_force_cost(s.grid(), s.start, s.goal);
    for (const char* name : {"astar", "dijkstra"}) {
      const PlanOutcome o = run_planner(name, s, moves);
      if (std::isinf(oracle)) {
        if (o.success()) v.fail(std::string(name) + " found a path the oracle says does not exist");
        continue;
      }
      if (!o.success()) {
        v.fail(std::string(name) + " failed on a solvable map");
        continue;
      }
      worst = std::max(worst, std::abs(o.path->cost - oracle));
      if (std::abs(o.path->cost - oracle) > 1e-9) v.fail(std::string(name) + " cost differs from oracle");
    }
    solvable += !std::isinf(oracle);
  }
  const double t = seconds_since(t0);
  if (t >= 30.0) v.fail("runtime " + fmt(t) + " s");
  v.detail << (v.pass ? "" : " | ") << "500 maps (" << solvable << " solvable), max |cost - oracle| = " << worst
           << ", " << fmt(t) << " s";
  return v;
}

Verdict completeness() {
  Verdict v;
  const auto t0 = Clock::now();
  std::vector<GenSpec> specs;
  for (MapKind k : {MapKind::uniform_random_fill, MapKind::block, MapKind::house}) {
    GenSpec g;
    g.kind = k;
    specs.push_back(g);
  }
  const auto rep = simple_analysis(100, {"astar", "dijkstra", "wavefront"}, specs, 202, options());
  // the analysis is deterministic, so the maps can be regenerated from its own config echo
  std::map<std::string, bool> solvable;
  const json& echoed = rep.config.at("gen_specs");
  for (std::size_t si = 0; si < specs.size(); ++si) {
    GenSpec g = specs[si];
    g.seed = echoed[si].at("seed").get<std::uint64_t>();
    for (std::size_t mi = 0; mi < 100; ++mi) {
      const GridMap m = generate_one(g, mi).grid;
      char id[32];
      std::snprintf(id, sizeof id, "%zu-%05zu", si, mi);
      solvable[kind_name(g.kind) + "-" + id] = oracle_solvable(m, *m.agent(), *m.goal());
    }
  }
  std::size_t runs = 0, n_solvable = 0;
  for (const auto& r : rep.rows) {
    const bool sol = solvable.at(r.map_id);
    if (!sol) {
      if (r.metrics.success) v.fail(r.planner + " succeeded on an unsolvable scenario " + r.map_id);
      continue;
    }
    ++runs;
    if (!r.metrics.success) v.fail(r.planner + " failed on solvable " + r.map_id);
  }
  for (const auto& [id, s] : solvable) n_solvable += s;
  const double t = seconds_since(t0);
  if (t >= 120.0) v.fail("runtime " + fmt(t) + " s");
  v.detail << (v.pass ? "" : " | ") << "300 maps, " << n_solvable << " solvable, " << runs
           << " graph-planner runs on solvable scenarios all succeeded=" << (v.pass ? "yes" : "no") << ", " << fmt(t)
           << " s";
  return v;
}

Verdict wavefront_deviation() {
  Verdict v;
  const auto moves = MoveSet::for_dimension(2);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& s : scenarios_of(uniform({64, 64}, 0.1, 0.3, 100, 303))) {
    const PlanOutcome a = run_planner("astar", s, moves);
    const PlanOutcome w = run_planner("wavefront", s, moves);
    if (a.success() != w.success()) {
      v.fail("wavefront and A* disagree on solvability");
      continue;
    }
    if (!a.success()) continue;
    if (path_cost(w) < path_cost(a) - 1e-9) v.fail("wavefront path shorter than A*");
    sum += path_deviation_pct(path_cost(w), path_cost(a));
    ++n;
  }
  const double mean = n ? sum / static_cast<double>(n) : 0.0;
  if (mean > 2.0) v.fail("mean deviation " + fmt(mean) + "% > 2.0%");
  v.detail << (v.pass ? "" : " | ") << n << " solved maps, mean wavefront deviation " << fmt(mean)
           << "% (reference 0.34%)";
  return v;
}

Verdict sampling_ordering() {
  Verdict v;
  const auto t0 = Clock::now();
  const auto rep = simple_analysis(150, {"astar", "rrt", "rrt_star", "rrt_connect"}, {uniform({64, 64}, 0.1, 0.3, 1, 0)},
                                   404, options(true));
  std::set<std::string> solvable;
  for (const auto& r : rep.rows)
    if (r.planner == "astar" && r.metrics.success) solvable.insert(r.map_id);
  std::map<std::string, std::pair<double, std::size_t>> dev, time;
  for (const auto& r : rep.rows) {
    if (!solvable.count(r.map_id)) continue;
    auto& t = time[r.planner];
    t.first += r.metrics.time;
    ++t.second;
    if (r.metrics.path_deviation) {
      auto& d = dev[r.planner];
      d.first += *r.metrics.path_deviation;
      ++d.second;
    }
  }
  auto mean = [](const std::pair<double, std::size_t>& p) { return p.second ? p.first / static_cast<double>(p.second) : 0.0; };
  const double dev_rrt = mean(dev["rrt"]), dev_star = mean(dev["rrt_star"]);
  const double t_rrt = mean(time["rrt"]), t_connect = mean(time["rrt_connect"]);
  if (solvable.size() < 100) v.fail("only " + std::to_string(solvable.size()) + " solvable scenarios");
  if (!(dev_star < dev_rrt)) v.fail("deviation RRT* " + fmt(dev_star) + " not below RRT " + fmt(dev_rrt));
  if (!(t_connect < t_rrt)) v.fail("time RRT-Connect " + fmt(t_connect, 5) + " not below RRT " + fmt(t_rrt, 5));
  const double t = seconds_since(t0);
  if (t >= 600.0) v.fail("runtime " + fmt(t) + " s");
  v.detail << (v.pass ? "" : " | ") << solvable.size() << " solvable scenarios; deviation RRT* " << fmt(dev_star)
           << "% < RRT " << fmt(dev_rrt) << "%; time RRT-Connect " << fmt(t_connect, 5) << " s < RRT " << fmt(t_rrt, 5)
           << " s; " << fmt(t) << " s";
  return v;
}

Verdict parity_3d() {
  Verdict v;
  const auto moves = MoveSet::for_dimension(3);
  std::size_t solvable = 0, ok = 0;
  std::uint64_t seed = 505;
  for (MapKind k : {MapKind::uniform_random_fill, MapKind::block, MapKind::house}) {
    GenSpec g;
    g.kind = k;
    g.dims = {28, 28, 28};
    g.seed = seed++;
    g.count = k == MapKind::house ? 66 : 67;
    for (const auto& gm : generate(g)) {
      auto map = std::make_shared<const GridMap>(gm.grid);
      const Scenario s = Scenario::from_map(map, 0);
      const PlanOutcome a = run_planner("astar", s, moves);
      const bool sol = oracle_solvable(*map, s.start, s.goal);
      if (a.success() != sol) v.fail("A* success disagrees with reachability");
      if (!sol) continue;
      ++solvable;
      const MetricSet m = compute_metrics(s, a, a);
      if (m.path_deviation != 0.0) v.fail("A* deviation against itself is not 0");
      ok += a.success();
    }
  }
  // straight paths along axes and diagonals of an empty cube
  auto open = std::make_shared<const GridMap>(GridMap({28, 28, 28}));
  double worst_smooth = 0.0;
  for (Point goal : {Point{27, 3, 3}, Point{3, 27, 3}, Point{3, 3, 27}, Point{27, 27, 3}, Point{27, 27, 27}}) {
    const Scenario s{open, Point{3, 3, 3}, goal, 0};
    const PlanOutcome a = run_planner("astar", s, moves);
    const MetricSet m = compute_metrics(s, a, a);
    worst_smooth = std::max(worst_smooth, m.smoothness.value_or(1e9));
  }
  if (worst_smooth != 0.0) v.fail("straight path smoothness " + fmt(worst_smooth));
  v.detail << (v.pass ? "" : " | ") << "200 maps 28x28x28, A* success " << fmt(solvable ? 100.0 * ok / solvable : 0, 1)
           << "% on " << solvable << " solvable, deviation 0, straight-path smoothness " << worst_smooth << " deg";
  return v;
}

Verdict metric_properties() {
  Verdict v;
  const auto moves = MoveSet::for_dimension(2);
  std::size_t dev_checks = 0, ss_checks = 0;
  for (const auto& s : scenarios_of(uniform({32, 32}, 0.1, 0.3, 100, 606))) {
    const PlanOutcome a = run_planner("astar", s, moves);
    const PlanOutcome d = run_planner("dijkstra", s, moves);
    if (a.success()) {
      if (compute_metrics(s, a, a).path_deviation != 0.0) v.fail("deviation(A*, A*) != 0");
      ++dev_checks;
    }
    if (search_space_pct(s.grid(), d.trace) < search_space_pct(s.grid(), a.trace)) v.fail("search space Dijkstra < A*");
    ++ss_checks;
  }
  // smoothness under translation and integer scaling
  std::mt19937_64 eng(6060);
  std::size_t smooth_checks = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 2 + static_cast<int>(eng() % 12);
    const bool three = eng() % 2;
    std::vector<Point> pts;
    for (int k = 0; k < n; ++k)
      pts.push_back({static_cast<int>(eng() % 50), static_cast<int>(eng() % 50), three ? static_cast<int>(eng() % 50) : 0});
    const Point shift{static_cast<int>(eng() % 100) - 50, static_cast<int>(eng() % 100) - 50, three ? 7 : 0};
    const int scale = 2 + static_cast<int>(eng() % 5);
    std::vector<Point> moved, scaled;
    for (const Point& p : pts) {
      moved.push_back(p + shift);
      scaled.push_back({p.x * scale, p.y * scale, p.z * scale});
    }
    const double base = smoothness_deg(pts);
    if (std::abs(smoothness_deg(moved) - base) > 1e-9 || std::abs(smoothness_deg(scaled) - base) > 1e-9)
      v.fail("smoothness not invariant");
    ++smooth_checks;
  }
  // clearance on every successful path of every built-in planner
  GenSpec house;
  house.kind = MapKind::house;
  const auto rep = simple_analysis(10, {"astar", "dijkstra", "wavefront", "sprm", "rrt", "rrt_star", "rrt_connect", "bug1",
                                        "bug2", "potential_field"},
                                   {uniform({64, 64}, 0.1, 0.3, 1, 0), house}, 6061, options());
  double min_clear = 1e9;
  std::size_t clear_checks = 0;
  for (const auto& r : rep.rows) {
    if (!r.metrics.success) continue;
    ++clear_checks;
    min_clear = std::min(min_clear, r.metrics.clearance.value_or(-1.0));
  }
  if (min_clear < 0.5) v.fail("clearance " + fmt(min_clear) + " < 0.5");
  v.detail << (v.pass ? "" : " | ") << dev_checks << " zero-deviation checks, " << smooth_checks
           << " smoothness invariance checks, " << ss_checks << " search-space checks, min clearance "
           << fmt(min_clear) << " m over " << clear_checks << " successful paths";
  return v;
}

Verdict generator_contracts() {
  Verdict v;
  std::size_t maps = 0;
  for (auto [lo, hi] : {std::pair{0.1, 0.3}, std::pair{0.2, 0.2}, std::pair{0.0, 0.5}}) {
    const GenSpec g = uniform({64, 64}, lo, hi, 100, 707);
    for (const auto& gm : generate(g)) {
      const double quantum = 1.0 / static_cast<double>(gm.grid.cell_count());
      std::size_t blocked = 0;
      for (auto c : gm.grid.cells()) blocked += c;
      const double f = static_cast<double>(blocked) * quantum;
      if (f < lo - quantum - 1e-12 || f > hi + quantum + 1e-12) v.fail("fill " + fmt(f, 4) + " outside range");
      ++maps;
    }
  }
  std::size_t houses = 0;
  for (auto dims : {std::vector<int>{64, 64}, std::vector<int>{16, 16, 16}}) {
    GenSpec h;
    h.kind = MapKind::house;
    h.dims = dims;
    h.count = dims.size() == 2 ? 100 : 20;
    h.seed = 708;
    for (const auto& gm : generate(h)) {
      if (oracle_components(gm.grid) != 1) v.fail("house map with disconnected free space");
      ++houses;
    }
  }
  std::size_t identical = 0;
  for (MapKind k : {MapKind::uniform_random_fill, MapKind::block, MapKind::house, MapKind::point_cloud}) {
    GenSpec g;
    g.kind = k;
    g.count = 10;
    g.seed = 709;
    if (generate(g) != generate(g)) v.fail("non-deterministic " + kind_name(k));
    identical += 10;
  }
  v.detail << (v.pass ? "" : " | ") << maps << " uniform maps within range +- 1 cell, " << houses
           << " house maps connected, " << identical << " maps bit-identical on regeneration";
  return v;
}

Verdict round_trips() {
  Verdict v;
  std::mt19937_64 eng(808);
  for (int i = 0; i < 200; ++i) {
    std::vector<int> dims = i % 2 ? std::vector<int>{4 + static_cast<int>(eng() % 60), 4 + static_cast<int>(eng() % 60)}
                                  : std::vector<int>{4 + static_cast<int>(eng() % 14), 4 + static_cast<int>(eng() % 14),
                                                     4 + static_cast<int>(eng() % 14)};
    GridMap m = pbtest::random_map(dims, 0.3, eng());
    const auto cells = pbtest::free_cells(m);
    if (cells.size() >= 2) {
      m.set_agent(cells[eng() % cells.size()]);
      m.set_goal(cells[eng() % cells.size()]);
    }
    for (GridEncoding enc : {GridEncoding::ascii_rows, GridEncoding::base64_bitpacked})
      if (!(load_map(save_map(m, enc)) == m)) v.fail("native round trip changed a map");
  }
  std::size_t corpus = 0;
  bool big_city = false;
  for (const auto& e : fs::directory_iterator(PB_SOURCE_DIR "/data/maps")) {
    if (e.path().extension() != ".map") continue;
    try {
      const GridMap m = load_map_file(e.path());
      ++corpus;
      big_city |= m.dims() == std::vector<int>{512, 512};
    } catch (const std::exception& ex) {
      v.fail(e.path().filename().string() + ": " + ex.what());
    }
  }
  if (corpus < 3) v.fail("corpus has fewer than 3 .map files");
  if (!big_city) v.fail("no 512x512 map in corpus");

  const auto rep = parse_report(emit_report(
      simple_analysis(15, {"astar", "wavefront", "rrt", "rrt_connect"}, {uniform({32, 32}, 0.1, 0.3, 1, 0)}, 809, options())));
  const auto again = summarize(parse_csv(emit_csv(rep)));
  double worst = 0.0;
  if (again.size() != rep.summaries.size()) v.fail("group count differs after CSV re-aggregation");
  for (std::size_t g = 0; g < std::min(again.size(), rep.summaries.size()); ++g) {
    worst = std::max(worst, std::abs(again[g].summary.success_rate - rep.summaries[g].summary.success_rate));
    for (std::size_t k = 0; k < metric_names.size(); ++k) {
      const Stat &a = again[g].summary.stats[k], &b = rep.summaries[g].summary.stats[k];
      if (a.count != b.count) v.fail("count differs");
      for (double d : {a.mean - b.mean, a.std - b.std, a.min - b.min, a.max - b.max}) worst = std::max(worst, std::abs(d));
    }
  }
  if (worst > 1e-9) v.fail("CSV re-aggregation differs by " + std::to_string(worst));
  v.detail << (v.pass ? "" : " | ") << "200 maps x 2 encodings identical, " << corpus
           << " corpus files parsed (512x512 city present), CSV re-aggregation max diff " << worst;
  return v;
}

Verdict label_replay() {
  Verdict v;
  std::vector<GridMap> maps;
  std::size_t offered = 0;
  for (std::uint64_t seed = 909; maps.size() < 100; ++seed) {
    for (const auto& gm : generate(uniform({32, 32}, 0.1, 0.3, 20, seed))) {
      ++offered;
      if (oracle_solvable(gm.grid, *gm.grid.agent(), *gm.grid.goal()) && maps.size() < 100) maps.push_back(gm.grid);
    }
  }
  LabelSpec spec;
  spec.features = {"agent_position"};
  spec.labels = {"next_move"};
  const Dataset ds = load_dataset(save_dataset(label_maps(maps, spec)));
  std::map<std::size_t, std::vector<const json*>> per_map;
  for (const auto& r : ds.records) per_map[r.at("map").get<std::size_t>()].push_back(&r);
  if (per_map.size() != 100) v.fail("expected records for 100 maps, got " + std::to_string(per_map.size()));
  for (const auto& [mi, recs] : per_map) {
    const GridMap& m = ds.maps[mi];
    const auto moves = MoveSet::for_dimension(m.dimension());
    std::vector<Point> walk{*m.agent()};
    bool ok = true;
    for (const json* r : recs) {
      const int idx = r->at("next_move").get<int>();
      const Point next = walk.back() + moves.moves.at(static_cast<std::size_t>(idx)).offset;
      if (!pbtest::oracle_move_ok(m, walk.back(), next)) {
        ok = false;
        break;
      }
      walk.push_back(next);
    }
    if (!ok || walk.back() != *m.goal()) {
      v.fail("replay on map " + std::to_string(mi) + " does not reach the goal");
      continue;
    }
    const double oracle = pbtest::brute_force_cost(m, *m.agent(), *m.goal());
    if (std::abs(Path::length_of(walk) - oracle) > 1e-9) v.fail("replayed cost differs from A* on map " + std::to_string(mi));
  }
  v.detail << (v.pass ? "" : " | ") << per_map.size() << " maps replayed to the goal at optimal cost ("
           << ds.records.size() << " labelled steps)";
  return v;
}

Verdict ext_conformance() {
  Verdict v;
  const auto moves = MoveSet::for_dimension(2);
  const std::string ref = std::string("'") + PB_EXT_REFERENCE_PATH + "'";
  std::size_t same = 0, rejected = 0;
  for (const auto& s : scenarios_of(uniform({32, 32}, 0.1, 0.3, 50, 1010))) {
    const PlanOutcome in = plan_astar(s, moves);
    const PlanOutcome ext = run_external(ref, s, 30.0);
    MetricSet a = compute_metrics(s, in, in), b = compute_metrics(s, ext, in);
    a.time = b.time = 0.0;
    const bool path_eq = in.path.has_value() == ext.path.has_value() && (!in.path || in.path->points == ext.path->points);
    if (ext.status == in.status && path_eq && a == b)
      ++same;
    else
      v.fail("echo adapter differs: " + status_name(ext.status) + " " + ext.failure_reason);
    const PlanOutcome bad = run_external(ref + " invalid-path", s, 30.0);
    if (bad.status == PlanStatus::no_path && bad.failure_reason.rfind("invalid path", 0) == 0)
      ++rejected;
    else
      v.fail("invalid adapter accepted: " + status_name(bad.status));
  }
  v.detail << (v.pass ? "" : " | ") << same << "/50 echo runs identical to in-process A*, " << rejected
           << "/50 invalid paths rejected";
  return v;
}

std::string run_cli(const std::string& args, int& code) {
  const std::string cmd = std::string("'") + PB_CLI_PATH + "' " + args + " 2>&1";
  std::string out;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) {
    code = -1;
    return out;
  }
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  const int st = ::pclose(p);
  code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

std::string drop_column(const std::string& csv, const std::string& column) {
  std::istringstream in(csv);
  std::string line, out;
  std::optional<std::size_t> col;
  while (std::getline(in, line)) {
    auto f = detail::split_csv_line(line);
    if (!col) col = static_cast<std::size_t>(std::find(f.begin(), f.end(), column) - f.begin());
    if (*col < f.size()) f.erase(f.begin() + static_cast<std::ptrdiff_t>(*col));
    for (std::size_t i = 0; i < f.size(); ++i) out += (i ? "," : "") + detail::csv_field(f[i]);
    out += '\n';
  }
  return out;
}

Verdict determinism() {
  Verdict v;
  const fs::path dir = fs::temp_directory_path() / "pb_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::string csv[2];
  for (int i = 0; i < 2; ++i) {
    const std::string prefix = (dir / ("run" + std::to_string(i))).string();
    int code = 0;
    const std::string out = run_cli("bench --mode simple --per-type 20 --seed 42 --out '" + prefix + "'", code);
    if (code != 0) {
      v.fail("bench exited with " + std::to_string(code) + ": " + out.substr(0, 200));
      return v;
    }
    csv[i] = drop_column(read_file(prefix + ".csv"), "time_s");
  }
  const auto rows = std::count(csv[0].begin(), csv[0].end(), '\n') - 1;
  if (csv[0] != csv[1]) v.fail("CSV differs between runs");
  fs::remove_all(dir);
  v.detail << (v.pass ? "" : " | ") << "two runs, " << rows << " rows, byte-identical without time_s";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"optimality oracle", optimality},
      {"graph-planner completeness", completeness},
      {"wavefront deviation", wavefront_deviation},
      {"sampling ordering", sampling_ordering},
      {"3D parity", parity_3d},
      {"metric properties", metric_properties},
      {"generator contracts", generator_contracts},
      {"format round-trips", round_trips},
      {"labelling replay", label_replay},
      {"external-planner conformance", ext_conformance},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << (i + 1) << "] " << criteria[i].first << ": " << v.detail.str()
              << std::endl;
  }
  return failed ? 1 : 0;
}
