#pragma once

// Batch benchmarking: simple analysis over generated maps, complex analysis with
// repeated random scenarios on fixed maps, and training-dataset inspection.
// Reports are emitted as JSON and as a flat CSV of raw rows.

#include <sys/utsname.h>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <exception>
#include <memory>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "pathbench/datagen.hpp"
#include "pathbench/error.hpp"
#include "pathbench/ext_planner.hpp"
#include "pathbench/grid.hpp"
#include "pathbench/map_gen.hpp"
#include "pathbench/map_io.hpp"
#include "pathbench/metrics.hpp"
#include "pathbench/planners.hpp"
#include "pathbench/rng.hpp"

namespace pathbench {

// ---- planner configuration as JSON ----

inline json planner_config_json(const PlannerConfig& c) {
  return json{
      {"rrt", {{"step_size", c.rrt.step_size}, {"goal_bias", c.rrt.goal_bias}, {"max_iters", c.rrt.max_iters}}},
      {"rrt_star",
       {{"step_size", c.rrt_star.step_size},
        {"goal_bias", c.rrt_star.goal_bias},
        {"max_iters", c.rrt_star.max_iters},
        {"rewire_radius", c.rrt_star.rewire_radius}}},
      {"rrt_connect", {{"step_size", c.rrt_connect.step_size}, {"max_iters", c.rrt_connect.max_iters}}},
      {"sprm", {{"num_samples", c.sprm.num_samples}, {"connect_radius", c.sprm.connect_radius}}},
      {"potential_field",
       {{"attract_gain", c.potential_field.attract_gain},
        {"repulse_gain", c.potential_field.repulse_gain},
        {"influence_radius", c.potential_field.influence_radius},
        {"step_budget", c.potential_field.step_budget}}},
      {"bug",
       {{"wall_follow_hand", c.bug.wall_follow_hand == Hand::left ? "left" : "right"}, {"step_budget", c.bug.step_budget}}},
      {"timeout_s", c.timeout_s}};
}

// Reads a (possibly partial) planner configuration; missing keys keep `base` values.
inline PlannerConfig planner_config_from_json(const json& j, PlannerConfig c = {}) {
  try {
    auto get = [&](const char* group, const char* key, auto& field) {
      if (j.contains(group) && j[group].contains(key)) field = j[group][key].get<std::decay_t<decltype(field)>>();
    };
    get("rrt", "step_size", c.rrt.step_size);
    get("rrt", "goal_bias", c.rrt.goal_bias);
    get("rrt", "max_iters", c.rrt.max_iters);
    get("rrt_star", "step_size", c.rrt_star.step_size);
    get("rrt_star", "goal_bias", c.rrt_star.goal_bias);
    get("rrt_star", "max_iters", c.rrt_star.max_iters);
    get("rrt_star", "rewire_radius", c.rrt_star.rewire_radius);
    get("rrt_connect", "step_size", c.rrt_connect.step_size);
    get("rrt_connect", "max_iters", c.rrt_connect.max_iters);
    get("sprm", "num_samples", c.sprm.num_samples);
    get("sprm", "connect_radius", c.sprm.connect_radius);
    get("potential_field", "attract_gain", c.potential_field.attract_gain);
    get("potential_field", "repulse_gain", c.potential_field.repulse_gain);
    get("potential_field", "influence_radius", c.potential_field.influence_radius);
    get("potential_field", "step_budget", c.potential_field.step_budget);
    get("bug", "step_budget", c.bug.step_budget);
    if (j.contains("bug") && j["bug"].contains("wall_follow_hand")) {
      const auto h = j["bug"]["wall_follow_hand"].get<std::string>();
      if (h != "left" && h != "right") throw ParseError("bug.wall_follow_hand must be left or right");
      c.bug.wall_follow_hand = h == "left" ? Hand::left : Hand::right;
    }
    if (j.contains("timeout_s")) c.timeout_s = j["timeout_s"].get<double>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid planner configuration: ") + e.what());
  }
  return c;
}

// ---- report types ----

struct RunRow {
  std::string map_id;
  std::string map_type;
  std::string planner;
  std::uint64_t seed = 0;
  std::string status;
  std::string failure_reason;
  MetricSet metrics;

  friend bool operator==(const RunRow&, const RunRow&) = default;
};

struct GroupSummary {
  std::string map_type;
  std::string planner;
  Summary summary;

  friend bool operator==(const GroupSummary&, const GroupSummary&) = default;
};

struct BenchmarkReport {
  json config = json::object();
  std::string environment;
  std::vector<std::string> warnings;
  std::vector<GroupSummary> summaries;
  std::vector<RunRow> rows;

  friend bool operator==(const BenchmarkReport&, const BenchmarkReport&) = default;

  const GroupSummary* find(std::string_view map_type, std::string_view planner) const {
    for (const auto& g : summaries)
      if (g.map_type == map_type && g.planner == planner) return &g;
    return nullptr;
  }
};

struct ExternalPlanner {
  std::string name;
  std::string cmd;
};

struct AnalysisOptions {
  PlannerConfig planner_config;
  std::vector<ExternalPlanner> externals;
  unsigned jobs = 0;  // 0 = hardware concurrency
  bool timing_strict = false;
  std::string environment;  // empty = describe this host
};

inline std::string host_description() {
  utsname u{};
  std::string s;
  if (::uname(&u) == 0) s = std::string(u.sysname) + " " + u.release + " " + u.machine;
  s += "; " + std::to_string(std::max(1u, std::thread::hardware_concurrency())) + " hardware threads";
#if defined(__VERSION__)
  s += "; compiler " + std::string(__VERSION__);
#endif
  return s;
}

// Groups rows by (map_type, planner) in first-appearance order and aggregates.
inline std::vector<GroupSummary> summarize(const std::vector<RunRow>& rows) {
  std::vector<GroupSummary> out;
  std::map<std::pair<std::string, std::string>, std::vector<MetricSet>> groups;
  for (const auto& r : rows) {
    auto [it, fresh] = groups.try_emplace({r.map_type, r.planner});
    if (fresh) out.push_back({r.map_type, r.planner, {}});
    it->second.push_back(r.metrics);
  }
  for (auto& g : out) g.summary = aggregate(groups.at({g.map_type, g.planner}));
  return out;
}

namespace detail {

// Runs fn(i) for i in [0, n) on `jobs` threads; rethrows the first failure.
template <typename Fn>
void parallel_for(std::size_t n, unsigned jobs, Fn fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n);
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

struct WorkItem {
  std::string map_id;
  std::string map_type;
  Scenario scenario;
  std::shared_ptr<const DistanceField> field;  // shared across items on one map
};

inline void check_planners(const std::vector<std::string>& planners, const AnalysisOptions& opt, bool any_3d) {
  if (planners.empty() && opt.externals.empty()) throw PreconditionError("planner list is empty");
  for (const auto& p : planners) {
    if (!is_planner(p)) {
      std::string valid;
      for (auto n : planner_names) valid += (valid.empty() ? "" : ", ") + std::string(n);
      throw PreconditionError("unknown planner '" + p + "' (valid: " + valid + ")");
    }
    if (any_3d && (p == "bug1" || p == "bug2")) throw PreconditionError(p + " supports 2D maps only");
  }
  for (const auto& e : opt.externals) {
    if (e.name.empty() || e.cmd.empty()) throw PreconditionError("external planner needs a name and a command");
    if (is_planner(e.name)) throw PreconditionError("external planner name '" + e.name + "' clashes with a built-in planner");
  }
  opt.planner_config.validate();
}

inline BenchmarkReport run_items(std::vector<WorkItem> items, const std::vector<std::string>& planners,
                                 const AnalysisOptions& opt, json config, std::vector<std::string> warnings) {
  std::vector<std::string> names = planners;
  for (const auto& e : opt.externals) names.push_back(e.name);
  std::vector<std::vector<RunRow>> results(items.size());
  const unsigned jobs = opt.timing_strict ? 1u : opt.jobs;
  parallel_for(items.size(), jobs, [&](std::size_t i) {
    const WorkItem& w = items[i];
    const Scenario& s = w.scenario;
    const auto moves = MoveSet::for_dimension(s.grid().dimension());
    const auto field = w.field ? w.field : std::make_shared<const DistanceField>(distance_transform(s.grid()));
    const PlanOutcome baseline = run_planner("astar", s, moves, opt.planner_config);
    auto& out = results[i];
    for (const auto& name : names) {
      PlanOutcome o;
      if (name == "astar") {
        o = baseline;
      } else if (is_planner(name)) {
        o = run_planner(name, s, moves, opt.planner_config);
      } else {
        const auto& ext = *std::find_if(opt.externals.begin(), opt.externals.end(),
                                        [&](const ExternalPlanner& e) { return e.name == name; });
        o = run_external(ext.cmd, s, opt.planner_config.timeout_s, planner_config_json(opt.planner_config));
      }
      out.push_back({w.map_id, w.map_type, name, s.seed, status_name(o.status), o.failure_reason,
                     compute_metrics(s, o, baseline, field.get())});
    }
  });
  BenchmarkReport rep;
  rep.config = std::move(config);
  rep.environment = opt.environment.empty() ? host_description() : opt.environment;
  rep.warnings = std::move(warnings);
  for (auto& r : results)
    for (auto& row : r) rep.rows.push_back(std::move(row));
  rep.summaries = summarize(rep.rows);
  return rep;
}

inline json common_config(const std::vector<std::string>& planners, const AnalysisOptions& opt, std::uint64_t seed) {
  json externals = json::array();
  for (const auto& e : opt.externals) externals.push_back({{"name", e.name}, {"cmd", e.cmd}});
  return json{{"planners", planners},
              {"externals", externals},
              {"seed", seed},
              {"planner_config", planner_config_json(opt.planner_config)},
              {"timing_strict", opt.timing_strict}};
}

}  // namespace detail

// n generated maps per spec, one scenario per map at the generator's agent and goal.
inline BenchmarkReport simple_analysis(std::size_t n, const std::vector<std::string>& planners,
                                       const std::vector<GenSpec>& gen_specs, std::uint64_t seed,
                                       const AnalysisOptions& opt = {}) {
  if (n < 1) throw PreconditionError("maps per type must be at least 1");
  if (gen_specs.empty()) throw PreconditionError("no map types given");
  bool any_3d = false;
  for (const auto& g : gen_specs) any_3d |= g.dims.size() == 3;
  detail::check_planners(planners, opt, any_3d);

  std::map<MapKind, int> kind_uses;
  for (const auto& g : gen_specs) ++kind_uses[g.kind];
  std::vector<detail::WorkItem> items;
  json specs = json::array();
  for (std::size_t si = 0; si < gen_specs.size(); ++si) {
    GenSpec spec = gen_specs[si];
    spec.count = n;
    spec.seed = derive_seed(seed, si);
    specs.push_back(gen_spec_json(spec.with_defaults()));
    std::string type = kind_name(spec.kind);
    if (kind_uses[spec.kind] > 1) {
      type += "_";
      for (std::size_t d = 0; d < spec.dims.size(); ++d) type += (d ? "x" : "") + std::to_string(spec.dims[d]);
    }
    for (std::size_t mi = 0; mi < n; ++mi) {
      std::shared_ptr<const GridMap> map;
      try {
        map = std::make_shared<const GridMap>(generate_one(spec, mi).grid);
      } catch (const GenerationError& e) {
        throw GenerationError(type + ": " + e.what());
      }
      char id[32];
      std::snprintf(id, sizeof id, "%zu-%05zu", si, mi);
      items.push_back({type + "-" + id, type, Scenario::from_map(map, derive_seed(seed, si, mi)), nullptr});
    }
  }
  json config = detail::common_config(planners, opt, seed);
  config["mode"] = "simple";
  config["per_type"] = n;
  config["gen_specs"] = std::move(specs);
  return detail::run_items(std::move(items), planners, opt, std::move(config), {});
}

struct NamedMap {
  std::string id;
  std::string type;
  GridMap grid;
};

// Connected-component label per free cell under the move graph; -1 when blocked.
inline std::vector<int> component_labels(const GridMap& map, const MoveSet& moves) {
  std::vector<int> label(map.cell_count(), -1);
  int next = 0;
  std::vector<Point> stack;
  for (std::size_t i = 0; i < map.cell_count(); ++i) {
    if (map.cells()[i] || label[i] >= 0) continue;
    label[i] = next;
    stack.push_back(map.point_at(i));
    while (!stack.empty()) {
      const Point p = stack.back();
      stack.pop_back();
      for_each_neighbor(map, p, moves, [&](const Neighbor& nb) {
        int& l = label[map.index(nb.point)];
        if (l < 0) {
          l = next;
          stack.push_back(nb.point);
        }
      });
    }
    ++next;
  }
  return label;
}

// x random solvable (start, goal) pairs per map.
inline BenchmarkReport complex_analysis(const std::vector<NamedMap>& maps, const std::vector<std::string>& planners,
                                        std::size_t x, std::uint64_t seed, const AnalysisOptions& opt = {}) {
  if (x < 1) throw PreconditionError("repeats must be at least 1");
  if (maps.empty()) throw PreconditionError("no maps given");
  bool any_3d = false;
  for (const auto& m : maps) any_3d |= m.grid.dimension() == 3;
  detail::check_planners(planners, opt, any_3d);

  constexpr int max_tries = 1000;
  std::vector<detail::WorkItem> items;
  std::vector<std::string> warnings;
  json map_ids = json::array();
  for (std::size_t mi = 0; mi < maps.size(); ++mi) {
    const auto& nm = maps[mi];
    map_ids.push_back(nm.id);
    const auto moves = MoveSet::for_dimension(nm.grid.dimension());
    const auto label = component_labels(nm.grid, moves);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < label.size(); ++i)
      if (label[i] >= 0) free.push_back(i);
    GridMap base = nm.grid;
    base.set_agent(std::nullopt);
    base.set_goal(std::nullopt);
    auto field = std::make_shared<const DistanceField>(distance_transform(base));
    Rng rng(derive_seed(seed, hash_name(nm.id), mi));
    std::vector<detail::WorkItem> mine;
    for (std::size_t rep = 0; rep < x; ++rep) {
      bool found = false;
      for (int t = 0; t < max_tries && free.size() >= 2; ++t) {
        const std::size_t a = free[rng.index(free.size())], b = free[rng.index(free.size())];
        if (a == b || label[a] != label[b]) continue;
        GridMap m = base;
        m.set_agent(m.point_at(a));
        m.set_goal(m.point_at(b));
        auto shared = std::make_shared<const GridMap>(std::move(m));
        mine.push_back({nm.id, nm.type, Scenario::from_map(shared, derive_seed(seed, mi, rep)), field});
        found = true;
        break;
      }
      if (!found) break;
    }
    if (mine.size() < x) {
      warnings.push_back("map " + nm.id + " skipped: no solvable start/goal pair found");
      continue;
    }
    for (auto& w : mine) items.push_back(std::move(w));
  }
  json config = detail::common_config(planners, opt, seed);
  config["mode"] = "complex";
  config["repeats"] = x;
  config["maps"] = std::move(map_ids);
  return detail::run_items(std::move(items), planners, opt, std::move(config), std::move(warnings));
}

// ---- dataset analysis ----

struct DatasetSummary {
  std::size_t records = 0;
  std::size_t maps = 0;
  Stat start_goal_distance;
  Stat obstacle_ratio;
  Stat path_length;
  std::map<std::string, std::size_t> map_type_counts;
};

inline DatasetSummary dataset_analysis(const Dataset& ds) {
  if (ds.records.empty()) throw PreconditionError("dataset has no records");
  std::vector<int> used(ds.maps.size(), 0);
  std::vector<std::optional<double>> label_length(ds.maps.size());
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    const json& r = ds.records[i];
    if (!r.is_object() || !r.contains("map") || !r["map"].is_number_unsigned())
      throw ParseError("record " + std::to_string(i) + " has no valid map reference");
    const auto mi = r["map"].get<std::size_t>();
    if (mi >= ds.maps.size()) throw ParseError("record " + std::to_string(i) + " references missing map " + std::to_string(mi));
    if (!ds.maps[mi].agent() || !ds.maps[mi].goal())
      throw ParseError("record " + std::to_string(i) + " references a map without agent/goal");
    used[mi] = 1;
    if (r.contains("full_path") && !label_length[mi]) {
      std::vector<Point> pts;
      try {
        for (const auto& p : r["full_path"]) pts.push_back(point_from_array(p));
      } catch (const ParseError& e) {
        throw ParseError("record " + std::to_string(i) + ": " + e.what());
      }
      label_length[mi] = Path::length_of(pts);
    }
  }
  DatasetSummary s;
  s.records = ds.records.size();
  std::vector<double> dist, ratio, length;
  for (std::size_t mi = 0; mi < ds.maps.size(); ++mi) {
    if (!used[mi]) continue;
    const GridMap& m = ds.maps[mi];
    ++s.maps;
    ++s.map_type_counts[mi < ds.map_types.size() ? ds.map_types[mi] : "unknown"];
    dist.push_back(euclidean(*m.agent(), *m.goal()));
    ratio.push_back(m.obstacle_ratio());
    if (label_length[mi]) {
      length.push_back(*label_length[mi]);
    } else {
      const Scenario sc{std::shared_ptr<const GridMap>(&m, [](const GridMap*) {}), *m.agent(), *m.goal(), 0};
      const auto a = plan_astar(sc, MoveSet::for_dimension(m.dimension()));
      if (a.success()) length.push_back(a.path->cost);
    }
  }
  s.start_goal_distance = make_stat(dist);
  s.obstacle_ratio = make_stat(ratio);
  s.path_length = make_stat(length);
  return s;
}

// ---- report serialization ----

namespace detail {

// JSON has no infinities; non-finite values are written as strings.
inline json num_json(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

inline double num_from(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw ParseError("invalid number '" + s + "'");
  }
  return j.get<double>();
}

inline json opt_json(const std::optional<double>& v) { return v ? num_json(*v) : json(nullptr); }

inline std::optional<double> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return num_from(j);
}

inline json stat_json(const Stat& s) {
  return json{{"count", s.count}, {"mean", num_json(s.mean)}, {"std", num_json(s.std)},
              {"min", num_json(s.min)}, {"max", num_json(s.max)}};
}

inline Stat stat_from(const json& j) {
  return Stat{j.at("count").get<std::size_t>(), num_from(j.at("mean")), num_from(j.at("std")), num_from(j.at("min")),
              num_from(j.at("max"))};
}

}  // namespace detail

inline json report_json(const BenchmarkReport& r) {
  json summaries = json::array();
  for (const auto& g : r.summaries) {
    json metrics = json::object();
    for (std::size_t i = 0; i < metric_names.size(); ++i) metrics[metric_names[i]] = detail::stat_json(g.summary.stats[i]);
    summaries.push_back({{"map_type", g.map_type},
                         {"planner", g.planner},
                         {"runs", g.summary.runs},
                         {"success_rate", detail::num_json(g.summary.success_rate)},
                         {"metrics", std::move(metrics)}});
  }
  json rows = json::array();
  for (const auto& row : r.rows) {
    const auto& m = row.metrics;
    rows.push_back({{"map_id", row.map_id},
                    {"map_type", row.map_type},
                    {"planner", row.planner},
                    {"seed", row.seed},
                    {"status", row.status},
                    {"failure_reason", row.failure_reason},
                    {"success", m.success},
                    {"path_length", detail::opt_json(m.path_length)},
                    {"distance_left", detail::opt_json(m.distance_left)},
                    {"time", detail::num_json(m.time)},
                    {"path_deviation", detail::opt_json(m.path_deviation)},
                    {"search_space", detail::num_json(m.search_space)},
                    {"max_memory", detail::num_json(m.max_memory)},
                    {"clearance", detail::opt_json(m.clearance)},
                    {"smoothness", detail::opt_json(m.smoothness)}});
  }
  return json{{"format", "pathbench-report"}, {"version", 1},           {"config", r.config},
              {"environment", r.environment},  {"warnings", r.warnings}, {"summaries", std::move(summaries)},
              {"rows", std::move(rows)}};
}

inline std::string emit_report(const BenchmarkReport& r) { return report_json(r).dump(1) + "\n"; }

inline BenchmarkReport parse_report(std::string_view text) {
  BenchmarkReport r;
  try {
    const json j = json::parse(text);
    if (j.at("format") != "pathbench-report") throw ParseError("not a benchmark report");
    if (j.at("version") != 1) throw VersionMismatchError("unsupported report version " + j.at("version").dump());
    r.config = j.at("config");
    r.environment = j.at("environment").get<std::string>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const auto& g : j.at("summaries")) {
      GroupSummary gs{g.at("map_type").get<std::string>(), g.at("planner").get<std::string>(), {}};
      gs.summary.runs = g.at("runs").get<std::size_t>();
      gs.summary.success_rate = detail::num_from(g.at("success_rate"));
      for (std::size_t i = 0; i < metric_names.size(); ++i)
        gs.summary.stats[i] = detail::stat_from(g.at("metrics").at(metric_names[i]));
      r.summaries.push_back(std::move(gs));
    }
    for (const auto& row : j.at("rows")) {
      RunRow rr;
      rr.map_id = row.at("map_id").get<std::string>();
      rr.map_type = row.at("map_type").get<std::string>();
      rr.planner = row.at("planner").get<std::string>();
      rr.seed = row.at("seed").get<std::uint64_t>();
      rr.status = row.at("status").get<std::string>();
      rr.failure_reason = row.at("failure_reason").get<std::string>();
      auto& m = rr.metrics;
      m.success = row.at("success").get<bool>();
      m.path_length = detail::opt_from(row.at("path_length"));
      m.distance_left = detail::opt_from(row.at("distance_left"));
      m.time = detail::num_from(row.at("time"));
      m.path_deviation = detail::opt_from(row.at("path_deviation"));
      m.search_space = detail::num_from(row.at("search_space"));
      m.max_memory = detail::num_from(row.at("max_memory"));
      m.clearance = detail::opt_from(row.at("clearance"));
      m.smoothness = detail::opt_from(row.at("smoothness"));
      r.rows.push_back(std::move(rr));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report: ") + e.what());
  }
  return r;
}

// ---- CSV ----

inline const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{"map_id",         "map_type",           "planner",          "seed",
                                             "success",        "path_length_m",      "distance_left_m",  "time_s",
                                             "path_deviation_pct", "search_space_pct", "max_memory_mb",  "clearance_m",
                                             "smoothness_deg"};
  return cols;
}

namespace detail {

// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

inline double parse_double(const std::string& s, std::size_t line) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw ParseError("invalid number '" + s + "'", line);
  return v;
}

}  // namespace detail

inline std::string emit_csv(const BenchmarkReport& r) {
  std::ostringstream o;
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) o << (i ? "," : "") << cols[i];
  o << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? detail::format_double(*v) : std::string(); };
  for (const auto& row : r.rows) {
    const auto& m = row.metrics;
    o << detail::csv_field(row.map_id) << ',' << detail::csv_field(row.map_type) << ',' << detail::csv_field(row.planner)
      << ',' << row.seed << ',' << (m.success ? 1 : 0) << ',' << opt(m.path_length) << ',' << opt(m.distance_left) << ','
      << detail::format_double(m.time) << ',' << opt(m.path_deviation) << ',' << detail::format_double(m.search_space)
      << ',' << detail::format_double(m.max_memory) << ',' << opt(m.clearance) << ',' << opt(m.smoothness) << '\n';
  }
  return o.str();
}

// Reads rows back from emit_csv output (status and failure reason are not in the CSV).
inline std::vector<RunRow> parse_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line) || detail::split_csv_line(line) != csv_columns()) throw ParseError("unexpected CSV header", 1);
  std::vector<RunRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != csv_columns().size()) throw ParseError("wrong number of CSV fields", lineno);
    auto opt = [&](const std::string& s) -> std::optional<double> {
      if (s.empty()) return std::nullopt;
      return detail::parse_double(s, lineno);
    };
    RunRow r;
    r.map_id = f[0];
    r.map_type = f[1];
    r.planner = f[2];
    const auto sr = std::from_chars(f[3].data(), f[3].data() + f[3].size(), r.seed);
    if (sr.ec != std::errc() || sr.ptr != f[3].data() + f[3].size()) throw ParseError("invalid seed '" + f[3] + "'", lineno);
    if (f[4] != "0" && f[4] != "1") throw ParseError("success must be 0 or 1", lineno);
    r.metrics.success = f[4] == "1";
    r.metrics.path_length = opt(f[5]);
    r.metrics.distance_left = opt(f[6]);
    r.metrics.time = detail::parse_double(f[7], lineno);
    r.metrics.path_deviation = opt(f[8]);
    r.metrics.search_space = detail::parse_double(f[9], lineno);
    r.metrics.max_memory = detail::parse_double(f[10], lineno);
    r.metrics.clearance = opt(f[11]);
    r.metrics.smoothness = opt(f[12]);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace pathbench
