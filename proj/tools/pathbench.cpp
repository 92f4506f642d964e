// pathbench: command-line front end.
//
//   pathbench generate   generate maps into a directory (+ manifest.json)
//   pathbench run        run one planner on one map
//   pathbench bench      simple / complex / dataset analysis
//   pathbench label      build or augment a .pbds training dataset
//   pathbench import     convert .map / .pgm files into .pbmap
//   pathbench ext-check  check an external planner against in-process A*
//
// Exit codes: 0 ok, 2 usage, 3 parse, 4 runtime.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pathbench/analyzer.hpp"
#include "pathbench/datagen.hpp"
#include "pathbench/ext_planner.hpp"
#include "pathbench/map_gen.hpp"
#include "pathbench/map_io.hpp"
#include "pathbench/planners.hpp"

namespace fs = std::filesystem;
using namespace pathbench;

namespace {

constexpr int exit_usage = 2;
constexpr int exit_parse = 3;
constexpr int exit_runtime = 4;

// Thrown for bad flag values found after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep = ',') {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string join(const std::vector<std::string>& v, const char* sep = ", ") {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : sep) + s;
  return out;
}

std::optional<Point> to_point(const std::vector<int>& v, const char* what) {
  if (v.empty()) return std::nullopt;
  if (v.size() != 2 && v.size() != 3) throw UsageError(std::string(what) + " needs 2 or 3 coordinates");
  return Point{v[0], v[1], v.size() == 3 ? v[2] : 0};
}

MapKind to_kind(const std::string& s) {
  if (auto k = parse_kind(s)) return *k;
  throw UsageError("unknown map kind '" + s + "' (valid: uniform, block, house, point_cloud)");
}

GridEncoding to_encoding(const std::string& s) {
  if (s == "ascii") return GridEncoding::ascii_rows;
  if (s == "bitpacked") return GridEncoding::base64_bitpacked;
  throw UsageError("unknown encoding '" + s + "' (valid: ascii, bitpacked)");
}

void check_planner(const std::string& name) {
  if (is_planner(name)) return;
  std::vector<std::string> valid(planner_names.begin(), planner_names.end());
  throw UsageError("unknown planner '" + name + "' (valid: " + join(valid) + ")");
}

bool is_map_file(const fs::path& p) {
  const auto e = p.extension().string();
  return e == ".pbmap" || e == ".map" || e == ".pgm";
}

// Map files in a directory, sorted by name.
std::vector<fs::path> map_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw UsageError(dir.string() + " is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && is_map_file(e.path())) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  if (out.empty()) throw UsageError("no map files (.pbmap, .map, .pgm) in " + dir.string());
  return out;
}

json metrics_json(const MetricSet& m) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return json{{"success", m.success},
              {"path_length_m", opt(m.path_length)},
              {"distance_left_m", opt(m.distance_left)},
              {"time_s", m.time},
              {"path_deviation_pct", opt(m.path_deviation)},
              {"search_space_pct", m.search_space},
              {"max_memory_mb", m.max_memory},
              {"clearance_m", opt(m.clearance)},
              {"smoothness_deg", opt(m.smoothness)}};
}

json stat_json(const Stat& s) {
  return json{{"count", s.count}, {"mean", s.mean}, {"std", s.std}, {"min", s.min}, {"max", s.max}};
}

// ---- shared option groups ----

struct SeedOpt {
  std::uint64_t seed = 0;
  void add(CLI::App* app) {
    app->add_option("--seed", seed, "Random seed (falls back to $PB_SEED, then 0)")->envname("PB_SEED");
  }
};

struct PlannerConfigOpts {
  PlannerConfig c;
  std::string bug_hand = "right";

  void add(CLI::App* app) {
    auto* g = app->add_option_group("Planner configuration");
    g->add_option("--rrt-step", c.rrt.step_size, "RRT step size (cells)")->capture_default_str();
    g->add_option("--rrt-goal-bias", c.rrt.goal_bias, "RRT goal bias")->capture_default_str();
    g->add_option("--rrt-max-iters", c.rrt.max_iters, "RRT iteration limit")->capture_default_str();
    g->add_option("--rrt-star-step", c.rrt_star.step_size, "RRT* step size (cells)")->capture_default_str();
    g->add_option("--rrt-star-goal-bias", c.rrt_star.goal_bias, "RRT* goal bias")->capture_default_str();
    g->add_option("--rrt-star-max-iters", c.rrt_star.max_iters, "RRT* iteration limit")->capture_default_str();
    g->add_option("--rrt-star-radius", c.rrt_star.rewire_radius, "RRT* rewire radius")->capture_default_str();
    g->add_option("--rrt-connect-step", c.rrt_connect.step_size, "RRT-Connect step size")->capture_default_str();
    g->add_option("--rrt-connect-max-iters", c.rrt_connect.max_iters, "RRT-Connect iteration limit")
        ->capture_default_str();
    g->add_option("--sprm-samples", c.sprm.num_samples, "SPRM sample count")->capture_default_str();
    g->add_option("--sprm-radius", c.sprm.connect_radius, "SPRM connection radius")->capture_default_str();
    g->add_option("--pf-attract", c.potential_field.attract_gain, "Potential field attraction gain")
        ->capture_default_str();
    g->add_option("--pf-repulse", c.potential_field.repulse_gain, "Potential field repulsion gain")
        ->capture_default_str();
    g->add_option("--pf-radius", c.potential_field.influence_radius, "Potential field influence radius")
        ->capture_default_str();
    g->add_option("--pf-budget", c.potential_field.step_budget, "Potential field step budget (0 = 10 x cells)")
        ->capture_default_str();
    g->add_option("--bug-hand", bug_hand, "Bug wall-following hand")
        ->check(CLI::IsMember({"left", "right"}))
        ->capture_default_str();
    g->add_option("--bug-budget", c.bug.step_budget, "Bug step budget (0 = 10 x cells)")->capture_default_str();
    g->add_option("--timeout", c.timeout_s, "Per-invocation timeout in seconds")->capture_default_str();
  }

  PlannerConfig get() const {
    PlannerConfig out = c;
    out.bug.wall_follow_hand = bug_hand == "left" ? Hand::left : Hand::right;
    try {
      out.validate();
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
    return out;
  }
};

struct GenOpts {
  std::string kind = "uniform";
  std::vector<int> dims{64, 64};
  std::vector<double> fill;
  std::vector<int> obstacles, room_min, room_max;

  void add(CLI::App* app, bool with_kind) {
    if (with_kind)
      app->add_option("--kind", kind, "Map kind: uniform, block, house, point_cloud")->capture_default_str();
    app->add_option("--dims", dims, "Map extents, e.g. 64,64 or 16,16,16")->delimiter(',')->capture_default_str();
    app->add_option("--fill", fill, "Obstacle fill rate range lo,hi")->delimiter(',')->expected(2);
    app->add_option("--obstacles", obstacles, "Obstacle count range lo,hi")->delimiter(',')->expected(2);
    app->add_option("--room-min", room_min, "Minimum room size range lo,hi")->delimiter(',')->expected(2);
    app->add_option("--room-max", room_max, "Maximum room size range lo,hi")->delimiter(',')->expected(2);
  }

  GenSpec spec(MapKind k) const {
    GenSpec s;
    s.kind = k;
    s.dims = dims;
    if (!fill.empty()) s.fill_rate_range = RealRange{fill[0], fill[1]};
    if (!obstacles.empty()) s.obstacle_count_range = IntRange{obstacles[0], obstacles[1]};
    if (!room_min.empty()) s.room_min_range = IntRange{room_min[0], room_min[1]};
    if (!room_max.empty()) s.room_max_range = IntRange{room_max[0], room_max[1]};
    try {
      s.with_defaults().validate();
    } catch (const GenerationError& e) {
      throw UsageError(e.what());
    }
    return s;
  }
};

// ---- subcommands ----

struct GenerateCmd {
  GenOpts gen;
  SeedOpt seed;
  std::size_t count = 1;
  std::string out_dir = "maps";
  std::string encoding = "ascii";

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("generate", "Generate maps into a directory");
    gen.add(app, true);
    seed.add(app);
    app->add_option("--count", count, "Number of maps")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--out", out_dir, "Output directory")->capture_default_str();
    app->add_option("--encoding", encoding, "Grid encoding: ascii or bitpacked")->capture_default_str();
    app->final_callback([this] { run(); });
  }

  void run() {
    GenSpec spec = gen.spec(to_kind(gen.kind));
    spec.count = count;
    spec.seed = seed.seed;
    const auto enc = to_encoding(encoding);
    fs::create_directories(out_dir);
    json files = json::array();
    for (std::size_t i = 0; i < count; ++i) {
      const GeneratedMap g = generate_one(spec, i);
      char name[64];
      std::snprintf(name, sizeof name, "%s_%05zu.pbmap", kind_name(spec.kind).c_str(), i);
      json meta{{"generator", gen_spec_json(spec.with_defaults())}, {"index", i}};
      write_file(fs::path(out_dir) / name, save_map(g.grid, enc, meta));
      files.push_back({{"file", name}, {"index", i}, {"obstacle_ratio", g.grid.obstacle_ratio()}});
    }
    json manifest{{"generator", gen_spec_json(spec.with_defaults())}, {"maps", files}};
    write_file(fs::path(out_dir) / "manifest.json", manifest.dump(1) + "\n");
    std::cout << "wrote " << count << " maps to " << out_dir << "\n";
  }
};

struct RunCmd {
  std::string map_path;
  std::string planner = "astar";
  std::vector<int> start, goal;
  std::optional<int> threshold;
  std::string svg;
  SeedOpt seed;
  PlannerConfigOpts cfg;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("run", "Run one planner on one map and print its metrics");
    app->add_option("--map", map_path, "Map file (.pbmap, .map, .pgm)")->required();
    app->add_option("--planner", planner, "Planner name")->capture_default_str();
    app->add_option("--start", start, "Start cell x,y[,z] (default: map agent)")->delimiter(',');
    app->add_option("--goal", goal, "Goal cell x,y[,z] (default: map goal)")->delimiter(',');
    app->add_option("--threshold", threshold, "PGM occupancy threshold");
    app->add_option("--svg", svg, "Write the planner trace as SVG");
    seed.add(app);
    cfg.add(app);
    app->final_callback([this] { run(); });
  }

  void run() {
    check_planner(planner);
    const PlannerConfig config = cfg.get();
    auto map = std::make_shared<GridMap>(load_map_file(map_path, threshold));
    const auto s_pt = to_point(start, "--start"), g_pt = to_point(goal, "--goal");
    const std::optional<Point> a = s_pt ? s_pt : map->agent();
    const std::optional<Point> b = g_pt ? g_pt : map->goal();
    if (!a || !b) throw UsageError("map has no agent/goal; pass --start and --goal");
    const Scenario s{map, *a, *b, seed.seed};
    try {
      s.validate();
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
    const auto moves = MoveSet::for_dimension(map->dimension());
    const PlanOutcome out = run_planner(planner, s, moves, config);
    const PlanOutcome base = planner == "astar" ? out : run_planner("astar", s, moves, config);
    const DistanceField field = distance_transform(*map);
    const MetricSet m = compute_metrics(s, out, base, &field);
    json doc{{"planner", planner},
             {"status", status_name(out.status)},
             {"failure_reason", out.failure_reason},
             {"metrics", metrics_json(m)}};
    if (out.path) {
      json pts = json::array();
      for (const Point& p : out.path->points) pts.push_back(point_array(*map, p));
      doc["path"] = std::move(pts);
    }
    std::cout << doc.dump(1) << "\n";
    if (!svg.empty()) write_file(svg, export_trace_svg(s, out));
  }
};

struct BenchCmd {
  std::string mode = "simple";
  std::size_t per_type = 10;
  std::vector<std::string> kinds{"uniform", "block", "house"};
  GenOpts gen;
  std::string maps_dir;
  std::string dataset;
  std::size_t repeats = 50;
  std::string planners = "astar,dijkstra,wavefront,sprm,rrt,rrt_star,rrt_connect";
  std::vector<std::string> ext;
  unsigned jobs = 0;
  bool timing_strict = false;
  std::string out = "report";
  std::optional<int> threshold;
  SeedOpt seed;
  PlannerConfigOpts cfg;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("bench", "Benchmark planners (simple, complex) or inspect a dataset");
    app->add_option("--mode", mode, "simple, complex or dataset")
        ->check(CLI::IsMember({"simple", "complex", "dataset"}))
        ->capture_default_str();
    app->add_option("--per-type", per_type, "Simple mode: maps per map type")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--kinds", kinds, "Simple mode: map kinds")->delimiter(',')->capture_default_str();
    gen.add(app, false);
    app->add_option("--maps", maps_dir, "Complex mode: directory of map files");
    app->add_option("--threshold", threshold, "Complex mode: PGM occupancy threshold");
    app->add_option("--repeats", repeats, "Complex mode: random scenarios per map")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--dataset", dataset, "Dataset mode: .pbds file");
    app->add_option("--planners", planners, "Comma-separated planner names")->capture_default_str();
    app->add_option("--ext", ext, "External planner NAME=COMMAND (repeatable)");
    app->add_option("--jobs", jobs, "Worker threads (0 = all processors)")->capture_default_str();
    app->add_flag("--timing-strict", timing_strict, "Run scenarios one at a time for clean timings");
    app->add_option("--out", out, "Output prefix: writes PREFIX.json and PREFIX.csv")->capture_default_str();
    seed.add(app);
    cfg.add(app);
    app->final_callback([this] { run(); });
  }

  void run() {
    if (mode == "dataset") return run_dataset();
    std::vector<std::string> names;
    for (const auto& p : split(planners))
      if (!p.empty()) names.push_back(p);
    for (const auto& p : names) check_planner(p);
    AnalysisOptions opt;
    opt.planner_config = cfg.get();
    opt.jobs = jobs;
    opt.timing_strict = timing_strict;
    for (const auto& e : ext) {
      const auto eq = e.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == e.size()) throw UsageError("--ext expects NAME=COMMAND");
      opt.externals.push_back({e.substr(0, eq), e.substr(eq + 1)});
    }
    if (names.empty() && opt.externals.empty()) throw UsageError("planner list is empty");

    BenchmarkReport rep;
    try {
      if (mode == "simple") {
        std::vector<GenSpec> specs;
        for (const auto& k : kinds) specs.push_back(gen.spec(to_kind(k)));
        rep = simple_analysis(per_type, names, specs, seed.seed, opt);
      } else {
        if (maps_dir.empty()) throw UsageError("--mode complex needs --maps DIR");
        std::vector<NamedMap> maps;
        for (const auto& f : map_files(maps_dir)) {
          const auto ext_name = f.extension().string();
          const std::string type = ext_name == ".pbmap" ? "native" : ext_name == ".map" ? "gridmap" : "image";
          maps.push_back({f.stem().string(), type, load_map_file(f, threshold)});
        }
        rep = complex_analysis(maps, names, repeats, seed.seed, opt);
      }
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
    write_file(out + ".json", emit_report(rep));
    write_file(out + ".csv", emit_csv(rep));
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    std::printf("%-28s %-16s %5s %8s %10s %10s\n", "map_type", "planner", "runs", "success", "deviation", "time_s");
    for (const auto& g : rep.summaries)
      std::printf("%-28s %-16s %5zu %7.1f%% %10.3f %10.4f\n", g.map_type.c_str(), g.planner.c_str(), g.summary.runs,
                  g.summary.success_rate, g.summary.stat("path_deviation").mean, g.summary.stat("time").mean);
    std::cout << "wrote " << out << ".json and " << out << ".csv\n";
  }

  void run_dataset() {
    if (dataset.empty()) throw UsageError("--mode dataset needs --dataset FILE");
    const Dataset ds = load_dataset(read_file(dataset));
    const DatasetSummary s = dataset_analysis(ds);
    json counts = json::object();
    for (const auto& [k, v] : s.map_type_counts) counts[k] = v;
    const json doc{{"records", s.records},
                   {"maps", s.maps},
                   {"start_goal_distance", stat_json(s.start_goal_distance)},
                   {"obstacle_ratio", stat_json(s.obstacle_ratio)},
                   {"path_length", stat_json(s.path_length)},
                   {"map_types", counts}};
    std::cout << doc.dump(1) << "\n";
  }
};

struct LabelCmd {
  std::string maps_dir;
  std::string augment_path;
  std::string features = "agent_position,goal_position";
  std::string labels = "next_move";
  std::string layout = "sequence";
  int k = 9;
  std::string out = "dataset.pbds";

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("label", "Label maps with A* ground truth into a .pbds dataset");
    auto* src = app->add_option("--maps", maps_dir, "Directory of map files with agent and goal");
    auto* aug = app->add_option("--augment", augment_path, "Existing dataset to extend with --features");
    src->excludes(aug);
    app->add_option("--features", features, "Comma-separated features")->capture_default_str();
    app->add_option("--labels", labels, "Comma-separated labels")->capture_default_str();
    app->add_option("--layout", layout, "sequence or single")->capture_default_str();
    app->add_option("--k", k, "Local view width (odd)")->capture_default_str();
    app->add_option("--out", out, "Output .pbds file")->capture_default_str();
    app->final_callback([this] { run(); });
  }

  void run() {
    Dataset ds;
    try {
      if (!augment_path.empty()) {
        ds = augment(load_dataset(read_file(augment_path)), split(features));
      } else {
        if (maps_dir.empty()) throw UsageError("label needs --maps DIR or --augment FILE");
        LabelSpec spec;
        spec.features = split(features);
        spec.labels = split(labels);
        spec.layout = parse_layout(layout);
        spec.k = k;
        spec.validate();
        std::vector<GridMap> maps;
        std::vector<std::string> types;
        for (const auto& f : map_files(maps_dir)) {
          GridMap m = load_map_file(f);
          if (!m.agent() || !m.goal()) {
            std::cerr << "warning: " << f.filename().string() << " skipped: no agent/goal\n";
            continue;
          }
          std::string type = "unknown";
          if (f.extension() == ".pbmap") {
            const json doc = json::parse(read_file(f));
            if (doc.contains("meta") && doc["meta"].contains("generator"))
              type = doc["meta"]["generator"].value("kind", type);
          }
          maps.push_back(std::move(m));
          types.push_back(type);
        }
        ds = label_maps(maps, spec, types);
      }
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
    for (const auto& w : ds.warnings) std::cerr << "warning: " << w << "\n";
    write_file(out, save_dataset(ds));
    std::cout << "wrote " << ds.records.size() << " records from " << ds.maps.size() << " maps to " << out << "\n";
  }
};

struct ImportCmd {
  std::string input;
  std::string out;
  std::optional<int> threshold;
  std::vector<int> start, goal;
  bool random_endpoints = false;
  std::string encoding = "ascii";
  SeedOpt seed;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("import", "Convert a .map or .pgm file into a .pbmap");
    app->add_option("--input", input, "Input map (.map, .pgm, .pbmap)")->required();
    app->add_option("--out", out, "Output .pbmap (default: input name with .pbmap)");
    app->add_option("--threshold", threshold, "PGM occupancy threshold (default: mid-scale)");
    app->add_option("--start", start, "Agent cell x,y[,z]")->delimiter(',');
    app->add_option("--goal", goal, "Goal cell x,y[,z]")->delimiter(',');
    app->add_flag("--random-endpoints", random_endpoints, "Place a random solvable agent/goal pair");
    app->add_option("--encoding", encoding, "Grid encoding: ascii or bitpacked")->capture_default_str();
    seed.add(app);
    app->final_callback([this] { run(); });
  }

  void run() {
    const auto enc = to_encoding(encoding);
    GridMap m = load_map_file(input, threshold);
    try {
      if (auto p = to_point(start, "--start")) m.set_agent(*p);
      if (auto p = to_point(goal, "--goal")) m.set_goal(*p);
    } catch (const PreconditionError& e) {
      throw UsageError(e.what());
    }
    if (random_endpoints) {
      const auto label = component_labels(m, MoveSet::for_dimension(m.dimension()));
      std::vector<std::size_t> free;
      for (std::size_t i = 0; i < label.size(); ++i)
        if (label[i] >= 0) free.push_back(i);
      Rng rng(derive_seed(seed.seed, hash_name("import")));
      bool placed = false;
      for (int t = 0; t < 1000 && free.size() >= 2 && !placed; ++t) {
        const std::size_t a = free[rng.index(free.size())], b = free[rng.index(free.size())];
        if (a == b || label[a] != label[b]) continue;
        m.set_agent(m.point_at(a));
        m.set_goal(m.point_at(b));
        placed = true;
      }
      if (!placed) throw Error("no solvable agent/goal pair found");
    }
    const fs::path dst = out.empty() ? fs::path(input).replace_extension(".pbmap") : fs::path(out);
    write_file(dst, save_map(m, enc, json{{"source", fs::path(input).filename().string()}}));
    std::cout << "wrote " << dst.string() << " (" << join([&] {
      std::vector<std::string> d;
      for (int x : m.dims()) d.push_back(std::to_string(x));
      return d;
    }(), "x") << ")\n";
  }
};

struct ExtCheckCmd {
  std::string cmd;
  std::string name = "external";
  std::size_t count = 10;
  std::vector<int> dims{32, 32};
  double timeout = 10.0;
  SeedOpt seed;

  void add(CLI::App& root) {
    auto* app = root.add_subcommand("ext-check", "Check an external planner against in-process A*");
    app->add_option("--cmd", cmd, "Adapter command line")->required();
    app->add_option("--planner-name", name, "Name used in the output")->capture_default_str();
    app->add_option("--count", count, "Number of scenarios")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--dims", dims, "Map extents for generated scenarios")->delimiter(',')->capture_default_str();
    app->add_option("--timeout", timeout, "Per-invocation timeout in seconds")->capture_default_str();
    seed.add(app);
    app->final_callback([this] { run(); });
  }

  int failures = 0;

  void run() {
    GenSpec spec;
    spec.dims = dims;
    spec.fill_rate_range = RealRange{0.1, 0.3};
    spec.seed = seed.seed;
    try {
      spec.validate();
    } catch (const GenerationError& e) {
      throw UsageError(e.what());
    }
    for (std::size_t i = 0; i < count; ++i) {
      auto map = std::make_shared<const GridMap>(generate_one(spec, i).grid);
      const Scenario s = Scenario::from_map(map, derive_seed(seed.seed, i));
      const auto moves = MoveSet::for_dimension(map->dimension());
      const PlanOutcome ref = plan_astar(s, moves, timeout);
      const PlanOutcome ext = run_external(cmd, s, timeout);
      std::string verdict = "ok";
      if (ext.status != ref.status) {
        verdict = "status " + status_name(ext.status) + " != " + status_name(ref.status);
      } else if (ref.path && (!ext.path || std::abs(ext.path->cost - ref.path->cost) > 1e-9)) {
        verdict = "path cost differs";
      }
      if (verdict != "ok") ++failures;
      std::cout << name << " scenario " << i << ": " << verdict;
      if (!ext.failure_reason.empty()) std::cout << " (" << ext.failure_reason << ")";
      std::cout << "\n";
    }
    std::cout << name << ": " << (count - static_cast<std::size_t>(failures)) << "/" << count << " conform\n";
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pathbench: grid path-planning benchmark"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file with flag values (command-line flags win)");
  GenerateCmd generate;
  RunCmd run;
  BenchCmd bench;
  LabelCmd label;
  ImportCmd import;
  ExtCheckCmd ext_check;
  generate.add(app);
  run.add(app);
  bench.add(app);
  label.add(app);
  import.add(app);
  ext_check.add(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_usage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return exit_parse;
  } catch (const json::exception& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return exit_parse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime;
  }
  return ext_check.failures > 0 ? exit_runtime : 0;
}
