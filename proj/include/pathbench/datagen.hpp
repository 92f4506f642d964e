#pragma once

// Training-data labelling with A* ground truth, feature augmentation and the
// line-delimited .pbds dataset format.
//
// A .pbds file is one JSON document per line: a header line, one line per map,
// then one line per record. Every record carries "map" (map index), "step"
// (path step) and "at" (agent cell) besides the requested fields.

#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pathbench/error.hpp"
#include "pathbench/grid.hpp"
#include "pathbench/map_io.hpp"
#include "pathbench/planners/graph.hpp"

namespace pathbench {

inline const std::vector<std::string>& feature_names() {
  static const std::vector<std::string> v{"agent_position", "goal_position", "global_map", "local_view",
                                          "valid_moves_mask"};
  return v;
}

inline const std::vector<std::string>& label_names() {
  static const std::vector<std::string> v{"next_move", "full_path"};
  return v;
}

enum class Layout { sequence, single };

inline std::string layout_name(Layout l) { return l == Layout::sequence ? "sequence" : "single"; }

inline Layout parse_layout(const std::string& s) {
  if (s == "sequence") return Layout::sequence;
  if (s == "single") return Layout::single;
  throw PreconditionError("unknown layout '" + s + "' (valid: sequence, single)");
}

struct LabelSpec {
  std::vector<std::string> features{"agent_position", "goal_position"};
  std::vector<std::string> labels{"next_move"};
  Layout layout = Layout::sequence;
  int k = 9;  // local view width, odd

  void validate() const {
    auto check = [](const std::vector<std::string>& names, const std::vector<std::string>& valid, const char* what) {
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (std::find(valid.begin(), valid.end(), names[i]) == valid.end()) {
          std::string list;
          for (const auto& v : valid) list += (list.empty() ? "" : ", ") + v;
          throw PreconditionError(std::string("unknown ") + what + " '" + names[i] + "' (valid: " + list + ")");
        }
        if (std::find(names.begin(), names.begin() + static_cast<std::ptrdiff_t>(i), names[i]) !=
            names.begin() + static_cast<std::ptrdiff_t>(i))
          throw PreconditionError(std::string("duplicate ") + what + " '" + names[i] + "'");
      }
    };
    check(features, feature_names(), "feature");
    check(labels, label_names(), "label");
    if (k < 1 || k % 2 == 0) throw PreconditionError("local view size k must be a positive odd number");
  }
};

struct Dataset {
  std::vector<std::string> features;
  std::vector<std::string> labels;
  Layout layout = Layout::sequence;
  int k = 9;
  std::vector<GridMap> maps;
  std::vector<std::string> map_types;
  std::vector<json> records;
  std::vector<std::string> warnings;  // not serialized

  bool operator==(const Dataset& o) const {
    return features == o.features && labels == o.labels && layout == o.layout && k == o.k && maps == o.maps &&
           map_types == o.map_types && records == o.records;
  }
};

// k x k (x k) window centred on p, flattened in cell order: 0 free, 1 blocked
// or outside the map, 2 the agent itself.
inline std::vector<int> local_view(const GridMap& map, Point p, int k) {
  const int r = k / 2;
  const int zr = map.dimension() == 3 ? r : 0;
  std::vector<int> out;
  for (int dz = -zr; dz <= zr; ++dz)
    for (int dy = -r; dy <= r; ++dy)
      for (int dx = -r; dx <= r; ++dx) {
        const Point q{p.x + dx, p.y + dy, p.z + dz};
        out.push_back(dx == 0 && dy == 0 && dz == 0 ? 2 : (map.free(q) ? 0 : 1));
      }
  return out;
}

inline std::vector<int> valid_moves_mask(const GridMap& map, Point p, const MoveSet& moves) {
  std::vector<int> mask(moves.size(), 0);
  for (const auto& n : neighbors(map, p, moves)) mask[static_cast<std::size_t>(n.move_index)] = 1;
  return mask;
}

inline json point_array(const GridMap& map, Point p) {
  json a = json::array();
  for (int i = 0; i < map.dimension(); ++i) a.push_back(p[i]);
  return a;
}

inline Point point_from_array(const json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3) throw ParseError("point must be an array of 2 or 3 integers");
  Point p;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer()) throw ParseError("point coordinates must be integers");
    p[static_cast<int>(i)] = j[i].get<int>();
  }
  return p;
}

inline json feature_value(const std::string& name, const GridMap& map, Point at, const MoveSet& moves, int k) {
  if (name == "agent_position") return point_array(map, at);
  if (name == "goal_position") return point_array(map, *map.goal());
  if (name == "global_map") return map_to_json(map)["grid"];
  if (name == "local_view") return local_view(map, at, k);
  if (name == "valid_moves_mask") return valid_moves_mask(map, at, moves);
  throw PreconditionError("unknown feature '" + name + "'");
}

inline Dataset label_maps(const std::vector<GridMap>& maps, const LabelSpec& spec,
                          const std::vector<std::string>& map_types = {}) {
  spec.validate();
  if (!map_types.empty() && map_types.size() != maps.size())
    throw PreconditionError("map_types must be empty or match the number of maps");
  Dataset ds;
  ds.features = spec.features;
  ds.labels = spec.labels;
  ds.layout = spec.layout;
  ds.k = spec.k;
  ds.maps = maps;
  ds.map_types = map_types.empty() ? std::vector<std::string>(maps.size(), "unknown") : map_types;
  for (std::size_t mi = 0; mi < maps.size(); ++mi) {
    const GridMap& map = maps[mi];
    if (!map.agent() || !map.goal()) throw PreconditionError("map " + std::to_string(mi) + " has no agent/goal");
    const auto moves = MoveSet::for_dimension(map.dimension());
    const Scenario s{std::shared_ptr<const GridMap>(&map, [](const GridMap*) {}), *map.agent(), *map.goal(), 0};
    const auto truth = plan_astar(s, moves);
    if (!truth.success()) {
      ds.warnings.push_back("map " + std::to_string(mi) + " skipped: goal unreachable");
      continue;
    }
    const auto& pts = truth.path->points;
    auto move_label = [&](std::size_t t) -> json {
      if (t + 1 >= pts.size()) return nullptr;
      return moves.index_of(pts[t + 1] - pts[t]);
    };
    auto make = [&](std::size_t t) {
      json r;
      r["map"] = mi;
      r["step"] = t;
      r["at"] = point_array(map, pts[t]);
      for (const auto& f : spec.features) r[f] = feature_value(f, map, pts[t], moves, spec.k);
      for (const auto& l : spec.labels) {
        if (l == "next_move") r[l] = move_label(t);
        if (l == "full_path") {
          json p = json::array();
          for (const Point& q : pts) p.push_back(point_array(map, q));
          r[l] = std::move(p);
        }
      }
      return r;
    };
    if (spec.layout == Layout::sequence) {
      for (std::size_t t = 0; t + 1 < pts.size(); ++t) ds.records.push_back(make(t));
    } else {
      ds.records.push_back(make(0));
    }
  }
  return ds;
}

// Adds features to every record, computed from `maps` (the dataset's own maps
// when empty).
inline Dataset augment(const Dataset& ds, const std::vector<std::string>& extra, const std::vector<GridMap>& maps = {}) {
  const auto& source = maps.empty() ? ds.maps : maps;
  LabelSpec probe;
  probe.features = ds.features;
  probe.features.insert(probe.features.end(), extra.begin(), extra.end());
  probe.labels = {};
  probe.k = ds.k;
  for (const auto& e : extra)
    if (std::find(ds.features.begin(), ds.features.end(), e) != ds.features.end())
      throw PreconditionError("feature '" + e + "' is already present");
  probe.validate();
  Dataset out = ds;
  out.features = probe.features;
  for (std::size_t i = 0; i < out.records.size(); ++i) {
    json& r = out.records[i];
    const std::size_t mi = r.at("map").get<std::size_t>();
    if (mi >= source.size()) throw PreconditionError("record " + std::to_string(i) + " references a missing map");
    const GridMap& map = source[mi];
    const auto moves = MoveSet::for_dimension(map.dimension());
    const Point at = point_from_array(r.at("at"));
    for (const auto& e : extra) r[e] = feature_value(e, map, at, moves, ds.k);
  }
  return out;
}

inline std::string save_dataset(const Dataset& ds) {
  std::ostringstream o;
  json header{{"format", "pbds"},
              {"version", 1},
              {"features", ds.features},
              {"labels", ds.labels},
              {"layout", layout_name(ds.layout)},
              {"k", ds.k},
              {"map_count", ds.maps.size()},
              {"record_count", ds.records.size()}};
  o << header.dump() << '\n';
  for (std::size_t i = 0; i < ds.maps.size(); ++i)
    o << json{{"map", i}, {"type", ds.map_types[i]}, {"doc", map_to_json(ds.maps[i], GridEncoding::base64_bitpacked)}}.dump()
      << '\n';
  for (const auto& r : ds.records) o << r.dump() << '\n';
  return o.str();
}

inline Dataset load_dataset(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto next_json = [&](const char* what) {
    if (!std::getline(in, line)) throw ParseError(std::string("dataset ended before ") + what, lineno + 1);
    ++lineno;
    try {
      return json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("invalid JSON in ") + what, lineno);
    }
  };
  Dataset ds;
  const json header = next_json("header");
  try {
    if (header.at("format") != "pbds") throw ParseError("not a pbds dataset", 1);
    if (header.at("version") != 1) throw VersionMismatchError("unsupported dataset version " + header.at("version").dump(), 1);
    ds.features = header.at("features").get<std::vector<std::string>>();
    ds.labels = header.at("labels").get<std::vector<std::string>>();
    ds.layout = parse_layout(header.at("layout").get<std::string>());
    ds.k = header.at("k").get<int>();
    const auto map_count = header.at("map_count").get<std::size_t>();
    const auto record_count = header.at("record_count").get<std::size_t>();
    for (std::size_t i = 0; i < map_count; ++i) {
      const json m = next_json("map line");
      if (m.at("map").get<std::size_t>() != i) throw ParseError("map lines out of order", lineno);
      try {
        ds.maps.push_back(map_from_json(m.at("doc")));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
      ds.map_types.push_back(m.at("type").get<std::string>());
    }
    for (std::size_t i = 0; i < record_count; ++i) {
      json r = next_json("record line");
      if (!r.is_object() || !r.contains("map") || !r.contains("at") || r.at("map").get<std::size_t>() >= map_count)
        throw ParseError("record " + std::to_string(i) + " is malformed", lineno);
      ds.records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed dataset: ") + e.what(), lineno);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what(), lineno);
  }
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty()) throw ParseError("unexpected content after the last record", lineno);
  }
  return ds;
}

}  // namespace pathbench
