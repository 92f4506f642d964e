#pragma once

// Map serialization and import/export:
//   .pbmap  native JSON document (version, dims, encoding, grid, agent, goal, meta)
//   .map    MovingAI-style octile grid
//   .pgm    grayscale occupancy image (P2 / P5)
//   .svg    trace rendering of a planner outcome

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pathbench/error.hpp"
#include "pathbench/grid.hpp"
#include "pathbench/map_gen.hpp"
#include "pathbench/planners/common.hpp"

namespace pathbench {

using json = nlohmann::json;

inline constexpr int native_map_version = 1;

enum class GridEncoding { ascii_rows, base64_bitpacked };

inline std::string encoding_name(GridEncoding e) {
  return e == GridEncoding::ascii_rows ? "ascii-rows" : "base64-bitpacked";
}

namespace detail {

inline constexpr char b64_alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

inline std::string base64_encode(const std::vector<std::uint8_t>& in) {
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  for (std::size_t i = 0; i < in.size(); i += 3) {
    std::uint32_t v = std::uint32_t(in[i]) << 16;
    if (i + 1 < in.size()) v |= std::uint32_t(in[i + 1]) << 8;
    if (i + 2 < in.size()) v |= in[i + 2];
    out += b64_alphabet[(v >> 18) & 63];
    out += b64_alphabet[(v >> 12) & 63];
    out += i + 1 < in.size() ? b64_alphabet[(v >> 6) & 63] : '=';
    out += i + 2 < in.size() ? b64_alphabet[v & 63] : '=';
  }
  return out;
}

inline std::vector<std::uint8_t> base64_decode(std::string_view in) {
  if (in.size() % 4 != 0) throw PayloadMismatchError("base64 payload length is not a multiple of 4");
  auto value = [](char c) -> int {
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
  };
  std::vector<std::uint8_t> out;
  out.reserve(in.size() / 4 * 3);
  for (std::size_t i = 0; i < in.size(); i += 4) {
    int v[4];
    int pad = 0;
    for (int k = 0; k < 4; ++k) {
      const char c = in[i + static_cast<std::size_t>(k)];
      if (c == '=' && i + 4 == in.size() && k >= 2) {
        v[k] = 0;
        ++pad;
        continue;
      }
      if (pad) throw ParseError("malformed base64 padding");
      v[k] = value(c);
      if (v[k] < 0) throw ParseError(std::string("invalid base64 character '") + c + "'");
    }
    const std::uint32_t w = (std::uint32_t(v[0]) << 18) | (std::uint32_t(v[1]) << 12) | (std::uint32_t(v[2]) << 6) | std::uint32_t(v[3]);
    out.push_back(static_cast<std::uint8_t>(w >> 16));
    if (pad < 2) out.push_back(static_cast<std::uint8_t>(w >> 8));
    if (pad < 1) out.push_back(static_cast<std::uint8_t>(w));
  }
  return out;
}

inline json point_json(const GridMap& map, const std::optional<Point>& p) {
  if (!p) return nullptr;
  json a = json::array();
  for (int i = 0; i < map.dimension(); ++i) a.push_back((*p)[i]);
  return a;
}

inline std::optional<Point> parse_point(const json& j, int dim, const char* what) {
  if (j.is_null()) return std::nullopt;
  if (!j.is_array() || static_cast<int>(j.size()) != dim)
    throw PayloadMismatchError(std::string(what) + " must be an array of " + std::to_string(dim) + " integers");
  Point p;
  for (int i = 0; i < dim; ++i) {
    if (!j[static_cast<std::size_t>(i)].is_number_integer()) throw ParseError(std::string(what) + " coordinates must be integers");
    p[i] = j[static_cast<std::size_t>(i)].get<int>();
  }
  return p;
}

}  // namespace detail

inline json gen_spec_json(const GenSpec& spec) {
  json j;
  j["kind"] = kind_name(spec.kind);
  j["dims"] = spec.dims;
  if (spec.fill_rate_range) j["fill_rate_range"] = {spec.fill_rate_range->lo, spec.fill_rate_range->hi};
  if (spec.obstacle_count_range) j["obstacle_count_range"] = {spec.obstacle_count_range->lo, spec.obstacle_count_range->hi};
  if (spec.room_min_range) j["room_min_range"] = {spec.room_min_range->lo, spec.room_min_range->hi};
  if (spec.room_max_range) j["room_max_range"] = {spec.room_max_range->lo, spec.room_max_range->hi};
  j["count"] = spec.count;
  j["seed"] = spec.seed;
  return j;
}

inline json map_to_json(const GridMap& map, GridEncoding enc = GridEncoding::ascii_rows, json meta = json::object()) {
  json doc;
  doc["version"] = native_map_version;
  doc["dims"] = map.dims();
  doc["encoding"] = encoding_name(enc);
  if (enc == GridEncoding::ascii_rows) {
    // one string per (z, y) row, '#' blocked and '.' free
    json rows = json::array();
    const int w = map.extent(0);
    const std::size_t nrows = map.cell_count() / static_cast<std::size_t>(w);
    for (std::size_t r = 0; r < nrows; ++r) {
      std::string row(static_cast<std::size_t>(w), '.');
      for (int x = 0; x < w; ++x)
        if (map.cells()[r * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)]) row[static_cast<std::size_t>(x)] = '#';
      rows.push_back(std::move(row));
    }
    doc["grid"] = std::move(rows);
  } else {
    // cell i is bit (i % 8) of byte i / 8
    std::vector<std::uint8_t> bytes((map.cell_count() + 7) / 8, 0);
    for (std::size_t i = 0; i < map.cell_count(); ++i)
      if (map.cells()[i]) bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
    doc["grid"] = detail::base64_encode(bytes);
  }
  doc["agent"] = detail::point_json(map, map.agent());
  doc["goal"] = detail::point_json(map, map.goal());
  doc["meta"] = std::move(meta);
  return doc;
}

inline std::string save_map(const GridMap& map, GridEncoding enc = GridEncoding::ascii_rows, json meta = json::object()) {
  return map_to_json(map, enc, std::move(meta)).dump(1) + "\n";
}

inline GridMap map_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("map document must be an object");
  for (const char* key : {"version", "dims", "encoding", "grid"})
    if (!doc.contains(key)) throw ParseError(std::string("map document is missing '") + key + "'");
  if (!doc["version"].is_number_integer() || doc["version"].get<int>() != native_map_version)
    throw VersionMismatchError("unsupported map version " + doc["version"].dump() + ", expected " +
                               std::to_string(native_map_version));
  if (!doc["dims"].is_array()) throw ParseError("dims must be an array");
  std::vector<int> dims;
  for (const auto& d : doc["dims"]) {
    if (!d.is_number_integer() || d.get<long long>() < 1 || d.get<long long>() > (1 << 20))
      throw ParseError("dims must be positive integers");
    dims.push_back(d.get<int>());
  }
  if (dims.size() != 2 && dims.size() != 3) throw ParseError("dims must have 2 or 3 entries");
  std::size_t n = 1;
  for (int d : dims) n *= static_cast<std::size_t>(d);
  std::vector<std::uint8_t> cells(n, 0);
  const std::string enc = doc["encoding"].is_string() ? doc["encoding"].get<std::string>() : "";
  const json& grid = doc["grid"];
  if (enc == "ascii-rows") {
    if (!grid.is_array()) throw ParseError("ascii-rows grid must be an array of strings");
    const std::size_t w = static_cast<std::size_t>(dims[0]);
    if (grid.size() != n / w)
      throw PayloadMismatchError("grid has " + std::to_string(grid.size()) + " rows, dims require " + std::to_string(n / w));
    for (std::size_t r = 0; r < grid.size(); ++r) {
      if (!grid[r].is_string()) throw ParseError("grid row " + std::to_string(r) + " is not a string");
      const auto& row = grid[r].get_ref<const std::string&>();
      if (row.size() != w)
        throw PayloadMismatchError("grid row " + std::to_string(r) + " has length " + std::to_string(row.size()) +
                                   ", dims require " + std::to_string(w));
      for (std::size_t x = 0; x < w; ++x) {
        if (row[x] == '#') cells[r * w + x] = 1;
        else if (row[x] != '.') throw ParseError("grid row " + std::to_string(r) + " has invalid character '" + row[x] + "'");
      }
    }
  } else if (enc == "base64-bitpacked") {
    if (!grid.is_string()) throw ParseError("base64-bitpacked grid must be a string");
    const auto bytes = detail::base64_decode(grid.get_ref<const std::string&>());
    if (bytes.size() != (n + 7) / 8)
      throw PayloadMismatchError("bit-packed payload has " + std::to_string(bytes.size()) + " bytes, dims require " +
                                 std::to_string((n + 7) / 8));
    for (std::size_t i = 0; i < n; ++i) cells[i] = (bytes[i / 8] >> (i % 8)) & 1u;
  } else {
    throw ParseError("unknown grid encoding '" + enc + "'");
  }
  const int dim = static_cast<int>(dims.size());
  const auto agent = detail::parse_point(doc.value("agent", json(nullptr)), dim, "agent");
  const auto goal = detail::parse_point(doc.value("goal", json(nullptr)), dim, "goal");
  GridMap map(dims, std::move(cells));
  auto place = [&](const std::optional<Point>& p, const char* what) {
    if (p && !map.free(*p)) throw BlockedEntityError(std::string(what) + " " + to_string(*p) + " is blocked or out of bounds");
  };
  place(agent, "agent");
  place(goal, "goal");
  map.set_agent(agent);
  map.set_goal(goal);
  return map;
}

inline GridMap load_map(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("invalid map document: ") + e.what());
  }
  return map_from_json(doc);
}

// MovingAI octile map: "type", "height H", "width W", "map", then H rows.
// Only '.' and 'G' are passable.
inline GridMap load_external_gridmap(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto next = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  auto header = [&](const char* key) -> std::string {
    if (!next()) throw ParseError(std::string("missing '") + key + "' header", lineno + 1);
    std::istringstream ls(line);
    std::string k, v, extra;
    ls >> k >> v;
    if (k != key || v.empty() || (ls >> extra)) throw ParseError(std::string("expected '") + key + " <value>' header", lineno);
    return v;
  };
  auto positive = [&](const std::string& v, const char* key) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size() || n < 1) throw ParseError(std::string(key) + " must be a positive integer", lineno);
    return n;
  };
  header("type");
  const int h = positive(header("height"), "height");
  const int w = positive(header("width"), "width");
  if (!next() || line != "map") throw ParseError("expected 'map' line", lineno);
  std::vector<std::uint8_t> cells(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
  for (int y = 0; y < h; ++y) {
    if (!next()) throw ParseError("expected " + std::to_string(h) + " rows, found " + std::to_string(y), lineno + 1);
    if (static_cast<int>(line.size()) != w)
      throw ParseError("row length " + std::to_string(line.size()) + " does not match width " + std::to_string(w), lineno);
    for (int x = 0; x < w; ++x) {
      const char c = line[static_cast<std::size_t>(x)];
      cells[static_cast<std::size_t>(x) + static_cast<std::size_t>(w) * static_cast<std::size_t>(y)] = (c == '.' || c == 'G') ? 0 : 1;
    }
  }
  while (next())
    if (!line.empty()) throw ParseError("unexpected content after the last row", lineno);
  return GridMap({w, h}, std::move(cells));
}

// Grayscale P2/P5 image; pixels darker than `threshold` are blocked. Without a
// threshold the mid-scale value (maxval + 1) / 2 is used.
inline GridMap load_pgm(std::string_view bytes, std::optional<int> threshold_opt = std::nullopt) {
  std::size_t pos = 0;
  auto skip_space = [&] {
    for (;;) {
      while (pos < bytes.size() && std::isspace(static_cast<unsigned char>(bytes[pos]))) ++pos;
      if (pos < bytes.size() && bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
        continue;
      }
      return;
    }
  };
  auto number = [&](const char* what) {
    skip_space();
    long long v = 0;
    std::size_t start = pos;
    while (pos < bytes.size() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
      v = v * 10 + (bytes[pos] - '0');
      if (v > (1 << 30)) throw ParseError(std::string("pgm ") + what + " is too large");
      ++pos;
    }
    if (pos == start) throw ParseError(std::string("pgm: expected ") + what);
    return static_cast<int>(v);
  };
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    throw UnsupportedError("unsupported image format: only P2 and P5 grayscale PGM are accepted");
  const bool binary = bytes[1] == '5';
  pos = 2;
  const int w = number("width"), h = number("height"), maxval = number("maxval");
  if (w < 1 || h < 1) throw ParseError("pgm dimensions must be positive");
  if (maxval < 1 || maxval > 65535) throw ParseError("pgm maxval must be in [1, 65535]");
  const int threshold = threshold_opt.value_or((maxval + 1) / 2);
  if (threshold < 0 || threshold > maxval)
    throw PreconditionError("threshold " + std::to_string(threshold) + " outside [0, " + std::to_string(maxval) + "]");
  const std::size_t n = static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  std::vector<std::uint8_t> cells(n, 0);
  if (binary) {
    if (pos >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[pos]))) throw ParseError("pgm: missing header terminator");
    ++pos;
    const std::size_t bpp = maxval < 256 ? 1 : 2;
    if (bytes.size() - pos < n * bpp) throw PayloadMismatchError("pgm pixel data is truncated");
    for (std::size_t i = 0; i < n; ++i) {
      int v = static_cast<unsigned char>(bytes[pos + i * bpp]);
      if (bpp == 2) v = (v << 8) | static_cast<unsigned char>(bytes[pos + i * bpp + 1]);
      cells[i] = v < threshold;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      const int v = number("pixel value");
      if (v > maxval) throw ParseError("pgm pixel value exceeds maxval");
      cells[i] = v < threshold;
    }
  }
  return GridMap({w, h}, std::move(cells));
}

// SVG rendering of a scenario and planner outcome. 2D only.
inline std::string export_trace_svg(const Scenario& s, const PlanOutcome& out, int cell_px = 8) {
  const GridMap& map = s.grid();
  if (map.dimension() != 2) throw UnsupportedError("trace export supports 2D maps only");
  const int w = map.extent(0), h = map.extent(1);
  std::ostringstream o;
  auto rect = [&](Point p, const char* fill) {
    o << "<rect x=\"" << p.x * cell_px << "\" y=\"" << p.y * cell_px << "\" width=\"" << cell_px << "\" height=\""
      << cell_px << "\" fill=\"" << fill << "\"/>\n";
  };
  auto centre = [&](int c) { return c * cell_px + cell_px / 2.0; };
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w * cell_px << "\" height=\"" << h * cell_px
    << "\" viewBox=\"0 0 " << w * cell_px << ' ' << h * cell_px << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << w * cell_px << "\" height=\"" << h * cell_px << "\" fill=\"#ffffff\"/>\n";
  o << "<g id=\"explored\">\n";
  std::vector<std::uint8_t> drawn(map.cell_count(), 0);
  for (const Point& p : out.trace.explored) {
    if (!map.in_bounds(p) || drawn[map.index(p)]) continue;
    drawn[map.index(p)] = 1;
    rect(p, "#a0a0a0");
  }
  o << "</g>\n<g id=\"obstacles\">\n";
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (map.blocked({x, y})) rect({x, y}, "#000000");
  o << "</g>\n";
  if (out.success() && out.path) {
    o << "<polyline id=\"path\" fill=\"none\" stroke=\"#7cfc00\" stroke-width=\"" << std::max(1, cell_px / 3)
      << "\" points=\"";
    for (std::size_t i = 0; i < out.path->points.size(); ++i)
      o << (i ? " " : "") << centre(out.path->points[i].x) << ',' << centre(out.path->points[i].y);
    o << "\"/>\n";
  }
  const double r = cell_px / 2.0;
  o << "<circle id=\"goal\" cx=\"" << centre(s.goal.x) << "\" cy=\"" << centre(s.goal.y) << "\" r=\"" << r
    << "\" fill=\"#ff00ff\"/>\n";
  o << "<circle id=\"agent\" cx=\"" << centre(s.start.x) << "\" cy=\"" << centre(s.start.y) << "\" r=\"" << r
    << "\" fill=\"#ff0000\"/>\n";
  o << "</svg>\n";
  return o.str();
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error("write failed for " + path.string());
}

// Loads any supported map file by extension.
inline GridMap load_map_file(const std::filesystem::path& path, std::optional<int> pgm_threshold = std::nullopt) {
  const auto ext = path.extension().string();
  if (ext == ".pbmap" || ext == ".json") return load_map(read_file(path));
  if (ext == ".map") return load_external_gridmap(read_file(path));
  if (ext == ".pgm") return load_pgm(read_file(path), pgm_threshold);
  throw UnsupportedError("unsupported map file extension '" + ext + "'");
}

}  // namespace pathbench
