// Reference adapter for the pb-ext/1 protocol.
//
//   pb_ext_reference [mode]
//
// echo-astar (default)  answer with the in-process A* result
// invalid-path          answer "success" with a path through a blocked cell
// silent                read the request and never answer
// garbage               answer with a line that is not JSON
// exit-nonzero          answer correctly, then exit with status 3

#include <chrono>
#include <iostream>
#include <string>
#include <thread>

#include "pathbench/ext_planner.hpp"
#include "pathbench/planners/graph.hpp"

using namespace pathbench;

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "echo-astar";
  std::string line;
  if (!std::getline(std::cin, line)) return 1;

  if (mode == "silent") {
    for (;;) std::this_thread::sleep_for(std::chrono::seconds(60));
  }
  if (mode == "garbage") {
    std::cout << "this is not a response" << std::endl;
    return 0;
  }

  try {
    const Scenario s = parse_ext_request(json::parse(line));
    const auto moves = MoveSet::for_dimension(s.grid().dimension());
    if (mode == "invalid-path") {
      const GridMap& map = s.grid();
      Point bad{map.extent(0), 0, 0};  // off the map when nothing is blocked
      for (std::size_t i = 0; i < map.cell_count(); ++i)
        if (map.cells()[i]) {
          bad = map.point_at(i);
          break;
        }
      PlanOutcome out;
      out.status = PlanStatus::success;
      out.path = Path::from_points({s.start, bad, s.goal});
      out.final_position = s.goal;
      std::cout << make_ext_response(s, out).dump() << std::endl;
      return 0;
    }
    const double timeout = json::parse(line).value("timeout_s", 120.0);
    std::cout << make_ext_response(s, plan_astar(s, moves, timeout)).dump() << std::endl;
    return mode == "exit-nonzero" ? 3 : 0;
  } catch (const std::exception& e) {
    std::cout << json{{"protocol", ext_protocol}, {"status", "no_path"}, {"path", json::array()}, {"error", e.what()}}.dump()
              << std::endl;
    return 0;
  }
}
