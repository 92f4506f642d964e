#pragma once

// External planners as subprocesses speaking "pb-ext/1": one JSON request line
// on the child's stdin, one JSON response line on its stdout, then exit 0.
//
// request:  {"protocol", "scenario": {"map", "start", "goal", "seed"}, "config", "timeout_s"}
// response: {"protocol", "status", "path", "node_bytes", "error"?, "explored"?, "samples"?, "final_position"?}

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "pathbench/error.hpp"
#include "pathbench/grid.hpp"
#include "pathbench/map_io.hpp"
#include "pathbench/planners/common.hpp"

extern char** environ;

namespace pathbench {

inline constexpr const char* ext_protocol = "pb-ext/1";

inline json make_ext_request(const Scenario& s, const json& config, double timeout_s) {
  GridMap m = s.grid();
  m.set_agent(s.start);
  m.set_goal(s.goal);
  json scen;
  scen["map"] = map_to_json(m, GridEncoding::base64_bitpacked);
  scen["start"] = detail::point_json(m, s.start);
  scen["goal"] = detail::point_json(m, s.goal);
  scen["seed"] = s.seed;
  return json{{"protocol", ext_protocol}, {"scenario", std::move(scen)}, {"config", config}, {"timeout_s", timeout_s}};
}

// Parses a request into a scenario owning its map. Used by adapters.
inline Scenario parse_ext_request(const json& req) {
  if (!req.is_object() || req.value("protocol", "") != ext_protocol) throw ProtocolError("not a pb-ext/1 request");
  const json& scen = req.at("scenario");
  auto map = std::make_shared<const GridMap>(map_from_json(scen.at("map")));
  const int dim = map->dimension();
  const auto start = detail::parse_point(scen.at("start"), dim, "start");
  const auto goal = detail::parse_point(scen.at("goal"), dim, "goal");
  if (!start || !goal) throw ProtocolError("request without start or goal");
  Scenario s{map, *start, *goal, scen.value("seed", std::uint64_t{0})};
  s.validate();
  return s;
}

inline json make_ext_response(const Scenario& s, const PlanOutcome& out) {
  const GridMap& m = s.grid();
  json path = json::array();
  if (out.path)
    for (const Point& p : out.path->points) path.push_back(detail::point_json(m, p));
  json explored = json::array(), samples = json::array();
  for (const Point& p : out.trace.explored) explored.push_back(detail::point_json(m, p));
  for (const Point& p : out.trace.samples) samples.push_back(detail::point_json(m, p));
  json r{{"protocol", ext_protocol},
         {"status", status_name(out.status)},
         {"path", std::move(path)},
         {"node_bytes", out.trace.node_bytes},
         {"explored", std::move(explored)},
         {"samples", std::move(samples)},
         {"final_position", detail::point_json(m, out.final_position)}};
  if (!out.failure_reason.empty()) r["error"] = out.failure_reason;
  return r;
}

namespace detail {

struct ChildExchange {
  bool timed_out = false;
  bool got_line = false;
  std::string line;
  int exit_status = -1;  // waitpid status, -1 when killed by us
  std::string spawn_error;
};

inline void close_fd(int& fd) {
  if (fd >= 0) ::close(fd);
  fd = -1;
}

// Spawns `/bin/sh -c cmd`, writes `input`, reads one line, waits for exit.
// The child is killed when the deadline passes.
inline ChildExchange exchange_with_child(const std::string& cmd, const std::string& input, double timeout_s) {
  ChildExchange ex;
  int in_pipe[2], out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    ex.spawn_error = std::strerror(errno);
    return ex;
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ex.spawn_error = std::strerror(errno);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    return ex;
  }
  posix_spawn_file_actions_t fa;
  posix_spawn_file_actions_init(&fa);
  posix_spawn_file_actions_adddup2(&fa, in_pipe[0], 0);
  posix_spawn_file_actions_adddup2(&fa, out_pipe[1], 1);
  // own process group, so a timeout kills the shell and everything it started
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);
  pid_t pid = -1;
  const char* argv[] = {"/bin/sh", "-c", cmd.c_str(), nullptr};
  const int rc = ::posix_spawn(&pid, "/bin/sh", &fa, &attr, const_cast<char* const*>(argv), environ);
  posix_spawnattr_destroy(&attr);
  posix_spawn_file_actions_destroy(&fa);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  int wfd = in_pipe[1], rfd = out_pipe[0];
  if (rc != 0) {
    ex.spawn_error = std::strerror(rc);
    close_fd(wfd);
    close_fd(rfd);
    return ex;
  }
  ::fcntl(wfd, F_SETFL, ::fcntl(wfd, F_GETFL) | O_NONBLOCK);
  ::fcntl(rfd, F_SETFL, ::fcntl(rfd, F_GETFL) | O_NONBLOCK);

  // keep a dying child's closed stdin from raising SIGPIPE in this thread
  sigset_t pipe_set, old_set;
  sigemptyset(&pipe_set);
  sigaddset(&pipe_set, SIGPIPE);
  pthread_sigmask(SIG_BLOCK, &pipe_set, &old_set);
  bool sigpipe_raised = false;

  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                                std::chrono::duration<double>(timeout_s));
  auto remaining_ms = [&] {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    return static_cast<int>(std::max<long long>(0, left.count()));
  };
  std::size_t written = 0;
  std::string buffer;
  bool eof = false;
  while (!ex.got_line && !eof) {
    const int wait = remaining_ms();
    if (wait <= 0) {
      ex.timed_out = true;
      break;
    }
    pollfd fds[2];
    nfds_t n = 0;
    fds[n++] = {rfd, POLLIN, 0};
    if (wfd >= 0) fds[n++] = {wfd, POLLOUT, 0};
    const int pr = ::poll(fds, n, std::min(wait, 100));
    if (pr < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (n == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t w = ::write(wfd, input.data() + written, input.size() - written);
      if (w > 0) written += static_cast<std::size_t>(w);
      if (w < 0 && errno == EPIPE) sigpipe_raised = true;
      if ((w < 0 && errno != EAGAIN && errno != EINTR) || written == input.size()) close_fd(wfd);
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      char chunk[4096];
      const ssize_t r = ::read(rfd, chunk, sizeof chunk);
      if (r > 0) {
        buffer.append(chunk, static_cast<std::size_t>(r));
        const auto nl = buffer.find('\n');
        if (nl != std::string::npos) {
          ex.line = buffer.substr(0, nl);
          ex.got_line = true;
        }
      } else if (r == 0) {
        eof = true;
      } else if (errno != EAGAIN && errno != EINTR) {
        eof = true;
      }
    }
  }
  if (!ex.got_line && eof && !buffer.empty()) ex.line = buffer;  // unterminated final line
  close_fd(wfd);

  // wait for exit within what is left of the deadline
  int status = 0;
  bool reaped = false;
  while (!ex.timed_out) {
    const pid_t w = ::waitpid(pid, &status, WNOHANG);
    if (w == pid) {
      reaped = true;
      break;
    }
    if (w < 0 && errno != EINTR) break;
    if (remaining_ms() <= 0) {
      if (!ex.got_line) ex.timed_out = true;
      break;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }
  ::kill(-pid, SIGKILL);  // the whole group, including anything an exited shell left behind
  if (!reaped) {
    while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
    }
    ex.exit_status = -1;
  } else {
    ex.exit_status = status;
  }
  close_fd(rfd);

  if (sigpipe_raised) {
    const timespec zero{0, 0};
    while (sigtimedwait(&pipe_set, nullptr, &zero) > 0) {
    }
  }
  pthread_sigmask(SIG_SETMASK, &old_set, nullptr);
  return ex;
}

}  // namespace detail

// Runs one external planner invocation. Protocol and validation failures are
// returned as no_path outcomes with the reason in failure_reason.
inline PlanOutcome run_external(const std::string& cmd, const Scenario& s, double timeout_s,
                                const json& config = json::object()) {
  s.validate();
  if (!(timeout_s > 0)) throw PreconditionError("timeout must be positive");
  const GridMap& map = s.grid();
  const std::string request = make_ext_request(s, config, timeout_s).dump() + "\n";

  const auto t0 = std::chrono::steady_clock::now();
  const auto ex = detail::exchange_with_child(cmd, request, timeout_s);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  auto fail = [&](PlanStatus st, std::string reason) {
    PlanOutcome out = failure(st, s.start, {}, std::move(reason));
    out.wall_time = elapsed;
    return out;
  };
  if (!ex.spawn_error.empty()) return fail(PlanStatus::no_path, "launch failed: " + ex.spawn_error);
  if (ex.timed_out) return fail(PlanStatus::budget_exhausted, "timeout");
  if (!ex.got_line && ex.line.empty()) return fail(PlanStatus::no_path, "protocol error: no response line");

  json resp;
  try {
    resp = json::parse(ex.line);
  } catch (const json::parse_error&) {
    return fail(PlanStatus::no_path, "protocol error: response is not valid JSON");
  }
  if (ex.exit_status == -1 || !WIFEXITED(ex.exit_status) || WEXITSTATUS(ex.exit_status) != 0)
    return fail(PlanStatus::no_path, "protocol error: child did not exit with status 0");

  PlanOutcome out;
  try {
    if (!resp.is_object() || resp.value("protocol", "") != ext_protocol)
      return fail(PlanStatus::no_path, "protocol error: wrong or missing protocol field");
    const auto status = parse_status(resp.at("status").get<std::string>());
    if (!status) return fail(PlanStatus::no_path, "protocol error: unknown status");
    const int dim = map.dimension();
    auto points = [&](const char* key) {
      std::vector<Point> v;
      if (!resp.contains(key)) return v;
      for (const auto& p : resp.at(key)) v.push_back(*detail::parse_point(p, dim, key));
      return v;
    };
    out.trace.explored = points("explored");
    out.trace.samples = points("samples");
    for (const auto& p : out.trace.explored)
      if (!map.in_bounds(p)) return fail(PlanStatus::no_path, "protocol error: explored cell outside the map");
    for (const auto& p : out.trace.samples)
      if (!map.in_bounds(p)) return fail(PlanStatus::no_path, "protocol error: sample outside the map");
    out.trace.node_bytes = resp.value("node_bytes", std::size_t{0});
    out.status = *status;
    if (*status == PlanStatus::success) {
      Path path = Path::from_points(points("path"));
      const auto why = path_violation(map, path, s.start, s.goal, MoveSet::for_dimension(dim), Connectivity::line_of_sight);
      if (!why.empty()) return fail(PlanStatus::no_path, "invalid path: " + why);
      out.final_position = path.points.back();
      out.path = std::move(path);
    } else {
      out.final_position = s.start;
      if (resp.contains("final_position") && !resp["final_position"].is_null()) {
        const Point p = *detail::parse_point(resp["final_position"], dim, "final_position");
        if (map.in_bounds(p)) out.final_position = p;
      }
      out.failure_reason = resp.value("error", std::string("external planner reported ") + status_name(*status));
    }
  } catch (const json::exception& e) {
    return fail(PlanStatus::no_path, std::string("protocol error: ") + e.what());
  } catch (const ParseError& e) {
    return fail(PlanStatus::no_path, std::string("protocol error: ") + e.what());
  }
  out.wall_time = elapsed;
  return out;
}

}  // namespace pathbench
