#include <catch2/catch_amalgamated.hpp>
#include <sstream>

#include "helpers.hpp"
#include "podtas/executor.hpp"

using namespace podtas;

namespace {

// alpha: 4 ms of work, a power phase change 2 ms in. beta: 6 ms of work
// with a deadline equal to its wcet, so any delay at all misses.
TaskSet two_tasks() {
  std::istringstream in(
      "task alpha\n"
      "wcet_ms 4\n"
      "deadline_ms 10\n"
      "period_ms 20\n"
      "trace time_ms,c0,mem\n"
      "0,10,1\n"
      "2,6,1\n"
      "end\n"
      "task beta\n"
      "wcet_ms 6\n"
      "deadline_ms 6\n"
      "period_ms 20\n"
      "trace time_ms,c0\n"
      "0,8\n"
      "end\n");
  return parse_tasks(in, "two_tasks");
}

Schedule empty_schedule(int cores, double t_end) {
  Schedule s;
  s.algorithm = "hand";
  s.n_cores = cores;
  s.quantum_s = 1e-3;
  s.t_end_s = t_end;
  return s;
}

// Breakpoint instants can come off the quantum grid (n * dt) or an append
// time; those agree only to round-off, so compare with a tiny margin.
void check_times(const std::vector<double>& got,
                 const std::vector<double>& want) {
  REQUIRE(got.size() == want.size());
  for (size_t i = 0; i < got.size(); ++i)
    REQUIRE(got[i] == Catch::Approx(want[i]).margin(1e-12));
}

}  // namespace

TEST_CASE("replay emits phase changes, completions, and idle power") {
  TaskSet ts = two_tasks();
  Floorplan fp = testkit::small_floorplan();  // blocks: c0, mem, c1
  Schedule s = empty_schedule(2, 0.02);
  s.append(0.0, {"alpha", ""});
  ReplayResult rr = build_power_trace(s, ts, fp, 0.0);

  // Breakpoints: start, the 2 ms phase change, the 4 ms completion.
  check_times(rr.timeline.t, {0.0, 2e-3, 4e-3});
  REQUIRE(rr.timeline.w[0] == Eigen::Vector3d(10, 1, 0));
  REQUIRE(rr.timeline.w[1] == Eigen::Vector3d(6, 1, 0));
  REQUIRE(rr.timeline.w[2] == Eigen::Vector3d(0, 0, 0));
  // beta was released at t = 0 but never scheduled, so exactly its job
  // misses; alpha made its deadline.
  REQUIRE(rr.misses.size() == 1);
  REQUIRE(rr.misses[0].task == "beta");
}

TEST_CASE("execution offsets follow a task across a migration") {
  TaskSet ts = two_tasks();
  Floorplan fp = testkit::small_floorplan();
  Schedule s = empty_schedule(2, 0.02);
  s.append(0.0, {"alpha", ""});
  s.append(3e-3, {"", "alpha"});  // move mid-phase onto the other core
  ReplayResult rr = build_power_trace(s, ts, fp, 0.0);

  check_times(rr.timeline.t, {0.0, 2e-3, 3e-3, 4e-3});
  // After the move the task is 3 ms into its trace: still the 6 W phase,
  // now drawn on c1, with the shared block along.
  REQUIRE(rr.timeline.w[2] == Eigen::Vector3d(0, 1, 6));
  REQUIRE(rr.timeline.w[3] == Eigen::Vector3d(0, 0, 0));
  REQUIRE(rr.misses.size() == 1);  // the unscheduled beta again
  REQUIRE(rr.misses[0].task == "beta");
}

TEST_CASE("late dispatch misses a tight deadline") {
  TaskSet ts = two_tasks();
  Floorplan fp = testkit::small_floorplan();
  Schedule s = empty_schedule(2, 0.02);
  s.append(0.0, {"alpha", ""});
  s.append(4e-3, {"alpha", "beta"});  // beta can only finish at 10 ms > 6 ms
  ReplayResult rr = build_power_trace(s, ts, fp, 0.0);
  REQUIRE(rr.misses.size() == 1);
  REQUIRE(rr.misses[0].task == "beta");
  REQUIRE(rr.misses[0].job == 0);
  REQUIRE(rr.misses[0].deadline_s == Catch::Approx(6e-3));
}

TEST_CASE("a job unfinished at the horizon counts against its deadline") {
  TaskSet ts = two_tasks();
  Floorplan fp = testkit::small_floorplan();
  Schedule s = empty_schedule(2, 0.005);  // horizon before beta could finish
  s.append(0.0, {"beta", ""});
  ReplayResult rr = build_power_trace(s, ts, fp, 0.0);
  // beta's absolute deadline (6 ms) lies past the 5 ms horizon: no verdict.
  REQUIRE(rr.misses.empty());

  Schedule s2 = empty_schedule(2, 0.008);
  s2.append(0.0, {"", ""});
  s2.append(5e-3, {"beta", ""});  // 3 ms of work by the 6 ms deadline? no
  ReplayResult rr2 = build_power_trace(s2, ts, fp, 0.0);
  REQUIRE(rr2.misses.size() == 1);
  REQUIRE(rr2.misses[0].task == "beta");
}

TEST_CASE("periodic re-arrival resets remaining work and can stack misses") {
  TaskSet ts = two_tasks();
  Floorplan fp = testkit::small_floorplan();
  // Never run anything: every released job with a deadline in the horizon
  // misses. alpha and beta both release at 0 and 20 ms.
  Schedule s = empty_schedule(2, 0.045);
  s.append(0.0, {"", ""});
  ReplayResult rr = build_power_trace(s, ts, fp, 0.0);
  REQUIRE(rr.misses.size() == 4);  // two tasks, jobs 0 and 1 each
}

TEST_CASE("idle wattage sits on unoccupied cores") {
  TaskSet ts = two_tasks();
  Floorplan fp = testkit::small_floorplan();
  Schedule s = empty_schedule(2, 0.004);
  s.append(0.0, {"alpha", ""});
  ReplayResult rr = build_power_trace(s, ts, fp, 1.5);
  REQUIRE(rr.timeline.w[0] == Eigen::Vector3d(10, 1, 1.5));
  // After alpha completes at 4 ms the horizon ends; during [2,4) the busy
  // core draws the second phase and the idle one still its 1.5 W.
  REQUIRE(rr.timeline.w[1] == Eigen::Vector3d(6, 1, 1.5));
}

TEST_CASE("schedules round trip through the delta encoding") {
  Schedule s = empty_schedule(2, 0.02);
  s.thresholded = true;
  s.tc_c = 70;
  s.th_c = 75;
  s.feasible = false;
  // Times as the schedulers compute them: quantum multiples. For some n the
  // product n * 1e-3 is an ulp off the matching literal, and the file format
  // normalizes onto the product form.
  s.append(0.0, {"alpha", ""});
  s.append(3 * s.quantum_s, {"alpha", "beta"});
  s.append(7 * s.quantum_s, {"", "beta"});
  s.append(9 * s.quantum_s, {"beta", ""});
  std::ostringstream out;
  save_schedule(s, out);
  std::istringstream in(out.str());
  Schedule back = parse_schedule(in, "rt");
  REQUIRE(back.algorithm == s.algorithm);
  REQUIRE(back.n_cores == s.n_cores);
  REQUIRE(back.quantum_s == s.quantum_s);
  REQUIRE(back.t_end_s == s.t_end_s);
  REQUIRE(back.thresholded);
  REQUIRE(back.tc_c == s.tc_c);
  REQUIRE(back.th_c == s.th_c);
  REQUIRE(back.feasible == s.feasible);
  REQUIRE(back.t == s.t);
  REQUIRE(back.assign == s.assign);
}

TEST_CASE("schedules reject malformed structure") {
  Schedule s = empty_schedule(2, 0.02);
  REQUIRE_THROWS_AS(s.validate(), ConfigError);  // no entry at t = 0
  s.append(0.0, {"alpha", ""});
  REQUIRE_THROWS_AS(s.append(0.0, {"alpha", ""}), ConfigError);
  REQUIRE_THROWS_AS(s.append(1e-3, {"alpha"}), ConfigError);
  s.append(0.03, {"", ""});  // past the horizon
  REQUIRE_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("schedules naming unknown tasks are rejected at replay") {
  TaskSet ts = two_tasks();
  Floorplan fp = testkit::small_floorplan();
  Schedule s = empty_schedule(2, 0.01);
  s.append(0.0, {"gamma", ""});
  REQUIRE_THROWS_AS(build_power_trace(s, ts, fp, 0.0), ConfigError);
}
