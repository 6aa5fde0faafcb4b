// The schedule artifact: a piecewise-constant core-to-task assignment. In
// memory every entry carries the full assignment; the file stores deltas:
//
//   podtas-schedule 1
//   algorithm <name>
//   cores <n>
//   quantum_ms <v>
//   t_end_ms <v>
//   tc_c <v>          (threshold-driven schedules only)
//   th_c <v>
//   feasible 0|1
//   assignments
//   <time_ms>,<core_id>,<task|IDLE>
//
// Core ids index the floorplan's core blocks in declaration order. Entry
// times sit on the decision quantum grid; the parser snaps them back onto
// n * quantum exactly, so a saved schedule replays bit for bit.
#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "podtas/types.hpp"

namespace podtas {

struct Schedule {
  std::string algorithm;
  int n_cores = 0;
  double quantum_s = 0;
  double t_end_s = 0;
  bool thresholded = false;
  double tc_c = 0, th_c = 0;
  bool feasible = true;
  std::vector<double> t;                         // append instants
  std::vector<std::vector<std::string>> assign;  // per instant, "" = idle

  int n_entries() const { return static_cast<int>(t.size()); }

  // Appends per second over the horizon: how often the mapping was rewritten.
  double assignment_frequency_hz() const {
    return t_end_s > 0 ? n_entries() / t_end_s : 0.0;
  }

  void append(double time, std::vector<std::string> tasks) {
    if (static_cast<int>(tasks.size()) != n_cores)
      throw ConfigError("schedule: assignment width mismatch");
    if (!t.empty() && time <= t.back())
      throw ConfigError("schedule: append times must increase");
    if (!assign.empty() && assign.back() == tasks) return;
    t.push_back(time);
    assign.push_back(std::move(tasks));
  }

  void validate() const {
    if (n_cores < 1) throw ConfigError("schedule: no cores");
    if (!(quantum_s > 0) || !(t_end_s > 0))
      throw ConfigError("schedule: bad quantum or horizon");
    if (t.empty() || t.front() != 0)
      throw ConfigError("schedule: must start at t = 0");
    for (size_t i = 1; i < t.size(); ++i)
      if (t[i] <= t[i - 1])
        throw ConfigError("schedule: entry times must increase");
    if (t.back() >= t_end_s)
      throw ConfigError("schedule: entry at or past the horizon");
    for (double tv : t) {
      double r = tv / quantum_s;
      if (std::abs(r - double(std::llround(r))) > 1e-6)
        throw ConfigError("schedule: entry off the decision grid");
    }
    for (const auto& row : assign)
      if (static_cast<int>(row.size()) != n_cores)
        throw ConfigError("schedule: assignment width mismatch");
    if (thresholded && !(th_c > tc_c))
      throw ConfigError("schedule: thresholds out of order");
  }
};

inline void save_schedule(const Schedule& s, std::ostream& out) {
  s.validate();
  char buf[128];
  out << "podtas-schedule 1\n";
  out << "algorithm " << s.algorithm << "\n";
  out << "cores " << s.n_cores << "\n";
  std::snprintf(buf, sizeof buf, "quantum_ms %.17g\n", s.quantum_s * 1e3);
  out << buf;
  std::snprintf(buf, sizeof buf, "t_end_ms %.17g\n", s.t_end_s * 1e3);
  out << buf;
  if (s.thresholded) {
    std::snprintf(buf, sizeof buf, "tc_c %.17g\nth_c %.17g\n", s.tc_c, s.th_c);
    out << buf;
  }
  out << "feasible " << (s.feasible ? 1 : 0) << "\n";
  out << "assignments\n";
  for (int i = 0; i < s.n_entries(); ++i)
    for (int c = 0; c < s.n_cores; ++c) {
      if (i > 0 && s.assign[i][c] == s.assign[i - 1][c]) continue;
      std::snprintf(buf, sizeof buf, "%.17g,%d,", s.t[i] * 1e3, c);
      out << buf
          << (s.assign[i][c].empty() ? std::string("IDLE") : s.assign[i][c])
          << "\n";
    }
}

inline Schedule parse_schedule(std::istream& in, const std::string& origin) {
  Schedule s;
  std::string line;
  int lineno = 0;
  bool in_rows = false;
  std::vector<std::string> current;
  double current_t = -1;
  bool have_entry = false;
  auto fail = [&](const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + what);
  };
  auto flush = [&]() {
    if (!have_entry) return;
    s.t.push_back(current_t);
    s.assign.push_back(current);
    have_entry = false;
  };
  std::getline(in, line);
  ++lineno;
  if (line != "podtas-schedule 1") fail("not a schedule file");
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!in_rows) {
      std::istringstream ls(line);
      std::string key;
      ls >> key;
      if (key == "algorithm") {
        ls >> s.algorithm;
      } else if (key == "cores") {
        ls >> s.n_cores;
        current.assign(size_t(std::max(s.n_cores, 0)), "");
      } else if (key == "quantum_ms") {
        double v;
        ls >> v;
        s.quantum_s = v * 1e-3;
      } else if (key == "t_end_ms") {
        double v;
        ls >> v;
        s.t_end_s = v * 1e-3;
      } else if (key == "tc_c") {
        ls >> s.tc_c;
        s.thresholded = true;
      } else if (key == "th_c") {
        ls >> s.th_c;
        s.thresholded = true;
      } else if (key == "feasible") {
        int v;
        ls >> v;
        s.feasible = v != 0;
      } else if (key == "assignments") {
        in_rows = true;
        continue;
      } else {
        fail("unknown header key '" + key + "'");
      }
      if (!ls) fail("malformed header line");
      continue;
    }
    std::stringstream rs(line);
    std::string t_str, core_str, task;
    if (!std::getline(rs, t_str, ',') || !std::getline(rs, core_str, ',') ||
        !std::getline(rs, task))
      fail("malformed assignment row");
    if (!(s.quantum_s > 0)) fail("assignment rows before a valid quantum");
    double time;
    int core;
    try {
      time = std::stod(t_str) * 1e-3;
      core = std::stoi(core_str);
    } catch (const std::exception&) {
      fail("malformed assignment row");
    }
    // The ms text is only ulp-accurate; recover the exact grid instant.
    time = double(std::llround(time / s.quantum_s)) * s.quantum_s;
    if (core < 0 || core >= s.n_cores) fail("core id out of range");
    if (task.empty()) fail("empty task name");
    if (time != current_t) {
      if (have_entry && time < current_t) fail("times must increase");
      flush();
      current_t = time;
      have_entry = true;
    } else {
      have_entry = true;
    }
    current[size_t(core)] = (task == "IDLE") ? "" : task;
  }
  flush();
  s.validate();
  return s;
}

inline void save_schedule(const Schedule& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  save_schedule(s, out);
}

inline Schedule load_schedule(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse_schedule(in, path);
}

}  // namespace podtas
