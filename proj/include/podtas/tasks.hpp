// Periodic tasks with measured power traces. Task file format:
//
//   task <name>
//   wcet_ms <v>
//   deadline_ms <v>
//   period_ms <v>
//   trace time_ms,<block>,<block>,...
//   <t>,<w>,<w>,...
//   ...
//   end
//
// Trace columns name floorplan blocks. Columns naming core blocks are summed
// into the task's core draw and follow the task to whichever core runs it;
// the rest (nb, io, ...) stay on their named blocks.
#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "podtas/floorplan.hpp"
#include "podtas/types.hpp"

namespace podtas {

struct Task {
  std::string name;
  double wcet_s = 0, deadline_s = 0, period_s = 0;
  std::vector<std::string> trace_cols;
  std::vector<double> trace_t;  // sample offsets from job start, s
  Eigen::MatrixXd trace_w;      // samples x columns, W

  int n_samples() const { return static_cast<int>(trace_t.size()); }

  // Zero-order hold: row of the last sample at or before the offset.
  int sample_at(double offset_s) const {
    int lo = 0;
    for (int i = 1; i < n_samples() && trace_t[i] <= offset_s; ++i) lo = i;
    return lo;
  }

  double utilization() const { return wcet_s / period_s; }

  void validate() const {
    if (name.empty()) throw ConfigError("task: missing name");
    auto bad = [&](const std::string& what) {
      throw ConfigError("task '" + name + "': " + what);
    };
    if (!(wcet_s > 0)) bad("wcet must be positive");
    if (!(deadline_s > 0) || deadline_s < wcet_s)
      bad("deadline must be at least the wcet");
    if (!(period_s > 0) || period_s < deadline_s)
      bad("period must be at least the deadline");
    if (trace_cols.empty() || trace_t.empty()) bad("empty power trace");
    if (trace_t.front() != 0) bad("trace must start at offset 0");
    for (size_t i = 1; i < trace_t.size(); ++i)
      if (trace_t[i] <= trace_t[i - 1]) bad("trace times must increase");
    if (trace_t.back() >= wcet_s) bad("trace extends past the wcet");
    if ((trace_w.array() < 0).any()) bad("negative trace power");
  }
};

struct TaskSet {
  std::vector<Task> tasks;

  int n_tasks() const { return static_cast<int>(tasks.size()); }

  int task_index(const std::string& name) const {
    for (int i = 0; i < n_tasks(); ++i)
      if (tasks[i].name == name) return i;
    return -1;
  }

  void validate() const {
    if (tasks.empty()) throw ConfigError("task set: empty");
    std::set<std::string> seen;
    for (const auto& t : tasks) {
      t.validate();
      if (!seen.insert(t.name).second)
        throw ConfigError("task set: duplicate task '" + t.name + "'");
    }
  }
};

// A task's trace split against a concrete floorplan: per-sample core draw
// (summed core columns) plus the fixed shared-block wattages.
struct ResolvedTaskPower {
  std::vector<double> t;        // sample offsets, s
  std::vector<double> core_w;   // W on the assigned core
  Eigen::MatrixXd shared_w;     // samples x n_blocks, zero on core blocks
  double avg_core_w = 0;        // time average over [0, wcet]
  Eigen::VectorXd avg_shared_w; // n_blocks

  int sample_at(double offset_s) const {
    int lo = 0;
    for (size_t i = 1; i < t.size() && t[i] <= offset_s; ++i)
      lo = static_cast<int>(i);
    return lo;
  }
};

inline ResolvedTaskPower resolve_task_power(const Task& task,
                                            const Floorplan& fp) {
  ResolvedTaskPower r;
  r.t = task.trace_t;
  const int ns = task.n_samples();
  const int nb = fp.n_blocks();
  r.core_w.assign(ns, 0.0);
  r.shared_w = Eigen::MatrixXd::Zero(ns, nb);
  for (size_t c = 0; c < task.trace_cols.size(); ++c) {
    int b = fp.block_index(task.trace_cols[c]);
    if (b < 0)
      throw ConfigError("task '" + task.name + "': trace column '" +
                        task.trace_cols[c] + "' names no floorplan block");
    for (int s = 0; s < ns; ++s) {
      if (fp.blocks[b].is_core)
        r.core_w[s] += task.trace_w(s, c);
      else
        r.shared_w(s, b) += task.trace_w(s, c);
    }
  }
  r.avg_shared_w = Eigen::VectorXd::Zero(nb);
  for (int s = 0; s < ns; ++s) {
    double seg = (s + 1 < ns ? r.t[s + 1] : task.wcet_s) - r.t[s];
    r.avg_core_w += seg * r.core_w[s];
    r.avg_shared_w += seg * r.shared_w.row(s).transpose();
  }
  r.avg_core_w /= task.wcet_s;
  r.avg_shared_w /= task.wcet_s;
  return r;
}

inline TaskSet parse_tasks(std::istream& in, const std::string& origin) {
  TaskSet ts;
  std::string line;
  int lineno = 0;
  Task cur;
  bool in_task = false, in_trace = false;
  std::vector<std::vector<double>> rows;
  auto fail = [&](const std::string& what) {
    throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + what);
  };
  auto finish = [&]() {
    if (rows.empty()) fail("task '" + cur.name + "' has no trace rows");
    cur.trace_t.clear();
    cur.trace_w.resize(rows.size(), cur.trace_cols.size());
    for (size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != cur.trace_cols.size() + 1)
        fail("trace row width mismatch in task '" + cur.name + "'");
      cur.trace_t.push_back(rows[r][0] * 1e-3);
      for (size_t c = 0; c < cur.trace_cols.size(); ++c)
        cur.trace_w(r, c) = rows[r][c + 1];
    }
    ts.tasks.push_back(cur);
    cur = Task{};
    rows.clear();
    in_task = in_trace = false;
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "task") {
      if (in_task) fail("nested task");
      if (!(ls >> cur.name)) fail("task without a name");
      in_task = true;
    } else if (first == "end") {
      if (!in_task) fail("stray end");
      finish();
    } else if (!in_task) {
      fail("content outside a task block");
    } else if (first == "wcet_ms" || first == "deadline_ms" ||
               first == "period_ms") {
      double v;
      if (!(ls >> v)) fail("malformed " + first);
      (first == "wcet_ms"       ? cur.wcet_s
       : first == "deadline_ms" ? cur.deadline_s
                                : cur.period_s) = v * 1e-3;
    } else if (first == "trace") {
      std::string header;
      if (!(ls >> header)) fail("trace without a column header");
      std::stringstream hs(header);
      std::string col;
      while (std::getline(hs, col, ',')) cur.trace_cols.push_back(col);
      if (cur.trace_cols.empty() || cur.trace_cols.front() != "time_ms")
        fail("trace header must start with time_ms");
      cur.trace_cols.erase(cur.trace_cols.begin());
      in_trace = true;
    } else {
      if (!in_trace) fail("unknown key '" + first + "'");
      std::vector<double> row;
      std::stringstream rs(line);
      std::string cell;
      while (std::getline(rs, cell, ',')) {
        try {
          row.push_back(std::stod(cell));
        } catch (const std::exception&) {
          fail("malformed trace value '" + cell + "'");
        }
      }
      rows.push_back(row);
    }
  }
  if (in_task) fail("unterminated task '" + cur.name + "'");
  ts.validate();
  return ts;
}

inline TaskSet load_tasks(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open task file '" + path + "'");
  return parse_tasks(in, path);
}

}  // namespace podtas
