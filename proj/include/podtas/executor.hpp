// Shared execution engine: job arrivals, per-interval execution accounting,
// deadline tracking, and the block power trace all come from this one walk,
// so constructing a schedule and replaying the emitted file cannot drift
// apart. Time advances over caller-chosen boundaries (quantum grid plus any
// assignment-change instants); arrivals are picked up at the first boundary
// at or after their release, completions at their exact instant inside an
// interval.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "podtas/floorplan.hpp"
#include "podtas/power_timeline.hpp"
#include "podtas/schedule.hpp"
#include "podtas/tasks.hpp"

namespace podtas {

struct DeadlineMiss {
  std::string task;
  int job = 0;
  double deadline_s = 0;  // absolute
};

class ScheduleExecutor {
 public:
  static constexpr double kTimeEps = 1e-12;

  ScheduleExecutor(const TaskSet& tasks, const Floorplan& fp, double idle_w)
      : tasks_(tasks), fp_(fp), idle_w_(idle_w) {
    tasks.validate();
    for (const auto& task : tasks.tasks)
      power_.push_back(resolve_task_power(task, fp));
    core_blocks_ = fp.core_indices();
    rt_.resize(tasks.n_tasks());
    timeline_.blocks = fp.block_names();
  }

  int n_cores() const { return static_cast<int>(core_blocks_.size()); }

  // Releases every job due at or before t. Returns true if any task gained
  // a fresh job (its remaining work was reset to the wcet).
  bool process_arrivals(double t) {
    bool any = false;
    for (int i = 0; i < tasks_.n_tasks(); ++i) {
      const Task& task = tasks_.tasks[i];
      auto& r = rt_[i];
      while ((r.job + 1) * task.period_s <= t + kTimeEps) {
        if (r.job >= 0 && r.remaining > 0)
          misses_.push_back({task.name, r.job,
                             r.job * task.period_s + task.deadline_s});
        ++r.job;
        r.remaining = task.wcet_s;
        r.executed = 0;
        any = true;
      }
    }
    return any;
  }

  bool ready(int task) const { return rt_[task].remaining > 0; }
  double remaining_s(int task) const { return rt_[task].remaining; }
  int current_job(int task) const { return rt_[task].job; }

  // Runs [t0, t1) under a fixed core->task mapping (-1 idle). Power
  // breakpoints land on the timeline at t0 and at every in-interval change
  // (trace phase boundaries, completions). Returns true if any assigned
  // task ran to completion inside the interval.
  bool run_interval(double t0, double t1, const std::vector<int>& core_task) {
    if (static_cast<int>(core_task.size()) != n_cores())
      throw ConfigError("executor: assignment width mismatch");
    // Event times: interval start, trace sample crossings while running,
    // completion instants.
    events_.clear();
    events_.push_back(t0);
    for (int c = 0; c < n_cores(); ++c) {
      int ti = core_task[c];
      if (ti < 0) continue;
      const auto& r = rt_[ti];
      if (r.remaining <= 0) continue;
      double t_done = t0 + r.remaining;
      if (t_done < t1 - kTimeEps) events_.push_back(t_done);
      double run_until = std::min(t1, t_done);
      const auto& rp = power_[ti];
      for (double off : rp.t) {
        double at = t0 + (off - r.executed);
        if (at > t0 + kTimeEps && at < run_until - kTimeEps)
          events_.push_back(at);
      }
    }
    std::sort(events_.begin(), events_.end());
    events_.erase(std::unique(events_.begin(), events_.end(),
                              [](double a, double b) {
                                return std::abs(a - b) <= kTimeEps;
                              }),
                  events_.end());
    bool completed = false;
    for (size_t e = 0; e < events_.size(); ++e) {
      double seg0 = events_[e];
      double seg1 = e + 1 < events_.size() ? events_[e + 1] : t1;
      timeline_.append(seg0, instant_power(core_task));
      double len = seg1 - seg0;
      for (int c = 0; c < n_cores(); ++c) {
        int ti = core_task[c];
        if (ti < 0 || rt_[ti].remaining <= 0) continue;
        auto& r = rt_[ti];
        if (len >= r.remaining - kTimeEps) {
          // Job finishes at seg0 + remaining (== seg1 up to round-off).
          double t_done = seg0 + r.remaining;
          r.executed += r.remaining;
          r.remaining = 0;
          completed = true;
          const Task& task = tasks_.tasks[ti];
          double abs_deadline = r.job * task.period_s + task.deadline_s;
          if (t_done > abs_deadline + kTimeEps)
            misses_.push_back({task.name, r.job, abs_deadline});
        } else {
          r.executed += len;
          r.remaining -= len;
        }
      }
    }
    return completed;
  }

  // Flags jobs that are still unfinished at the horizon although their
  // deadline lies inside it.
  void finalize(double t_end) {
    for (int i = 0; i < tasks_.n_tasks(); ++i) {
      const auto& r = rt_[i];
      if (r.job < 0 || r.remaining <= 0) continue;
      const Task& task = tasks_.tasks[i];
      double abs_deadline = r.job * task.period_s + task.deadline_s;
      if (abs_deadline <= t_end + kTimeEps)
        misses_.push_back({task.name, r.job, abs_deadline});
    }
    timeline_.t_end_s = std::max(timeline_.t_end_s, t_end);
  }

  const PowerTimeline& timeline() const { return timeline_; }
  const std::vector<DeadlineMiss>& misses() const { return misses_; }
  const std::vector<int>& core_blocks() const { return core_blocks_; }
  const ResolvedTaskPower& task_power(int i) const { return power_[i]; }

 private:
  struct TaskRuntime {
    int job = -1;          // -1 before the first release
    double remaining = 0;  // seconds left in the current job
    double executed = 0;   // seconds done, the offset into the trace
  };

  // Wattage vector at an instant: idle draw on unoccupied cores, the task's
  // core draw on busy ones, shared-block draws from every running task.
  Eigen::VectorXd instant_power(const std::vector<int>& core_task) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(fp_.n_blocks());
    for (int c = 0; c < n_cores(); ++c) {
      int ti = core_task[c];
      if (ti < 0 || rt_[ti].remaining <= 0) {
        w[core_blocks_[c]] += idle_w_;
        continue;
      }
      const auto& rp = power_[ti];
      int s = rp.sample_at(rt_[ti].executed + kTimeEps);
      w[core_blocks_[c]] += rp.core_w[s];
      w += rp.shared_w.row(s).transpose();
    }
    return w;
  }

  const TaskSet& tasks_;
  const Floorplan& fp_;
  double idle_w_;
  std::vector<ResolvedTaskPower> power_;
  std::vector<int> core_blocks_;
  std::vector<TaskRuntime> rt_;
  PowerTimeline timeline_;
  std::vector<DeadlineMiss> misses_;
  std::vector<double> events_;
};

// Replays an emitted schedule into the block power trace its construction
// implies. The walk visits every quantum boundary plus every assignment
// change, mirroring construction exactly.
struct ReplayResult {
  PowerTimeline timeline;
  std::vector<DeadlineMiss> misses;
};

inline ReplayResult build_power_trace(const Schedule& s, const TaskSet& tasks,
                                      const Floorplan& fp, double idle_w) {
  s.validate();
  if (s.n_cores != static_cast<int>(fp.core_indices().size()))
    throw ConfigError("replay: schedule core count differs from floorplan");
  ScheduleExecutor ex(tasks, fp, idle_w);
  // Boundary times: quantum grid entries, assignment changes, horizon.
  std::vector<double> bounds;
  for (int n = 0; n * s.quantum_s < s.t_end_s - ScheduleExecutor::kTimeEps;
       ++n)
    bounds.push_back(n * s.quantum_s);
  for (double tv : s.t) bounds.push_back(tv);
  bounds.push_back(s.t_end_s);
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end(),
                           [](double a, double b) {
                             return std::abs(a - b) <=
                                    ScheduleExecutor::kTimeEps;
                           }),
               bounds.end());
  std::vector<int> current(size_t(s.n_cores), -1);
  size_t next_entry = 0;
  for (size_t b = 0; b + 1 < bounds.size(); ++b) {
    double t0 = bounds[b];
    ex.process_arrivals(t0);
    while (next_entry < s.t.size() &&
           s.t[next_entry] <= t0 + ScheduleExecutor::kTimeEps) {
      for (int c = 0; c < s.n_cores; ++c) {
        const std::string& name = s.assign[next_entry][size_t(c)];
        if (name.empty()) {
          current[size_t(c)] = -1;
        } else {
          int ti = tasks.task_index(name);
          if (ti < 0)
            throw ConfigError("replay: schedule names unknown task '" + name +
                              "'");
          current[size_t(c)] = ti;
        }
      }
      ++next_entry;
    }
    ex.run_interval(t0, bounds[b + 1], current);
  }
  ex.finalize(s.t_end_s);
  return {ex.timeline(), ex.misses()};
}

}  // namespace podtas
