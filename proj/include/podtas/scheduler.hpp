// The two schedulers.
//
// The threshold scheduler steps the reduced model alongside execution and
// works the core state machine: thermal Cool/Warm/Hot against the T_C/T_H
// band, execution Idle/Run. A core classifying Hot has its task revoked and
// idles until it cools below T_C; Hot+Run never occurs. Task selection takes
// the largest-remaining ready tasks, one per eligible core, and places them
// coolest-core-first. The mapping is recomputed when a core enters or leaves
// the throttled state, a job completes or arrives, or at t = 0; execution
// and states otherwise advance on the decision quantum.
//
// The static baseline packs tasks once at t = 0, worst-fit by steady-state
// prediction from the coupling matrix, and runs per-core FIFO queues with no
// thermal throttling.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <vector>

#include "podtas/executor.hpp"
#include "podtas/rom_model.hpp"
#include "podtas/schedule.hpp"
#include "podtas/steady_model.hpp"
#include "podtas/tasks.hpp"

namespace podtas {

struct SchedulerConfig {
  double tc_c = 70.0;
  double th_c = 75.0;
  double quantum_s = 1e-3;
  double predict_dt_s = 1e-4;
  double t_end_s = 2.0;
  double idle_power_w = 0.0;

  int substeps() const {
    double r = quantum_s / predict_dt_s;
    int n = int(std::llround(r));
    if (n < 1 || std::abs(r - n) > 1e-9)
      throw ConfigError("scheduler: prediction step must divide the quantum");
    return n;
  }

  int quanta() const {
    double r = t_end_s / quantum_s;
    int n = int(std::llround(r));
    if (n < 1 || std::abs(r - n) > 1e-6)
      throw ConfigError("scheduler: horizon must be a quantum multiple");
    return n;
  }

  void validate_thresholds() const {
    if (!(th_c > tc_c))
      throw ConfigError("scheduler: T_H must exceed T_C");
  }
};

enum class Thermal { Cool, Warm, Hot };

struct CoreState {
  Thermal thermal = Thermal::Cool;
  bool running = false;
};

// Strict-inequality bands, faithfully: T < T_C is Cool, T_C < T < T_H is
// Warm, anything else (including T == T_C exactly) is Hot.
inline Thermal classify_temperature(double t, double tc, double th) {
  if (t < tc) return Thermal::Cool;
  if (t > tc && t < th) return Thermal::Warm;
  return Thermal::Hot;
}

// Largest-remaining-first pick of ready tasks, at most one per eligible
// core. Ties break on the task name.
inline std::vector<int> select_tasks(const std::vector<double>& remaining,
                                     const std::vector<std::string>& names,
                                     int n_eligible) {
  std::vector<int> ready;
  for (size_t i = 0; i < remaining.size(); ++i)
    if (remaining[i] > 0) ready.push_back(int(i));
  std::sort(ready.begin(), ready.end(), [&](int a, int b) {
    if (remaining[size_t(a)] != remaining[size_t(b)])
      return remaining[size_t(a)] > remaining[size_t(b)];
    return names[size_t(a)] < names[size_t(b)];
  });
  if (static_cast<int>(ready.size()) > n_eligible)
    ready.resize(size_t(n_eligible));
  return ready;
}

// Coolest-core-first placement: the k-th selected task lands on the k-th
// coolest eligible core (ties on the core index). Selection never yields
// more tasks than eligible cores, so nothing is ever left over.
inline std::vector<int> assign_tasks(const std::vector<int>& selected,
                                     const std::vector<int>& eligible_cores,
                                     const std::vector<double>& core_temp,
                                     int n_cores) {
  std::vector<int> order = eligible_cores;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (core_temp[size_t(a)] != core_temp[size_t(b)])
      return core_temp[size_t(a)] < core_temp[size_t(b)];
    return a < b;
  });
  if (selected.size() > order.size())
    throw NumericError("assign_tasks: more tasks selected than cores");
  std::vector<int> assignment(size_t(n_cores), -1);
  for (size_t k = 0; k < selected.size(); ++k)
    assignment[size_t(order[k])] = selected[k];
  return assignment;
}

struct ConstructionLogRow {
  double t = 0;
  std::vector<double> temp_c;     // per core, at the boundary
  std::vector<char> thermal;      // 'C' / 'W' / 'H'
  std::vector<char> exec;         // 'R' / 'I'
  std::vector<std::string> task;  // empty = idle
};

struct ConstructionStats {
  double max_quantum_rise_c = 0;  // largest per-core rise within one quantum
  double max_over_th_c = 0;       // worst predicted excursion above T_H
  double peak_core_c = 0;
  int recomputes = 0;
};

struct ScheduleResult {
  Schedule schedule;
  bool feasible = true;
  std::vector<DeadlineMiss> misses;
  std::vector<ConstructionLogRow> log;
  ConstructionStats stats;
  PowerTimeline predicted_trace;  // power the construction accounted for
};

// Per-core peak readout from reduced coefficients: the rows of the mode
// matrix under the core footprint, hottest cell wins.
class CoreTempReader {
 public:
  CoreTempReader(const PodBasis& basis, const Floorplan& fp) {
    FloorplanGrid map(fp, basis.grid);
    for (int b : fp.core_indices()) {
      std::vector<int> cells = map.block_cells(b);
      Eigen::MatrixXd slice(cells.size(), basis.m());
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(cells.size());
      for (size_t r = 0; r < cells.size(); ++r) {
        slice.row(Eigen::Index(r)) = basis.modes.row(cells[r]);
        if (basis.centered) mean[Eigen::Index(r)] = basis.mean[cells[r]];
      }
      slices_.push_back(std::move(slice));
      means_.push_back(std::move(mean));
    }
  }

  int n_cores() const { return static_cast<int>(slices_.size()); }

  double peak(int core, const Eigen::VectorXd& a) const {
    return (slices_[size_t(core)] * a + means_[size_t(core)]).maxCoeff();
  }

  std::vector<double> peaks(const Eigen::VectorXd& a) const {
    std::vector<double> out(static_cast<size_t>(n_cores()));
    for (int c = 0; c < n_cores(); ++c) out[size_t(c)] = peak(c, a);
    return out;
  }

 private:
  std::vector<Eigen::MatrixXd> slices_;
  std::vector<Eigen::VectorXd> means_;
};

inline ScheduleResult pod_tas_schedule(const TaskSet& tasks,
                                       const Floorplan& fp,
                                       const RomModel& model,
                                       const SchedulerConfig& cfg) {
  cfg.validate_thresholds();
  const int n_sub = cfg.substeps();
  const int n_quanta = cfg.quanta();
  model.validate();
  if (model.ops.blocks != fp.block_names())
    throw ConfigError("scheduler: model blocks differ from floorplan");

  ScheduleExecutor ex(tasks, fp, cfg.idle_power_w);
  const int nc = ex.n_cores();
  CoreTempReader reader(model.basis, fp);
  RomStepper stepper(model.ops, cfg.predict_dt_s);
  Eigen::VectorXd a = model.ambient_coeffs();

  ScheduleResult res;
  res.schedule.algorithm = "pod-tas";
  res.schedule.n_cores = nc;
  res.schedule.quantum_s = cfg.quantum_s;
  res.schedule.t_end_s = cfg.t_end_s;
  res.schedule.thresholded = true;
  res.schedule.tc_c = cfg.tc_c;
  res.schedule.th_c = cfg.th_c;

  std::vector<CoreState> state(static_cast<size_t>(nc));
  std::vector<int> assignment(size_t(nc), -1);
  std::vector<double> temps = reader.peaks(a);
  std::vector<double> remaining(size_t(tasks.n_tasks()));
  std::vector<std::string> names;
  for (const auto& t : tasks.tasks) names.push_back(t.name);

  auto log_row = [&](double t) {
    ConstructionLogRow row;
    row.t = t;
    row.temp_c = temps;
    for (int c = 0; c < nc; ++c) {
      row.thermal.push_back(state[size_t(c)].thermal == Thermal::Cool   ? 'C'
                            : state[size_t(c)].thermal == Thermal::Warm ? 'W'
                                                                        : 'H');
      row.exec.push_back(state[size_t(c)].running ? 'R' : 'I');
      row.task.push_back(assignment[size_t(c)] < 0
                             ? std::string()
                             : names[size_t(assignment[size_t(c)])]);
    }
    res.log.push_back(std::move(row));
  };

  auto recompute = [&](double t) {
    ++res.stats.recomputes;
    std::vector<int> eligible;
    for (int c = 0; c < nc; ++c)
      if (state[size_t(c)].thermal != Thermal::Hot) eligible.push_back(c);
    for (int i = 0; i < tasks.n_tasks(); ++i)
      remaining[size_t(i)] = ex.remaining_s(i);
    std::vector<int> picked =
        select_tasks(remaining, names, int(eligible.size()));
    assignment = assign_tasks(picked, eligible, temps, nc);
    std::vector<std::string> row(static_cast<size_t>(nc));
    for (int c = 0; c < nc; ++c)
      row[size_t(c)] =
          assignment[size_t(c)] < 0 ? "" : names[size_t(assignment[size_t(c)])];
    if (res.schedule.t.empty())
      res.schedule.append(t, row);
    else if (res.schedule.assign.back() != row)
      res.schedule.append(t, row);
    for (int c = 0; c < nc; ++c)
      state[size_t(c)].running = assignment[size_t(c)] >= 0;
  };

  ex.process_arrivals(0.0);
  for (int c = 0; c < nc; ++c)
    state[size_t(c)].thermal =
        classify_temperature(temps[size_t(c)], cfg.tc_c, cfg.th_c);
  recompute(0.0);
  log_row(0.0);

  for (int n = 0; n < n_quanta; ++n) {
    const double t0 = n * cfg.quantum_s;
    const double t1 = (n + 1) * cfg.quantum_s;
    bool completed = ex.run_interval(t0, t1, assignment);
    // March the reduced model across the quantum on the accounted power.
    std::vector<double> start = temps;
    for (int s = 0; s < n_sub; ++s) {
      double ts = t0 + s * cfg.predict_dt_s;
      a = stepper.advance(a, ex.timeline().value_at(ts));
      temps = reader.peaks(a);
      for (int c = 0; c < nc; ++c) {
        res.stats.max_quantum_rise_c =
            std::max(res.stats.max_quantum_rise_c,
                     temps[size_t(c)] - start[size_t(c)]);
        res.stats.max_over_th_c =
            std::max(res.stats.max_over_th_c, temps[size_t(c)] - cfg.th_c);
        res.stats.peak_core_c =
            std::max(res.stats.peak_core_c, temps[size_t(c)]);
      }
    }
    if (t1 >= cfg.t_end_s - ScheduleExecutor::kTimeEps) break;

    bool arrived = ex.process_arrivals(t1);
    bool entered_hot = false, left_hot = false;
    for (int c = 0; c < nc; ++c) {
      auto& st = state[size_t(c)];
      double tcur = temps[size_t(c)];
      if (st.thermal == Thermal::Hot) {
        if (tcur < cfg.tc_c) {  // hysteresis: only full cooling releases
          st.thermal = Thermal::Cool;
          left_hot = true;
        }
      } else {
        Thermal now = classify_temperature(tcur, cfg.tc_c, cfg.th_c);
        if (now == Thermal::Hot) entered_hot = true;
        st.thermal = now;
      }
    }
    if (completed || arrived || entered_hot || left_hot) recompute(t1);
    // Even without a recompute, completed jobs leave their cores idle.
    for (int c = 0; c < nc; ++c) {
      int ti = assignment[size_t(c)];
      state[size_t(c)].running = ti >= 0 && ex.ready(ti);
    }
    log_row(t1);
  }
  ex.finalize(cfg.t_end_s);
  res.misses = ex.misses();
  res.feasible = res.misses.empty();
  res.schedule.feasible = res.feasible;
  res.predicted_trace = ex.timeline();
  res.predicted_trace.t_end_s = cfg.t_end_s;
  return res;
}

// Worst-fit-decreasing static packing: heaviest predicted self-heating
// first, each task onto the core whose block would stay coolest after
// taking it, by the calibrated steady model at time-averaged trace power.
inline std::vector<std::vector<int>> rt_tas_pack(const TaskSet& tasks,
                                                 const Floorplan& fp,
                                                 const CouplingMatrix& cm) {
  if (cm.blocks != fp.block_names())
    throw ConfigError("rt-tas: coupling blocks differ from floorplan");
  std::vector<int> cores = fp.core_indices();
  const int nc = static_cast<int>(cores.size());
  std::vector<ResolvedTaskPower> power;
  for (const auto& t : tasks.tasks)
    power.push_back(resolve_task_power(t, fp));

  std::vector<int> order(size_t(tasks.n_tasks()));
  for (int i = 0; i < tasks.n_tasks(); ++i) order[size_t(i)] = i;
  const int ref_block = cores[0];
  auto weight = [&](int i) {
    return cm.theta(ref_block, ref_block) * power[size_t(i)].avg_core_w;
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double wa = weight(a), wb = weight(b);
    if (wa != wb) return wa > wb;
    return tasks.tasks[size_t(a)].name < tasks.tasks[size_t(b)].name;
  });

  std::vector<std::vector<int>> queues(static_cast<size_t>(nc));
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(fp.n_blocks());
  for (int i : order) {
    int best = -1;
    double best_temp = 0;
    for (int c = 0; c < nc; ++c) {
      Eigen::VectorXd cand = acc + power[size_t(i)].avg_shared_w;
      cand[cores[size_t(c)]] += power[size_t(i)].avg_core_w;
      double temp = predict_block_temps(cm, cand)[cores[size_t(c)]];
      if (best < 0 || temp < best_temp - 1e-12) {
        best = c;
        best_temp = temp;
      }
    }
    queues[size_t(best)].push_back(i);
    acc += power[size_t(i)].avg_shared_w;
    acc[cores[size_t(best)]] += power[size_t(i)].avg_core_w;
  }
  return queues;
}

inline ScheduleResult rt_tas_schedule(const TaskSet& tasks,
                                      const Floorplan& fp,
                                      const CouplingMatrix& cm,
                                      const SchedulerConfig& cfg) {
  const int n_quanta = cfg.quanta();
  ScheduleExecutor ex(tasks, fp, cfg.idle_power_w);
  const int nc = ex.n_cores();
  std::vector<std::vector<int>> queues = rt_tas_pack(tasks, fp, cm);

  ScheduleResult res;
  res.schedule.algorithm = "rt-tas";
  res.schedule.n_cores = nc;
  res.schedule.quantum_s = cfg.quantum_s;
  res.schedule.t_end_s = cfg.t_end_s;

  std::vector<std::string> names;
  for (const auto& t : tasks.tasks) names.push_back(t.name);
  std::vector<int> assignment(size_t(nc), -1);

  // Head of each queue: the ready job that arrived first; queue order
  // breaks ties so the dispatch is FIFO and deterministic.
  auto dispatch = [&](double t) {
    for (int c = 0; c < nc; ++c) {
      int pick = -1;
      double pick_arrival = 0;
      for (int i : queues[size_t(c)]) {
        if (!ex.ready(i)) continue;
        double arrival =
            ex.current_job(i) * tasks.tasks[size_t(i)].period_s;
        if (pick < 0 || arrival < pick_arrival - ScheduleExecutor::kTimeEps) {
          pick = i;
          pick_arrival = arrival;
        }
      }
      assignment[size_t(c)] = pick;
    }
    std::vector<std::string> row(static_cast<size_t>(nc));
    for (int c = 0; c < nc; ++c)
      row[size_t(c)] =
          assignment[size_t(c)] < 0 ? "" : names[size_t(assignment[size_t(c)])];
    if (res.schedule.t.empty() || res.schedule.assign.back() != row)
      res.schedule.append(t, row);
  };

  ex.process_arrivals(0.0);
  dispatch(0.0);
  for (int n = 0; n < n_quanta; ++n) {
    const double t0 = n * cfg.quantum_s;
    const double t1 = (n + 1) * cfg.quantum_s;
    bool completed = ex.run_interval(t0, t1, assignment);
    if (t1 >= cfg.t_end_s - ScheduleExecutor::kTimeEps) break;
    bool arrived = ex.process_arrivals(t1);
    if (completed || arrived) dispatch(t1);
  }
  ex.finalize(cfg.t_end_s);
  res.misses = ex.misses();
  res.feasible = res.misses.empty();
  res.schedule.feasible = res.feasible;
  res.predicted_trace = ex.timeline();
  res.predicted_trace.t_end_s = cfg.t_end_s;
  return res;
}

}  // namespace podtas
