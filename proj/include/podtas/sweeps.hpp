// Parameter sweeps: reduced-order fidelity against the oracle over a mode
// count ladder, and scheduler behavior over a threshold grid.
#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "podtas/dns.hpp"
#include "podtas/galerkin.hpp"
#include "podtas/pod.hpp"
#include "podtas/scheduler.hpp"

namespace podtas {

namespace detail {

// Runs fn(i) for i in [0, n) with at most `jobs` worker threads. Results must
// land in preallocated slots so the output never depends on thread timing.
template <class Fn>
void bounded_for(int n, int jobs, Fn fn) {
  if (jobs < 1) throw ConfigError("sweep: jobs must be at least 1");
  if (jobs == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < std::min(jobs, n); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace detail

struct ModeSweepRow {
  int m = 0;
  double avg_lse_pct = 0;       // mean whole-field error across steps
  double max_temp_lse_pct = 0;  // error norm of the hottest-cell series
};

// Truncation fidelity on a test drive: the oracle marches the drive once,
// then each requested mode count reruns the reduced model on it. POD bases
// nest, so one training at the largest count serves every row.
inline std::vector<ModeSweepRow> mode_sweep(const SnapshotSet& training,
                                            const PowerTimeline& test_trace,
                                            const Floorplan& fp,
                                            std::vector<int> modes, double dt,
                                            double t_end, int jobs = 1) {
  if (modes.empty()) throw ConfigError("mode sweep: no mode counts");
  for (int m : modes)
    if (m < 1) throw ConfigError("mode sweep: mode counts must be positive");
  int m_max = *std::max_element(modes.begin(), modes.end());
  PodBasis full = train_pod(training, m_max);

  FloorplanGrid map(fp, training.grid);
  DnsSolver solver(training.grid, training.material, training.bc);
  TimelinePowerProvider power(test_trace, map);
  const int steps = int(std::llround(t_end / dt));
  std::vector<Eigen::VectorXd> truth;
  std::vector<double> truth_max;
  truth.reserve(size_t(steps) + 1);
  truth.push_back(solver.field().t_c);
  truth_max.push_back(solver.field().t_c.maxCoeff());
  for (int n = 0; n < steps; ++n) {
    solver.step(power.at(n * dt), dt);
    truth.push_back(solver.field().t_c);
    truth_max.push_back(solver.field().t_c.maxCoeff());
  }

  std::vector<ModeSweepRow> out(modes.size());
  detail::bounded_for(int(modes.size()), jobs, [&](int idx) {
    int m = modes[size_t(idx)];
    PodBasis basis = full;
    if (m > full.m()) m = full.m();  // rank floor already clamped it
    basis.modes = full.modes.leftCols(m);
    RomOperators ops =
        assemble_galerkin(basis, training.material, training.bc, fp);
    Eigen::VectorXd a = project(
        basis,
        Eigen::VectorXd::Constant(training.grid.n_cells(), training.bc.ambient_c));
    RomStepper stepper(ops, dt);
    double lse_sum = lse_percent(reconstruct(basis, a).t_c, truth[0]);
    std::vector<double> pred_max;
    pred_max.push_back(reconstruct(basis, a).t_c.maxCoeff());
    for (int n = 0; n < steps; ++n) {
      a = stepper.advance(a, test_trace.value_at(n * dt));
      Eigen::VectorXd rec = reconstruct(basis, a).t_c;
      lse_sum += lse_percent(rec, truth[size_t(n) + 1]);
      pred_max.push_back(rec.maxCoeff());
    }
    ModeSweepRow row;
    row.m = m;
    row.avg_lse_pct = lse_sum / double(steps + 1);
    double num = 0, den = 0;
    for (size_t i = 0; i < truth_max.size(); ++i) {
      num += (truth_max[i] - pred_max[i]) * (truth_max[i] - pred_max[i]);
      den += truth_max[i] * truth_max[i];
    }
    row.max_temp_lse_pct = 100.0 * std::sqrt(num / den);
    out[size_t(idx)] = row;
  });
  return out;
}

struct ThresholdSweepRow {
  double tc_c = 0, th_c = 0;
  bool valid = false;     // T_H > T_C
  bool feasible = false;
  int misses = 0;
  int entries = 0;
  double assignment_freq_hz = 0;
  double max_quantum_rise_c = 0;
  double max_over_th_c = 0;
  double peak_core_c = 0;
};

// Runs the threshold scheduler across the (T_C, T_H) grid. Invalid pairs
// (band empty or inverted) are reported as rows but never scheduled.
inline std::vector<ThresholdSweepRow> threshold_sweep(
    const TaskSet& tasks, const Floorplan& fp, const RomModel& model,
    const SchedulerConfig& base, const std::vector<double>& tc_grid,
    const std::vector<double>& th_grid, int jobs = 1) {
  std::vector<ThresholdSweepRow> out(tc_grid.size() * th_grid.size());
  detail::bounded_for(int(out.size()), jobs, [&](int idx) {
    // th-major order: all tc values for the first th, then the next th.
    double th = th_grid[size_t(idx) / tc_grid.size()];
    double tc = tc_grid[size_t(idx) % tc_grid.size()];
    ThresholdSweepRow row;
    row.tc_c = tc;
    row.th_c = th;
    row.valid = th > tc;
    if (row.valid) {
      SchedulerConfig cfg = base;
      cfg.tc_c = tc;
      cfg.th_c = th;
      ScheduleResult res = pod_tas_schedule(tasks, fp, model, cfg);
      row.feasible = res.feasible;
      row.misses = static_cast<int>(res.misses.size());
      row.entries = res.schedule.n_entries();
      row.assignment_freq_hz = res.schedule.assignment_frequency_hz();
      row.max_quantum_rise_c = res.stats.max_quantum_rise_c;
      row.max_over_th_c = res.stats.max_over_th_c;
      row.peak_core_c = res.stats.peak_core_c;
    }
    out[size_t(idx)] = row;
  });
  return out;
}

}  // namespace podtas
