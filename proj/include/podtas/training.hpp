// Excitation design for POD training: one concatenated transient of
// randomized per-block square waves, followed by each task's own trace laid
// over the cores round-robin, then a cooldown. One continuous run keeps the
// snapshot time axis strictly increasing and exercises cross-block coupling.
#pragma once

#include <Eigen/Dense>

#include "podtas/floorplan.hpp"
#include "podtas/power_timeline.hpp"
#include "podtas/rng.hpp"
#include "podtas/tasks.hpp"

namespace podtas {

struct TrainingConfig {
  int segments = 16;
  double seg_min_s = 0.02, seg_max_s = 0.06;  // square-wave dwell range
  double core_max_w = 30.0;                   // per core block
  double shared_max_w = 3.0;                  // per non-core block
  bool include_task_traces = true;
  double cooldown_s = 0.1;

  void validate() const {
    if (segments < 1) throw ConfigError("training: need at least 1 segment");
    if (!(seg_min_s > 0) || seg_max_s < seg_min_s)
      throw ConfigError("training: bad segment dwell range");
    if (core_max_w < 0 || shared_max_w < 0)
      throw ConfigError("training: negative power bound");
  }
};

inline PowerTimeline make_training_trace(const Floorplan& fp,
                                         const TaskSet* tasks,
                                         const TrainingConfig& cfg,
                                         uint64_t seed) {
  cfg.validate();
  Rng rng(seed);
  PowerTimeline tl;
  tl.blocks = fp.block_names();
  const int nb = fp.n_blocks();
  std::vector<int> cores = fp.core_indices();
  double t = 0;
  for (int s = 0; s < cfg.segments; ++s) {
    // Dwells snap to 1 ms so breakpoints align with typical training steps.
    double dwell =
        std::max(1, int(std::llround(
                       rng.uniform(cfg.seg_min_s, cfg.seg_max_s) * 1e3))) *
        1e-3;
    Eigen::VectorXd w(nb);
    for (int b = 0; b < nb; ++b)
      w[b] = rng.uniform(
          0, fp.blocks[size_t(b)].is_core ? cfg.core_max_w : cfg.shared_max_w);
    tl.append(t, w);
    t += dwell;
  }
  if (tasks && cfg.include_task_traces) {
    for (int i = 0; i < tasks->n_tasks(); ++i) {
      ResolvedTaskPower rp = resolve_task_power(tasks->tasks[size_t(i)], fp);
      int core = cores[size_t(i) % cores.size()];
      for (size_t s = 0; s < rp.t.size(); ++s) {
        Eigen::VectorXd w = rp.shared_w.row(Eigen::Index(s)).transpose();
        w[core] += rp.core_w[s];
        tl.append(t + rp.t[s], w);
      }
      t += tasks->tasks[size_t(i)].wcet_s;
    }
  }
  tl.append(t, Eigen::VectorXd::Zero(nb));
  t += cfg.cooldown_s;
  tl.t_end_s = t;
  tl.validate();
  return tl;
}

}  // namespace podtas
