// Schedule evaluation: replay the emitted assignment into its power trace,
// march a thermal model over it, and reduce each sampled field to spatial
// statistics. The oracle backend steps the full solver; the reduced backend
// steps coefficients and reconstructs, which is how a scheduler's own
// predictions are audited.
#pragma once

#include <fstream>
#include <sstream>

#include "podtas/dns.hpp"
#include "podtas/executor.hpp"
#include "podtas/rom_model.hpp"
#include "podtas/schedule.hpp"
#include "podtas/scheduler.hpp"

namespace podtas {

struct TimelineRow {
  double t_s = 0, min_c = 0, mean_c = 0, max_c = 0, variance = 0;
};

struct Timeline {
  double dt_s = 0;
  std::vector<TimelineRow> rows;
};

inline TimelineRow stats_row(double t, const ThermalField& f) {
  SpatialStats s = spatial_stats(f);
  return {t, s.min_c, s.mean_c, s.max_c, s.variance};
}

inline Timeline evaluate_schedule_oracle(const Schedule& sched,
                                         const TaskSet& tasks,
                                         const Floorplan& fp, const Grid& grid,
                                         const Material& mat,
                                         const BoundaryConfig& bc,
                                         double dt, double idle_w) {
  ReplayResult replay = build_power_trace(sched, tasks, fp, idle_w);
  FloorplanGrid map(fp, grid);
  DnsSolver solver(grid, mat, bc);
  TimelinePowerProvider power(replay.timeline, map);
  const int steps = int(std::llround(sched.t_end_s / dt));
  Timeline tl;
  tl.dt_s = dt;
  tl.rows.reserve(size_t(steps) + 1);
  tl.rows.push_back(stats_row(0, solver.field()));
  for (int n = 0; n < steps; ++n) {
    solver.step(power.at(n * dt), dt);
    tl.rows.push_back(stats_row((n + 1) * dt, solver.field()));
  }
  return tl;
}

// Reduced-model evaluation over the identical replayed trace. Optionally
// reports the per-core peak temperatures alongside, for auditing a
// construction's own predictions.
inline Timeline evaluate_schedule_rom(
    const Schedule& sched, const TaskSet& tasks, const Floorplan& fp,
    const RomModel& model, double dt, double idle_w,
    std::vector<std::vector<double>>* core_peaks = nullptr) {
  ReplayResult replay = build_power_trace(sched, tasks, fp, idle_w);
  model.validate();
  if (model.ops.blocks != fp.block_names())
    throw ConfigError("evaluate: model blocks differ from floorplan");
  RomStepper stepper(model.ops, dt);
  CoreTempReader reader(model.basis, fp);
  Eigen::VectorXd a = model.ambient_coeffs();
  const int steps = int(std::llround(sched.t_end_s / dt));
  Timeline tl;
  tl.dt_s = dt;
  tl.rows.reserve(size_t(steps) + 1);
  tl.rows.push_back(stats_row(0, reconstruct(model.basis, a)));
  if (core_peaks) core_peaks->push_back(reader.peaks(a));
  for (int n = 0; n < steps; ++n) {
    a = stepper.advance(a, replay.timeline.value_at(n * dt));
    tl.rows.push_back(stats_row((n + 1) * dt, reconstruct(model.basis, a)));
    if (core_peaks) core_peaks->push_back(reader.peaks(a));
  }
  return tl;
}

struct MetricsReport {
  double peak_temp_c = 0;  // max over time of the spatial max
  double peak_var = 0;     // max over time of the spatial variance
  double var_mean = 0;     // temporal variance of the spatial mean
  double var_max = 0;      // temporal variance of the spatial max
  double var_var = 0;      // temporal variance of the spatial variance
};

inline double series_variance(const std::vector<double>& v) {
  if (v.empty()) throw NumericError("metrics: empty series");
  double mean = 0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double acc = 0;
  for (double x : v) acc += (x - mean) * (x - mean);
  return acc / double(v.size());  // population variance
}

inline MetricsReport compute_metrics(const Timeline& tl,
                                     double warmup_exclude_s = 0) {
  std::vector<double> means, maxes, vars;
  MetricsReport r;
  r.peak_temp_c = -std::numeric_limits<double>::infinity();
  r.peak_var = -std::numeric_limits<double>::infinity();
  for (const auto& row : tl.rows) {
    if (row.t_s < warmup_exclude_s) continue;
    means.push_back(row.mean_c);
    maxes.push_back(row.max_c);
    vars.push_back(row.variance);
    r.peak_temp_c = std::max(r.peak_temp_c, row.max_c);
    r.peak_var = std::max(r.peak_var, row.variance);
  }
  if (means.empty())
    throw ConfigError("metrics: warm-up exclusion swallowed the timeline");
  r.var_mean = series_variance(means);
  r.var_max = series_variance(maxes);
  r.var_var = series_variance(vars);
  return r;
}

inline double percent_difference(double a, double b) {
  if (b == 0) throw NumericError("percent difference against zero baseline");
  return 100.0 * (a - b) / b;
}

struct ComparisonRow {
  std::string metric;
  double baseline = 0, candidate = 0, percent = 0;
};

// Row order follows the reporting convention: peaks first, then the
// temporal variances of mean, max, and variance.
inline std::vector<ComparisonRow> compare_reports(const MetricsReport& base,
                                                  const MetricsReport& cand) {
  return {
      {"peak_temp_c", base.peak_temp_c, cand.peak_temp_c,
       percent_difference(cand.peak_temp_c, base.peak_temp_c)},
      {"peak_var", base.peak_var, cand.peak_var,
       percent_difference(cand.peak_var, base.peak_var)},
      {"var_mean", base.var_mean, cand.var_mean,
       percent_difference(cand.var_mean, base.var_mean)},
      {"var_max", base.var_max, cand.var_max,
       percent_difference(cand.var_max, base.var_max)},
      {"var_var", base.var_var, cand.var_var,
       percent_difference(cand.var_var, base.var_var)},
  };
}

inline void save_timeline(const Timeline& tl, std::ostream& out) {
  out << "time_s,min_C,mean_C,max_C,var\n";
  char buf[192];
  for (const auto& r : tl.rows) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g\n", r.t_s,
                  r.min_c, r.mean_c, r.max_c, r.variance);
    out << buf;
  }
}

inline Timeline parse_timeline(std::istream& in, const std::string& origin) {
  Timeline tl;
  std::string line;
  if (!std::getline(in, line) || line != "time_s,min_C,mean_C,max_C,var")
    throw ConfigError(origin + ": not a timeline csv");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    TimelineRow r;
    if (std::sscanf(line.c_str(), "%lg,%lg,%lg,%lg,%lg", &r.t_s, &r.min_c,
                    &r.mean_c, &r.max_c, &r.variance) != 5)
      throw ConfigError(origin + ": malformed timeline row");
    tl.rows.push_back(r);
  }
  if (tl.rows.size() > 1) tl.dt_s = tl.rows[1].t_s - tl.rows[0].t_s;
  return tl;
}

inline void save_metrics(const MetricsReport& r, std::ostream& out,
                         const std::string& algorithm, double horizon_s,
                         double eval_dt_s, double warmup_s) {
  char buf[96];
  out << "podtas-metrics 1\n";
  out << "algorithm = " << algorithm << "\n";
  auto kv = [&](const char* k, double v) {
    std::snprintf(buf, sizeof buf, "%s = %.17g\n", k, v);
    out << buf;
  };
  kv("horizon_s", horizon_s);
  kv("eval_dt_s", eval_dt_s);
  kv("warmup_exclude_s", warmup_s);
  kv("peak_temp_c", r.peak_temp_c);
  kv("peak_var", r.peak_var);
  kv("var_mean", r.var_mean);
  kv("var_max", r.var_max);
  kv("var_var", r.var_var);
}

inline MetricsReport parse_metrics(std::istream& in,
                                   const std::string& origin) {
  std::string line;
  if (!std::getline(in, line) || line != "podtas-metrics 1")
    throw ConfigError(origin + ": not a metrics file");
  MetricsReport r;
  bool seen[5] = {};
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string key, eq;
    if (!(ls >> key >> eq) || eq != "=") continue;
    double v;
    if (key == "algorithm") continue;
    if (!(ls >> v)) throw ConfigError(origin + ": malformed value for " + key);
    if (key == "peak_temp_c") r.peak_temp_c = v, seen[0] = true;
    if (key == "peak_var") r.peak_var = v, seen[1] = true;
    if (key == "var_mean") r.var_mean = v, seen[2] = true;
    if (key == "var_max") r.var_max = v, seen[3] = true;
    if (key == "var_var") r.var_var = v, seen[4] = true;
  }
  for (bool s : seen)
    if (!s) throw ConfigError(origin + ": metrics file is missing keys");
  return r;
}

}  // namespace podtas
