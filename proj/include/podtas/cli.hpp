// Command-line front end. Six commands share one config surface; every run
// writes into a fresh directory under out_dir named by the canonical config
// hash plus a timestamp, holding the resolved config, verbatim input copies,
// and the command's artifacts. Exit codes: 0 ok, 2 bad config or usage,
// 3 infeasible task set, 4 numerical failure.
#pragma once

#include <CLI11.hpp>
#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "podtas/config.hpp"
#include "podtas/dns.hpp"
#include "podtas/evaluate.hpp"
#include "podtas/rom_model.hpp"
#include "podtas/scheduler.hpp"
#include "podtas/steady_model.hpp"
#include "podtas/sweeps.hpp"
#include "podtas/training.hpp"

namespace podtas {
namespace cli {

namespace fs = std::filesystem;

// Everything a command needs before real work starts. Constructing it runs
// the full config validation, so failures happen before any expensive step.
struct Workbench {
  ExperimentConfig cfg;
  ResolvedInputs in;
  Grid grid;
};

inline Workbench open_bench(const ExperimentConfig& cfg) {
  cfg.validate();
  Workbench wb{cfg, resolve_inputs(cfg), Grid{}};
  wb.grid = make_grid(cfg, wb.in.floorplan);
  return wb;
}

inline std::string utc_stamp() {
  std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[24];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

inline void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

// Creates <out_dir>/<command>-<hash8>-<stamp>[-n] and drops the resolved
// config and verbatim input copies inside, so the run is self-describing.
inline fs::path make_run_dir(const Workbench& wb, const std::string& command) {
  fs::path root = wb.cfg.out_dir;
  std::string base =
      command + "-" + config_hash_hex(wb.cfg) + "-" + utc_stamp();
  fs::path dir = root / base;
  for (int n = 2; fs::exists(dir); ++n)
    dir = root / (base + "-" + std::to_string(n));
  fs::create_directories(dir);
  write_text(dir / "config.resolved", serialize_config(wb.cfg));
  write_text(dir / "floorplan.txt", wb.in.floorplan_text);
  write_text(dir / "tasks.txt", wb.in.task_text);
  std::cout << "run_dir: " << dir.string() << "\n";
  return dir;
}

inline double seconds_since(
    const std::chrono::steady_clock::time_point& start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

// The random drive the reduced model trains on. The held-out drive used by
// sweeps draws from the next seed so it never repeats the training power.
inline PowerTimeline training_drive(const Workbench& wb,
                                    std::uint64_t seed_offset = 0) {
  return make_training_trace(wb.in.floorplan,
                             wb.cfg.train_with_tasks ? &wb.in.tasks : nullptr,
                             wb.cfg.training(), wb.cfg.seed + seed_offset);
}

inline SnapshotSet march_training(const Workbench& wb,
                                  const PowerTimeline& drive) {
  FloorplanGrid map(wb.in.floorplan, wb.grid);
  DnsSolver solver(wb.grid, wb.cfg.material(), wb.cfg.boundary());
  return run_transient(solver, drive, map, drive.t_end_s, wb.cfg.train_dt_s(),
                       wb.cfg.snapshot_stride);
}

inline RomModel build_rom(const Workbench& wb, const SnapshotSet& ss) {
  RomModel model;
  model.grid = wb.grid;
  model.material = wb.cfg.material();
  model.bc = wb.cfg.boundary();
  model.basis = train_pod(ss, wb.cfg.modes, wb.cfg.centered);
  model.ops = assemble_galerkin(model.basis, model.material, model.bc,
                                wb.in.floorplan);
  return model;
}

inline void check_rom_matches(const Workbench& wb, const RomModel& model) {
  if (!model.grid.same_as(wb.grid))
    throw ConfigError("rom: grid differs from the configured grid");
  if (model.ops.blocks != wb.in.floorplan.block_names())
    throw ConfigError("rom: blocks differ from the configured floorplan");
}

inline RomModel ensure_rom(const Workbench& wb, const std::string& rom_path) {
  if (!rom_path.empty()) {
    RomModel model = load_rom(rom_path);
    check_rom_matches(wb, model);
    std::cout << "rom: loaded " << rom_path << " ("
              << model.basis.m() << " modes)\n";
    return model;
  }
  auto t0 = std::chrono::steady_clock::now();
  PowerTimeline drive = training_drive(wb);
  SnapshotSet ss = march_training(wb, drive);
  RomModel model = build_rom(wb, ss);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "rom: trained in place, %d snapshots -> %d modes (%.1f s)\n",
                ss.count(), model.basis.m(), seconds_since(t0));
  std::cout << buf;
  return model;
}

inline CouplingMatrix ensure_coupling(const Workbench& wb,
                                      const std::string& coupling_path) {
  if (!coupling_path.empty()) {
    std::ifstream in(coupling_path);
    if (!in)
      throw ConfigError("coupling: cannot open '" + coupling_path + "'");
    CouplingMatrix cm = parse_coupling(in, coupling_path);
    if (cm.blocks != wb.in.floorplan.block_names())
      throw ConfigError("coupling: blocks differ from the floorplan");
    std::cout << "coupling: loaded " << coupling_path << "\n";
    return cm;
  }
  auto t0 = std::chrono::steady_clock::now();
  CouplingMatrix cm = calibrate_coupling(wb.grid, wb.cfg.material(),
                                         wb.cfg.boundary(), wb.in.floorplan);
  char buf[96];
  std::snprintf(buf, sizeof buf, "coupling: calibrated in place (%.1f s)\n",
                seconds_since(t0));
  std::cout << buf;
  return cm;
}

inline void save_construction_log(const ScheduleResult& res,
                                  const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  size_t nc = res.log.empty() ? 0 : res.log.front().temp_c.size();
  out << "time_s";
  for (size_t c = 0; c < nc; ++c)
    out << ",temp_c" << c << ",band_c" << c << ",exec_c" << c << ",task_c"
        << c;
  out << "\n";
  char buf[64];
  for (const auto& row : res.log) {
    std::snprintf(buf, sizeof buf, "%.17g", row.t);
    out << buf;
    for (size_t c = 0; c < nc; ++c) {
      std::snprintf(buf, sizeof buf, ",%.17g,%c,%c,", row.temp_c[c],
                    row.thermal[c], row.exec[c]);
      out << buf << row.task[c];
    }
    out << "\n";
  }
}

inline const DeadlineMiss* earliest_miss(const std::vector<DeadlineMiss>& m) {
  const DeadlineMiss* best = nullptr;
  for (const auto& miss : m)
    if (!best || miss.deadline_s < best->deadline_s ||
        (miss.deadline_s == best->deadline_s && miss.task < best->task))
      best = &miss;
  return best;
}

inline void report_feasibility(const ScheduleResult& res) {
  if (res.feasible) {
    std::cout << "feasible: yes\n";
    return;
  }
  const DeadlineMiss* first = earliest_miss(res.misses);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "feasible: no (%zu deadline misses, first: task %s job %d "
                "due %.17g s)\n",
                res.misses.size(), first->task.c_str(), first->job,
                first->deadline_s);
  std::cout << buf;
}

// Builds the configured algorithm's schedule, saving every construction
// artifact into `dir`. Does not decide the exit code; callers differ.
inline ScheduleResult construct_schedule(const Workbench& wb,
                                         const std::string& algorithm,
                                         const RomModel* rom,
                                         const CouplingMatrix* cm,
                                         const fs::path& dir) {
  auto t0 = std::chrono::steady_clock::now();
  ScheduleResult res;
  if (algorithm == "pod-tas")
    res = pod_tas_schedule(wb.in.tasks, wb.in.floorplan, *rom,
                           wb.cfg.scheduler());
  else
    res = rt_tas_schedule(wb.in.tasks, wb.in.floorplan, *cm,
                          wb.cfg.scheduler());
  char buf[200];
  if (algorithm == "pod-tas")
    std::snprintf(buf, sizeof buf,
                  "schedule: %s, %d entries (%.2f Hz), peak %.2f C, "
                  "worst quantum rise %.3f C, overshoot %.3f C (%.1f s)\n",
                  algorithm.c_str(), res.schedule.n_entries(),
                  res.schedule.assignment_frequency_hz(),
                  res.stats.peak_core_c, res.stats.max_quantum_rise_c,
                  res.stats.max_over_th_c, seconds_since(t0));
  else  // dispatch is thermally blind, so there are no prediction stats
    std::snprintf(buf, sizeof buf, "schedule: %s, %d entries (%.2f Hz) (%.1f s)\n",
                  algorithm.c_str(), res.schedule.n_entries(),
                  res.schedule.assignment_frequency_hz(), seconds_since(t0));
  std::cout << buf;
  report_feasibility(res);
  std::string suffix = "_" + algorithm;
  save_schedule(res.schedule, (dir / ("schedule" + suffix + ".txt")).string());
  save_construction_log(res, dir / ("construction_log" + suffix + ".csv"));
  {
    std::ofstream out(dir / ("predicted_power" + suffix + ".txt"),
                      std::ios::binary);
    save_power_timeline(res.predicted_trace, out);
  }
  return res;
}

inline Timeline oracle_timeline(const Workbench& wb, const Schedule& sched) {
  auto t0 = std::chrono::steady_clock::now();
  Timeline tl = evaluate_schedule_oracle(
      sched, wb.in.tasks, wb.in.floorplan, wb.grid, wb.cfg.material(),
      wb.cfg.boundary(), wb.cfg.eval_dt_us * 1e-6, wb.cfg.idle_power_w);
  char buf[96];
  std::snprintf(buf, sizeof buf, "oracle: %zu rows at %g us (%.1f s)\n",
                tl.rows.size(), wb.cfg.eval_dt_us, seconds_since(t0));
  std::cout << buf;
  return tl;
}

inline void print_metrics(const MetricsReport& m) {
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "metrics: peak %.4f C, peak var %.4f, var(mean) %.6g, "
                "var(max) %.6g, var(var) %.6g\n",
                m.peak_temp_c, m.peak_var, m.var_mean, m.var_max, m.var_var);
  std::cout << buf;
}

inline int cmd_train_pod(const ExperimentConfig& cfg) {
  Workbench wb = open_bench(cfg);
  fs::path dir = make_run_dir(wb, "train-pod");
  auto t0 = std::chrono::steady_clock::now();
  PowerTimeline drive = training_drive(wb);
  SnapshotSet ss = march_training(wb, drive);
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "snapshots: %d over %.17g s at %g ms stride %d (%.1f s)\n",
                ss.count(), drive.t_end_s, wb.cfg.train_dt_ms,
                wb.cfg.snapshot_stride, seconds_since(t0));
  std::cout << buf;
  RomModel model = build_rom(wb, ss);
  const auto& spec = model.basis.spectrum;
  double total = spec.sum();
  double kept = spec.head(model.basis.m()).sum();
  std::snprintf(buf, sizeof buf,
                "spectrum: %d modes capture %.6f%% of snapshot energy\n",
                model.basis.m(), 100.0 * kept / total);
  std::cout << buf;
  std::cout << "leading eigenvalues:";
  for (int i = 0; i < std::min<int>(8, int(spec.size())); ++i) {
    std::snprintf(buf, sizeof buf, " %.4g", spec[i]);
    std::cout << buf;
  }
  std::cout << "\n";
  {
    std::ofstream out(dir / "spectrum.csv", std::ios::binary);
    out << "k,eigenvalue\n";
    for (int i = 0; i < int(spec.size()); ++i) {
      std::snprintf(buf, sizeof buf, "%d,%.17g\n", i, spec[i]);
      out << buf;
    }
  }
  {
    std::ofstream out(dir / "training_power.txt", std::ios::binary);
    save_power_timeline(drive, out);
  }
  save_rom(model, (dir / "rom.bin").string());
  std::cout << "rom: " << (dir / "rom.bin").string() << "\n";
  return 0;
}

inline int cmd_train_ss(const ExperimentConfig& cfg) {
  Workbench wb = open_bench(cfg);
  fs::path dir = make_run_dir(wb, "train-ss");
  CouplingMatrix cm = ensure_coupling(wb, "");
  std::cout << "self coupling (C/W):";
  char buf[48];
  for (int c : wb.in.floorplan.core_indices()) {
    std::snprintf(buf, sizeof buf, " %s=%.3f",
                  wb.in.floorplan.blocks[size_t(c)].name.c_str(),
                  cm.theta(c, c));
    std::cout << buf;
  }
  std::cout << "\n";
  save_coupling(cm, (dir / "coupling.txt").string());
  std::cout << "coupling: " << (dir / "coupling.txt").string() << "\n";
  return 0;
}

inline int cmd_schedule(const ExperimentConfig& cfg,
                        const std::string& rom_path,
                        const std::string& coupling_path) {
  Workbench wb = open_bench(cfg);
  fs::path dir = make_run_dir(wb, "schedule");
  RomModel rom;
  CouplingMatrix cm;
  if (cfg.algorithm == "pod-tas")
    rom = ensure_rom(wb, rom_path);
  else
    cm = ensure_coupling(wb, coupling_path);
  ScheduleResult res =
      construct_schedule(wb, cfg.algorithm, &rom, &cm, dir);
  return res.feasible ? 0 : 3;
}

inline int cmd_evaluate(const ExperimentConfig& cfg,
                        const std::string& schedule_path,
                        const std::string& rom_path,
                        const std::string& coupling_path) {
  Workbench wb = open_bench(cfg);
  fs::path dir = make_run_dir(wb, "evaluate");
  Schedule sched;
  bool constructed_infeasible = false;
  if (!schedule_path.empty()) {
    std::ifstream in(schedule_path);
    if (!in)
      throw ConfigError("schedule: cannot open '" + schedule_path + "'");
    sched = parse_schedule(in, schedule_path);
    if (int(wb.in.floorplan.core_indices().size()) != sched.n_cores)
      throw ConfigError("schedule: core count differs from the floorplan");
    if (!sched.feasible)
      std::cout << "note: evaluating a schedule flagged infeasible\n";
  } else {
    RomModel rom;
    CouplingMatrix cm;
    if (cfg.algorithm == "pod-tas")
      rom = ensure_rom(wb, rom_path);
    else
      cm = ensure_coupling(wb, coupling_path);
    ScheduleResult res =
        construct_schedule(wb, cfg.algorithm, &rom, &cm, dir);
    constructed_infeasible = !res.feasible;
    sched = res.schedule;
  }
  if (constructed_infeasible) return 3;
  Timeline tl = oracle_timeline(wb, sched);
  MetricsReport m = compute_metrics(tl, wb.cfg.warmup_s);
  print_metrics(m);
  {
    std::ofstream out(dir / "timeline.csv", std::ios::binary);
    save_timeline(tl, out);
  }
  {
    std::ofstream out(dir / "metrics.txt", std::ios::binary);
    save_metrics(m, out, sched.algorithm, sched.t_end_s,
                 wb.cfg.eval_dt_us * 1e-6, wb.cfg.warmup_s);
  }
  std::cout << "metrics: " << (dir / "metrics.txt").string() << "\n";
  return 0;
}

inline int cmd_compare(const ExperimentConfig& cfg,
                       const std::string& rom_path,
                       const std::string& coupling_path) {
  Workbench wb = open_bench(cfg);
  fs::path dir = make_run_dir(wb, "compare");
  RomModel rom = ensure_rom(wb, rom_path);
  CouplingMatrix cm = ensure_coupling(wb, coupling_path);
  ScheduleResult rt = construct_schedule(wb, "rt-tas", nullptr, &cm, dir);
  ScheduleResult pod = construct_schedule(wb, "pod-tas", &rom, nullptr, dir);
  if (!rt.feasible || !pod.feasible) {
    std::cout << "comparison skipped: "
              << (!rt.feasible ? "rt-tas" : "pod-tas")
              << " schedule is infeasible\n";
    return 3;
  }
  Timeline tl_rt = oracle_timeline(wb, rt.schedule);
  Timeline tl_pod = oracle_timeline(wb, pod.schedule);
  MetricsReport m_rt = compute_metrics(tl_rt, wb.cfg.warmup_s);
  MetricsReport m_pod = compute_metrics(tl_pod, wb.cfg.warmup_s);
  auto dump = [&](const char* name, const Timeline& tl,
                  const MetricsReport& m, const std::string& algo) {
    std::ofstream t(dir / ("timeline_" + std::string(name) + ".csv"),
                    std::ios::binary);
    save_timeline(tl, t);
    std::ofstream f(dir / ("metrics_" + std::string(name) + ".txt"),
                    std::ios::binary);
    save_metrics(m, f, algo, wb.cfg.horizon_s, wb.cfg.eval_dt_us * 1e-6,
                 wb.cfg.warmup_s);
  };
  dump("rt-tas", tl_rt, m_rt, "rt-tas");
  dump("pod-tas", tl_pod, m_pod, "pod-tas");
  std::vector<ComparisonRow> rows = compare_reports(m_rt, m_pod);
  {
    std::ofstream out(dir / "comparison.csv", std::ios::binary);
    out << "metric,rt_tas,pod_tas,percent\n";
    char buf[160];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g\n",
                    r.metric.c_str(), r.baseline, r.candidate, r.percent);
      out << buf;
    }
  }
  std::cout << "comparison (pod-tas vs rt-tas):\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "  %-12s %12.4f -> %12.4f  %+8.2f%%\n",
                  r.metric.c_str(), r.baseline, r.candidate, r.percent);
    std::cout << buf;
  }
  return 0;
}

inline int cmd_sweep(const ExperimentConfig& cfg, const std::string& axis,
                     int jobs, const std::string& rom_path) {
  Workbench wb = open_bench(cfg);
  if (axis == "thresholds") {
    fs::path dir = make_run_dir(wb, "sweep-thresholds");
    RomModel rom = ensure_rom(wb, rom_path);
    auto t0 = std::chrono::steady_clock::now();
    std::vector<ThresholdSweepRow> rows =
        threshold_sweep(wb.in.tasks, wb.in.floorplan, rom,
                        wb.cfg.scheduler(), wb.cfg.sweep_tc_c,
                        wb.cfg.sweep_th_c, jobs);
    int valid = 0, feasible = 0;
    {
      std::ofstream out(dir / "threshold_sweep.csv", std::ios::binary);
      out << "tc_c,th_c,valid,feasible,misses,entries,assignment_freq_hz,"
             "max_quantum_rise_c,max_over_th_c,peak_core_c\n";
      char buf[240];
      for (const auto& r : rows) {
        valid += r.valid;
        feasible += r.valid && r.feasible;
        std::snprintf(buf, sizeof buf,
                      "%.17g,%.17g,%d,%d,%d,%d,%.17g,%.17g,%.17g,%.17g\n",
                      r.tc_c, r.th_c, int(r.valid), int(r.feasible), r.misses,
                      r.entries, r.assignment_freq_hz, r.max_quantum_rise_c,
                      r.max_over_th_c, r.peak_core_c);
        out << buf;
      }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "threshold sweep: %zu pairs, %d valid, %d feasible, "
                  "jobs %d (%.1f s)\n",
                  rows.size(), valid, feasible, jobs, seconds_since(t0));
    std::cout << buf;
    std::cout << "table: " << (dir / "threshold_sweep.csv").string() << "\n";
    return 0;
  }
  if (axis == "modes") {
    fs::path dir = make_run_dir(wb, "sweep-modes");
    auto t0 = std::chrono::steady_clock::now();
    PowerTimeline drive = training_drive(wb);
    SnapshotSet ss = march_training(wb, drive);
    PowerTimeline held_out = training_drive(wb, 1);
    std::vector<ModeSweepRow> rows =
        mode_sweep(ss, held_out, wb.in.floorplan, wb.cfg.sweep_modes,
                   wb.cfg.train_dt_s(), held_out.t_end_s, jobs);
    {
      std::ofstream out(dir / "mode_sweep.csv", std::ios::binary);
      out << "modes,avg_lse_pct,max_temp_lse_pct\n";
      char buf[120];
      for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", r.m,
                      r.avg_lse_pct, r.max_temp_lse_pct);
        out << buf;
      }
    }
    char buf[120];
    std::snprintf(buf, sizeof buf, "mode sweep: %zu counts, jobs %d (%.1f s)\n",
                  rows.size(), jobs, seconds_since(t0));
    std::cout << buf;
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "  m=%-3d avg LSE %.6f%%  peak LSE %.6f%%\n",
                    r.m, r.avg_lse_pct, r.max_temp_lse_pct);
      std::cout << buf;
    }
    std::cout << "table: " << (dir / "mode_sweep.csv").string() << "\n";
    return 0;
  }
  throw ConfigError("sweep: axis must be thresholds or modes");
}

// Argument surface shared by each subcommand; flags override config fields.
struct CommonArgs {
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
};

inline void add_common(CLI::App* sub, CommonArgs& a) {
  sub->add_option("--config", a.config_path, "experiment config file");
  sub->add_option("--out", a.out, "output root for run directories");
  sub->add_option("--seed", a.seed, "override the config seed");
}

inline ExperimentConfig resolve_cfg(const CommonArgs& a) {
  ExperimentConfig cfg = load_config(a.config_path);
  if (!a.out.empty()) cfg.out_dir = a.out;
  if (a.seed) cfg.seed = *a.seed;
  return cfg;
}

inline int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"desk-scale laboratory for thermal-aware scheduling"};
  app.require_subcommand(1);

  CommonArgs common[6];
  std::optional<int> opt_modes;
  std::optional<double> opt_tc, opt_th;
  std::string algorithm, schedule_path, rom_path, coupling_path;
  std::string axis = "thresholds";
  int jobs = 1;

  CLI::App* c_tp = app.add_subcommand(
      "train-pod", "march the training drive and build the reduced model");
  add_common(c_tp, common[0]);
  c_tp->add_option("--modes", opt_modes, "override the mode count");

  CLI::App* c_ts = app.add_subcommand(
      "train-ss", "calibrate the steady-state block coupling matrix");
  add_common(c_ts, common[1]);

  CLI::App* c_sc = app.add_subcommand(
      "schedule", "construct a schedule with the configured algorithm");
  add_common(c_sc, common[2]);
  c_sc->add_option("--algorithm", algorithm, "pod-tas or rt-tas");
  c_sc->add_option("--tc", opt_tc, "override the cool threshold, C");
  c_sc->add_option("--th", opt_th, "override the hot threshold, C");
  c_sc->add_option("--rom", rom_path, "reuse a trained reduced model");
  c_sc->add_option("--coupling", coupling_path, "reuse a coupling matrix");

  CLI::App* c_ev = app.add_subcommand(
      "evaluate", "replay a schedule through the oracle and report metrics");
  add_common(c_ev, common[3]);
  c_ev->add_option("--algorithm", algorithm, "pod-tas or rt-tas");
  c_ev->add_option("--tc", opt_tc, "override the cool threshold, C");
  c_ev->add_option("--th", opt_th, "override the hot threshold, C");
  c_ev->add_option("--schedule", schedule_path, "evaluate this saved schedule");
  c_ev->add_option("--rom", rom_path, "reuse a trained reduced model");
  c_ev->add_option("--coupling", coupling_path, "reuse a coupling matrix");

  CLI::App* c_cp = app.add_subcommand(
      "compare", "evaluate both algorithms and report percent differences");
  add_common(c_cp, common[4]);
  c_cp->add_option("--tc", opt_tc, "override the cool threshold, C");
  c_cp->add_option("--th", opt_th, "override the hot threshold, C");
  c_cp->add_option("--rom", rom_path, "reuse a trained reduced model");
  c_cp->add_option("--coupling", coupling_path, "reuse a coupling matrix");

  CLI::App* c_sw = app.add_subcommand(
      "sweep", "sweep thresholds or mode counts from the config grids");
  add_common(c_sw, common[5]);
  c_sw->add_option("--axis", axis, "thresholds (default) or modes");
  c_sw->add_option("--jobs", jobs, "max concurrent evaluations")
      ->check(CLI::PositiveNumber);
  c_sw->add_option("--rom", rom_path, "reuse a trained reduced model");

  std::vector<std::string> argv_store;
  argv_store.push_back("podtas");
  for (const auto& a : args) argv_store.push_back(a);
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are config errors
  }

  try {
    CommonArgs* picked = nullptr;
    CLI::App* subs[6] = {c_tp, c_ts, c_sc, c_ev, c_cp, c_sw};
    for (int i = 0; i < 6; ++i)
      if (subs[i]->parsed()) picked = &common[i];
    ExperimentConfig cfg = resolve_cfg(*picked);
    if (opt_modes) cfg.modes = *opt_modes;
    if (opt_tc) cfg.tc_c = *opt_tc;
    if (opt_th) cfg.th_c = *opt_th;
    if (!algorithm.empty()) cfg.algorithm = algorithm;
    if (c_tp->parsed()) return cmd_train_pod(cfg);
    if (c_ts->parsed()) return cmd_train_ss(cfg);
    if (c_sc->parsed()) return cmd_schedule(cfg, rom_path, coupling_path);
    if (c_ev->parsed())
      return cmd_evaluate(cfg, schedule_path, rom_path, coupling_path);
    if (c_cp->parsed()) return cmd_compare(cfg, rom_path, coupling_path);
    return cmd_sweep(cfg, axis, jobs, rom_path);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace cli
}  // namespace podtas
