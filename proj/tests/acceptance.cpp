// Release gate for the shipped defaults: nine end-to-end checks over the
// built-in chip and task set, one verdict line each. The exit status is the
// number of failed checks, so a zero exit certifies every guarantee the
// library advertises, from solver physics to scheduler safety, on exactly
// the configuration a fresh checkout runs with.
#include <podtas/cli.hpp>

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace podtas;

namespace {

double now_s() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

std::string fmt(const char* f, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Verdict {
  bool ok = false;
  std::string detail;
};

struct Gate {
  int failed = 0;

  template <class Fn>
  void run(int id, const char* name, Fn fn) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail = std::string("unexpected exception: ") + e.what();
    }
    std::printf("%s %d %s: %s\n", v.ok ? "PASS" : "FAIL", id, name,
                v.detail.c_str());
    std::fflush(stdout);
    if (!v.ok) ++failed;
  }
};

// Everything the checks share: one training march, the production-sized
// reduced model, and the steady coupling matrix, all from the default config.
struct Lab {
  cli::Workbench wb;
  PowerTimeline drive;
  SnapshotSet ss;
  RomModel rom;
  CouplingMatrix cm;
  double march_s = 0;
};

bool same(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
  return x.rows() == y.rows() && x.cols() == y.cols() &&
         (x.array() == y.array()).all();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  std::printf("release gate: built-in chip, built-in tasks, default config\n");
  std::fflush(stdout);

  Lab lab;
  try {
    lab.wb = cli::open_bench(ExperimentConfig{});
    double t0 = now_s();
    lab.drive = cli::training_drive(lab.wb);
    lab.ss = cli::march_training(lab.wb, lab.drive);
    lab.march_s = now_s() - t0;
    lab.rom = cli::build_rom(lab.wb, lab.ss);
    lab.cm = calibrate_coupling(lab.wb.grid, lab.wb.cfg.material(),
                                lab.wb.cfg.boundary(), lab.wb.in.floorplan);
  } catch (const std::exception& e) {
    std::printf("FAIL 0 shared setup: %s\n", e.what());
    return 9;
  }

  const ExperimentConfig& cfg = lab.wb.cfg;
  const Floorplan& fp = lab.wb.in.floorplan;
  const Grid& grid = lab.wb.grid;
  Gate gate;

  // 1. A basis as wide as the snapshot set reproduces its own training data,
  //    and held-out accuracy only improves with more modes, quickly.
  gate.run(1, "reduced-model fidelity", [&]() -> Verdict {
    double t0 = now_s();
    PodBasis full = train_pod(lab.ss, lab.ss.count());
    double worst = 0;
    for (const auto& f : lab.ss.fields)
      worst = std::max(
          worst, lse_percent(reconstruct(full, project(full, f)).t_c, f));

    PowerTimeline held = cli::training_drive(lab.wb, 1);
    auto rows = mode_sweep(lab.ss, held, fp, cfg.sweep_modes,
                           cfg.train_dt_s(), held.t_end_s);
    bool mono = true;
    std::ostringstream series;
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i) {
        mono = mono && rows[i].avg_lse_pct <= rows[i - 1].avg_lse_pct + 1e-12;
        series << " / ";
      }
      series << fmt("%.3g%% at %d", rows[i].avg_lse_pct, rows[i].m);
    }
    double reduction =
        rows.front().avg_lse_pct / std::max(rows.back().avg_lse_pct, 1e-300);
    double elapsed = lab.march_s + (now_s() - t0);

    Verdict v;
    v.ok = worst < 0.1 && mono && reduction >= 10 && elapsed < 300;
    v.detail = fmt(
        "worst training-snapshot error %.2e%% (limit 0.1%%); held-out mean "
        "error %s modes, a %.0fx reduction (need 10x, falling); %.0f s of 300",
        worst, series.str().c_str(), reduction, elapsed);
    return v;
  });

  // 2. On a drive ten times longer than training, the reduced model's error
  //    must not grow with time: the fitted trend stays flat or falls.
  gate.run(2, "long-horizon stability", [&]() -> Verdict {
    const double dt = cfg.train_dt_s();
    TrainingConfig tc = cfg.training();
    PowerTimeline test;
    do {
      tc.segments *= 2;
      test = make_training_trace(
          fp, cfg.train_with_tasks ? &lab.wb.in.tasks : nullptr, tc,
          cfg.seed + 2);
    } while (test.t_end_s < 10 * lab.drive.t_end_s);

    FloorplanGrid map(fp, grid);
    DnsSolver solver(grid, cfg.material(), cfg.boundary());
    TimelinePowerProvider power(test, map);
    RomStepper stepper(lab.rom.ops, dt);
    Eigen::VectorXd a = lab.rom.ambient_coeffs();
    const long steps = std::llround(test.t_end_s / dt);
    double n = 0, st = 0, se = 0, stt = 0, ste = 0, worst = 0;
    for (long k = 0; k < steps; ++k) {
      solver.step(power.at(double(k) * dt), dt);
      a = stepper.advance(a, test.value_at(double(k) * dt));
      double t = double(k + 1) * dt;
      double e =
          lse_percent(reconstruct(lab.rom.basis, a).t_c, solver.field().t_c);
      n += 1;
      st += t;
      se += e;
      stt += t * t;
      ste += t * e;
      worst = std::max(worst, e);
    }
    double slope = (n * ste - st * se) / (n * stt - st * st);

    Verdict v;
    v.ok = slope <= 1e-3;
    v.detail = fmt(
        "error trend %+.2e %%/s across a %.1f s drive, %.1fx the training "
        "span (limit +1e-3); worst instantaneous error %.3g%%",
        slope, test.t_end_s, test.t_end_s / lab.drive.t_end_s, worst);
    return v;
  });

  // 3. The oracle behaves like physics: a powered-off chip stays at ambient,
  //    steady state sheds exactly the injected heat, and halving the time
  //    step shrinks the error at the advertised first order.
  gate.run(3, "oracle physics", [&]() -> Verdict {
    Material mat = cfg.material();
    BoundaryConfig bc = cfg.boundary();

    DnsSolver idle(grid, mat, bc);
    PowerField off =
        rasterize_power(fp, Eigen::VectorXd::Zero(fp.n_blocks()), grid);
    for (int k = 0; k < 50; ++k) idle.step(off, 1e-3);
    double drift = (idle.field().t_c.array() - bc.ambient_c).abs().maxCoeff();

    Eigen::VectorXd wv(fp.n_blocks());
    for (int b = 0; b < fp.n_blocks(); ++b)
      wv[b] = fp.blocks[size_t(b)].is_core ? 9.0 + b : 1.5;
    PowerField load = rasterize_power(fp, wv, grid);
    DnsSolver solver(grid, mat, bc);
    ThermalField tss = solver.solve_steady(load);
    double flux = 0;
    for (int j = 0; j < grid.ny; ++j)
      for (int i = 0; i < grid.nx; ++i)
        flux += bc.htc_w_m2k * grid.dx * grid.dy *
                (tss.t_c[grid.index(i, j, 0)] - bc.ambient_c);
    double balance = std::abs(flux - wv.sum()) / wv.sum();

    auto march = [&](double dt) {
      DnsSolver s(grid, mat, bc);
      int steps = int(std::llround(0.06 / dt));
      for (int k = 0; k < steps; ++k) s.step(load, dt);
      return s.field().t_c;
    };
    Eigen::VectorXd full = march(1e-3), half = march(5e-4),
                    quarter = march(2.5e-4);
    double factor = (full - half).cwiseAbs().maxCoeff() /
                    (half - quarter).cwiseAbs().maxCoeff();

    Verdict v;
    v.ok = drift < 1e-9 && balance < 0.01 && factor >= 1.8;
    v.detail = fmt(
        "zero-power drift %.1e C after 50 steps (limit 1e-9); steady heat "
        "balance off by %.4f%% (limit 1%%); step-halving error ratio %.2f "
        "(need >= 1.8)",
        drift, 100 * balance, factor);
    return v;
  });

  // 4. The per-watt coupling matrix predicts full steady solves on loads it
  //    was never calibrated with, to well under a millikelvin.
  gate.run(4, "steady-state superposition", [&]() -> Verdict {
    DnsSolver solver(grid, cfg.material(), cfg.boundary());
    FloorplanGrid map(fp, grid);
    Rng rng(cfg.seed + 7);
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::VectorXd wv(fp.n_blocks());
      for (int b = 0; b < fp.n_blocks(); ++b)
        wv[b] = rng.uniform(0.0, fp.blocks[size_t(b)].is_core ? 15.0 : 3.0);
      ThermalField t = solver.solve_steady(map.rasterize(wv));
      Eigen::VectorXd pred = predict_block_temps(lab.cm, wv);
      for (int b = 0; b < fp.n_blocks(); ++b)
        worst = std::max(worst, std::abs(map.block_average(t, b) - pred[b]));
    }
    Verdict v;
    v.ok = worst < 1e-4;
    v.detail = fmt(
        "20 random load vectors: worst block-average disagreement %.2e C "
        "(limit 1e-4)",
        worst);
    return v;
  });

  // 5. Across the whole threshold grid the construction never runs a hot
  //    core, latches it idle until it cools below the floor, and never
  //    overshoots the ceiling by more than one quantum's rise.
  gate.run(5, "threshold safety", [&]() -> Verdict {
    int pairs = 0, bad_exec = 0, bad_latch = 0, bad_overshoot = 0;
    long hot = 0;
    for (double th : cfg.sweep_th_c)
      for (double tcv : cfg.sweep_tc_c) {
        if (!(th > tcv)) continue;
        SchedulerConfig sc = cfg.scheduler();
        sc.tc_c = tcv;
        sc.th_c = th;
        auto res = pod_tas_schedule(lab.wb.in.tasks, fp, lab.rom, sc);
        ++pairs;
        for (size_t k = 0; k < res.log.size(); ++k)
          for (size_t c = 0; c < res.log[k].thermal.size(); ++c) {
            if (res.log[k].thermal[c] == 'H') {
              ++hot;
              if (res.log[k].exec[c] != 'I') ++bad_exec;
            }
            if (k + 1 < res.log.size()) {
              double next = res.log[k + 1].temp_c[c];
              char want;
              if (res.log[k].thermal[c] == 'H') {
                want = next < tcv ? 'C' : 'H';
              } else {
                Thermal now = classify_temperature(next, tcv, th);
                want = now == Thermal::Cool ? 'C'
                       : now == Thermal::Warm ? 'W'
                                              : 'H';
              }
              if (res.log[k + 1].thermal[c] != want) ++bad_latch;
            }
          }
        if (res.stats.max_over_th_c > res.stats.max_quantum_rise_c + 1e-9)
          ++bad_overshoot;
      }
    Verdict v;
    v.ok = bad_exec == 0 && bad_latch == 0 && bad_overshoot == 0 && hot > 0;
    v.detail = fmt(
        "%d threshold pairs, %ld hot core-quanta: %d ran while hot (must be "
        "0), %d recovery-latch breaks (must be 0), %d runs overshot beyond "
        "one quantum's rise (must be 0)",
        pairs, hot, bad_exec, bad_latch, bad_overshoot);
    return v;
  });

  // 6. Judged by the oracle, the predictive scheduler beats the reactive one
  //    on every reported metric, and halves the variability of the hottest
  //    spot, within a bounded wall-clock budget.
  gate.run(6, "comparative direction", [&]() -> Verdict {
    double t0 = now_s();
    SchedulerConfig sc = cfg.scheduler();
    auto rt = rt_tas_schedule(lab.wb.in.tasks, fp, lab.cm, sc);
    auto pod = pod_tas_schedule(lab.wb.in.tasks, fp, lab.rom, sc);
    if (!rt.feasible || !pod.feasible)
      return {false, fmt("construction infeasible (reactive %s, predictive "
                         "%s)",
                         rt.feasible ? "ok" : "missed deadlines",
                         pod.feasible ? "ok" : "missed deadlines")};

    double dt = cfg.eval_dt_us * 1e-6;
    Timeline tl_rt =
        evaluate_schedule_oracle(rt.schedule, lab.wb.in.tasks, fp, grid,
                                 cfg.material(), cfg.boundary(), dt,
                                 sc.idle_power_w);
    Timeline tl_pod =
        evaluate_schedule_oracle(pod.schedule, lab.wb.in.tasks, fp, grid,
                                 cfg.material(), cfg.boundary(), dt,
                                 sc.idle_power_w);
    MetricsReport m_rt = compute_metrics(tl_rt, cfg.warmup_s);
    MetricsReport m_pod = compute_metrics(tl_pod, cfg.warmup_s);

    bool all_neg = true;
    double var_max_pct = 0;
    std::ostringstream list;
    for (const auto& row : compare_reports(m_rt, m_pod)) {
      all_neg = all_neg && row.percent < 0;
      if (row.metric == "var_max") var_max_pct = row.percent;
      if (list.tellp() > 0) list << ", ";
      list << row.metric << ' ' << fmt("%+.1f%%", row.percent);
    }
    double elapsed = now_s() - t0;

    Verdict v;
    v.ok = all_neg && var_max_pct <= -50.0 && elapsed < 900;
    v.detail = fmt(
        "predictive vs reactive under the oracle: %s (all must fall, "
        "var_max by half); %.0f s of 900",
        list.str().c_str(), elapsed);
    return v;
  });

  // 7. The threshold sweep has the expected shape: inverted bands are
  //    rejected outright, tightening the band at a fixed ceiling never
  //    lowers the rewrite rate, and the lowest ceiling breaks feasibility.
  gate.run(7, "threshold-sweep shape", [&]() -> Verdict {
    auto rows = threshold_sweep(lab.wb.in.tasks, fp, lab.rom, cfg.scheduler(),
                                cfg.sweep_tc_c, cfg.sweep_th_c, 1);
    const size_t ntc = cfg.sweep_tc_c.size();
    double th_low =
        *std::min_element(cfg.sweep_th_c.begin(), cfg.sweep_th_c.end());
    bool rejected_ok = true, mono = true;
    int valid = 0, low_edge_infeasible = 0;
    for (const auto& row : rows) {
      if (!(row.th_c > row.tc_c)) {
        rejected_ok =
            rejected_ok && !row.valid && !row.feasible && row.entries == 0;
        continue;
      }
      ++valid;
      if (!row.feasible && row.th_c == th_low) ++low_edge_infeasible;
    }
    for (size_t ith = 0; ith < cfg.sweep_th_c.size(); ++ith) {
      double prev = -1;
      for (size_t itc = 0; itc < ntc; ++itc) {
        const auto& row = rows[ith * ntc + itc];
        if (!row.valid) continue;
        if (prev >= 0 && row.assignment_freq_hz < prev - 1e-9) mono = false;
        prev = row.assignment_freq_hz;
      }
    }
    Verdict v;
    v.ok = rejected_ok && mono && low_edge_infeasible >= 1;
    v.detail = fmt(
        "%d valid of %ld pairs; inverted bands rejected: %s; rewrite rate "
        "monotone as the band tightens: %s; %d infeasible at the %g C "
        "ceiling (need >= 1)",
        valid, long(rows.size()), rejected_ok ? "yes" : "NO",
        mono ? "yes" : "NO", low_edge_infeasible, th_low);
    return v;
  });

  // 8. The reported percent differences reproduce two hand-checked values.
  gate.run(8, "metric arithmetic", [&]() -> Verdict {
    double d1 = percent_difference(78.47, 110.53);
    double d2 = percent_difference(40.95, 87.12);
    Verdict v;
    v.ok = std::abs(d1 - -29.01) <= 0.05 && std::abs(d2 - -53.00) <= 0.05;
    v.detail = fmt(
        "78.47 vs 110.53 -> %+.3f%% (want -29.01 +/- 0.05); 40.95 vs 87.12 "
        "-> %+.3f%% (want -53.00 +/- 0.05)",
        d1, d2);
    return v;
  });

  // 9. Two cold-start pipelines from the same config and seed serialize to
  //    identical bytes, and every persisted artifact reloads bit-exact.
  gate.run(9, "determinism and round-trips", [&]() -> Verdict {
    fs::path dir =
        fs::temp_directory_path() / fmt("podtas-gate-%d", int(::getpid()));
    fs::create_directories(dir);

    struct Pipeline {
      RomModel rom;
      CouplingMatrix cm;
      Schedule sched;
      std::string schedule_txt, metrics_txt, coupling_txt;
    };
    auto run_pipeline = [&](const fs::path& rom_path) {
      cli::Workbench wb = cli::open_bench(ExperimentConfig{});
      PowerTimeline drive = cli::training_drive(wb);
      SnapshotSet ss = cli::march_training(wb, drive);
      Pipeline p;
      p.rom = cli::build_rom(wb, ss);
      p.cm = calibrate_coupling(wb.grid, wb.cfg.material(), wb.cfg.boundary(),
                                wb.in.floorplan);
      SchedulerConfig sc = wb.cfg.scheduler();
      auto res = pod_tas_schedule(wb.in.tasks, wb.in.floorplan, p.rom, sc);
      p.sched = res.schedule;
      Timeline tl = evaluate_schedule_rom(res.schedule, wb.in.tasks,
                                          wb.in.floorplan, p.rom,
                                          sc.predict_dt_s, sc.idle_power_w);
      std::ostringstream s1, s2, s3;
      save_schedule(res.schedule, s1);
      save_metrics(compute_metrics(tl, wb.cfg.warmup_s), s2,
                   res.schedule.algorithm, sc.t_end_s, sc.predict_dt_s,
                   wb.cfg.warmup_s);
      save_coupling(p.cm, s3);
      p.schedule_txt = s1.str();
      p.metrics_txt = s2.str();
      p.coupling_txt = s3.str();
      save_rom(p.rom, rom_path.string());
      return p;
    };
    Pipeline a = run_pipeline(dir / "a.bin");
    Pipeline b = run_pipeline(dir / "b.bin");

    bool rerun_equal = !a.schedule_txt.empty() &&
                       a.schedule_txt == b.schedule_txt &&
                       a.metrics_txt == b.metrics_txt &&
                       a.coupling_txt == b.coupling_txt &&
                       slurp(dir / "a.bin") == slurp(dir / "b.bin") &&
                       fs::file_size(dir / "a.bin") > 0;

    RomModel rback = load_rom((dir / "a.bin").string());
    bool rom_trip = rback.grid.same_as(a.rom.grid) &&
                    same(rback.basis.modes, a.rom.basis.modes) &&
                    same(rback.basis.spectrum, a.rom.basis.spectrum) &&
                    same(rback.ops.c, a.rom.ops.c) &&
                    same(rback.ops.g, a.rom.ops.g) &&
                    same(rback.ops.forcing, a.rom.ops.forcing) &&
                    same(rback.ops.power_in, a.rom.ops.power_in) &&
                    rback.ops.blocks == a.rom.ops.blocks;

    std::istringstream cin_(a.coupling_txt);
    CouplingMatrix cback = parse_coupling(cin_, "gate");
    bool cm_trip = cback.blocks == a.cm.blocks &&
                   cback.ambient_c == a.cm.ambient_c &&
                   same(cback.theta, a.cm.theta);

    std::istringstream sin_(a.schedule_txt);
    Schedule sback = parse_schedule(sin_, "gate");
    bool sched_trip =
        sback.algorithm == a.sched.algorithm &&
        sback.n_cores == a.sched.n_cores &&
        sback.quantum_s == a.sched.quantum_s &&
        sback.t_end_s == a.sched.t_end_s &&
        sback.thresholded == a.sched.thresholded &&
        sback.tc_c == a.sched.tc_c && sback.th_c == a.sched.th_c &&
        sback.feasible == a.sched.feasible && sback.t == a.sched.t &&
        sback.assign == a.sched.assign;

    fs::remove_all(dir);
    Verdict v;
    v.ok = rerun_equal && rom_trip && cm_trip && sched_trip;
    v.detail = fmt(
        "cold reruns byte-identical (schedule, metrics, coupling, reduced "
        "model): %s; reloads bit-exact: model %s, coupling %s, schedule %s",
        rerun_equal ? "yes" : "NO", rom_trip ? "yes" : "NO",
        cm_trip ? "yes" : "NO", sched_trip ? "yes" : "NO");
    return v;
  });

  if (gate.failed == 0)
    std::printf("all 9 checks passed in %.0f s\n", now_s());
  else
    std::printf("%d of 9 checks FAILED\n", gate.failed);
  return gate.failed;
}
