// Experiment configuration: one flat key = value file covering chip, grid,
// training, scheduling, evaluation, and sweep settings. Every field has a
// silicon-ish default, so an empty file (or none at all) describes the
// built-in quad-core setup. The canonical serialization doubles as the
// identity of a run: its FNV-1a hash names the run directory.
#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "podtas/defaults.hpp"
#include "podtas/floorplan.hpp"
#include "podtas/scheduler.hpp"
#include "podtas/tasks.hpp"
#include "podtas/training.hpp"
#include "podtas/types.hpp"

namespace podtas {

struct ExperimentConfig {
  // input files; empty means the built-in defaults
  std::string floorplan_file;
  std::string task_file;
  std::string out_dir = "runs";
  // discretization of the chip volume
  int grid_nx = 40, grid_ny = 34, grid_nz = 5;
  // solid properties and the convective sink
  double conductivity_w_mk = 130;
  double density_kg_m3 = 2330;
  double specific_heat_j_kgk = 700;
  double htc_w_m2k = 8000;
  double ambient_c = 45;
  // reduced-model training
  int modes = 30;
  double train_dt_ms = 1;
  int snapshot_stride = 2;
  int train_segments = 16;
  double train_seg_min_ms = 20, train_seg_max_ms = 60;
  double train_core_max_w = 30, train_shared_max_w = 3;
  bool train_with_tasks = true;
  double train_cooldown_ms = 100;
  bool centered = false;
  // scheduling
  std::string algorithm = "pod-tas";  // or rt-tas
  double tc_c = 70, th_c = 75;
  double quantum_ms = 1;
  double predict_dt_us = 100;
  double horizon_s = 2;
  double idle_power_w = 0;
  // evaluation
  double eval_dt_us = 10;
  double warmup_s = 0;
  // sweep axes
  std::vector<int> sweep_modes{3, 10, 30};
  std::vector<double> sweep_tc_c{55, 60, 65, 70, 75};
  std::vector<double> sweep_th_c{60, 65, 70, 75, 80};
  // base seed; derived streams (training drive, held-out test drive) offset it
  std::uint64_t seed = 42;

  double train_dt_s() const { return train_dt_ms * 1e-3; }

  SchedulerConfig scheduler() const {
    SchedulerConfig s;
    s.tc_c = tc_c;
    s.th_c = th_c;
    s.quantum_s = quantum_ms * 1e-3;
    s.predict_dt_s = predict_dt_us * 1e-6;
    s.t_end_s = horizon_s;
    s.idle_power_w = idle_power_w;
    return s;
  }

  TrainingConfig training() const {
    TrainingConfig t;
    t.segments = train_segments;
    t.seg_min_s = train_seg_min_ms * 1e-3;
    t.seg_max_s = train_seg_max_ms * 1e-3;
    t.core_max_w = train_core_max_w;
    t.shared_max_w = train_shared_max_w;
    t.include_task_traces = train_with_tasks;
    t.cooldown_s = train_cooldown_ms * 1e-3;
    return t;
  }

  Material material() const {
    return {conductivity_w_mk, density_kg_m3, specific_heat_j_kgk};
  }

  BoundaryConfig boundary() const { return {htc_w_m2k, ambient_c}; }

  void validate() const {
    if (grid_nx < 2 || grid_ny < 2 || grid_nz < 1)
      throw ConfigError("config: grid must be at least 2 x 2 x 1 cells");
    material().validate();
    boundary().validate();
    if (modes < 1) throw ConfigError("config: modes must be positive");
    if (!(train_dt_ms > 0))
      throw ConfigError("config: train_dt_ms must be positive");
    if (snapshot_stride < 1)
      throw ConfigError("config: snapshot_stride must be positive");
    training().validate();
    if (algorithm != "pod-tas" && algorithm != "rt-tas")
      throw ConfigError("config: algorithm must be pod-tas or rt-tas");
    SchedulerConfig s = scheduler();
    s.validate_thresholds();
    (void)s.substeps();  // prediction step must divide the quantum
    (void)s.quanta();    // horizon must be a quantum multiple
    if (idle_power_w < 0)
      throw ConfigError("config: idle_power_w must be non-negative");
    if (!(eval_dt_us > 0))
      throw ConfigError("config: eval_dt_us must be positive");
    if (warmup_s < 0 || warmup_s >= horizon_s)
      throw ConfigError("config: warmup_s must lie inside the horizon");
    if (sweep_modes.empty() || sweep_tc_c.empty() || sweep_th_c.empty())
      throw ConfigError("config: sweep axes must be non-empty");
    for (int m : sweep_modes)
      if (m < 1) throw ConfigError("config: sweep_modes must be positive");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

inline double parse_num(const std::string& v, const std::string& where) {
  size_t used = 0;
  double x = 0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    throw ConfigError(where + ": not a number: '" + v + "'");
  }
  if (used != v.size())
    throw ConfigError(where + ": trailing junk in '" + v + "'");
  return x;
}

inline int parse_int(const std::string& v, const std::string& where) {
  double x = parse_num(v, where);
  int i = static_cast<int>(x);
  if (double(i) != x) throw ConfigError(where + ": expected an integer");
  return i;
}

inline bool parse_bool(const std::string& v, const std::string& where) {
  if (v == "0" || v == "false") return false;
  if (v == "1" || v == "true") return true;
  throw ConfigError(where + ": expected 0/1/true/false, got '" + v + "'");
}

inline std::uint64_t parse_u64(const std::string& v, const std::string& where) {
  try {
    size_t used = 0;
    std::uint64_t x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("junk");
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": not an unsigned integer: '" + v + "'");
  }
}

template <class T, class Parse>
std::vector<T> parse_list(const std::string& v, const std::string& where,
                          Parse one) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(one(trim(item), where));
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

inline std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    if constexpr (std::is_same_v<T, double>)
      out += g17(v[i]);
    else
      out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace detail

// Applies key = value lines from `in` on top of `cfg`. '#' starts a comment,
// blank lines are skipped, unknown or repeated keys are errors.
inline void apply_config(std::istream& in, const std::string& origin,
                         ExperimentConfig& cfg) {
  std::string line;
  int lineno = 0;
  std::vector<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string flat = detail::trim(line);
    if (flat.empty()) continue;
    const std::string where = origin + ":" + std::to_string(lineno);
    auto eq = flat.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected key = value");
    std::string key = detail::trim(flat.substr(0, eq));
    std::string val = detail::trim(flat.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    for (const auto& s : seen)
      if (s == key) throw ConfigError(where + ": repeated key '" + key + "'");
    seen.push_back(key);
    using namespace detail;
    if (key == "floorplan_file") cfg.floorplan_file = val;
    else if (key == "task_file") cfg.task_file = val;
    else if (key == "out_dir") cfg.out_dir = val;
    else if (key == "grid_nx") cfg.grid_nx = parse_int(val, where);
    else if (key == "grid_ny") cfg.grid_ny = parse_int(val, where);
    else if (key == "grid_nz") cfg.grid_nz = parse_int(val, where);
    else if (key == "conductivity_w_mk") cfg.conductivity_w_mk = parse_num(val, where);
    else if (key == "density_kg_m3") cfg.density_kg_m3 = parse_num(val, where);
    else if (key == "specific_heat_j_kgk") cfg.specific_heat_j_kgk = parse_num(val, where);
    else if (key == "htc_w_m2k") cfg.htc_w_m2k = parse_num(val, where);
    else if (key == "ambient_c") cfg.ambient_c = parse_num(val, where);
    else if (key == "modes") cfg.modes = parse_int(val, where);
    else if (key == "train_dt_ms") cfg.train_dt_ms = parse_num(val, where);
    else if (key == "snapshot_stride") cfg.snapshot_stride = parse_int(val, where);
    else if (key == "train_segments") cfg.train_segments = parse_int(val, where);
    else if (key == "train_seg_min_ms") cfg.train_seg_min_ms = parse_num(val, where);
    else if (key == "train_seg_max_ms") cfg.train_seg_max_ms = parse_num(val, where);
    else if (key == "train_core_max_w") cfg.train_core_max_w = parse_num(val, where);
    else if (key == "train_shared_max_w") cfg.train_shared_max_w = parse_num(val, where);
    else if (key == "train_with_tasks") cfg.train_with_tasks = parse_bool(val, where);
    else if (key == "train_cooldown_ms") cfg.train_cooldown_ms = parse_num(val, where);
    else if (key == "centered") cfg.centered = parse_bool(val, where);
    else if (key == "algorithm") cfg.algorithm = val;
    else if (key == "tc_c") cfg.tc_c = parse_num(val, where);
    else if (key == "th_c") cfg.th_c = parse_num(val, where);
    else if (key == "quantum_ms") cfg.quantum_ms = parse_num(val, where);
    else if (key == "predict_dt_us") cfg.predict_dt_us = parse_num(val, where);
    else if (key == "horizon_s") cfg.horizon_s = parse_num(val, where);
    else if (key == "idle_power_w") cfg.idle_power_w = parse_num(val, where);
    else if (key == "eval_dt_us") cfg.eval_dt_us = parse_num(val, where);
    else if (key == "warmup_s") cfg.warmup_s = parse_num(val, where);
    else if (key == "sweep_modes")
      cfg.sweep_modes = parse_list<int>(val, where, parse_int);
    else if (key == "sweep_tc_c")
      cfg.sweep_tc_c = parse_list<double>(val, where, parse_num);
    else if (key == "sweep_th_c")
      cfg.sweep_th_c = parse_list<double>(val, where, parse_num);
    else if (key == "seed") cfg.seed = parse_u64(val, where);
    else throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  ExperimentConfig cfg;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    apply_config(in, path, cfg);
  }
  return cfg;
}

// Canonical form: every key in declaration order, one per line. Byte-stable,
// so it both documents a run and hashes to its identity.
inline std::string serialize_config(const ExperimentConfig& c) {
  using detail::g17;
  using detail::join;
  std::ostringstream out;
  auto kv = [&](const char* k, const std::string& v) {
    out << k << " = " << v << "\n";
  };
  kv("floorplan_file", c.floorplan_file);
  kv("task_file", c.task_file);
  kv("out_dir", c.out_dir);
  kv("grid_nx", std::to_string(c.grid_nx));
  kv("grid_ny", std::to_string(c.grid_ny));
  kv("grid_nz", std::to_string(c.grid_nz));
  kv("conductivity_w_mk", g17(c.conductivity_w_mk));
  kv("density_kg_m3", g17(c.density_kg_m3));
  kv("specific_heat_j_kgk", g17(c.specific_heat_j_kgk));
  kv("htc_w_m2k", g17(c.htc_w_m2k));
  kv("ambient_c", g17(c.ambient_c));
  kv("modes", std::to_string(c.modes));
  kv("train_dt_ms", g17(c.train_dt_ms));
  kv("snapshot_stride", std::to_string(c.snapshot_stride));
  kv("train_segments", std::to_string(c.train_segments));
  kv("train_seg_min_ms", g17(c.train_seg_min_ms));
  kv("train_seg_max_ms", g17(c.train_seg_max_ms));
  kv("train_core_max_w", g17(c.train_core_max_w));
  kv("train_shared_max_w", g17(c.train_shared_max_w));
  kv("train_with_tasks", c.train_with_tasks ? "1" : "0");
  kv("train_cooldown_ms", g17(c.train_cooldown_ms));
  kv("centered", c.centered ? "1" : "0");
  kv("algorithm", c.algorithm);
  kv("tc_c", g17(c.tc_c));
  kv("th_c", g17(c.th_c));
  kv("quantum_ms", g17(c.quantum_ms));
  kv("predict_dt_us", g17(c.predict_dt_us));
  kv("horizon_s", g17(c.horizon_s));
  kv("idle_power_w", g17(c.idle_power_w));
  kv("eval_dt_us", g17(c.eval_dt_us));
  kv("warmup_s", g17(c.warmup_s));
  kv("sweep_modes", join(c.sweep_modes));
  kv("sweep_tc_c", join(c.sweep_tc_c));
  kv("sweep_th_c", join(c.sweep_th_c));
  kv("seed", std::to_string(c.seed));
  return out.str();
}

inline std::uint64_t config_hash(const ExperimentConfig& c) {
  std::string text = serialize_config(c);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char byte : text) {
    h ^= byte;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string config_hash_hex(const ExperimentConfig& c, int digits = 8) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(config_hash(c)));
  return std::string(buf).substr(0, size_t(digits));
}

// The floorplan and task set a config names, plus their raw text so run
// directories can keep verbatim copies of what was actually used.
struct ResolvedInputs {
  Floorplan floorplan;
  TaskSet tasks;
  std::string floorplan_text;
  std::string task_text;
};

namespace detail {

inline std::string slurp(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ConfigError(std::string(what) + ": cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline ResolvedInputs resolve_inputs(const ExperimentConfig& cfg) {
  ResolvedInputs r;
  r.floorplan_text = cfg.floorplan_file.empty()
                         ? default_floorplan_text()
                         : detail::slurp(cfg.floorplan_file, "floorplan");
  r.task_text = cfg.task_file.empty()
                    ? default_tasks_text()
                    : detail::slurp(cfg.task_file, "tasks");
  {
    std::istringstream in(r.floorplan_text);
    r.floorplan = parse_floorplan(
        in, cfg.floorplan_file.empty() ? "<builtin floorplan>"
                                       : cfg.floorplan_file);
  }
  {
    std::istringstream in(r.task_text);
    r.tasks = parse_tasks(
        in, cfg.task_file.empty() ? "<builtin tasks>" : cfg.task_file);
  }
  r.tasks.validate();
  for (const auto& t : r.tasks.tasks) resolve_task_power(t, r.floorplan);
  return r;
}

inline Grid make_grid(const ExperimentConfig& cfg, const Floorplan& fp) {
  Grid g;
  g.nx = cfg.grid_nx;
  g.ny = cfg.grid_ny;
  g.nz = cfg.grid_nz;
  g.dx = fp.chip_w / g.nx;
  g.dy = fp.chip_h / g.ny;
  g.dz = fp.chip_t / g.nz;
  g.active_lo = g.active_hi = g.nz - 1;  // heat enters the top layer
  g.validate();
  return g;
}

}  // namespace podtas
