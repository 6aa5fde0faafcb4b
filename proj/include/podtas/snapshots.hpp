// Snapshot sets: sampled transient fields plus everything needed to
// reproduce them. On disk a set is a directory:
//
//   meta.txt    solver configuration, step size, sample times
//   fields.f64  count * n_cells float64, little endian, z-major/y/x
//   trace.csv   the block power trace that produced the run
#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "podtas/power_timeline.hpp"
#include "podtas/types.hpp"

namespace podtas {

struct SnapshotSet {
  Grid grid;
  Material material;
  BoundaryConfig bc;
  double dt_s = 0;  // producing step size
  std::vector<double> t;
  std::vector<Eigen::VectorXd> fields;
  PowerTimeline trace;

  int count() const { return static_cast<int>(t.size()); }

  void validate() const {
    grid.validate();
    material.validate();
    bc.validate();
    if (t.size() != fields.size())
      throw ConfigError("snapshots: time/field count mismatch");
    for (size_t i = 1; i < t.size(); ++i)
      if (t[i] <= t[i - 1])
        throw ConfigError("snapshots: times must strictly increase");
    for (const auto& f : fields) {
      if (f.size() != grid.n_cells())
        throw ConfigError("snapshots: field size mismatch");
      if (!f.allFinite()) throw NumericError("snapshots: non-finite field");
    }
  }
};

inline void save_snapshots(const SnapshotSet& ss, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream meta(fs::path(dir) / "meta.txt");
    if (!meta) throw ConfigError("cannot write " + dir + "/meta.txt");
    char buf[512];
    meta << "podtas-snapshots 1\n";
    std::snprintf(buf, sizeof buf, "grid %d %d %d %.17g %.17g %.17g %d %d\n",
                  ss.grid.nx, ss.grid.ny, ss.grid.nz, ss.grid.dx, ss.grid.dy,
                  ss.grid.dz, ss.grid.active_lo, ss.grid.active_hi);
    meta << buf;
    std::snprintf(buf, sizeof buf, "material %.17g %.17g %.17g\n",
                  ss.material.conductivity_w_mk, ss.material.density_kg_m3,
                  ss.material.specific_heat_j_kgk);
    meta << buf;
    std::snprintf(buf, sizeof buf, "boundary %.17g %.17g\n", ss.bc.htc_w_m2k,
                  ss.bc.ambient_c);
    meta << buf;
    std::snprintf(buf, sizeof buf, "dt %.17g\n", ss.dt_s);
    meta << buf;
    meta << "count " << ss.count() << "\ntimes";
    for (double v : ss.t) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      meta << buf;
    }
    meta << "\n";
  }
  {
    std::ofstream raw(fs::path(dir) / "fields.f64", std::ios::binary);
    if (!raw) throw ConfigError("cannot write " + dir + "/fields.f64");
    for (const auto& f : ss.fields)
      raw.write(reinterpret_cast<const char*>(f.data()),
                std::streamsize(sizeof(double)) * f.size());
  }
  {
    std::ofstream tr(fs::path(dir) / "trace.csv");
    if (!tr) throw ConfigError("cannot write " + dir + "/trace.csv");
    save_power_timeline(ss.trace, tr);
  }
}

inline SnapshotSet load_snapshots(const std::string& dir) {
  namespace fs = std::filesystem;
  SnapshotSet ss;
  std::ifstream meta(fs::path(dir) / "meta.txt");
  if (!meta) throw ConfigError("cannot open " + dir + "/meta.txt");
  std::string key;
  meta >> key;
  int version;
  if (!(meta >> version) || key != "podtas-snapshots" || version != 1)
    throw ConfigError(dir + ": not a snapshot directory");
  int count = 0;
  while (meta >> key) {
    if (key == "grid") {
      meta >> ss.grid.nx >> ss.grid.ny >> ss.grid.nz >> ss.grid.dx >>
          ss.grid.dy >> ss.grid.dz >> ss.grid.active_lo >> ss.grid.active_hi;
    } else if (key == "material") {
      meta >> ss.material.conductivity_w_mk >> ss.material.density_kg_m3 >>
          ss.material.specific_heat_j_kgk;
    } else if (key == "boundary") {
      meta >> ss.bc.htc_w_m2k >> ss.bc.ambient_c;
    } else if (key == "dt") {
      meta >> ss.dt_s;
    } else if (key == "count") {
      meta >> count;
    } else if (key == "times") {
      ss.t.resize(count);
      for (int i = 0; i < count; ++i) meta >> ss.t[i];
    } else {
      throw ConfigError(dir + ": unknown meta key '" + key + "'");
    }
    if (!meta) throw ConfigError(dir + ": malformed meta.txt");
  }
  std::ifstream raw(fs::path(dir) / "fields.f64", std::ios::binary);
  if (!raw) throw ConfigError("cannot open " + dir + "/fields.f64");
  ss.fields.assign(count, Eigen::VectorXd(ss.grid.n_cells()));
  for (auto& f : ss.fields) {
    raw.read(reinterpret_cast<char*>(f.data()),
             std::streamsize(sizeof(double)) * f.size());
    if (!raw) throw ConfigError(dir + ": fields.f64 truncated");
  }
  std::ifstream tr(fs::path(dir) / "trace.csv");
  if (!tr) throw ConfigError("cannot open " + dir + "/trace.csv");
  ss.trace = parse_power_timeline(tr, ss.t.empty() ? 0 : ss.t.back(),
                                  dir + "/trace.csv");
  ss.validate();
  return ss;
}

}  // namespace podtas
