// Piecewise-constant block power over time: a breakpoint list holding the
// full per-block wattage vector from each time until the next. Queries are
// zero-order hold. CSV round-trips via "time_s,<block>,..." rows.
#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "podtas/fields.hpp"
#include "podtas/types.hpp"

namespace podtas {

struct PowerTimeline {
  std::vector<std::string> blocks;  // floorplan order
  std::vector<double> t;            // strictly increasing, starts at 0
  std::vector<Eigen::VectorXd> w;   // per breakpoint, one wattage per block
  double t_end_s = 0;

  int n_breakpoints() const { return static_cast<int>(t.size()); }

  // Replaces the trailing breakpoint when times collide, skips no-op appends.
  void append(double time, const Eigen::VectorXd& watts) {
    if (!t.empty() && time < t.back())
      throw ConfigError("power timeline: non-monotonic append");
    if (!t.empty() && time == t.back()) {
      w.back() = watts;
      // A rewrite can make the previous segment redundant.
      if (t.size() > 1 && w[t.size() - 2] == w.back()) {
        t.pop_back();
        w.pop_back();
      }
      return;
    }
    if (!w.empty() && w.back() == watts) return;
    t.push_back(time);
    w.push_back(watts);
  }

  int segment_at(double time) const {
    if (t.empty() || time < t.front())
      throw ConfigError("power timeline: query before first breakpoint");
    int lo = 0, hi = n_breakpoints() - 1;
    while (lo < hi) {  // last breakpoint with t <= time
      int mid = (lo + hi + 1) / 2;
      if (t[mid] <= time)
        lo = mid;
      else
        hi = mid - 1;
    }
    return lo;
  }

  const Eigen::VectorXd& value_at(double time) const {
    return w[segment_at(time)];
  }

  void validate() const {
    if (blocks.empty()) throw ConfigError("power timeline: no blocks");
    if (t.empty()) throw ConfigError("power timeline: no breakpoints");
    if (t.front() != 0)
      throw ConfigError("power timeline: must start at t = 0");
    for (const auto& v : w) {
      if (v.size() != static_cast<int>(blocks.size()))
        throw ConfigError("power timeline: wattage width mismatch");
      if ((v.array() < 0).any())
        throw ConfigError("power timeline: negative wattage");
    }
    if (t_end_s < t.back())
      throw ConfigError("power timeline: horizon before last breakpoint");
  }
};

inline void save_power_timeline(const PowerTimeline& tl, std::ostream& out) {
  out << "time_s";
  for (const auto& b : tl.blocks) out << "," << b;
  out << "\n";
  char buf[64];
  for (int i = 0; i < tl.n_breakpoints(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", tl.t[i]);
    out << buf;
    for (int b = 0; b < tl.w[i].size(); ++b) {
      std::snprintf(buf, sizeof buf, ",%.17g", tl.w[i][b]);
      out << buf;
    }
    out << "\n";
  }
}

inline PowerTimeline parse_power_timeline(std::istream& in, double t_end_s,
                                          const std::string& origin) {
  PowerTimeline tl;
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError(origin + ": empty power trace");
  {
    std::stringstream hs(line);
    std::string col;
    bool first = true;
    while (std::getline(hs, col, ',')) {
      if (first && col != "time_s")
        throw ConfigError(origin + ": header must start with time_s");
      if (!first) tl.blocks.push_back(col);
      first = false;
    }
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream rs(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != tl.blocks.size() + 1)
      throw ConfigError(origin + ": row width mismatch");
    tl.t.push_back(row[0]);
    tl.w.push_back(Eigen::Map<Eigen::VectorXd>(row.data() + 1,
                                               tl.blocks.size()));
  }
  tl.t_end_s = std::max(t_end_s, tl.t.empty() ? 0.0 : tl.t.back());
  tl.validate();
  return tl;
}

// Rasterizes the current segment on demand and keeps the last field around;
// time-marching consumers hit the cache except at segment changes.
class TimelinePowerProvider {
 public:
  TimelinePowerProvider(const PowerTimeline& tl, const FloorplanGrid& map)
      : tl_(tl), map_(map) {
    if (tl.blocks != map.floorplan().block_names())
      throw ConfigError("power timeline blocks differ from floorplan");
  }

  const PowerField& at(double time) const {
    int seg = tl_.segment_at(time);
    if (!cached_ || seg != seg_) {
      cached_ = map_.rasterize(tl_.w[seg]);
      seg_ = seg;
    }
    return *cached_;
  }

 private:
  const PowerTimeline& tl_;
  const FloorplanGrid& map_;
  mutable std::optional<PowerField> cached_;
  mutable int seg_ = -1;
};

}  // namespace podtas
