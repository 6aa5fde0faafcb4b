// Scalar fields on the grid plus the floorplan<->grid mapping: power
// rasterization and block-footprint temperature reductions.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <vector>

#include "podtas/floorplan.hpp"
#include "podtas/types.hpp"

namespace podtas {

struct ThermalField {
  Grid grid;
  Eigen::VectorXd t_c;  // one value per cell, z-major/y/x order

  static ThermalField uniform(const Grid& g, double value) {
    return {g, Eigen::VectorXd::Constant(g.n_cells(), value)};
  }
};

struct PowerField {
  Grid grid;
  Eigen::VectorXd density_w_m3;

  double total_w() const { return density_w_m3.sum() * grid.cell_volume(); }
};

struct SpatialStats {
  double min_c = 0, mean_c = 0, max_c = 0, variance = 0;
};

// Population statistics over every cell of the field.
inline SpatialStats spatial_stats(const ThermalField& f) {
  SpatialStats s;
  const auto& v = f.t_c;
  if (v.size() == 0) throw NumericError("spatial_stats: empty field");
  s.min_c = v.minCoeff();
  s.max_c = v.maxCoeff();
  s.mean_c = v.mean();
  s.variance = (v.array() - s.mean_c).square().sum() / double(v.size());
  return s;
}

// Precomputed geometric coupling between a floorplan and a grid: which cell
// columns each block touches and with how much area. Power deposited by a
// block is spread uniformly over its footprint through the active layers, so
// a partially covered cell receives its area share and block totals are
// conserved exactly.
class FloorplanGrid {
 public:
  FloorplanGrid(const Floorplan& fp, const Grid& grid)
      : fp_(fp), grid_(grid) {
    fp.validate();
    grid.validate();
    const double eps = 1e-9;
    if (std::abs(grid.width() - fp.chip_w) > eps ||
        std::abs(grid.height() - fp.chip_h) > eps ||
        std::abs(grid.thickness() - fp.chip_t) > eps)
      throw ConfigError("floorplan/grid mismatch: grid extent differs from chip");
    const int layers = grid.active_hi - grid.active_lo + 1;
    active_thickness_ = layers * grid.dz;
    cover_.resize(fp.n_blocks());
    for (int b = 0; b < fp.n_blocks(); ++b) {
      const Block& blk = fp.blocks[b];
      int i0 = std::max(0, int(std::floor(blk.x / grid.dx)));
      int i1 = std::min(grid.nx - 1, int(std::ceil((blk.x + blk.w) / grid.dx)));
      int j0 = std::max(0, int(std::floor(blk.y / grid.dy)));
      int j1 = std::min(grid.ny - 1, int(std::ceil((blk.y + blk.h) / grid.dy)));
      double area = 0;
      for (int j = j0; j <= j1; ++j)
        for (int i = i0; i <= i1; ++i) {
          double ox = std::min(blk.x + blk.w, (i + 1) * grid.dx) -
                      std::max(blk.x, i * grid.dx);
          double oy = std::min(blk.y + blk.h, (j + 1) * grid.dy) -
                      std::max(blk.y, j * grid.dy);
          if (ox <= 0 || oy <= 0) continue;
          cover_[b].push_back({j * grid.nx + i, ox * oy});
          area += ox * oy;
        }
      if (cover_[b].empty())
        throw ConfigError("floorplan/grid mismatch: block '" + blk.name +
                          "' covers no cells");
      areas_.push_back(area);
    }
  }

  const Floorplan& floorplan() const { return fp_; }
  const Grid& grid() const { return grid_; }

  // Volumetric density per watt deposited in block b, as (cell, W/m^3) pairs.
  std::vector<std::pair<int, double>> unit_density(int b) const {
    std::vector<std::pair<int, double>> out;
    const double per_area =
        1.0 / (areas_[b] * active_thickness_ * grid_.dx * grid_.dy);
    for (int k = grid_.active_lo; k <= grid_.active_hi; ++k)
      for (const auto& [col, o] : cover_[b])
        out.push_back({k * grid_.n_plane() + col, o * per_area});
    return out;
  }

  PowerField rasterize(const Eigen::VectorXd& block_w) const {
    if (block_w.size() != fp_.n_blocks())
      throw ConfigError("rasterize: wattage vector size mismatch");
    PowerField p{grid_, Eigen::VectorXd::Zero(grid_.n_cells())};
    for (int b = 0; b < fp_.n_blocks(); ++b) {
      if (block_w[b] < 0)
        throw ConfigError("rasterize: negative power in block '" +
                          fp_.blocks[b].name + "'");
      if (block_w[b] == 0) continue;
      const double scale =
          block_w[b] / (areas_[b] * active_thickness_ * grid_.dx * grid_.dy);
      for (int k = grid_.active_lo; k <= grid_.active_hi; ++k) {
        const int base = k * grid_.n_plane();
        for (const auto& [col, o] : cover_[b])
          p.density_w_m3[base + col] += o * scale;
      }
    }
    return p;
  }

  // Area-weighted mean temperature over the block footprint (active layers).
  double block_average(const ThermalField& f, int b) const {
    check(f, b);
    double acc = 0, wsum = 0;
    for (int k = grid_.active_lo; k <= grid_.active_hi; ++k) {
      const int base = k * grid_.n_plane();
      for (const auto& [col, o] : cover_[b]) {
        acc += o * f.t_c[base + col];
        wsum += o;
      }
    }
    return acc / wsum;
  }

  // Hottest cell anywhere under the block footprint (active layers).
  double block_peak(const ThermalField& f, int b) const {
    check(f, b);
    double peak = -std::numeric_limits<double>::infinity();
    for (int k = grid_.active_lo; k <= grid_.active_hi; ++k) {
      const int base = k * grid_.n_plane();
      for (const auto& [col, o] : cover_[b])
        peak = std::max(peak, f.t_c[base + col]);
    }
    return peak;
  }

  double block_area(int b) const { return areas_[b]; }

  // Cell indices (active layers) under block b, without weights.
  std::vector<int> block_cells(int b) const {
    std::vector<int> out;
    for (int k = grid_.active_lo; k <= grid_.active_hi; ++k)
      for (const auto& [col, o] : cover_[b]) {
        (void)o;
        out.push_back(k * grid_.n_plane() + col);
      }
    return out;
  }

 private:
  void check(const ThermalField& f, int b) const {
    if (!f.grid.same_as(grid_))
      throw ConfigError("block reduction: field grid differs");
    if (b < 0 || b >= fp_.n_blocks())
      throw ConfigError("block reduction: block index out of range");
  }

  Floorplan fp_;
  Grid grid_;
  std::vector<std::vector<std::pair<int, double>>> cover_;  // per block
  std::vector<double> areas_;
  double active_thickness_ = 0;
};

// One-shot convenience wrappers; hot paths hold a FloorplanGrid instead.
inline PowerField rasterize_power(const Floorplan& fp,
                                  const Eigen::VectorXd& block_w,
                                  const Grid& grid) {
  return FloorplanGrid(fp, grid).rasterize(block_w);
}

inline double block_average(const ThermalField& f, const Floorplan& fp,
                            const std::string& block) {
  int b = fp.block_index(block);
  if (b < 0) throw ConfigError("unknown block '" + block + "'");
  return FloorplanGrid(fp, f.grid).block_average(f, b);
}

inline double block_peak(const ThermalField& f, const Floorplan& fp,
                         const std::string& block) {
  int b = fp.block_index(block);
  if (b < 0) throw ConfigError("unknown block '" + block + "'");
  return FloorplanGrid(fp, f.grid).block_peak(f, b);
}

}  // namespace podtas
