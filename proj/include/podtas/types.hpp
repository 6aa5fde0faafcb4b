// Core value types shared across the library: cell grid, material, boundary
// condition, and the error taxonomy the CLI maps to exit codes.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace podtas {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform structured grid over the chip volume. Cells are stored z-major,
// then y, then x: index = (k*ny + j)*nx + i. The active (heat dissipating)
// layer is the contiguous z-index range [active_lo, active_hi]; everything
// below conducts only.
struct Grid {
  int nx = 0, ny = 0, nz = 0;
  double dx = 0, dy = 0, dz = 0;  // cell size, m
  int active_lo = 0, active_hi = 0;

  int n_cells() const { return nx * ny * nz; }
  int n_plane() const { return nx * ny; }
  int index(int i, int j, int k) const { return (k * ny + j) * nx + i; }
  bool active_layer(int k) const { return k >= active_lo && k <= active_hi; }
  double cell_volume() const { return dx * dy * dz; }
  double width() const { return nx * dx; }
  double height() const { return ny * dy; }
  double thickness() const { return nz * dz; }

  void validate() const {
    if (nx < 1 || ny < 1 || nz < 1)
      throw ConfigError("grid: cell counts must be positive");
    if (!(dx > 0) || !(dy > 0) || !(dz > 0))
      throw ConfigError("grid: cell sizes must be positive");
    if (active_lo < 0 || active_hi >= nz || active_lo > active_hi)
      throw ConfigError("grid: active layer range out of bounds");
  }

  bool same_as(const Grid& o) const {
    return nx == o.nx && ny == o.ny && nz == o.nz && dx == o.dx &&
           dy == o.dy && dz == o.dz && active_lo == o.active_lo &&
           active_hi == o.active_hi;
  }
};

// Uniform solid properties (silicon-ish defaults live in config.hpp).
struct Material {
  double conductivity_w_mk = 0;   // k
  double density_kg_m3 = 0;       // rho
  double specific_heat_j_kgk = 0; // C

  double volumetric_heat() const { return density_kg_m3 * specific_heat_j_kgk; }

  void validate() const {
    if (!(conductivity_w_mk > 0) || !(density_kg_m3 > 0) ||
        !(specific_heat_j_kgk > 0))
      throw ConfigError("material: properties must be positive");
  }
};

// Convective sink on the bottom face, insulated everywhere else.
struct BoundaryConfig {
  double htc_w_m2k = 0;  // film coefficient h into the sink
  double ambient_c = 0;

  void validate() const {
    if (!(htc_w_m2k > 0)) throw ConfigError("boundary: htc must be positive");
    if (!std::isfinite(ambient_c))
      throw ConfigError("boundary: ambient must be finite");
  }
};

}  // namespace podtas
