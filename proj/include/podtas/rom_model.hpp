// The trained reduced model as a single versioned binary artifact: basis,
// reduced operators, and the solver configuration they were built against.
#pragma once

#include <string>

#include "podtas/binary_io.hpp"
#include "podtas/galerkin.hpp"
#include "podtas/pod.hpp"
#include "podtas/types.hpp"

namespace podtas {

struct RomModel {
  Grid grid;
  Material material;
  BoundaryConfig bc;
  PodBasis basis;
  RomOperators ops;

  // Coefficients describing a uniform-ambient chip, the standard start state.
  Eigen::VectorXd ambient_coeffs() const {
    return project(basis,
                   Eigen::VectorXd::Constant(grid.n_cells(), bc.ambient_c));
  }

  void validate() const {
    grid.validate();
    material.validate();
    bc.validate();
    if (!basis.grid.same_as(grid))
      throw ConfigError("rom model: basis grid mismatch");
    if (ops.m() != basis.m())
      throw ConfigError("rom model: operator/basis mode count mismatch");
  }
};

namespace detail {
inline constexpr char kRomMagic[8] = {'P', 'O', 'D', 'R', 'O', 'M', '0', '1'};
}

inline void save_rom(const RomModel& model, const std::string& path) {
  model.validate();
  BinaryWriter w(path, detail::kRomMagic, 1);
  w.i32(model.grid.nx);
  w.i32(model.grid.ny);
  w.i32(model.grid.nz);
  w.f64(model.grid.dx);
  w.f64(model.grid.dy);
  w.f64(model.grid.dz);
  w.i32(model.grid.active_lo);
  w.i32(model.grid.active_hi);
  w.f64(model.material.conductivity_w_mk);
  w.f64(model.material.density_kg_m3);
  w.f64(model.material.specific_heat_j_kgk);
  w.f64(model.bc.htc_w_m2k);
  w.f64(model.bc.ambient_c);
  w.u32(model.basis.centered ? 1 : 0);
  w.f64(model.basis.cell_w);
  w.vec(model.basis.centered ? model.basis.mean : Eigen::VectorXd());
  w.vec(model.basis.spectrum);
  w.mat(model.basis.modes);
  w.u32(static_cast<uint32_t>(model.ops.blocks.size()));
  for (const auto& b : model.ops.blocks) w.str(b);
  w.mat(model.ops.c);
  w.mat(model.ops.g);
  w.vec(model.ops.forcing);
  w.mat(model.ops.power_in);
  w.close();
}

inline RomModel load_rom(const std::string& path) {
  BinaryReader r(path, detail::kRomMagic, 1);
  RomModel m;
  m.grid.nx = r.i32();
  m.grid.ny = r.i32();
  m.grid.nz = r.i32();
  m.grid.dx = r.f64();
  m.grid.dy = r.f64();
  m.grid.dz = r.f64();
  m.grid.active_lo = r.i32();
  m.grid.active_hi = r.i32();
  m.material.conductivity_w_mk = r.f64();
  m.material.density_kg_m3 = r.f64();
  m.material.specific_heat_j_kgk = r.f64();
  m.bc.htc_w_m2k = r.f64();
  m.bc.ambient_c = r.f64();
  m.basis.grid = m.grid;
  m.basis.centered = r.u32() != 0;
  m.basis.cell_w = r.f64();
  m.basis.mean = r.vec();
  m.basis.spectrum = r.vec();
  m.basis.modes = r.mat();
  uint32_t nb = r.u32();
  for (uint32_t i = 0; i < nb; ++i) m.ops.blocks.push_back(r.str());
  m.ops.c = r.mat();
  m.ops.g = r.mat();
  m.ops.forcing = r.vec();
  m.ops.power_in = r.mat();
  m.validate();
  return m;
}

}  // namespace podtas
