// Shared fixtures for the unit suite: a small three-block chip that keeps
// solves fast, plus a reproducible uniform sampler.
#pragma once

#include <random>
#include <sstream>

#include "podtas/fields.hpp"
#include "podtas/floorplan.hpp"
#include "podtas/rom_model.hpp"
#include "podtas/tasks.hpp"
#include "podtas/types.hpp"

namespace testkit {

inline podtas::Material silicon() {
  return {130.0, 2330.0, 700.0};
}

inline podtas::BoundaryConfig sink() {
  return {8000.0, 45.0};
}

// 6 x 3 mm chip: two cores flanking a shared block, active top layer.
inline podtas::Floorplan small_floorplan() {
  std::istringstream in(
      "chip 6 3 0.3\n"
      "c0 0 0 2 3 core\n"
      "mem 2 0 2 3\n"
      "c1 4 0 2 3 core\n");
  return podtas::parse_floorplan(in, "small_floorplan");
}

inline podtas::Grid small_grid() {
  podtas::Grid g;
  g.nx = 12;
  g.ny = 6;
  g.nz = 3;
  g.dx = 0.5e-3;
  g.dy = 0.5e-3;
  g.dz = 0.1e-3;
  g.active_lo = g.active_hi = 2;
  return g;
}

// Scaled canonical vectors as a basis: W-orthonormal and spanning, so the
// reduced model reproduces the full-grid solver exactly. Scheduler and
// evaluation tests get an error-free model without any training transient.
inline podtas::PodBasis exact_basis(const podtas::Grid& g) {
  podtas::PodBasis b;
  b.grid = g;
  b.cell_w = g.cell_volume();
  b.centered = false;
  b.spectrum = Eigen::VectorXd::Ones(g.n_cells());
  b.modes = Eigen::MatrixXd::Identity(g.n_cells(), g.n_cells()) /
            std::sqrt(b.cell_w);
  return b;
}

inline podtas::RomModel small_rom() {
  podtas::RomModel m;
  m.grid = small_grid();
  m.material = silicon();
  m.bc = sink();
  m.basis = exact_basis(m.grid);
  m.ops = podtas::assemble_galerkin(m.basis, m.material, m.bc,
                                    small_floorplan());
  return m;
}

// Two hungry periodic tasks. On the small chip their core draw pushes the
// hottest cells well past the high-40s thresholds the scheduler tests use.
inline podtas::TaskSet hot_tasks() {
  std::istringstream in(
      "task burn0\n"
      "wcet_ms 40\n"
      "deadline_ms 100\n"
      "period_ms 120\n"
      "trace time_ms,c0,mem\n"
      "0,1.2,0.1\n"
      "20,1.0,0.1\n"
      "end\n"
      "task burn1\n"
      "wcet_ms 40\n"
      "deadline_ms 100\n"
      "period_ms 120\n"
      "trace time_ms,c1,mem\n"
      "0,1.1,0.15\n"
      "end\n");
  return podtas::parse_tasks(in, "hot_tasks");
}

// mt19937_64 with a fixed mapping so draws are identical across platforms.
struct Rng {
  std::mt19937_64 gen;
  explicit Rng(uint64_t seed) : gen(seed) {}
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * ((gen() >> 11) * 0x1.0p-53);
  }
  int uniform_int(int lo, int hi) {  // inclusive
    return lo + int(gen() % uint64_t(hi - lo + 1));
  }
};

}  // namespace testkit
