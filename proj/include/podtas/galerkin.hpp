// Galerkin projection of the discrete heat operator onto a POD basis, and
// implicit Euler integration of the resulting reduced ODE
//
//   c da/dt + g a = B p(t) + f
//
// with c = Phi^T M Phi, g = Phi^T A Phi, B the per-block power injection and
// f the ambient forcing. The projection reuses the oracle's own assembled
// operator, so the ROM and the oracle disagree only through truncation.
#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "podtas/dns.hpp"
#include "podtas/pod.hpp"
#include "podtas/power_timeline.hpp"

namespace podtas {

struct RomOperators {
  std::vector<std::string> blocks;  // column order of power_in
  Eigen::MatrixXd c;                // M x M, reduced heat capacity
  Eigen::MatrixXd g;                // M x M, reduced conduction + sink
  Eigen::VectorXd forcing;          // ambient (and mean, if centered) terms
  Eigen::MatrixXd power_in;         // M x n_blocks

  int m() const { return static_cast<int>(c.rows()); }
};

inline RomOperators assemble_galerkin(const PodBasis& basis,
                                      const Material& mat,
                                      const BoundaryConfig& bc,
                                      const Floorplan& fp) {
  DiscreteOperator op = assemble_operator(basis.grid, mat, bc);
  FloorplanGrid map(fp, basis.grid);
  const auto& phi = basis.modes;
  RomOperators rom;
  rom.blocks = fp.block_names();
  rom.c = phi.transpose() * op.mass.asDiagonal() * phi;
  rom.g = phi.transpose() * (op.stiffness * phi);
  Eigen::VectorXd f = op.ambient_rhs;
  if (basis.centered) f -= op.stiffness * basis.mean;
  rom.forcing = phi.transpose() * f;
  rom.power_in.resize(basis.m(), fp.n_blocks());
  const double vol = basis.grid.cell_volume();
  for (int b = 0; b < fp.n_blocks(); ++b) {
    Eigen::VectorXd col = Eigen::VectorXd::Zero(basis.m());
    for (const auto& [cell, dens] : map.unit_density(b))
      col += phi.row(cell).transpose() * (dens * vol);
    rom.power_in.col(b) = col;
  }
  return rom;
}

// Fixed-step implicit Euler on the reduced system; the small dense operator
// (c + dt g) is factored once.
class RomStepper {
 public:
  RomStepper(const RomOperators& ops, double dt) : ops_(ops), dt_(dt) {
    if (!(dt > 0)) throw ConfigError("rom stepper: dt must be positive");
    lhs_.compute(ops.c + dt * ops.g);
    if (lhs_.info() != Eigen::Success)
      throw NumericError("rom stepper: reduced operator not SPD");
  }

  double dt() const { return dt_; }

  Eigen::VectorXd advance(const Eigen::VectorXd& a,
                          const Eigen::VectorXd& block_w) const {
    Eigen::VectorXd rhs =
        ops_.c * a + dt_ * (ops_.power_in * block_w + ops_.forcing);
    return lhs_.solve(rhs);
  }

  // Equilibrium coefficients for a constant wattage vector: g a = B p + f.
  Eigen::VectorXd steady(const Eigen::VectorXd& block_w) const {
    return Eigen::LLT<Eigen::MatrixXd>(ops_.g).solve(
        ops_.power_in * block_w + ops_.forcing);
  }

 private:
  const RomOperators& ops_;
  double dt_;
  Eigen::LLT<Eigen::MatrixXd> lhs_;
};

struct RomTrajectory {
  double dt = 0;
  std::vector<double> t;
  Eigen::MatrixXd a;  // (steps + 1) x M, row per time
};

// Integrates from a0 over [0, t_end], zero-order holding the trace at each
// step's start time.
inline RomTrajectory integrate_rom(const RomOperators& ops,
                                   const Eigen::VectorXd& a0,
                                   const PowerTimeline& trace, double dt,
                                   double t_end) {
  if (a0.size() != ops.m())
    throw ConfigError("integrate_rom: initial coefficient size mismatch");
  if (static_cast<int>(trace.blocks.size()) != ops.power_in.cols())
    throw ConfigError("integrate_rom: trace block count mismatch");
  RomStepper stepper(ops, dt);
  const int steps = int(std::llround(t_end / dt));
  RomTrajectory out;
  out.dt = dt;
  out.a.resize(steps + 1, ops.m());
  out.a.row(0) = a0;
  out.t.push_back(0);
  Eigen::VectorXd a = a0;
  for (int n = 0; n < steps; ++n) {
    a = stepper.advance(a, trace.value_at(n * dt));
    out.a.row(n + 1) = a;
    out.t.push_back((n + 1) * dt);
  }
  return out;
}

}  // namespace podtas
