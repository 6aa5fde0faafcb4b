// Finite-volume oracle for the chip: 3D transient conduction on the uniform
// grid, insulated faces except a convective bottom, implicit Euler stepping.
//
// Discretely: M dT/dt + A T = q, with M = diag(rho C V) and A the 7-point
// conduction stiffness plus the bottom-face Robin term folded in through a
// series conductance U = 1/(1/h + dz/(2k)) between the bottom cell center
// and the sink.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <functional>
#include <optional>

#include "podtas/fields.hpp"
#include "podtas/power_timeline.hpp"
#include "podtas/snapshots.hpp"
#include "podtas/types.hpp"

namespace podtas {

struct DiscreteOperator {
  Eigen::SparseMatrix<double> stiffness;  // A, SPD
  Eigen::VectorXd mass;                   // rho C V per cell
  Eigen::VectorXd ambient_rhs;            // U A_xy T_amb on bottom cells
  double bottom_ua = 0;                   // U * A_xy, per bottom cell
};

inline DiscreteOperator assemble_operator(const Grid& g, const Material& mat,
                                          const BoundaryConfig& bc) {
  g.validate();
  mat.validate();
  bc.validate();
  const int n = g.n_cells();
  const double k = mat.conductivity_w_mk;
  const double gx = k * g.dy * g.dz / g.dx;  // face conductances, W/K
  const double gy = k * g.dx * g.dz / g.dy;
  const double gz = k * g.dx * g.dy / g.dz;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(size_t(n) * 7);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  auto face = [&](int a, int b, double cond) {
    diag[a] += cond;
    diag[b] += cond;
    trip.emplace_back(a, b, -cond);
    trip.emplace_back(b, a, -cond);
  };
  for (int kk = 0; kk < g.nz; ++kk)
    for (int j = 0; j < g.ny; ++j)
      for (int i = 0; i < g.nx; ++i) {
        int c = g.index(i, j, kk);
        if (i + 1 < g.nx) face(c, g.index(i + 1, j, kk), gx);
        if (j + 1 < g.ny) face(c, g.index(i, j + 1, kk), gy);
        if (kk + 1 < g.nz) face(c, g.index(i, j, kk + 1), gz);
      }
  DiscreteOperator op;
  // Sink coupling: film h in series with half a cell of conduction.
  const double u = 1.0 / (1.0 / bc.htc_w_m2k +
                          g.dz / (2.0 * mat.conductivity_w_mk));
  op.bottom_ua = u * g.dx * g.dy;
  op.ambient_rhs = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      int c = g.index(i, j, 0);
      diag[c] += op.bottom_ua;
      op.ambient_rhs[c] = op.bottom_ua * bc.ambient_c;
    }
  for (int c = 0; c < n; ++c) trip.emplace_back(c, c, diag[c]);
  op.stiffness.resize(n, n);
  op.stiffness.setFromTriplets(trip.begin(), trip.end());
  op.mass = Eigen::VectorXd::Constant(n, mat.volumetric_heat() *
                                             g.cell_volume());
  return op;
}

class DnsSolver {
 public:
  DnsSolver(const Grid& g, const Material& mat, const BoundaryConfig& bc,
            double steady_tol = 1e-8)
      : grid_(g),
        mat_(mat),
        bc_(bc),
        steady_tol_(steady_tol),
        op_(assemble_operator(g, mat, bc)),
        state_(ThermalField::uniform(g, bc.ambient_c)) {}

  const Grid& grid() const { return grid_; }
  const Material& material() const { return mat_; }
  const BoundaryConfig& boundary() const { return bc_; }
  const DiscreteOperator& op() const { return op_; }
  const ThermalField& field() const { return state_; }
  double time() const { return time_; }

  void reset(const ThermalField* restart = nullptr) {
    if (restart) {
      if (!restart->grid.same_as(grid_))
        throw ConfigError("restart field grid differs from solver grid");
      state_ = *restart;
    } else {
      state_ = ThermalField::uniform(grid_, bc_.ambient_c);
    }
    time_ = 0;
  }

  // One implicit Euler step: (M/dt + A) T' = (M/dt) T + V p + ambient.
  // The factorization is reused while dt stays the same.
  void step(const PowerField& p, double dt) {
    if (!(dt > 0)) throw ConfigError("step: dt must be positive");
    if (!p.grid.same_as(grid_)) throw ConfigError("step: power grid differs");
    if (dt != step_dt_) {
      Eigen::SparseMatrix<double> lhs = op_.stiffness;
      Eigen::VectorXd md = op_.mass / dt;
      for (int c = 0; c < grid_.n_cells(); ++c) lhs.coeffRef(c, c) += md[c];
      stepper_.compute(lhs);
      if (stepper_.info() != Eigen::Success)
        throw NumericError("step: factorization failed");
      step_dt_ = dt;
    }
    Eigen::VectorXd rhs = (op_.mass.array() / dt) * state_.t_c.array();
    rhs += p.density_w_m3 * grid_.cell_volume() + op_.ambient_rhs;
    state_.t_c = stepper_.solve(rhs);
    if (!state_.t_c.allFinite())
      throw NumericError("step: non-finite temperature field");
    time_ += dt;
  }

  // Direct solve of A T = V p + ambient. The residual is checked against the
  // configured tolerance; a direct factorization leaves it near round-off.
  ThermalField solve_steady(const PowerField& p) const {
    if (!p.grid.same_as(grid_))
      throw ConfigError("solve_steady: power grid differs");
    if (!steady_) {
      steady_.emplace();
      steady_->compute(op_.stiffness);
      if (steady_->info() != Eigen::Success)
        throw NumericError("solve_steady: factorization failed");
    }
    Eigen::VectorXd rhs =
        p.density_w_m3 * grid_.cell_volume() + op_.ambient_rhs;
    Eigen::VectorXd x = steady_->solve(rhs);
    double res = (op_.stiffness * x - rhs).norm() /
                 std::max(rhs.norm(), 1e-300);
    if (!x.allFinite() || res > steady_tol_) {
      char buf[128];
      std::snprintf(buf, sizeof buf,
                    "solve_steady: residual %.3e exceeds %.3e", res,
                    steady_tol_);
      throw NumericError(buf);
    }
    return {grid_, std::move(x)};
  }

  // Heat leaving through the sink, W.
  double convective_outflow_w(const ThermalField& f) const {
    double q = 0;
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i)
        q += op_.bottom_ua * (f.t_c[grid_.index(i, j, 0)] - bc_.ambient_c);
    return q;
  }

 private:
  Grid grid_;
  Material mat_;
  BoundaryConfig bc_;
  double steady_tol_;
  DiscreteOperator op_;
  ThermalField state_;
  double time_ = 0;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> stepper_;
  double step_dt_ = -1;
  mutable std::optional<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>
      steady_;
};

inline ThermalField solve_steady(const Grid& g, const Material& mat,
                                 const BoundaryConfig& bc,
                                 const PowerField& p) {
  return DnsSolver(g, mat, bc).solve_steady(p);
}

// Marches the trace from t = 0 with fixed dt (power held over each step from
// its start time) and records the initial field plus every stride-th step.
inline SnapshotSet run_transient(DnsSolver& solver, const PowerTimeline& trace,
                                 const FloorplanGrid& map, double t_end,
                                 double dt, int stride,
                                 const ThermalField* restart = nullptr) {
  if (!(dt > 0) || !(t_end > 0) || stride < 1)
    throw ConfigError("run_transient: bad dt, horizon, or stride");
  trace.validate();
  solver.reset(restart);
  TimelinePowerProvider power(trace, map);
  SnapshotSet ss;
  ss.grid = solver.grid();
  ss.material = solver.material();
  ss.bc = solver.boundary();
  ss.dt_s = dt;
  ss.trace = trace;
  ss.trace.t_end_s = std::max(ss.trace.t_end_s, t_end);
  ss.t.push_back(0);
  ss.fields.push_back(solver.field().t_c);
  const int steps = int(std::llround(t_end / dt));
  for (int n = 0; n < steps; ++n) {
    solver.step(power.at(n * dt), dt);  // integer multiples avoid drift
    if ((n + 1) % stride == 0 || n + 1 == steps) {
      ss.t.push_back((n + 1) * dt);
      ss.fields.push_back(solver.field().t_c);
    }
  }
  return ss;
}

}  // namespace podtas
