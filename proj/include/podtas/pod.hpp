// Proper orthogonal decomposition by the method of snapshots, weighted by
// the cell-volume inner product <u,v> = sum_i u_i v_i V_i. The Gram matrix
// K_kl = (1/Ns) <T_k, T_l> is dense symmetric PSD; its eigenpairs give the
// modes phi_j = (1/sqrt(Ns lambda_j)) sum_k v_jk T_k, orthonormal in <.,.>.
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <iostream>

#include "podtas/fields.hpp"
#include "podtas/snapshots.hpp"
#include "podtas/types.hpp"

namespace podtas {

struct PodBasis {
  Grid grid;
  double cell_w = 0;            // quadrature weight, the uniform cell volume
  bool centered = false;
  Eigen::VectorXd mean;         // empty unless centered
  Eigen::VectorXd spectrum;     // all snapshot eigenvalues, descending
  Eigen::MatrixXd modes;        // n_cells x M, columns W-orthonormal

  int m() const { return static_cast<int>(modes.cols()); }
  Eigen::VectorXd eigenvalues() const { return spectrum.head(m()); }
};

// Eigenvalues below eps_rank * lambda_1 span numerically void directions and
// are never lifted to modes, even if more were requested.
inline PodBasis train_pod(const SnapshotSet& ss, int n_modes,
                          bool centered = false,
                          double eps_rank = 1e-12) {
  ss.validate();
  const int ns = ss.count();
  if (ns < 2) throw ConfigError("train_pod: need at least 2 snapshots");
  if (n_modes < 1) throw ConfigError("train_pod: need at least 1 mode");
  if (n_modes > ns)
    throw ConfigError("train_pod: " + std::to_string(n_modes) +
                      " modes requested but only " + std::to_string(ns) +
                      " snapshots were captured");
  const int n = ss.grid.n_cells();
  Eigen::MatrixXd x(n, ns);
  for (int k = 0; k < ns; ++k) x.col(k) = ss.fields[k];
  PodBasis basis;
  basis.grid = ss.grid;
  basis.cell_w = ss.grid.cell_volume();
  basis.centered = centered;
  if (centered) {
    basis.mean = x.rowwise().mean();
    x.colwise() -= basis.mean;
  }
  Eigen::MatrixXd gram = (basis.cell_w / ns) * (x.transpose() * x);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  if (es.info() != Eigen::Success)
    throw NumericError("train_pod: eigensolver failed");
  basis.spectrum = es.eigenvalues().reverse();  // descending
  const double lead = basis.spectrum[0];
  if (!(lead > 0)) throw NumericError("train_pod: snapshot energy is zero");
  int usable = 0;
  while (usable < ns && basis.spectrum[usable] > eps_rank * lead) ++usable;
  int m = n_modes;
  if (m > usable) {
    std::cerr << "train_pod: only " << usable << " of " << n_modes
              << " requested modes are above the rank floor; truncating\n";
    m = usable;
  }
  basis.modes.resize(n, m);
  for (int j = 0; j < m; ++j) {
    // Eigenvectors come back ascending; column ns-1-j pairs with spectrum[j].
    basis.modes.col(j) = x * es.eigenvectors().col(ns - 1 - j) /
                         std::sqrt(ns * basis.spectrum[j]);
  }
  return basis;
}

inline Eigen::VectorXd project(const PodBasis& basis,
                               const Eigen::VectorXd& field) {
  if (field.size() != basis.grid.n_cells())
    throw ConfigError("project: field size mismatch");
  if (basis.centered)
    return basis.cell_w * (basis.modes.transpose() * (field - basis.mean));
  return basis.cell_w * (basis.modes.transpose() * field);
}

inline Eigen::VectorXd project(const PodBasis& basis, const ThermalField& f) {
  if (!f.grid.same_as(basis.grid))
    throw ConfigError("project: field grid differs from basis grid");
  return project(basis, f.t_c);
}

inline ThermalField reconstruct(const PodBasis& basis,
                                const Eigen::VectorXd& a) {
  if (a.size() != basis.m())
    throw ConfigError("reconstruct: coefficient count mismatch");
  Eigen::VectorXd t = basis.modes * a;
  if (basis.centered) t += basis.mean;
  return {basis.grid, std::move(t)};
}

// Relative L2 error of a prediction against the truth, in percent:
// 100 * sqrt(sum (T_i - P_i)^2 / sum T_i^2).
inline double lse_percent(const Eigen::VectorXd& predicted,
                          const Eigen::VectorXd& truth) {
  if (predicted.size() != truth.size())
    throw ConfigError("lse_percent: size mismatch");
  double denom = truth.squaredNorm();
  if (!(denom > 0)) throw NumericError("lse_percent: zero reference field");
  return 100.0 * std::sqrt((truth - predicted).squaredNorm() / denom);
}

inline double lse_percent(const ThermalField& predicted,
                          const ThermalField& truth) {
  if (!predicted.grid.same_as(truth.grid))
    throw ConfigError("lse_percent: grids differ");
  return lse_percent(predicted.t_c, truth.t_c);
}

}  // namespace podtas
