// Static thermal coupling: one steady oracle solve per block with 1 W in
// that block alone calibrates a matrix of block-average temperature rises,
// after which steady temperatures for any wattage vector are a single
// matrix-vector product. Superposition makes this exact for the linear
// oracle, up to solver round-off.
//
// File format:
//
//   podtas-coupling 1
//   ambient_c <v>
//   blocks <name> ...
//   <name> <theta_i1> <theta_i2> ...   (degC per W, row per block)
#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <sstream>

#include "podtas/dns.hpp"
#include "podtas/fields.hpp"
#include "podtas/floorplan.hpp"

namespace podtas {

struct CouplingMatrix {
  std::vector<std::string> blocks;
  double ambient_c = 0;
  Eigen::MatrixXd theta;  // (i,j): rise of block i per W in block j

  int n_blocks() const { return static_cast<int>(blocks.size()); }

  void validate() const {
    if (blocks.empty()) throw ConfigError("coupling: no blocks");
    if (theta.rows() != n_blocks() || theta.cols() != n_blocks())
      throw ConfigError("coupling: matrix shape mismatch");
    if (!theta.allFinite()) throw NumericError("coupling: non-finite entry");
  }
};

inline CouplingMatrix calibrate_coupling(const Grid& grid, const Material& mat,
                                         const BoundaryConfig& bc,
                                         const Floorplan& fp) {
  DnsSolver solver(grid, mat, bc);  // one factorization serves every column
  FloorplanGrid map(fp, grid);
  CouplingMatrix cm;
  cm.blocks = fp.block_names();
  cm.ambient_c = bc.ambient_c;
  const int nb = fp.n_blocks();
  cm.theta.resize(nb, nb);
  for (int j = 0; j < nb; ++j) {
    Eigen::VectorXd unit = Eigen::VectorXd::Zero(nb);
    unit[j] = 1.0;
    ThermalField t = solver.solve_steady(map.rasterize(unit));
    for (int i = 0; i < nb; ++i)
      cm.theta(i, j) = map.block_average(t, i) - bc.ambient_c;
  }
  return cm;
}

// Steady block-average temperatures for a constant wattage vector.
inline Eigen::VectorXd predict_block_temps(const CouplingMatrix& cm,
                                           const Eigen::VectorXd& block_w) {
  if (block_w.size() != cm.n_blocks())
    throw ConfigError("predict: wattage vector size mismatch");
  return Eigen::VectorXd::Constant(cm.n_blocks(), cm.ambient_c) +
         cm.theta * block_w;
}

inline void save_coupling(const CouplingMatrix& cm, std::ostream& out) {
  cm.validate();
  char buf[64];
  out << "podtas-coupling 1\n";
  std::snprintf(buf, sizeof buf, "ambient_c %.17g\n", cm.ambient_c);
  out << buf;
  out << "blocks";
  for (const auto& b : cm.blocks) out << " " << b;
  out << "\n";
  for (int i = 0; i < cm.n_blocks(); ++i) {
    out << cm.blocks[i];
    for (int j = 0; j < cm.n_blocks(); ++j) {
      std::snprintf(buf, sizeof buf, " %.17g", cm.theta(i, j));
      out << buf;
    }
    out << "\n";
  }
}

inline CouplingMatrix parse_coupling(std::istream& in,
                                     const std::string& origin) {
  CouplingMatrix cm;
  std::string key;
  int version = 0;
  in >> key >> version;
  if (!in || key != "podtas-coupling" || version != 1)
    throw ConfigError(origin + ": not a coupling matrix file");
  in >> key >> cm.ambient_c;
  if (!in || key != "ambient_c")
    throw ConfigError(origin + ": expected ambient_c");
  in >> key;
  if (!in || key != "blocks") throw ConfigError(origin + ": expected blocks");
  std::string rest;
  std::getline(in, rest);
  std::istringstream bs(rest);
  std::string name;
  while (bs >> name) cm.blocks.push_back(name);
  const int nb = cm.n_blocks();
  cm.theta.resize(nb, nb);
  for (int i = 0; i < nb; ++i) {
    in >> name;
    if (!in || name != cm.blocks[i])
      throw ConfigError(origin + ": row order differs from header");
    for (int j = 0; j < nb; ++j)
      if (!(in >> cm.theta(i, j)))
        throw ConfigError(origin + ": truncated matrix row");
  }
  cm.validate();
  return cm;
}

inline void save_coupling(const CouplingMatrix& cm, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  save_coupling(cm, out);
}

inline CouplingMatrix load_coupling(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse_coupling(in, path);
}

}  // namespace podtas
