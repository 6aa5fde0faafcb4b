// Floorplan: named rectangular blocks tiling the active layer, some of which
// are cores. File format, one block per line after the chip header:
//
//   chip <width_mm> <height_mm> <thickness_mm>
//   <name> <x_mm> <y_mm> <w_mm> <h_mm> [core]
//
// '#' starts a comment. Internally everything is meters.
#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "podtas/types.hpp"

namespace podtas {

struct Block {
  std::string name;
  double x = 0, y = 0, w = 0, h = 0;  // m, origin at chip corner
  bool is_core = false;

  double area() const { return w * h; }
};

struct Floorplan {
  double chip_w = 0, chip_h = 0, chip_t = 0;  // m
  std::vector<Block> blocks;

  int n_blocks() const { return static_cast<int>(blocks.size()); }

  int block_index(const std::string& name) const {
    for (int b = 0; b < n_blocks(); ++b)
      if (blocks[b].name == name) return b;
    return -1;
  }

  std::vector<int> core_indices() const {
    std::vector<int> out;
    for (int b = 0; b < n_blocks(); ++b)
      if (blocks[b].is_core) out.push_back(b);
    return out;
  }

  std::vector<std::string> block_names() const {
    std::vector<std::string> out;
    for (const auto& b : blocks) out.push_back(b.name);
    return out;
  }

  void validate() const {
    if (!(chip_w > 0) || !(chip_h > 0) || !(chip_t > 0))
      throw ConfigError("floorplan: chip dimensions must be positive");
    if (blocks.empty()) throw ConfigError("floorplan: no blocks");
    std::set<std::string> seen;
    for (const auto& b : blocks) {
      if (b.name.empty()) throw ConfigError("floorplan: unnamed block");
      if (!seen.insert(b.name).second)
        throw ConfigError("floorplan: duplicate block '" + b.name + "'");
      if (!(b.w > 0) || !(b.h > 0))
        throw ConfigError("floorplan: block '" + b.name +
                          "' has non-positive extent");
      const double eps = 1e-9;
      if (b.x < -eps || b.y < -eps || b.x + b.w > chip_w + eps ||
          b.y + b.h > chip_h + eps)
        throw ConfigError("floorplan: block '" + b.name +
                          "' extends outside the chip");
    }
    if (core_indices().empty()) throw ConfigError("floorplan: no core blocks");
    // Pairwise non-overlap; adjacency (shared edges) is fine.
    for (int a = 0; a < n_blocks(); ++a)
      for (int b = a + 1; b < n_blocks(); ++b) {
        const Block &p = blocks[a], &q = blocks[b];
        const double eps = 1e-9;
        double ox = std::min(p.x + p.w, q.x + q.w) - std::max(p.x, q.x);
        double oy = std::min(p.y + p.h, q.y + q.h) - std::max(p.y, q.y);
        if (ox > eps && oy > eps)
          throw ConfigError("floorplan: blocks '" + p.name + "' and '" +
                            q.name + "' overlap");
      }
  }
};

inline Floorplan parse_floorplan(std::istream& in, const std::string& origin) {
  Floorplan fp;
  std::string line;
  int lineno = 0;
  bool have_chip = false;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    auto fail = [&](const std::string& what) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + what);
    };
    if (first == "chip") {
      double w, h, t;
      if (!(ls >> w >> h >> t)) fail("malformed chip header");
      fp.chip_w = w * 1e-3;
      fp.chip_h = h * 1e-3;
      fp.chip_t = t * 1e-3;
      have_chip = true;
      continue;
    }
    if (!have_chip) fail("block before chip header");
    Block b;
    b.name = first;
    double x, y, w, h;
    if (!(ls >> x >> y >> w >> h)) fail("malformed block line");
    b.x = x * 1e-3;
    b.y = y * 1e-3;
    b.w = w * 1e-3;
    b.h = h * 1e-3;
    std::string tag;
    if (ls >> tag) {
      if (tag != "core") fail("unknown block tag '" + tag + "'");
      b.is_core = true;
    }
    fp.blocks.push_back(b);
  }
  fp.validate();
  return fp;
}

inline Floorplan load_floorplan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open floorplan '" + path + "'");
  return parse_floorplan(in, path);
}

inline void save_floorplan(const Floorplan& fp, std::ostream& out) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "chip %.17g %.17g %.17g\n", fp.chip_w * 1e3,
                fp.chip_h * 1e3, fp.chip_t * 1e3);
  out << buf;
  for (const auto& b : fp.blocks) {
    std::snprintf(buf, sizeof buf, "%s %.17g %.17g %.17g %.17g%s\n",
                  b.name.c_str(), b.x * 1e3, b.y * 1e3, b.w * 1e3, b.h * 1e3,
                  b.is_core ? " core" : "");
    out << buf;
  }
}

}  // namespace podtas
