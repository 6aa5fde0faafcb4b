// Minimal little-endian binary container plumbing for model files.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <fstream>
#include <string>

#include "podtas/types.hpp"

namespace podtas {

class BinaryWriter {
 public:
  BinaryWriter(const std::string& path, const char magic[8], uint32_t version)
      : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw ConfigError("cannot write '" + path + "'");
    out_.write(magic, 8);
    u32(version);
  }

  void u32(uint32_t v) { raw(&v, sizeof v); }
  void i32(int32_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }

  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    raw(s.data(), s.size());
  }

  void vec(const Eigen::VectorXd& v) {
    i32(static_cast<int32_t>(v.size()));
    raw(v.data(), sizeof(double) * v.size());
  }

  void mat(const Eigen::MatrixXd& m) {
    i32(static_cast<int32_t>(m.rows()));
    i32(static_cast<int32_t>(m.cols()));
    raw(m.data(), sizeof(double) * m.size());  // column major
  }

  void close() {
    out_.close();
    if (!out_) throw ConfigError("short write to '" + path_ + "'");
  }

 private:
  void raw(const void* p, size_t n) {
    out_.write(static_cast<const char*>(p), std::streamsize(n));
  }
  std::ofstream out_;
  std::string path_;
};

class BinaryReader {
 public:
  BinaryReader(const std::string& path, const char magic[8],
               uint32_t version)
      : in_(path, std::ios::binary), path_(path) {
    if (!in_) throw ConfigError("cannot open '" + path + "'");
    char got[8];
    raw(got, 8);
    if (std::string(got, 8) != std::string(magic, 8))
      throw ConfigError("'" + path + "' is not a " +
                        std::string(magic, 8) + " file");
    uint32_t v = u32();
    if (v != version)
      throw ConfigError("'" + path + "': unsupported version " +
                        std::to_string(v));
  }

  uint32_t u32() { uint32_t v; raw(&v, sizeof v); return v; }
  int32_t i32() { int32_t v; raw(&v, sizeof v); return v; }
  double f64() { double v; raw(&v, sizeof v); return v; }

  std::string str() {
    uint32_t n = u32();
    if (n > (1u << 20)) throw ConfigError("'" + path_ + "': oversized string");
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }

  Eigen::VectorXd vec() {
    int32_t n = i32();
    if (n < 0) throw ConfigError("'" + path_ + "': negative vector length");
    Eigen::VectorXd v(n);
    raw(v.data(), sizeof(double) * size_t(n));
    return v;
  }

  Eigen::MatrixXd mat() {
    int32_t r = i32(), c = i32();
    if (r < 0 || c < 0)
      throw ConfigError("'" + path_ + "': negative matrix extent");
    Eigen::MatrixXd m(r, c);
    raw(m.data(), sizeof(double) * size_t(r) * size_t(c));
    return m;
  }

 private:
  void raw(void* p, size_t n) {
    in_.read(static_cast<char*>(p), std::streamsize(n));
    if (!in_) throw ConfigError("'" + path_ + "' truncated");
  }
  std::ifstream in_;
  std::string path_;
};

}  // namespace podtas
