// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "nlsp/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "nlsp/common.hpp"

namespace nlsp {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode) {
  std::ofstream out(path, mode);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

std::ifstream open_in(const std::string& path, std::ios::openmode mode) {
  std::ifstream in(path, mode);
  if (!in) throw Error("cannot open for reading: " + path);
  return in;
}

// All field files assume little-endian f64 hosts; refuse to guess otherwise.
void require_little_endian() {
  const uint16_t probe = 1;
  uint8_t lo;
  std::memcpy(&lo, &probe, 1);
  if (lo != 1) throw Error("field binary format requires a little-endian host");
}

}  // namespace

void write_field_csv(const std::string& path, const RadialField& f) {
  auto out = open_out(path, std::ios::out);
  out.precision(17);
  out << "r,re,im\n";
  for (int i = 0; i < f.n(); ++i) {
    out << f.grid->r[i] << ',' << f.v[i].real() << ',' << f.v[i].imag() << '\n';
  }
  if (!out) throw Error("write failed: " + path);
}

RadialField read_field_csv(const std::string& path) {
  auto in = open_in(path, std::ios::in);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty field file: " + path);
  std::vector<double> rs;
  std::vector<cplx> vs;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    double r, re, im;
    char c1, c2;
    if (!(row >> r >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',') {
      throw Error("malformed field row in " + path + ": " + line);
    }
    rs.push_back(r);
    vs.push_back(cplx(re, im));
  }
  const int n = static_cast<int>(rs.size());
  if (n < 2) throw Error("field file too short: " + path);
  const double h = rs[0];
  const double r_max = rs[n - 1];
  for (int i = 0; i < n; ++i) {
    if (std::abs(rs[i] - (i + 1) * h) > 1e-9 * r_max) {
      throw Error("non-uniform r column in " + path);
    }
  }
  RadialField f(make_grid(n, r_max));
  f.v = std::move(vs);
  return f;
}

void write_field_bin(const std::string& path, const RadialField& f) {
  require_little_endian();
  auto out = open_out(path, std::ios::out | std::ios::binary);
  const uint64_t n = static_cast<uint64_t>(f.n());
  const double r_max = f.grid->r_max;
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  out.write(reinterpret_cast<const char*>(&r_max), sizeof r_max);
  for (int i = 0; i < f.n(); ++i) {
    const double re = f.v[i].real(), im = f.v[i].imag();
    out.write(reinterpret_cast<const char*>(&re), sizeof re);
    out.write(reinterpret_cast<const char*>(&im), sizeof im);
  }
  if (!out) throw Error("write failed: " + path);
}

RadialField read_field_bin(const std::string& path) {
  require_little_endian();
  auto in = open_in(path, std::ios::in | std::ios::binary);
  uint64_t n = 0;
  double r_max = 0.0;
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  in.read(reinterpret_cast<char*>(&r_max), sizeof r_max);
  if (!in || n < 2 || n > (1u << 26) || !(r_max > 0.0)) {
    throw Error("bad field header in " + path);
  }
  RadialField f(make_grid(static_cast<int>(n), r_max));
  for (uint64_t i = 0; i < n; ++i) {
    double re, im;
    in.read(reinterpret_cast<char*>(&re), sizeof re);
    in.read(reinterpret_cast<char*>(&im), sizeof im);
    f.v[i] = cplx(re, im);
  }
  if (!in) throw Error("truncated field file: " + path);
  return f;
}

njson bare_record(const BareFunctionals& b) {
  return njson{{"mass", b.M},          {"kinetic", b.H0}, {"quartic", b.G},
               {"free_energy", b.E0},  {"potential", b.Vq}, {"energy", b.E},
               {"virial", b.K2}};
}

njson frame_record(const FrameFunctionals& f) {
  return njson{{"om", f.om},          {"mass", f.M},       {"kinetic", f.H0},
               {"quartic", f.G},      {"free_energy", f.E0}, {"potential", f.Vom},
               {"energy", f.Eom},     {"action", f.Aom},   {"virial", f.K2om},
               {"stationary", f.Jom}};
}

void write_json_file(const std::string& path, const njson& j) {
  auto out = open_out(path, std::ios::out);
  out << j.dump(2) << '\n';
  if (!out) throw Error("write failed: " + path);
}

njson read_json_file(const std::string& path) {
  auto in = open_in(path, std::ios::in);
  njson j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error("bad json in " + path + ": " + e.what());
  }
  return j;
}

njson make_manifest(const std::string& command, const njson& params,
                    const std::vector<std::string>& outputs) {
  return njson{{"tool", "nlsplab"}, {"command", command}, {"params", params},
               {"outputs", outputs}};
}

}  // namespace nlsp
