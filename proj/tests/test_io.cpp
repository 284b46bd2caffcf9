// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

// File formats: field CSV/binary, JSON records, calibration round trip.

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "nlsp/calibration.hpp"
#include "nlsp/io.hpp"

using namespace nlsp;
namespace fs = std::filesystem;

namespace {

struct TmpDir {
  fs::path dir;
  TmpDir() : dir(fs::current_path() / "io_test_tmp") {
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  ~TmpDir() { fs::remove_all(dir); }
  std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

RadialField sample_field() {
  Grid g = make_grid(64, 5.0);
  return field_from(g, [](double r) {
    return cplx(std::exp(-r * r / 3.0), 0.25 * std::sin(2.0 * r));
  });
}

}  // namespace

TEST_CASE("csv field round trip preserves grid and values") {
  TmpDir t;
  RadialField f = sample_field();
  const std::string path = t / "f.csv";
  write_field_csv(path, f);
  RadialField g = read_field_csv(path);
  REQUIRE(g.grid->n == f.grid->n);
  CHECK(g.grid->r_max == doctest::Approx(f.grid->r_max).epsilon(1e-14));
  for (int i = 0; i < f.grid->n; ++i) {
    CHECK(g.v[i].real() == doctest::Approx(f.v[i].real()).epsilon(1e-15));
    CHECK(g.v[i].imag() == doctest::Approx(f.v[i].imag()).epsilon(1e-15));
  }
}

TEST_CASE("binary field round trip is exact") {
  TmpDir t;
  RadialField f = sample_field();
  const std::string path = t / "f.bin";
  write_field_bin(path, f);
  RadialField g = read_field_bin(path);
  REQUIRE(g.grid->n == f.grid->n);
  CHECK(g.grid->r_max == f.grid->r_max);
  for (int i = 0; i < f.grid->n; ++i) CHECK(g.v[i] == f.v[i]);
}

TEST_CASE("readers reject missing, malformed, and truncated files") {
  TmpDir t;
  CHECK_THROWS_AS(read_field_csv(t / "absent.csv"), Error);
  CHECK_THROWS_AS(read_field_bin(t / "absent.bin"), Error);

  {
    std::ofstream out(t / "empty.csv");
  }
  CHECK_THROWS_AS(read_field_csv(t / "empty.csv"), Error);

  {
    std::ofstream out(t / "garbage.csv");
    out << "r,re,im\n0.1,1.0,0.0\nnot-a-number,x,y\n";
  }
  CHECK_THROWS_AS(read_field_csv(t / "garbage.csv"), Error);

  {
    std::ofstream out(t / "short.csv");
    out << "r,re,im\n0.1,1.0,0.0\n";
  }
  CHECK_THROWS_AS(read_field_csv(t / "short.csv"), Error);

  {
    std::ofstream out(t / "jagged.csv");
    out << "r,re,im\n0.1,1.0,0.0\n0.2,1.0,0.0\n0.5,1.0,0.0\n";
  }
  CHECK_THROWS_AS(read_field_csv(t / "jagged.csv"), Error);

  {
    std::ofstream out(t / "trunc.bin", std::ios::binary);
    const std::uint64_t n = 100;
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    const double rmax = 5.0;
    out.write(reinterpret_cast<const char*>(&rmax), sizeof rmax);
    const double one = 1.0;
    out.write(reinterpret_cast<const char*>(&one), sizeof one);
  }
  CHECK_THROWS_AS(read_field_bin(t / "trunc.bin"), Error);

  {
    std::ofstream out(t / "bad.json");
    out << "{ not json";
  }
  CHECK_THROWS_AS(read_json_file(t / "bad.json"), Error);
}

TEST_CASE("json records carry the functional values under stable keys") {
  RadialField f = sample_field();
  Potential V = Potential::gaussian(1.0, 1.0);
  BareFunctionals b = evaluate_bare(f, V);
  njson jb = bare_record(b);
  CHECK(jb.at("mass").get<double>() == b.M);
  CHECK(jb.at("kinetic").get<double>() == b.H0);
  CHECK(jb.at("quartic").get<double>() == b.G);
  CHECK(jb.at("free_energy").get<double>() == b.E0);
  CHECK(jb.at("potential").get<double>() == b.Vq);
  CHECK(jb.at("energy").get<double>() == b.E);
  CHECK(jb.at("virial").get<double>() == b.K2);

  FrameFunctionals fr = evaluate_frame(f, V, 4.0);
  njson jf = frame_record(fr);
  CHECK(jf.at("om").get<double>() == fr.om);
  CHECK(jf.at("action").get<double>() == fr.Aom);
  CHECK(jf.at("virial").get<double>() == fr.K2om);
  CHECK(jf.at("stationary").get<double>() == fr.Jom);
}

TEST_CASE("json file round trip and manifest shape") {
  TmpDir t;
  njson j = {{"a", 1}, {"b", {{"c", 2.5}, {"d", "x"}}}, {"v", {1.0, 2.0, 3.0}}};
  const std::string path = t / "j.json";
  write_json_file(path, j);
  CHECK(read_json_file(path) == j);

  njson m = make_manifest("evolve", njson{{"om", 8.0}}, {"trace.csv", "u_final.bin"});
  CHECK(m.at("tool") == "nlsplab");
  CHECK(m.at("command") == "evolve");
  CHECK(m.at("params").at("om") == 8.0);
  CHECK(m.at("outputs").size() == 2);
}

TEST_CASE("calibration survives a json round trip unchanged") {
  Calibration c = load_calibration();
  // touch every block so defaults cannot mask a missing field
  c.om_work += 0.5;
  c.alpha = 2.125;
  c.thresholds.delta_star = 0.0175;
  c.vtable.d_lo = {0.0, 0.01, 0.05};
  c.vtable.eps_v = {0.25, 0.125, 0.0625};
  c.vtable.kappa_v = {1.5, 1.25, 1.125};

  Calibration r = calibration_from_json(calibration_json(c));
  CHECK(r.static_n == c.static_n);
  CHECK(r.static_rmax == c.static_rmax);
  CHECK(r.dyn_n == c.dyn_n);
  CHECK(r.dyn_rmax == c.dyn_rmax);
  CHECK(r.pot.family == c.pot.family);
  CHECK(r.pot.c == c.pot.c);
  CHECK(r.pot.sigma == c.pot.sigma);
  CHECK(r.pot.a == c.pot.a);
  CHECK(r.pot_gauss.c == c.pot_gauss.c);
  CHECK(r.window_core.c_min == c.window_core.c_min);
  CHECK(r.window_core.c_max == c.window_core.c_max);
  CHECK(r.om_star == c.om_star);
  CHECK(r.z_star == c.z_star);
  CHECK(r.om_work == c.om_work);
  CHECK(r.alpha == c.alpha);
  CHECK(r.nu_plus == c.nu_plus);
  CHECK(r.nu_minus == c.nu_minus);
  CHECK(r.soliton_residual == c.soliton_residual);
  CHECK(r.pencil_residual == c.pencil_residual);
  CHECK(r.thresholds.delta_D == c.thresholds.delta_D);
  CHECK(r.thresholds.delta_star == c.thresholds.delta_star);
  CHECK(r.thresholds.C_M == c.thresholds.C_M);
  CHECK(r.thresholds.window_per_alpha == c.thresholds.window_per_alpha);
  CHECK(r.vtable.d_lo == c.vtable.d_lo);
  CHECK(r.vtable.eps_v == c.vtable.eps_v);
  CHECK(r.vtable.kappa_v == c.vtable.kappa_v);

  // a file-based round trip through the environment override reader
  TmpDir t;
  write_json_file(t / "cal.json", calibration_json(c));
  Calibration f = calibration_from_json(read_json_file(t / "cal.json"));
  CHECK(f.om_work == c.om_work);
  CHECK(f.vtable.eps_v == c.vtable.eps_v);
}
