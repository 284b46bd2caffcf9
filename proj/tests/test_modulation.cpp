// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

// Modulation coordinates, distances, and the sign functional.

#include <cmath>

#include "doctest.h"
#include "nlsp/calibration.hpp"
#include "nlsp/functionals.hpp"
#include "nlsp/modulation.hpp"
#include "nlsp/solitons.hpp"

using namespace nlsp;

namespace {
struct Setup {
  Calibration cal;
  Grid g;
  Pencil p;
  Thresholds th;
  Setup()
      : cal(load_calibration()),
        g(make_grid(1024, 40.0)),
        p(build_pencil(g, compute_free_ground(g).Q, cal.pot, cal.om_work)),
        th(cal.thresholds) {}
};
const Setup& W() {
  static Setup s;
  return s;
}

RadialField phase_shift(const RadialField& f, double th) {
  return scaled(f, std::polar(1.0, th));
}
}  // namespace

TEST_CASE("instantaneous distance has its closed form") {
  const Setup& s = W();
  Rng rng(31);
  RadialField v = random_field(s.g, rng, 0.2);
  RadialField phi = added(s.p.Q, v);
  phi = phase_shift(phi, 0.7);
  Dist0 d = dist0(s.p, phi);
  // oracle: brute-force minimization over the phase circle
  double best = 1e300;
  for (int k = 0; k < 20000; ++k) {
    double th = 2.0 * M_PI * k / 20000.0;
    RadialField w = phase_shift(phi, -th);
    axpy(-1.0, s.p.Q, w);
    best = std::min(best, norm_h1sq(w));
  }
  CHECK(d.d0 * d.d0 == doctest::Approx(best).epsilon(1e-7));
  // the returned phase attains the minimum
  RadialField w = phase_shift(phi, -d.theta);
  axpy(-1.0, s.p.Q, w);
  CHECK(norm_h1sq(w) == doctest::Approx(d.d0 * d.d0).epsilon(1e-10));
}

TEST_CASE("decomposition: constraints, round trip, gauge covariance") {
  const Setup& s = W();
  const Pencil& p = s.p;
  Rng rng(41);
  RadialField v0 = random_field(s.g, rng, 0.05);
  RadialField phi = added(p.Q, v0);
  phi = phase_shift(phi, -0.4);
  Decomposition dec = decompose(p, phi);

  // gauge constraint <i v | Qp> = 0, i.e. (v2, Qp) = 0
  RadialField v2(s.g);
  for (int i = 0; i < s.g->n; ++i) v2.v[i] = dec.v.v[i].imag();
  CHECK(std::abs(rinner(v2, p.Qp)) <= 1e-9 * std::sqrt(norm_l2sq(dec.v) + 1e-300));

  // round trip: phi = e^{i theta} (Q + v)
  RadialField back = added(p.Q, dec.v);
  back = phase_shift(back, dec.theta);
  axpy(-1.0, phi, back);
  CHECK(std::sqrt(norm_h1sq(back)) <= 1e-10 * std::sqrt(norm_h1sq(phi)));

  // lambda coordinates match their closed forms
  RadialField v1(s.g);
  for (int i = 0; i < s.g->n; ++i) v1.v[i] = dec.v.v[i].real();
  double ip12 = rinner(v1, p.g2), ip21 = rinner(v2, p.g1);
  CHECK(dec.lp == doctest::Approx(-0.5 * p.alpha * (ip12 + ip21)).epsilon(1e-10));
  CHECK(dec.lm == doctest::Approx(-0.5 * p.alpha * (ip12 - ip21)).epsilon(1e-10));

  // the zeta remainder satisfies the spectral constraints
  RadialField zeta = dec.v;
  axpy(-dec.lp, added(p.g1, scaled(p.g2, cplx(0.0, 1.0))), zeta);
  axpy(-dec.lm, added(p.g1, scaled(p.g2, cplx(0.0, -1.0))), zeta);
  RadialField z1(s.g), z2(s.g);
  for (int i = 0; i < s.g->n; ++i) {
    z1.v[i] = zeta.v[i].real();
    z2.v[i] = zeta.v[i].imag();
  }
  CHECK(std::abs(rinner(z1, p.g2)) <= 1e-9);
  CHECK(std::abs(rinner(z2, p.g1)) <= 1e-9);

  // gauge covariance
  Decomposition dec2 = decompose(p, phase_shift(phi, 1.1));
  double dth = std::remainder(dec2.theta - dec.theta - 1.1, 2.0 * M_PI);
  CHECK(std::abs(dth) <= 1e-10);
  RadialField dv = dec2.v;
  axpy(-1.0, dec.v, dv);
  CHECK(norm_l2sq(dv) <= 1e-20);

  // instantaneous distance of the same state
  CHECK(dec.d0 == doctest::Approx(dist0(p, phi).d0).epsilon(1e-9));
}

TEST_CASE("decomposition guard throws far from the orbit") {
  const Setup& s = W();
  CHECK_THROWS_AS(decompose_near(s.p, scaled(s.p.Q, 3.0), s.th.delta_D), TooFarFromOrbit);
  RadialField near = s.p.Q;
  Rng rng(2);
  RadialField v = random_field(s.g, rng, 0.01);
  axpy(1.0, v, near);
  CHECK_NOTHROW(decompose_near(s.p, near, s.th.delta_D));
}

TEST_CASE("phase rate: soliton value and degenerate denominator") {
  const Setup& s = W();
  RadialField zero(s.g);
  CHECK(phase_rate(s.p, zero) == doctest::Approx(-1.0).epsilon(1e-12));
  // v = -Q sends Q + v to 0 and the chart denominator with it
  CHECK_THROWS_AS(phase_rate(s.p, scaled(s.p.Q, -1.0)), DegenerateDenominator);
}

TEST_CASE("mollified distance from samples: constant trace, window checks") {
  std::vector<double> t, e;
  for (int k = 0; k <= 80; ++k) {
    t.push_back(-2.0 + 0.05 * k);
    e.push_back(0.09);  // constant energy norm squared
  }
  CHECK(dist1_from_samples(t, e, 0.0) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK_THROWS_AS(dist1_from_samples({0.0, 0.1}, {1.0, 1.0}, 0.0), Error);
}

TEST_CASE("distance blend: bump shape and the two regimes") {
  CHECK(chi_bump(0.0) == doctest::Approx(1.0));
  CHECK(chi_bump(0.99) == doctest::Approx(1.0));
  CHECK(chi_bump(2.0) == doctest::Approx(0.0));
  CHECK(chi_bump(2.5) == doctest::Approx(0.0));
  double a = chi_bump(1.2), b = chi_bump(1.6), c = chi_bump(1.9);
  CHECK(a > b);
  CHECK(b > c);
  CHECK(c > 0.0);

  double dE = 0.25;
  CHECK(blend_dist(0.01, 0.05, dE) == doctest::Approx(0.05));      // deep inside: d1
  CHECK(blend_dist(0.9, 0.05, dE) == doctest::Approx(0.9));        // far out: d0
  double mid = blend_dist(0.4, 0.3, dE);                           // between: strict blend
  CHECK(mid > 0.3);
  CHECK(mid < 0.4);
}

TEST_CASE("virial table lookup") {
  VirialTable vt;
  vt.d_lo = {0.0, 0.1};
  vt.eps_v = {0.01, 0.02};
  vt.kappa_v = {0.005, 0.01};
  CHECK(vt.eps_at(0.05) == doctest::Approx(0.01));
  CHECK(vt.eps_at(0.15) == doctest::Approx(0.02));
  CHECK(vt.kappa_at(0.5) == doctest::Approx(0.01));
}

TEST_CASE("sign functional: the three cases and the domain guard") {
  const Setup& s = W();
  const Pencil& p = s.p;
  const VirialTable& vt = s.cal.vtable;

  // small case: a tiny multiple of Q has tiny mass and gradient
  CHECK(sign_functional(p, scaled(p.Q, 0.02), s.th, vt) == 1);

  // near case: the lambda1 reading on both sides of the orbit
  for (double sgn : {1.0, -1.0}) {
    RadialField gp = added(p.g1, scaled(p.g2, cplx(0.0, 1.0)));
    RadialField phi = p.Q;
    axpy(sgn * 0.004, gp, phi);
    CHECK(sign_functional(p, phi, s.th, vt) == (sgn > 0 ? 1 : -1));
  }

  // domain guard: an oscillatory ring far from the core adds a definitely
  // positive quadratic form (~k^2 per unit mass), lifting the action far
  // past the eps_S^2 window and past the c_X d^2 cap
  RadialField ring = field_from(s.g, [](double r) {
    return 2.0 * std::sin(10.0 * r) * std::exp(-(r - 15.0) * (r - 15.0));
  });
  RadialField noisy = added(p.Q, ring);
  CHECK_THROWS_AS(sign_functional(p, noisy, s.th, vt), SignDomain);
}

TEST_CASE("sign functional: virial case tracks the even-mode displacement") {
  const Setup& s = W();
  const Pencil& p = s.p;
  // moderate distance, outside the near window when possible
  double d_target = std::min(2.5 * s.th.delta_V, 0.5 * s.th.delta_E);
  double g1n = std::sqrt(norm_h1sq(p.g1));
  for (double sgn : {1.0, -1.0}) {
    RadialField phi = p.Q;
    axpy(sgn * d_target / g1n, p.g1, phi);
    int sig = sign_functional(p, phi, s.th, s.cal.vtable);
    double k2 = evaluate_frame(phi, p.V, p.om).K2om;
    CHECK(sig == (k2 > 0 ? 1 : -1));
    CHECK(sig == (sgn > 0 ? 1 : -1));
  }
}
