// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

// Center-stable graph location by bisection on the ejection sign.

#include <cmath>

#include "doctest.h"
#include "nlsp/calibration.hpp"
#include "nlsp/manifold.hpp"
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

}  // namespace

TEST_CASE("assembled states decompose back to their coordinates") {
  const Setup& s = W();
  const Pencil& p = s.p;

  // construction is literally Q + lp (g1 + i g2) + lm (g1 - i g2) + zeta
  RadialField u = manifold_state(p, 3e-4, -2e-4, nullptr);
  RadialField ref = p.Q;
  axpy(3e-4, added(p.g1, scaled(p.g2, cplx(0.0, 1.0))), ref);
  axpy(-2e-4, added(p.g1, scaled(p.g2, cplx(0.0, -1.0))), ref);
  axpy(-1.0, u, ref);
  CHECK(std::sqrt(norm_h1sq(ref)) <= 1e-13 * std::sqrt(norm_h1sq(u)));

  // a gauge-compatible assembly (equal mode coefficients, projected
  // remainder) is recovered exactly by the decomposition
  std::vector<RadialField> cb = center_basis(p, 2);
  RadialField zeta = scaled(cb[0], 0.01);
  axpy(0.005, cb[1], zeta);
  zeta = project_z(p, zeta);
  const double c = 2e-3;
  RadialField u2 = manifold_state(p, c, c, &zeta);
  Decomposition dec = decompose(p, u2);
  CHECK(std::abs(dec.lp - c) <= 1e-9);
  CHECK(std::abs(dec.lm - c) <= 1e-9);
  RadialField back = added(p.Q, dec.v);
  back = scaled(back, std::polar(1.0, dec.theta));
  axpy(-1.0, u2, back);
  CHECK(std::sqrt(norm_h1sq(back)) <= 1e-10 * std::sqrt(norm_h1sq(u2)));
}

TEST_CASE("center basis: normalization, constraints, independence") {
  const Setup& s = W();
  const Pencil& p = s.p;
  std::vector<RadialField> cb = center_basis(p, 4);
  REQUIRE(cb.size() == 4);
  for (const RadialField& z : cb) {
    CHECK(energy_norm_sq(p, z) == doctest::Approx(1.0).epsilon(1e-8));
    RadialField z1(s.g), z2(s.g);
    for (int i = 0; i < s.g->n; ++i) {
      z1.v[i] = z.v[i].real();
      z2.v[i] = z.v[i].imag();
    }
    CHECK(std::abs(rinner(z1, p.g2)) <= 1e-9);
    CHECK(std::abs(rinner(z2, p.g1)) <= 1e-9);
    CHECK(std::abs(rinner(z2, p.Qp)) <= 1e-9);
  }
  // near-orthogonality in the energy pairing, by polarization
  for (size_t a = 0; a < cb.size(); ++a) {
    for (size_t b = a + 1; b < cb.size(); ++b) {
      RadialField sum = added(cb[a], cb[b]);
      const double ip =
          0.5 * (energy_norm_sq(p, sum) - energy_norm_sq(p, cb[a]) - energy_norm_sq(p, cb[b]));
      CHECK(std::abs(ip) <= 0.2);
    }
  }
}

TEST_CASE("graph location: through the origin, quadratically small nearby") {
  const Setup& s = W();
  ManifoldOptions mo;

  ManifoldPoint origin = bisect_graph(s.p, s.th, nullptr, 0.0, mo);
  CHECK(std::abs(origin.G) <= 1e-6);
  CHECK(origin.probes <= mo.max_probes);
  CHECK((origin.certified || origin.bracket <= 1.01 * mo.b_tol));

  ManifoldPoint off = bisect_graph(s.p, s.th, nullptr, 0.01, mo);
  CHECK(std::abs(off.G) <= 1e-3);
  CHECK(off.probes <= mo.max_probes);
  CHECK((off.certified || off.bracket <= 1.01 * mo.b_tol));
}

TEST_CASE("intersection point with zero remainder sits at the soliton") {
  const Setup& s = W();
  ManifoldOptions mo;
  IntersectionPoint ip = intersection_point(s.p, s.th, nullptr, mo);
  CHECK(ip.converged);
  CHECK(ip.sweeps <= 4);
  CHECK(std::abs(ip.lp) <= 1e-6);
  CHECK(std::abs(ip.lm) <= 1e-6);
}
