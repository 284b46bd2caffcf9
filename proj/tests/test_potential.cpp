// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

// Potential families: analytic derivative weights against finite differences,
// Sturm counts against the shallow-well threshold behavior of 3-D wells, and
// the admissibility report.

#include <cmath>

#include "doctest.h"
#include "nlsp/potential.hpp"

using namespace nlsp;

TEST_CASE("analytic derivative weights match finite differences") {
  for (const Potential& V : {Potential::gaussian(2.3, 1.4), Potential::corepow(1.7, 0.9, 1.2)}) {
    for (double r : {0.13, 0.5, 1.0, 2.7, 5.0}) {
      double dr = 1e-5 * std::max(1.0, r);
      double vr = (V.value(r + dr) - V.value(r - dr)) / (2.0 * dr);
      double vrr = (V.value(r + dr) - 2.0 * V.value(r) + V.value(r - dr)) / (dr * dr);
      CHECK(V.rVr(r) == doctest::Approx(r * vr).epsilon(1e-6));
      CHECK(V.r2Vrr(r) == doctest::Approx(r * r * vrr).epsilon(2e-4));
    }
  }
}

TEST_CASE("frame potential is the parabolic rescaling of the bare one") {
  Potential V = Potential::gaussian(4.0, 1.1);
  double om = 37.0;
  for (double r : {0.4, 1.3, 3.1}) {
    CHECK(V.value_om(r, om) == doctest::Approx(V.value(r / std::sqrt(om)) / om).epsilon(1e-13));
    CHECK(V.rVr_om(r, om) == doctest::Approx(V.rVr(r / std::sqrt(om)) / om).epsilon(1e-13));
  }
}

TEST_CASE("shallow 3-D wells hold no bound state, deep ones several") {
  Grid g = make_grid(2048, 40.0);
  CHECK(negative_count(g, Potential::gaussian(0.2, 1.0)) == 0);
  int deep = negative_count(g, Potential::gaussian(200.0, 1.0));
  CHECK(deep >= 3);
  // monotone in depth
  int prev = 0;
  for (double c : {1.0, 4.0, 16.0, 64.0}) {
    int k = negative_count(g, Potential::gaussian(c, 1.0));
    CHECK(k >= prev);
    prev = k;
  }
}

TEST_CASE("single-bound depth window brackets the Sturm transitions") {
  Grid g = make_grid(2048, 40.0);
  DepthWindow w = single_bound_window(g, PotentialFamily::Gaussian, 1.0, 0.0);
  CHECK(w.c_min > 0.0);
  CHECK(w.c_max > w.c_min);
  double mid = 0.5 * (w.c_min + w.c_max);
  CHECK(negative_count(g, Potential::gaussian(mid, 1.0)) == 1);
  CHECK(negative_count(g, Potential::gaussian(0.95 * w.c_min, 1.0)) == 0);
  CHECK(negative_count(g, Potential::gaussian(1.05 * w.c_max, 1.0)) >= 2);
  CHECK_NOTHROW(require_single_bound_state(g, Potential::gaussian(mid, 1.0)));
  CHECK_THROWS_AS(require_single_bound_state(g, Potential::gaussian(0.5 * w.c_min, 1.0)),
                  NoBoundState);
  CHECK_THROWS_AS(require_single_bound_state(g, Potential::gaussian(4.0 * w.c_max, 1.0)),
                  MultipleBoundStates);
}

TEST_CASE("ground eigenpair satisfies its equation") {
  Grid g = make_grid(2048, 40.0);
  Potential V = Potential::gaussian(8.0, 1.0);
  GroundEigen ge = ground_eigenpair(g, V);
  CHECK(ge.e0 < 0.0);
  CHECK(norm_l2sq(ge.phi0) == doctest::Approx(1.0).epsilon(1e-12));
  // residual of (-Delta + V - e0) phi0 through the quadratic form
  RadialField r1 = laplacian(ge.phi0);
  RadialField r2 = ge.phi0;
  for (int i = 0; i < g->n; ++i)
    r2.v[i] = (V.value(g->r[i]) - ge.e0) * ge.phi0.v[i] - r1.v[i];
  CHECK(std::sqrt(norm_l2sq(r2)) <= 1e-8 * std::abs(ge.e0));
  // positivity
  double mn = 0.0;
  for (int i = 0; i < g->n; ++i) mn = std::min(mn, ge.phi0.v[i].real());
  CHECK(mn >= -1e-12);
}

TEST_CASE("deeper wells bind tighter") {
  Grid g = make_grid(1024, 40.0);
  double e_a = ground_eigenpair(g, Potential::gaussian(6.0, 1.0)).e0;
  double e_b = ground_eigenpair(g, Potential::gaussian(12.0, 1.0)).e0;
  CHECK(e_b < e_a);
}

TEST_CASE("core exponent domain is enforced") {
  CHECK_THROWS_AS(Potential::corepow(1.0, 1.0, 1.5), Error);
  CHECK_THROWS_AS(Potential::corepow(1.0, 1.0, -0.1), Error);
  CHECK_NOTHROW(Potential::corepow(1.0, 1.0, 1.49));
}

TEST_CASE("admissibility report") {
  Grid g = make_grid(2048, 40.0);
  AdmissibilityReport zero = admissibility_report(g, Potential::zero());
  CHECK_FALSE(zero.pass());  // integrable but holds no bound state
  CHECK(zero.v_l2);
  CHECK_FALSE(zero.single_bound);

  AdmissibilityReport core = admissibility_report(g, default_potential());
  CHECK(core.pass());
  CHECK(core.negatives == 1);
  CHECK(core.e0 < 0.0);
  CHECK(core.l2_norm > 0.0);

  DepthWindow w = single_bound_window(g, PotentialFamily::Gaussian, 1.0, 0.0);
  AdmissibilityReport deep = admissibility_report(g, Potential::gaussian(4.0 * w.c_max, 1.0));
  CHECK_FALSE(deep.pass());
  CHECK(deep.negatives >= 2);
}
