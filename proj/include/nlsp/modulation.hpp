// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nlsp/functionals.hpp"
#include "nlsp/linearized.hpp"

namespace nlsp {

/// Fixed geometric thresholds of the trajectory analysis. The C constants
/// are derived from the free ground state when left at zero (see
/// default_thresholds).
struct Thresholds {
  double delta_D = 0.5;   // decomposition validity radius
  double delta_E = 0.25;  // blend scale between the two distance readings
  double delta_I = 0.1;   // initial proximity for trapped runs
  double delta_X = 0.08;  // ejection level
  double delta_V = 0.02;  // small-distance regime of the sign functional
  double delta_star = 0.02;
  double c_X = 0.25;
  double C_D = 4.0;
  double eps_S = 0.1;  // action window half-width is eps_S^2
  double C_S = 0.0;  // scattering smallness constant, max(C_D, 2 + 1/(M H0))
  double C_M = 0.0;  // largeness gate of the virial case, 2 (1 + C_D) (E0 + M)
  double window_per_alpha = 10.0;  // trapping window in units of 1/alpha
};

Thresholds default_thresholds(const BareFunctionals& free_ground);

/// Smooth bump: 1 on |x| <= 1, 0 on |x| >= 2, exponential glue between.
double chi_bump(double x);

/// Instantaneous distance: d0^2 = min_theta || e^{-i theta} phi - Q ||_{H1}^2,
/// minimized in closed form since the phase is an H1 isometry.
struct Dist0 {
  double d0 = 0.0;
  double theta = 0.0;
};
Dist0 dist0(const Pencil& p, const RadialField& phi);

/// Mollified distance from samples of the energy norm along a trajectory:
/// weighted average of ensq against chi_bump(t - center), normalized by the
/// sampled weight so a frozen field returns its pointwise norm.
double dist1_from_samples(const std::vector<double>& t, const std::vector<double>& ensq,
                          double center);

/// d = chi(d0/delta_E) d1 + (1 - chi(d0/delta_E)) d0.
double blend_dist(double d0v, double d1v, double delta_E);

/// Modulation decomposition phi = e^{i theta} (Q + v) with <i v | Qp> = 0;
/// theta is fixed modulo pi by the constraint and the branch is the one
/// minimizing ||v||_{H1}.
struct Decomposition {
  double theta = 0.0;
  RadialField v;
  double lp = 0.0, lm = 0.0;
  double d0 = 0.0;  // ||v||-based instantaneous distance of the same phi
};
Decomposition decompose(const Pencil& p, const RadialField& phi);

/// decompose restricted to its validity radius: throws TooFarFromOrbit when
/// the minimized ||v||_{H1} is not below delta_D.
Decomposition decompose_near(const Pencil& p, const RadialField& phi, double delta_D);

/// Phase rate theta_dot = m - 1 with
/// m = -[ <v|Q> + <N(v)|Qp> ] / <Q + v|Qp>, N(v) = 2Q|v|^2 + Q v^2 + |v|^2 v.
/// Throws DegenerateDenominator when |<Q+v|Qp>| < 1e-8 M(Q) (leaving the
/// chart).
double phase_rate(const Pencil& p, const RadialField& v);

/// Calibrated virial constants, binned in the distance: for d in
/// [d_lo[k], d_lo[k+1]) the admissible action excess is eps_v[k] d^2 and the
/// certified virial size is kappa_v[k] d^2.
struct VirialTable {
  std::vector<double> d_lo;
  std::vector<double> eps_v, kappa_v;
  double eps_at(double d) const;
  double kappa_at(double d) const;
  static VirialTable conservative();  // placeholder used before calibration
};

/// Sign functional. Domain: Aom(phi) - Aom(Q) < min(eps_S^2, c_X d^2).
/// Case small:  C_S M(phi) H0(phi) <= 1            -> +1
/// Case near:   d < 2 delta_V                      -> sign lambda1(v)
/// Case virial: excess < eps_v(d) d^2 and
///              (M + om H0)(phi) > C_M             -> sign K2om(phi)
/// All applicable cases must agree (CaseOverlapDisagreement otherwise);
/// SignDomain when none applies or the domain condition fails.
int sign_functional(const Pencil& p, const RadialField& phi, const Thresholds& th,
                    const VirialTable& vt, double d_override = -1.0);

}  // namespace nlsp
