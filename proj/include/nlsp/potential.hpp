// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nlsp/band.hpp"
#include "nlsp/grid.hpp"

namespace nlsp {

enum class PotentialFamily { Zero, Gaussian, CorePow };

/// Attractive radial potential well. Families:
///   Zero:     V = 0
///   Gaussian: V(r) = -c exp(-(r/sigma)^2)
///   CorePow:  V(r) = -c (sigma/r)^a exp(-(r/sigma)^2), 0 < a < 3/2
/// CorePow has an integrable origin singularity; its coupling to localized
/// states decays like om^{a/2-1} under the om-rescaling, which makes the
/// soliton-family correction rates controllable by a. All derived weights
/// (r V_r etc.) are analytic, never finite-differenced.
struct Potential {
  PotentialFamily family = PotentialFamily::Zero;
  double c = 0.0;      // depth
  double sigma = 1.0;  // width
  double a = 0.0;      // core exponent (CorePow only)

  double value(double r) const;
  double rVr(double r) const;    // r V_r(r)
  double r2Vrr(double r) const;  // r^2 V_rr(r)

  // Rescaled frame V^om(x) = om^{-1} V(om^{-1/2} x) and its weights.
  double value_om(double r, double om) const { return value(r / std::sqrt(om)) / om; }
  double rVr_om(double r, double om) const { return rVr(r / std::sqrt(om)) / om; }
  // S'_{3/2} V^om = (r d/dr + 2) V^om
  double s32_om(double r, double om) const { return rVr_om(r, om) + 2.0 * value_om(r, om); }
  // S'_1 V^om = (r d/dr + 3) V^om
  double s1_om(double r, double om) const { return rVr_om(r, om) + 3.0 * value_om(r, om); }

  bool is_zero() const { return family == PotentialFamily::Zero || c == 0.0; }

  static Potential zero() { return {}; }
  static Potential gaussian(double c, double sigma);
  static Potential corepow(double c, double sigma, double a);
};

/// Number of negative eigenvalues of -Delta + V on radial L^2 (Sturm count
/// on the reduced tridiagonal operator, Dirichlet at r_max).
int negative_count(const Grid& g, const Potential& V);

struct GroundEigen {
  double e0 = 0.0;      // lowest eigenvalue, < 0
  RadialField phi0;     // positive, ||phi0||_2 = 1
  int negatives = 0;    // total count of negative eigenvalues
};

/// Lowest eigenpair of -Delta + V. Throws NoBoundState when the well holds
/// no negative eigenvalue.
GroundEigen ground_eigenpair(const Grid& g, const Potential& V);

/// Requires exactly one negative eigenvalue; throws otherwise.
void require_single_bound_state(const Grid& g, const Potential& V);

struct DepthWindow {
  double c_min = 0.0;  // first bound state appears
  double c_max = 0.0;  // second bound state appears
};

/// Depth window (c_min, c_max) in which the family with fixed shape holds
/// exactly one bound state, located by bisection on the Sturm count.
DepthWindow single_bound_window(const Grid& g, PotentialFamily family, double sigma, double a,
                                double c_hi_guess = 64.0);

/// Numeric verification of the standing assumptions on the potential where
/// they are computable. Integrability of V, |x|V, x V_r, x^2 V_rr is decided
/// analytically from the family exponents (both families decay like a
/// Gaussian; only the origin can fail, and only for CorePow); the eigenvalue
/// count comes from the Sturm count. Boundedness of the wave operator is
/// assumed, not verified.
struct AdmissibilityReport {
  bool v_l2 = false;          // V in L^2
  bool v_xl1 = false;         // |x| V in L^1
  bool xvr_ok = false;        // x V_r in L^2 + bounded-vanishing
  bool x2vrr_ok = false;      // x^2 V_rr in L^2 + bounded-vanishing
  bool single_bound = false;  // exactly one negative eigenvalue
  int negatives = 0;
  double e0 = 0.0;  // lowest eigenvalue when a bound state exists
  double l2_norm = 0.0, xl1_norm = 0.0;
  std::string wave_operator = "assumed, not verified";
  bool pass() const { return v_l2 && v_xl1 && xvr_ok && x2vrr_ok && single_bound; }
};

AdmissibilityReport admissibility_report(const Grid& g, const Potential& V);

/// Reduced operator -d^2/dr^2 + q(r) on the active nodes (the r_max node is
/// pinned to zero), as a symmetric tridiagonal matrix in w-space.
SymTridiag reduced_operator(const Grid& g, const std::vector<double>& q);

/// Calibrated defaults (values frozen by the calibration run; see the
/// calibration module).
Potential default_potential();
Potential default_gaussian();

}  // namespace nlsp
