// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nlsp/functionals.hpp"
#include "nlsp/grid.hpp"
#include "nlsp/potential.hpp"

namespace nlsp {

/// Ground state of -Delta Q + Q = Q^3 (positive, radial, decaying).
struct FreeGround {
  RadialField Q;
  double b0 = 0.0;        // Q(0) from the shooting stage
  double residual = 0.0;  // L^2 norm of the discrete equation residual
};

/// Shooting (RK4 + bisection on Q(0)) seeds a grid Newton solve of the
/// reduced equation w'' - w + w^3/r^2 = 0.
FreeGround compute_free_ground(const Grid& g);

/// Solution of (-Delta + V^om + 1) Q_om = Q_om^3 near Q, for om large enough
/// that the fixed-point map v -> Lplus^{-1}(3 Q v^2 + v^3 - V^om (Q+v))
/// contracts (Lplus = -Delta + 1 - 3Q^2, potential-free).
struct SolitonPoint {
  double om = 0.0;
  RadialField Qom;      // real-valued
  RadialField Qp;       // d(Q_om)/d(om) direction: solves Lplus^om Qp = -Q_om
  double vnorm_h1 = 0.0;  // ||Q_om - Q||_{H^1}
  double residual = 0.0;
  int iterations = 0;
};

SolitonPoint excited_soliton(const Grid& g, const RadialField& Q, const Potential& V, double om);

/// Small solitons bifurcating from the linear ground state phi0:
/// (H + Omega) Phi = |Phi|^2 Phi, Phi = z phi0 + gamma, gamma perp phi0.
struct GroundBranchPoint {
  cplx z;
  double Omega = 0.0;
  RadialField Phi;
  double gamma_h1 = 0.0;
  int iterations = 0;
};

GroundBranchPoint ground_branch(const Grid& g, const GroundEigen& ge, const Potential& V, cplx z);

/// Mass/energy curves of the large-frequency family in unscaled variables:
/// mu(om) = M(Psi[om]) = om^{-1/2} M(Q_om), E1(om) = E(Psi[om]) = om^{1/2} Eom(Q_om).
/// Derivatives in mu are formed through the log-frequency parametrization
/// (uniform s = ln om, 4th-order central differences): E1p is valid on
/// indices [2, N-3], E1pp on [4, N-5], NaN outside.
struct EnergyCurves {
  std::vector<double> om, mu, E1, E1p, E1pp;
};

EnergyCurves energy_curves(const Grid& g, const RadialField& Q, const Potential& V,
                           double om_lo, double om_hi, int n_points);

}  // namespace nlsp
