// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nlsp/grid.hpp"
#include "nlsp/potential.hpp"
#include "nlsp/solitons.hpp"

namespace nlsp {

/// Linearization around the soliton Q_om in the rescaled frame:
///   Lplus  = -Delta + 1 + V^om - 3 Q_om^2   (acts on real parts),
///   Lminus = -Delta + 1 + V^om -   Q_om^2   (acts on imaginary parts).
/// The instability is carried by the real pair
///   Lplus g1 = alpha g2,  Lminus g2 = -alpha g1,  alpha > 0,
/// normalized so that alpha (g1, g2)_{L2} = -1 and oriented so (Q_om, g2) > 0.
/// (g1, Q_om) = 0 and (g2, Qp) = 0 hold automatically from the eigen relations.
struct Pencil {
  Grid grid;
  Potential V;
  double om = 1.0;
  RadialField Q;    // soliton of the om frame (real)
  RadialField Qp;   // solves Lplus Qp = -Q (frequency derivative direction)
  RadialField g1, g2;
  double alpha = 0.0;
  double ip_g1g2 = 0.0;  // (g1,g2) = -1/alpha after normalization
  double ip_QQp = 0.0;   // (Q,Qp), negative
  double soliton_residual = 0.0;
  double pencil_residual = 0.0;
  std::vector<double> lp_pot, lm_pot;  // node values of 1+V^om-3Q^2 and 1+V^om-Q^2
};

/// Builds the soliton of the om frame from the potential-free ground state Q
/// and solves the eigen pair.
/// Throws EigenNotIsolated when the iteration cannot certify a simple,
/// isolated real pair (relative gap below 0.2 alpha).
Pencil build_pencil(const Grid& g, const RadialField& Qfree, const Potential& V, double om);

RadialField apply_lplus(const Pencil& p, const RadialField& f);
RadialField apply_lminus(const Pencil& p, const RadialField& f);

/// Direct banded solve of Lplus x = rhs (Lplus is invertible on the radial
/// sector: one negative eigenvalue, no kernel).
RadialField solve_lplus(const Pencil& p, const RadialField& rhs);

/// Solve of Lminus x = rhs on the complement of the kernel direction Q_om.
/// The rhs is projected onto Q^perp first (silently) and the solution comes
/// back orthogonal to Q through a bordered (deflated) solve.
RadialField solve_lminus_perp(const Pencil& p, const RadialField& rhs);

/// Projection onto the continuous spectrum of the linear operator H:
/// phi - phi0 (phi|phi0), complex-linear; phi0 must be L2-normalized.
RadialField pc_ground(const RadialField& phi, const RadialField& phi0);

/// <Lplus f, f> and <Lminus f, f>, with the kinetic part taken through the
/// same summation-by-parts form as norm_h1sq/H0 so algebraic identities
/// between the action and the quadratic forms close to roundoff.
double quad_lplus(const Pencil& p, const RadialField& f);
double quad_lminus(const Pencil& p, const RadialField& f);

/// <L v, v> = <Lplus v1, v1> + <Lminus v2, v2>.
double quad_l(const Pencil& p, const RadialField& v);

/// Spectral split v = lp (g1 + i g2) + lm (g1 - i g2) + zeta with
/// (zeta1, g2) = (zeta2, g1) = 0:
///   lp = -alpha [ (v1,g2) + (v2,g1) ] / 2,  lm = -alpha [ (v1,g2) - (v2,g1) ] / 2.
struct SpectralSplit {
  double lp = 0.0, lm = 0.0;
  RadialField zeta;
};

SpectralSplit split_modes(const Pencil& p, const RadialField& v);
double lambda_plus(const Pencil& p, const RadialField& v);
double lambda_minus(const Pencil& p, const RadialField& v);

/// Center projection with the phase direction removed as well: subtracts the
/// lambda modes and an i Q_om multiple, leaving lambda_pm(out) = 0 and
/// <i out | Qp> = 0.
RadialField project_z(const Pencil& p, const RadialField& v);

/// ||v||_om^2 = lp^2 + lm^2 + (Qp, v2)^2 / 2 + <L zeta, zeta> / 2.
double energy_norm_sq(const Pencil& p, const RadialField& v);

/// | Aom(Q+v) - Aom(Q) - [ -2 lp lm + <L zeta,zeta>/2 - C(v) ] | with
/// C(v) = <|v|^2 v, Q> + G(v). Zero up to roundoff and the soliton residual.
double expansion_mismatch(const Pencil& p, const RadialField& v);

/// Smallest generalized eigenvalues of Lplus on {f : (f,g2)=0} and of Lminus
/// on {f : (f,Qp)=0}, both against the H^1 form. Positive when the constrained
/// coercivity bound holds; 1/min is the coercivity constant.
struct CoercivityReport {
  double nu_plus = 0.0, nu_minus = 0.0;
};
CoercivityReport coercivity_constants(const Pencil& p);

}  // namespace nlsp
