// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>

#include "nlsp/evolve.hpp"

namespace nlsp {

/// State assembly in modulation coordinates:
/// u = Q + lp (g1 + i g2) + lm (g1 - i g2) + zeta (zeta may be null).
RadialField manifold_state(const Pencil& p, double lp, double lm, const RadialField* zeta);

struct ManifoldOptions {
  EvolveOptions evolve;
  double horizon_per_alpha = 30.0;  // probe horizon in units of 1/alpha
  double b_tol = 1e-8;              // bisection resolution in the unstable coordinate
  double bracket_init = 1e-5;       // minimal initial bracket half-width
  int max_probes = 80;
};

/// One point of the center-stable graph lp = G(lm, zeta), located by
/// bisection on the ejection sign of the unstable coordinate. The bracket
/// endpoints must eject with opposite signs (widened a few times, then
/// BracketFailure). A probe that never ejects within the horizon certifies
/// the midpoint as trapped and ends the search early.
struct ManifoldPoint {
  double lm = 0.0;
  double G = 0.0;  // the located unstable coordinate
  double zeta_ensq = 0.0;
  int probes = 0;
  bool certified = false;  // a probe at G stayed below delta_X for the horizon
  double bracket = 0.0;    // final bracket half-width
};

ManifoldPoint bisect_graph(const Pencil& p, const Thresholds& th, const RadialField* zeta,
                           double lm, const ManifoldOptions& opts);

/// Fixed point of the forward/backward graph pair:
/// lp = G(lm, zeta), lm = G(lp, conj zeta). Gauss-Seidel sweeps of the two
/// bisections; converges quadratically since G is quadratically small.
struct IntersectionPoint {
  double lp = 0.0, lm = 0.0;
  int sweeps = 0;
  bool converged = false;
};

IntersectionPoint intersection_point(const Pencil& p, const Thresholds& th,
                                     const RadialField* zeta, const ManifoldOptions& opts,
                                     double tol = 1e-7, int max_sweeps = 4);

/// The nine relative positions against the forward and backward graphs:
/// s_f = sign(lp - G(lm, zeta)), s_b = sign(lm - G(lp, conj zeta)), each in
/// {-1, 0, +1}. Definite offsets are eps; the 0 slots sit on the bisected
/// graph (the center entry is the exact soliton when zeta is null, the
/// intersection point otherwise). Every entry is evolved both ways.
struct NineClassEntry {
  int sf = 0, sb = 0;
  double lp0 = 0.0, lm0 = 0.0;
  Outcome forward_out = Outcome::Undetermined;
  Outcome backward_out = Outcome::Undetermined;
  double forward_t_end = 0.0, backward_t_end = 0.0;
};

struct NineClassReport {
  double eps = 0.0;
  IntersectionPoint base;
  std::array<NineClassEntry, 9> entries;
};

NineClassReport nine_class_explorer(const Pencil& p, const Thresholds& th,
                                    const RadialField* zeta, double eps,
                                    const ManifoldOptions& opts);

/// Low center-direction fields: lowest non-kernel modes of Lminus, projected
/// into the center subspace (lambda modes and phase direction removed) and
/// normalized to unit energy norm.
std::vector<RadialField> center_basis(const Pencil& p, int count);

}  // namespace nlsp
