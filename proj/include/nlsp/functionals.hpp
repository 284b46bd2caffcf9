// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "nlsp/grid.hpp"
#include "nlsp/potential.hpp"

namespace nlsp {

/// Conserved and variational quantities of the field equation
///   i u_t + (Delta - V) u + |u|^2 u = 0.
/// Conventions: M = ||u||_2^2 / 2, H0 = ||grad u||_2^2 / 2, G = ||u||_4^4 / 4,
/// E0 = H0 - G, <w>(u) = (1/2) int w |u|^2.
struct BareFunctionals {
  double M = 0, H0 = 0, G = 0, E0 = 0;
  double Vq = 0;  // <V>(u)
  double E = 0;   // E0 + <V>
  double K2 = 0;  // 2 H0 - 3 G - <r V_r>

  double A(double om) const { return E + om * M; }        // action at frequency om
  double K0(double om) const { return 2.0 * (A(om) - G); }  // <A'(u)|u>
  double Afree() const { return E0 + M; }
};

/// Same quantities in the om-rescaled frame (potential V^om).
struct FrameFunctionals {
  double om = 1.0;
  double M = 0, H0 = 0, G = 0, E0 = 0;
  double Vom = 0;   // <V^om>(u)
  double Eom = 0;   // E0 + <V^om>
  double Aom = 0;   // Eom + M
  double K2om = 0;  // 2 H0 - 3 G - <r (V^om)_r>
  double Jom = 0;   // Aom - K2om / 2
};

BareFunctionals evaluate_bare(const RadialField& u, const Potential& V);
FrameFunctionals evaluate_frame(const RadialField& u, const Potential& V, double om);

/// <w>(u) for an arbitrary radial weight given analytically.
double weight_quadratic(const RadialField& u, const std::function<double(double)>& w);

/// First variation of the frame action A^om at u, as a field:
///   A^om'(u) = (-Delta + 1 + V^om) u - |u|^2 u.
RadialField frame_action_gradient(const RadialField& u, const Potential& V, double om);

}  // namespace nlsp
