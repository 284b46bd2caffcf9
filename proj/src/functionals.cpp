// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "nlsp/functionals.hpp"

#include <cmath>

namespace nlsp {

double weight_quadratic(const RadialField& u, const std::function<double(double)>& w) {
  const auto& g = *u.grid;
  double s = 0.0;
  for (int i = 0; i < u.n(); ++i) s += g.qw[i] * w(g.r[i]) * std::norm(u.v[i]);
  return 0.5 * s;
}

BareFunctionals evaluate_bare(const RadialField& u, const Potential& V) {
  BareFunctionals f;
  f.M = 0.5 * norm_l2sq(u);
  f.H0 = 0.5 * dirichlet_form(u, u).real();
  f.G = 0.25 * norm_l4p4(u);
  f.E0 = f.H0 - f.G;
  if (!V.is_zero()) {
    f.Vq = weight_quadratic(u, [&](double r) { return V.value(r); });
    f.K2 = 2.0 * f.H0 - 3.0 * f.G - weight_quadratic(u, [&](double r) { return V.rVr(r); });
  } else {
    f.K2 = 2.0 * f.H0 - 3.0 * f.G;
  }
  f.E = f.E0 + f.Vq;
  return f;
}

FrameFunctionals evaluate_frame(const RadialField& u, const Potential& V, double om) {
  FrameFunctionals f;
  f.om = om;
  f.M = 0.5 * norm_l2sq(u);
  f.H0 = 0.5 * dirichlet_form(u, u).real();
  f.G = 0.25 * norm_l4p4(u);
  f.E0 = f.H0 - f.G;
  double svom = 0.0;
  if (!V.is_zero()) {
    f.Vom = weight_quadratic(u, [&](double r) { return V.value_om(r, om); });
    svom = weight_quadratic(u, [&](double r) { return V.rVr_om(r, om); });
  }
  f.Eom = f.E0 + f.Vom;
  f.Aom = f.Eom + f.M;
  f.K2om = 2.0 * f.H0 - 3.0 * f.G - svom;
  f.Jom = f.Aom - 0.5 * f.K2om;
  return f;
}

RadialField frame_action_gradient(const RadialField& u, const Potential& V, double om) {
  RadialField lap = laplacian(u);
  RadialField out(u.grid);
  for (int i = 0; i < u.n(); ++i) {
    double r = u.grid->r[i];
    double vom = V.is_zero() ? 0.0 : V.value_om(r, om);
    out.v[i] = -lap.v[i] + (1.0 + vom) * u.v[i] - std::norm(u.v[i]) * u.v[i];
  }
  return out;
}

}  // namespace nlsp
