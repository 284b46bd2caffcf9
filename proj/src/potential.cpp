// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "nlsp/potential.hpp"

#include <cmath>

namespace nlsp {

Potential Potential::gaussian(double c, double sigma) {
  Potential p;
  p.family = PotentialFamily::Gaussian;
  p.c = c;
  p.sigma = sigma;
  return p;
}

Potential Potential::corepow(double c, double sigma, double a) {
  if (a <= 0.0 || a >= 1.5) throw Error("corepow: exponent must lie in (0, 3/2)");
  Potential p;
  p.family = PotentialFamily::CorePow;
  p.c = c;
  p.sigma = sigma;
  p.a = a;
  return p;
}

double Potential::value(double r) const {
  switch (family) {
    case PotentialFamily::Zero:
      return 0.0;
    case PotentialFamily::Gaussian: {
      double x = r / sigma;
      return -c * std::exp(-x * x);
    }
    case PotentialFamily::CorePow: {
      double x = r / sigma;
      return -c * std::pow(x, -a) * std::exp(-x * x);
    }
  }
  return 0.0;
}

double Potential::rVr(double r) const {
  switch (family) {
    case PotentialFamily::Zero:
      return 0.0;
    case PotentialFamily::Gaussian: {
      double x = r / sigma;
      return 2.0 * c * x * x * std::exp(-x * x);
    }
    case PotentialFamily::CorePow: {
      // rV_r = -V(r) (a + 2 r^2/sigma^2) with V < 0, so rV_r > 0
      double x = r / sigma;
      return -value(r) * (a + 2.0 * x * x);
    }
  }
  return 0.0;
}

double Potential::r2Vrr(double r) const {
  switch (family) {
    case PotentialFamily::Zero:
      return 0.0;
    case PotentialFamily::Gaussian: {
      // V_rr = (2c/sigma^2) e^{-x^2} (1 - 2x^2), so r^2 V_rr = 2c x^2 (1-2x^2) e^{-x^2}
      double x = r / sigma;
      return 2.0 * c * x * x * (1.0 - 2.0 * x * x) * std::exp(-x * x);
    }
    case PotentialFamily::CorePow: {
      // r^2 V_rr = V(r) [ a^2 + a + (4a-2) x^2 + 4 x^4 ]   (logarithmic differentiation)
      double x2 = (r / sigma) * (r / sigma);
      return value(r) * (a * a + a + (4.0 * a - 2.0) * x2 + 4.0 * x2 * x2);
    }
  }
  return 0.0;
}

SymTridiag reduced_operator(const Grid& g, const std::vector<double>& q) {
  int m = g->n - 1;  // active nodes; node n-1 pinned to zero
  SymTridiag A;
  A.d.resize(m);
  A.e.assign(m - 1, -1.0 / (g->h * g->h));
  for (int i = 0; i < m; ++i) A.d[i] = 2.0 / (g->h * g->h) + q[i];
  return A;
}

int negative_count(const Grid& g, const Potential& V) {
  std::vector<double> q(g->n - 1);
  for (int i = 0; i < g->n - 1; ++i) q[i] = V.value(g->r[i]);
  return reduced_operator(g, q).count_below(0.0);
}

GroundEigen ground_eigenpair(const Grid& g, const Potential& V) {
  std::vector<double> q(g->n - 1);
  for (int i = 0; i < g->n - 1; ++i) q[i] = V.value(g->r[i]);
  SymTridiag A = reduced_operator(g, q);
  int neg = A.count_below(0.0);
  if (neg == 0) throw NoBoundState("ground_eigenpair: well holds no bound state");
  TridiagEigen eig = tridiag_eigen_k(A, 0);
  GroundEigen out;
  out.e0 = eig.value;
  out.negatives = neg;
  out.phi0 = RadialField(g);
  for (int i = 0; i < g->n - 1; ++i) out.phi0.v[i] = eig.vec[i] / g->r[i];
  out.phi0.v[g->n - 1] = 0.0;
  double nrm = std::sqrt(norm_l2sq(out.phi0));
  bool flip = false;
  // ground state of the reduced operator has no interior zero; orient positive
  for (int i = 0; i < g->n / 4; ++i)
    if (out.phi0.v[i].real() < 0.0) {
      flip = true;
      break;
    }
  double s = (flip ? -1.0 : 1.0) / nrm;
  for (auto& z : out.phi0.v) z *= s;
  return out;
}

void require_single_bound_state(const Grid& g, const Potential& V) {
  int neg = negative_count(g, V);
  if (neg == 0) throw NoBoundState("potential admissibility: no bound state");
  if (neg > 1) throw MultipleBoundStates("potential admissibility: " + std::to_string(neg) +
                                         " bound states, need exactly one");
}

namespace {
Potential with_depth(PotentialFamily family, double c, double sigma, double a) {
  Potential p;
  p.family = family;
  p.c = c;
  p.sigma = sigma;
  p.a = a;
  return p;
}
}  // namespace

DepthWindow single_bound_window(const Grid& g, PotentialFamily family, double sigma, double a,
                                double c_hi_guess) {
  auto count = [&](double c) { return negative_count(g, with_depth(family, c, sigma, a)); };
  // locate depth with >= 1 and with >= 2 bound states
  double c1 = c_hi_guess, c2 = c_hi_guess;
  while (count(c1) < 1) {
    c1 *= 2.0;
    if (c1 > 1e9) throw NoBoundState("single_bound_window: no bound state up to huge depth");
  }
  while (count(c2) < 2) {
    c2 *= 2.0;
    if (c2 > 1e9) throw Error("single_bound_window: second bound state never appears");
  }
  auto bisect_transition = [&](int k, double hi) {
    // smallest c with count >= k, searched down from hi
    double lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-11 * (1.0 + hi); ++it) {
      double m = 0.5 * (lo + hi);
      if (count(m) >= k)
        hi = m;
      else
        lo = m;
    }
    return hi;
  };
  DepthWindow w;
  w.c_min = bisect_transition(1, c1);
  w.c_max = bisect_transition(2, c2);
  return w;
}

AdmissibilityReport admissibility_report(const Grid& g, const Potential& V) {
  AdmissibilityReport rep;
  if (V.is_zero()) {
    // the zero function is integrable but holds no bound state
    rep.v_l2 = rep.v_xl1 = rep.xvr_ok = rep.x2vrr_ok = true;
    rep.negatives = 0;
    rep.single_bound = false;
    return rep;
  }
  // Both families decay like a Gaussian, so the tail conditions always hold;
  // the origin is regular for Gaussian and r^{-a}-singular for CorePow. With
  // the volume weight r^2 dr the origin conditions read:
  //   V in L^2, xV_r and x^2V_rr in L^2 near 0  <=>  a < 3/2,
  //   |x| V in L^1 near 0                        <=>  a < 4,
  // and the family constructor already enforces a in (0, 3/2).
  const bool origin_ok = V.family != PotentialFamily::CorePow || V.a < 1.5;
  rep.v_l2 = origin_ok;
  rep.v_xl1 = V.family != PotentialFamily::CorePow || V.a < 4.0;
  rep.xvr_ok = origin_ok;
  rep.x2vrr_ok = origin_ok;
  double l2 = 0.0, xl1 = 0.0;
  for (int i = 0; i < g->n; ++i) {
    const double vi = V.value(g->r[i]);
    l2 += g->qw[i] * vi * vi;
    xl1 += g->qw[i] * g->r[i] * std::abs(vi);
  }
  rep.l2_norm = std::sqrt(l2);
  rep.xl1_norm = xl1;
  rep.negatives = negative_count(g, V);
  rep.single_bound = rep.negatives == 1;
  if (rep.negatives >= 1) rep.e0 = ground_eigenpair(g, V).e0;
  return rep;
}

Potential default_potential() {
  // Depth chosen inside the single-bound-state window of the calibration
  // grid scan (see calibration module); kept well away from both edges.
  return Potential::corepow(2.24351051406411, 1.0, 1.45);
}

Potential default_gaussian() { return Potential::gaussian(8.797618809936104, 1.0); }

}  // namespace nlsp
