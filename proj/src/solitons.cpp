// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "nlsp/solitons.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlsp/band.hpp"

namespace nlsp {
namespace {

// State (Q, P=Q') of Q'' + (2/r) Q' - Q + Q^3 = 0 away from r = 0.
struct OdeState {
  double q, p;
};

OdeState ode_rhs(double r, const OdeState& y) {
  return {y.p, y.q - y.q * y.q * y.q - 2.0 * y.p / r};
}

OdeState rk4_step(double r, const OdeState& y, double dt) {
  OdeState k1 = ode_rhs(r, y);
  OdeState k2 = ode_rhs(r + dt / 2, {y.q + dt / 2 * k1.q, y.p + dt / 2 * k1.p});
  OdeState k3 = ode_rhs(r + dt / 2, {y.q + dt / 2 * k2.q, y.p + dt / 2 * k2.p});
  OdeState k4 = ode_rhs(r + dt, {y.q + dt * k3.q, y.p + dt * k3.p});
  return {y.q + dt / 6 * (k1.q + 2 * k2.q + 2 * k3.q + k4.q),
          y.p + dt / 6 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p)};
}

// Series start: Q = b + c2 r^2 + c4 r^4, 6 c2 = b - b^3, 20 c4 = c2 (1 - 3 b^2).
OdeState series_start(double b, double r0) {
  const double c2 = (b - b * b * b) / 6.0;
  const double c4 = c2 * (1.0 - 3.0 * b * b) / 20.0;
  return {b + c2 * r0 * r0 + c4 * r0 * r0 * r0 * r0, 2.0 * c2 * r0 + 4.0 * c4 * r0 * r0 * r0};
}

// Shooting dichotomy: a zero crossing means Q(0) was too large, a positive
// turning point (outside the initial dip) means it was too small.
bool shoot_is_high(double b, double r_end) {
  const double r0 = 1e-3;
  OdeState y = series_start(b, r0);
  double r = r0;
  const double dt = 5e-4;
  while (r < r_end) {
    y = rk4_step(r, y, dt);
    r += dt;
    if (y.q < 0.0) return true;
    if (y.p > 0.0 && r > 1.0 && y.q < 0.9 * b) return false;
  }
  return y.q < 0.0;
}

}  // namespace

FreeGround compute_free_ground(const Grid& g) {
  const int n = g->n;
  const double h = g->h;
  const double r_end = std::min(g->r_max, 35.0);

  double lo = 1.2, hi = 8.0;
  if (shoot_is_high(lo, r_end) || !shoot_is_high(hi, r_end))
    throw BracketFailure("free ground state: initial shooting bracket invalid");
  for (int it = 0; it < 64 && (hi - lo) > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shoot_is_high(mid, r_end) ? hi : lo) = mid;
  }
  const double b0 = 0.5 * (lo + hi);

  // Sample the shooting solution at the grid nodes to seed Newton.
  std::vector<double> q(n, 0.0);
  {
    const int sub = std::max(1, static_cast<int>(std::ceil(h / 5e-4)));
    const double dt = h / sub;
    const double r0 = 1e-3;
    OdeState y = series_start(b0, r0);
    // Bridge from r0 to the first node with fine steps.
    const int nb = 64;
    for (int k = 0; k < nb; ++k) y = rk4_step(r0 + k * (h - r0) / nb, y, (h - r0) / nb);
    int last = 0;
    q[0] = y.q;
    for (int i = 1; i < n; ++i) {
      for (int k = 0; k < sub; ++k) y = rk4_step(g->r[i - 1] + k * dt, y, dt);
      if (y.q < 1e-15 || y.p > 0.0) break;
      q[i] = y.q;
      last = i;
    }
    for (int i = last + 1; i < n; ++i)
      q[i] = q[last] * (g->r[last] / g->r[i]) * std::exp(-(g->r[i] - g->r[last]));
  }

  // Newton on w = r Q: F(w) = w'' - w + w^3/r^2 with w(0) = w(r_max) = 0.
  const int m = n - 1;  // active nodes, the r_max node stays pinned
  std::vector<double> w(m), dw(m), F(m);
  for (int i = 0; i < m; ++i) w[i] = g->r[i] * q[i];
  const double ih2 = 1.0 / (h * h);
  BandedLU<double> lu;
  double fnorm = 0.0;
  for (int it = 0; it < 40; ++it) {
    for (int i = 0; i < m; ++i) {
      const double wl = (i > 0) ? w[i - 1] : 0.0;
      const double wr = (i + 1 < m) ? w[i + 1] : 0.0;
      const double ri = g->r[i];
      F[i] = (wl - 2.0 * w[i] + wr) * ih2 - w[i] + w[i] * w[i] * w[i] / (ri * ri);
    }
    lu.init(m, 1, 1);
    for (int i = 0; i < m; ++i) {
      const double ri = g->r[i];
      lu.set(i, i, -2.0 * ih2 - 1.0 + 3.0 * w[i] * w[i] / (ri * ri));
      if (i > 0) lu.set(i, i - 1, ih2);
      if (i + 1 < m) lu.set(i, i + 1, ih2);
    }
    lu.factor();
    dw = F;
    lu.solve(dw);
    double dmax = 0.0, wmax = 0.0;
    for (int i = 0; i < m; ++i) {
      w[i] -= dw[i];
      dmax = std::max(dmax, std::abs(dw[i]));
      wmax = std::max(wmax, std::abs(w[i]));
    }
    fnorm = 0.0;
    for (int i = 0; i < m; ++i) fnorm += g->qw[i] * (F[i] / g->r[i]) * (F[i] / g->r[i]);
    fnorm = std::sqrt(fnorm);
    if (dmax < 1e-14 * wmax) break;
  }

  FreeGround out;
  out.Q.grid = g;
  out.Q.v.assign(n, cplx(0.0, 0.0));
  for (int i = 0; i < m; ++i) out.Q.v[i] = w[i] / g->r[i];
  out.b0 = b0;
  out.residual = fnorm;
  return out;
}

namespace {

// Residual of the frame equation in w form on the active nodes:
// F_i = (-w_{i-1} + 2 w_i - w_{i+1})/h^2 + (1 + Vom_i) w_i - w_i^3 / r_i^2.
void frame_residual_w(const Grid& g, const Potential& V, double om, const std::vector<double>& w,
                      std::vector<double>& F) {
  const int m = static_cast<int>(w.size());
  const double ih2 = 1.0 / (g->h * g->h);
  F.resize(m);
  for (int i = 0; i < m; ++i) {
    const double wl = (i > 0) ? w[i - 1] : 0.0;
    const double wr = (i + 1 < m) ? w[i + 1] : 0.0;
    const double ri = g->r[i];
    F[i] = (-wl + 2.0 * w[i] - wr) * ih2 + (1.0 + V.value_om(ri, om)) * w[i] -
           w[i] * w[i] * w[i] / (ri * ri);
  }
}

double l2_of_w_residual(const Grid& g, const std::vector<double>& F) {
  double s = 0.0;
  for (size_t i = 0; i < F.size(); ++i) s += g->qw[i] * (F[i] / g->r[i]) * (F[i] / g->r[i]);
  return std::sqrt(s);
}

}  // namespace

SolitonPoint excited_soliton(const Grid& g, const RadialField& Q, const Potential& V, double om) {
  const int n = g->n;
  const int m = n - 1;
  const double h = g->h;
  const double ih2 = 1.0 / (h * h);
  if (om <= 0.0) throw Error("excited_soliton: om must be positive");

  // Potential-free Lplus in w form, factored once.
  BandedLU<double> lu;
  lu.init(m, 1, 1);
  for (int i = 0; i < m; ++i) {
    const double Qi = Q.v[i].real();
    lu.set(i, i, 2.0 * ih2 + 1.0 - 3.0 * Qi * Qi);
    if (i > 0) lu.set(i, i - 1, -ih2);
    if (i + 1 < m) lu.set(i, i + 1, -ih2);
  }
  lu.factor();

  RadialField v = field_from(g, [](double) { return 0.0; });
  std::vector<double> rhs(m);
  double prev_delta = 1e300;
  int grow = 0;
  int iters = 0;
  for (int it = 1; it <= 500; ++it) {
    iters = it;
    for (int i = 0; i < m; ++i) {
      const double Qi = Q.v[i].real();
      const double vi = v.v[i].real();
      const double f = 3.0 * Qi * vi * vi + vi * vi * vi - V.value_om(g->r[i], om) * (Qi + vi);
      rhs[i] = g->r[i] * f;
    }
    lu.solve(rhs);
    RadialField vnew = v;
    for (int i = 0; i < m; ++i) vnew.v[i] = rhs[i] / g->r[i];
    vnew.v[n - 1] = 0.0;
    RadialField diff = added(vnew, scaled(v, -1.0));
    const double delta = std::sqrt(norm_h1sq(diff));
    v = vnew;
    if (delta < 1e-12) break;
    if (delta > prev_delta) {
      if (++grow >= 3 || delta > 1e3)
        throw ContractionDiverged("excited_soliton: fixed point diverges at om=" +
                                  std::to_string(om));
    } else {
      grow = 0;
    }
    prev_delta = delta;
    if (it == 500)
      throw ContractionDiverged("excited_soliton: no convergence in 500 iterations at om=" +
                                std::to_string(om));
  }

  SolitonPoint out;
  out.om = om;
  out.vnorm_h1 = std::sqrt(norm_h1sq(v));
  out.iterations = iters;
  out.Qom = added(Q, v);
  out.Qom.v[n - 1] = 0.0;

  // Two Newton polish steps on the full frame equation push the residual to
  // roundoff; the Jacobian here is Lplus^om in w form.
  std::vector<double> w(m), F(m);
  for (int i = 0; i < m; ++i) w[i] = g->r[i] * out.Qom.v[i].real();
  BandedLU<double> lup;
  for (int polish = 0; polish < 2; ++polish) {
    frame_residual_w(g, V, om, w, F);
    lup.init(m, 1, 1);
    for (int i = 0; i < m; ++i) {
      const double ri = g->r[i];
      lup.set(i, i, 2.0 * ih2 + 1.0 + V.value_om(ri, om) - 3.0 * w[i] * w[i] / (ri * ri));
      if (i > 0) lup.set(i, i - 1, -ih2);
      if (i + 1 < m) lup.set(i, i + 1, -ih2);
    }
    lup.factor();
    std::vector<double> dw = F;
    lup.solve(dw);
    for (int i = 0; i < m; ++i) w[i] -= dw[i];
  }
  for (int i = 0; i < m; ++i) out.Qom.v[i] = w[i] / g->r[i];
  frame_residual_w(g, V, om, w, F);
  out.residual = l2_of_w_residual(g, F);

  // d/dom direction: Lplus^om Qp = -Q_om (lup holds the converged Jacobian).
  std::vector<double> wp(m);
  for (int i = 0; i < m; ++i) wp[i] = -w[i];
  lup.solve(wp);
  out.Qp.grid = g;
  out.Qp.v.assign(n, cplx(0.0, 0.0));
  for (int i = 0; i < m; ++i) out.Qp.v[i] = wp[i] / g->r[i];
  return out;
}

GroundBranchPoint ground_branch(const Grid& g, const GroundEigen& ge, const Potential& V,
                                cplx z) {
  const int n = g->n;
  const int m = n - 1;
  const double h = g->h;
  const double ih2 = 1.0 / (h * h);
  const double a = std::abs(z);

  GroundBranchPoint out;
  out.z = z;
  if (a == 0.0) {
    out.Omega = -ge.e0;
    out.Phi = field_from(g, [](double) { return 0.0; });
    return out;
  }

  std::vector<double> wphi(m);
  for (int i = 0; i < m; ++i) wphi[i] = g->r[i] * ge.phi0.v[i].real();
  const double wphi2 = [&] {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += wphi[i] * wphi[i];
    return s;
  }();

  // Real iteration for Phi = a phi0 + gamma, gamma perp phi0.
  std::vector<double> gam(m, 0.0), Phi(m), rhs(m), x1(m), x2(m);
  double Omega = -ge.e0;
  double prev_delta = 1e300;
  int grow = 0;
  BandedLU<double> lu;
  for (int it = 1; it <= 400; ++it) {
    out.iterations = it;
    for (int i = 0; i < m; ++i) Phi[i] = a * ge.phi0.v[i].real() + gam[i] / g->r[i];
    // Omega from the phi0 projection of (H + Omega) Phi = Phi^3.
    double proj = 0.0;
    for (int i = 0; i < m; ++i)
      proj += g->qw[i] * ge.phi0.v[i].real() * Phi[i] * Phi[i] * Phi[i];
    const double Omega_new = -ge.e0 + proj / a;
    // gamma from the complementary part, solved with the phi0 row deflated.
    for (int i = 0; i < m; ++i) {
      const double f = Phi[i] * Phi[i] * Phi[i] - proj * ge.phi0.v[i].real();
      rhs[i] = g->r[i] * f;
    }
    lu.init(m, 1, 1);
    for (int i = 0; i < m; ++i) {
      lu.set(i, i, 2.0 * ih2 + V.value(g->r[i]) + Omega_new);
      if (i > 0) lu.set(i, i - 1, -ih2);
      if (i + 1 < m) lu.set(i, i + 1, -ih2);
    }
    lu.factor();
    x1 = rhs;
    lu.solve(x1);
    x2 = wphi;
    lu.solve(x2);
    double b1 = 0.0, b2 = 0.0;
    for (int i = 0; i < m; ++i) {
      b1 += wphi[i] * x1[i];
      b2 += wphi[i] * x2[i];
    }
    if (std::abs(b2) < 1e-300)
      throw ContractionDiverged("ground_branch: deflated solve degenerate");
    double delta = 0.0;
    for (int i = 0; i < m; ++i) {
      const double gi = x1[i] - x2[i] * (b1 / b2);
      delta = std::max(delta, std::abs(gi - gam[i]) / g->r[i]);
      gam[i] = gi;
    }
    delta += std::abs(Omega_new - Omega);
    Omega = Omega_new;
    if (delta < 1e-13 * std::max(a, 1e-8)) break;
    if (delta > prev_delta) {
      if (++grow >= 4 || delta > 1e3)
        throw ContractionDiverged("ground_branch: iteration diverges at |z|=" +
                                  std::to_string(a));
    } else {
      grow = 0;
    }
    prev_delta = delta;
    if (it == 400)
      throw ContractionDiverged("ground_branch: no convergence in 400 iterations at |z|=" +
                                std::to_string(a));
  }

  // Enforce exact orthogonality of the quadrature inner product, then rotate.
  double dot = 0.0;
  for (int i = 0; i < m; ++i) dot += wphi[i] * gam[i];
  for (int i = 0; i < m; ++i) gam[i] -= wphi[i] * (dot / wphi2);

  RadialField gf;
  gf.grid = g;
  gf.v.assign(n, cplx(0.0, 0.0));
  for (int i = 0; i < m; ++i) gf.v[i] = gam[i] / g->r[i];
  out.gamma_h1 = std::sqrt(norm_h1sq(gf));
  out.Omega = Omega;
  out.Phi.grid = g;
  out.Phi.v.assign(n, cplx(0.0, 0.0));
  const cplx phase = (a > 0.0) ? z / a : cplx(1.0, 0.0);
  for (int i = 0; i < m; ++i)
    out.Phi.v[i] = phase * (a * ge.phi0.v[i].real() + gam[i] / g->r[i]);
  return out;
}

EnergyCurves energy_curves(const Grid& g, const RadialField& Q, const Potential& V, double om_lo,
                           double om_hi, int n_points) {
  if (n_points < 5) throw Error("energy_curves: need at least 5 points");
  EnergyCurves ec;
  ec.om.resize(n_points);
  ec.mu.resize(n_points);
  ec.E1.resize(n_points);
  const double s_lo = std::log(om_lo), s_hi = std::log(om_hi);
  const double ds = (s_hi - s_lo) / (n_points - 1);
  for (int j = 0; j < n_points; ++j) {
    const double om = std::exp(s_lo + j * ds);
    SolitonPoint sp = excited_soliton(g, Q, V, om);
    FrameFunctionals ff = evaluate_frame(sp.Qom, V, om);
    ec.om[j] = om;
    ec.mu[j] = ff.M / std::sqrt(om);
    ec.E1[j] = ff.Eom * std::sqrt(om);
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  ec.E1p.assign(n_points, nan);
  ec.E1pp.assign(n_points, nan);
  auto d4 = [&](const std::vector<double>& f, int j) {
    return (-f[j + 2] + 8.0 * f[j + 1] - 8.0 * f[j - 1] + f[j - 2]) / (12.0 * ds);
  };
  std::vector<double> dmu(n_points, nan);
  for (int j = 2; j + 2 < n_points; ++j) {
    dmu[j] = d4(ec.mu, j);
    ec.E1p[j] = d4(ec.E1, j) / dmu[j];
  }
  for (int j = 4; j + 4 < n_points; ++j) ec.E1pp[j] = d4(ec.E1p, j) / dmu[j];
  return ec;
}

}  // namespace nlsp
