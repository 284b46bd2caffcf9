// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "nlsp/grid.hpp"

#include <algorithm>
#include <cmath>

namespace nlsp {

Grid make_grid(int n, double r_max) {
  if (n < 8 || r_max <= 0.0) throw Error("make_grid: need n >= 8 and r_max > 0");
  auto g = std::make_shared<RadialGrid>();
  g->n = n;
  g->r_max = r_max;
  g->h = r_max / n;
  g->r.resize(n);
  g->qw.resize(n);
  for (int i = 0; i < n; ++i) {
    g->r[i] = (i + 1) * g->h;
    g->qw[i] = 4.0 * pi * g->h * g->r[i] * g->r[i];
  }
  g->qw[n - 1] *= 0.5;
  return g;
}

RadialField field_from(const Grid& g, const std::function<cplx(double)>& f) {
  RadialField out(g);
  for (int i = 0; i < g->n; ++i) out.v[i] = f(g->r[i]);
  return out;
}

RadialField field_from_real(const Grid& g, const std::function<double(double)>& f) {
  RadialField out(g);
  for (int i = 0; i < g->n; ++i) out.v[i] = cplx(f(g->r[i]), 0.0);
  return out;
}

cplx cinner(const RadialField& f, const RadialField& g) {
  const auto& qw = f.grid->qw;
  cplx s(0.0);
  for (int i = 0; i < f.n(); ++i) s += qw[i] * f.v[i] * std::conj(g.v[i]);
  return s;
}

double rinner(const RadialField& f, const RadialField& g) { return cinner(f, g).real(); }

double norm_l2sq(const RadialField& f) {
  const auto& qw = f.grid->qw;
  double s = 0.0;
  for (int i = 0; i < f.n(); ++i) s += qw[i] * std::norm(f.v[i]);
  return s;
}

double norm_l4p4(const RadialField& f) {
  const auto& qw = f.grid->qw;
  double s = 0.0;
  for (int i = 0; i < f.n(); ++i) {
    double m = std::norm(f.v[i]);
    s += qw[i] * m * m;
  }
  return s;
}

cplx dirichlet_form(const RadialField& f, const RadialField& g) {
  // 4 pi / h * sum over segments of (w_j - w_{j-1}) conj(v_j - v_{j-1}),
  // ghosts w(0) = 0 and w(r_max + h) = 0.
  const auto& gr = *f.grid;
  int n = gr.n;
  cplx s(0.0);
  cplx wprev(0.0), vprev(0.0);
  for (int i = 0; i < n; ++i) {
    cplx w = gr.r[i] * f.v[i];
    cplx vv = gr.r[i] * g.v[i];
    s += (w - wprev) * std::conj(vv - vprev);
    wprev = w;
    vprev = vv;
  }
  s += wprev * std::conj(vprev);  // final segment to the outer zero ghost
  return s * (4.0 * pi / gr.h);
}

double norm_h1sq(const RadialField& f) { return dirichlet_form(f, f).real() + norm_l2sq(f); }

RadialField laplacian(const RadialField& f) {
  const auto& gr = *f.grid;
  int n = gr.n;
  RadialField out(f.grid);
  double ih2 = 1.0 / (gr.h * gr.h);
  for (int i = 0; i < n; ++i) {
    cplx wm = (i == 0) ? cplx(0.0) : gr.r[i - 1] * f.v[i - 1];
    cplx w0 = gr.r[i] * f.v[i];
    cplx wp = (i == n - 1) ? cplx(0.0) : gr.r[i + 1] * f.v[i + 1];
    out.v[i] = (wp - 2.0 * w0 + wm) * ih2 / gr.r[i];
  }
  return out;
}

RadialField radial_derivative(const RadialField& f) {
  // Differenced in f itself, not in w = r f: the w form is second order in w
  // but dividing by r costs a power of h at the first nodes.
  const auto& gr = *f.grid;
  int n = gr.n;
  RadialField out(f.grid);
  double i2h = 1.0 / (2.0 * gr.h);
  out.v[0] = (-3.0 * f.v[0] + 4.0 * f.v[1] - f.v[2]) * i2h;
  for (int i = 1; i < n - 1; ++i) out.v[i] = (f.v[i + 1] - f.v[i - 1]) * i2h;
  out.v[n - 1] = (3.0 * f.v[n - 1] - 4.0 * f.v[n - 2] + f.v[n - 3]) * i2h;
  return out;
}

namespace {

// Cubic Lagrange interpolation of w(r) = r f(r) at x >= 0, using odd
// extension through r = 0 (nodes ..., -h, 0, h, ...; w(0) = 0, w(-r) = -w(r))
// and zero beyond r_max.
cplx interp_w(const RadialGrid& gr, const std::vector<cplx>& w, double x) {
  int n = gr.n;
  double h = gr.h;
  if (x >= gr.r_max) return cplx(0.0);
  // Node index space: k holds radius k*h for k in Z; stored w at k >= 1 is
  // w[k-1]; w at k = 0 is 0; w at k < 0 is -w[-k-1]; w at k > n is 0.
  auto wk = [&](long k) -> cplx {
    if (k == 0) return cplx(0.0);
    if (k > 0) return (k <= n) ? w[k - 1] : cplx(0.0);
    long m = -k;
    return (m <= n) ? -w[m - 1] : cplx(0.0);
  };
  long k0 = static_cast<long>(std::floor(x / h));  // x in [k0 h, (k0+1) h)
  long ks = k0 - 1;                                // 4-point stencil ks..ks+3
  double t = x / h - ks;
  cplx acc(0.0);
  for (int j = 0; j < 4; ++j) {
    double lj = 1.0;
    for (int m = 0; m < 4; ++m) {
      if (m == j) continue;
      lj *= (t - m) / (j - m);
    }
    acc += lj * wk(ks + j);
  }
  return acc;
}

}  // namespace

RadialField rescale(const RadialField& f, double om, RescaleDir dir) {
  if (om <= 0.0) throw Error("rescale: om must be positive");
  const auto& gr = *f.grid;
  // Forward: amplitude om^{-1/2}, argument om^{-1/2} x.
  double s = (dir == RescaleDir::Forward) ? 1.0 / std::sqrt(om) : std::sqrt(om);
  double amp = s;
  auto w = to_w(f);
  RadialField out(f.grid);
  for (int i = 0; i < gr.n; ++i) {
    double x = s * gr.r[i];
    cplx wx = interp_w(gr, w, x);
    out.v[i] = (x > 0.0) ? amp * wx / x : cplx(0.0);
  }
  return out;
}

RadialField scaling_derivative(const RadialField& f, double p) {
  RadialField fr = radial_derivative(f);
  RadialField out(f.grid);
  double c = 3.0 / p;
  for (int i = 0; i < f.n(); ++i) out.v[i] = f.grid->r[i] * fr.v[i] + c * f.v[i];
  return out;
}

RadialField conj_field(const RadialField& f) {
  RadialField out(f.grid);
  for (int i = 0; i < f.n(); ++i) out.v[i] = std::conj(f.v[i]);
  return out;
}

void axpy(cplx a, const RadialField& x, RadialField& y) {
  for (int i = 0; i < y.n(); ++i) y.v[i] += a * x.v[i];
}

RadialField scaled(const RadialField& f, cplx a) {
  RadialField out(f.grid);
  for (int i = 0; i < f.n(); ++i) out.v[i] = a * f.v[i];
  return out;
}

RadialField added(const RadialField& f, const RadialField& g) {
  RadialField out(f.grid);
  for (int i = 0; i < f.n(); ++i) out.v[i] = f.v[i] + g.v[i];
  return out;
}

std::vector<cplx> to_w(const RadialField& f) {
  std::vector<cplx> w(f.n());
  for (int i = 0; i < f.n(); ++i) w[i] = f.grid->r[i] * f.v[i];
  return w;
}

RadialField from_w(const Grid& g, const std::vector<cplx>& w) {
  RadialField out(g);
  for (int i = 0; i < g->n; ++i) out.v[i] = w[i] / g->r[i];
  return out;
}

RadialField random_field(const Grid& g, Rng& rng, double amplitude) {
  RadialField out(g);
  int nb = 2 + static_cast<int>(rng.uniform(0.0, 3.0));
  double rm = g->r_max;
  for (int b = 0; b < nb; ++b) {
    double r0 = rng.uniform(0.0, 0.35 * rm);
    double s = rng.uniform(0.6, 3.0);
    cplx a = cplx(rng.normal(), rng.normal()) * (amplitude / std::sqrt(2.0 * nb));
    for (int i = 0; i < g->n; ++i) {
      double r = g->r[i];
      // even bump in r (adds the mirror bump) so f has a regular origin
      double e = std::exp(-0.5 * (r - r0) * (r - r0) / (s * s)) +
                 std::exp(-0.5 * (r + r0) * (r + r0) / (s * s));
      out.v[i] += a * e;
    }
  }
  // enforce Dirichlet compatibility: taper smoothly to zero at r_max
  for (int i = 0; i < g->n; ++i) {
    double x = (rm - g->r[i]) / (0.15 * rm);
    double taper = (x >= 1.0) ? 1.0 : x * x * (3.0 - 2.0 * x);
    out.v[i] *= taper;
  }
  out.v[g->n - 1] = 0.0;
  return out;
}

}  // namespace nlsp
