// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "nlsp/modulation.hpp"

#include <algorithm>
#include <cmath>

namespace nlsp {

Thresholds default_thresholds(const BareFunctionals& fq) {
  Thresholds th;
  th.C_S = std::max(th.C_D, 2.0 + 1.0 / (fq.M * fq.H0));
  th.C_M = 2.0 * (1.0 + th.C_D) * (fq.E0 + fq.M);
  return th;
}

double chi_bump(double x) {
  const double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  auto glue = [](double s) { return (s > 0.0) ? std::exp(-1.0 / s) : 0.0; };
  const double up = glue(2.0 - a);
  return up / (up + glue(a - 1.0));
}

namespace {

cplx h1_inner(const RadialField& f, const RadialField& g) {
  return dirichlet_form(f, g) + cinner(f, g);
}

}  // namespace

Dist0 dist0(const Pencil& p, const RadialField& phi) {
  const cplx z = h1_inner(phi, p.Q);
  Dist0 out;
  out.theta = std::arg(z);
  const double sq = norm_h1sq(phi) + norm_h1sq(p.Q) - 2.0 * std::abs(z);
  out.d0 = std::sqrt(std::max(0.0, sq));
  return out;
}

double dist1_from_samples(const std::vector<double>& t, const std::vector<double>& ensq,
                          double center) {
  const size_t n = t.size();
  if (n < 3 || n != ensq.size()) throw Error("dist1_from_samples: need matching sample arrays");
  // composite Simpson on the uniform sample grid; a trapezoid closes the
  // final interval when the count is even
  const double dt = t[1] - t[0];
  if (dt <= 0.0) throw Error("dist1_from_samples: samples not increasing");
  bool uniform = true;
  for (size_t k = 0; k + 1 < n; ++k)
    if (std::abs(t[k + 1] - t[k] - dt) > 1e-9 * (1.0 + std::abs(dt))) uniform = false;
  double num = 0.0, den = 0.0;
  auto add = [&](double w, size_t k) {
    const double c = chi_bump(t[k] - center);
    num += w * c * ensq[k];
    den += w * c;
  };
  if (uniform) {
    size_t last = (n % 2 == 1) ? n - 1 : n - 2;
    for (size_t k = 0; k + 2 <= last; k += 2) {
      add(dt / 3.0, k);
      add(4.0 * dt / 3.0, k + 1);
      add(dt / 3.0, k + 2);
    }
    if (last != n - 1) {
      add(0.5 * dt, n - 2);
      add(0.5 * dt, n - 1);
    }
  } else {
    for (size_t k = 0; k + 1 < n; ++k) {
      const double w = 0.5 * (t[k + 1] - t[k]);
      add(w, k);
      add(w, k + 1);
    }
  }
  if (den <= 0.0) throw Error("dist1_from_samples: window not covered by samples");
  return std::sqrt(std::max(0.0, num / den));
}

double blend_dist(double d0v, double d1v, double delta_E) {
  const double c = chi_bump(d0v / delta_E);
  return c * d1v + (1.0 - c) * d0v;
}

Decomposition decompose(const Pencil& p, const RadialField& phi) {
  const cplx z = cinner(phi, p.Qp);
  Decomposition out;
  const double base = std::arg(z);
  double best = 1e300;
  for (int k = 0; k < 2; ++k) {
    const double th = base + k * pi;
    RadialField v = scaled(phi, std::polar(1.0, -th));
    axpy(cplx(-1.0, 0.0), p.Q, v);
    const double nn = norm_h1sq(v);
    if (nn < best) {
      best = nn;
      out.theta = th;
      out.v = std::move(v);
    }
  }
  SpectralSplit s = split_modes(p, out.v);
  out.lp = s.lp;
  out.lm = s.lm;
  out.d0 = dist0(p, phi).d0;
  return out;
}

Decomposition decompose_near(const Pencil& p, const RadialField& phi, double delta_D) {
  Decomposition out = decompose(p, phi);
  const double vn = std::sqrt(norm_h1sq(out.v));
  if (!(vn < delta_D))
    throw TooFarFromOrbit("decompose_near: ||v||_H1=" + std::to_string(vn) +
                          " at validity radius " + std::to_string(delta_D));
  return out;
}

double phase_rate(const Pencil& p, const RadialField& v) {
  const Grid& g = p.grid;
  double vq = 0.0, nqp = 0.0, qvqp = 0.0;
  for (int i = 0; i < g->n; ++i) {
    const double Qi = p.Q.v[i].real();
    const double Qpi = p.Qp.v[i].real();
    const cplx vi = v.v[i];
    vq += g->qw[i] * vi.real() * Qi;
    const cplx N = 2.0 * Qi * std::norm(vi) + Qi * vi * vi + std::norm(vi) * vi;
    nqp += g->qw[i] * N.real() * Qpi;
    qvqp += g->qw[i] * (Qi + vi.real()) * Qpi;
  }
  if (std::abs(qvqp) < 1e-8 * 0.5 * norm_l2sq(p.Q))
    throw DegenerateDenominator("phase_rate: <Q+v|Qp> vanishes, chart left");
  const double m = -(vq + nqp) / qvqp;
  return m - 1.0;
}

double VirialTable::eps_at(double d) const {
  if (d_lo.empty()) return 0.0;
  size_t k = 0;
  while (k + 1 < d_lo.size() && d >= d_lo[k + 1]) ++k;
  return eps_v[k];
}

double VirialTable::kappa_at(double d) const {
  if (d_lo.empty()) return 0.0;
  size_t k = 0;
  while (k + 1 < d_lo.size() && d >= d_lo[k + 1]) ++k;
  return kappa_v[k];
}

VirialTable VirialTable::conservative() {
  VirialTable vt;
  vt.d_lo = {0.0, 0.04, 0.1, 0.25};
  vt.eps_v = {0.005, 0.005, 0.005, 0.005};
  vt.kappa_v = {0.05, 0.05, 0.05, 0.05};
  return vt;
}

int sign_functional(const Pencil& p, const RadialField& phi, const Thresholds& th,
                    const VirialTable& vt, double d_override) {
  FrameFunctionals ff = evaluate_frame(phi, p.V, p.om);
  FrameFunctionals fq = evaluate_frame(p.Q, p.V, p.om);
  const double excess = ff.Aom - fq.Aom;
  const double d = (d_override > 0.0) ? d_override : dist0(p, phi).d0;
  if (!(excess < std::min(th.eps_S * th.eps_S, th.c_X * d * d)))
    throw SignDomain("action excess " + std::to_string(excess) +
                     " outside the admissible window at d=" + std::to_string(d));

  bool have = false;
  int sign = 0;
  auto put = [&](int s, const char* which) {
    if (s == 0) throw SignDomain(std::string("degenerate sign in case ") + which);
    if (have && s != sign)
      throw CaseOverlapDisagreement(std::string("cases disagree at case ") + which);
    have = true;
    sign = s;
  };

  if (th.C_S * ff.M * ff.H0 <= 1.0) put(+1, "small");
  if (d < 2.0 * th.delta_V) {
    Decomposition dec = decompose(p, phi);
    const double l1 = dec.lp + dec.lm;
    put((l1 > 1e-15) ? +1 : (l1 < -1e-15 ? -1 : 0), "near");
  }
  // A zero kappa entry marks a distance bin the sampler could not certify;
  // the virial case is unavailable there rather than trivially true.
  if (vt.kappa_at(d) > 0.0 && excess < vt.eps_at(d) * d * d && (ff.M + p.om * ff.H0) > th.C_M)
    put((ff.K2om > 0.0) ? +1 : (ff.K2om < 0.0 ? -1 : 0), "virial");

  if (!have) throw SignDomain("no sign case applies at d=" + std::to_string(d));
  return sign;
}

}  // namespace nlsp
