// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "nlsp/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlsp {

RadialField manifold_state(const Pencil& p, double lp, double lm, const RadialField* zeta) {
  RadialField u = p.Q;
  const int n = p.grid->n;
  for (int i = 0; i < n; ++i) {
    const double re = (lp + lm) * p.g1.v[i].real();
    const double im = (lp - lm) * p.g2.v[i].real();
    u.v[i] += cplx(re, im);
    if (zeta) u.v[i] += zeta->v[i];
  }
  u.v[n - 1] = 0.0;
  return u;
}

namespace {

// -1 / +1: ejected with that unstable sign; 0: stayed within delta_X.
int probe_sign(const Pencil& p, const Thresholds& th, const RadialField* zeta, double lp,
               double lm, const ManifoldOptions& opts, double horizon) {
  RadialField u = manifold_state(p, lp, lm, zeta);
  EjectionProbe pr = ejection_probe(p, th, std::move(u), opts.evolve, horizon);
  return pr.ejected ? pr.sign : 0;
}

}  // namespace

ManifoldPoint bisect_graph(const Pencil& p, const Thresholds& th, const RadialField* zeta,
                           double lm, const ManifoldOptions& opts) {
  ManifoldPoint out;
  out.lm = lm;
  if (zeta) {
    SpectralSplit s = split_modes(p, *zeta);
    out.zeta_ensq = energy_norm_sq(p, *zeta);
    if (std::abs(s.lp) > 1e-10 || std::abs(s.lm) > 1e-10)
      throw Error("bisect_graph: zeta carries lambda components");
  }
  const double horizon = opts.horizon_per_alpha / p.alpha;

  double delta = std::max(opts.bracket_init, 4.0 * (lm * lm + out.zeta_ensq));
  delta = std::min(delta, 0.5 * th.delta_X);
  int shi = 0, slo = 0;
  int widen = 0;
  for (; widen < 6; ++widen) {
    shi = probe_sign(p, th, zeta, +delta, lm, opts, horizon);
    out.probes++;
    slo = probe_sign(p, th, zeta, -delta, lm, opts, horizon);
    out.probes++;
    if (shi == +1 && slo == -1) break;
    delta *= 4.0;
    if (delta > 0.5 * th.delta_X)
      throw BracketFailure("bisect_graph: bracket exceeds delta_X/2 at lm=" +
                           std::to_string(lm));
  }
  if (widen == 6) throw BracketFailure("bisect_graph: no sign change bracket found");

  double lo = -delta, hi = +delta;
  while (hi - lo > opts.b_tol && out.probes < opts.max_probes) {
    const double mid = 0.5 * (lo + hi);
    const int s = probe_sign(p, th, zeta, mid, lm, opts, horizon);
    out.probes++;
    if (s == 0) {  // trapped through the whole horizon: on the graph
      out.G = mid;
      out.certified = true;
      out.bracket = hi - lo;
      return out;
    }
    (s > 0 ? hi : lo) = mid;
  }
  if (hi - lo > opts.b_tol)
    throw HorizonExhausted("bisect_graph: probe budget exhausted before b_tol");
  out.G = 0.5 * (lo + hi);
  out.bracket = hi - lo;
  return out;
}

IntersectionPoint intersection_point(const Pencil& p, const Thresholds& th,
                                     const RadialField* zeta, const ManifoldOptions& opts,
                                     double tol, int max_sweeps) {
  IntersectionPoint ip;
  RadialField zbar;
  const RadialField* zbar_ptr = nullptr;
  if (zeta) {
    zbar = conj_field(*zeta);
    zbar_ptr = &zbar;
  }
  for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
    ip.sweeps = sweep;
    const double lp_new = bisect_graph(p, th, zeta, ip.lm, opts).G;
    const double lm_new = bisect_graph(p, th, zbar_ptr, lp_new, opts).G;
    const double change = std::max(std::abs(lp_new - ip.lp), std::abs(lm_new - ip.lm));
    ip.lp = lp_new;
    ip.lm = lm_new;
    if (change < tol) {
      ip.converged = true;
      break;
    }
  }
  return ip;
}

NineClassReport nine_class_explorer(const Pencil& p, const Thresholds& th,
                                    const RadialField* zeta, double eps,
                                    const ManifoldOptions& opts) {
  NineClassReport rep;
  rep.eps = eps;
  const bool zero_zeta = (zeta == nullptr) || (energy_norm_sq(p, *zeta) < 1e-24);
  if (zero_zeta) {
    rep.base.converged = true;  // G(0,0) = 0: the soliton itself is the witness
  } else {
    rep.base = intersection_point(p, th, zeta, opts);
  }
  RadialField zbar;
  const RadialField* zbar_ptr = nullptr;
  if (zeta) {
    zbar = conj_field(*zeta);
    zbar_ptr = &zbar;
  }

  int k = 0;
  for (int sf = -1; sf <= 1; ++sf) {
    for (int sb = -1; sb <= 1; ++sb) {
      NineClassEntry& e = rep.entries[k++];
      e.sf = sf;
      e.sb = sb;
      if (sf == 0 && sb == 0) {
        e.lp0 = rep.base.lp;
        e.lm0 = rep.base.lm;
      } else if (sf == 0) {
        e.lm0 = rep.base.lm + sb * eps;
        e.lp0 = bisect_graph(p, th, zeta, e.lm0, opts).G;
      } else if (sb == 0) {
        e.lp0 = rep.base.lp + sf * eps;
        e.lm0 = bisect_graph(p, th, zbar_ptr, e.lp0, opts).G;
      } else {
        e.lp0 = rep.base.lp + sf * eps;
        e.lm0 = rep.base.lm + sb * eps;
      }

      RadialField u0 = manifold_state(p, e.lp0, e.lm0, zeta);
      ClassifyResult fwd = classify_trajectory(p, th, u0, opts.evolve);
      e.forward_out = fwd.outcome;
      e.forward_t_end = fwd.t_end;
      RadialField ub = conj_field(manifold_state(p, e.lp0, e.lm0, zeta));
      ClassifyResult bwd = classify_trajectory(p, th, ub, opts.evolve);
      e.backward_out = bwd.outcome;
      e.backward_t_end = bwd.t_end;
    }
  }
  return rep;
}

std::vector<RadialField> center_basis(const Pencil& p, int count) {
  const Grid& g = p.grid;
  const int m = g->n - 1;
  const double ih2 = 1.0 / (g->h * g->h);
  SymTridiag lm;
  lm.d.resize(m);
  lm.e.assign(m - 1, -ih2);
  for (int i = 0; i < m; ++i) lm.d[i] = 2.0 * ih2 + p.lm_pot[i];

  // Each non-kernel mode contributes a real and an imaginary center
  // direction once the lambda modes and the phase direction are removed.
  std::vector<RadialField> out;
  for (int mode = 1; static_cast<int>(out.size()) < count && mode <= count + 4; ++mode) {
    TridiagEigen te = tridiag_eigen_k(lm, mode);
    RadialField f;
    f.grid = g;
    f.v.assign(g->n, cplx(0.0, 0.0));
    for (int i = 0; i < m; ++i) f.v[i] = te.vec[i] / g->r[i];
    for (int variant = 0; variant < 2 && static_cast<int>(out.size()) < count; ++variant) {
      RadialField fv = (variant == 0) ? f : scaled(f, cplx(0.0, 1.0));
      fv = project_z(p, fv);
      const double en = energy_norm_sq(p, fv);
      if (en < 1e-20) continue;
      out.push_back(scaled(fv, 1.0 / std::sqrt(en)));
    }
  }
  if (static_cast<int>(out.size()) < count)
    throw Error("center_basis: not enough independent center directions");
  return out;
}

}  // namespace nlsp
