// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "nlsp/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "nlsp/functionals.hpp"

namespace nlsp {
namespace {

double smoothstep5(double s) {  // quintic, C^2 flat at both ends
  s = std::clamp(s, 0.0, 1.0);
  return s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

}  // namespace

Stepper::Stepper(Grid g, const Potential& V, double om, StepperOptions opts)
    : grid_(std::move(g)), V_(V), om_(om), opts_(opts) {
  const int n = grid_->n;
  vom_.resize(n);
  sigma_.assign(n, 0.0);
  vmax_ = 0.0;
  for (int i = 0; i < n; ++i) {
    vom_[i] = V_.value_om(grid_->r[i], om_);
    vmax_ = std::max(vmax_, std::abs(vom_[i]));
  }
  if (opts_.sponge) {
    const double r0 = (1.0 - opts_.sponge_width_frac) * grid_->r_max;
    for (int i = 0; i < n; ++i)
      sigma_[i] = opts_.sponge_strength *
                  smoothstep5((grid_->r[i] - r0) / (grid_->r_max - r0));
  }
}

void Stepper::phase_half(RadialField& u, double tau) const {
  const int n = grid_->n;
  for (int i = 0; i < n; ++i) {
    const double phase = -(tau / 2.0) * (vom_[i] - std::norm(u.v[i]));
    cplx factor = std::polar(1.0, phase);
    if (opts_.sponge && sigma_[i] > 0.0) factor *= std::exp(-(tau / 2.0) * sigma_[i]);
    u.v[i] *= factor;
  }
  u.v[n - 1] = 0.0;
}

void Stepper::linear_full(RadialField& u, double tau) {
  const int n = grid_->n;
  const int m = n - 1;
  const double ih2 = 1.0 / (grid_->h * grid_->h);
  if (tau != cn_tau_) {
    // (1 - i tau/2 D2) w+ = (1 + i tau/2 D2) w, a Cayley pair in w space.
    cn_.init(m, 1, 1);
    const cplx off = cplx(0.0, -tau / 2.0) * ih2;  // -i tau/2 times the +ih2 offdiag of D2
    const cplx diag = 1.0 + cplx(0.0, tau) * ih2;  // 1 - i tau/2 times the -2 ih2 diag
    for (int i = 0; i < m; ++i) {
      cn_.set(i, i, diag);
      if (i > 0) cn_.set(i, i - 1, off);
      if (i + 1 < m) cn_.set(i, i + 1, off);
    }
    cn_.factor();
    cn_tau_ = tau;
  }
  std::vector<cplx> w(m), rhs(m);
  for (int i = 0; i < m; ++i) w[i] = grid_->r[i] * u.v[i];
  const cplx ia = cplx(0.0, tau / 2.0) * ih2;
  for (int i = 0; i < m; ++i) {
    cplx s = (1.0 - cplx(0.0, tau) * ih2) * w[i];
    if (i > 0) s += ia * w[i - 1];
    if (i + 1 < m) s += ia * w[i + 1];
    rhs[i] = s;
  }
  cn_.solve(rhs);
  for (int i = 0; i < m; ++i) u.v[i] = rhs[i] / grid_->r[i];
  u.v[n - 1] = 0.0;
}

double Stepper::energy(const RadialField& u) const {
  double s = 0.5 * dirichlet_form(u, u).real();
  for (int i = 0; i < grid_->n; ++i) {
    const double a = std::norm(u.v[i]);
    s += grid_->qw[i] * (0.5 * vom_[i] * a - 0.25 * a * a);
  }
  return s;
}

double Stepper::step(RadialField& u) {
  double umax2 = 0.0;
  for (const cplx& z : u.v) umax2 = std::max(umax2, std::norm(z));
  double tau = std::min(opts_.dt, opts_.clamp_c / (umax2 + vmax_ + 1.0));
  const double e0 = energy(u);
  for (int attempt = 0; attempt < 30; ++attempt) {
    RadialField trial = u;
    phase_half(trial, tau);
    linear_full(trial, tau);
    phase_half(trial, tau);
    const double e1 = energy(trial);
    const double rate = std::abs(e1 - e0) / (std::max(1.0, std::abs(e0)) * tau);
    if (rate <= opts_.drift_rate_tol || opts_.sponge) {
      u = std::move(trial);
      return tau;
    }
    ++rejections_;
    tau /= 2.0;
    if (tau < opts_.dt_min)
      throw StepFailure("step collapsed below dt_min (energy drift rate " +
                        std::to_string(rate) + ")");
  }
  throw StepFailure("too many step rejections");
}

void Stepper::advance(RadialField& u, double T) {
  double t = 0.0;
  while (t < T) {
    const double remaining = T - t;
    double umax2 = 0.0;
    for (const cplx& z : u.v) umax2 = std::max(umax2, std::norm(z));
    double tau = std::min(opts_.dt, opts_.clamp_c / (umax2 + vmax_ + 1.0));
    if (tau >= remaining) {
      RadialField trial = u;
      phase_half(trial, remaining);
      linear_full(trial, remaining);
      phase_half(trial, remaining);
      u = std::move(trial);
      return;
    }
    t += step(u);
  }
}

void evolve_backward(Stepper& st, RadialField& u, double T) {
  u = conj_field(u);
  st.advance(u, T);
  u = conj_field(u);
}

namespace {

// Blow-up side plateau: phi(rho) = rho below 1, 3/2 above 2; the glue is the
// quintic smoothstep, whose integral over the shoulder is exactly 1/2.
double phi_ap(double rho) {  // phi'
  if (rho <= 1.0) return 1.0;
  if (rho >= 2.0) return 0.0;
  return smoothstep5(2.0 - rho);
}
double phi_val(double rho) {
  if (rho <= 1.0) return rho;
  if (rho >= 2.0) return 1.5;
  const double s = 2.0 - rho;
  const double P = s * s * s * s * (2.5 + s * (-3.0 + s));  // antiderivative
  return 1.5 - P;
}
double phi_app(double rho) {  // phi''
  if (rho <= 1.0 || rho >= 2.0) return 0.0;
  const double s = 2.0 - rho;
  return -(30.0 * s * s * (1.0 - s) * (1.0 - s));  // -S'(s) * ds/drho with ds/drho = -1
}
double phi_appp(double rho) {  // phi'''
  if (rho <= 1.0 || rho >= 2.0) return 0.0;
  const double s = 2.0 - rho;
  return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s);
}

}  // namespace

double VirialProfile::a(double r) const {
  const double rho = r / m;
  return (kind == 0) ? m * phi_val(rho) : r / (1.0 + rho);
}
double VirialProfile::ap(double r) const {
  const double rho = r / m;
  if (kind == 0) return phi_ap(rho);
  const double q = 1.0 + rho;
  return 1.0 / (q * q);
}
double VirialProfile::app(double r) const {
  const double rho = r / m;
  if (kind == 0) return phi_app(rho) / m;
  const double q = 1.0 + rho;
  return -2.0 / (m * q * q * q);
}
double VirialProfile::appp(double r) const {
  const double rho = r / m;
  if (kind == 0) return phi_appp(rho) / (m * m);
  const double q = 1.0 + rho;
  return 6.0 / (m * m * q * q * q * q);
}
double VirialProfile::a_over_r(double r) const {
  const double rho = r / m;
  if (kind == 0) return (rho < 1e-8) ? 1.0 : phi_val(rho) / rho;
  return 1.0 / (1.0 + rho);
}

VirialProfile blowup_profile(double m) {
  VirialProfile pr;
  pr.m = m;
  pr.kind = 0;
  return pr;
}

VirialProfile scatter_profile(double m) {
  VirialProfile pr;
  pr.m = m;
  pr.kind = 1;
  return pr;
}

double virial_value(const RadialField& u, const VirialProfile& pr) {
  RadialField ur = radial_derivative(u);
  double s = 0.0;
  for (int i = 0; i < u.grid->n; ++i) {
    const double r = u.grid->r[i];
    s += u.grid->qw[i] * pr.a(r) * std::imag(std::conj(u.v[i]) * ur.v[i]);
  }
  return s;
}

double virial_rate(const RadialField& u, const Potential& V, double om,
                   const VirialProfile& pr) {
  RadialField ur = radial_derivative(u);
  double s = 0.0;
  for (int i = 0; i < u.grid->n; ++i) {
    const double r = u.grid->r[i];
    const double q = u.grid->qw[i];
    const double u2 = std::norm(u.v[i]);
    s += q * 2.0 * pr.ap(r) * std::norm(ur.v[i]);
    s -= q * (2.0 * pr.app(r) / r + 0.5 * pr.appp(r)) * u2;
    s -= q * pr.a_over_r(r) * V.rVr_om(r, om) * u2;
    s -= q * 0.5 * (pr.ap(r) + 2.0 * pr.a_over_r(r)) * u2 * u2;
  }
  return s;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Trapped: return "trapped";
    case Outcome::BlowUp: return "blowup";
    case Outcome::Scatter: return "scatter";
    default: return "undetermined";
  }
}

namespace {

TraceSample take_sample(const Pencil& p, const Thresholds&, const RadialField& u, double t,
                        double r_core) {
  TraceSample ts;
  ts.t = t;
  Decomposition dec = decompose(p, u);
  ts.d0 = dec.d0;
  ts.lp = dec.lp;
  ts.lm = dec.lm;
  ts.ensq = energy_norm_sq(p, dec.v);
  // the norm is a sum of squares, so the zeta block is the lambda-free rest
  ts.zeta_ensq = std::max(0.0, ts.ensq - dec.lp * dec.lp - dec.lm * dec.lm);
  for (const cplx& z : u.v) ts.umax2 = std::max(ts.umax2, std::norm(z));
  FrameFunctionals ff = evaluate_frame(u, p.V, p.om);
  ts.mass = ff.M;
  ts.Eom = ff.Eom;
  ts.H0 = ff.H0;
  ts.K2om = ff.K2om;
  ts.vm = virial_value(u, blowup_profile(r_core));
  ts.g_ratio = (ff.H0 > 1e-14) ? ff.G / ff.H0 : 0.0;
  double cm = 0.0;
  for (int i = 0; i < u.grid->n && u.grid->r[i] <= r_core; ++i)
    cm += 0.5 * u.grid->qw[i] * std::norm(u.v[i]);
  ts.core_mass = cm;
  return ts;
}

}  // namespace

ClassifyResult classify_trajectory(const Pencil& p, const Thresholds& th, RadialField u0,
                                   const EvolveOptions& opts) {
  ClassifyResult res;
  Stepper st(p.grid, p.V, p.om, opts.stepper);
  const double horizon = (opts.horizon > 0.0) ? opts.horizon : th.window_per_alpha / p.alpha;
  const double t_cap = horizon + opts.t_cap_extra;

  double t = 0.0;
  RadialField u = std::move(u0);
  res.trace.push_back(take_sample(p, th, u, t, opts.r_core));
  const double mass0 = res.trace.front().mass;

  bool exited = false;
  int scatter_streak = 0;
  try {
    while (t < t_cap) {
      const double t_next = std::min(t + opts.sample_dt, t_cap);
      st.advance(u, t_next - t);
      t = t_next;
      TraceSample ts = take_sample(p, th, u, t, opts.r_core);
      res.trace.push_back(ts);

      if (ts.umax2 > opts.blowup_umax2 ||
          ts.H0 > opts.blowup_grad_ratio * std::max(res.trace.front().H0, 1e-12)) {
        res.outcome = Outcome::BlowUp;
        res.reason = (ts.umax2 > opts.blowup_umax2) ? "amplitude level reached"
                                                    : "gradient norm exploded";
        res.t_end = t;
        return res;
      }
      if (!exited && ts.d0 >= th.delta_X) {
        exited = true;
        res.t_exit = t;
        res.sign_exit = (ts.lp + ts.lm > 0.0) ? +1 : -1;
      }
      const bool far = ts.d0 > th.delta_D;
      if (far && ts.core_mass < opts.scatter_mass_frac * mass0 &&
          ts.g_ratio < opts.scatter_g_ratio) {
        if (++scatter_streak * opts.sample_dt >= 0.5) {
          res.outcome = Outcome::Scatter;
          res.reason = "core mass and nonlinearity share small";
          res.t_end = t;
          return res;
        }
      } else {
        scatter_streak = 0;
      }
      if (!exited && t >= horizon) {
        res.outcome = Outcome::Trapped;
        res.reason = "stayed below delta_X through the horizon";
        res.t_end = t;
        return res;
      }
    }
  } catch (const StepFailure& e) {
    double umax2 = 0.0;
    for (const cplx& z : u.v) umax2 = std::max(umax2, std::norm(z));
    if (umax2 > 0.25 * opts.blowup_umax2) {
      res.outcome = Outcome::BlowUp;
      res.reason = std::string("step collapse with large amplitude: ") + e.what();
    } else {
      res.outcome = Outcome::Undetermined;
      res.reason = std::string("step failure: ") + e.what();
    }
    res.t_end = t;
    return res;
  }
  res.outcome = Outcome::Undetermined;
  res.reason = "time cap reached without a definite signature";
  res.t_end = t;
  return res;
}

EjectionProbe ejection_probe(const Pencil& p, const Thresholds& th, RadialField u0,
                             const EvolveOptions& opts, double horizon) {
  EjectionProbe out;
  Stepper st(p.grid, p.V, p.om, opts.stepper);
  double t = 0.0;
  RadialField u = std::move(u0);
  std::vector<double> ts_log, d_log;
  {
    Decomposition dec0 = decompose(p, u);
    if (dec0.d0 > 0.0) {
      ts_log.push_back(0.0);
      d_log.push_back(dec0.d0);
    }
  }
  auto fit_rate = [&]() {
    // least-squares slope of log d over the final growth leg (from the
    // global minimum of d onward)
    size_t k0 = 0;
    for (size_t k = 1; k < d_log.size(); ++k)
      if (d_log[k] < d_log[k0]) k0 = k;
    const size_t m = d_log.size() - k0;
    if (m < 3) return 0.0;
    double st_ = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (size_t k = k0; k < d_log.size(); ++k) {
      const double x = ts_log[k], y = std::log(d_log[k]);
      st_ += x;
      sy += y;
      stt += x * x;
      sty += x * y;
    }
    const double den = m * stt - st_ * st_;
    return (den > 0.0) ? (m * sty - st_ * sy) / den : 0.0;
  };
  while (t < horizon) {
    const double t_next = std::min(t + opts.sample_dt, horizon);
    st.advance(u, t_next - t);
    t = t_next;
    Decomposition dec = decompose(p, u);
    if (dec.d0 > 0.0) {
      ts_log.push_back(t);
      d_log.push_back(dec.d0);
    }
    if (dec.d0 >= th.delta_X) {
      out.ejected = true;
      out.sign = (dec.lp + dec.lm > 0.0) ? +1 : -1;
      out.t_exit = t;
      out.lm_exit = dec.lm;
      out.d_exit = dec.d0;
      out.growth_rate = fit_rate();
      return out;
    }
  }
  out.t_exit = t;
  out.growth_rate = fit_rate();
  return out;
}

double mollified_distance(const Pencil& p, const Thresholds& th, const RadialField& phi,
                          const EvolveOptions& opts) {
  const double d0_early = dist0(p, phi).d0;
  if (d0_early >= 2.0 * th.delta_E) return d0_early;  // outside the blend support
  std::vector<double> ts, ens;
  auto record = [&](double t, const RadialField& u) {
    Decomposition dec = decompose(p, u);
    ts.push_back(t);
    ens.push_back(energy_norm_sq(p, dec.v));
  };
  // backward sweep
  {
    Stepper st(p.grid, p.V, p.om, opts.stepper);
    RadialField u = conj_field(phi);
    for (double t = 0.0; t < 2.0 - 1e-12;) {
      const double t_next = std::min(t + opts.sample_dt, 2.0);
      st.advance(u, t_next - t);
      t = t_next;
      record(-t, conj_field(u));
    }
  }
  std::reverse(ts.begin(), ts.end());
  std::reverse(ens.begin(), ens.end());
  record(0.0, phi);
  const double d0v = dist0(p, phi).d0;
  {
    Stepper st(p.grid, p.V, p.om, opts.stepper);
    RadialField u = phi;
    for (double t = 0.0; t < 2.0 - 1e-12;) {
      const double t_next = std::min(t + opts.sample_dt, 2.0);
      st.advance(u, t_next - t);
      t = t_next;
      record(t, u);
    }
  }
  const double d1v = dist1_from_samples(ts, ens, 0.0);
  return blend_dist(d0v, d1v, th.delta_E);
}

OnePassReport one_pass_report(const std::vector<TraceSample>& trace, double delta_star,
                              double exit_factor) {
  OnePassReport rep;
  bool inside = false;
  bool ever_exited = false;
  for (const TraceSample& ts : trace) {
    if (!inside && ts.d0 < delta_star) {
      inside = true;
      ++rep.intervals;
    } else if (inside && ts.d0 > exit_factor * delta_star) {
      inside = false;
      ever_exited = true;
    }
    if (ever_exited && !inside) rep.min_after_exit = std::min(rep.min_after_exit, ts.d0);
  }
  rep.holds = rep.intervals <= 1;
  return rep;
}

}  // namespace nlsp
