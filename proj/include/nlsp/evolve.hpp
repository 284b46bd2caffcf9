// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>

#include "nlsp/band.hpp"
#include "nlsp/linearized.hpp"
#include "nlsp/modulation.hpp"

namespace nlsp {

/// Time stepping of i u_t = Delta u - V^om u + |u|^2 u by Strang splitting:
/// an exact diagonal phase half-step for the V^om - |u|^2 part (|u| is
/// invariant under it) around a Crank-Nicolson step for the free part. The
/// linear step is a Cayley transform of the symmetric discrete Laplacian, so
/// without a sponge the discrete mass is conserved to roundoff.
struct StepperOptions {
  double dt = 5e-4;            // base step
  double clamp_c = 0.35;       // dt <= clamp_c / (max |u|^2 + max |V^om|)
  double drift_rate_tol = 1e-4;  // relative energy drift per unit time
  double dt_min = 1e-12;
  bool sponge = false;  // absorbing layer on the outer 10% (scattering runs)
  double sponge_strength = 5.0;
  double sponge_width_frac = 0.1;
};

class Stepper {
 public:
  Stepper(Grid g, const Potential& V, double om, StepperOptions opts);

  /// One adaptive step; returns the step actually taken.
  double step(RadialField& u);
  /// Steps totaling exactly T (the final step is clipped).
  void advance(RadialField& u, double T);
  /// Energy drift rejections so far.
  long rejections() const { return rejections_; }

  double om() const { return om_; }
  const Potential& potential() const { return V_; }

 private:
  void phase_half(RadialField& u, double tau) const;
  void linear_full(RadialField& u, double tau);
  double energy(const RadialField& u) const;

  Grid grid_;
  Potential V_;
  double om_;
  StepperOptions opts_;
  std::vector<double> vom_, sigma_;
  double vmax_;
  BandedLU<cplx> cn_;
  double cn_tau_ = -1.0;
  long rejections_ = 0;
};

/// Time reversal u(t) -> conj(u)(-t): evolves the conjugate forward by T and
/// conjugates back.
void evolve_backward(Stepper& st, RadialField& u, double T);

/// Localized virial profiles a(r) and the exact rate of
/// V_a(u) = Im int a conj(u) u_r dx along the flow:
///   d/dt V_a = 2 int a' |u_r|^2 - int (2 a''/r + a'''/2) |u|^2
///              - int (a/r) (r V^om_r) |u|^2 - 1/2 int (a' + 2a/r) |u|^4.
struct VirialProfile {
  double m = 1.0;
  // profile and derivatives at radius r
  double a(double r) const;
  double ap(double r) const;
  double app(double r) const;
  double appp(double r) const;
  double a_over_r(double r) const;
  int kind = 0;  // 0: blow-up plateau profile, 1: scattering 1/(1+rho) profile
};

/// a = m phi(r/m), phi = rho up to 1, constant 3/2 from 2 on (quintic glue),
/// used on the blow-up side.
VirialProfile blowup_profile(double m);
/// a = r/(1 + r/m), used on the scattering side.
VirialProfile scatter_profile(double m);

double virial_value(const RadialField& u, const VirialProfile& pr);
double virial_rate(const RadialField& u, const Potential& V, double om, const VirialProfile& pr);

/// Trajectory classification.
enum class Outcome { Trapped, BlowUp, Scatter, Undetermined };
const char* outcome_name(Outcome o);

struct TraceSample {
  double t = 0.0;
  double d0 = 0.0;    // instantaneous distance
  double ensq = 0.0;  // energy norm squared of the modulation remainder
  double zeta_ensq = 0.0;  // energy norm squared of the zeta part alone
  double lp = 0.0, lm = 0.0;
  double umax2 = 0.0;
  double mass = 0.0, Eom = 0.0, H0 = 0.0;
  double K2om = 0.0;
  double vm = 0.0;          // localized virial, blow-up profile at m = r_core
  double g_ratio = 0.0;     // G/H0, nonlinearity share
  double core_mass = 0.0;   // mass inside r_core
};

struct EvolveOptions {
  StepperOptions stepper;
  double sample_dt = 0.02;
  double horizon = 0.0;  // trapping window; 0 = window_per_alpha / alpha
  double t_cap_extra = 60.0;  // extra time allowed after ejection
  double blowup_umax2 = 1e4;
  double blowup_grad_ratio = 1e6;  // H0 growth factor (gradient norm ratio 1e3)
  double scatter_mass_frac = 0.02;
  double scatter_g_ratio = 0.02;
  double r_core = 10.0;
};

struct ClassifyResult {
  Outcome outcome = Outcome::Undetermined;
  double t_end = 0.0;
  double t_exit = -1.0;  // first crossing of delta_X, negative if none
  int sign_exit = 0;     // sign of lambda1 at the crossing
  std::string reason;
  std::vector<TraceSample> trace;
};

/// Runs the flow from u0, samples the modulation monitors, and decides the
/// outcome: blow-up (amplitude level), scattering (core mass and
/// nonlinearity share both small, sustained), trapped (never reaches
/// delta_X within the horizon), else undetermined. Online thresholds act on
/// the instantaneous distance; the mollified distance is available from the
/// stored trace afterwards.
ClassifyResult classify_trajectory(const Pencil& p, const Thresholds& th, RadialField u0,
                                   const EvolveOptions& opts);

/// Minimal ejection information for manifold bisection: evolve until the
/// distance reaches delta_X or the horizon runs out.
struct EjectionProbe {
  bool ejected = false;
  int sign = 0;  // sign of lambda1 at exit
  double t_exit = 0.0;
  double lm_exit = 0.0, d_exit = 0.0;
  double growth_rate = 0.0;  // least-squares slope of log d over the growth leg
};
EjectionProbe ejection_probe(const Pencil& p, const Thresholds& th, RadialField u0,
                             const EvolveOptions& opts, double horizon);

/// Mollified distance around t = 0: evolves phi two units each way, then
/// blends the chi-weighted energy-norm average with the instantaneous
/// reading. When the instantaneous reading already sits past the blend
/// support (d0 >= 2 delta_E) no evolution is run and d0 is returned.
double mollified_distance(const Pencil& p, const Thresholds& th, const RadialField& phi,
                          const EvolveOptions& opts);

/// One-pass accounting on a stored trace: maximal intervals with
/// d < delta_star, counted with an exit hysteresis (an interval ends when d
/// rises past exit_factor * delta_star). The property holds when at most one
/// interval occurs; min_after_exit is the closest post-exit approach.
struct OnePassReport {
  int intervals = 0;
  bool holds = true;
  double min_after_exit = 1e300;
};
OnePassReport one_pass_report(const std::vector<TraceSample>& trace, double delta_star,
                              double exit_factor = 2.0);

}  // namespace nlsp
