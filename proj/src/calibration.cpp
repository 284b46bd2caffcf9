// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "nlsp/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <ostream>
#include <random>

#include "nlsp/linearized.hpp"
#include "nlsp/manifold.hpp"
#include "nlsp/solitons.hpp"

namespace nlsp {

namespace {

void say(std::ostream* log, const std::string& s) {
  if (log) (*log) << "[calibrate] " << s << '\n' << std::flush;
}

double depth_inside(const DepthWindow& w) {
  // 40% into the window: clearly binding, clearly below the second state
  return w.c_min + 0.4 * (w.c_max - w.c_min);
}

// Smallest frequency at which the soliton solve still contracts. Walks down
// by octaves from a converging start, then bisects the edge.
double soliton_edge(const Grid& g, const RadialField& Q, const Potential& V, std::ostream* log) {
  auto ok = [&](double om) {
    try {
      excited_soliton(g, Q, V, om);
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  double hi = 1.0;
  while (!ok(hi)) {
    hi *= 2.0;
    if (hi > 64.0) throw Error("soliton solve contracts at no tested frequency");
  }
  double lo = hi / 2.0;
  while (lo > 0.02 && ok(lo)) {
    hi = lo;
    lo /= 2.0;
  }
  if (lo <= 0.02 && ok(lo)) {
    say(log, "soliton solve contracts down to om=" + std::to_string(lo));
    return lo;
  }
  for (int it = 0; it < 12; ++it) {
    const double mid = std::sqrt(lo * hi);
    (ok(mid) ? hi : lo) = mid;
  }
  say(log, "soliton contraction edge near om=" + std::to_string(hi));
  return hi;
}

// Largest |z| at which the small-branch solve still contracts.
double branch_edge(const Grid& g, const Potential& V, std::ostream* log) {
  const GroundEigen ge = ground_eigenpair(g, V);
  auto ok = [&](double a) {
    try {
      ground_branch(g, ge, V, cplx(a, 0.0));
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  double last = 0.0, a = 1e-3;
  while (a < 4.0 && ok(a)) {
    last = a;
    a *= 1.6;
  }
  if (last == 0.0) throw Error("small-branch solve contracts at no tested amplitude");
  if (a >= 4.0) {
    say(log, "small branch contracts up to |z|=" + std::to_string(last));
    return last;
  }
  double lo = last, hi = a;
  for (int it = 0; it < 10; ++it) {
    const double mid = std::sqrt(lo * hi);
    (ok(mid) ? lo : hi) = mid;
  }
  say(log, "small-branch contraction edge near |z|=" + std::to_string(lo));
  return lo;
}

// Empirical virial table. Random states around the soliton, binned by the
// measured instantaneous distance; within each bin the admissible excess
// level is the largest ladder value under which every sample kept a virial
// size bounded away from zero, and the certified size is half the observed
// minimum (a factor-2 safety margin).
VirialTable calibrate_virial(const Pencil& p, const Thresholds& th, bool quick,
                             std::ostream* log) {
  VirialTable vt;
  vt.d_lo = {0.0, 0.05, 0.125, 0.25};
  const std::vector<double> d_hi = {0.05, 0.125, 0.25, th.delta_D};
  vt.eps_v.assign(vt.d_lo.size(), 0.0);
  vt.kappa_v.assign(vt.d_lo.size(), 0.0);

  const int per_bin = quick ? 16 : 64;
  const int min_kept = quick ? 4 : 8;
  std::mt19937_64 rng(20260814u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  const auto basis = center_basis(p, 6);
  const FrameFunctionals fq = evaluate_frame(p.Q, p.V, p.om);
  const double eps_ladder[] = {0.005, 0.01, 0.02, 0.04, 0.08, 0.125, th.c_X};

  for (size_t k = 0; k < vt.d_lo.size(); ++k) {
    const double lo = std::max(vt.d_lo[k], 0.5 * th.delta_V);
    const double hi = d_hi[k];
    struct Sample {
      double a_ratio, k_ratio;
    };
    std::vector<Sample> kept;
    for (int attempt = 0; attempt < 24 * per_bin && (int)kept.size() < per_bin; ++attempt) {
      const double d_t = lo * std::pow(hi / lo, unif(rng));
      double cp = gauss(rng), cm = gauss(rng);
      if (unif(rng) < 0.5) cm = std::copysign(cm, cp);  // small-excess side
      RadialField zeta(p.grid);
      const double wz = 1.5 * unif(rng);
      for (const auto& b : basis) axpy(wz * gauss(rng), b, zeta);
      const double ensq = cp * cp + cm * cm + 0.5 * quad_l(p, zeta);
      if (!(ensq > 1e-300)) continue;
      const double s = d_t / std::sqrt(ensq);
      zeta = scaled(zeta, s);
      const RadialField phi = manifold_state(p, s * cp, s * cm, &zeta);
      const double d0 = dist0(p, phi).d0;
      if (d0 < std::max(vt.d_lo[k], 1e-6) || d0 >= hi) continue;
      const FrameFunctionals ff = evaluate_frame(phi, p.V, p.om);
      const double a = ff.Aom - fq.Aom;
      if (a >= th.eps_S * th.eps_S) continue;
      if (ff.M + p.om * ff.H0 <= th.C_M) continue;
      const double ar = a / (d0 * d0);
      if (ar >= th.c_X) continue;
      kept.push_back({ar, std::abs(ff.K2om) / (d0 * d0)});
    }
    std::sort(kept.begin(), kept.end(),
              [](const Sample& x, const Sample& y) { return x.a_ratio < y.a_ratio; });
    double m_first = -1.0;
    for (double eps : eps_ladder) {
      double m = std::numeric_limits<double>::infinity();
      int cnt = 0;
      for (const auto& s : kept) {
        if (s.a_ratio < eps) {
          m = std::min(m, s.k_ratio);
          ++cnt;
        }
      }
      if (cnt < min_kept) continue;
      if (m_first < 0.0) m_first = m;
      if (m >= 0.5 * m_first && m > 1e-4) {
        vt.eps_v[k] = eps;
        vt.kappa_v[k] = 0.5 * m;
      }
    }
    say(log, "virial bin [" + std::to_string(vt.d_lo[k]) + "," + std::to_string(hi) +
                 "): kept=" + std::to_string(kept.size()) + " eps=" +
                 std::to_string(vt.eps_v[k]) + " kappa=" + std::to_string(vt.kappa_v[k]));
  }
  return vt;
}

njson pot_json(const Potential& p) {
  const char* fam = p.family == PotentialFamily::Zero
                        ? "zero"
                        : (p.family == PotentialFamily::Gaussian ? "gaussian" : "corepow");
  return njson{{"family", fam}, {"c", p.c}, {"sigma", p.sigma}, {"a", p.a}};
}

Potential pot_from(const njson& j) {
  const std::string fam = j.at("family");
  if (fam == "zero") return Potential::zero();
  if (fam == "gaussian") return Potential::gaussian(j.at("c"), j.at("sigma"));
  if (fam == "corepow") return Potential::corepow(j.at("c"), j.at("sigma"), j.at("a"));
  throw Error("unknown potential family: " + fam);
}

}  // namespace

Calibration run_calibration(bool quick, std::ostream* log) {
  Calibration c;
  if (quick) {
    c.static_n = 1024;
    c.static_rmax = 40.0;
    c.dyn_n = 512;
    c.dyn_rmax = 25.0;
  }
  const Grid gs = make_grid(c.static_n, c.static_rmax);
  const Grid gd = make_grid(c.dyn_n, c.dyn_rmax);

  const FreeGround fg = compute_free_ground(gs);
  const BareFunctionals bq = evaluate_bare(fg.Q, Potential::zero());
  c.thresholds = default_thresholds(bq);
  say(log, "free ground: b0=" + std::to_string(fg.b0) + " M=" + std::to_string(bq.M));

  c.window_core = single_bound_window(gs, PotentialFamily::CorePow, 1.0, 1.45);
  c.window_gauss = single_bound_window(gs, PotentialFamily::Gaussian, 1.0, 0.0);
  c.pot = Potential::corepow(depth_inside(c.window_core), 1.0, 1.45);
  c.pot_gauss = Potential::gaussian(depth_inside(c.window_gauss), 1.0);
  say(log, "corepow window (" + std::to_string(c.window_core.c_min) + "," +
               std::to_string(c.window_core.c_max) + ") -> c=" + std::to_string(c.pot.c));
  say(log, "gaussian window (" + std::to_string(c.window_gauss.c_min) + "," +
               std::to_string(c.window_gauss.c_max) + ") -> c=" + std::to_string(c.pot_gauss.c));

  c.om_star = soliton_edge(gs, fg.Q, c.pot, log);
  c.z_star = branch_edge(gs, c.pot, log);

  c.om_work = std::max(8.0, 4.0 * c.om_star);
  const FreeGround fgd = compute_free_ground(gd);
  const Pencil p = build_pencil(gd, fgd.Q, c.pot, c.om_work);
  c.alpha = p.alpha;
  c.soliton_residual = p.soliton_residual;
  c.pencil_residual = p.pencil_residual;
  say(log, "om_work=" + std::to_string(c.om_work) + " alpha=" + std::to_string(c.alpha));

  const CoercivityReport cr = coercivity_constants(p);
  c.nu_plus = cr.nu_plus;
  c.nu_minus = cr.nu_minus;
  say(log, "coercivity nu+=" + std::to_string(c.nu_plus) + " nu-=" + std::to_string(c.nu_minus));

  c.vtable = calibrate_virial(p, c.thresholds, quick, log);
  return c;
}

njson calibration_json(const Calibration& c) {
  njson j;
  j["static_grid"] = njson{{"n", c.static_n}, {"r_max", c.static_rmax}};
  j["dyn_grid"] = njson{{"n", c.dyn_n}, {"r_max", c.dyn_rmax}};
  j["pot"] = pot_json(c.pot);
  j["pot_gauss"] = pot_json(c.pot_gauss);
  j["window_core"] = njson{{"c_min", c.window_core.c_min}, {"c_max", c.window_core.c_max}};
  j["window_gauss"] = njson{{"c_min", c.window_gauss.c_min}, {"c_max", c.window_gauss.c_max}};
  j["om_star"] = c.om_star;
  j["z_star"] = c.z_star;
  j["om_work"] = c.om_work;
  j["alpha"] = c.alpha;
  j["nu_plus"] = c.nu_plus;
  j["nu_minus"] = c.nu_minus;
  j["soliton_residual"] = c.soliton_residual;
  j["pencil_residual"] = c.pencil_residual;
  const Thresholds& t = c.thresholds;
  j["thresholds"] =
      njson{{"delta_D", t.delta_D}, {"delta_E", t.delta_E}, {"delta_I", t.delta_I},
            {"delta_X", t.delta_X}, {"delta_V", t.delta_V}, {"delta_star", t.delta_star},
            {"c_X", t.c_X},         {"C_D", t.C_D},         {"eps_S", t.eps_S},
            {"C_S", t.C_S},         {"C_M", t.C_M},         {"window_per_alpha", t.window_per_alpha}};
  j["vtable"] = njson{{"d_lo", c.vtable.d_lo}, {"eps_v", c.vtable.eps_v},
                      {"kappa_v", c.vtable.kappa_v}};
  return j;
}

Calibration calibration_from_json(const njson& j) {
  Calibration c;
  c.static_n = j.at("static_grid").at("n");
  c.static_rmax = j.at("static_grid").at("r_max");
  c.dyn_n = j.at("dyn_grid").at("n");
  c.dyn_rmax = j.at("dyn_grid").at("r_max");
  c.pot = pot_from(j.at("pot"));
  c.pot_gauss = pot_from(j.at("pot_gauss"));
  c.window_core = {j.at("window_core").at("c_min"), j.at("window_core").at("c_max")};
  c.window_gauss = {j.at("window_gauss").at("c_min"), j.at("window_gauss").at("c_max")};
  c.om_star = j.at("om_star");
  c.z_star = j.at("z_star");
  c.om_work = j.at("om_work");
  c.alpha = j.at("alpha");
  c.nu_plus = j.at("nu_plus");
  c.nu_minus = j.at("nu_minus");
  c.soliton_residual = j.at("soliton_residual");
  c.pencil_residual = j.at("pencil_residual");
  const njson& t = j.at("thresholds");
  Thresholds& th = c.thresholds;
  th.delta_D = t.at("delta_D");
  th.delta_E = t.at("delta_E");
  th.delta_I = t.at("delta_I");
  th.delta_X = t.at("delta_X");
  th.delta_V = t.at("delta_V");
  th.delta_star = t.at("delta_star");
  th.c_X = t.at("c_X");
  th.C_D = t.at("C_D");
  th.eps_S = t.at("eps_S");
  th.C_S = t.at("C_S");
  th.C_M = t.at("C_M");
  th.window_per_alpha = t.at("window_per_alpha");
  const njson& v = j.at("vtable");
  c.vtable.d_lo = v.at("d_lo").get<std::vector<double>>();
  c.vtable.eps_v = v.at("eps_v").get<std::vector<double>>();
  c.vtable.kappa_v = v.at("kappa_v").get<std::vector<double>>();
  return c;
}

Calibration embedded_calibration() {
  // Values frozen from the full calibration run (regenerate with
  // `nlsplab calibrate`).
  Calibration c;
  c.pot = Potential::corepow(2.24351051406411, 1.0, 1.45);
  c.pot_gauss = Potential::gaussian(8.797618809936104, 1.0);
  c.window_core = {1.1517193996842252, 3.881197185633937};
  c.window_gauss = {2.7349417692166753, 17.891634371015243};
  c.om_star = 13.408883289707825;
  c.z_star = 0.9661741425918321;
  c.om_work = 53.6355331588313;
  c.alpha = 1.7425476171735108;
  c.nu_plus = 0.07562815434467465;
  c.nu_minus = 0.028415059066848627;
  c.soliton_residual = 2.623703655587854e-13;
  c.pencil_residual = 6.408910131286778e-13;
  c.thresholds = Thresholds{};
  c.thresholds.C_S = 4.0;
  c.thresholds.C_M = 188.92531340395166;
  c.vtable.d_lo = {0.0, 0.05, 0.125, 0.25};
  c.vtable.eps_v = {0.25, 0.25, 0.0, 0.0};
  c.vtable.kappa_v = {10.686940125237237, 0.1638893037732662, 0.0, 0.0};
  return c;
}

Calibration load_calibration() {
  const char* env = std::getenv("NLSPLAB_CALIBRATION");
  if (env && *env) return calibration_from_json(read_json_file(env));
  return embedded_calibration();
}

}  // namespace nlsp
