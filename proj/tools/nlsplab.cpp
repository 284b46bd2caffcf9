// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

// Command-line front end: soliton families, spectra, trajectories,
// classification, manifold sampling, the nine-class catalog, calibration,
// energy curves, and the invariant smoke suite. Every subcommand writes its
// artifacts under --out together with a manifest.json describing the run.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlsp/calibration.hpp"
#include "nlsp/evolve.hpp"
#include "nlsp/io.hpp"
#include "nlsp/manifold.hpp"
#include "nlsp/solitons.hpp"

namespace fs = std::filesystem;
using namespace nlsp;

namespace {

struct Ctx {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int threads = 1;

  Calibration cal;
  njson config;                       // parsed --config file (may be empty)
  std::vector<std::string> outputs;   // artifact paths for the manifest

  void load() {
    cal = load_calibration();
    if (!config_path.empty()) config = read_json_file(config_path);
    if (config.contains("grid")) {
      cal.dyn_n = config["grid"].value("n", cal.dyn_n);
      cal.dyn_rmax = config["grid"].value("r_max", cal.dyn_rmax);
    }
    if (config.contains("static_grid")) {
      cal.static_n = config["static_grid"].value("n", cal.static_n);
      cal.static_rmax = config["static_grid"].value("r_max", cal.static_rmax);
    }
    if (config.contains("potential")) {
      const njson& p = config["potential"];
      const std::string fam = p.value("family", "corepow");
      if (fam == "zero")
        cal.pot = Potential::zero();
      else if (fam == "gaussian")
        cal.pot = Potential::gaussian(p.value("c", cal.pot_gauss.c), p.value("sigma", 1.0));
      else
        cal.pot = Potential::corepow(p.value("c", cal.pot.c), p.value("sigma", 1.0),
                                     p.value("a", 1.45));
    }
    if (config.contains("om")) cal.om_work = config["om"].get<double>();
    if (config.contains("thresholds")) {
      const njson& t = config["thresholds"];
      Thresholds& th = cal.thresholds;
      th.delta_D = t.value("delta_D", th.delta_D);
      th.delta_E = t.value("delta_E", th.delta_E);
      th.delta_I = t.value("delta_I", th.delta_I);
      th.delta_X = t.value("delta_X", th.delta_X);
      th.delta_V = t.value("delta_V", th.delta_V);
      th.delta_star = t.value("delta_star", th.delta_star);
      th.window_per_alpha = t.value("window_per_alpha", th.window_per_alpha);
    }
  }

  std::string path(const std::string& name) {
    fs::create_directories(out_dir);
    std::string p = (fs::path(out_dir) / name).string();
    outputs.push_back(p);
    return p;
  }

  void manifest(const std::string& command, const njson& params) {
    fs::create_directories(out_dir);
    const std::string p = (fs::path(out_dir) / "manifest.json").string();
    write_json_file(p, make_manifest(command, params, outputs));
  }
};

Grid dyn_grid(const Ctx& c) { return make_grid(c.cal.dyn_n, c.cal.dyn_rmax); }
Grid static_grid(const Ctx& c) { return make_grid(c.cal.static_n, c.cal.static_rmax); }

Pencil make_pencil(const Ctx& c, double om) {
  const Grid g = dyn_grid(c);
  const FreeGround fg = compute_free_ground(g);
  return build_pencil(g, fg.Q, c.cal.pot, om);
}

RadialField load_field(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") return read_field_csv(path);
  return read_field_bin(path);
}

/// Shared initial-data construction for evolve/classify.
RadialField initial_state(const Ctx& c, const Pencil& p, const std::string& init,
                          const std::string& in_path, double eps, double factor, double amp) {
  if (init == "file") {
    if (in_path.empty()) throw Error("--init file requires --in");
    RadialField u = load_field(in_path);
    if (u.grid->n != p.grid->n || std::abs(u.grid->r_max - p.grid->r_max) > 1e-12)
      throw Error("input field grid does not match the working grid");
    u.grid = p.grid;
    return u;
  }
  if (init == "soliton") return p.Q;
  if (init == "gplus") return manifold_state(p, eps, 0.0, nullptr);
  if (init == "gminus") return manifold_state(p, 0.0, eps, nullptr);
  if (init == "scaled") return scaled(p.Q, factor);
  if (init == "random") {
    Rng rng(c.seed);
    RadialField u = p.Q;
    RadialField noise = random_field(p.grid, rng, amp);
    axpy(1.0, noise, u);
    return u;
  }
  throw Error("unknown --init: " + init);
}

void write_trace_csv(const std::string& path, const std::vector<TraceSample>& trace) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  out.precision(12);
  out << "t,d0,ensq,zeta_ensq,lp,lm,umax2,mass,Eom,H0,K2om,vm,g_ratio,core_mass\n";
  for (const TraceSample& s : trace) {
    out << s.t << ',' << s.d0 << ',' << s.ensq << ',' << s.zeta_ensq << ',' << s.lp << ','
        << s.lm << ',' << s.umax2 << ',' << s.mass << ',' << s.Eom << ',' << s.H0 << ','
        << s.K2om << ',' << s.vm << ',' << s.g_ratio << ',' << s.core_mass << '\n';
  }
}

int cmd_soliton(Ctx& c, const std::vector<double>& oms) {
  const Grid g = static_grid(c);
  const FreeGround fg = compute_free_ground(g);
  write_field_bin(c.path("Q_free.bin"), fg.Q);
  njson meta;
  meta["free_ground"] = njson{{"b0", fg.b0}, {"residual", fg.residual}};
  njson points = njson::array();
  for (double om : oms) {
    const SolitonPoint sp = excited_soliton(g, fg.Q, c.cal.pot, om);
    const std::string tag = "om_" + std::to_string(om);
    write_field_bin(c.path("Q_" + tag + ".bin"), sp.Qom);
    write_field_bin(c.path("Qp_" + tag + ".bin"), sp.Qp);
    const FrameFunctionals ff = evaluate_frame(sp.Qom, c.cal.pot, om);
    njson rec = frame_record(ff);
    rec["residual"] = sp.residual;
    rec["iterations"] = sp.iterations;
    rec["vnorm_h1"] = sp.vnorm_h1;
    points.push_back(rec);
    std::cout << "om=" << om << " residual=" << sp.residual << " M=" << ff.M << '\n';
  }
  meta["points"] = points;
  write_json_file(c.path("soliton.json"), meta);
  c.manifest("soliton", njson{{"om", oms}, {"potential", c.cal.pot.c}});
  return 0;
}

int cmd_spectrum(Ctx& c, const std::vector<double>& oms, bool coercivity) {
  const Grid g = static_grid(c);
  const FreeGround fg = compute_free_ground(g);
  std::ofstream csv(c.path("spectrum.csv"));
  csv.precision(12);
  csv << "om,alpha,ip_g1g2,soliton_residual,pencil_residual";
  if (coercivity) csv << ",nu_plus,nu_minus";
  csv << '\n';
  for (double om : oms) {
    const Pencil p = build_pencil(g, fg.Q, c.cal.pot, om);
    const std::string tag = "om_" + std::to_string(om);
    write_field_bin(c.path("g1_" + tag + ".bin"), p.g1);
    write_field_bin(c.path("g2_" + tag + ".bin"), p.g2);
    csv << om << ',' << p.alpha << ',' << p.ip_g1g2 << ',' << p.soliton_residual << ','
        << p.pencil_residual;
    if (coercivity) {
      const CoercivityReport cr = coercivity_constants(p);
      csv << ',' << cr.nu_plus << ',' << cr.nu_minus;
    }
    csv << '\n';
    std::cout << "om=" << om << " alpha=" << p.alpha << '\n';
  }
  c.manifest("spectrum", njson{{"om", oms}, {"coercivity", coercivity}});
  return 0;
}

int cmd_curves(Ctx& c, double om_lo, double om_hi, int points) {
  const Grid g = static_grid(c);
  const FreeGround fg = compute_free_ground(g);
  const EnergyCurves ec = energy_curves(g, fg.Q, c.cal.pot, om_lo, om_hi, points);
  const BareFunctionals bq = evaluate_bare(fg.Q, Potential::zero());
  const double mq2 = bq.M * bq.M;
  std::ofstream csv(c.path("curves.csv"));
  csv.precision(12);
  csv << "om,mu,E1,E1p,E1pp,muE1_rel,E1p_rel,muE1pp_rel\n";
  for (size_t k = 0; k < ec.om.size(); ++k) {
    const double mu = ec.mu[k];
    csv << ec.om[k] << ',' << mu << ',' << ec.E1[k] << ',' << ec.E1p[k] << ',' << ec.E1pp[k]
        << ',' << (mu * ec.E1[k] / mq2 - 1.0) << ','
        << (std::isnan(ec.E1p[k]) ? std::nan("") : (ec.E1p[k] + ec.om[k]) / ec.om[k]) << ','
        << (std::isnan(ec.E1pp[k]) ? std::nan("")
                                   : mu * mu * mu * ec.E1pp[k] / (2.0 * mq2) - 1.0)
        << '\n';
  }
  c.manifest("curves", njson{{"om_lo", om_lo}, {"om_hi", om_hi}, {"points", points}});
  return 0;
}

int cmd_evolve(Ctx& c, double om, const std::string& init, const std::string& in_path,
               double eps, double factor, double amp, double horizon, double dt,
               double snapshot_dt) {
  const Pencil p = make_pencil(c, om);
  RadialField u = initial_state(c, p, init, in_path, eps, factor, amp);
  EvolveOptions opts;
  if (dt > 0.0) opts.stepper.dt = dt;
  Stepper st(p.grid, p.V, p.om, opts.stepper);
  std::vector<TraceSample> trace;
  double t = 0.0, next_snap = snapshot_dt;
  int snap_id = 0;
  trace.push_back([&] {
    Decomposition dec = decompose(p, u);
    TraceSample s;
    s.t = 0.0;
    s.d0 = dec.d0;
    s.lp = dec.lp;
    s.lm = dec.lm;
    return s;
  }());
  write_field_bin(c.path("u_000000.bin"), u);
  while (t < horizon) {
    const double t_next = std::min(t + opts.sample_dt, horizon);
    st.advance(u, t_next - t);
    t = t_next;
    Decomposition dec = decompose(p, u);
    TraceSample s;
    s.t = t;
    s.d0 = dec.d0;
    s.lp = dec.lp;
    s.lm = dec.lm;
    s.ensq = energy_norm_sq(p, dec.v);
    s.zeta_ensq = std::max(0.0, s.ensq - s.lp * s.lp - s.lm * s.lm);
    const FrameFunctionals ff = evaluate_frame(u, p.V, p.om);
    s.mass = ff.M;
    s.Eom = ff.Eom;
    s.H0 = ff.H0;
    s.K2om = ff.K2om;
    s.vm = virial_value(u, blowup_profile(10.0));
    s.g_ratio = (ff.H0 > 1e-14) ? ff.G / ff.H0 : 0.0;
    for (const cplx& z : u.v) s.umax2 = std::max(s.umax2, std::norm(z));
    trace.push_back(s);
    if (snapshot_dt > 0.0 && t >= next_snap - 1e-12) {
      char name[32];
      std::snprintf(name, sizeof name, "u_%06d.bin", ++snap_id);
      write_field_bin(c.path(name), u);
      next_snap += snapshot_dt;
    }
  }
  write_field_bin(c.path("u_final.bin"), u);
  write_trace_csv(c.path("trace.csv"), trace);
  std::cout << "evolved to t=" << t << ", rejections=" << st.rejections() << '\n';
  c.manifest("evolve", njson{{"om", om}, {"init", init}, {"eps", eps}, {"horizon", horizon}});
  return 0;
}

int cmd_classify(Ctx& c, double om, const std::string& init, const std::string& in_path,
                 double eps, double factor, double amp, double horizon) {
  const Pencil p = make_pencil(c, om);
  const RadialField u0 = initial_state(c, p, init, in_path, eps, factor, amp);
  EvolveOptions opts;
  if (horizon > 0.0) opts.horizon = horizon;
  const ClassifyResult fwd = classify_trajectory(p, c.cal.thresholds, u0, opts);
  const ClassifyResult bwd = classify_trajectory(p, c.cal.thresholds, conj_field(u0), opts);
  write_trace_csv(c.path("trace_forward.csv"), fwd.trace);
  write_trace_csv(c.path("trace_backward.csv"), bwd.trace);
  write_field_bin(c.path("u0.bin"), u0);
  auto rec = [](const ClassifyResult& r) {
    return njson{{"outcome", outcome_name(r.outcome)},
                 {"t_end", r.t_end},
                 {"t_exit", r.t_exit},
                 {"sign_exit", r.sign_exit},
                 {"reason", r.reason}};
  };
  njson j{{"forward", rec(fwd)}, {"backward", rec(bwd)}};
  write_json_file(c.path("classify.json"), j);
  std::cout << "forward: " << outcome_name(fwd.outcome) << " (" << fwd.reason << ")\n"
            << "backward: " << outcome_name(bwd.outcome) << " (" << bwd.reason << ")\n";
  c.manifest("classify", njson{{"om", om}, {"init", init}, {"eps", eps}});
  return 0;
}

int cmd_manifold(Ctx& c, double om, int samples, double lm_lo, double lm_hi, int zeta_dim,
                 double zeta_amp) {
  const Pencil p = make_pencil(c, om);
  ManifoldOptions mopts;
  std::vector<RadialField> basis;
  if (zeta_dim > 0) basis = center_basis(p, zeta_dim);
  Rng rng(c.seed);
  struct Row {
    double lm, zensq, G, bracket;
    int probes;
    bool certified;
  };
  std::vector<Row> rows(samples);
  std::vector<RadialField> zetas(samples);
  std::vector<double> lms(samples);
  for (int k = 0; k < samples; ++k) {
    const double f = samples > 1 ? double(k) / (samples - 1) : 0.0;
    lms[k] = lm_lo * std::pow(lm_hi / std::max(lm_lo, 1e-300), f);
    if (lm_lo == 0.0) lms[k] = lm_lo + (lm_hi - lm_lo) * f;
    RadialField z(p.grid);
    if (zeta_amp > 0.0 && !basis.empty()) {
      for (const auto& b : basis) axpy(zeta_amp * rng.normal(), b, z);
      z = project_z(p, z);
    }
    zetas[k] = std::move(z);
  }
  parallel_for(samples, c.threads, [&](int k) {
    const ManifoldPoint mp =
        bisect_graph(p, c.cal.thresholds, zeta_amp > 0.0 ? &zetas[k] : nullptr, lms[k], mopts);
    rows[k] = {mp.lm, mp.zeta_ensq, mp.G, mp.bracket, mp.probes, mp.certified};
  });
  std::ofstream csv(c.path("manifold.csv"));
  csv.precision(12);
  csv << "lm,zeta_ensq,G,bracket,probes,certified\n";
  for (const Row& r : rows)
    csv << r.lm << ',' << r.zensq << ',' << r.G << ',' << r.bracket << ',' << r.probes << ','
        << (r.certified ? 1 : 0) << '\n';
  std::cout << "sampled " << samples << " graph points\n";
  c.manifest("manifold", njson{{"om", om},
                               {"samples", samples},
                               {"lm_lo", lm_lo},
                               {"lm_hi", lm_hi},
                               {"zeta_dim", zeta_dim},
                               {"zeta_amp", zeta_amp}});
  return 0;
}

int cmd_nineclass(Ctx& c, double om, double eps, double zeta_amp, int zeta_dim) {
  const Pencil p = make_pencil(c, om);
  ManifoldOptions mopts;
  RadialField zeta(p.grid);
  bool have_zeta = false;
  if (zeta_amp > 0.0 && zeta_dim > 0) {
    Rng rng(c.seed);
    for (const auto& b : center_basis(p, zeta_dim)) axpy(zeta_amp * rng.normal(), b, zeta);
    zeta = project_z(p, zeta);
    have_zeta = true;
  }
  const NineClassReport rep =
      nine_class_explorer(p, c.cal.thresholds, have_zeta ? &zeta : nullptr, eps, mopts);
  njson entries = njson::array();
  for (const NineClassEntry& e : rep.entries) {
    entries.push_back(njson{{"sf", e.sf},
                            {"sb", e.sb},
                            {"lp0", e.lp0},
                            {"lm0", e.lm0},
                            {"forward", outcome_name(e.forward_out)},
                            {"backward", outcome_name(e.backward_out)},
                            {"forward_t_end", e.forward_t_end},
                            {"backward_t_end", e.backward_t_end}});
    std::cout << "(" << e.sf << "," << e.sb << ") -> " << outcome_name(e.forward_out) << " / "
              << outcome_name(e.backward_out) << '\n';
  }
  njson j{{"eps", rep.eps},
          {"base", njson{{"lp", rep.base.lp}, {"lm", rep.base.lm}, {"converged", rep.base.converged}}},
          {"entries", entries}};
  write_json_file(c.path("nineclass.json"), j);
  c.manifest("nineclass", njson{{"om", om}, {"eps", eps}, {"zeta_amp", zeta_amp}});
  return 0;
}

int cmd_calibrate(Ctx& c, bool quick) {
  const Calibration cal = run_calibration(quick, &std::cout);
  write_json_file(c.path("calibration.json"), calibration_json(cal));
  c.manifest("calibrate", njson{{"quick", quick}});
  return 0;
}

int cmd_check(Ctx& c) {
  int failures = 0;
  auto gate = [&](const std::string& name, bool ok, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << '\n';
    if (!ok) ++failures;
  };

  const Grid g = dyn_grid(c);
  const FreeGround fg = compute_free_ground(g);
  const BareFunctionals bq = evaluate_bare(fg.Q, Potential::zero());
  gate("free-ground-residual", fg.residual <= 1e-10, "residual=" + std::to_string(fg.residual));
  gate("pohozaev-H0-3M", std::abs(bq.H0 / (3.0 * bq.M) - 1.0) <= 1e-5,
       "H0/3M=" + std::to_string(bq.H0 / (3.0 * bq.M)));
  gate("pohozaev-G-2M", std::abs(bq.G / (2.0 * bq.M) - 1.0) <= 1e-5,
       "G/2M=" + std::to_string(bq.G / (2.0 * bq.M)));

  const AdmissibilityReport ar = admissibility_report(g, c.cal.pot);
  gate("potential-admissible", ar.pass(),
       "negatives=" + std::to_string(ar.negatives) + " e0=" + std::to_string(ar.e0));

  const Pencil p = build_pencil(g, fg.Q, c.cal.pot, c.cal.om_work);
  gate("soliton-residual", p.soliton_residual <= 1e-8,
       "residual=" + std::to_string(p.soliton_residual));
  gate("pencil-residual", p.pencil_residual <= 1e-8,
       "residual=" + std::to_string(p.pencil_residual));
  gate("normalization", std::abs(p.alpha * p.ip_g1g2 + 1.0) <= 1e-8,
       "alpha(g1,g2)=" + std::to_string(p.alpha * p.ip_g1g2));

  Rng rng(c.seed);
  double worst = 0.0;
  for (int k = 0; k < 32; ++k) {
    RadialField v = random_field(g, rng, 0.1);
    worst = std::max(worst, expansion_mismatch(p, v) / std::max(norm_h1sq(v), 1e-30));
  }
  gate("energy-expansion", worst <= 1e-8, "worst=" + std::to_string(worst));

  // virial rate against finite differences along a short trajectory
  {
    EvolveOptions opts;
    Stepper st(p.grid, p.V, p.om, opts.stepper);
    RadialField u = manifold_state(p, 1e-2, -2e-2, nullptr);
    const VirialProfile pr = blowup_profile(8.0);
    const double dtp = 1e-3;
    RadialField um = u, up = u;
    st.advance(up, dtp);
    const double rate = virial_rate(u, p.V, p.om, pr);
    Stepper st2(p.grid, p.V, p.om, opts.stepper);
    evolve_backward(st2, um, dtp);
    const double fd = (virial_value(up, pr) - virial_value(um, pr)) / (2.0 * dtp);
    const double scale = std::max(1.0, std::abs(rate));
    gate("virial-rate-fd", std::abs(fd - rate) / scale <= 5e-3,
         "rate=" + std::to_string(rate) + " fd=" + std::to_string(fd));
  }
  std::cout << (failures == 0 ? "all checks passed\n" : "failures: ") ;
  if (failures) std::cout << failures << '\n';
  c.manifest("check", njson{{"failures", failures}});
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for the radial cubic focusing field equation with a potential"};
  app.require_subcommand(1);

  Ctx ctx;
  app.add_option("--config", ctx.config_path, "JSON config file");
  app.add_option("--out", ctx.out_dir, "output directory");
  app.add_option("--seed", ctx.seed, "random seed");
  app.add_option("--threads", ctx.threads, "worker threads for sample sweeps");

  auto* soliton = app.add_subcommand("soliton", "soliton family points");
  std::vector<double> oms{8.0};
  soliton->add_option("--om", oms, "frequency list");

  auto* spectrum = app.add_subcommand("spectrum", "eigenpair table");
  std::vector<double> spec_oms{8.0};
  bool coercivity = false;
  spectrum->add_option("--om", spec_oms, "frequency list");
  spectrum->add_flag("--coercivity", coercivity, "also compute coercivity constants");

  auto* curves = app.add_subcommand("curves", "energy curves along the branch");
  double om_lo = 1e2, om_hi = 1e6;
  int cpoints = 25;
  curves->add_option("--om-lo", om_lo, "lowest frequency");
  curves->add_option("--om-hi", om_hi, "highest frequency");
  curves->add_option("--points", cpoints, "points on the log grid");

  auto* evolve = app.add_subcommand("evolve", "integrate one trajectory");
  auto* classify = app.add_subcommand("classify", "classify forward and backward");
  double om = 0.0, eps = 1e-4, factor = 1.2, amp = 0.01, horizon = 10.0, dt = 0.0,
         snapshot_dt = 0.0;
  std::string init = "soliton", in_path;
  for (CLI::App* sc : {evolve, classify}) {
    sc->add_option("--om", om, "frame frequency (0 = calibrated default)");
    sc->add_option("--init", init, "soliton|gplus|gminus|scaled|random|file");
    sc->add_option("--in", in_path, "input field (.bin or .csv) for --init file");
    sc->add_option("--eps", eps, "mode amplitude for gplus/gminus");
    sc->add_option("--factor", factor, "scale factor for --init scaled");
    sc->add_option("--amp", amp, "noise amplitude for --init random");
    sc->add_option("--horizon", horizon, "time horizon");
  }
  evolve->add_option("--dt", dt, "base step override");
  evolve->add_option("--snapshot-dt", snapshot_dt, "field snapshot cadence (0 = off)");

  auto* manifold = app.add_subcommand("manifold", "sample the center-stable graph");
  int msamples = 12, zeta_dim = 0;
  double lm_lo = 2.5e-3, lm_hi = 2e-2, zeta_amp = 0.0;
  manifold->add_option("--om", om, "frame frequency (0 = calibrated default)");
  manifold->add_option("--samples", msamples, "graph points");
  manifold->add_option("--lm-lo", lm_lo, "smallest stable coordinate");
  manifold->add_option("--lm-hi", lm_hi, "largest stable coordinate");
  manifold->add_option("--zeta-dim", zeta_dim, "center directions in the zeta draw");
  manifold->add_option("--zeta-amp", zeta_amp, "zeta amplitude (0 = zeta off)");

  auto* nineclass = app.add_subcommand("nineclass", "nine-class catalog");
  double nc_eps = 0.01, nc_zeta_amp = 0.0;
  int nc_zeta_dim = 4;
  nineclass->add_option("--om", om, "frame frequency (0 = calibrated default)");
  nineclass->add_option("--eps", nc_eps, "definite-side offset");
  nineclass->add_option("--zeta-amp", nc_zeta_amp, "zeta amplitude (0 = none)");
  nineclass->add_option("--zeta-dim", nc_zeta_dim, "center directions in the zeta draw");

  auto* calibrate = app.add_subcommand("calibrate", "regenerate the calibration file");
  bool quick = false;
  calibrate->add_flag("--quick", quick, "small grids and sample counts");

  auto* check = app.add_subcommand("check", "invariant smoke suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    ctx.load();
    if (om == 0.0) om = ctx.cal.om_work;
    if (soliton->parsed()) return cmd_soliton(ctx, oms);
    if (spectrum->parsed()) return cmd_spectrum(ctx, spec_oms, coercivity);
    if (curves->parsed()) return cmd_curves(ctx, om_lo, om_hi, cpoints);
    if (evolve->parsed())
      return cmd_evolve(ctx, om, init, in_path, eps, factor, amp, horizon, dt, snapshot_dt);
    if (classify->parsed())
      return cmd_classify(ctx, om, init, in_path, eps, factor, amp, horizon);
    if (manifold->parsed())
      return cmd_manifold(ctx, om, msamples, lm_lo, lm_hi, zeta_dim, zeta_amp);
    if (nineclass->parsed()) return cmd_nineclass(ctx, om, nc_eps, nc_zeta_amp, nc_zeta_dim);
    if (calibrate->parsed()) return cmd_calibrate(ctx, quick);
    if (check->parsed()) return cmd_check(ctx);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
