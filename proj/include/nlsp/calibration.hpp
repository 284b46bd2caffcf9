// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>

#include "nlsp/io.hpp"
#include "nlsp/modulation.hpp"
#include "nlsp/potential.hpp"

namespace nlsp {

/// Frozen numerical environment: grids, potential depths inside their
/// single-bound-state windows, the edges of the two solution families, the
/// working frequency with its eigenvalue and coercivity constants, and the
/// virial table. embedded_calibration() carries the values produced by the
/// full calibration run; `nlsplab calibrate` regenerates them and the
/// NLSPLAB_CALIBRATION environment variable points at a JSON override.
struct Calibration {
  int static_n = 4096;
  double static_rmax = 60.0;
  int dyn_n = 1024;
  double dyn_rmax = 40.0;

  Potential pot;        // working potential (CorePow family)
  Potential pot_gauss;  // smooth alternative used by cross checks
  DepthWindow window_core, window_gauss;

  double om_star = 0.0;  // smallest frequency with a contracting soliton solve
  double z_star = 0.0;   // largest |z| with a contracting small-branch solve

  double om_work = 0.0;  // frequency of the dynamic experiments
  double alpha = 0.0;    // eigenvalue at om_work on the dynamic grid
  double nu_plus = 0.0, nu_minus = 0.0;
  double soliton_residual = 0.0, pencil_residual = 0.0;

  Thresholds thresholds;
  VirialTable vtable;
};

/// Values frozen from the calibration run.
Calibration embedded_calibration();

/// NLSPLAB_CALIBRATION override when set, embedded values otherwise.
Calibration load_calibration();

/// Recomputes everything from scratch. quick shrinks grids and sample
/// counts for smoke runs; log receives one line per stage when non-null.
Calibration run_calibration(bool quick, std::ostream* log);

njson calibration_json(const Calibration& c);
Calibration calibration_from_json(const njson& j);

}  // namespace nlsp
