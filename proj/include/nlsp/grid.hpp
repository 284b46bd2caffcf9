// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <vector>

#include "nlsp/common.hpp"

namespace nlsp {

/// Uniform radial grid on (0, r_max]. Node i sits at r_i = (i+1)h with
/// h = r_max/n, so the last node is exactly r_max and carries the Dirichlet
/// condition w(r_max) = 0 of the reduced variable w(r) = r f(r).
///
/// Radial functions f(|x|) on R^3 are reduced through w = r f: the radial
/// Laplacian is (Delta f)(r_i) = w''(r_i)/r_i with second differences on w,
/// using the exact interior ghost w(0) = 0 and a zero ghost one spacing past
/// r_max. Volume quadrature is the trapezoid rule in r with the r = 0
/// endpoint dropped (its integrand r^2 |f|^2 vanishes) and the r_max weight
/// halved: weight_i = 4 pi h r_i^2 (i < n-1), 2 pi h r_max^2 (i = n-1).
struct RadialGrid {
  int n = 0;
  double r_max = 0.0;
  double h = 0.0;
  std::vector<double> r;
  std::vector<double> qw;  // volume quadrature weights
};

using Grid = std::shared_ptr<const RadialGrid>;

Grid make_grid(int n, double r_max);

/// Value-semantic complex radial field sampled on a grid.
struct RadialField {
  Grid grid;
  std::vector<cplx> v;

  RadialField() = default;
  explicit RadialField(Grid g) : grid(std::move(g)), v(grid->n, cplx(0.0)) {}
  int n() const { return static_cast<int>(v.size()); }
};

RadialField field_from(const Grid& g, const std::function<cplx(double)>& f);
RadialField field_from_real(const Grid& g, const std::function<double(double)>& f);

/// Complex volume inner product (f|g) = int f conj(g) dx.
cplx cinner(const RadialField& f, const RadialField& g);
/// Real pairing <f|g> = Re (f|g).
double rinner(const RadialField& f, const RadialField& g);

double norm_l2sq(const RadialField& f);
double norm_l4p4(const RadialField& f);  // int |f|^4 dx

/// Dirichlet form int grad f . conj(grad g) dx, evaluated as the exact
/// quadratic form of the discrete Laplacian (summation by parts on w).
cplx dirichlet_form(const RadialField& f, const RadialField& g);
double norm_h1sq(const RadialField& f);  // int |grad f|^2 + |f|^2 dx

RadialField laplacian(const RadialField& f);

/// Radial derivative f_r, second order, via the odd extension of w = r f.
RadialField radial_derivative(const RadialField& f);

enum class RescaleDir { Forward, Inverse };

/// Forward: (S_om f)(x) = om^{-1/2} f(om^{-1/2} x). Inverse composes to the
/// identity. Off-node values come from cubic Lagrange interpolation of w with
/// odd extension through r = 0 and zero beyond r_max.
RadialField rescale(const RadialField& f, double om, RescaleDir dir);

/// Generator of the scaling family: S'_p f = r f_r + (3/p) f.
RadialField scaling_derivative(const RadialField& f, double p);

// Small vector helpers (fields must share a grid).
RadialField conj_field(const RadialField& f);
void axpy(cplx a, const RadialField& x, RadialField& y);  // y += a x
RadialField scaled(const RadialField& f, cplx a);
RadialField added(const RadialField& f, const RadialField& g);

/// w_i = r_i f_i and back.
std::vector<cplx> to_w(const RadialField& f);
RadialField from_w(const Grid& g, const std::vector<cplx>& w);

/// Smooth random Dirichlet-compatible field: a few Gaussian bumps with
/// complex amplitudes, exponentially localized, vanishing at r_max.
RadialField random_field(const Grid& g, Rng& rng, double amplitude = 1.0);

}  // namespace nlsp
