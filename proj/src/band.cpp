// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#include "nlsp/band.hpp"

#include <cmath>

namespace nlsp {

TridiagEigen tridiag_eigen_k(const SymTridiag& A, int k, double tol) {
  int n = A.size();
  // Gershgorin bracket
  double lo = A.d[0], hi = A.d[0];
  for (int i = 0; i < n; ++i) {
    double w = 0.0;
    if (i > 0) w += std::abs(A.e[i - 1]);
    if (i + 1 < n) w += std::abs(A.e[i]);
    lo = std::min(lo, A.d[i] - w);
    hi = std::max(hi, A.d[i] + w);
  }
  double scale = std::max(std::abs(lo), std::abs(hi));
  // Sturm bisection: isolate the k-th smallest eigenvalue
  double a = lo, b = hi;
  for (int it = 0; it < 200 && (b - a) > 1e-14 * scale; ++it) {
    double m = 0.5 * (a + b);
    if (A.count_below(m) <= k)
      a = m;
    else
      b = m;
  }
  double shift = 0.5 * (a + b);

  // Inverse iteration with a couple of Rayleigh refinements.
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) x[i] = 1.0 / std::sqrt(static_cast<double>(n));
  double lambda = shift;
  for (int round = 0; round < 3; ++round) {
    BandedLU<double> lu;
    try {
      lu = A.shifted_lu(lambda + ((round == 0) ? (b - a) : 0.0));
    } catch (const Error&) {
      lu = A.shifted_lu(lambda + 1e-12 * (1.0 + scale));
    }
    for (int it = 0; it < 50; ++it) {
      y = x;
      lu.solve(y);
      double nrm = 0.0;
      for (double t : y) nrm += t * t;
      nrm = std::sqrt(nrm);
      for (int i = 0; i < n; ++i) y[i] /= nrm;
      double diff = 0.0;
      for (int i = 0; i < n; ++i) diff = std::max(diff, std::abs(std::abs(y[i]) - std::abs(x[i])));
      x = y;
      if (diff < tol) break;
    }
    // Rayleigh quotient
    A.apply(x, y);
    double num = 0.0;
    for (int i = 0; i < n; ++i) num += x[i] * y[i];
    lambda = num;
  }
  // sign convention: make the largest-magnitude entry positive
  int imax = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(x[i]) > std::abs(x[imax])) imax = i;
  if (x[imax] < 0)
    for (auto& t : x) t = -t;
  TridiagEigen out;
  out.value = lambda;
  out.vec = std::move(x);
  return out;
}

}  // namespace nlsp
