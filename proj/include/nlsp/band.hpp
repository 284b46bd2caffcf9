// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdlib>
#include <vector>

#include "nlsp/common.hpp"

namespace nlsp {

/// Banded matrix with kl sub- and ku super-diagonals, plus an LU
/// factorization with partial pivoting (band storage, fill limited to
/// kl extra super-diagonals). This is the only linear algebra the project
/// needs: every operator here is a 1-D finite-difference band.
template <class T>
struct BandedLU {
  int n = 0, kl = 0, ku = 0;
  // Factor storage: rows are diagonals. Row index kl+ku+i-j holds A(i,j),
  // i.e. row kl+ku is the main diagonal; rows above it are super-diagonals
  // (ku originals + kl fill), rows below are sub-diagonals.
  std::vector<T> ab;  // (2*kl+ku+1) x n, column-major in j
  std::vector<int> piv;
  bool factored = false;

  int ldab() const { return 2 * kl + ku + 1; }
  T& at(int diag_row, int j) { return ab[static_cast<size_t>(j) * ldab() + diag_row]; }
  const T& at(int diag_row, int j) const { return ab[static_cast<size_t>(j) * ldab() + diag_row]; }

  void init(int n_, int kl_, int ku_) {
    n = n_;
    kl = kl_;
    ku = ku_;
    ab.assign(static_cast<size_t>(ldab()) * n, T(0));
    piv.assign(n, 0);
    factored = false;
  }

  /// Sets A(i,j); valid for |i-j| within the band.
  void set(int i, int j, T v) { at(kl + ku + i - j, j) = v; }
  T get(int i, int j) const {
    if (j - i > ku + kl || i - j > kl) return T(0);
    return at(kl + ku + i - j, j);
  }

  /// In-place LU with row partial pivoting. Throws on exactly zero pivot.
  void factor() {
    for (int k = 0; k < n; ++k) {
      int imax = k;
      double vmax = std::abs(at(kl + ku, k));
      int ilim = std::min(n - 1, k + kl);
      for (int i = k + 1; i <= ilim; ++i) {
        double v = std::abs(at(kl + ku + i - k, k));
        if (v > vmax) {
          vmax = v;
          imax = i;
        }
      }
      piv[k] = imax;
      if (vmax == 0.0) throw Error("BandedLU: zero pivot at column " + std::to_string(k));
      int jlim = std::min(n - 1, k + kl + ku);
      if (imax != k) {
        for (int j = k; j <= jlim; ++j) {
          T& x = at(kl + ku + k - j, j);
          T& y = at(kl + ku + imax - j, j);
          T tmp = x;
          x = y;
          y = tmp;
        }
      }
      T pivval = at(kl + ku, k);
      for (int i = k + 1; i <= ilim; ++i) {
        T m = at(kl + ku + i - k, k) / pivval;
        at(kl + ku + i - k, k) = m;  // store multiplier
        for (int j = k + 1; j <= jlim; ++j) {
          at(kl + ku + i - j, j) -= m * at(kl + ku + k - j, j);
        }
      }
    }
    factored = true;
  }

  /// Solves A x = b using the stored factorization. b is overwritten by x.
  void solve(std::vector<T>& b) const {
    for (int k = 0; k < n; ++k) {
      if (piv[k] != k) std::swap(b[k], b[piv[k]]);
      int ilim = std::min(n - 1, k + kl);
      for (int i = k + 1; i <= ilim; ++i) b[i] -= at(kl + ku + i - k, k) * b[k];
    }
    for (int k = n - 1; k >= 0; --k) {
      int jlim = std::min(n - 1, k + kl + ku);
      T s = b[k];
      for (int j = k + 1; j <= jlim; ++j) s -= at(kl + ku + k - j, j) * b[j];
      b[k] = s / at(kl + ku, k);
    }
  }
};

/// Symmetric tridiagonal matrix (diag d, offdiag e between i and i+1).
struct SymTridiag {
  std::vector<double> d;  // size n
  std::vector<double> e;  // size n-1

  int size() const { return static_cast<int>(d.size()); }

  /// y = A x
  template <class T>
  void apply(const std::vector<T>& x, std::vector<T>& y) const {
    int n = size();
    y.resize(n);
    for (int i = 0; i < n; ++i) {
      T s = x[i] * d[i];
      if (i > 0) s += x[i - 1] * e[i - 1];
      if (i + 1 < n) s += x[i + 1] * e[i];
      y[i] = s;
    }
  }

  /// Number of eigenvalues strictly below s (Sturm sequence / LDL pivot signs).
  int count_below(double s) const {
    int n = size(), cnt = 0;
    double q = d[0] - s;
    if (q < 0) ++cnt;
    for (int i = 1; i < n; ++i) {
      double denom = (q == 0.0) ? 1e-300 : q;
      q = (d[i] - s) - e[i - 1] * e[i - 1] / denom;
      if (q < 0) ++cnt;
    }
    return cnt;
  }

  BandedLU<double> shifted_lu(double s) const {
    BandedLU<double> lu;
    int n = size();
    lu.init(n, 1, 1);
    for (int i = 0; i < n; ++i) {
      lu.set(i, i, d[i] - s);
      if (i + 1 < n) {
        lu.set(i, i + 1, e[i]);
        lu.set(i + 1, i, e[i]);
      }
    }
    lu.factor();
    return lu;
  }
};

/// Smallest eigenvalues of a symmetric tridiagonal matrix by Sturm bisection
/// (values) plus shift-inverted iteration (vectors).
struct TridiagEigen {
  double value = 0.0;
  std::vector<double> vec;
};

TridiagEigen tridiag_eigen_k(const SymTridiag& A, int k, double tol = 1e-13);

}  // namespace nlsp
