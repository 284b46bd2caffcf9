// Copyright (c) 2026 the nlsplab contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace nlsp {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Base class for all structured failures thrown by the library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct NoBoundState : Error {
  using Error::Error;
};
struct MultipleBoundStates : Error {
  using Error::Error;
};
struct ContractionDiverged : Error {
  using Error::Error;
};
struct EigenNotIsolated : Error {
  using Error::Error;
};
struct NegativeQuadraticForm : Error {
  using Error::Error;
};
struct SignDomain : Error {
  using Error::Error;
};
struct CaseOverlapDisagreement : Error {
  using Error::Error;
};
struct HorizonExhausted : Error {
  using Error::Error;
};
struct BracketFailure : Error {
  using Error::Error;
};
struct StepFailure : Error {
  using Error::Error;
};
struct TooFarFromOrbit : Error {
  using Error::Error;
};
struct DegenerateDenominator : Error {
  using Error::Error;
};

/// Deterministic RNG wrapper. All stochastic suites derive their streams from
/// a single user seed so reruns are bit-identical.
struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double a, double b) {
    std::uniform_real_distribution<double> d(a, b);
    return d(eng);
  }
  double normal(double mu = 0.0, double sigma = 1.0) {
    std::normal_distribution<double> d(mu, sigma);
    return d(eng);
  }
  std::uint64_t child_seed() { return eng(); }
};

/// Runs body(i) for i in [0, count). Work items must be independent; results
/// are written to per-index slots by the caller, so the reduction order (and
/// therefore the output) does not depend on the thread count.
inline void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  int nt = std::min(threads, count);
  for (int t = 0; t < nt; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  }
  for (auto& th : pool) th.join();
}

inline int default_threads() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace nlsp
