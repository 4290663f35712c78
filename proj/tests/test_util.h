// Copyright 2026 The adascal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Test-only oracles and random instance generators. Nothing here calls the
// code paths it is used to check.

#ifndef ADASCAL_TESTS_TEST_UTIL_H_
#define ADASCAL_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "adascal/cones.h"

namespace adascal::testing {

// Minimizes <q, loss> + KL(q || dist) / eta over the open simplex with an
// equality-constrained damped Newton method in long double.
inline std::vector<double> NewtonOmdMinimizer(std::span<const double> dist,
                                              std::span<const double> loss,
                                              double eta) {
  using LD = long double;
  const std::size_t n = dist.size();
  std::vector<LD> q(n, 1.0L / n), p(dist.begin(), dist.end());
  auto objective = [&](const std::vector<LD>& x) {
    LD f = 0;
    for (std::size_t i = 0; i < n; ++i) {
      f += x[i] * loss[i] + x[i] * std::log(x[i] / p[i]) / eta;
    }
    return f;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    std::vector<LD> grad(n), hinv(n);
    for (std::size_t i = 0; i < n; ++i) {
      grad[i] = loss[i] + (std::log(q[i] / p[i]) + 1) / eta;
      hinv[i] = eta * q[i];
    }
    LD num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
      num += hinv[i] * grad[i];
      den += hinv[i];
    }
    const LD nu = num / den;
    std::vector<LD> step(n);
    LD decrement = 0;
    for (std::size_t i = 0; i < n; ++i) {
      step[i] = -hinv[i] * (grad[i] - nu);
      decrement += step[i] * step[i] / hinv[i];
    }
    if (decrement < 1e-28L) break;
    LD t = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (step[i] < 0) t = std::min(t, -0.95L * q[i] / step[i]);
    }
    const LD f0 = objective(q);
    std::vector<LD> next(n);
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) next[i] = q[i] + t * step[i];
      if (objective(next) <= f0 - 0.25L * t * decrement) break;
      t /= 2;
    }
    LD sum = 0;
    for (LD x : next) sum += x;
    for (std::size_t i = 0; i < n; ++i) q[i] = next[i] / sum;
  }
  return std::vector<double>(q.begin(), q.end());
}

// Exhaustive search over lambda in [0, hi]^k on a grid of the given step for
// a nonnegative combination of generators reproducing target within tol.
inline bool GridConeSearch(const std::vector<Vec>& generators,
                           std::span<const double> target, double hi,
                           double step, double tol, Vec* lambda_out = nullptr) {
  const std::size_t k = generators.size();
  const int levels = static_cast<int>(std::lround(hi / step)) + 1;
  std::vector<int> idx(k, 0);
  while (true) {
    double err = 0;
    for (std::size_t c = 0; c < target.size(); ++c) {
      double x = 0;
      for (std::size_t j = 0; j < k; ++j) x += idx[j] * step * generators[j][c];
      err += (x - target[c]) * (x - target[c]);
    }
    if (std::sqrt(err) <= tol) {
      if (lambda_out) {
        lambda_out->resize(k);
        for (std::size_t j = 0; j < k; ++j) (*lambda_out)[j] = idx[j] * step;
      }
      return true;
    }
    std::size_t j = 0;
    while (j < k && ++idx[j] == levels) idx[j++] = 0;
    if (j == k) return false;
  }
}

inline Vec RandomVector(std::mt19937_64& rng, int dim, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vec v(dim);
  for (double& x : v) x = u(rng);
  return v;
}

inline std::vector<double> RandomSimplex(std::mt19937_64& rng, int n,
                                         double floor = 1e-3) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> p(n);
  double s = 0;
  for (double& x : p) s += (x = e(rng) + floor);
  for (double& x : p) x /= s;
  return p;
}

}  // namespace adascal::testing

#endif  // ADASCAL_TESTS_TEST_UTIL_H_
