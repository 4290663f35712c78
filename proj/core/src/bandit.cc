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

#include "adascal/bandit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace adascal {

SimplexPoint SimplexPoint::FromProbs(Vec probs) {
  if (probs.empty()) throw std::invalid_argument("simplex point is empty");
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("simplex point has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw std::invalid_argument("simplex point sums to " + std::to_string(sum));
  }
  return SimplexPoint(std::move(probs));
}

SimplexPoint SimplexPoint::Uniform(int n) {
  if (n <= 0) throw std::invalid_argument("simplex size must be positive");
  return SimplexPoint(Vec(n, 1.0 / n));
}

SimplexPoint SimplexPoint::PointMass(int n, int index) {
  if (n <= 0) throw std::invalid_argument("point mass needs n >= 1");
  if (index < 0 || index >= n) {
    throw std::out_of_range("point mass index " + std::to_string(index) +
                            " outside [0, " + std::to_string(n) + ")");
  }
  Vec p(n, 0.0);
  p[index] = 1.0;
  return SimplexPoint(std::move(p));
}

bool SimplexPoint::strictly_positive() const {
  return std::all_of(probs_.begin(), probs_.end(),
                     [](double p) { return p > 0.0; });
}

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

int Sample(const SimplexPoint& dist, RandomStream& rng) {
  const double u = rng.NextUniform();
  double cdf = 0.0;
  int last_positive = 0;
  for (int i = 0; i < dist.size(); ++i) {
    if (dist[i] <= 0.0) continue;
    last_positive = i;
    cdf += dist[i];
    if (u < cdf) return i;
  }
  // Rounding can leave the total a hair under 1.
  return last_positive;
}

Vec IxEstimate(const SimplexPoint& dist, int chosen, double reward,
               double gamma) {
  if (chosen < 0 || chosen >= dist.size()) {
    throw std::out_of_range("IxEstimate: chosen index " +
                            std::to_string(chosen));
  }
  if (gamma < 0.0) throw std::invalid_argument("IxEstimate: gamma < 0");
  const double denom = dist[chosen] + gamma;
  if (denom == 0.0) {
    throw std::domain_error(
        "IxEstimate: zero probability on the chosen arm with gamma = 0");
  }
  Vec g(dist.size(), 0.0);
  if (reward != 0.0) g[chosen] = -reward / denom;
  return g;
}

SimplexPoint OmdEntropyStep(const SimplexPoint& dist,
                            std::span<const double> loss, double eta) {
  if (static_cast<int>(loss.size()) != dist.size()) {
    throw std::invalid_argument("OmdEntropyStep: loss has the wrong size");
  }
  if (!(eta > 0.0)) throw std::invalid_argument("OmdEntropyStep: eta <= 0");
  const int n = dist.size();
  double shift = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    if (!std::isfinite(loss[a])) {
      throw std::invalid_argument("OmdEntropyStep: non-finite loss");
    }
    shift = std::max(shift, -eta * loss[a]);
  }
  if (std::all_of(loss.begin(), loss.end(), [](double l) { return l == 0.0; })) {
    return dist;
  }
  Vec z(n);
  double total = 0.0;
  for (int a = 0; a < n; ++a) {
    z[a] = dist[a] * std::exp(-eta * loss[a] - shift);
    total += z[a];
  }
  constexpr double kFloor = std::numeric_limits<double>::min();
  for (int a = 0; a < n; ++a) {
    z[a] /= total;
    if (dist[a] > 0.0 && z[a] < kFloor) z[a] = kFloor;
  }
  return SimplexPoint(std::move(z));
}

LearnerState LearnerState::Make(SimplexPoint dist, double eta, double gamma) {
  if (!(eta > 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("learner step size must be > 0");
  }
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("learner IX parameter must be >= 0");
  }
  return LearnerState{std::move(dist), eta, gamma};
}

LearnerState ExpIxStep(const LearnerState& state, int chosen, double reward) {
  const Vec g = IxEstimate(state.dist, chosen, reward, state.gamma);
  return LearnerState{OmdEntropyStep(state.dist, g, state.eta), state.eta,
                      state.gamma};
}

}  // namespace adascal
