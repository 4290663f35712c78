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

// Building blocks shared by every learner in the library: sampling from a
// simplex point, the implicit-exploration (IX) loss estimator, and one
// online mirror descent step under the negative-entropy regularizer.
//
// Conventions:
//   - Learners minimize. A scalar reward r for the sampled arm becomes the
//     estimated loss -r / (p[arm] + gamma) on that arm and 0 elsewhere.
//   - Rewards are used as given; negative rewards are not shifted or clipped.
//   - The estimator always uses the distribution the arm was sampled from.

#ifndef ADASCAL_BANDIT_H_
#define ADASCAL_BANDIT_H_

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "adascal/cones.h"

namespace adascal {

// A probability vector: entries >= 0 summing to 1 within 1e-12.
class SimplexPoint {
 public:
  static constexpr double kSumTolerance = 1e-12;

  // Throws std::invalid_argument if probs is empty, has a negative or
  // non-finite entry, or does not sum to 1 within kSumTolerance.
  static SimplexPoint FromProbs(Vec probs);
  static SimplexPoint Uniform(int n);
  static SimplexPoint PointMass(int n, int index);

  int size() const { return static_cast<int>(probs_.size()); }
  const Vec& probs() const { return probs_; }
  double operator[](int i) const { return probs_[i]; }
  bool strictly_positive() const;

  friend bool operator==(const SimplexPoint&, const SimplexPoint&) = default;

 private:
  explicit SimplexPoint(Vec probs) : probs_(std::move(probs)) {}
  Vec probs_;

  friend SimplexPoint OmdEntropyStep(const SimplexPoint&,
                                     std::span<const double>, double);
};

// Seeded stream of uniforms in [0, 1). Each NextUniform() consumes exactly
// one 64-bit mt19937_64 output and keeps its top 53 bits, so a given seed
// yields the same sequence on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}
  double NextUniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

// splitmix64 finalizer.
std::uint64_t SplitMix64(std::uint64_t x);

// Returns i with probability dist[i] by inverting the CDF at one uniform.
int Sample(const SimplexPoint& dist, RandomStream& rng);

// out[a] = -[a == chosen] * reward / (dist[chosen] + gamma).
// Throws std::domain_error when the denominator is zero.
Vec IxEstimate(const SimplexPoint& dist, int chosen, double reward,
               double gamma);

// argmin_q <q, loss> + KL(q || dist) / eta over the simplex, in closed form:
// q(a) proportional to dist(a) * exp(-eta * loss(a)). The exponent is shifted
// by its maximum before exponentiation. An entry that would underflow to 0 is
// held at the smallest normal double so the result stays strictly positive.
SimplexPoint OmdEntropyStep(const SimplexPoint& dist,
                            std::span<const double> loss, double eta);

// Exp-IX learner: exponential weights driven by IX loss estimates.
struct LearnerState {
  SimplexPoint dist;
  double eta;    // step size, > 0
  double gamma;  // implicit-exploration parameter, >= 0

  // Throws std::invalid_argument on eta <= 0 or gamma < 0.
  static LearnerState Make(SimplexPoint dist, double eta, double gamma);
};

// dist' = OmdEntropyStep(dist, IxEstimate(dist, chosen, reward, gamma), eta).
LearnerState ExpIxStep(const LearnerState& state, int chosen, double reward);

}  // namespace adascal

#endif  // ADASCAL_BANDIT_H_
