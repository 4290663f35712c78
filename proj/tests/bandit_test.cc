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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "adascal/cones.h"
#include "test_util.h"

namespace adascal {
namespace {

const double kSqrt2 = std::sqrt(2.0);

// High-precision reference values.
constexpr double kIxExample = -2.02030508910442149828812674887;    // -sqrt2/0.7
constexpr double kOmdExample = 0.524979187478939986099193182604;   // e^.1/(e^.1+1)
constexpr double kExpIxExample0 = 0.550336530895633739395015979686;
constexpr double kExpIxExample1 = 0.449663469104366260604984020314;

double Sum(const Vec& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

TEST(SimplexPointTest, Factories) {
  EXPECT_EQ(SimplexPoint::Uniform(4).probs(), (Vec{0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(SimplexPoint::PointMass(3, 2).probs(), (Vec{0, 0, 1}));
  EXPECT_FALSE(SimplexPoint::PointMass(3, 2).strictly_positive());
  EXPECT_THROW(SimplexPoint::FromProbs({0.5, 0.6}), std::invalid_argument);
  EXPECT_THROW(SimplexPoint::FromProbs({1.5, -0.5}), std::invalid_argument);
  EXPECT_THROW(SimplexPoint::FromProbs({}), std::invalid_argument);
  EXPECT_THROW(SimplexPoint::PointMass(2, 2), std::out_of_range);
}

TEST(SplitMix64Test, ReferenceValue) {
  EXPECT_EQ(SplitMix64(0), 0xE220A8397B1DCDAFULL);
}

TEST(SampleTest, PointMassAlwaysHitsItsIndex) {
  RandomStream rng(1);
  const auto dist = SimplexPoint::PointMass(4, 2);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(Sample(dist, rng), 2);
}

TEST(SampleTest, UniformFrequency) {
  RandomStream rng(2);
  const auto dist = SimplexPoint::Uniform(2);
  int zeros = 0;
  for (int i = 0; i < 1000000; ++i) zeros += Sample(dist, rng) == 0;
  EXPECT_GE(zeros / 1e6, 0.497);
  EXPECT_LE(zeros / 1e6, 0.503);
}

TEST(SampleTest, SkewedFrequency) {
  RandomStream rng(3);
  const auto dist = SimplexPoint::FromProbs({0.9, 0.1});
  int zeros = 0;
  for (int i = 0; i < 100000; ++i) zeros += Sample(dist, rng) == 0;
  EXPECT_GE(zeros / 1e5, 0.897);
  EXPECT_LE(zeros / 1e5, 0.903);
}

TEST(SampleTest, ConsumesExactlyOneUniform) {
  RandomStream a(9), b(9);
  const auto dist = SimplexPoint::FromProbs({0.2, 0.3, 0.5});
  for (int i = 0; i < 100; ++i) {
    Sample(dist, a);
    b.NextUniform();
  }
  EXPECT_EQ(a.NextUniform(), b.NextUniform());
}

TEST(SampleTest, Deterministic) {
  RandomStream a(77), b(77);
  std::mt19937_64 gen(1);
  for (int i = 0; i < 1000; ++i) {
    const auto dist = SimplexPoint::FromProbs(testing::RandomSimplex(gen, 5));
    ASSERT_EQ(Sample(dist, a), Sample(dist, b));
  }
}

TEST(IxEstimateTest, Examples) {
  const Vec g = IxEstimate(SimplexPoint::Uniform(2), 0, kSqrt2, 0.2);
  EXPECT_NEAR(g[0], kIxExample, 1e-15);
  EXPECT_EQ(g[1], 0.0);
  EXPECT_EQ(IxEstimate(SimplexPoint::Uniform(3), 1, 0.0, 0.2), (Vec{0, 0, 0}));
  EXPECT_EQ(IxEstimate(SimplexPoint::PointMass(3, 1), 1, 0.7, 0.0), (Vec{0, -0.7, 0}));
}

TEST(IxEstimateTest, Errors) {
  EXPECT_THROW(IxEstimate(SimplexPoint::PointMass(2, 0), 1, 1.0, 0.0),
               std::domain_error);
  EXPECT_THROW(IxEstimate(SimplexPoint::Uniform(2), 2, 1.0, 0.2), std::out_of_range);
}

TEST(IxEstimateTest, MagnitudeBound) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 20000; ++trial) {
    const int d = 1 + rng() % 6, n = 2 + rng() % 4;
    const double U = 0.5 + (rng() % 4);
    const double gamma = 0.01 + (rng() % 100) / 100.0;
    const auto psi = WeightVector::Normalize(testing::RandomVector(rng, d, -1, 1));
    const Vec u = testing::RandomVector(rng, d, -U, U);
    const auto dist = SimplexPoint::FromProbs(testing::RandomSimplex(rng, n));
    const int chosen = rng() % n;
    const Vec g = IxEstimate(dist, chosen, Scalarize(psi, u), gamma);
    const double cap = std::sqrt(static_cast<double>(d)) * U / gamma;
    for (double x : g) ASSERT_LE(std::abs(x), cap);
  }
}

TEST(IxEstimateTest, UnbiasedByExactExpectation) {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto dist = SimplexPoint::FromProbs(testing::RandomSimplex(rng, 3));
    const Vec r = testing::RandomVector(rng, 3, -2, 2);
    Vec mean(3, 0.0);
    for (int a = 0; a < 3; ++a) {
      const Vec g = IxEstimate(dist, a, r[a], 0.0);
      for (int b = 0; b < 3; ++b) mean[b] += dist[a] * g[b];
    }
    for (int b = 0; b < 3; ++b) ASSERT_NEAR(mean[b], -r[b], 1e-12);
  }
}

TEST(OmdEntropyStepTest, ZeroLossIsIdentity) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto dist = SimplexPoint::FromProbs(testing::RandomSimplex(rng, 5));
    EXPECT_EQ(OmdEntropyStep(dist, Vec(5, 0.0), 0.3), dist);
  }
}

TEST(OmdEntropyStepTest, TwoArmExample) {
  const auto q = OmdEntropyStep(SimplexPoint::Uniform(2), Vec{-1, 0}, 0.1);
  EXPECT_NEAR(q[0], kOmdExample, 1e-15);
  EXPECT_NEAR(q[1], 1 - kOmdExample, 1e-15);
  const Vec newton = testing::NewtonOmdMinimizer(Vec{0.5, 0.5}, Vec{-1, 0}, 0.1);
  EXPECT_NEAR(q[0], newton[0], 1e-8);
  EXPECT_NEAR(q[1], newton[1], 1e-8);
}

TEST(OmdEntropyStepTest, PermutationEquivariant) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + rng() % 5;
    const Vec p = testing::RandomSimplex(rng, n);
    const Vec loss = testing::RandomVector(rng, n, -3, 3);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Vec pp(n), lp(n);
    for (int i = 0; i < n; ++i) {
      pp[i] = p[perm[i]];
      lp[i] = loss[perm[i]];
    }
    const auto q = OmdEntropyStep(SimplexPoint::FromProbs(p), loss, 0.4);
    const auto qp = OmdEntropyStep(SimplexPoint::FromProbs(pp), lp, 0.4);
    for (int i = 0; i < n; ++i) ASSERT_NEAR(qp[i], q[perm[i]], 1e-15);
  }
}

TEST(OmdEntropyStepTest, HugeLossesStayFiniteAndPositive) {
  const auto q = OmdEntropyStep(SimplexPoint::Uniform(3), Vec{1e6, -1e6, 0}, 1.0);
  EXPECT_TRUE(q.strictly_positive());
  EXPECT_NEAR(q[1], 1.0, 1e-12);
  EXPECT_THROW(OmdEntropyStep(SimplexPoint::Uniform(2), Vec{0, 0}, 0.0),
               std::invalid_argument);
  EXPECT_THROW(OmdEntropyStep(SimplexPoint::Uniform(2), Vec{0}, 1.0),
               std::invalid_argument);
}

TEST(OmdEntropyStepTest, ChainedUpdatesStayOnSimplex) {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> loss(-50, 50), eta(0.001, 1.0);
  auto dist = SimplexPoint::Uniform(4);
  for (int t = 0; t < 1000000; ++t) {
    const Vec l = {loss(rng), loss(rng), loss(rng), loss(rng)};
    dist = OmdEntropyStep(dist, l, eta(rng));
    ASSERT_NEAR(Sum(dist.probs()), 1.0, 1e-12) << "step " << t;
    ASSERT_TRUE(dist.strictly_positive()) << "step " << t;
  }
}

TEST(OmdEntropyStepTest, MatchesNumericalMinimizer) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> eta(0.01, 2.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + rng() % 5;
    const Vec p = testing::RandomSimplex(rng, n, 0.05);
    const Vec loss = testing::RandomVector(rng, n, -5, 5);
    const double e = eta(rng);
    const auto q = OmdEntropyStep(SimplexPoint::FromProbs(p), loss, e);
    const Vec ref = testing::NewtonOmdMinimizer(p, loss, e);
    for (int i = 0; i < n; ++i) ASSERT_NEAR(q[i], ref[i], 1e-9) << "trial " << trial;
  }
}

TEST(ExpIxStepTest, ComposedExample) {
  const auto s = LearnerState::Make(SimplexPoint::Uniform(2), 0.1, 0.2);
  const auto next = ExpIxStep(s, 0, kSqrt2);
  EXPECT_NEAR(next.dist[0], kExpIxExample0, 1e-15);
  EXPECT_NEAR(next.dist[1], kExpIxExample1, 1e-15);
  const Vec g = IxEstimate(s.dist, 0, kSqrt2, 0.2);
  EXPECT_EQ(next.dist, OmdEntropyStep(s.dist, g, 0.1));
  EXPECT_EQ(next.eta, 0.1);
  EXPECT_EQ(next.gamma, 0.2);
}

TEST(ExpIxStepTest, ZeroRewardKeepsDistribution) {
  const auto s = LearnerState::Make(SimplexPoint::FromProbs({0.3, 0.7}), 0.1, 0.2);
  EXPECT_EQ(ExpIxStep(s, 1, 0.0).dist, s.dist);
}

TEST(ExpIxStepTest, StaysStrictlyPositive) {
  auto s = LearnerState::Make(SimplexPoint::Uniform(3), 5.0, 0.0);
  RandomStream rng(8);
  for (int t = 0; t < 10000; ++t) {
    const int a = Sample(s.dist, rng);
    s = ExpIxStep(s, a, a == 0 ? 1.0 : -1.0);
    ASSERT_TRUE(s.dist.strictly_positive());
  }
}

TEST(LearnerStateTest, Validation) {
  EXPECT_THROW(LearnerState::Make(SimplexPoint::Uniform(2), 0.0, 0.2),
               std::invalid_argument);
  EXPECT_THROW(LearnerState::Make(SimplexPoint::Uniform(2), 0.1, -0.1),
               std::invalid_argument);
  EXPECT_NO_THROW(LearnerState::Make(SimplexPoint::Uniform(2), 0.1, 0.0));
}

}  // namespace
}  // namespace adascal
