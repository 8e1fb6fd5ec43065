//
// Copyright 2026 The perp Authors
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
//

#include "perp/noise.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include "gtest/gtest.h"
#include "perp/errors.h"

namespace perp {
namespace {

constexpr int kDraws = 100000;

// Asymptotic Kolmogorov survival function Pr[sqrt(n) D > x].
double KolmogorovSurvival(double x) {
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    sum += (k % 2 ? 2.0 : -2.0) * std::exp(-2.0 * k * k * x * x);
  }
  return std::clamp(sum, 0.0, 1.0);
}

double LaplaceCdf(double x, double b) {
  return x < 0 ? 0.5 * std::exp(x / b) : 1 - 0.5 * std::exp(-x / b);
}

TEST(NoiseTest, ZeroModeReturnsZero) {
  NoiseSource zero = NoiseSource::Zero();
  EXPECT_EQ(SampleLaplace(zero, 1.0), 0.0);
  EXPECT_EQ(SampleGeometric(zero, 0.3), 0);
  EXPECT_THROW(zero.Uniform(), StateError);
  EXPECT_EQ(zero.draws(), 3u);
}

TEST(NoiseTest, ScriptedModeReplaysInOrder) {
  NoiseSource s = NoiseSource::Scripted({1.5, 2, -0.25});
  EXPECT_EQ(s.Laplace(1), 1.5);
  EXPECT_EQ(s.Geometric(0.5), 2);
  EXPECT_EQ(s.Laplace(3), -0.25);
  EXPECT_THROW(s.Laplace(1), StateError);
}

TEST(NoiseTest, ScriptedGeometricRejectsNonIntegers) {
  NoiseSource s = NoiseSource::Scripted({0.5});
  EXPECT_THROW(s.Geometric(0.5), ParameterError);
}

TEST(NoiseTest, RejectsBadParameters) {
  NoiseSource s = NoiseSource::Seeded(1);
  EXPECT_THROW(s.Laplace(0), ParameterError);
  EXPECT_THROW(s.Laplace(-1), ParameterError);
  EXPECT_THROW(s.Geometric(0), ParameterError);
  EXPECT_THROW(s.Geometric(1.5), ParameterError);
  EXPECT_EQ(s.Geometric(1.0), 0);
  EXPECT_THROW(PrivacyParams::Make(0, 0.1), ParameterError);
  EXPECT_THROW(PrivacyParams::Make(1, 1), ParameterError);
}

TEST(NoiseTest, SeededIsDeterministic) {
  NoiseSource a = NoiseSource::Seeded(42);
  NoiseSource b = NoiseSource::Seeded(42);
  for (int i = 0; i < 100; ++i) {
    ASSERT_EQ(a.Laplace(2.0), b.Laplace(2.0));
    ASSERT_EQ(a.Geometric(0.3), b.Geometric(0.3));
  }
}

TEST(NoiseTest, LaplaceMedianAndVariance) {
  NoiseSource s = NoiseSource::Seeded(7);
  std::vector<double> v(kDraws);
  for (auto& x : v) x = s.Laplace(1.0);
  std::nth_element(v.begin(), v.begin() + kDraws / 2, v.end());
  EXPECT_NEAR(v[kDraws / 2], 0.0, 0.02);
  double sum = 0, sq = 0;
  for (double x : v) {
    sum += x;
    sq += x * x;
  }
  const double mean = sum / kDraws;
  EXPECT_NEAR(sq / kDraws - mean * mean, 2.0, 0.1);
}

TEST(NoiseTest, LaplacePassesKolmogorovSmirnov) {
  NoiseSource s = NoiseSource::Seeded(11);
  const double b = 1.7;
  std::vector<double> v(kDraws);
  for (auto& x : v) x = s.Laplace(b);
  std::sort(v.begin(), v.end());
  double dmax = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double f = LaplaceCdf(v[i], b);
    dmax = std::max({dmax, (i + 1.0) / kDraws - f,
                     f - static_cast<double>(i) / kDraws});
  }
  const double p_value = KolmogorovSurvival(std::sqrt(kDraws) * dmax);
  EXPECT_GT(p_value, 0.001) << "D = " << dmax;
}

TEST(NoiseTest, GeometricPmfAndMean) {
  NoiseSource s = NoiseSource::Seeded(3);
  int zeros = 0;
  double sum = 0;
  for (int i = 0; i < kDraws; ++i) {
    const auto k = s.Geometric(0.5);
    ASSERT_GE(k, 0);
    zeros += k == 0;
    sum += static_cast<double>(k);
  }
  EXPECT_NEAR(static_cast<double>(zeros) / kDraws, 0.5, 0.01);
  EXPECT_NEAR(sum / kDraws, 1.0, 0.02);
}

TEST(NoiseTest, GeometricPassesChiSquare) {
  NoiseSource s = NoiseSource::Seeded(5);
  const double p = 0.3;
  constexpr int kBins = 15;  // last bin collects the tail
  std::vector<double> observed(kBins, 0);
  for (int i = 0; i < kDraws; ++i) {
    const auto k = s.Geometric(p);
    observed[std::min<std::int64_t>(k, kBins - 1)] += 1;
  }
  double stat = 0;
  for (int k = 0; k < kBins; ++k) {
    const double prob = k < kBins - 1 ? p * std::pow(1 - p, k)
                                      : std::pow(1 - p, kBins - 1);
    const double expected = prob * kDraws;
    stat += (observed[k] - expected) * (observed[k] - expected) / expected;
  }
  boost::math::chi_squared_distribution<> chi(kBins - 1);
  EXPECT_GT(boost::math::cdf(boost::math::complement(chi, stat)), 0.001);
}

TEST(NoiseTest, LaplaceTailExamples) {
  EXPECT_DOUBLE_EQ(LaplaceTail(1, 1), 0);
  EXPECT_NEAR(LaplaceTail(1, std::exp(-3.0)), 3.0, 1e-12);
  EXPECT_NEAR(LaplaceTail(2, 0.01), 9.2103, 1e-4);
  EXPECT_THROW(LaplaceTail(0, 0.5), ParameterError);
  EXPECT_THROW(LaplaceTail(1, 0), ParameterError);
}

TEST(NoiseTest, LaplaceTailMatchesEmpiricalTail) {
  NoiseSource s = NoiseSource::Seeded(9);
  const double bound = LaplaceTail(1.0, 0.05);
  int over = 0;
  for (int i = 0; i < kDraws; ++i) over += std::abs(s.Laplace(1.0)) > bound;
  EXPECT_NEAR(static_cast<double>(over) / kDraws, 0.05, 0.005);
}

TEST(NoiseTest, MixSeedSeparatesStreams) {
  EXPECT_NE(MixSeed(1, 0), MixSeed(1, 1));
  EXPECT_NE(MixSeed(1, 0), MixSeed(2, 0));
  EXPECT_EQ(MixSeed(9, 4), MixSeed(9, 4));
}

}  // namespace
}  // namespace perp
