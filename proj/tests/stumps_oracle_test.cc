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

#include "perp/stumps_oracle.h"

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "perp/errors.h"

namespace perp {
namespace {

LabeledPoint L(std::vector<double> x, int label) {
  return LabeledPoint{Point{std::move(x), {}}, label};
}

// Brute force over every threshold that produces a distinct labeling.
std::int64_t BruteStumpError(const std::vector<LabeledPoint>& s,
                             std::size_t axis, int sign) {
  std::vector<double> ts = {sign * std::numeric_limits<double>::infinity()};
  for (const auto& p : s) ts.push_back(p.point.x[axis]);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (double t : ts) {
    std::int64_t err = 0;
    for (const auto& p : s) {
      const int y = sign * (p.point.x[axis] - t) >= 0 ? 1 : 0;
      err += y != p.label;
    }
    best = std::min(best, err);
  }
  return best;
}

std::vector<LabeledPoint> RandomSample(std::mt19937_64& rng, std::size_t n,
                                       std::size_t d) {
  std::uniform_real_distribution<double> u(0, 1);
  std::bernoulli_distribution coin(0.5);
  std::vector<LabeledPoint> s;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(d);
    for (auto& v : x) v = u(rng);
    s.push_back(L(x, coin(rng)));
  }
  return s;
}

const std::vector<LabeledPoint> kS = {
    L({0.1, 0.9}, 1), L({0.2, 0.1}, 1), L({0.7, 0.5}, 0), L({0.9, 0.2}, 0)};

TEST(BestStumpErrorTest, Examples) {
  EXPECT_EQ(BestStumpError(kS, 0, -1), 0);
  EXPECT_EQ(BestStumpError(kS, 1, 1), 1);
  std::vector<LabeledPoint> ones = {L({0.3}, 1), L({0.1}, 1), L({0.8}, 1)};
  EXPECT_EQ(BestStumpError(ones, 0, 1), 0);
  EXPECT_EQ(BestStumpError(ones, 0, -1), 0);
}

TEST(BestStumpErrorTest, Errors) {
  EXPECT_THROW(BestStumpError({}, 0, 1), InputError);
  EXPECT_THROW(BestStumpError(kS, 2, 1), InputError);
  EXPECT_THROW(BestStumpError(kS, 0, 0), ParameterError);
}

TEST(BestStumpErrorTest, MatchesBruteForce) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    auto s = RandomSample(rng, 1 + rep % 25, 2);
    // Repeated coordinates exercise the tie grouping.
    if (rep % 3 == 0 && s.size() > 2) s[1].point.x[0] = s[0].point.x[0];
    for (const auto& c : StumpCandidates(2)) {
      EXPECT_EQ(BestStumpError(s, c.axis, c.sign),
                BruteStumpError(s, c.axis, c.sign));
    }
  }
}

TEST(BestStumpErrorTest, ScaleInvariant) {
  std::mt19937_64 rng(12);
  const auto s = RandomSample(rng, 40, 3);
  auto scaled = s;
  for (auto& p : scaled) {
    for (auto& v : p.point.x) v *= 3.7;
  }
  for (const auto& c : StumpCandidates(3)) {
    EXPECT_EQ(BestStumpError(s, c.axis, c.sign),
              BestStumpError(scaled, c.axis, c.sign));
  }
}

TEST(BestStumpErrorTest, NeighborSensitivityAtMostOne) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0, 1);
  for (int rep = 0; rep < 300; ++rep) {
    auto s = RandomSample(rng, 30, 2);
    auto t = s;
    const std::size_t i = rng() % t.size();
    t[i] = L({u(rng), u(rng)}, static_cast<int>(rng() % 2));
    for (const auto& c : StumpCandidates(2)) {
      EXPECT_LE(std::abs(BestStumpError(s, c.axis, c.sign) -
                         BestStumpError(t, c.axis, c.sign)),
                1);
    }
  }
}

TEST(ExpMechTest, CandidateOrder) {
  const auto c = StumpCandidates(2);
  ASSERT_EQ(c.size(), 4u);
  EXPECT_EQ(c[0], (StumpDirection{0, 1}));
  EXPECT_EQ(c[1], (StumpDirection{0, -1}));
  EXPECT_EQ(c[3], (StumpDirection{1, -1}));
}

TEST(ExpMechTest, EqualScoresAreUniform) {
  const std::vector<std::int64_t> scores(6, 7);
  for (double p : ExpMechProbabilities(scores, 3.0)) {
    EXPECT_NEAR(p, 1.0 / 6, 1e-15);
  }
}

TEST(ExpMechTest, EnumeratedExample) {
  const std::vector<std::int64_t> scores = {0, 5, 5, 5};
  const auto p = ExpMechProbabilities(scores, 4.0);
  const double e = std::exp(-10.0);
  EXPECT_NEAR(p[0], 1.0 / (1.0 + 3 * e), 1e-15);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(p[i], e / (1.0 + 3 * e), 1e-18);
}

double EmpiricalTv(const std::vector<LabeledPoint>& s, double eps, int draws,
                   std::uint64_t seed, const std::vector<double>& target) {
  const auto cands = StumpCandidates(s.front().point.dim());
  std::vector<double> freq(cands.size(), 0);
  NoiseSource noise = NoiseSource::Seeded(seed);
  for (int i = 0; i < draws; ++i) {
    const auto pick = ExpMechSelect(s, eps, noise);
    for (std::size_t c = 0; c < cands.size(); ++c) {
      if (cands[c] == pick) freq[c] += 1.0 / draws;
    }
  }
  double tv = 0;
  for (std::size_t c = 0; c < cands.size(); ++c) {
    tv += std::abs(freq[c] - target[c]);
  }
  return tv / 2;
}

TEST(ExpMechTest, SamplingMatchesSoftmax) {
  // Scores on kS are {2, 0, 1, 1}: a nontrivial softmax at eps = 1.
  std::vector<std::int64_t> scores;
  for (const auto& c : StumpCandidates(2)) {
    scores.push_back(BruteStumpError(kS, c.axis, c.sign));
  }
  const auto p = ExpMechProbabilities(scores, 1.0);
  EXPECT_LT(EmpiricalTv(kS, 1.0, 100000, 21, p), 0.02);
}

TEST(ExpMechTest, SmallEpsilonIsNearlyUniform) {
  const std::vector<double> uniform(4, 0.25);
  EXPECT_LT(EmpiricalTv(kS, 1e-9, 100000, 22, uniform), 0.01);
}

TEST(ExpMechTest, ZeroNoisePicksFirstMinimizer) {
  NoiseSource zero = NoiseSource::Zero();
  EXPECT_EQ(ExpMechSelect(kS, 1.0, zero), (StumpDirection{0, -1}));
}

std::vector<LabeledPoint> Coords(std::vector<double> xs) {
  std::vector<LabeledPoint> s;
  for (double x : xs) s.push_back(L({x}, 0));
  return s;
}

std::vector<std::pair<double, int>> Flat(const std::vector<LabeledPoint>& d) {
  std::vector<std::pair<double, int>> out;
  for (const auto& p : d) out.emplace_back(p.point.x[0], p.label);
  return out;
}

TEST(RelabelProjectTest, Examples) {
  const auto s = Coords({3, 1, 2});
  using V = std::vector<std::pair<double, int>>;
  EXPECT_EQ(Flat(RelabelProject(s, 0, 1, 2)), (V{{1, 1}, {2, 1}, {3, 0}}));
  EXPECT_EQ(Flat(RelabelProject(s, 0, -1, 1)), (V{{3, 1}, {2, 0}, {1, 0}}));
  EXPECT_EQ(Flat(RelabelProject(s, 0, 1, 0)), (V{{1, 0}, {2, 0}, {3, 0}}));
}

TEST(RelabelProjectTest, ClampsAndReports) {
  const auto s = Coords({3, 1, 2});
  bool clamped = false;
  auto d = RelabelProject(s, 0, 1, 9, &clamped);
  EXPECT_TRUE(clamped);
  for (const auto& p : d) EXPECT_EQ(p.label, 1);
  d = RelabelProject(s, 0, 1, -4, &clamped);
  EXPECT_TRUE(clamped);
  for (const auto& p : d) EXPECT_EQ(p.label, 0);
  RelabelProject(s, 0, 1, 3, &clamped);
  EXPECT_FALSE(clamped);
}

TEST(RelabelProjectTest, TiesUseAuxCoordinate) {
  std::vector<LabeledPoint> s = {
      LabeledPoint{Point{{1.0, 5.0}, {0.9, 0.1}}, 0},
      LabeledPoint{Point{{1.0, 6.0}, {0.2, 0.1}}, 0}};
  const auto d = RelabelProject(s, 0, 1, 1);
  EXPECT_EQ(d[0].point.aux[0], 0.2);
  EXPECT_EQ(d[0].label, 1);
  EXPECT_EQ(d[1].point.aux[0], 0.9);
}

// Uniform cube, target "x_axis <= cut" (sign -1).
std::vector<LabeledPoint> Separable(std::size_t n, std::size_t d,
                                    std::size_t axis, double cut,
                                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<LabeledPoint> s;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> x(d);
    for (auto& v : x) v = u(rng);
    const int y = x[axis] <= cut ? 1 : 0;
    s.push_back(L(x, y));
  }
  return s;
}

PhaseSchedule InnerSchedule(std::int64_t m) {
  PhaseParams q;
  q.phase = 1;
  q.alpha = 0.05;
  q.beta = 0.05;
  q.delta = 1e-6;
  q.m = m;
  q.k = 2 * m;
  q.steps = 1e6;
  q.noise_bound = 0.5;
  return PhaseSchedule::Explicit({q});
}

TEST(StumpsOracleTest, EndToEndZeroNoise) {
  const GlobalParams g{3, 2000, 0.1, 0.2, 0.1, 1.0};
  const auto s = Separable(4000, 3, 1, 0.5, 31);

  // Plain non-private learner: the argmin over candidates.
  StumpDirection plain;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& c : StumpCandidates(3)) {
    const auto e = BruteStumpError(s, c.axis, c.sign);
    if (e < best) best = e, plain = c;
  }
  ASSERT_EQ(best, 0);
  ASSERT_EQ(plain, (StumpDirection{1, -1}));

  StumpsOptions options;
  options.inner_schedule = InnerSchedule(20);
  StumpsOracle oracle(s, g, NoiseSource::Zero(), NoiseSource::Zero(), 5,
                      options);
  EXPECT_EQ(oracle.selected(), plain);
  EXPECT_EQ(oracle.orientation(), 1);
  EXPECT_FALSE(oracle.positives_clamped());

  std::int64_t truth = 0;
  for (const auto& p : s) truth += p.label;
  EXPECT_EQ(oracle.noisy_positives(), truth);

  // Separable sample with exact count: relabeling reproduces every label.
  std::int64_t mislabels = 0;
  for (const auto& r : oracle.relabeled()) {
    mislabels += (r.point.x[0] <= 0.5 ? 1 : 0) != r.label;
  }
  EXPECT_EQ(mislabels, 0);

  // Predictions disagree with the target only on the peeled boundary
  // slices: 2 * 20 of 4000 points, about 1% of the mass.
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0, 1);
  int wrong = 0;
  const int queries = 20000;
  for (int i = 0; i < queries; ++i) {
    Point x{{u(rng), u(rng), u(rng)}, {}};
    const int y = x.x[1] <= 0.5 ? 1 : 0;
    const auto r = oracle.Step(x);
    ASSERT_TRUE(r.prediction.has_value());
    wrong += *r.prediction != y;
  }
  EXPECT_LT(static_cast<double>(wrong) / queries, 0.03);
}

TEST(StumpsOracleTest, PositiveSignOrientation) {
  const GlobalParams g{2, 2000, 0.1, 0.2, 0.1, 1.0};
  auto s = Separable(2000, 2, 0, 0.3, 33);
  for (auto& p : s) p.label = 1 - p.label;  // target is x_0 >= 0.3
  StumpsOptions options;
  options.inner_schedule = InnerSchedule(10);
  StumpsOracle oracle(s, g, NoiseSource::Zero(), NoiseSource::Zero(), 6,
                      options);
  EXPECT_EQ(oracle.selected(), (StumpDirection{0, 1}));
  EXPECT_EQ(oracle.orientation(), -1);
  EXPECT_EQ(oracle.PredictCenter(Point{{0.7, 0.1}, {}}), 1);
  EXPECT_EQ(oracle.PredictCenter(Point{{0.1, 0.9}, {}}), 0);
}

TEST(StumpsOracleTest, ForwardsOneCoordinate) {
  const GlobalParams g{3, 2000, 0.1, 0.2, 0.1, 1.0};
  StumpsOptions options;
  options.inner_schedule = InnerSchedule(10);
  StumpsOracle oracle(Separable(1000, 3, 2, 0.5, 34), g, NoiseSource::Zero(),
                      NoiseSource::Zero(), 7, options);
  const Point u = oracle.Forward(Point{{0.1, 0.2, 0.3}, {0.4, 0.5, 0.6}});
  ASSERT_EQ(u.dim(), 1u);
  EXPECT_EQ(u.x[0], oracle.orientation() * 0.3);
  EXPECT_EQ(oracle.inner().dim(), 1u);
  EXPECT_THROW(oracle.Forward(Point{{0.1}, {}}), InputError);
}

TEST(StumpsOracleTest, InnerParametersSplitBudget) {
  const GlobalParams g{2, 2000, 0.1, 0.2, 0.1, 0.5};
  StumpsOptions options;
  options.inner_schedule = InnerSchedule(10);
  StumpsOracle oracle(Separable(1000, 2, 0, 0.5, 35), g, NoiseSource::Zero(),
                      NoiseSource::Zero(), 8, options);
  const auto& q = oracle.inner_params();
  EXPECT_EQ(q.d, 1u);
  EXPECT_DOUBLE_EQ(q.epsilon, 500);
  EXPECT_DOUBLE_EQ(q.delta_star, 0.05);
  EXPECT_DOUBLE_EQ(q.alpha, 0.1);
  EXPECT_DOUBLE_EQ(q.beta, 0.05);
  EXPECT_DOUBLE_EQ(q.gamma, 0.5);
}

TEST(StumpsOracleTest, RejectsEmptySample) {
  const GlobalParams g{2, 1, 0.1, 0.2, 0.1, 1.0};
  EXPECT_THROW(StumpsOracle({}, g, NoiseSource::Zero(), NoiseSource::Zero(), 1),
               InputError);
}

}  // namespace
}  // namespace perp
