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

#include "perp/rsc.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "perp/errors.h"
#include "perp/noise.h"

namespace perp {
namespace {

const PrivacyParams kSlice{1.0, 0.01};

OrderKey<int> Descending() {
  return [](const int& v) -> std::optional<double> { return v; };
}

std::vector<int> Sorted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

TEST(RscTest, ZeroNoiseTakesLargest) {
  NoiseSource zero = NoiseSource::Zero();
  RscSession<int> rsc({1, 3, 5, 8}, 2, kSlice);
  SliceInfo info;
  EXPECT_EQ(rsc.Take(2, Descending(), zero, &info), (std::vector<int>{8, 5}));
  EXPECT_EQ(Sorted(rsc.pool()), (std::vector<int>{1, 3}));
  EXPECT_EQ(info.noisy_size, 2);
  EXPECT_FALSE(info.underfilled);
  EXPECT_EQ(rsc.slices_taken(), 1);
}

TEST(RscTest, ScriptedGeometricAddsOne) {
  NoiseSource script = NoiseSource::Scripted({1});
  RscSession<int> rsc({1, 3, 5, 8}, 1, kSlice);
  EXPECT_EQ(rsc.Take(2, Descending(), script), (std::vector<int>{8, 5, 3}));
  EXPECT_EQ(rsc.pool(), (std::vector<int>{1}));
}

TEST(RscTest, OversizedRequestUnderfills) {
  NoiseSource script = NoiseSource::Scripted({6});
  RscSession<int> rsc({1, 3, 5, 8}, 1, kSlice);
  SliceInfo info;
  EXPECT_EQ(rsc.Take(4, Descending(), script, &info),
            (std::vector<int>{8, 5, 3, 1}));
  EXPECT_TRUE(rsc.pool().empty());
  EXPECT_EQ(info.noisy_size, 10);
  EXPECT_EQ(info.taken, 4);
  EXPECT_TRUE(info.underfilled);
  EXPECT_EQ(rsc.underfill_events(), 1);
}

TEST(RscTest, BudgetExhausted) {
  NoiseSource zero = NoiseSource::Zero();
  RscSession<int> rsc({1, 2, 3}, 1, kSlice);
  rsc.Take(1, Descending(), zero);
  EXPECT_THROW(rsc.Take(1, Descending(), zero), StateError);
}

TEST(RscTest, IneligibleRecordsStayInPool) {
  NoiseSource zero = NoiseSource::Zero();
  RscSession<int> rsc({1, 2, 3, 4, 5, 6}, 1, kSlice);
  OrderKey<int> even = [](const int& v) -> std::optional<double> {
    if (v % 2) return std::nullopt;
    return v;
  };
  SliceInfo info;
  EXPECT_EQ(rsc.Take(5, even, zero, &info), (std::vector<int>{6, 4, 2}));
  EXPECT_TRUE(info.underfilled);
  EXPECT_EQ(Sorted(rsc.pool()), (std::vector<int>{1, 3, 5}));
}

TEST(RscTest, TiesBrokenByRecordThenInsertion) {
  struct Rec {
    int key;
    int id;
    bool operator<(const Rec& o) const { return id < o.id; }
  };
  NoiseSource zero = NoiseSource::Zero();
  RscSession<Rec> rsc({{1, 1}, {1, 3}, {1, 2}}, 1, kSlice);
  OrderKey<Rec> k = [](const Rec& r) -> std::optional<double> { return r.key; };
  const auto slice = rsc.Take(2, k, zero);
  ASSERT_EQ(slice.size(), 2u);
  EXPECT_EQ(slice[0].id, 3);
  EXPECT_EQ(slice[1].id, 2);
}

TEST(RscTest, DisjointAndMonotoneUnderRandomRequests) {
  std::mt19937_64 rng(99);
  NoiseSource noise = NoiseSource::Seeded(5);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<int> data(60);
    for (auto& v : data) v = static_cast<int>(rng() % 40);
    const int tau = 5;
    RscSession<int> rsc(data, tau, kSlice);
    std::vector<int> all;
    for (int s = 0; s < tau; ++s) {
      const bool desc = rng() % 2;
      OrderKey<int> key = [desc](const int& v) -> std::optional<double> {
        return desc ? v : -v;
      };
      const auto slice = rsc.Take(static_cast<std::int64_t>(rng() % 10), key,
                                  noise);
      for (int v : slice) {
        for (int rest : rsc.pool()) {
          ASSERT_GE(*key(v), *key(rest));
        }
      }
      all.insert(all.end(), slice.begin(), slice.end());
    }
    all.insert(all.end(), rsc.pool().begin(), rsc.pool().end());
    EXPECT_EQ(Sorted(all), Sorted(data));
  }
}

TEST(RscTest, ZeroNoiseSliceSizeIsClampedRequest) {
  NoiseSource zero = NoiseSource::Zero();
  for (int m = 0; m < 8; ++m) {
    RscSession<int> rsc({1, 2, 3, 4, 5}, 1, kSlice);
    EXPECT_EQ(static_cast<int>(rsc.Take(m, Descending(), zero).size()),
              std::min(m, 5));
  }
}

TEST(RscTest, SliceInstantiatesMechanism) {
  NoiseSource zero = NoiseSource::Zero();
  RscSession<int> rsc({4, 9, 2}, 1, kSlice);
  auto [sum, info] = rsc.Slice(
      2, Descending(),
      [](std::vector<int> s) { return s[0] + s[1]; }, zero);
  EXPECT_EQ(sum, 13);
  EXPECT_EQ(info.taken, 2);
}

TEST(RscTest, GeometricParameterFromEpsilon) {
  // Mean of Geom(1 - e^{-eps}) from 0 is e^{-eps} / (1 - e^{-eps}).
  NoiseSource noise = NoiseSource::Seeded(8);
  const double eps = 0.5;
  double sum = 0;
  constexpr int kReps = 20000;
  for (int i = 0; i < kReps; ++i) {
    RscSession<int> rsc({1}, 1, PrivacyParams{eps, 0.01});
    SliceInfo info;
    rsc.Take(0, Descending(), noise, &info);
    sum += static_cast<double>(info.geometric);
  }
  const double mean = std::exp(-eps) / (1 - std::exp(-eps));
  EXPECT_NEAR(sum / kReps, mean, 0.05);
}

TEST(RscPrivacyCostTest, Examples) {
  const auto one = RscPrivacyCost(1, 0.5, 0.01, 0.001);
  EXPECT_NEAR(one.epsilon, 0.5 * std::log(1000.0), 1e-12);
  EXPECT_NEAR(one.delta, 0.001 + 0.02, 1e-15);
  const double e_inv = std::exp(-1.0);
  const auto no_delta = RscPrivacyCost(7, 0.3, 0.0, e_inv);
  EXPECT_NEAR(no_delta.epsilon, 0.3, 1e-12);
  EXPECT_NEAR(no_delta.delta, e_inv, 1e-15);
  const auto t2 = RscPrivacyCost(2, 1, 0.01, 0.1);
  const auto t4 = RscPrivacyCost(4, 1, 0.01, 0.1);
  EXPECT_NEAR(t4.delta - 0.1, 2 * (t2.delta - 0.1), 1e-15);
  EXPECT_NEAR(RscPrivacyCost(1, 1, 0.01, 0.1, 3.0).epsilon,
              3.0 * std::log(10.0), 1e-12);
}

}  // namespace
}  // namespace perp
