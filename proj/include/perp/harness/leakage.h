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

#ifndef PERP_HARNESS_LEAKAGE_H_
#define PERP_HARNESS_LEAKAGE_H_

#include <cstdint>
#include <optional>

namespace perp::harness {

struct LeakageResult {
  std::int64_t trials = 0;
  std::int64_t successes = 0;
  double rate = 0;
  // 1 - (1 - delta)^T
  double analytic = 0;
};

double LeakageAnalytic(double delta, std::int64_t horizon);

// Index of the first input the delta-leaking algorithm releases when it
// publishes each of `horizon` inputs independently with probability delta.
// Skips ahead geometrically instead of flipping every coin.
std::optional<std::int64_t> FirstLeaked(double delta, std::int64_t horizon,
                                        std::uint64_t seed);

// Challenge point i of a trial: uniform on [0, 1), derived by hashing so
// that points are never materialized.
double ChallengePoint(std::uint64_t trial_seed, std::int64_t index);

// Runs the attack: output the first released point, win if it equals a
// challenge point.
LeakageResult LeakageDemo(double delta, std::int64_t horizon,
                          std::int64_t trials, std::uint64_t seed);

}  // namespace perp::harness

#endif  // PERP_HARNESS_LEAKAGE_H_
