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

#include "perp/harness/leakage.h"

#include <cmath>
#include <random>

#include "perp/errors.h"
#include "perp/noise.h"

namespace perp::harness {

double LeakageAnalytic(double delta, std::int64_t horizon) {
  return -std::expm1(static_cast<double>(horizon) * std::log1p(-delta));
}

std::optional<std::int64_t> FirstLeaked(double delta, std::int64_t horizon,
                                        std::uint64_t seed) {
  if (horizon <= 0) return std::nullopt;
  std::mt19937_64 rng(seed);
  // Number of withheld inputs before the first release.
  const std::int64_t skip =
      std::geometric_distribution<std::int64_t>(delta)(rng);
  if (skip >= horizon) return std::nullopt;
  return skip;
}

double ChallengePoint(std::uint64_t trial_seed, std::int64_t index) {
  const std::uint64_t bits =
      MixSeed(trial_seed, static_cast<std::uint64_t>(index));
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

LeakageResult LeakageDemo(double delta, std::int64_t horizon,
                          std::int64_t trials, std::uint64_t seed) {
  if (!(delta > 0 && delta < 1)) throw ParameterError("delta must be in (0,1)");
  if (horizon < 0) throw ParameterError("horizon must be >= 0");
  if (trials < 1) throw ParameterError("trials must be >= 1");
  LeakageResult out;
  out.trials = trials;
  out.analytic = LeakageAnalytic(delta, horizon);
  for (std::int64_t t = 0; t < trials; ++t) {
    const std::uint64_t trial_seed = MixSeed(seed, static_cast<std::uint64_t>(t));
    const auto leaked = FirstLeaked(delta, horizon, MixSeed(trial_seed, ~0ULL));
    if (!leaked) continue;
    // The attacker outputs the released value and wins if it is identical
    // to some challenge point. The scan stops at the first match.
    const double guess = ChallengePoint(trial_seed, *leaked);
    for (std::int64_t i = 0; i < horizon; ++i) {
      if (ChallengePoint(trial_seed, i) == guess) {
        ++out.successes;
        break;
      }
    }
  }
  out.rate = static_cast<double>(out.successes) / static_cast<double>(trials);
  return out;
}

}  // namespace perp::harness
