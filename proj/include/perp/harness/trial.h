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

#ifndef PERP_HARNESS_TRIAL_H_
#define PERP_HARNESS_TRIAL_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "perp/config.h"
#include "perp/harness/adversary.h"
#include "perp/harness/distribution.h"
#include "perp/rectangles_oracle.h"
#include "perp/stumps_oracle.h"

namespace perp::harness {

// How the current hypothesis is probed. Recorded in every trace header.
inline constexpr const char* kProbeMode = "noise-free-center";

using Hypothesis = std::function<int(const std::vector<double>&)>;

// Monte Carlo estimate of Pr_{x~D}[h(x) != c(x)] with n fresh draws.
double EstimateError(const Hypothesis& h, const Concept& c,
                     const Distribution& dist, std::int64_t n,
                     std::mt19937_64& rng);

struct TraceRound {
  RoundRecord record;
  bool in_distribution = false;
  std::optional<int> truth;
  // Estimated error of the hypothesis left behind by this round.
  double error = 0;
  bool reprobed = false;
  // Appended positives all lie inside the target (rectangles only).
  bool one_sided_ok = true;
  // Handle datasets inside the stripe union (rectangles on a uniform box).
  std::optional<bool> stripes_ok;
};

struct TrialSummary {
  std::uint64_t trial = 0;
  std::uint64_t seed = 0;
  std::string oracle;
  std::uint64_t rounds = 0;
  int final_phase = 1;
  std::int64_t sample_size = 0;
  double initial_error = 0;
  double max_error = 0;
  double final_error = 0;
  std::int64_t halts = 0;
  std::int64_t reexecutions = 0;
  std::int64_t underfills = 0;
  double budget_sum = 0;
  double delta_star = 0;
  bool budget_ok = true;
  // E(p) held for every phase the trial touched.
  bool noise_bounded = true;
  std::int64_t one_sided_violations = 0;
  std::int64_t one_sided_violations_bounded = 0;
  std::int64_t stripe_rounds_bounded = 0;
  std::int64_t stripe_violations_bounded = 0;
  std::int64_t in_distribution_rounds = 0;
  bool gamma_mixing_ok = true;
  bool probe_isolation_ok = true;
  std::int64_t probe_events = 0;
  // Stumps only.
  std::optional<StumpDirection> selected;
  std::optional<std::int64_t> noisy_positives;
  bool selection_correct = false;
};

struct TrialTrace {
  TrialSummary summary;
  std::vector<TraceRound> rounds;
};

struct TrialOptions {
  bool keep_rounds = true;
  // Overrides the schedule the (inner) rectangle oracle runs on.
  std::optional<PhaseSchedule> schedule;
  // Stumps: noise mode for the selection step; config noise otherwise.
  std::optional<NoiseMode> selection_noise;
};

// Rounds a config asks for: the explicit count, or the end of the last
// configured phase.
std::uint64_t HorizonRounds(const ExperimentConfig& config,
                            const PhaseSchedule& schedule);

// The labeled training sample RunTrial draws for a trial with this seed.
std::vector<LabeledPoint> DrawSample(const ExperimentConfig& config,
                                     std::int64_t n, std::uint64_t seed);

TrialTrace RunTrial(const ExperimentConfig& config, std::uint64_t trial_id,
                    std::uint64_t seed, const TrialOptions& options = {});

// Per-trial seed derived from the experiment seed.
std::uint64_t TrialSeed(std::uint64_t experiment_seed, std::uint64_t trial);

// Runs config.trials trials on `parallel` threads. Results are ordered by
// trial id regardless of completion order.
std::vector<TrialTrace> RunTrials(const ExperimentConfig& config,
                                  std::uint64_t experiment_seed, int parallel,
                                  const TrialOptions& options = {});

}  // namespace perp::harness

#endif  // PERP_HARNESS_TRIAL_H_
