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

#ifndef PERP_HARNESS_EPSILON_AUDIT_H_
#define PERP_HARNESS_EPSILON_AUDIT_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "perp/noise.h"

namespace perp::harness {

// A set of integer mechanism outcomes.
struct AuditEvent {
  std::string name;
  std::function<bool(std::int64_t)> contains;
};

struct EventEstimate {
  std::string name;
  // true: ln(Pr_D / Pr_D'); false: the reverse ratio.
  bool forward = true;
  std::int64_t count_a = 0;
  std::int64_t count_b = 0;
  double point = 0;
  double lower = 0;
  double upper = 0;
};

struct EpsilonEstimate {
  std::int64_t trials = 0;
  // Point estimate, lower and upper confidence bounds of the event with
  // the largest lower bound, each clipped at 0.
  double epsilon = 0;
  double lower = 0;
  double upper = 0;
  std::string event;
  std::vector<EventEstimate> events;
  std::vector<std::string> notes;
};

using Histogram = std::map<std::int64_t, std::int64_t>;

// Clopper-Pearson interval for a binomial proportion.
std::pair<double, double> ClopperPearson(std::int64_t successes,
                                         std::int64_t trials,
                                         double confidence);

EpsilonEstimate EstimateFromCounts(const Histogram& a, const Histogram& b,
                                   std::int64_t trials,
                                   const std::vector<AuditEvent>& events,
                                   double confidence = 0.95);

// Runs `mechanism` `trials` times on each input with independent seeded
// noise and compares event frequencies.
template <typename Input, typename Mechanism>
EpsilonEstimate EstimateEpsilon(Mechanism&& mechanism, const Input& d,
                                const Input& d_prime,
                                const std::vector<AuditEvent>& events,
                                std::int64_t trials, std::uint64_t seed,
                                double confidence = 0.95) {
  Histogram a, b;
  NoiseSource na = NoiseSource::Seeded(MixSeed(seed, 0));
  NoiseSource nb = NoiseSource::Seeded(MixSeed(seed, 1));
  for (std::int64_t i = 0; i < trials; ++i) {
    ++a[mechanism(d, na)];
    ++b[mechanism(d_prime, nb)];
  }
  return EstimateFromCounts(a, b, trials, events, confidence);
}

// Singleton events {v} and their complements for v in `outcomes`.
std::vector<AuditEvent> OutcomeEvents(
    const std::vector<std::pair<std::int64_t, std::string>>& outcomes);

// Keeps the bit with probability e^eps / (1 + e^eps).
int RandomizedResponse(int bit, double epsilon, NoiseSource& noise);

struct AuditReport {
  std::string mechanism;
  double configured_epsilon = 0;  // whole-mechanism budget
  double per_query_bound = 0;     // privacy loss of the audited event
  EpsilonEstimate estimate;
};

// Randomized response on input bits 1 vs 0 (or 1 vs 1).
AuditReport AuditRandomizedResponse(double epsilon, std::int64_t trials,
                                    std::uint64_t seed, bool same_input);

// Stopper on {0} vs {1}; outcome is whether the first query halts.
AuditReport AuditStopper(PrivacyParams privacy, std::int64_t threshold,
                         std::int64_t trials, std::uint64_t seed,
                         bool same_input);

// BetweenThresholds on {0} vs {1} with one counting query.
AuditReport AuditBetweenThresholds(PrivacyParams privacy, std::int64_t budget,
                                   double t_low, double t_high,
                                   std::int64_t trials, std::uint64_t seed,
                                   bool same_input);

}  // namespace perp::harness

#endif  // PERP_HARNESS_EPSILON_AUDIT_H_
