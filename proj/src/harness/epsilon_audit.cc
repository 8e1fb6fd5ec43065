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

#include "perp/harness/epsilon_audit.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/binomial.hpp>

#include "perp/errors.h"
#include "perp/svt.h"

namespace perp::harness {
namespace {

using boost::math::binomial_distribution;

std::int64_t CountIn(const Histogram& h, const AuditEvent& e) {
  std::int64_t n = 0;
  for (const auto& [v, c] : h) {
    if (e.contains(v)) n += c;
  }
  return n;
}

double Clip(double v) { return std::max(0.0, v); }

}  // namespace

std::pair<double, double> ClopperPearson(std::int64_t successes,
                                         std::int64_t trials,
                                         double confidence) {
  if (trials < 1 || successes < 0 || successes > trials) {
    throw InputError("Clopper-Pearson needs 0 <= successes <= trials");
  }
  const double tail = (1 - confidence) / 2;
  const auto n = static_cast<double>(trials);
  const auto k = static_cast<double>(successes);
  const double lo =
      binomial_distribution<>::find_lower_bound_on_p(n, k, tail);
  const double hi =
      binomial_distribution<>::find_upper_bound_on_p(n, k, tail);
  return {lo, hi};
}

EpsilonEstimate EstimateFromCounts(const Histogram& a, const Histogram& b,
                                   std::int64_t trials,
                                   const std::vector<AuditEvent>& events,
                                   double confidence) {
  if (trials < 1) throw InputError("trials must be >= 1");
  EpsilonEstimate out;
  out.trials = trials;
  const auto n = static_cast<double>(trials);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& e : events) {
    const std::int64_t ca = CountIn(a, e);
    const std::int64_t cb = CountIn(b, e);
    if (ca == 0 || cb == 0) {
      out.notes.push_back("event " + e.name +
                          " excluded: zero count on one input");
      continue;
    }
    const auto [a_lo, a_hi] = ClopperPearson(ca, trials, confidence);
    const auto [b_lo, b_hi] = ClopperPearson(cb, trials, confidence);
    const double pa = static_cast<double>(ca) / n;
    const double pb = static_cast<double>(cb) / n;
    const EventEstimate fwd{e.name, true, ca, cb, std::log(pa / pb),
                            std::log(a_lo / b_hi), std::log(a_hi / b_lo)};
    const EventEstimate rev{e.name, false, ca, cb, std::log(pb / pa),
                            std::log(b_lo / a_hi), std::log(b_hi / a_lo)};
    for (const auto& est : {fwd, rev}) {
      out.events.push_back(est);
      if (est.lower > best) {
        best = est.lower;
        out.event = (est.forward ? "" : "reverse:") + est.name;
        out.epsilon = Clip(est.point);
        out.lower = Clip(est.lower);
        out.upper = Clip(est.upper);
      }
    }
  }
  if (out.events.empty()) out.notes.push_back("no usable events");
  return out;
}

std::vector<AuditEvent> OutcomeEvents(
    const std::vector<std::pair<std::int64_t, std::string>>& outcomes) {
  std::vector<AuditEvent> out;
  for (const auto& [v, name] : outcomes) {
    const std::int64_t value = v;
    out.push_back({"{" + name + "}",
                   [value](std::int64_t o) { return o == value; }});
  }
  if (outcomes.size() > 2) {
    for (const auto& [v, name] : outcomes) {
      const std::int64_t value = v;
      out.push_back({"not {" + name + "}",
                     [value](std::int64_t o) { return o != value; }});
    }
  }
  return out;
}

int RandomizedResponse(int bit, double epsilon, NoiseSource& noise) {
  const double keep = 1.0 / (1.0 + std::exp(-epsilon));
  return noise.Uniform() < keep ? bit : 1 - bit;
}

AuditReport AuditRandomizedResponse(double epsilon, std::int64_t trials,
                                    std::uint64_t seed, bool same_input) {
  if (!(epsilon > 0)) throw ParameterError("epsilon must be positive");
  AuditReport r;
  r.mechanism = "randomized-response-calibration";
  r.configured_epsilon = epsilon;
  r.per_query_bound = epsilon;
  const int d = 1;
  const int d_prime = same_input ? 1 : 0;
  r.estimate = EstimateEpsilon(
      [epsilon](int bit, NoiseSource& noise) -> std::int64_t {
        return RandomizedResponse(bit, epsilon, noise);
      },
      d, d_prime, OutcomeEvents({{0, "0"}, {1, "1"}}), trials, seed);
  return r;
}

AuditReport AuditStopper(PrivacyParams privacy, std::int64_t threshold,
                         std::int64_t trials, std::uint64_t seed,
                         bool same_input) {
  AuditReport r;
  r.mechanism = "stopper";
  r.configured_epsilon = privacy.epsilon;
  {
    const Stopper probe(privacy, threshold);
    r.per_query_bound = 1.0 / probe.noise_scale();
  }
  const int d = 0;
  const int d_prime = same_input ? 0 : 1;
  r.estimate = EstimateEpsilon(
      [&](int bit, NoiseSource& noise) -> std::int64_t {
        Stopper s(privacy, threshold);
        s.Update(bit);
        return s.Query(noise) == StopAnswer::kHalt ? 1 : 0;
      },
      d, d_prime, OutcomeEvents({{1, "halt"}, {0, "continue"}}), trials, seed);
  return r;
}

AuditReport AuditBetweenThresholds(PrivacyParams privacy, std::int64_t budget,
                                   double t_low, double t_high,
                                   std::int64_t trials, std::uint64_t seed,
                                   bool same_input) {
  AuditReport r;
  r.mechanism = "between-thresholds";
  r.configured_epsilon = privacy.epsilon;
  const BtConfig config{privacy, budget, t_low, t_high, false};
  r.per_query_bound = 1.0 / BtNoiseScale(privacy, static_cast<double>(budget));
  const int d = 0;
  const int d_prime = same_input ? 0 : 1;
  r.estimate = EstimateEpsilon(
      [&](int bit, NoiseSource& noise) -> std::int64_t {
        BetweenThresholds<int> bt({bit}, config);
        const BtAnswer a = bt.Ask(
            [](std::span<const int> data) {
              double s = 0;
              for (int v : data) s += v;
              return s;
            },
            noise);
        return static_cast<std::int64_t>(a);
      },
      d, d_prime,
      OutcomeEvents({{static_cast<std::int64_t>(BtAnswer::kLow), "low"},
                     {static_cast<std::int64_t>(BtAnswer::kMedium), "medium"},
                     {static_cast<std::int64_t>(BtAnswer::kHigh), "high"}}),
      trials, seed);
  return r;
}

}  // namespace perp::harness
