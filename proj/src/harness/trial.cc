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

#include "perp/harness/trial.h"

#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <thread>
#include <utility>

#include "perp/errors.h"
#include "perp/harness/stripe_oracle.h"
#include "perp/noise.h"

namespace perp::harness {
namespace {

NoiseSource MakeNoise(NoiseMode mode, std::uint64_t seed) {
  return mode == NoiseMode::kZero ? NoiseSource::Zero()
                                  : NoiseSource::Seeded(seed);
}

struct PhaseTally {
  std::int64_t one_sided_violations = 0;
  std::int64_t stripe_rounds = 0;
  std::int64_t stripe_violations = 0;
};

bool HandlesInStripes(const RectanglesOracle& oracle, StripeOracle& stripes) {
  const int phase = oracle.phase();
  for (std::size_t j = 0; j < oracle.dim(); ++j) {
    for (Side side : {Side::kLeft, Side::kRight}) {
      for (const Point& p : oracle.handle({j, side}).data()) {
        if (!stripes.InUnion(phase, j, side, p.x[j])) return false;
      }
    }
  }
  return true;
}

}  // namespace

double EstimateError(const Hypothesis& h, const Concept& c,
                     const Distribution& dist, std::int64_t n,
                     std::mt19937_64& rng) {
  if (n < 1) throw InputError("probe count must be >= 1");
  std::int64_t wrong = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const auto x = dist.Sample(rng);
    if (h(x) != Label(c, x)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(n);
}

std::uint64_t HorizonRounds(const ExperimentConfig& config,
                            const PhaseSchedule& schedule) {
  if (config.horizon_rounds) return *config.horizon_rounds;
  if (config.horizon_phases > schedule.max_phase()) {
    throw ConfigError("horizon.phases exceeds the phases the schedule serves");
  }
  return static_cast<std::uint64_t>(
      std::llround(schedule.PhaseEnd(config.horizon_phases)));
}

std::uint64_t TrialSeed(std::uint64_t experiment_seed, std::uint64_t trial) {
  return MixSeed(experiment_seed, 1000 + trial);
}

std::vector<LabeledPoint> DrawSample(const ExperimentConfig& config,
                                     std::int64_t n, std::uint64_t seed) {
  std::mt19937_64 rng(MixSeed(seed, 10));
  std::vector<LabeledPoint> sample;
  sample.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    auto x = config.distribution.Sample(rng);
    const int y = Label(config.target, x);
    sample.push_back(LabeledPoint{Point{std::move(x), {}}, y});
  }
  return sample;
}

TrialTrace RunTrial(const ExperimentConfig& config, std::uint64_t trial_id,
                    std::uint64_t seed, const TrialOptions& options) {
  config.Validate();
  const GlobalParams inner_g = ScheduleParams(config);
  PhaseSchedule schedule =
      options.schedule ? *options.schedule : ExperimentSchedule(config);
  const std::uint64_t horizon = HorizonRounds(config, schedule);
  const std::int64_t n = config.sample_size
                             ? *config.sample_size
                             : RequiredSampleSize(inner_g, schedule);

  TrialTrace trace;
  TrialSummary& s = trace.summary;
  s.trial = trial_id;
  s.seed = seed;
  s.oracle = ToString(config.oracle);
  s.sample_size = n;
  s.delta_star = inner_g.delta_star;

  std::mt19937_64 probe_rng(MixSeed(seed, 11));
  std::vector<LabeledPoint> sample = DrawSample(config, n, seed);

  std::optional<RectanglesOracle> rect;
  std::optional<StumpsOracle> stumps;
  if (config.oracle == OracleKind::kRectangles) {
    rect.emplace(std::move(sample), config.params, schedule,
                 MakeNoise(config.noise, MixSeed(seed, 13)), MixSeed(seed, 15));
  } else {
    StumpsOptions so;
    so.inner_schedule = schedule;
    so.inner_epsilon = inner_g.epsilon;
    stumps.emplace(
        std::move(sample), config.params,
        MakeNoise(options.selection_noise.value_or(config.noise),
                  MixSeed(seed, 14)),
        MakeNoise(config.noise, MixSeed(seed, 13)), MixSeed(seed, 15), so);
    s.selected = stumps->selected();
    s.noisy_positives = stumps->noisy_positives();
    const auto& t = std::get<StumpConcept>(config.target);
    s.selection_correct = stumps->selected() == StumpDirection{t.axis, t.sign};
  }
  const RectanglesOracle& core = rect ? *rect : stumps->inner();
  auto step = [&](const std::optional<Point>& q) {
    return rect ? rect->Step(q) : stumps->Step(q);
  };
  const Hypothesis h = [&](const std::vector<double>& x) {
    const Point p{x, {}};
    return rect ? rect->PredictCenter(p) : stumps->PredictCenter(p);
  };

  std::optional<StripeOracle> stripes;
  if (rect && config.distribution.kind() == Distribution::Kind::kUniformBox) {
    const auto& target = std::get<RectConcept>(config.target);
    const Box& box = config.distribution.box();
    bool inside = true;
    for (std::size_t j = 0; j < target.dim(); ++j) {
      inside = inside && target.lower[j] >= box.lower[j] &&
               target.upper[j] <= box.upper[j];
    }
    if (inside) stripes.emplace(config.distribution, target, config.params.alpha);
  }

  std::uint64_t version = core.hypothesis_version();
  auto probe = [&]() {
    const std::uint64_t before = core.StateDigest();
    const double e =
        EstimateError(h, config.target, config.distribution, config.probes,
                      probe_rng);
    if (core.StateDigest() != before) s.probe_isolation_ok = false;
    ++s.probe_events;
    return e;
  };
  double error = probe();
  s.initial_error = error;
  s.max_error = error;
  std::optional<bool> stripes_ok;
  if (stripes) stripes_ok = HandlesInStripes(core, *stripes);

  QueryStream stream(config.adversary, config.distribution, config.target,
                     MixSeed(seed, 12));
  std::map<int, PhaseTally> tally;
  if (options.keep_rounds) trace.rounds.reserve(horizon);
  for (std::uint64_t r = 1; r <= horizon; ++r) {
    const auto q = stream.Next();
    std::optional<Point> query;
    if (q.x) query = Point{*q.x, {}};
    TraceRound tr;
    tr.record = step(query);
    tr.in_distribution = q.in_distribution;
    if (q.x) tr.truth = Label(config.target, *q.x);
    PhaseTally& pt = tally[tr.record.phase];
    if (tr.record.appended && tr.record.prediction == 1 && tr.truth == 0) {
      tr.one_sided_ok = false;
      ++s.one_sided_violations;
      ++pt.one_sided_violations;
    }
    if (core.hypothesis_version() != version) {
      version = core.hypothesis_version();
      error = probe();
      tr.reprobed = true;
      if (stripes) stripes_ok = HandlesInStripes(core, *stripes);
    }
    tr.error = error;
    s.max_error = std::max(s.max_error, error);
    if (stripes_ok) {
      tr.stripes_ok = stripes_ok;
      // Attribute to the phase the hypothesis now belongs to.
      PhaseTally& now = tally[core.phase()];
      ++now.stripe_rounds;
      if (!*stripes_ok) ++now.stripe_violations;
    }
    if (options.keep_rounds) trace.rounds.push_back(std::move(tr));
  }

  s.rounds = horizon;
  s.final_phase = core.phase();
  s.final_error = error;
  s.halts = core.halts();
  s.reexecutions = core.reexecutions();
  s.underfills = core.underfills();
  s.budget_sum = schedule.BudgetSum(s.final_phase);
  s.budget_ok = s.budget_sum <= s.delta_star;
  s.in_distribution_rounds = stream.in_distribution_rounds();
  s.gamma_mixing_ok = GammaMixingOk(stream.in_distribution_rounds(),
                                    stream.rounds(), config.params.gamma);

  // E(q) for every q <= p, evaluated on the completed record.
  std::map<int, bool> bounded_through;
  bool all = true;
  for (const auto& pn : core.noise_record()) {
    all = all && pn.bounded();
    bounded_through[pn.phase] = all;
  }
  s.noise_bounded = all;
  for (const auto& [phase, pt] : tally) {
    const auto it = bounded_through.find(phase);
    if (it == bounded_through.end() || !it->second) continue;
    s.one_sided_violations_bounded += pt.one_sided_violations;
    s.stripe_rounds_bounded += pt.stripe_rounds;
    s.stripe_violations_bounded += pt.stripe_violations;
  }
  return trace;
}

std::vector<TrialTrace> RunTrials(const ExperimentConfig& config,
                                  std::uint64_t experiment_seed, int parallel,
                                  const TrialOptions& options) {
  const auto count = static_cast<std::size_t>(config.trials);
  std::vector<std::optional<TrialTrace>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = RunTrial(config, i, TrialSeed(experiment_seed, i), options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min<int>(parallel, config.trials));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<TrialTrace> out;
  out.reserve(count);
  for (auto& r : results) out.push_back(std::move(*r));
  return out;
}

}  // namespace perp::harness
