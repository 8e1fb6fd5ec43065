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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>

#include "perp/errors.h"

namespace perp {

std::int64_t BestStumpError(std::span<const LabeledPoint> sample,
                            std::size_t axis, int sign) {
  if (sample.empty()) throw InputError("best stump error of an empty sample");
  if (sign != 1 && sign != -1) throw ParameterError("sign must be +1 or -1");
  // With y = sign * x the rule is "1 iff y >= sign * t".
  std::vector<std::pair<double, int>> ys;
  ys.reserve(sample.size());
  std::int64_t zeros = 0;
  for (const auto& s : sample) {
    if (axis >= s.point.dim()) throw InputError("axis out of range");
    ys.emplace_back(sign * s.point.x[axis], s.label);
    zeros += s.label == 0 ? 1 : 0;
  }
  std::sort(ys.begin(), ys.end());
  // Threshold below everything: all predicted 1.
  std::int64_t errors = zeros;
  std::int64_t best = errors;
  for (std::size_t i = 0; i < ys.size();) {
    std::size_t end = i;
    while (end < ys.size() && ys[end].first == ys[i].first) {
      errors += ys[end].second == 1 ? 1 : -1;
      ++end;
    }
    best = std::min(best, errors);
    i = end;
  }
  return best;
}

std::vector<StumpDirection> StumpCandidates(std::size_t d) {
  std::vector<StumpDirection> out;
  out.reserve(2 * d);
  for (std::size_t j = 0; j < d; ++j) {
    out.push_back({j, 1});
    out.push_back({j, -1});
  }
  return out;
}

std::vector<double> ExpMechProbabilities(std::span<const std::int64_t> scores,
                                         double epsilon) {
  if (!(epsilon > 0)) throw ParameterError("epsilon must be positive");
  if (scores.empty()) throw ParameterError("no candidates");
  const std::int64_t best = *std::min_element(scores.begin(), scores.end());
  std::vector<double> w(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    w[i] = std::exp(-epsilon * static_cast<double>(scores[i] - best) / 2.0);
  }
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= total;
  return w;
}

StumpDirection ExpMechSelect(std::span<const LabeledPoint> sample,
                             double epsilon, NoiseSource& noise) {
  if (sample.empty()) throw InputError("exponential mechanism on empty sample");
  const auto candidates = StumpCandidates(sample.front().point.dim());
  std::vector<std::int64_t> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) {
    scores.push_back(BestStumpError(sample, c.axis, c.sign));
  }
  if (noise.mode() == NoiseMode::kZero) {
    return candidates[std::min_element(scores.begin(), scores.end()) -
                      scores.begin()];
  }
  const auto probs = ExpMechProbabilities(scores, epsilon);
  const double u = noise.Uniform();
  double acc = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return candidates[i];
  }
  return candidates.back();
}

std::vector<LabeledPoint> RelabelProject(std::span<const LabeledPoint> sample,
                                         std::size_t axis, int order,
                                         std::int64_t positives,
                                         bool* clamped) {
  if (order != 1 && order != -1) throw ParameterError("order must be +1 or -1");
  const auto n = static_cast<std::int64_t>(sample.size());
  const std::int64_t cut = std::clamp<std::int64_t>(positives, 0, n);
  if (clamped != nullptr) *clamped = cut != positives;

  std::vector<LabeledPoint> out;
  out.reserve(sample.size());
  for (const auto& s : sample) {
    if (axis >= s.point.dim()) throw InputError("axis out of range");
    Point p;
    p.x = {s.point.x[axis]};
    if (s.point.aux.size() > axis) p.aux = {s.point.aux[axis]};
    out.push_back(LabeledPoint{std::move(p), 0});
  }
  std::stable_sort(out.begin(), out.end(),
                   [order](const LabeledPoint& a, const LabeledPoint& b) {
                     return order == 1 ? AxisAbove(b.point, a.point, 0)
                                       : AxisAbove(a.point, b.point, 0);
                   });
  for (std::int64_t i = 0; i < cut; ++i) out[i].label = 1;
  return out;
}

StumpsOracle::StumpsOracle(std::vector<LabeledPoint> sample,
                           const GlobalParams& g, NoiseSource selection_noise,
                           NoiseSource inner_noise, std::uint64_t aux_seed,
                           StumpsOptions options)
    : params_(g) {
  params_.Validate();
  ValidateSample(sample, params_.d);
  if (sample.empty()) throw InputError("stump oracle needs a nonempty sample");

  std::mt19937_64 aux_rng(aux_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& s : sample) {
    if (!s.point.aux.empty()) continue;
    s.point.aux.resize(s.point.dim());
    for (auto& z : s.point.aux) z = unit(aux_rng);
  }

  selected_ = ExpMechSelect(sample, params_.epsilon / 4, selection_noise);

  std::int64_t positives = 0;
  for (const auto& s : sample) positives += s.label;
  const double noisy = static_cast<double>(positives) +
                       selection_noise.Laplace(4.0 / params_.epsilon);
  noisy_positives_ = static_cast<std::int64_t>(std::llround(noisy));

  // Positives of the selected stump are the large coordinates when
  // sign = +1, so they come first in descending order.
  orientation_ = -selected_.sign;
  relabeled_ = RelabelProject(sample, selected_.axis, orientation_,
                              noisy_positives_, &clamped_);

  inner_params_ = GlobalParams{1,
                               options.inner_epsilon.value_or(
                                   params_.epsilon / 4),
                               params_.delta_star / 2,
                               params_.alpha / 2,
                               params_.beta / 2,
                               params_.gamma};
  std::vector<LabeledPoint> inner_sample;
  inner_sample.reserve(relabeled_.size());
  for (const auto& r : relabeled_) {
    Point u;
    u.x = {orientation_ * r.point.x[0]};
    if (!r.point.aux.empty()) {
      u.aux = {orientation_ == 1 ? r.point.aux[0] : 1.0 - r.point.aux[0]};
    }
    inner_sample.push_back(LabeledPoint{std::move(u), r.label});
  }
  PhaseSchedule schedule = options.inner_schedule
                               ? std::move(*options.inner_schedule)
                               : PhaseSchedule::Resolve(inner_params_);
  inner_.emplace(std::move(inner_sample), inner_params_, std::move(schedule),
                 std::move(inner_noise), MixSeed(aux_seed, 1));
}

Point StumpsOracle::Forward(const Point& x) const {
  if (x.dim() != params_.d) {
    throw InputError("query dimension does not match d");
  }
  Point u;
  u.x = {orientation_ * x.x[selected_.axis]};
  if (x.aux.size() > selected_.axis) {
    const double z = x.aux[selected_.axis];
    u.aux = {orientation_ == 1 ? z : 1.0 - z};
  }
  return u;
}

RoundRecord StumpsOracle::Step(const std::optional<Point>& query) {
  if (!query) return inner_->Step(std::nullopt);
  return inner_->Step(Forward(*query));
}

int StumpsOracle::PredictCenter(const Point& x) const {
  return inner_->PredictCenter(Forward(x));
}

}  // namespace perp
