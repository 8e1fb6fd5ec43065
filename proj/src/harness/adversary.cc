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

#include "perp/harness/adversary.h"

#include <cmath>
#include <string>
#include <utility>

#include "perp/errors.h"
#include "perp/noise.h"

namespace perp::harness {

int Label(const Concept& c, const std::vector<double>& x) {
  return std::visit([&](const auto& t) { return t.Label(x); }, c);
}

const char* ToString(Strategy s) {
  switch (s) {
    case Strategy::kFixedPoint:
      return "fixed-point";
    case Strategy::kBoundaryProbe:
      return "boundary-probe";
    case Strategy::kReplay:
      return "replay-past-queries";
    case Strategy::kScripted:
      return "scripted";
  }
  return "?";
}

void AdversaryModel::Validate(std::size_t d) const {
  if (!(gamma > 0 && gamma <= 1)) {
    throw ConfigError("adversary.gamma: γ must be in (0,1]");
  }
  if (!fixed_point.empty() && fixed_point.size() != d) {
    throw ConfigError("adversary.point: dimension mismatch");
  }
  if (!(band >= 0)) throw ConfigError("adversary.band must be >= 0");
  if (strategy == Strategy::kScripted) {
    if (script.empty()) throw ConfigError("adversary.script must be nonempty");
    for (const auto& s : script) {
      if (s && s->size() != d) {
        throw ConfigError("adversary.script: dimension mismatch");
      }
    }
  }
}

QueryStream::QueryStream(AdversaryModel model, const Distribution& dist,
                         Concept target, std::uint64_t seed)
    : model_(std::move(model)),
      dist_(&dist),
      concept_(std::move(target)),
      mix_rng_(MixSeed(seed, 0)),
      draw_rng_(MixSeed(seed, 1)),
      adv_rng_(MixSeed(seed, 2)) {
  model_.Validate(dist.dim());
  if (model_.strategy == Strategy::kFixedPoint && model_.fixed_point.empty()) {
    model_.fixed_point = dist.Sample(adv_rng_);
  }
}

QueryStream::Query QueryStream::Next() {
  ++rounds_;
  Query q;
  q.in_distribution =
      std::bernoulli_distribution(model_.gamma)(mix_rng_);
  if (q.in_distribution) {
    ++in_dist_;
    q.x = dist_->Sample(draw_rng_);
  } else {
    q.x = Adversarial();
  }
  if (q.x) history_.push_back(*q.x);
  return q;
}

std::optional<std::vector<double>> QueryStream::Adversarial() {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  switch (model_.strategy) {
    case Strategy::kFixedPoint:
      return model_.fixed_point;
    case Strategy::kScripted: {
      auto x = model_.script[script_pos_];
      script_pos_ = (script_pos_ + 1) % model_.script.size();
      return x;
    }
    case Strategy::kReplay: {
      if (history_.empty()) return dist_->Sample(adv_rng_);
      std::uniform_int_distribution<std::size_t> pick(0, history_.size() - 1);
      return history_[pick(adv_rng_)];
    }
    case Strategy::kBoundaryProbe:
      break;
  }
  const double offset = model_.band * (2 * unit(adv_rng_) - 1);
  if (const auto* stump = std::get_if<StumpConcept>(&concept_)) {
    auto x = dist_->Sample(adv_rng_);
    x[stump->axis] = stump->threshold + offset;
    return x;
  }
  // Pick a face of the rectangle, place the point in the band around it
  // and inside the rectangle's extent on the other axes.
  const auto& rect = std::get<RectConcept>(concept_);
  const std::size_t d = rect.dim();
  std::uniform_int_distribution<std::size_t> face(0, 2 * d - 1);
  const std::size_t f = face(adv_rng_);
  const std::size_t axis = f / 2;
  std::vector<double> x(d);
  for (std::size_t j = 0; j < d; ++j) {
    x[j] = rect.lower[j] + (rect.upper[j] - rect.lower[j]) * unit(adv_rng_);
  }
  x[axis] = (f % 2 == 0 ? rect.lower[axis] : rect.upper[axis]) + offset;
  return x;
}

bool GammaMixingOk(std::int64_t in_dist, std::int64_t rounds, double gamma) {
  const double t = static_cast<double>(rounds);
  const double sd = std::sqrt(t * gamma * (1 - gamma));
  return std::abs(static_cast<double>(in_dist) - t * gamma) <= 3 * sd + 1e-9;
}

}  // namespace perp::harness
