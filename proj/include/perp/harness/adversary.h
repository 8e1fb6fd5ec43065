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

#ifndef PERP_HARNESS_ADVERSARY_H_
#define PERP_HARNESS_ADVERSARY_H_

#include <cstddef>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "perp/harness/distribution.h"
#include "perp/point.h"

namespace perp::harness {

using Concept = std::variant<RectConcept, StumpConcept>;

int Label(const Concept& c, const std::vector<double>& x);

enum class Strategy { kFixedPoint, kBoundaryProbe, kReplay, kScripted };

const char* ToString(Strategy s);

struct AdversaryModel {
  double gamma = 1.0;
  Strategy strategy = Strategy::kFixedPoint;
  // kFixedPoint: the point; empty means a draw from D fixed at construction.
  std::vector<double> fixed_point;
  // kBoundaryProbe: half-width of the band around a concept face.
  double band = 0.02;
  // kScripted: cycled in order; nullopt entries are "no query".
  std::vector<std::optional<std::vector<double>>> script;

  void Validate(std::size_t d) const;
};

// One query stream: each round flips Bernoulli(gamma) to choose between a
// fresh draw from D and the adversary's next point.
class QueryStream {
 public:
  QueryStream(AdversaryModel model, const Distribution& dist, Concept target,
              std::uint64_t seed);

  struct Query {
    std::optional<std::vector<double>> x;
    bool in_distribution = false;
  };

  Query Next();
  std::int64_t in_distribution_rounds() const { return in_dist_; }
  std::int64_t rounds() const { return rounds_; }

 private:
  std::optional<std::vector<double>> Adversarial();

  AdversaryModel model_;
  const Distribution* dist_;
  Concept concept_;
  std::mt19937_64 mix_rng_;
  std::mt19937_64 draw_rng_;
  std::mt19937_64 adv_rng_;
  std::vector<std::vector<double>> history_;
  std::size_t script_pos_ = 0;
  std::int64_t in_dist_ = 0;
  std::int64_t rounds_ = 0;
};

// |count - T gamma| <= 3 sqrt(T gamma (1 - gamma)).
bool GammaMixingOk(std::int64_t in_dist, std::int64_t rounds, double gamma);

}  // namespace perp::harness

#endif  // PERP_HARNESS_ADVERSARY_H_
