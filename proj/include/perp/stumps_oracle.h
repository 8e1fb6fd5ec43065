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

#ifndef PERP_STUMPS_ORACLE_H_
#define PERP_STUMPS_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "perp/noise.h"
#include "perp/phase_schedule.h"
#include "perp/point.h"
#include "perp/rectangles_oracle.h"

namespace perp {

// A candidate (axis, sign) pair. The stump with threshold t labels x as 1
// iff sign * (x[axis] - t) >= 0.
struct StumpDirection {
  std::size_t axis = 0;
  int sign = 1;

  friend bool operator==(const StumpDirection&, const StumpDirection&) =
      default;
};

// Minimum over thresholds t of the number of points in `sample` that
// decision_{axis,sign,t} misclassifies. One sorted sweep over the axis.
std::int64_t BestStumpError(std::span<const LabeledPoint> sample,
                            std::size_t axis, int sign);

// Candidates in enumeration order: (0,+1), (0,-1), (1,+1), ...
std::vector<StumpDirection> StumpCandidates(std::size_t d);

// Exact selection probabilities of the exponential mechanism,
// proportional to exp(-epsilon * score / 2), in StumpCandidates order.
std::vector<double> ExpMechProbabilities(std::span<const std::int64_t> scores,
                                         double epsilon);

// Samples a candidate with the exponential mechanism over BestStumpError
// scores (sensitivity 1). In zero-noise mode returns the first minimizer.
StumpDirection ExpMechSelect(std::span<const LabeledPoint> sample,
                             double epsilon, NoiseSource& noise);

// Projects `sample` onto `axis`, sorts ascending when order = +1 and
// descending when order = -1 (ties broken by the auxiliary coordinate),
// and labels the first `positives` entries 1, the rest 0. `positives` is
// clamped to [0, |sample|]; `clamped` reports whether that happened.
std::vector<LabeledPoint> RelabelProject(std::span<const LabeledPoint> sample,
                                         std::size_t axis, int order,
                                         std::int64_t positives,
                                         bool* clamped = nullptr);

struct StumpsOptions {
  // Schedule for the inner one-dimensional rectangle oracle. When empty it
  // is resolved from the inner parameters (eps/4, delta/2, alpha/2,
  // beta/2, gamma).
  std::optional<PhaseSchedule> inner_schedule;
  // Privacy level of the inner oracle; eps/4 when empty.
  std::optional<double> inner_epsilon;
};

// Private everlasting predictor for decision stumps: pick (axis, sign)
// privately, relabel the projected sample with a noisy positive count, then
// run a one-dimensional rectangle oracle on the selected coordinate.
class StumpsOracle {
 public:
  StumpsOracle(std::vector<LabeledPoint> sample, const GlobalParams& g,
               NoiseSource selection_noise, NoiseSource inner_noise,
               std::uint64_t aux_seed, StumpsOptions options = {});

  RoundRecord Step(const std::optional<Point>& query);
  int PredictCenter(const Point& x) const;

  const StumpDirection& selected() const { return selected_; }
  std::int64_t noisy_positives() const { return noisy_positives_; }
  bool positives_clamped() const { return clamped_; }
  // Orientation used for the inner oracle: the forwarded coordinate is
  // orientation * x[axis], so positives always sit at its low end.
  int orientation() const { return orientation_; }
  const GlobalParams& inner_params() const { return inner_params_; }
  const RectanglesOracle& inner() const { return *inner_; }
  const std::vector<LabeledPoint>& relabeled() const { return relabeled_; }

  // The single coordinate forwarded to the inner oracle.
  Point Forward(const Point& x) const;

 private:
  GlobalParams params_;
  GlobalParams inner_params_;
  StumpDirection selected_;
  int orientation_ = 1;
  std::int64_t noisy_positives_ = 0;
  bool clamped_ = false;
  std::vector<LabeledPoint> relabeled_;
  std::optional<RectanglesOracle> inner_;
};

}  // namespace perp

#endif  // PERP_STUMPS_ORACLE_H_
