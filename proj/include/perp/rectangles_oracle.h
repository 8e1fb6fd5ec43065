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

#ifndef PERP_RECTANGLES_ORACLE_H_
#define PERP_RECTANGLES_ORACLE_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "perp/noise.h"
#include "perp/phase_schedule.h"
#include "perp/point.h"
#include "perp/rsc.h"
#include "perp/svt.h"

namespace perp {

enum class Side { kLeft, kRight };

// Identifies one of the 2d ChallengeBT handles: Left_j or Right_j.
struct HandleId {
  std::size_t axis = 0;
  Side side = Side::kLeft;

  // "L1", "R2", ... with 1-based axes.
  std::string Name() const;
  friend bool operator==(const HandleId&, const HandleId&) = default;
};

struct HandleAnswer {
  HandleId handle;
  bool stopping = false;  // stopping query vs. BT query
  std::string answer;     // "continue"/"halt" or "low"/"medium"/"high"
};

enum class OracleEventKind {
  kHalt,          // handle halted on its stopping query
  kReexecute,     // handle rebuilt on its pending dataset; value = size
  kUnderfill,     // slice or re-execution got fewer than m_p points
  kRollover,      // phase ended; value = new phase
  kMediumNoAppend,  // medium answer: query kept out of D
};

struct OracleEvent {
  OracleEventKind kind;
  std::optional<HandleId> handle;
  std::int64_t value = 0;

  std::string ToString() const;
};

// Everything that happened in one call to Step().
struct RoundRecord {
  std::uint64_t round = 0;
  int phase = 1;  // phase the round belonged to
  std::optional<Point> query;
  std::optional<int> prediction;  // empty for a "no query" round
  bool appended = false;          // (x, y) added to D
  std::vector<HandleAnswer> answers;
  std::vector<OracleEvent> events;
  std::size_t accumulated = 0;         // |D| after the round
  std::vector<std::size_t> pending;    // |D_j^side| after the round, 2j+side
};

// Largest noise magnitudes drawn during one phase, against the bounds of
// the noise event E(p).
struct PhaseNoise {
  int phase = 1;
  double max_laplace = 0;
  std::int64_t max_geometric = 0;
  double laplace_bound = 0;
  double geometric_bound = 0;

  bool bounded() const {
    return max_laplace <= laplace_bound &&
           static_cast<double>(max_geometric) <= geometric_bound;
  }
};

// Everlasting robust prediction oracle for axis-aligned rectangles.
//
// Keeps 2d ChallengeBT handles over boundary datasets. Left_j holds positive
// points with the smallest j-th coordinates and answers "how many of your
// points lie above x[j]"; Right_j mirrors it. A query is labeled 1 only when
// every handle says "low". Medium answers divert the query into the
// handle's pending dataset, which replaces the handle once it halts. At the
// end of each phase all handles are re-sliced out of the points labeled
// during the phase.
class RectanglesOracle {
 public:
  using Handle = ChallengeBt<Point>;

  RectanglesOracle(std::vector<LabeledPoint> sample, const GlobalParams& g,
                   PhaseSchedule schedule, NoiseSource noise,
                   std::uint64_t aux_seed);

  // One round. `query` == nullopt is the "no query" symbol.
  RoundRecord Step(const std::optional<Point>& query);

  // Label the current hypothesis gives `x` with all noise suppressed. Reads
  // handle data directly and never changes oracle state.
  int PredictCenter(const Point& x) const;

  int phase() const { return phase_; }
  std::uint64_t time() const { return time_; }
  std::size_t dim() const { return g_.d; }
  const GlobalParams& params() const { return g_; }
  const PhaseSchedule& schedule() const { return schedule_; }
  const PhaseParams& current_phase() const { return schedule_.at(phase_); }

  const Handle& handle(HandleId id) const { return handles_[Index(id)]; }
  std::size_t live_handles() const { return handles_.size(); }
  const std::vector<Point>& pending(HandleId id) const {
    return pending_[Index(id)];
  }
  // D: points labeled (and appended) during the current phase.
  const std::vector<LabeledPoint>& accumulated() const { return accumulated_; }

  // Incremented whenever any handle's dataset changes.
  std::uint64_t hypothesis_version() const { return version_; }
  const std::vector<PhaseNoise>& noise_record() const { return phase_noise_; }
  // Slices taken when the current phase opened, in slicing order
  // (Right_1, Left_1, Right_2, ...).
  const std::vector<SliceInfo>& phase_slices() const { return slices_; }

  // Events raised while opening phase 1 (under-filled initial slices).
  const std::vector<OracleEvent>& init_events() const { return init_events_; }

  std::int64_t halts() const { return halts_; }
  std::int64_t reexecutions() const { return reexecutions_; }
  std::int64_t underfills() const { return underfills_; }

  // Hash of the full mutable state, for isolation checks.
  std::uint64_t StateDigest() const;

 private:
  static std::size_t Index(HandleId id) {
    return 2 * id.axis + (id.side == Side::kRight ? 1 : 0);
  }
  static HandleId IdOf(std::size_t index) {
    return HandleId{index / 2, index % 2 == 1 ? Side::kRight : Side::kLeft};
  }

  Handle MakeHandle(std::vector<Point> data) const;
  void OpenPhase(std::vector<LabeledPoint> pool, RoundRecord* record);
  void Augment(Point& p);
  void TrackLaplace(double noise);
  RoundRecord StepImpl(const std::optional<Point>& query);

  GlobalParams g_;
  PhaseSchedule schedule_;
  NoiseSource noise_;
  std::mt19937_64 aux_rng_;
  std::uint64_t aux_draws_ = 0;

  int phase_ = 1;
  std::uint64_t time_ = 0;
  double phase_end_ = 0;
  std::vector<Handle> handles_;
  std::vector<std::vector<Point>> pending_;
  std::vector<LabeledPoint> accumulated_;
  std::vector<SliceInfo> slices_;
  std::vector<PhaseNoise> phase_noise_;
  std::vector<OracleEvent> init_events_;
  std::uint64_t version_ = 0;
  std::int64_t halts_ = 0;
  std::int64_t reexecutions_ = 0;
  std::int64_t underfills_ = 0;
  bool failed_ = false;
};

}  // namespace perp

#endif  // PERP_RECTANGLES_ORACLE_H_
