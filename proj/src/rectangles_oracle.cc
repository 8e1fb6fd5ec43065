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

#include "perp/rectangles_oracle.h"

#include <cstring>
#include <string>
#include <utility>

#include "perp/errors.h"

namespace perp {
namespace {

class Fnv {
 public:
  void Add(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h_ ^= (v >> (8 * i)) & 0xff;
      h_ *= 0x100000001b3ULL;
    }
  }
  void Add(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    Add(bits);
  }
  void Add(const Point& p) {
    Add(static_cast<std::uint64_t>(p.x.size()));
    for (double v : p.x) Add(v);
    for (double v : p.aux) Add(v);
  }
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

// Number of points strictly above x on axis j (Left_j's query).
auto CountAbove(const Point& x, std::size_t j) {
  return [&x, j](std::span<const Point> data) {
    double count = 0;
    for (const auto& p : data) count += AxisAbove(p, x, j) ? 1 : 0;
    return count;
  };
}

// Number of points strictly below x on axis j (Right_j's query).
auto CountBelow(const Point& x, std::size_t j) {
  return [&x, j](std::span<const Point> data) {
    double count = 0;
    for (const auto& p : data) count += AxisAbove(x, p, j) ? 1 : 0;
    return count;
  };
}

}  // namespace

std::string HandleId::Name() const {
  return (side == Side::kLeft ? "L" : "R") + std::to_string(axis + 1);
}

std::string OracleEvent::ToString() const {
  std::string out;
  switch (kind) {
    case OracleEventKind::kHalt:
      out = "halt";
      break;
    case OracleEventKind::kReexecute:
      out = "reexecute";
      break;
    case OracleEventKind::kUnderfill:
      out = "underfill";
      break;
    case OracleEventKind::kRollover:
      out = "rollover";
      break;
    case OracleEventKind::kMediumNoAppend:
      out = "medium-no-append";
      break;
  }
  if (handle) out += ":" + handle->Name();
  if (kind != OracleEventKind::kHalt &&
      kind != OracleEventKind::kMediumNoAppend) {
    out += "=" + std::to_string(value);
  }
  return out;
}

RectanglesOracle::RectanglesOracle(std::vector<LabeledPoint> sample,
                                   const GlobalParams& g,
                                   PhaseSchedule schedule, NoiseSource noise,
                                   std::uint64_t aux_seed)
    : g_(g),
      schedule_(std::move(schedule)),
      noise_(std::move(noise)),
      aux_rng_(aux_seed) {
  g_.Validate();
  ValidateSample(sample, g_.d);
  for (auto& s : sample) Augment(s.point);
  RoundRecord opening;
  OpenPhase(std::move(sample), &opening);
  init_events_ = std::move(opening.events);
}

void RectanglesOracle::Augment(Point& p) {
  if (!p.aux.empty()) return;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  p.aux.resize(p.x.size());
  for (auto& z : p.aux) {
    z = unit(aux_rng_);
    ++aux_draws_;
  }
}

RectanglesOracle::Handle RectanglesOracle::MakeHandle(
    std::vector<Point> data) const {
  const PhaseParams& phase = schedule_.at(phase_);
  ChallengeBtConfig config;
  config.privacy = HandlePrivacy(g_, phase);
  config.budget = phase.k;
  config.t_low = phase.noise_bound;
  config.t_high = 2 * phase.noise_bound;
  config.step_bound = phase.steps;
  // Explicit schedules (hand traces, overrides) are taken as given.
  config.check_contract = schedule_.resolved();
  return Handle(std::move(data), config);
}

void RectanglesOracle::OpenPhase(std::vector<LabeledPoint> pool,
                                 RoundRecord* record) {
  const PhaseParams& phase = schedule_.at(phase_);
  PhaseNoise pn;
  pn.phase = phase_;
  pn.laplace_bound = phase.noise_bound;
  pn.geometric_bound = GeometricBound(g_, phase);
  phase_noise_.push_back(pn);

  RscSession<LabeledPoint> rsc(std::move(pool), static_cast<int>(2 * g_.d),
                               HandlePrivacy(g_, phase));
  std::vector<Handle> fresh;
  fresh.reserve(2 * g_.d);
  std::vector<std::optional<Handle>> slots(2 * g_.d);
  slices_.clear();
  auto to_points = [](std::vector<LabeledPoint> slice) {
    std::vector<Point> out;
    out.reserve(slice.size());
    for (auto& s : slice) out.push_back(std::move(s.point));
    return out;
  };
  for (std::size_t j = 0; j < g_.d; ++j) {
    for (Side side : {Side::kRight, Side::kLeft}) {
      const double sign = side == Side::kRight ? 1.0 : -1.0;
      OrderKey<LabeledPoint> key =
          [j, sign](const LabeledPoint& r) -> std::optional<double> {
        if (r.label != 1) return std::nullopt;
        return sign * r.point.x[j];
      };
      SliceInfo info;
      auto slice = rsc.Take(phase.m, key, noise_, &info);
      slices_.push_back(info);
      phase_noise_.back().max_geometric =
          std::max(phase_noise_.back().max_geometric, info.geometric);
      const HandleId id{j, side};
      if (info.underfilled) {
        ++underfills_;
        record->events.push_back(
            OracleEvent{OracleEventKind::kUnderfill, id, info.taken});
      }
      slots[Index(id)].emplace(MakeHandle(to_points(std::move(slice))));
    }
  }
  for (auto& slot : slots) fresh.push_back(std::move(*slot));
  handles_ = std::move(fresh);
  pending_.assign(2 * g_.d, {});
  accumulated_.clear();
  phase_end_ = schedule_.PhaseEnd(phase_);
  ++version_;
}

void RectanglesOracle::TrackLaplace(double noise) {
  auto& pn = phase_noise_.back();
  pn.max_laplace = std::max(pn.max_laplace, std::abs(noise));
}

RoundRecord RectanglesOracle::Step(const std::optional<Point>& query) {
  if (failed_) {
    throw StateError("oracle is unusable after an internal error");
  }
  try {
    return StepImpl(query);
  } catch (...) {
    failed_ = true;
    throw;
  }
}

RoundRecord RectanglesOracle::StepImpl(const std::optional<Point>& query) {
  if (query && query->dim() != g_.d) {
    throw InputError("query dimension " + std::to_string(query->dim()) +
                     " does not match d = " + std::to_string(g_.d));
  }
  ++time_;
  RoundRecord record;
  record.round = time_;
  record.phase = phase_;

  // Stopping queries to every handle; halted handles are rebuilt on their
  // pending datasets.
  std::vector<std::size_t> halted;
  for (std::size_t i = 0; i < handles_.size(); ++i) {
    const StopAnswer a = handles_[i].StoppingQuery(noise_);
    TrackLaplace(handles_[i].stopper().last_noise());
    record.answers.push_back(HandleAnswer{IdOf(i), true, ToString(a)});
    if (a == StopAnswer::kHalt) halted.push_back(i);
  }
  for (std::size_t i : halted) {
    const HandleId id = IdOf(i);
    ++halts_;
    record.events.push_back(OracleEvent{OracleEventKind::kHalt, id, 0});
    std::vector<Point> data = pending_[i];
    const auto size = static_cast<std::int64_t>(data.size());
    if (size < current_phase().m) {
      ++underfills_;
      record.events.push_back(
          OracleEvent{OracleEventKind::kUnderfill, id, size});
    }
    handles_[i] = MakeHandle(std::move(data));
    pending_[i].clear();
    ++reexecutions_;
    ++version_;
    record.events.push_back(
        OracleEvent{OracleEventKind::kReexecute, id, size});
  }

  if (query) {
    Point x = *query;
    Augment(x);
    record.query = x;
    int label = 0;
    bool append = true;
    bool all_low = true;
    for (std::size_t j = 0; j < g_.d && all_low; ++j) {
      for (Side side : {Side::kLeft, Side::kRight}) {
        const HandleId id{j, side};
        Handle& h = handles_[Index(id)];
        const BtAnswer a = side == Side::kLeft
                               ? h.BtQuery(CountAbove(x, j), noise_)
                               : h.BtQuery(CountBelow(x, j), noise_);
        if (a == BtAnswer::kIgnored) {
          throw StateError("handle " + id.Name() +
                           " ignored a query after a stopping query");
        }
        TrackLaplace(h.bt().last_noise());
        record.answers.push_back(HandleAnswer{id, false, ToString(a)});
        if (a == BtAnswer::kLow) continue;
        all_low = false;
        if (a == BtAnswer::kMedium) {
          pending_[Index(id)].push_back(x);
          append = false;
          record.events.push_back(
              OracleEvent{OracleEventKind::kMediumNoAppend, id, 0});
        }
        break;
      }
    }
    if (all_low) label = 1;
    if (append) accumulated_.push_back(LabeledPoint{x, label});
    record.prediction = label;
    record.appended = append;
  }

  if (static_cast<double>(time_) == phase_end_) {
    std::vector<LabeledPoint> pool = std::move(accumulated_);
    accumulated_.clear();
    ++phase_;
    record.events.push_back(
        OracleEvent{OracleEventKind::kRollover, std::nullopt, phase_});
    OpenPhase(std::move(pool), &record);
  }

  record.accumulated = accumulated_.size();
  record.pending.reserve(pending_.size());
  for (const auto& p : pending_) record.pending.push_back(p.size());
  return record;
}

int RectanglesOracle::PredictCenter(const Point& x) const {
  for (std::size_t j = 0; j < g_.d; ++j) {
    const BtAnswer left =
        handles_[Index({j, Side::kLeft})].BtQueryExact(CountAbove(x, j));
    if (left != BtAnswer::kLow) return 0;
    const BtAnswer right =
        handles_[Index({j, Side::kRight})].BtQueryExact(CountBelow(x, j));
    if (right != BtAnswer::kLow) return 0;
  }
  return 1;
}

std::uint64_t RectanglesOracle::StateDigest() const {
  Fnv h;
  h.Add(static_cast<std::uint64_t>(phase_));
  h.Add(time_);
  h.Add(version_);
  h.Add(noise_.draws());
  h.Add(aux_draws_);
  h.Add(static_cast<std::uint64_t>(failed_));
  for (const auto& handle : handles_) {
    h.Add(static_cast<std::uint64_t>(handle.flag()));
    h.Add(static_cast<std::uint64_t>(handle.halted()));
    h.Add(static_cast<std::uint64_t>(handle.stopper().sum()));
    h.Add(static_cast<std::uint64_t>(handle.stopper().size()));
    h.Add(static_cast<std::uint64_t>(handle.bt().medium_count()));
    for (const auto& p : handle.data()) h.Add(p);
  }
  for (const auto& pending : pending_) {
    h.Add(static_cast<std::uint64_t>(pending.size()));
    for (const auto& p : pending) h.Add(p);
  }
  for (const auto& lp : accumulated_) {
    h.Add(lp.point);
    h.Add(static_cast<std::uint64_t>(lp.label));
  }
  return h.value();
}

}  // namespace perp
