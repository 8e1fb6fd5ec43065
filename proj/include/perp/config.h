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

#ifndef PERP_CONFIG_H_
#define PERP_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>

#include "perp/harness/adversary.h"
#include "perp/harness/distribution.h"
#include "perp/noise.h"
#include "perp/phase_schedule.h"

namespace perp {

enum class OracleKind { kRectangles, kStumps };

const char* ToString(OracleKind kind);

struct OutputSpec {
  std::string directory = "perp_out";
  bool write_traces = true;
};

// Everything one `run` needs. Every field has a default; a missing seed
// means "draw one" and the drawn value is written back.
struct ExperimentConfig {
  OracleKind oracle = OracleKind::kRectangles;
  GlobalParams params;
  harness::Distribution distribution =
      harness::Distribution::UniformBox({0.0}, {1.0});
  harness::Concept target = RectConcept{{0.2}, {0.8}};
  harness::AdversaryModel adversary;  // gamma mirrors params.gamma
  // Horizon: a whole number of phases, or an explicit round count.
  int horizon_phases = 1;
  std::optional<std::uint64_t> horizon_rounds;
  // Defaults to the resolver's required n.
  std::optional<std::int64_t> sample_size;
  std::int64_t probes = 1000;
  int trials = 1;
  std::optional<std::uint64_t> seed;
  NoiseMode noise = NoiseMode::kSeededRandom;
  ResolverConstants resolver;
  // Stumps only: resolve the inner schedule at this privacy level instead
  // of eps/4.
  std::optional<double> inner_schedule_epsilon;
  OutputSpec output;
  int parallel = 1;

  // Throws ConfigError naming the offending field.
  void Validate() const;
};

// Parses JSON text. Unknown keys are rejected. Throws ConfigError.
ExperimentConfig ParseConfig(const std::string& text);
ExperimentConfig LoadConfig(const std::string& path);
// Canonical JSON form (all fields explicit).
std::string SerializeConfig(const ExperimentConfig& config);

// Schedule used by an experiment: the resolved rectangles schedule, or the
// inner schedule for stumps.
PhaseSchedule ExperimentSchedule(const ExperimentConfig& config);
// Parameters the experiment's (inner) rectangle oracle runs under.
GlobalParams ScheduleParams(const ExperimentConfig& config);

}  // namespace perp

#endif  // PERP_CONFIG_H_
