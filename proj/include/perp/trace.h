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

#ifndef PERP_TRACE_H_
#define PERP_TRACE_H_

#include <ostream>
#include <string>
#include <vector>

#include "perp/config.h"
#include "perp/harness/trial.h"

namespace perp {

inline constexpr int kTraceSchemaVersion = 1;

// Round-0 record: probe mode, oracle, sample size and (for stumps) the
// selected direction.
std::string TraceHeaderLine(const ExperimentConfig& config,
                            const harness::TrialTrace& trace);
std::string TraceRoundLine(const harness::TraceRound& round,
                           std::uint64_t trial);

// One JSON object per line: header, then one record per round.
void WriteTrace(std::ostream& out, const ExperimentConfig& config,
                const harness::TrialTrace& trace);

// Tab-separated, one row per trial sorted by trial id, fixed precision.
void WriteSummary(std::ostream& out,
                  const std::vector<harness::TrialTrace>& traces);
std::vector<std::string> SummaryColumns();

// Problems with one trace line against the published schema; empty when
// the line is valid.
std::vector<std::string> ValidateTraceLine(const std::string& line);

}  // namespace perp

#endif  // PERP_TRACE_H_
