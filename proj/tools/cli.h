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

#ifndef PERP_TOOLS_CLI_H_
#define PERP_TOOLS_CLI_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace perp::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInfeasible = 2,
  kInternal = 3,
};

// Environment variable that overrides the configured output directory.
inline constexpr const char* kOutputDirEnv = "PERP_OUTPUT_DIR";

int CmdRun(const std::string& config_path, std::optional<std::uint64_t> seed,
           std::optional<int> parallel, std::ostream& out, std::ostream& err);

int CmdLeakage(double delta, std::int64_t horizon, std::int64_t trials,
               std::uint64_t seed, std::ostream& out, std::ostream& err);

struct AuditArgs {
  std::string mechanism;
  std::optional<double> epsilon;
  double delta = 0.1;
  std::int64_t threshold = 1;
  std::optional<std::int64_t> budget;
  double t_low = 0.5;
  std::optional<double> t_high;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  bool same_input = false;
};

int CmdAudit(const AuditArgs& args, std::ostream& out, std::ostream& err);

int CmdCheckParams(const std::string& config_path, int phases,
                   std::ostream& out, std::ostream& err);

// Full command line, argv[0] included.
int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err);

}  // namespace perp::cli

#endif  // PERP_TOOLS_CLI_H_
