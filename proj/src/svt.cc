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

#include "perp/svt.h"

#include <cmath>
#include <sstream>

namespace perp {

const char* ToString(StopAnswer answer) {
  return answer == StopAnswer::kHalt ? "halt" : "continue";
}

const char* ToString(BtAnswer answer) {
  switch (answer) {
    case BtAnswer::kLow:
      return "low";
    case BtAnswer::kMedium:
      return "medium";
    case BtAnswer::kHigh:
      return "high";
    case BtAnswer::kIgnored:
      return "ignored";
  }
  return "?";
}

Stopper::Stopper(PrivacyParams privacy, std::int64_t threshold)
    : privacy_(PrivacyParams::Make(privacy.epsilon, privacy.delta)),
      threshold_(threshold),
      noise_scale_(8.0 / privacy.epsilon * std::log(2.0 / privacy.delta)) {
  if (threshold < 0) throw ParameterError("Stopper threshold must be >= 0");
}

void Stopper::Update(int bit) {
  if (halted_) throw StateError("Stopper updated after halt");
  if (bit != 0 && bit != 1) throw InputError("Stopper input must be a bit");
  if (bit == 1) {
    ++ones_;
  } else {
    ++zeros_;
  }
}

StopAnswer Stopper::Query(NoiseSource& noise) {
  if (halted_) throw StateError("Stopper queried after halt");
  last_noise_ = noise.Laplace(noise_scale_);
  if (static_cast<double>(ones_) + last_noise_ >=
      static_cast<double>(threshold_)) {
    halted_ = true;
    return StopAnswer::kHalt;
  }
  return StopAnswer::kContinue;
}

double BtNoiseScale(const PrivacyParams& privacy, double budget) {
  return 4.0 / privacy.epsilon *
         std::sqrt(budget * std::log(2.0 / privacy.delta));
}

std::vector<std::string> ValidateBtParams(double epsilon, double delta,
                                          double budget, double t_low,
                                          double t_high) {
  std::vector<std::string> out;
  if (!(budget >= 4.0 * std::log(2.0 / delta))) {
    out.emplace_back("k >= 4 ln(2/delta)");
  }
  if (!(t_high - t_low >=
        16.0 / epsilon * std::sqrt(budget * std::log(2.0 / delta)))) {
    out.emplace_back("t_h - t_l >= (16/epsilon) sqrt(k ln(2/delta))");
  }
  return out;
}

std::vector<std::string> ValidateChallengeBtParams(double epsilon,
                                                   double delta, double budget,
                                                   double t_low, double t_high,
                                                   double step_bound) {
  std::vector<std::string> out;
  if (!(epsilon > 0)) out.emplace_back("epsilon > 0");
  if (!(delta > 0 && delta < 1)) out.emplace_back("0 < delta < 1");
  if (!out.empty()) return out;
  if (!(budget >= 4.0 * std::log(4.0 / delta))) {
    out.emplace_back("k >= 4 ln(4/delta)");
  }
  if (!(t_high - t_low >=
        32.0 / epsilon * std::sqrt(budget * std::log(4.0 / delta)))) {
    out.emplace_back("t_h - t_l >= (32/epsilon) sqrt(k ln(4/delta))");
  }
  if (!(step_bound >= 1)) out.emplace_back("T >= 1");
  return out;
}

std::int64_t ChallengeBtInnerBudget(const PrivacyParams& privacy,
                                    std::int64_t budget, double step_bound) {
  const double extra = 8.0 / privacy.epsilon *
                       std::log(2.0 / privacy.delta) *
                       std::log(step_bound / privacy.delta);
  return budget + static_cast<std::int64_t>(std::ceil(std::max(extra, 0.0)));
}

namespace internal {

void ThrowViolations(const std::string& what,
                     const std::vector<std::string>& violations) {
  std::ostringstream msg;
  msg << what << " parameters violate:";
  for (const auto& v : violations) msg << " [" << v << "]";
  throw ParameterError(msg.str());
}

}  // namespace internal

}  // namespace perp
