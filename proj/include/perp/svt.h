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

#ifndef PERP_SVT_H_
#define PERP_SVT_H_

// Streaming sparse-vector mechanisms: Stopper, BetweenThresholds and their
// composition ChallengeBt. Mechanisms hold their private data and counters;
// the NoiseSource is passed into every noisy call so that one source can
// drive many mechanisms in a fixed order.
//
// Queries passed to BetweenThresholds must have sensitivity 1. This is the
// caller's obligation and is not checked.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perp/errors.h"
#include "perp/noise.h"

namespace perp {

enum class StopAnswer { kContinue, kHalt };
enum class BtAnswer { kLow, kMedium, kHigh, kIgnored };

const char* ToString(StopAnswer answer);
const char* ToString(BtAnswer answer);

// Monitors a bit stream and halts once the noisy count of ones reaches the
// threshold. Noise scale is (8/epsilon) ln(2/delta).
class Stopper {
 public:
  Stopper(PrivacyParams privacy, std::int64_t threshold);

  // Adds a bit to the dataset. Throws StateError after halt.
  void Update(int bit);
  // Noisy comparison of sum(bits) against the threshold. Throws StateError
  // after halt.
  StopAnswer Query(NoiseSource& noise);

  bool halted() const { return halted_; }
  std::int64_t threshold() const { return threshold_; }
  std::int64_t size() const { return ones_ + zeros_; }
  std::int64_t sum() const { return ones_; }
  double noise_scale() const { return noise_scale_; }
  const PrivacyParams& privacy() const { return privacy_; }
  double last_noise() const { return last_noise_; }

 private:
  PrivacyParams privacy_;
  std::int64_t threshold_;
  double noise_scale_;
  std::int64_t ones_ = 0;
  std::int64_t zeros_ = 0;
  bool halted_ = false;
  double last_noise_ = 0;
};

struct BtConfig {
  PrivacyParams privacy;
  std::int64_t budget = 1;  // k, the number of "medium" answers allowed
  double t_low = 0;
  double t_high = 0;
  // Modified variant used inside ChallengeBt: never halts and does not
  // enforce the budget.
  bool never_halt = false;
};

// Noise scale (4/epsilon) sqrt(k ln(2/delta)).
double BtNoiseScale(const PrivacyParams& privacy, double budget);

// Names of the violated BetweenThresholds input conditions.
std::vector<std::string> ValidateBtParams(double epsilon, double delta,
                                          double budget, double t_low,
                                          double t_high);

// Names of the violated ChallengeBt input conditions:
// k >= 4 ln(4/delta), t_h - t_l >= (32/epsilon) sqrt(k ln(4/delta)), T >= 1.
std::vector<std::string> ValidateChallengeBtParams(double epsilon,
                                                   double delta, double budget,
                                                   double t_low, double t_high,
                                                   double step_bound);

// k' = k + (8/epsilon) ln(2/delta) ln(T/delta), rounded up.
std::int64_t ChallengeBtInnerBudget(const PrivacyParams& privacy,
                                    std::int64_t budget, double step_bound);

namespace internal {
[[noreturn]] void ThrowViolations(const std::string& what,
                                  const std::vector<std::string>& violations);
}  // namespace internal

template <typename Record>
class BetweenThresholds {
 public:
  BetweenThresholds(std::vector<Record> data, const BtConfig& config)
      : data_(std::move(data)),
        config_(config),
        noise_scale_(BtNoiseScale(config.privacy, config.budget)) {
    PrivacyParams::Make(config.privacy.epsilon, config.privacy.delta);
    if (config.budget < 1) throw ParameterError("budget k must be >= 1");
    if (!config.never_halt) {
      auto violations =
          ValidateBtParams(config.privacy.epsilon, config.privacy.delta,
                           config.budget, config.t_low, config.t_high);
      if (!violations.empty()) {
        internal::ThrowViolations("BetweenThresholds", violations);
      }
    }
  }

  // `query` maps the dataset to a real value with sensitivity 1.
  template <typename Query>
  BtAnswer Ask(Query&& query, NoiseSource& noise) {
    if (halted_) throw StateError("BetweenThresholds queried after halt");
    const double value = query(std::span<const Record>(data_));
    last_noise_ = noise.Laplace(noise_scale_);
    const double noisy = value + last_noise_;
    if (noisy < config_.t_low) return BtAnswer::kLow;
    if (noisy > config_.t_high) return BtAnswer::kHigh;
    ++medium_count_;
    if (!config_.never_halt && medium_count_ >= config_.budget) {
      halted_ = true;
    }
    return BtAnswer::kMedium;
  }

  // Noise-free answer. Reads the private data directly; used only by the
  // simulation harness to evaluate the center of the current hypothesis.
  template <typename Query>
  BtAnswer AskExact(Query&& query) const {
    const double value = query(std::span<const Record>(data_));
    if (value < config_.t_low) return BtAnswer::kLow;
    if (value > config_.t_high) return BtAnswer::kHigh;
    return BtAnswer::kMedium;
  }

  std::span<const Record> data() const { return data_; }
  const BtConfig& config() const { return config_; }
  double noise_scale() const { return noise_scale_; }
  std::int64_t medium_count() const { return medium_count_; }
  bool halted() const { return halted_; }
  double last_noise() const { return last_noise_; }

 private:
  std::vector<Record> data_;
  BtConfig config_;
  double noise_scale_;
  std::int64_t medium_count_ = 0;
  bool halted_ = false;
  double last_noise_ = 0;
};

struct ChallengeBtConfig {
  PrivacyParams privacy;
  std::int64_t budget = 1;  // k
  double t_low = 0;
  double t_high = 0;
  double step_bound = 1;  // T
  // When false the input contract is not enforced at construction. Only
  // meant for exercising the flag and halting logic at tiny budgets.
  bool check_contract = true;
};

// BetweenThresholds whose halting decision is delegated to a Stopper with
// threshold k. The inner BetweenThresholds runs with (epsilon, delta/2) and
// the inflated budget k' and never halts by itself.
//
// Flag discipline: a stopping query sets the flag; a BT query is honored only
// while the flag is set and clears it. An ignored BT query changes nothing.
template <typename Record>
class ChallengeBt {
 public:
  ChallengeBt(std::vector<Record> data, const ChallengeBtConfig& config)
      : config_(Checked(config)),
        stopper_(config.privacy, config.budget),
        bt_(std::move(data),
            BtConfig{PrivacyParams{config.privacy.epsilon,
                                   config.privacy.delta / 2},
                     ChallengeBtInnerBudget(config.privacy, config.budget,
                                            config.step_bound),
                     config.t_low, config.t_high, /*never_halt=*/true}) {}

  StopAnswer StoppingQuery(NoiseSource& noise) {
    if (halted_) throw StateError("ChallengeBT stopping query after halt");
    flag_ = true;
    const StopAnswer answer = stopper_.Query(noise);
    Track(stopper_.last_noise());
    if (answer == StopAnswer::kHalt) halted_ = true;
    return answer;
  }

  template <typename Query>
  BtAnswer BtQuery(Query&& query, NoiseSource& noise) {
    if (halted_) throw StateError("ChallengeBT query after halt");
    if (!flag_) return BtAnswer::kIgnored;
    flag_ = false;
    const BtAnswer answer = bt_.Ask(std::forward<Query>(query), noise);
    Track(bt_.last_noise());
    ++honored_;
    stopper_.Update(answer == BtAnswer::kMedium ? 1 : 0);
    return answer;
  }

  template <typename Query>
  BtAnswer BtQueryExact(Query&& query) const {
    return bt_.AskExact(std::forward<Query>(query));
  }

  bool halted() const { return halted_; }
  bool flag() const { return flag_; }
  std::int64_t honored_queries() const { return honored_; }
  std::span<const Record> data() const { return bt_.data(); }
  const Stopper& stopper() const { return stopper_; }
  const BetweenThresholds<Record>& bt() const { return bt_; }
  const ChallengeBtConfig& config() const { return config_; }
  double max_abs_noise() const { return max_abs_noise_; }

 private:
  static const ChallengeBtConfig& Checked(const ChallengeBtConfig& config) {
    PrivacyParams::Make(config.privacy.epsilon, config.privacy.delta);
    if (config.budget < 1) throw ParameterError("budget k must be >= 1");
    if (!config.check_contract) return config;
    auto violations = ValidateChallengeBtParams(
        config.privacy.epsilon, config.privacy.delta, config.budget,
        config.t_low, config.t_high, config.step_bound);
    if (!violations.empty()) {
      internal::ThrowViolations("ChallengeBT", violations);
    }
    return config;
  }

  void Track(double noise) {
    max_abs_noise_ = std::max(max_abs_noise_, std::abs(noise));
  }

  ChallengeBtConfig config_;
  Stopper stopper_;
  BetweenThresholds<Record> bt_;
  bool flag_ = true;
  bool halted_ = false;
  std::int64_t honored_ = 0;
  double max_abs_noise_ = 0;
};

}  // namespace perp

#endif  // PERP_SVT_H_
