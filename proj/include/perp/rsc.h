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

#ifndef PERP_RSC_H_
#define PERP_RSC_H_

// Reorder-Slice-Compute: carve adaptively chosen, noisily sized extreme
// slices off a private pool and hand each slice to a fresh mechanism.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "perp/errors.h"
#include "perp/noise.h"

namespace perp {

// Ranking key for one slice request. Larger keys are taken first; records
// with no key are never selected. Ties are broken by the record's own
// operator< and then by insertion index, which makes the order strict.
template <typename Record>
using OrderKey = std::function<std::optional<double>(const Record&)>;

struct SliceInfo {
  std::int64_t requested = 0;   // m
  std::int64_t geometric = 0;   // noise added to m
  std::int64_t noisy_size = 0;  // m-hat
  std::int64_t taken = 0;       // records actually removed
  bool underfilled = false;     // taken < noisy_size
};

struct PrivacyCost {
  double epsilon = 0;
  double delta = 0;
};

// Privacy of a whole session of `slices` slices, each run with
// (epsilon, delta): (c * epsilon * ln(1/delta_hat), delta_hat + 2 tau delta).
// `constant` is the unspecified multiplicative constant of the bound.
PrivacyCost RscPrivacyCost(int slices, double epsilon, double delta,
                           double delta_hat, double constant = 1.0);

template <typename Record>
class RscSession {
 public:
  RscSession(std::vector<Record> pool, int slice_budget, PrivacyParams per_slice)
      : pool_(std::move(pool)),
        slice_budget_(slice_budget),
        privacy_(per_slice) {
    if (slice_budget < 1) throw ParameterError("slice budget must be >= 1");
    if (!(per_slice.epsilon > 0)) {
      throw ParameterError("slice epsilon must be positive");
    }
    insertion_.resize(pool_.size());
    std::iota(insertion_.begin(), insertion_.end(), std::size_t{0});
  }

  // Removes the largest m + Geom(1 - e^{-epsilon}) eligible records under
  // `key` and returns them, largest first. A request larger than the
  // eligible pool takes everything eligible and is flagged as under-filled.
  std::vector<Record> Take(std::int64_t m, const OrderKey<Record>& key,
                           NoiseSource& noise, SliceInfo* info = nullptr) {
    if (slices_taken_ >= slice_budget_) {
      throw StateError("RSC slice budget of " + std::to_string(slice_budget_) +
                       " exhausted");
    }
    if (m < 0) throw ParameterError("slice size must be nonnegative");
    SliceInfo local;
    local.requested = m;
    local.geometric =
        noise.Geometric(-std::expm1(-privacy_.epsilon));
    local.noisy_size = m + local.geometric;

    struct Candidate {
      double key;
      std::size_t pos;
    };
    std::vector<Candidate> eligible;
    eligible.reserve(pool_.size());
    for (std::size_t i = 0; i < pool_.size(); ++i) {
      if (auto k = key(pool_[i])) eligible.push_back({*k, i});
    }
    // Descending strict order.
    auto above = [this](const Candidate& a, const Candidate& b) {
      if (a.key != b.key) return a.key > b.key;
      if (pool_[b.pos] < pool_[a.pos]) return true;
      if (pool_[a.pos] < pool_[b.pos]) return false;
      return insertion_[a.pos] > insertion_[b.pos];
    };
    const auto take = static_cast<std::size_t>(std::min<std::int64_t>(
        local.noisy_size, static_cast<std::int64_t>(eligible.size())));
    std::partial_sort(eligible.begin(), eligible.begin() + take,
                      eligible.end(), above);
    local.taken = static_cast<std::int64_t>(take);
    local.underfilled = local.taken < local.noisy_size;

    std::vector<Record> slice;
    slice.reserve(take);
    std::vector<bool> removed(pool_.size(), false);
    for (std::size_t i = 0; i < take; ++i) {
      slice.push_back(pool_[eligible[i].pos]);
      removed[eligible[i].pos] = true;
    }
    std::vector<Record> rest;
    std::vector<std::size_t> rest_insertion;
    rest.reserve(pool_.size() - take);
    rest_insertion.reserve(pool_.size() - take);
    for (std::size_t i = 0; i < pool_.size(); ++i) {
      if (removed[i]) continue;
      rest.push_back(std::move(pool_[i]));
      rest_insertion.push_back(insertion_[i]);
    }
    pool_ = std::move(rest);
    insertion_ = std::move(rest_insertion);

    ++slices_taken_;
    if (local.underfilled) ++underfills_;
    if (info != nullptr) *info = local;
    return slice;
  }

  // Take() followed by instantiating a mechanism on the slice.
  template <typename Factory>
  auto Slice(std::int64_t m, const OrderKey<Record>& key, Factory&& make,
             NoiseSource& noise) {
    SliceInfo info;
    auto records = Take(m, key, noise, &info);
    return std::make_pair(make(std::move(records)), info);
  }

  const std::vector<Record>& pool() const { return pool_; }
  int slices_taken() const { return slices_taken_; }
  int slice_budget() const { return slice_budget_; }
  int underfill_events() const { return underfills_; }
  const PrivacyParams& privacy() const { return privacy_; }

 private:
  std::vector<Record> pool_;
  std::vector<std::size_t> insertion_;
  int slice_budget_;
  PrivacyParams privacy_;
  int slices_taken_ = 0;
  int underfills_ = 0;
};

}  // namespace perp

#endif  // PERP_RSC_H_
