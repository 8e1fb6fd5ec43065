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

#include "perp/harness/stripe_oracle.h"

#include <cmath>
#include <utility>

#include "perp/errors.h"

namespace perp::harness {

StripeOracle::StripeOracle(const Distribution& dist, RectConcept target,
                           double alpha)
    : box_(dist.box()), d_(dist.dim()), alpha_(alpha) {
  if (target.dim() != d_) throw InputError("rectangle dimension mismatch");
  if (!(alpha > 0 && alpha < 1)) throw ParameterError("alpha must be in (0,1)");
  for (std::size_t j = 0; j < d_; ++j) {
    if (target.lower[j] < box_.lower[j] || target.upper[j] > box_.upper[j]) {
      throw InputError("rectangle must lie inside the distribution box");
    }
  }
  lo_ = target.lower;
  hi_ = target.upper;
  rect_mass_ = dist.Mass(target);
}

double StripeOracle::CrossSection(std::size_t axis) const {
  double mass = 1;
  for (std::size_t i = 0; i < d_; ++i) {
    const double width = box_.upper[i] - box_.lower[i];
    if (i != axis) mass *= std::max(0.0, hi_[i] - lo_[i]) / width;
  }
  return mass / (box_.upper[axis] - box_.lower[axis]);
}

void StripeOracle::ExtendTo(int phase) {
  if (phase < 1) throw InputError("phase must be >= 1");
  while (static_cast<int>(stripes_.size()) < phase) {
    const int p = static_cast<int>(stripes_.size()) + 1;
    const double target = alpha_ / std::ldexp(1.0, p) / static_cast<double>(d_);
    double peeled = peeled_.empty() ? 0 : peeled_.back();
    std::vector<StripeInterval> row(2 * d_);
    for (std::size_t j = 0; j < d_; ++j) {
      for (int s = 0; s < 2; ++s) {
        StripeInterval& st = row[2 * j + s];
        const double cross = CrossSection(j);
        const double room = hi_[j] - lo_[j];
        if (cross <= 0 || room <= 0) {
          st.empty = true;
          st.exhausted = true;
          continue;
        }
        double w = target / cross;
        if (w >= room) {
          w = room;
          st.exhausted = true;
        }
        if (s == 0) {
          st.lo = lo_[j];
          st.hi = lo_[j] + w;
          lo_[j] = st.hi;
        } else {
          st.hi = hi_[j];
          st.lo = hi_[j] - w;
          hi_[j] = st.lo;
        }
        if (st.exhausted) {
          // Nothing left: collapse the remainder.
          lo_[j] = hi_[j] = st.lo;
        }
        peeled += w * cross;
      }
    }
    stripes_.push_back(std::move(row));
    peeled_.push_back(peeled);
  }
}

const StripeInterval& StripeOracle::Stripe(int phase, std::size_t axis,
                                           Side side) {
  if (axis >= d_) throw InputError("axis out of range");
  ExtendTo(phase);
  return stripes_[phase - 1][2 * axis + (side == Side::kRight ? 1 : 0)];
}

double StripeOracle::PeeledMass(int phase) {
  ExtendTo(phase);
  return peeled_[phase - 1];
}

bool StripeOracle::InUnion(int phase, std::size_t axis, Side side, double v) {
  ExtendTo(phase);
  for (int q = 1; q <= phase; ++q) {
    if (Stripe(q, axis, side).Contains(v)) return true;
  }
  return false;
}

StripeInterval ComputeStripe(const Distribution& dist, const RectConcept& c,
                             double alpha, int phase, std::size_t axis,
                             Side side) {
  StripeOracle oracle(dist, c, alpha);
  return oracle.Stripe(phase, axis, side);
}

}  // namespace perp::harness
