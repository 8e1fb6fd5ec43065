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

#ifndef PERP_HARNESS_STRIPE_ORACLE_H_
#define PERP_HARNESS_STRIPE_ORACLE_H_

#include <cstddef>
#include <vector>

#include "perp/harness/distribution.h"
#include "perp/point.h"
#include "perp/rectangles_oracle.h"

namespace perp::harness {

struct StripeInterval {
  double lo = 0;
  double hi = 0;
  bool empty = false;
  // The rectangle ran out of mass at or before this stripe.
  bool exhausted = false;

  bool Contains(double v) const { return !empty && lo <= v && v <= hi; }
  double width() const { return empty ? 0 : hi - lo; }
};

// Peels the rectangle phase by phase: in each phase, for each axis, a left
// then a right strip each holding mass (alpha/2^p)/d under the uniform box.
class StripeOracle {
 public:
  StripeOracle(const Distribution& dist, RectConcept target, double alpha);

  const StripeInterval& Stripe(int phase, std::size_t axis, Side side);
  // Mass of every stripe generated through `phase`.
  double PeeledMass(int phase);
  // v lies in the union of the (axis, side) stripes of phases 1..phase.
  bool InUnion(int phase, std::size_t axis, Side side, double v);

  double rectangle_mass() const { return rect_mass_; }

 private:
  void ExtendTo(int phase);
  double CrossSection(std::size_t axis) const;

  Box box_;
  std::size_t d_;
  double alpha_;
  double rect_mass_;
  std::vector<double> lo_;  // remaining rectangle
  std::vector<double> hi_;
  // stripes_[p-1][2*axis + side]
  std::vector<std::vector<StripeInterval>> stripes_;
  std::vector<double> peeled_;  // cumulative mass through each phase
};

StripeInterval ComputeStripe(const Distribution& dist, const RectConcept& c,
                             double alpha, int phase, std::size_t axis,
                             Side side);

}  // namespace perp::harness

#endif  // PERP_HARNESS_STRIPE_ORACLE_H_
