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

#include "perp/rsc.h"

#include <cmath>

namespace perp {

PrivacyCost RscPrivacyCost(int slices, double epsilon, double delta,
                           double delta_hat, double constant) {
  if (slices < 1) throw ParameterError("tau must be >= 1");
  if (!(epsilon > 0)) throw ParameterError("epsilon must be positive");
  if (!(delta >= 0)) throw ParameterError("delta must be nonnegative");
  if (!(delta_hat > 0 && delta_hat < 1)) {
    throw ParameterError("delta_hat must be in (0,1)");
  }
  return PrivacyCost{constant * epsilon * std::log(1.0 / delta_hat),
                     delta_hat + 2.0 * slices * delta};
}

}  // namespace perp
