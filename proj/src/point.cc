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

#include "perp/point.h"

#include <cmath>
#include <string>
#include <utility>

#include "perp/errors.h"

namespace perp {

bool AxisAbove(const Point& a, const Point& b, std::size_t axis) {
  if (a.x[axis] != b.x[axis]) return a.x[axis] > b.x[axis];
  if (a.aux.size() > axis && b.aux.size() > axis) {
    return a.aux[axis] > b.aux[axis];
  }
  return false;
}

void ValidateSample(std::span<const LabeledPoint> sample, std::size_t dim) {
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const auto& s = sample[i];
    if (s.label != 0 && s.label != 1) {
      throw InputError("sample point " + std::to_string(i) +
                       " has label " + std::to_string(s.label) +
                       ", expected 0 or 1");
    }
    if (s.point.dim() != dim) {
      throw InputError("sample point " + std::to_string(i) + " has dimension " +
                       std::to_string(s.point.dim()) + ", expected " +
                       std::to_string(dim));
    }
    if (!s.point.aux.empty() && s.point.aux.size() != dim) {
      throw InputError("sample point " + std::to_string(i) +
                       " has a malformed aux vector");
    }
  }
}

RectConcept RectConcept::Make(std::vector<double> lower,
                              std::vector<double> upper) {
  if (lower.size() != upper.size() || lower.empty()) {
    throw ParameterError("rectangle bounds must be nonempty and equal length");
  }
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (!(lower[j] <= upper[j])) {
      throw ParameterError("rectangle needs lower <= upper on axis " +
                           std::to_string(j));
    }
  }
  return RectConcept{std::move(lower), std::move(upper)};
}

int RectConcept::Label(std::span<const double> x) const {
  for (std::size_t j = 0; j < lower.size(); ++j) {
    if (x[j] < lower[j] || x[j] > upper[j]) return 0;
  }
  return 1;
}

int StumpConcept::Label(std::span<const double> x) const {
  return sign * (x[axis] - threshold) >= 0 ? 1 : 0;
}

}  // namespace perp
