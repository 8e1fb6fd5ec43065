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

#ifndef PERP_POINT_H_
#define PERP_POINT_H_

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace perp {

// A query point in R^d. `aux` holds one auxiliary uniform [0,1] coordinate
// per axis; it is used only to break ties between equal coordinates, which
// turns atoms of the data distribution into measure-zero events. An empty
// `aux` means "not augmented yet".
struct Point {
  std::vector<double> x;
  std::vector<double> aux;

  std::size_t dim() const { return x.size(); }

  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

// Strict comparison of the augmented j-th coordinates (x[j], aux[j]).
// Returns true iff a is above b on axis j.
bool AxisAbove(const Point& a, const Point& b, std::size_t axis);

struct LabeledPoint {
  Point point;
  int label = 0;

  friend bool operator==(const LabeledPoint&, const LabeledPoint&) = default;
  friend auto operator<=>(const LabeledPoint&,
                          const LabeledPoint&) = default;
};

// Throws InputError unless every label is 0 or 1 and all points share
// dimension `dim`.
void ValidateSample(std::span<const LabeledPoint> sample, std::size_t dim);

// rec_w(x) = 1 iff lower[j] <= x[j] <= upper[j] for every axis j.
struct RectConcept {
  std::vector<double> lower;
  std::vector<double> upper;

  static RectConcept Make(std::vector<double> lower, std::vector<double> upper);

  std::size_t dim() const { return lower.size(); }
  int Label(std::span<const double> x) const;
};

// decision_{j,sigma,t}(x) = 1 iff sigma * (x[j] - t) >= 0.
struct StumpConcept {
  std::size_t axis = 0;
  int sign = 1;
  double threshold = 0;

  int Label(std::span<const double> x) const;
};

}  // namespace perp

#endif  // PERP_POINT_H_
