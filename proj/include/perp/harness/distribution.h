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

#ifndef PERP_HARNESS_DISTRIBUTION_H_
#define PERP_HARNESS_DISTRIBUTION_H_

#include <cstddef>
#include <random>
#include <vector>

#include "perp/point.h"

namespace perp::harness {

struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  double Volume() const;
};

// One coordinate of an axis-product distribution: uniform on [a, b] or
// normal with mean a and standard deviation b.
struct AxisLaw {
  enum class Kind { kUniform, kNormal };
  Kind kind = Kind::kUniform;
  double a = 0;
  double b = 1;

  double Cdf(double v) const;
};

// Query distribution over R^d.
class Distribution {
 public:
  enum class Kind { kUniformBox, kAxisProduct, kFiniteMixture };

  static Distribution UniformBox(std::vector<double> lower,
                                 std::vector<double> upper);
  static Distribution AxisProduct(std::vector<AxisLaw> axes);
  // Mixture of uniform boxes; weights must sum to 1.
  static Distribution FiniteMixture(std::vector<double> weights,
                                    std::vector<Box> components);

  Kind kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  // Uniform-box parameters (kUniformBox only).
  const Box& box() const;
  const std::vector<AxisLaw>& axes() const { return axes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<Box>& components() const { return components_; }

  std::vector<double> Sample(std::mt19937_64& rng) const;
  // Exact probability mass of the closed rectangle.
  double Mass(const RectConcept& rect) const;

 private:
  Kind kind_ = Kind::kUniformBox;
  std::size_t dim_ = 0;
  std::vector<AxisLaw> axes_;
  std::vector<double> weights_;
  std::vector<Box> components_;
};

const char* ToString(Distribution::Kind kind);

}  // namespace perp::harness

#endif  // PERP_HARNESS_DISTRIBUTION_H_
