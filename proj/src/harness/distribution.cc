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

#include "perp/harness/distribution.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "perp/errors.h"

namespace perp::harness {
namespace {

double BoxOverlapFraction(const Box& box, const RectConcept& rect) {
  double frac = 1;
  for (std::size_t j = 0; j < box.lower.size(); ++j) {
    const double width = box.upper[j] - box.lower[j];
    const double lo = std::max(box.lower[j], rect.lower[j]);
    const double hi = std::min(box.upper[j], rect.upper[j]);
    if (hi <= lo) return 0;
    frac *= (hi - lo) / width;
  }
  return frac;
}

void CheckBox(const Box& box) {
  if (box.lower.empty() || box.lower.size() != box.upper.size()) {
    throw ConfigError("box bounds must be nonempty and of equal length");
  }
  for (std::size_t j = 0; j < box.lower.size(); ++j) {
    if (!(box.lower[j] < box.upper[j])) {
      throw ConfigError("box bounds must satisfy lower < upper on axis " +
                        std::to_string(j));
    }
  }
}

}  // namespace

double Box::Volume() const {
  double v = 1;
  for (std::size_t j = 0; j < lower.size(); ++j) v *= upper[j] - lower[j];
  return v;
}

double AxisLaw::Cdf(double v) const {
  if (kind == Kind::kUniform) {
    if (v <= a) return 0;
    if (v >= b) return 1;
    return (v - a) / (b - a);
  }
  return 0.5 * std::erfc(-(v - a) / (b * std::sqrt(2.0)));
}

Distribution Distribution::UniformBox(std::vector<double> lower,
                                      std::vector<double> upper) {
  Distribution d;
  d.kind_ = Kind::kUniformBox;
  Box box{std::move(lower), std::move(upper)};
  CheckBox(box);
  d.dim_ = box.lower.size();
  d.components_.push_back(std::move(box));
  d.weights_ = {1.0};
  return d;
}

Distribution Distribution::AxisProduct(std::vector<AxisLaw> axes) {
  if (axes.empty()) throw ConfigError("axis-product needs at least one axis");
  for (const auto& a : axes) {
    if (a.kind == AxisLaw::Kind::kUniform && !(a.a < a.b)) {
      throw ConfigError("uniform axis needs lower < upper");
    }
    if (a.kind == AxisLaw::Kind::kNormal && !(a.b > 0)) {
      throw ConfigError("normal axis needs stddev > 0");
    }
  }
  Distribution d;
  d.kind_ = Kind::kAxisProduct;
  d.dim_ = axes.size();
  d.axes_ = std::move(axes);
  return d;
}

Distribution Distribution::FiniteMixture(std::vector<double> weights,
                                         std::vector<Box> components) {
  if (weights.empty() || weights.size() != components.size()) {
    throw ConfigError("mixture needs one weight per component");
  }
  for (double w : weights) {
    if (!(w >= 0)) throw ConfigError("mixture weights must be nonnegative");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9) {
    throw ConfigError("mixture weights must sum to 1");
  }
  for (const auto& c : components) CheckBox(c);
  const std::size_t dim = components.front().lower.size();
  for (const auto& c : components) {
    if (c.lower.size() != dim) {
      throw ConfigError("mixture components must share a dimension");
    }
  }
  Distribution d;
  d.kind_ = Kind::kFiniteMixture;
  d.dim_ = dim;
  d.weights_ = std::move(weights);
  d.components_ = std::move(components);
  return d;
}

const Box& Distribution::box() const {
  if (kind_ != Kind::kUniformBox) {
    throw StateError("box() is only defined for uniform-box distributions");
  }
  return components_.front();
}

std::vector<double> Distribution::Sample(std::mt19937_64& rng) const {
  std::vector<double> x(dim_);
  if (kind_ == Kind::kAxisProduct) {
    for (std::size_t j = 0; j < dim_; ++j) {
      const auto& law = axes_[j];
      if (law.kind == AxisLaw::Kind::kUniform) {
        x[j] = std::uniform_real_distribution<double>(law.a, law.b)(rng);
      } else {
        x[j] = std::normal_distribution<double>(law.a, law.b)(rng);
      }
    }
    return x;
  }
  std::size_t c = 0;
  if (components_.size() > 1) {
    c = std::discrete_distribution<std::size_t>(weights_.begin(),
                                                weights_.end())(rng);
  }
  const Box& box = components_[c];
  for (std::size_t j = 0; j < dim_; ++j) {
    x[j] =
        std::uniform_real_distribution<double>(box.lower[j], box.upper[j])(rng);
  }
  return x;
}

double Distribution::Mass(const RectConcept& rect) const {
  if (rect.dim() != dim_) throw InputError("rectangle dimension mismatch");
  if (kind_ == Kind::kAxisProduct) {
    double mass = 1;
    for (std::size_t j = 0; j < dim_; ++j) {
      mass *= axes_[j].Cdf(rect.upper[j]) - axes_[j].Cdf(rect.lower[j]);
    }
    return mass;
  }
  double mass = 0;
  for (std::size_t c = 0; c < components_.size(); ++c) {
    mass += weights_[c] * BoxOverlapFraction(components_[c], rect);
  }
  return mass;
}

const char* ToString(Distribution::Kind kind) {
  switch (kind) {
    case Distribution::Kind::kUniformBox:
      return "uniform-box";
    case Distribution::Kind::kAxisProduct:
      return "axis-product";
    case Distribution::Kind::kFiniteMixture:
      return "finite-mixture";
  }
  return "?";
}

}  // namespace perp::harness
