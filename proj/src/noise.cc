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

#include "perp/noise.h"

#include <cmath>
#include <string>
#include <utility>

#include "perp/errors.h"

namespace perp {

PrivacyParams PrivacyParams::Make(double epsilon, double delta) {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw ParameterError("epsilon must be positive, got " +
                         std::to_string(epsilon));
  }
  if (!(delta > 0 && delta < 1)) {
    throw ParameterError("delta must be in (0,1), got " +
                         std::to_string(delta));
  }
  return PrivacyParams{epsilon, delta};
}

NoiseSource::NoiseSource(NoiseMode mode, std::uint64_t seed,
                         std::vector<double> script)
    : mode_(mode), seed_(seed), engine_(seed), script_(std::move(script)) {}

NoiseSource NoiseSource::Seeded(std::uint64_t seed) {
  return NoiseSource(NoiseMode::kSeededRandom, seed, {});
}

NoiseSource NoiseSource::Zero() { return NoiseSource(NoiseMode::kZero, 0, {}); }

NoiseSource NoiseSource::Scripted(std::vector<double> script) {
  return NoiseSource(NoiseMode::kScripted, 0, std::move(script));
}

double NoiseSource::NextScripted() {
  if (cursor_ >= script_.size()) {
    throw StateError("noise script exhausted after " +
                     std::to_string(script_.size()) + " draws");
  }
  return script_[cursor_++];
}

double NoiseSource::Laplace(double scale) {
  if (!(scale > 0) || !std::isfinite(scale)) {
    throw ParameterError("Laplace scale must be positive, got " +
                         std::to_string(scale));
  }
  ++draws_;
  switch (mode_) {
    case NoiseMode::kZero:
      return 0.0;
    case NoiseMode::kScripted:
      return NextScripted();
    case NoiseMode::kSeededRandom:
      break;
  }
  // Inverse CDF on u in (-1/2, 1/2).
  double u = std::generate_canonical<double, 53>(engine_) - 0.5;
  while (u == -0.5) u = std::generate_canonical<double, 53>(engine_) - 0.5;
  const double magnitude = -scale * std::log1p(-2.0 * std::abs(u));
  return u < 0 ? -magnitude : magnitude;
}

std::int64_t NoiseSource::Geometric(double p) {
  if (!(p > 0 && p <= 1)) {
    throw ParameterError("geometric parameter must be in (0,1], got " +
                         std::to_string(p));
  }
  ++draws_;
  switch (mode_) {
    case NoiseMode::kZero:
      return 0;
    case NoiseMode::kScripted: {
      const double v = NextScripted();
      if (v < 0 || v != std::floor(v)) {
        throw ParameterError("scripted geometric draw must be a nonnegative "
                             "integer, got " + std::to_string(v));
      }
      return static_cast<std::int64_t>(v);
    }
    case NoiseMode::kSeededRandom:
      break;
  }
  if (p == 1.0) return 0;
  std::geometric_distribution<std::int64_t> dist(p);
  return dist(engine_);
}

double NoiseSource::Uniform() {
  ++draws_;
  switch (mode_) {
    case NoiseMode::kZero:
      throw StateError("uniform draws are not defined in zero-noise mode");
    case NoiseMode::kScripted: {
      const double v = NextScripted();
      if (!(v >= 0 && v < 1)) {
        throw ParameterError("scripted uniform draw must be in [0,1)");
      }
      return v;
    }
    case NoiseMode::kSeededRandom:
      break;
  }
  return std::generate_canonical<double, 53>(engine_);
}

double SampleLaplace(NoiseSource& source, double scale) {
  return source.Laplace(scale);
}

std::int64_t SampleGeometric(NoiseSource& source, double p) {
  return source.Geometric(p);
}

double LaplaceTail(double scale, double prob) {
  if (!(scale > 0)) {
    throw ParameterError("Laplace scale must be positive");
  }
  if (!(prob > 0 && prob <= 1)) {
    throw ParameterError("tail probability must be in (0,1]");
  }
  return scale * std::log(1.0 / prob);
}

std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace perp
