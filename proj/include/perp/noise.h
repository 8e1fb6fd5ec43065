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

#ifndef PERP_NOISE_H_
#define PERP_NOISE_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace perp {

// (epsilon, delta) pair. Make() enforces epsilon > 0 and 0 < delta < 1.
struct PrivacyParams {
  double epsilon = 1.0;
  double delta = 0.1;

  static PrivacyParams Make(double epsilon, double delta);
};

enum class NoiseMode { kSeededRandom, kZero, kScripted };

// Source of every random draw a mechanism makes.
//
// kSeededRandom is the production mode. kZero returns 0 from every noise
// draw and kScripted replays a fixed list of values in order; both exist so
// that mechanism state machines can be tested step by step.
//
// A NoiseSource is single-owner mutable state. It can be moved between
// threads but must never be shared.
class NoiseSource {
 public:
  static NoiseSource Seeded(std::uint64_t seed);
  static NoiseSource Zero();
  static NoiseSource Scripted(std::vector<double> script);

  NoiseMode mode() const { return mode_; }
  std::uint64_t seed() const { return seed_; }
  // Number of values drawn so far (all kinds).
  std::uint64_t draws() const { return draws_; }
  // Unconsumed script entries (kScripted only).
  std::size_t script_remaining() const { return script_.size() - cursor_; }

  // Zero-mean Laplace with density exp(-|x|/scale) / (2 scale).
  double Laplace(double scale);
  // Pr[k] = p (1-p)^k for k = 0, 1, 2, ...
  std::int64_t Geometric(double p);
  // Uniform on [0, 1). Not available in kZero mode.
  double Uniform();

 private:
  NoiseSource(NoiseMode mode, std::uint64_t seed, std::vector<double> script);

  double NextScripted();

  NoiseMode mode_;
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::vector<double> script_;
  std::size_t cursor_ = 0;
  std::uint64_t draws_ = 0;
};

double SampleLaplace(NoiseSource& source, double scale);
std::int64_t SampleGeometric(NoiseSource& source, double p);

// Magnitude B with Pr[|Lap(scale)| > B] = prob, i.e. scale * ln(1/prob).
// prob = 1 is accepted and gives 0.
double LaplaceTail(double scale, double prob);

// splitmix64 finalizer; used to derive independent per-trial seeds.
std::uint64_t MixSeed(std::uint64_t seed, std::uint64_t stream);

}  // namespace perp

#endif  // PERP_NOISE_H_
