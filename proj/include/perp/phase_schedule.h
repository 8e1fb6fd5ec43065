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

#ifndef PERP_PHASE_SCHEDULE_H_
#define PERP_PHASE_SCHEDULE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "perp/noise.h"

namespace perp {

// User-facing parameters of a rectangle oracle.
struct GlobalParams {
  std::size_t d = 1;
  double epsilon = 1.0;
  double delta_star = 0.1;
  double alpha = 0.2;
  double beta = 0.1;
  double gamma = 1.0;

  // Throws ParameterError naming the first out-of-range field.
  void Validate() const;
};

// Constants hidden by the asymptotic notation of the parameter schedule.
//   delta_p = c_delta * delta* gamma alpha eps^2 beta / (d 8^p L_p), where
//             L_p >= polylog is raised until t_p delta_p <= delta* / 2^p;
//   m_p     = ceil(c_m * smallest value meeting the m_p lower bounds);
//   t_p     = ceil(c_t * smallest value meeting the t_p lower bounds).
// rsc_constant is the O(1) factor reported for the RSC privacy bound.
struct ResolverConstants {
  double c_delta = 1.0;
  double c_m = 1.0;
  double c_t = 1.0;
  double polylog = 1.0;
  double rsc_constant = 1.0;
  int max_iterations = 64;
};

// Resolved constants of one phase. `steps` (t_p) is integral but stored as
// a double because late phases exceed the range of 64-bit integers.
struct PhaseParams {
  int phase = 1;
  double alpha = 0;  // alpha / 2^p
  double beta = 0;   // beta / 2^p
  double delta = 0;  // delta_p
  std::int64_t m = 1;
  std::int64_t k = 2;  // 2 m
  double steps = 1;    // t_p
  double noise_bound = 0;  // Delta_p; thresholds are (Delta_p, 2 Delta_p)
  double polylog = 1;      // L_p actually used
};

struct FeasibilityCheck {
  std::string name;
  double lhs = 0;
  double rhs = 0;
  bool equality = false;

  double slack() const;
  bool ok() const;
};

// Delta_p = (4 ln(1/delta_p) / eps) sqrt(k_p ln(2d/delta_p))
//           * ln(8 d t_p / beta_p).
double NoiseBound(const GlobalParams& g, double beta_p, double delta_p,
                  double k, double steps);

// Bound on the RSC geometric draws of a phase: (1/eps) ln(1/delta_p)
// ln(4d/beta_p).
double GeometricBound(const GlobalParams& g, const PhaseParams& phase);

// Privacy parameters of every ChallengeBT handle in the phase:
// (eps / ln(1/delta_p), delta_p / d).
PrivacyParams HandlePrivacy(const GlobalParams& g, const PhaseParams& phase);

// Every invariant of `phase`; inequalities involving t_p and m_{p+1} are
// included only when `next` is given.
std::vector<FeasibilityCheck> CheckPhase(const GlobalParams& g,
                                         const PhaseParams& phase,
                                         const PhaseParams* next);

class PhaseSchedule {
 public:
  // Highest phase index Resolve() serves.
  static constexpr int kMaxResolvedPhase = 32;

  // Solves all phases up to kMaxResolvedPhase. Throws InfeasibleError if
  // some phase cannot be made to satisfy its inequalities.
  static PhaseSchedule Resolve(const GlobalParams& g,
                               const ResolverConstants& constants = {});
  // Uses the given phases verbatim (phase indices must be 1, 2, ...).
  static PhaseSchedule Explicit(std::vector<PhaseParams> phases);

  const PhaseParams& at(int phase) const;
  int max_phase() const { return max_phase_; }
  bool resolved() const { return resolved_; }
  // Sum of t_q for q <= phase.
  double PhaseEnd(int phase) const;
  // Sum of t_q * delta_q for q <= phase.
  double BudgetSum(int through) const;

 private:
  std::vector<PhaseParams> phases_;
  int max_phase_ = 0;
  bool resolved_ = false;
};

PhaseParams ResolvePhaseParams(const GlobalParams& g, int phase,
                               const ResolverConstants& constants = {});

// Sample size that gives each initial slice its m_1 positive points with
// the same margin the phase steps use: max((8d/alpha) ln(2d/beta),
// (4d/alpha) m_1).
std::int64_t RequiredSampleSize(const GlobalParams& g,
                                 const PhaseSchedule& schedule);

}  // namespace perp

#endif  // PERP_PHASE_SCHEDULE_H_
