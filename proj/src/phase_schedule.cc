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

#include "perp/phase_schedule.h"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <utility>

#include "perp/errors.h"

namespace perp {
namespace {

// Phases solved beyond kMaxResolvedPhase so that the top guess for m_{p+1}
// does not leak into served phases.
constexpr int kResolverWindow = PhaseSchedule::kMaxResolvedPhase + 8;

double Pow2(int p) { return std::ldexp(1.0, p); }

// Solves phase p given m_{p+1}. t_p is doubled until the threshold gap
// required by ChallengeBT is met.
PhaseParams SolvePhase(const GlobalParams& g, int p, std::int64_t m_next,
                       const ResolverConstants& c) {
  const double d = static_cast<double>(g.d);
  PhaseParams out;
  out.phase = p;
  out.alpha = g.alpha / Pow2(p);
  out.beta = g.beta / Pow2(p);

  const double t_chernoff =
      8.0 * d / (g.gamma * out.alpha) * std::log(2.0 * d / out.beta);
  const double t_refill =
      4.0 * d / (g.gamma * out.alpha) * static_cast<double>(m_next);
  double steps = std::ceil(c.c_t * std::max(t_chernoff, t_refill));

  const double delta_numerator = c.c_delta * g.delta_star * g.gamma *
                                 g.alpha * g.epsilon * g.epsilon * g.beta;
  const double delta_denominator = d * std::pow(8.0, p);

  for (int iter = 0; iter < c.max_iterations; ++iter) {
    const double by_formula = delta_numerator / (delta_denominator * c.polylog);
    const double by_budget = g.delta_star / (Pow2(p) * steps) * (1 - 1e-12);
    const double delta = std::min(by_formula, by_budget);
    const double ln_inv_delta = std::log(1.0 / delta);

    const double a = 4.0 * ln_inv_delta / g.epsilon *
                     std::sqrt(std::log(2.0 * d / delta)) *
                     std::log(8.0 * d * steps / out.beta);
    const double m_rsc = ln_inv_delta * std::log(4.0 * d / out.beta) / g.epsilon;
    const double m_budget = 2.0 * std::log(4.0 * d / delta);
    // m >= 4 Delta = 4 a sqrt(2m)  <=>  m >= 32 a^2.
    const double m_noise = 32.0 * a * a * (1.0 + 1e-12);
    const double m_real =
        c.c_m * std::max({1.0, m_rsc, m_budget, m_noise});
    if (!std::isfinite(m_real) || m_real > 9.0e18) {
      throw InfeasibleError("phase " + std::to_string(p) +
                            ": m_p overflows (" + std::to_string(m_real) +
                            ")");
    }
    out.delta = delta;
    out.polylog = delta_numerator / (delta_denominator * delta);
    out.m = static_cast<std::int64_t>(std::ceil(m_real));
    out.k = 2 * out.m;
    out.steps = steps;
    out.noise_bound = NoiseBound(g, out.beta, delta, out.k, steps);

    const double gap = 32.0 * ln_inv_delta / g.epsilon *
                       std::sqrt(out.k * std::log(4.0 * d / delta));
    if (out.noise_bound >= gap) return out;
    steps *= 2;
  }
  throw InfeasibleError("phase " + std::to_string(p) +
                        ": resolver did not converge in " +
                        std::to_string(c.max_iterations) +
                        " iterations; violated [Delta_p >= (32 ln(1/delta_p)"
                        "/eps) sqrt(k_p ln(4d/delta_p))]");
}

std::vector<PhaseParams> SolveWindow(const GlobalParams& g,
                                     const ResolverConstants& c) {
  std::vector<PhaseParams> phases(kResolverWindow);
  // Top of the window: treat m_{W+1} ~ m_W and iterate to a fixed point.
  std::int64_t guess = 1;
  PhaseParams top;
  for (int iter = 0; iter < c.max_iterations; ++iter) {
    top = SolvePhase(g, kResolverWindow, guess, c);
    if (top.m <= guess) break;
    guess = top.m;
  }
  phases[kResolverWindow - 1] = top;
  for (int p = kResolverWindow - 1; p >= 1; --p) {
    phases[p - 1] = SolvePhase(g, p, phases[p].m, c);
  }
  return phases;
}

FeasibilityCheck AtLeast(std::string name, double lhs, double rhs) {
  return FeasibilityCheck{std::move(name), lhs, rhs, false};
}

FeasibilityCheck Equal(std::string name, double lhs, double rhs) {
  return FeasibilityCheck{std::move(name), lhs, rhs, true};
}

}  // namespace

void GlobalParams::Validate() const {
  if (d < 1) throw ParameterError("d must be >= 1");
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw ParameterError("epsilon must be positive");
  }
  if (!(delta_star > 0 && delta_star < 1)) {
    throw ParameterError("delta* must be in (0,1)");
  }
  if (!(alpha > 0 && alpha < 1)) throw ParameterError("alpha must be in (0,1)");
  if (!(beta > 0 && beta < 1)) throw ParameterError("beta must be in (0,1)");
  if (!(gamma > 0 && gamma <= 1)) {
    throw ParameterError("γ must be in (0,1]");
  }
}

double FeasibilityCheck::slack() const {
  return equality ? -std::abs(lhs - rhs) : lhs - rhs;
}

bool FeasibilityCheck::ok() const {
  if (equality) {
    return std::abs(lhs - rhs) <=
           1e-9 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
  }
  return lhs >= rhs;
}

double NoiseBound(const GlobalParams& g, double beta_p, double delta_p,
                  double k, double steps) {
  const double d = static_cast<double>(g.d);
  return 4.0 * std::log(1.0 / delta_p) / g.epsilon *
         std::sqrt(k * std::log(2.0 * d / delta_p)) *
         std::log(8.0 * d * steps / beta_p);
}

double GeometricBound(const GlobalParams& g, const PhaseParams& phase) {
  const double d = static_cast<double>(g.d);
  return std::log(1.0 / phase.delta) * std::log(4.0 * d / phase.beta) /
         g.epsilon;
}

PrivacyParams HandlePrivacy(const GlobalParams& g, const PhaseParams& phase) {
  if (!(phase.delta > 0 && phase.delta < 1)) {
    throw ParameterError("delta_p must be in (0,1)");
  }
  return PrivacyParams::Make(g.epsilon / std::log(1.0 / phase.delta),
                             phase.delta / static_cast<double>(g.d));
}

std::vector<FeasibilityCheck> CheckPhase(const GlobalParams& g,
                                         const PhaseParams& phase,
                                         const PhaseParams* next) {
  const double d = static_cast<double>(g.d);
  const double m = static_cast<double>(phase.m);
  const double k = static_cast<double>(phase.k);
  const double ln_inv_delta = std::log(1.0 / phase.delta);
  std::vector<FeasibilityCheck> out;
  out.push_back(Equal("alpha_p = alpha/2^p", phase.alpha,
                      g.alpha / Pow2(phase.phase)));
  out.push_back(
      Equal("beta_p = beta/2^p", phase.beta, g.beta / Pow2(phase.phase)));
  out.push_back(Equal("k_p = 2 m_p", k, 2.0 * m));
  out.push_back(Equal("Delta_p = noise bound", phase.noise_bound,
                      NoiseBound(g, phase.beta, phase.delta, k, phase.steps)));
  out.push_back(AtLeast("m_p >= (1/eps) ln(1/delta_p) ln(4d/beta_p)", m,
                        GeometricBound(g, phase)));
  out.push_back(AtLeast("m_p >= 4 Delta_p", m, 4.0 * phase.noise_bound));
  out.push_back(AtLeast("k_p >= 2 Delta_p", k, 2.0 * phase.noise_bound));
  out.push_back(AtLeast("k_p >= 4 ln(4d/delta_p)", k,
                        4.0 * std::log(4.0 * d / phase.delta)));
  out.push_back(AtLeast(
      "Delta_p >= (32 ln(1/delta_p)/eps) sqrt(k_p ln(4d/delta_p))",
      phase.noise_bound,
      32.0 * ln_inv_delta / g.epsilon *
          std::sqrt(k * std::log(4.0 * d / phase.delta))));
  out.push_back(AtLeast("t_p >= (8d/(gamma alpha_p)) ln(2d/beta_p)",
                        phase.steps,
                        8.0 * d / (g.gamma * phase.alpha) *
                            std::log(2.0 * d / phase.beta)));
  if (next != nullptr) {
    out.push_back(AtLeast("t_p >= (4d/(gamma alpha_p)) m_{p+1}", phase.steps,
                          4.0 * d / (g.gamma * phase.alpha) *
                              static_cast<double>(next->m)));
  }
  out.push_back(AtLeast("delta*/2^p >= t_p delta_p",
                        g.delta_star / Pow2(phase.phase),
                        phase.steps * phase.delta));
  return out;
}

PhaseSchedule PhaseSchedule::Resolve(const GlobalParams& g,
                                     const ResolverConstants& constants) {
  g.Validate();
  PhaseSchedule s;
  s.phases_ = SolveWindow(g, constants);
  s.max_phase_ = kMaxResolvedPhase;
  s.resolved_ = true;
  for (int p = 1; p <= s.max_phase_; ++p) {
    const auto& phase = s.phases_[p - 1];
    for (const auto& check : CheckPhase(g, phase, &s.phases_[p])) {
      if (!check.ok()) {
        std::ostringstream msg;
        msg << "phase " << p << ": violated [" << check.name << "] ("
            << check.lhs << " vs " << check.rhs << ")";
        throw InfeasibleError(msg.str());
      }
    }
  }
  return s;
}

PhaseSchedule PhaseSchedule::Explicit(std::vector<PhaseParams> phases) {
  if (phases.empty()) throw ParameterError("explicit schedule is empty");
  for (std::size_t i = 0; i < phases.size(); ++i) {
    if (phases[i].phase != static_cast<int>(i + 1)) {
      throw ParameterError("explicit schedule phases must be numbered 1..P");
    }
    if (!(phases[i].steps >= 1) || phases[i].m < 0 || phases[i].k < 1) {
      throw ParameterError("explicit schedule phase " + std::to_string(i + 1) +
                           " has invalid m, k or t");
    }
  }
  PhaseSchedule s;
  s.max_phase_ = static_cast<int>(phases.size());
  s.phases_ = std::move(phases);
  return s;
}

const PhaseParams& PhaseSchedule::at(int phase) const {
  if (phase < 1 || phase > max_phase_) {
    throw StateError("phase " + std::to_string(phase) +
                     " outside the schedule (1.." +
                     std::to_string(max_phase_) + ")");
  }
  return phases_[phase - 1];
}

double PhaseSchedule::PhaseEnd(int phase) const {
  double end = 0;
  for (int q = 1; q <= phase; ++q) end += at(q).steps;
  return end;
}

double PhaseSchedule::BudgetSum(int through) const {
  double sum = 0;
  for (int q = 1; q <= through; ++q) sum += at(q).steps * at(q).delta;
  return sum;
}

PhaseParams ResolvePhaseParams(const GlobalParams& g, int phase,
                               const ResolverConstants& constants) {
  if (phase < 1) throw ParameterError("phase index must be >= 1");
  return PhaseSchedule::Resolve(g, constants).at(phase);
}

std::int64_t RequiredSampleSize(const GlobalParams& g,
                                const PhaseSchedule& schedule) {
  const double d = static_cast<double>(g.d);
  const double m1 = static_cast<double>(schedule.at(1).m);
  const double n = std::max(8.0 * d / g.alpha * std::log(2.0 * d / g.beta),
                            4.0 * d / g.alpha * m1);
  return static_cast<std::int64_t>(std::ceil(n));
}

}  // namespace perp
