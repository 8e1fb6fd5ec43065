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

#include "cli.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "perp/config.h"
#include "perp/errors.h"
#include "perp/harness/epsilon_audit.h"
#include "perp/harness/leakage.h"
#include "perp/harness/trial.h"
#include "perp/phase_schedule.h"
#include "perp/trace.h"

namespace perp::cli {
namespace {

namespace fs = std::filesystem;

// Maps library exceptions to exit codes.
int Guard(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kInfeasible;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternal;
  }
}

std::string Num(double v, const char* fmt = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

}  // namespace

int CmdRun(const std::string& config_path, std::optional<std::uint64_t> seed,
           std::optional<int> parallel, std::ostream& out, std::ostream& err) {
  return Guard(err, [&]() {
    ExperimentConfig config = LoadConfig(config_path);
    if (seed) config.seed = seed;
    if (parallel) config.parallel = *parallel;
    if (!config.seed) {
      config.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) |
                    std::random_device{}();
    }
    if (const char* dir = std::getenv(kOutputDirEnv); dir && *dir) {
      config.output.directory = dir;
    }
    config.Validate();
    const fs::path dir(config.output.directory);
    fs::create_directories(dir);
    {
      // The effective config, seed included, so the run can be repeated.
      std::ofstream cf(dir / "config.json");
      cf << SerializeConfig(config);
    }
    harness::TrialOptions options;
    options.keep_rounds = config.output.write_traces;
    const auto traces =
        harness::RunTrials(config, *config.seed, config.parallel, options);
    if (config.output.write_traces) {
      for (const auto& t : traces) {
        std::ofstream tf(dir / ("trace_" + std::to_string(t.summary.trial) +
                                ".jsonl"));
        WriteTrace(tf, config, t);
      }
    }
    std::ofstream sf(dir / "summary.tsv");
    WriteSummary(sf, traces);
    std::int64_t over = 0;
    for (const auto& t : traces) {
      if (t.summary.max_error > config.params.alpha) ++over;
    }
    out << "seed\t" << *config.seed << '\n'
        << "trials\t" << traces.size() << '\n'
        << "trials_over_alpha\t" << over << '\n'
        << "output\t" << dir.string() << '\n';
    return kOk;
  });
}

int CmdLeakage(double delta, std::int64_t horizon, std::int64_t trials,
               std::uint64_t seed, std::ostream& out, std::ostream& err) {
  return Guard(err, [&]() {
    const auto r = harness::LeakageDemo(delta, horizon, trials, seed);
    out << "delta\t" << Num(delta) << '\n'
        << "horizon\t" << horizon << '\n'
        << "trials\t" << trials << '\n'
        << "success_rate\t" << Num(r.rate, "%.6f") << '\n'
        << "analytic\t" << Num(r.analytic, "%.6f") << '\n';
    return kOk;
  });
}

int CmdAudit(const AuditArgs& a, std::ostream& out, std::ostream& err) {
  return Guard(err, [&]() {
    if (a.trials < 1) throw ParameterError("trials must be >= 1");
    harness::AuditReport r;
    if (a.mechanism == "randomized-response-calibration") {
      r = harness::AuditRandomizedResponse(a.epsilon.value_or(std::log(3.0)),
                                           a.trials, a.seed, a.same_input);
    } else if (a.mechanism == "stopper") {
      const auto p = PrivacyParams::Make(a.epsilon.value_or(1.0), a.delta);
      r = harness::AuditStopper(p, a.threshold, a.trials, a.seed,
                                a.same_input);
    } else if (a.mechanism == "between-thresholds") {
      const auto p = PrivacyParams::Make(a.epsilon.value_or(1.0), a.delta);
      const std::int64_t k = a.budget.value_or(static_cast<std::int64_t>(
          std::ceil(4.0 * std::log(2.0 / p.delta))));
      const double gap =
          16.0 / p.epsilon * std::sqrt(static_cast<double>(k) *
                                       std::log(2.0 / p.delta));
      r = harness::AuditBetweenThresholds(p, k, a.t_low,
                                          a.t_high.value_or(a.t_low + gap),
                                          a.trials, a.seed, a.same_input);
    } else {
      err << "usage error: unknown mechanism '" << a.mechanism
          << "' (expected stopper, between-thresholds or "
             "randomized-response-calibration)\n";
      return static_cast<int>(kUsage);
    }
    const auto& e = r.estimate;
    out << "mechanism\t" << r.mechanism << '\n'
        << "configured_epsilon\t" << Num(r.configured_epsilon) << '\n'
        << "per_query_bound\t" << Num(r.per_query_bound) << '\n'
        << "trials\t" << e.trials << '\n'
        << "epsilon_hat\t" << Num(e.epsilon, "%.6f") << '\n'
        << "ci_lower\t" << Num(e.lower, "%.6f") << '\n'
        << "ci_upper\t" << Num(e.upper, "%.6f") << '\n'
        << "event\t" << e.event << '\n';
    for (const auto& n : e.notes) out << "note\t" << n << '\n';
    return static_cast<int>(kOk);
  });
}

int CmdCheckParams(const std::string& config_path, int phases,
                   std::ostream& out, std::ostream& err) {
  return Guard(err, [&]() {
    if (phases < 1 || phases > PhaseSchedule::kMaxResolvedPhase) {
      throw ParameterError("--phases must be in [1, " +
                           std::to_string(PhaseSchedule::kMaxResolvedPhase) +
                           "]");
    }
    const ExperimentConfig config = LoadConfig(config_path);
    const GlobalParams g = ScheduleParams(config);
    const PhaseSchedule s = PhaseSchedule::Resolve(g, config.resolver);
    out << "phase\talpha_p\tbeta_p\tdelta_p\tm_p\tk_p\tt_p\tDelta_p\tL_p\n";
    for (int p = 1; p <= phases; ++p) {
      const PhaseParams& q = s.at(p);
      out << p << '\t' << Num(q.alpha) << '\t' << Num(q.beta) << '\t'
          << Num(q.delta) << '\t' << q.m << '\t' << q.k << '\t'
          << Num(q.steps, "%.0f") << '\t' << Num(q.noise_bound) << '\t'
          << Num(q.polylog) << '\n';
    }
    bool all_ok = true;
    out << "\nphase\tcheck\tlhs\trhs\tslack\tok\n";
    for (int p = 1; p <= phases; ++p) {
      const PhaseParams* next = p < s.max_phase() ? &s.at(p + 1) : nullptr;
      for (const auto& c : CheckPhase(g, s.at(p), next)) {
        all_ok = all_ok && c.ok();
        out << p << '\t' << c.name << '\t' << Num(c.lhs) << '\t'
            << Num(c.rhs) << '\t' << Num(c.slack()) << '\t'
            << (c.ok() ? "yes" : "NO") << '\n';
      }
    }
    const double budget = s.BudgetSum(phases);
    out << "\nbudget_sum\t" << Num(budget, "%.9e") << '\n'
        << "delta_star\t" << Num(g.delta_star, "%.9e") << '\n'
        << "budget_ok\t" << (budget <= g.delta_star ? "yes" : "NO") << '\n'
        << "required_n\t" << RequiredSampleSize(g, s) << '\n'
        << "all_checks_ok\t" << (all_ok ? "yes" : "NO") << '\n';
    return all_ok && budget <= g.delta_star ? static_cast<int>(kOk)
                                            : static_cast<int>(kInfeasible);
  });
}

int Main(const std::vector<std::string>& args, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Private everlasting robust prediction simulator", "perp"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> parallel;
  auto* run = app.add_subcommand("run", "Run the configured trials");
  run->add_option("--config", config_path, "Config file (JSON)")->required();
  run->add_option("--seed", seed, "Experiment seed");
  run->add_option("--parallel", parallel, "Worker threads");

  double delta = 0;
  std::int64_t horizon = 0;
  std::int64_t trials = 0;
  std::uint64_t leak_seed = 1;
  auto* leak = app.add_subcommand("leakage", "Leakage attack demo");
  leak->add_option("--delta", delta)->required();
  leak->add_option("--horizon", horizon)->required();
  leak->add_option("--trials", trials)->required();
  leak->add_option("--seed", leak_seed);

  AuditArgs audit_args;
  auto* audit = app.add_subcommand("audit", "Empirical epsilon audit");
  audit->add_option("--mechanism", audit_args.mechanism)->required();
  audit->add_option("--epsilon", audit_args.epsilon);
  audit->add_option("--delta", audit_args.delta);
  audit->add_option("--threshold", audit_args.threshold);
  audit->add_option("--budget", audit_args.budget);
  audit->add_option("--t-low", audit_args.t_low);
  audit->add_option("--t-high", audit_args.t_high);
  audit->add_option("--trials", audit_args.trials);
  audit->add_option("--seed", audit_args.seed);
  audit->add_flag("--same-input", audit_args.same_input,
                  "Audit D against itself");

  int phases = 1;
  auto* check = app.add_subcommand("check-params", "Feasibility report");
  check->add_option("--config", config_path)->required();
  check->add_option("--phases", phases)->required();

  std::vector<std::string> rev(args.begin() + (args.empty() ? 0 : 1),
                               args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << app.help();
    return kUsage;
  }
  if (run->parsed()) return CmdRun(config_path, seed, parallel, out, err);
  if (leak->parsed()) {
    return CmdLeakage(delta, horizon, trials, leak_seed, out, err);
  }
  if (audit->parsed()) return CmdAudit(audit_args, out, err);
  if (check->parsed()) return CmdCheckParams(config_path, phases, out, err);
  return kUsage;
}

}  // namespace perp::cli
