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

#include "perp/trace.h"

#include <algorithm>
#include <cstdio>
#include <map>

#include "json.hpp"
#include "perp/harness/adversary.h"

namespace perp {
namespace {

using nlohmann::json;

json Common(std::uint64_t trial, std::uint64_t round, const char* kind) {
  return json{{"schema_version", kTraceSchemaVersion},
              {"trial", trial},
              {"round", round},
              {"kind", kind}};
}

std::string Fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string Sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

}  // namespace

std::string TraceHeaderLine(const ExperimentConfig& config,
                            const harness::TrialTrace& trace) {
  const auto& s = trace.summary;
  json j = Common(s.trial, 0, "header");
  j["seed"] = s.seed;
  j["oracle"] = s.oracle;
  j["probe_mode"] = harness::kProbeMode;
  j["probes"] = config.probes;
  j["sample_size"] = s.sample_size;
  j["horizon"] = s.rounds;
  j["params"] = {{"d", config.params.d},
                 {"epsilon", config.params.epsilon},
                 {"delta_star", config.params.delta_star},
                 {"alpha", config.params.alpha},
                 {"beta", config.params.beta},
                 {"gamma", config.params.gamma}};
  j["adversary"] = harness::ToString(config.adversary.strategy);
  if (s.selected) {
    j["selected_axis"] = s.selected->axis;
    j["selected_sign"] = s.selected->sign;
    j["noisy_positives"] = *s.noisy_positives;
  }
  return j.dump();
}

std::string TraceRoundLine(const harness::TraceRound& r, std::uint64_t trial) {
  const RoundRecord& rec = r.record;
  json j = Common(trial, rec.round, "round");
  j["phase"] = rec.phase;
  j["query"] = rec.query ? json(rec.query->x) : json(nullptr);
  j["in_distribution"] = r.in_distribution;
  j["prediction"] = rec.prediction ? json(*rec.prediction) : json(nullptr);
  j["truth"] = r.truth ? json(*r.truth) : json(nullptr);
  j["appended"] = rec.appended;
  json answers = json::array();
  for (const auto& a : rec.answers) {
    answers.push_back({{"handle", a.handle.Name()},
                       {"stopping", a.stopping},
                       {"answer", a.answer}});
  }
  j["answers"] = answers;
  json events = json::array();
  for (const auto& e : rec.events) events.push_back(e.ToString());
  j["events"] = events;
  j["accumulated"] = rec.accumulated;
  j["pending"] = rec.pending;
  j["error"] = r.error;
  j["reprobed"] = r.reprobed;
  j["one_sided_ok"] = r.one_sided_ok;
  j["stripes_ok"] = r.stripes_ok ? json(*r.stripes_ok) : json(nullptr);
  return j.dump();
}

void WriteTrace(std::ostream& out, const ExperimentConfig& config,
                const harness::TrialTrace& trace) {
  out << TraceHeaderLine(config, trace) << '\n';
  for (const auto& r : trace.rounds) {
    out << TraceRoundLine(r, trace.summary.trial) << '\n';
  }
}

std::vector<std::string> SummaryColumns() {
  return {"trial",          "seed",
          "oracle",         "rounds",
          "final_phase",    "sample_size",
          "initial_error",  "max_error",
          "final_error",    "halts",
          "reexecutions",   "underfills",
          "budget_sum",     "delta_star",
          "budget_ok",      "noise_bounded",
          "one_sided_violations", "one_sided_violations_bounded",
          "stripe_rounds_bounded", "stripe_violations_bounded",
          "in_distribution_rounds", "gamma_mixing_ok",
          "probe_isolation_ok", "selected_axis",
          "selected_sign",  "noisy_positives"};
}

void WriteSummary(std::ostream& out,
                  const std::vector<harness::TrialTrace>& traces) {
  const auto cols = SummaryColumns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out << (i ? "\t" : "") << cols[i];
  }
  out << '\n';
  std::vector<const harness::TrialSummary*> rows;
  for (const auto& t : traces) rows.push_back(&t.summary);
  std::sort(rows.begin(), rows.end(),
            [](const auto* a, const auto* b) { return a->trial < b->trial; });
  for (const auto* s : rows) {
    out << s->trial << '\t' << s->seed << '\t' << s->oracle << '\t'
        << s->rounds << '\t' << s->final_phase << '\t' << s->sample_size
        << '\t' << Fixed(s->initial_error) << '\t' << Fixed(s->max_error)
        << '\t' << Fixed(s->final_error) << '\t' << s->halts << '\t'
        << s->reexecutions << '\t' << s->underfills << '\t'
        << Sci(s->budget_sum) << '\t' << Sci(s->delta_star) << '\t'
        << s->budget_ok << '\t' << s->noise_bounded << '\t'
        << s->one_sided_violations << '\t' << s->one_sided_violations_bounded
        << '\t' << s->stripe_rounds_bounded << '\t'
        << s->stripe_violations_bounded << '\t' << s->in_distribution_rounds
        << '\t' << s->gamma_mixing_ok << '\t' << s->probe_isolation_ok << '\t';
    if (s->selected) {
      out << s->selected->axis << '\t' << s->selected->sign << '\t'
          << *s->noisy_positives;
    } else {
      out << "-\t-\t-";
    }
    out << '\n';
  }
}

std::vector<std::string> ValidateTraceLine(const std::string& line) {
  std::vector<std::string> problems;
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error&) {
    return {"not valid JSON"};
  }
  if (!j.is_object()) return {"record must be an object"};
  auto need = [&](const char* key, auto pred, const char* what) {
    if (!j.contains(key) || !pred(j.at(key))) {
      problems.push_back(std::string(key) + " must be " + what);
    }
  };
  auto is_uint = [](const json& v) { return v.is_number_unsigned(); };
  auto is_bool = [](const json& v) { return v.is_boolean(); };
  auto is_str = [](const json& v) { return v.is_string(); };
  auto is_arr = [](const json& v) { return v.is_array(); };
  auto is_num = [](const json& v) { return v.is_number(); };
  auto is_bit_or_null = [](const json& v) {
    return v.is_null() || (v.is_number_integer() && (v == 0 || v == 1));
  };
  need("schema_version",
       [](const json& v) { return v == kTraceSchemaVersion; },
       "the current schema version");
  need("trial", is_uint, "a nonnegative integer");
  need("round", is_uint, "a nonnegative integer");
  need("kind", is_str, "a string");
  if (!problems.empty()) return problems;
  const std::string kind = j.at("kind");
  if (kind == "header") {
    if (j.at("round") != 0) problems.push_back("header round must be 0");
    need("probe_mode", is_str, "a string");
    need("oracle", is_str, "a string");
    need("seed", is_uint, "a nonnegative integer");
    need("sample_size", is_num, "a number");
  } else if (kind == "round") {
    if (j.at("round") == 0) problems.push_back("round records start at 1");
    need("phase", is_uint, "a positive integer");
    need("query",
         [](const json& v) { return v.is_null() || v.is_array(); },
         "an array or null");
    need("in_distribution", is_bool, "a boolean");
    need("prediction", is_bit_or_null, "0, 1 or null");
    need("truth", is_bit_or_null, "0, 1 or null");
    need("appended", is_bool, "a boolean");
    need("answers", is_arr, "an array");
    need("events", is_arr, "an array");
    need("accumulated", is_uint, "a nonnegative integer");
    need("pending", is_arr, "an array");
    need("error", is_num, "a number");
    need("reprobed", is_bool, "a boolean");
    need("one_sided_ok", is_bool, "a boolean");
    need("stripes_ok",
         [](const json& v) { return v.is_null() || v.is_boolean(); },
         "a boolean or null");
  } else {
    problems.push_back("kind must be header or round");
  }
  return problems;
}

}  // namespace perp
