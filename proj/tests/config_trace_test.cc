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

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "json.hpp"
#include "perp/config.h"
#include "perp/errors.h"
#include "perp/harness/trial.h"
#include "perp/trace.h"

namespace perp {
namespace {

using nlohmann::json;

const char* kRectConfig = R"({
  "oracle": "rectangles",
  "params": {"d": 2, "epsilon": 2000, "delta_star": 0.1, "alpha": 0.2,
             "beta": 0.1, "gamma": 0.5},
  "distribution": {"kind": "uniform-box", "lower": [0, 0], "upper": [1, 1]},
  "concept": {"kind": "rectangle", "lower": [0.2, 0.2], "upper": [0.8, 0.8]},
  "adversary": {"strategy": "boundary-probe", "band": 0.01},
  "horizon": {"rounds": 500},
  "probes": 500,
  "trials": 2,
  "seed": 42
})";

const char* kStumpConfig = R"({
  "oracle": "stumps",
  "params": {"d": 3, "epsilon": 2, "delta_star": 0.1, "alpha": 0.2,
             "beta": 0.1, "gamma": 1},
  "distribution": {"kind": "axis-product",
                   "axes": [{"law": "uniform", "lower": 0, "upper": 1},
                            {"law": "normal", "mean": 0.5, "stddev": 0.1},
                            {"law": "uniform", "lower": -1, "upper": 1}]},
  "concept": {"kind": "stump", "axis": 2, "sign": -1, "threshold": 0.0},
  "adversary": {"strategy": "fixed-point", "point": [0.5, 0.5, 0.5]},
  "horizon": {"rounds": 300},
  "sample_size": 2000,
  "probes": 300,
  "noise": "zero",
  "inner_schedule_epsilon": 2000,
  "seed": 3
})";

std::string ErrorOf(const std::string& text) {
  try {
    ParseConfig(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(ConfigTest, ParsesRectangles) {
  const auto c = ParseConfig(kRectConfig);
  EXPECT_EQ(c.oracle, OracleKind::kRectangles);
  EXPECT_EQ(c.params.d, 2u);
  EXPECT_EQ(c.params.epsilon, 2000);
  EXPECT_EQ(c.adversary.gamma, 0.5);
  EXPECT_EQ(c.adversary.strategy, harness::Strategy::kBoundaryProbe);
  EXPECT_EQ(c.adversary.band, 0.01);
  EXPECT_EQ(*c.horizon_rounds, 500u);
  EXPECT_EQ(*c.seed, 42u);
  EXPECT_EQ(std::get<RectConcept>(c.target).upper[1], 0.8);
}

TEST(ConfigTest, ParsesStumps) {
  const auto c = ParseConfig(kStumpConfig);
  EXPECT_EQ(c.oracle, OracleKind::kStumps);
  EXPECT_EQ(c.noise, NoiseMode::kZero);
  EXPECT_EQ(c.distribution.kind(),
            harness::Distribution::Kind::kAxisProduct);
  const auto& s = std::get<StumpConcept>(c.target);
  EXPECT_EQ(s.axis, 2u);
  EXPECT_EQ(s.sign, -1);
  EXPECT_EQ(*c.inner_schedule_epsilon, 2000);
  const auto g = ScheduleParams(c);
  EXPECT_EQ(g.d, 1u);
  EXPECT_EQ(g.epsilon, 2000);
  EXPECT_EQ(g.alpha, 0.1);
}

TEST(ConfigTest, RoundTripIsCanonical) {
  for (const char* text : {kRectConfig, kStumpConfig}) {
    const auto once = SerializeConfig(ParseConfig(text));
    const auto twice = SerializeConfig(ParseConfig(once));
    EXPECT_EQ(once, twice);
  }
}

TEST(ConfigTest, ZeroGammaNamesTheField) {
  auto j = json::parse(kRectConfig);
  j["params"]["gamma"] = 0;
  const auto msg = ErrorOf(j.dump());
  EXPECT_NE(msg.find("gamma"), std::string::npos) << msg;
  EXPECT_NE(msg.find("γ must be in (0,1]"), std::string::npos) << msg;
}

TEST(ConfigTest, RejectsUnknownKeys) {
  auto j = json::parse(kRectConfig);
  j["params"]["epsilo"] = 1;
  EXPECT_NE(ErrorOf(j.dump()).find("epsilo"), std::string::npos);
  j = json::parse(kRectConfig);
  j["colour"] = "blue";
  EXPECT_NE(ErrorOf(j.dump()).find("colour"), std::string::npos);
}

TEST(ConfigTest, RejectsMalformedValues) {
  EXPECT_NE(ErrorOf("{"), "");
  EXPECT_NE(ErrorOf(R"({"params": {"d": 0}})"), "");
  EXPECT_NE(ErrorOf(R"({"oracle": "circles"})"), "");
  EXPECT_NE(ErrorOf(R"({"noise": "loud"})"), "");
  auto j = json::parse(kRectConfig);
  j["concept"]["lower"] = {0.2};
  EXPECT_NE(ErrorOf(j.dump()), "");
  j = json::parse(kRectConfig);
  j["horizon"] = {{"phases", 1}, {"rounds", 4}};
  EXPECT_NE(ErrorOf(j.dump()), "");
}

TEST(ConfigTest, LoadMissingFile) {
  EXPECT_THROW(LoadConfig("/nonexistent/perp.json"), ConfigError);
}

TEST(TraceTest, EveryLineMatchesSchema) {
  for (const char* text : {kRectConfig, kStumpConfig}) {
    const auto c = ParseConfig(text);
    const auto t = harness::RunTrial(c, 0, *c.seed);
    std::ostringstream out;
    WriteTrace(out, c, t);
    std::istringstream in(out.str());
    std::string line;
    std::uint64_t expected_round = 0;
    while (std::getline(in, line)) {
      const auto problems = ValidateTraceLine(line);
      EXPECT_TRUE(problems.empty()) << line << "\n" << problems.front();
      EXPECT_EQ(json::parse(line).at("round"), expected_round);
      ++expected_round;
    }
    EXPECT_EQ(expected_round, t.summary.rounds + 1);
  }
}

TEST(TraceTest, StumpHeaderCarriesSelection) {
  const auto c = ParseConfig(kStumpConfig);
  const auto t = harness::RunTrial(c, 0, *c.seed);
  const auto h = json::parse(TraceHeaderLine(c, t));
  EXPECT_EQ(h.at("probe_mode"), "noise-free-center");
  EXPECT_EQ(h.at("selected_axis"), 2);
  EXPECT_EQ(h.at("selected_sign"), -1);
  EXPECT_TRUE(h.contains("noisy_positives"));
}

TEST(TraceTest, ValidatorFlagsProblems) {
  EXPECT_FALSE(ValidateTraceLine("nope").empty());
  EXPECT_FALSE(ValidateTraceLine("[]").empty());
  EXPECT_FALSE(
      ValidateTraceLine(R"({"schema_version":99,"trial":0,"round":0,)"
                        R"("kind":"header"})")
          .empty());
  EXPECT_FALSE(ValidateTraceLine(R"({"schema_version":1,"trial":0,"round":1,)"
                                 R"("kind":"round"})")
                   .empty());
}

TEST(TraceTest, SummaryIsSortedAndFixedWidth) {
  const auto c = ParseConfig(kRectConfig);
  harness::TrialOptions options;
  options.keep_rounds = false;
  auto traces = harness::RunTrials(c, *c.seed, 2, options);
  std::swap(traces[0], traces[1]);
  std::ostringstream out;
  WriteSummary(out, traces);
  std::istringstream in(out.str());
  std::string header, row0, row1;
  std::getline(in, header);
  std::getline(in, row0);
  std::getline(in, row1);
  EXPECT_EQ(header.substr(0, 10), "trial\tseed");
  EXPECT_EQ(row0.substr(0, 2), "0\t");
  EXPECT_EQ(row1.substr(0, 2), "1\t");
  EXPECT_NE(row0.find("\t-\t-\t-"), std::string::npos);
  const auto cols = SummaryColumns();
  EXPECT_EQ(std::count(row0.begin(), row0.end(), '\t') + 1,
            static_cast<long>(cols.size()));
}

}  // namespace
}  // namespace perp
