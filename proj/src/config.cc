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

#include "perp/config.h"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "json.hpp"
#include "perp/errors.h"

namespace perp {
namespace {

using nlohmann::json;
using harness::AxisLaw;
using harness::Box;
using harness::Distribution;
using harness::Strategy;

// Walks one JSON object, remembering its path for diagnostics and
// rejecting keys nobody asked about.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) Fail(path_, "must be an object");
  }

  ~Reader() = default;

  bool Has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& At(const std::string& key) {
    seen_.insert(key);
    return j_.at(key);
  }

  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  double Number(const std::string& key, double fallback) {
    if (!Has(key)) return fallback;
    const json& v = At(key);
    if (!v.is_number()) Fail(Path(key), "must be a number");
    return v.get<double>();
  }

  std::int64_t Integer(const std::string& key, std::int64_t fallback) {
    if (!Has(key)) return fallback;
    const json& v = At(key);
    if (!v.is_number_integer()) Fail(Path(key), "must be an integer");
    return v.get<std::int64_t>();
  }

  std::string String(const std::string& key, std::string fallback) {
    if (!Has(key)) return fallback;
    const json& v = At(key);
    if (!v.is_string()) Fail(Path(key), "must be a string");
    return v.get<std::string>();
  }

  bool Bool(const std::string& key, bool fallback) {
    if (!Has(key)) return fallback;
    const json& v = At(key);
    if (!v.is_boolean()) Fail(Path(key), "must be a boolean");
    return v.get<bool>();
  }

  std::vector<double> Vector(const std::string& key) {
    if (!Has(key)) Fail(Path(key), "is required");
    return ToVector(At(key), Path(key));
  }

  void Finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) Fail(Path(it.key()), "unknown field");
    }
  }

  [[noreturn]] static void Fail(const std::string& path,
                                const std::string& what) {
    throw ConfigError(path + ": " + what);
  }

  static std::vector<double> ToVector(const json& v, const std::string& path) {
    if (!v.is_array()) Fail(path, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) Fail(path, "must be an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Box ReadBox(const json& j, const std::string& path) {
  Reader r(j, path);
  Box box{r.Vector("lower"), r.Vector("upper")};
  r.Finish();
  return box;
}

Distribution ReadDistribution(const json& j, std::size_t d) {
  Reader r(j, "distribution");
  const std::string kind = r.String("kind", "uniform-box");
  Distribution out = Distribution::UniformBox({0.0}, {1.0});
  if (kind == "uniform-box") {
    std::vector<double> lower(d, 0.0), upper(d, 1.0);
    if (r.Has("lower")) lower = r.Vector("lower");
    if (r.Has("upper")) upper = r.Vector("upper");
    out = Distribution::UniformBox(lower, upper);
  } else if (kind == "axis-product") {
    if (!r.Has("axes") || !r.At("axes").is_array()) {
      Reader::Fail("distribution.axes", "is required");
    }
    std::vector<AxisLaw> axes;
    std::size_t i = 0;
    for (const auto& a : r.At("axes")) {
      const std::string path = "distribution.axes[" + std::to_string(i++) + "]";
      Reader ar(a, path);
      const std::string law = ar.String("law", "uniform");
      AxisLaw ax;
      if (law == "uniform") {
        ax.kind = AxisLaw::Kind::kUniform;
        ax.a = ar.Number("lower", 0.0);
        ax.b = ar.Number("upper", 1.0);
      } else if (law == "normal") {
        ax.kind = AxisLaw::Kind::kNormal;
        ax.a = ar.Number("mean", 0.0);
        ax.b = ar.Number("stddev", 1.0);
      } else {
        Reader::Fail(path + ".law", "must be uniform or normal");
      }
      ar.Finish();
      axes.push_back(ax);
    }
    out = Distribution::AxisProduct(std::move(axes));
  } else if (kind == "finite-mixture") {
    std::vector<double> weights = r.Vector("weights");
    if (!r.Has("components") || !r.At("components").is_array()) {
      Reader::Fail("distribution.components", "is required");
    }
    std::vector<Box> comps;
    std::size_t i = 0;
    for (const auto& c : r.At("components")) {
      comps.push_back(ReadBox(
          c, "distribution.components[" + std::to_string(i++) + "]"));
    }
    out = Distribution::FiniteMixture(std::move(weights), std::move(comps));
  } else {
    Reader::Fail("distribution.kind",
                 "must be uniform-box, axis-product or finite-mixture");
  }
  r.Finish();
  return out;
}

harness::Concept ReadConcept(const json& j, std::size_t d) {
  Reader r(j, "concept");
  const std::string kind = r.String("kind", "rectangle");
  harness::Concept out;
  if (kind == "rectangle") {
    std::vector<double> lower(d, 0.2), upper(d, 0.8);
    if (r.Has("lower")) lower = r.Vector("lower");
    if (r.Has("upper")) upper = r.Vector("upper");
    out = RectConcept{lower, upper};
  } else if (kind == "stump") {
    StumpConcept s;
    const std::int64_t axis = r.Integer("axis", 0);
    if (axis < 0) Reader::Fail("concept.axis", "must be >= 0");
    s.axis = static_cast<std::size_t>(axis);
    s.sign = static_cast<int>(r.Integer("sign", 1));
    s.threshold = r.Number("threshold", 0.5);
    out = s;
  } else {
    Reader::Fail("concept.kind", "must be rectangle or stump");
  }
  r.Finish();
  return out;
}

harness::AdversaryModel ReadAdversary(const json& j) {
  Reader r(j, "adversary");
  harness::AdversaryModel m;
  const std::string s = r.String("strategy", "fixed-point");
  if (s == "fixed-point") {
    m.strategy = Strategy::kFixedPoint;
  } else if (s == "boundary-probe") {
    m.strategy = Strategy::kBoundaryProbe;
  } else if (s == "replay-past-queries") {
    m.strategy = Strategy::kReplay;
  } else if (s == "scripted") {
    m.strategy = Strategy::kScripted;
  } else {
    Reader::Fail("adversary.strategy",
                 "must be fixed-point, boundary-probe, replay-past-queries "
                 "or scripted");
  }
  if (r.Has("point")) m.fixed_point = r.Vector("point");
  m.band = r.Number("band", m.band);
  if (r.Has("script")) {
    const json& sc = r.At("script");
    if (!sc.is_array()) Reader::Fail("adversary.script", "must be an array");
    for (const auto& e : sc) {
      if (e.is_null()) {
        m.script.emplace_back(std::nullopt);
      } else {
        m.script.emplace_back(Reader::ToVector(e, "adversary.script"));
      }
    }
  }
  r.Finish();
  return m;
}

NoiseMode ReadNoise(const std::string& s) {
  if (s == "seeded") return NoiseMode::kSeededRandom;
  if (s == "zero") return NoiseMode::kZero;
  Reader::Fail("noise", "must be seeded or zero");
}

const char* NoiseName(NoiseMode m) {
  return m == NoiseMode::kZero ? "zero" : "seeded";
}

json BoxJson(const Box& b) { return json{{"lower", b.lower}, {"upper", b.upper}}; }

json DistributionJson(const Distribution& d) {
  json j;
  j["kind"] = harness::ToString(d.kind());
  switch (d.kind()) {
    case Distribution::Kind::kUniformBox:
      j["lower"] = d.box().lower;
      j["upper"] = d.box().upper;
      break;
    case Distribution::Kind::kAxisProduct: {
      json axes = json::array();
      for (const auto& a : d.axes()) {
        if (a.kind == AxisLaw::Kind::kUniform) {
          axes.push_back({{"law", "uniform"}, {"lower", a.a}, {"upper", a.b}});
        } else {
          axes.push_back({{"law", "normal"}, {"mean", a.a}, {"stddev", a.b}});
        }
      }
      j["axes"] = axes;
      break;
    }
    case Distribution::Kind::kFiniteMixture: {
      j["weights"] = d.weights();
      json comps = json::array();
      for (const auto& c : d.components()) comps.push_back(BoxJson(c));
      j["components"] = comps;
      break;
    }
  }
  return j;
}

}  // namespace

const char* ToString(OracleKind kind) {
  return kind == OracleKind::kStumps ? "stumps" : "rectangles";
}

void ExperimentConfig::Validate() const {
  // Re-run each parameter check alone so the error names its field.
  const std::pair<const char*, double GlobalParams::*> fields[] = {
      {"epsilon", &GlobalParams::epsilon},
      {"delta_star", &GlobalParams::delta_star},
      {"alpha", &GlobalParams::alpha},
      {"beta", &GlobalParams::beta},
      {"gamma", &GlobalParams::gamma}};
  GlobalParams probe{1, 1.0, 0.5, 0.5, 0.5, 1.0};
  probe.d = params.d;
  try {
    probe.Validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("params.d: ") + e.what());
  }
  for (const auto& [name, field] : fields) {
    GlobalParams one = probe;
    one.*field = params.*field;
    try {
      one.Validate();
    } catch (const ParameterError& e) {
      throw ConfigError(std::string("params.") + name + ": " + e.what());
    }
  }
  const std::size_t d = params.d;
  if (distribution.dim() != d) {
    throw ConfigError("distribution: dimension must equal params.d");
  }
  if (const auto* rect = std::get_if<RectConcept>(&target)) {
    if (oracle != OracleKind::kRectangles) {
      throw ConfigError("concept: stumps oracle needs a stump concept");
    }
    if (rect->dim() != d) {
      throw ConfigError("concept: dimension must equal params.d");
    }
    try {
      RectConcept::Make(rect->lower, rect->upper);
    } catch (const Error& e) {
      throw ConfigError(std::string("concept: ") + e.what());
    }
  } else {
    const auto& s = std::get<StumpConcept>(target);
    if (oracle != OracleKind::kStumps) {
      throw ConfigError("concept: rectangles oracle needs a rectangle concept");
    }
    if (s.axis >= d) throw ConfigError("concept.axis: must be < params.d");
    if (s.sign != 1 && s.sign != -1) {
      throw ConfigError("concept.sign: must be +1 or -1");
    }
  }
  if (adversary.gamma != params.gamma) {
    throw ConfigError("adversary.gamma: must equal params.gamma");
  }
  try {
    adversary.Validate(d);
  } catch (const ConfigError&) {
    throw;
  }
  if (horizon_rounds) {
    if (*horizon_rounds < 1) throw ConfigError("horizon.rounds: must be >= 1");
  } else if (horizon_phases < 1 ||
             horizon_phases > PhaseSchedule::kMaxResolvedPhase) {
    throw ConfigError("horizon.phases: must be in [1, " +
                      std::to_string(PhaseSchedule::kMaxResolvedPhase) + "]");
  }
  if (sample_size && *sample_size < 1) {
    throw ConfigError("sample_size: must be >= 1");
  }
  if (probes < 1) throw ConfigError("probes: must be >= 1");
  if (trials < 1) throw ConfigError("trials: must be >= 1");
  if (parallel < 1) throw ConfigError("parallel: must be >= 1");
  if (noise == NoiseMode::kScripted) {
    throw ConfigError("noise: scripted noise is not available from config");
  }
  if (!(resolver.c_delta > 0 && resolver.c_m > 0 && resolver.c_t > 0 &&
        resolver.polylog > 0 && resolver.rsc_constant > 0)) {
    throw ConfigError("resolver: constants must be positive");
  }
  if (inner_schedule_epsilon) {
    if (oracle != OracleKind::kStumps) {
      throw ConfigError("inner_schedule_epsilon: stumps oracle only");
    }
    if (!(*inner_schedule_epsilon > 0)) {
      throw ConfigError("inner_schedule_epsilon: must be positive");
    }
  }
  if (output.directory.empty()) {
    throw ConfigError("output.directory: must be nonempty");
  }
}

ExperimentConfig ParseConfig(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  Reader r(root, "");
  ExperimentConfig c;
  const std::string oracle = r.String("oracle", "rectangles");
  if (oracle == "rectangles") {
    c.oracle = OracleKind::kRectangles;
  } else if (oracle == "stumps") {
    c.oracle = OracleKind::kStumps;
  } else {
    Reader::Fail("oracle", "must be rectangles or stumps");
  }
  if (r.Has("params")) {
    Reader p(r.At("params"), "params");
    const std::int64_t d = p.Integer("d", 1);
    if (d < 1) Reader::Fail("params.d", "must be >= 1");
    c.params.d = static_cast<std::size_t>(d);
    c.params.epsilon = p.Number("epsilon", c.params.epsilon);
    c.params.delta_star = p.Number("delta_star", c.params.delta_star);
    c.params.alpha = p.Number("alpha", c.params.alpha);
    c.params.beta = p.Number("beta", c.params.beta);
    c.params.gamma = p.Number("gamma", c.params.gamma);
    p.Finish();
  }
  const std::size_t d = c.params.d;
  c.distribution = r.Has("distribution")
                       ? ReadDistribution(r.At("distribution"), d)
                       : Distribution::UniformBox(std::vector<double>(d, 0.0),
                                                  std::vector<double>(d, 1.0));
  if (r.Has("concept")) {
    c.target = ReadConcept(r.At("concept"), d);
  } else if (c.oracle == OracleKind::kStumps) {
    c.target = StumpConcept{0, 1, 0.5};
  } else {
    c.target = RectConcept{std::vector<double>(d, 0.2),
                           std::vector<double>(d, 0.8)};
  }
  if (r.Has("adversary")) c.adversary = ReadAdversary(r.At("adversary"));
  c.adversary.gamma = c.params.gamma;
  if (r.Has("horizon")) {
    Reader h(r.At("horizon"), "horizon");
    const bool has_phases = h.Has("phases");
    const bool has_rounds = h.Has("rounds");
    if (has_phases && has_rounds) {
      Reader::Fail("horizon", "give phases or rounds, not both");
    }
    if (has_rounds) {
      const std::int64_t t = h.Integer("rounds", 1);
      if (t < 1) Reader::Fail("horizon.rounds", "must be >= 1");
      c.horizon_rounds = static_cast<std::uint64_t>(t);
    } else {
      c.horizon_phases = static_cast<int>(h.Integer("phases", 1));
    }
    h.Finish();
  }
  if (r.Has("sample_size")) c.sample_size = r.Integer("sample_size", 1);
  c.probes = r.Integer("probes", c.probes);
  c.trials = static_cast<int>(r.Integer("trials", c.trials));
  if (r.Has("seed")) {
    const json& s = r.At("seed");
    if (!s.is_number_unsigned() && !s.is_number_integer()) {
      Reader::Fail("seed", "must be a nonnegative integer");
    }
    if (s.is_number_integer() && s.get<std::int64_t>() < 0) {
      Reader::Fail("seed", "must be a nonnegative integer");
    }
    c.seed = s.get<std::uint64_t>();
  }
  c.noise = ReadNoise(r.String("noise", "seeded"));
  if (r.Has("resolver")) {
    Reader rc(r.At("resolver"), "resolver");
    c.resolver.c_delta = rc.Number("c_delta", c.resolver.c_delta);
    c.resolver.c_m = rc.Number("c_m", c.resolver.c_m);
    c.resolver.c_t = rc.Number("c_t", c.resolver.c_t);
    c.resolver.polylog = rc.Number("polylog", c.resolver.polylog);
    c.resolver.rsc_constant = rc.Number("rsc_constant", c.resolver.rsc_constant);
    rc.Finish();
  }
  if (r.Has("inner_schedule_epsilon")) {
    c.inner_schedule_epsilon = r.Number("inner_schedule_epsilon", 1.0);
  }
  if (r.Has("output")) {
    Reader o(r.At("output"), "output");
    c.output.directory = o.String("directory", c.output.directory);
    c.output.write_traces = o.Bool("write_traces", c.output.write_traces);
    o.Finish();
  }
  c.parallel = static_cast<int>(r.Integer("parallel", c.parallel));
  r.Finish();
  c.Validate();
  return c;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

std::string SerializeConfig(const ExperimentConfig& c) {
  json j;
  j["oracle"] = ToString(c.oracle);
  j["params"] = {{"d", c.params.d},
                 {"epsilon", c.params.epsilon},
                 {"delta_star", c.params.delta_star},
                 {"alpha", c.params.alpha},
                 {"beta", c.params.beta},
                 {"gamma", c.params.gamma}};
  j["distribution"] = DistributionJson(c.distribution);
  if (const auto* rect = std::get_if<RectConcept>(&c.target)) {
    j["concept"] = {
        {"kind", "rectangle"}, {"lower", rect->lower}, {"upper", rect->upper}};
  } else {
    const auto& s = std::get<StumpConcept>(c.target);
    j["concept"] = {{"kind", "stump"},
                    {"axis", s.axis},
                    {"sign", s.sign},
                    {"threshold", s.threshold}};
  }
  json adv = {{"strategy", harness::ToString(c.adversary.strategy)},
              {"band", c.adversary.band}};
  if (!c.adversary.fixed_point.empty()) adv["point"] = c.adversary.fixed_point;
  if (!c.adversary.script.empty()) {
    json sc = json::array();
    for (const auto& s : c.adversary.script) {
      sc.push_back(s ? json(*s) : json(nullptr));
    }
    adv["script"] = sc;
  }
  j["adversary"] = adv;
  j["horizon"] = c.horizon_rounds ? json{{"rounds", *c.horizon_rounds}}
                                  : json{{"phases", c.horizon_phases}};
  j["sample_size"] = c.sample_size ? json(*c.sample_size) : json(nullptr);
  j["probes"] = c.probes;
  j["trials"] = c.trials;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["noise"] = NoiseName(c.noise);
  j["resolver"] = {{"c_delta", c.resolver.c_delta},
                   {"c_m", c.resolver.c_m},
                   {"c_t", c.resolver.c_t},
                   {"polylog", c.resolver.polylog},
                   {"rsc_constant", c.resolver.rsc_constant}};
  j["inner_schedule_epsilon"] = c.inner_schedule_epsilon
                                    ? json(*c.inner_schedule_epsilon)
                                    : json(nullptr);
  j["output"] = {{"directory", c.output.directory},
                 {"write_traces", c.output.write_traces}};
  j["parallel"] = c.parallel;
  return j.dump(2) + "\n";
}

GlobalParams ScheduleParams(const ExperimentConfig& c) {
  if (c.oracle == OracleKind::kRectangles) return c.params;
  const GlobalParams& g = c.params;
  return GlobalParams{1,
                      c.inner_schedule_epsilon.value_or(g.epsilon / 4),
                      g.delta_star / 2,
                      g.alpha / 2,
                      g.beta / 2,
                      g.gamma};
}

PhaseSchedule ExperimentSchedule(const ExperimentConfig& c) {
  return PhaseSchedule::Resolve(ScheduleParams(c), c.resolver);
}

}  // namespace perp
