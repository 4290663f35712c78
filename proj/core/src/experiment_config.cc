// Copyright 2026 The adascal Authors
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

#include "adascal/experiment_config.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

namespace adascal {
namespace {

using nlohmann::json;

const std::vector<std::string>& KnownKeys() {
  static const std::vector<std::string> keys = {
      "game.preset",
      "game.actions",
      "game.payoffs",
      "game.shared_payoffs",
      "game.payoff_bound",
      "scenario",
      "focal.learner",
      "opponent.learner",
      "rounds",
      "runs",
      "seed",
      "workers",
      "bilevel.block_len",
      "bilevel.candidates",
      "bilevel.eta_p",
      "bilevel.eta_q",
      "bilevel.gamma_p",
      "bilevel.gamma_q",
      "bilevel.initial_outer",
      "objective.focal",
      "objective.opponent",
      "baseline.eta",
      "baseline.gamma",
      "focal.initial_policy",
      "opponent.initial_policy",
      "opponent.fixed_policy",
      "cones.focal.generators",
      "cones.focal.halfspaces",
      "cones.opponent.generators",
      "cones.opponent.halfspaces",
      "classify.window",
      "smoothing.window",
      "output.trajectories",
      "output.histories",
      "audit.enabled",
  };
  return keys;
}

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

json ParseValue(const std::string& key, const std::string& text) {
  if (text.empty()) throw ConfigError(key, "missing value");
  try {
    return json::parse(text);
  } catch (const json::exception&) {
  }
  const bool bare = std::all_of(text.begin(), text.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
           c == '_' || c == '.';
  });
  if (!bare) throw ConfigError(key, "cannot parse value '" + text + "'");
  return json(text);
}

// Typed access to the merged key -> value map.
class Values {
 public:
  explicit Values(std::map<std::string, json> values)
      : values_(std::move(values)) {}

  bool Has(const std::string& key) const {
    auto it = values_.find(key);
    return it != values_.end() && !it->second.is_null();
  }

  template <typename T>
  T Get(const std::string& key, const char* what) const {
    const json& v = values_.at(key);
    try {
      return v.get<T>();
    } catch (const json::exception&) {
      throw ConfigError(key, std::string("expected ") + what + ", got " +
                                 v.dump());
    }
  }

  int Int(const std::string& key) const {
    const json& v = values_.at(key);
    if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
    return Get<int>(key, "an integer");
  }
  double Double(const std::string& key) const {
    const json& v = values_.at(key);
    if (!v.is_number()) throw ConfigError(key, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
    return x;
  }
  bool Bool(const std::string& key) const {
    if (!values_.at(key).is_boolean()) throw ConfigError(key, "expected true or false");
    return values_.at(key).get<bool>();
  }
  std::string String(const std::string& key) const {
    return Get<std::string>(key, "a string");
  }
  Vec Vector(const std::string& key) const {
    return Get<Vec>(key, "an array of numbers");
  }
  std::vector<Vec> Matrix(const std::string& key) const {
    return Get<std::vector<Vec>>(key, "an array of number arrays");
  }

 private:
  std::map<std::string, json> values_;
};

WeightVector Weight(const std::string& key, const Vec& v) {
  try {
    return WeightVector::Normalize(v);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

SimplexPoint Simplex(const std::string& key, Vec v) {
  try {
    SimplexPoint p = SimplexPoint::FromProbs(std::move(v));
    if (!p.strictly_positive()) {
      throw std::invalid_argument("entries must all be positive");
    }
    return p;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(key, e.what());
  }
}

Scenario ParseScenario(const std::string& s) {
  if (s == "expix-vs-expix") return Scenario::kExpIxVsExpIx;
  if (s == "bilevel-vs-expix") return Scenario::kBilevelVsExpIx;
  if (s == "custom") return Scenario::kCustom;
  throw ConfigError("scenario", "unknown scenario '" + s +
                                    "' (expix-vs-expix, bilevel-vs-expix, custom)");
}

FocalLearner ParseFocal(const std::string& s) {
  if (s == "expix") return FocalLearner::kExpIx;
  if (s == "bilevel") return FocalLearner::kBilevel;
  throw ConfigError("focal.learner", "unknown learner '" + s + "' (expix, bilevel)");
}

OpponentLearner ParseOpponent(const std::string& s) {
  if (s == "expix") return OpponentLearner::kExpIx;
  if (s == "fixed") return OpponentLearner::kFixed;
  throw ConfigError("opponent.learner", "unknown learner '" + s + "' (expix, fixed)");
}

json WeightsJson(const std::vector<WeightVector>& ws) {
  json out = json::array();
  for (const auto& w : ws) out.push_back(w.coords());
  return out;
}

json OptionalSimplex(const std::optional<SimplexPoint>& p) {
  return p ? json(p->probs()) : json(nullptr);
}

}  // namespace

std::string_view ScenarioName(Scenario s) {
  switch (s) {
    case Scenario::kExpIxVsExpIx:
      return "expix-vs-expix";
    case Scenario::kBilevelVsExpIx:
      return "bilevel-vs-expix";
    case Scenario::kCustom:
      return "custom";
  }
  return "?";
}

std::string_view FocalLearnerName(FocalLearner f) {
  return f == FocalLearner::kExpIx ? "expix" : "bilevel";
}

std::string_view OpponentLearnerName(OpponentLearner o) {
  return o == OpponentLearner::kExpIx ? "expix" : "fixed";
}

ExperimentConfig::ExperimentConfig()
    : focal_objective(WeightVector::Normalize(Vec{1, 1, 0, 0})),
      opponent_objective(WeightVector::Normalize(Vec{0, 0, 1, 1})) {
  candidates = {WeightVector::Normalize(Vec{1, 1, 0, 0}),
                WeightVector::Normalize(Vec{1, 1, 1, 1}),
                WeightVector::Normalize(Vec{1, 1, -1, -1})};
}

void ExperimentConfig::Validate() const {
  if (game.num_players() != 2) {
    throw ConfigError("game", "the simulator needs a two-player game");
  }
  if (rounds < 1) throw ConfigError("rounds", "must be >= 1");
  if (runs < 1) throw ConfigError("runs", "must be >= 1");
  if (workers < 0) throw ConfigError("workers", "must be >= 0");
  if (block_len < 1) throw ConfigError("bilevel.block_len", "must be >= 1");
  if (classify_window < 1 || classify_window > rounds) {
    throw ConfigError("classify.window", "must lie in [1, rounds]");
  }
  if (smoothing_window < 1) throw ConfigError("smoothing.window", "must be >= 1");
  if (keep_histories < 0) throw ConfigError("output.histories", "must be >= 0");
  if (candidates.empty()) {
    throw ConfigError("bilevel.candidates", "needs at least one candidate");
  }
  const int d_focal = game.payoff_dim(0);
  const int d_opp = game.payoff_dim(1);
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (candidates[j].dim() != d_focal) {
      throw ConfigError("bilevel.candidates",
                        "candidate " + std::to_string(j) + " has dimension " +
                            std::to_string(candidates[j].dim()) +
                            ", focal payoffs have " + std::to_string(d_focal));
    }
  }
  if (focal_objective.dim() != d_focal) {
    throw ConfigError("objective.focal", "dimension does not match focal payoffs");
  }
  if (opponent_objective.dim() != d_opp) {
    throw ConfigError("objective.opponent",
                      "dimension does not match opponent payoffs");
  }
  auto positive = [](const char* key, double v) {
    if (!(v > 0.0)) throw ConfigError(key, "must be > 0");
  };
  auto nonneg = [](const char* key, double v) {
    if (!(v >= 0.0)) throw ConfigError(key, "must be >= 0");
  };
  positive("bilevel.eta_p", bilevel.eta_p);
  positive("bilevel.eta_q", bilevel.eta_q);
  nonneg("bilevel.gamma_p", bilevel.gamma_p);
  nonneg("bilevel.gamma_q", bilevel.gamma_q);
  positive("baseline.eta", baseline_eta);
  nonneg("baseline.gamma", baseline_gamma);
  if (initial_outer && initial_outer->size() != static_cast<int>(candidates.size())) {
    throw ConfigError("bilevel.initial_outer", "needs one entry per candidate");
  }
  if (focal_initial_policy && focal_initial_policy->size() != game.action_count(0)) {
    throw ConfigError("focal.initial_policy", "needs one entry per focal action");
  }
  if (opponent_initial_policy &&
      opponent_initial_policy->size() != game.action_count(1)) {
    throw ConfigError("opponent.initial_policy",
                      "needs one entry per opponent action");
  }
  if (opponent_learner == OpponentLearner::kFixed) {
    if (!opponent_fixed_policy) {
      throw ConfigError("opponent.fixed_policy",
                        "required when opponent.learner = fixed");
    }
    if (opponent_fixed_policy->size() != game.action_count(1)) {
      throw ConfigError("opponent.fixed_policy",
                        "needs one entry per opponent action");
    }
  }
  auto check_cone = [&](const std::optional<ConeSpec>& spec, const char* prefix,
                        int dim, const std::vector<const WeightVector*>& ws) {
    if (!spec) return;
    const std::string key = std::string("cones.") + prefix + ".generators";
    std::optional<PolyhedralCone> cone;
    try {
      cone.emplace(dim, spec->generators, spec->halfspaces);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("cones.") + prefix, e.what());
    }
    if (!cone->has_generators()) return;
    for (const WeightVector* w : ws) {
      if (!DualContains(*cone, w->coords())) {
        throw ConfigError(key, "a configured weight lies outside the dual cone");
      }
    }
  };
  std::vector<const WeightVector*> focal_ws = {&focal_objective};
  for (const auto& c : candidates) focal_ws.push_back(&c);
  check_cone(focal_cone, "focal", d_focal, focal_ws);
  check_cone(opponent_cone, "opponent", d_opp, {&opponent_objective});
}

ConfigEntries ParseConfigText(std::string_view text) {
  ConfigEntries entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Strip a comment that starts outside a quoted string.
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
      if (line[i] == '#' && !quoted) {
        line.resize(i);
        break;
      }
    }
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no),
                        "expected 'key = value'");
    }
    std::string key = Trim(std::string_view(trimmed).substr(0, eq));
    std::string value = Trim(std::string_view(trimmed).substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no), "empty key");
    }
    entries.emplace_back(std::move(key), std::move(value));
  }
  return entries;
}

std::pair<std::string, std::string> ParseOverride(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(assignment), "override must be key=value");
  }
  std::string key = Trim(assignment.substr(0, eq));
  if (key.empty()) throw ConfigError(std::string(assignment), "empty key");
  return {std::move(key), Trim(assignment.substr(eq + 1))};
}

ExperimentConfig BuildConfig(const ConfigEntries& entries) {
  const auto& known = KnownKeys();
  std::map<std::string, json> merged;
  for (const auto& [key, text] : entries) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(key, "unknown key");
    }
    merged[key] = ParseValue(key, text);
  }
  const Values v(std::move(merged));
  ExperimentConfig c;

  // Game first: every dimension check below depends on it.
  if (v.Has("game.preset")) c.game_preset = v.String("game.preset");
  if (c.game_preset == "bos4d") {
    for (const char* k : {"game.actions", "game.payoffs", "game.shared_payoffs",
                          "game.payoff_bound"}) {
      if (v.Has(k)) throw ConfigError(k, "not allowed with game.preset = bos4d");
    }
  } else if (c.game_preset == "inline") {
    if (!v.Has("game.actions")) throw ConfigError("game.actions", "required for an inline game");
    const auto labels =
        v.Get<std::vector<std::vector<std::string>>>("game.actions",
                                                     "an array of label arrays");
    std::vector<int> counts;
    for (const auto& l : labels) counts.push_back(static_cast<int>(l.size()));
    std::vector<std::vector<Vec>> tables;
    if (v.Has("game.payoffs") == v.Has("game.shared_payoffs")) {
      throw ConfigError("game.payoffs",
                        "give exactly one of game.payoffs or game.shared_payoffs");
    }
    if (v.Has("game.payoffs")) {
      tables = v.Get<std::vector<std::vector<Vec>>>(
          "game.payoffs", "one array of payoff vectors per player");
    } else {
      tables.assign(labels.size(),
                    v.Matrix("game.shared_payoffs"));
    }
    std::vector<int> dims;
    double max_abs = 0.0;
    for (const auto& t : tables) {
      dims.push_back(t.empty() ? 0 : static_cast<int>(t.front().size()));
      for (const auto& u : t)
        for (double x : u) max_abs = std::max(max_abs, std::abs(x));
    }
    const double bound = v.Has("game.payoff_bound")
                             ? v.Double("game.payoff_bound")
                             : std::max(max_abs, 1e-12);
    try {
      c.game = VectorGame(counts, dims, tables, bound, labels);
    } catch (const std::exception& e) {
      throw ConfigError(v.Has("game.payoffs") ? "game.payoffs" : "game.shared_payoffs",
                        e.what());
    }
  } else {
    throw ConfigError("game.preset", "unknown preset '" + c.game_preset +
                                         "' (bos4d, inline)");
  }

  if (v.Has("scenario")) c.scenario = ParseScenario(v.String("scenario"));
  switch (c.scenario) {
    case Scenario::kExpIxVsExpIx:
      c.focal_learner = FocalLearner::kExpIx;
      c.opponent_learner = OpponentLearner::kExpIx;
      break;
    case Scenario::kBilevelVsExpIx:
      c.focal_learner = FocalLearner::kBilevel;
      c.opponent_learner = OpponentLearner::kExpIx;
      break;
    case Scenario::kCustom:
      if (!v.Has("focal.learner")) throw ConfigError("focal.learner", "required for scenario = custom");
      if (!v.Has("opponent.learner")) throw ConfigError("opponent.learner", "required for scenario = custom");
      break;
  }
  if (v.Has("focal.learner")) {
    const FocalLearner f = ParseFocal(v.String("focal.learner"));
    if (c.scenario != Scenario::kCustom && f != c.focal_learner) {
      throw ConfigError("focal.learner", "conflicts with the scenario preset");
    }
    c.focal_learner = f;
  }
  if (v.Has("opponent.learner")) {
    const OpponentLearner o = ParseOpponent(v.String("opponent.learner"));
    if (c.scenario != Scenario::kCustom && o != c.opponent_learner) {
      throw ConfigError("opponent.learner", "conflicts with the scenario preset");
    }
    c.opponent_learner = o;
  }

  if (v.Has("rounds")) c.rounds = v.Int("rounds");
  if (v.Has("runs")) c.runs = v.Int("runs");
  if (v.Has("seed")) c.seed = v.Get<std::uint64_t>("seed", "a nonnegative integer");
  if (v.Has("workers")) c.workers = v.Int("workers");

  if (v.Has("bilevel.block_len")) c.block_len = v.Int("bilevel.block_len");
  if (v.Has("bilevel.candidates")) {
    c.candidates.clear();
    for (const Vec& w : v.Matrix("bilevel.candidates")) {
      c.candidates.push_back(Weight("bilevel.candidates", w));
    }
  }
  if (v.Has("bilevel.eta_p")) c.bilevel.eta_p = v.Double("bilevel.eta_p");
  if (v.Has("bilevel.eta_q")) c.bilevel.eta_q = v.Double("bilevel.eta_q");
  if (v.Has("bilevel.gamma_p")) c.bilevel.gamma_p = v.Double("bilevel.gamma_p");
  if (v.Has("bilevel.gamma_q")) c.bilevel.gamma_q = v.Double("bilevel.gamma_q");
  if (v.Has("bilevel.initial_outer")) {
    c.initial_outer = Simplex("bilevel.initial_outer", v.Vector("bilevel.initial_outer"));
  }
  if (v.Has("objective.focal")) {
    c.focal_objective = Weight("objective.focal", v.Vector("objective.focal"));
  }
  if (v.Has("objective.opponent")) {
    c.opponent_objective = Weight("objective.opponent", v.Vector("objective.opponent"));
  }
  if (v.Has("baseline.eta")) c.baseline_eta = v.Double("baseline.eta");
  if (v.Has("baseline.gamma")) c.baseline_gamma = v.Double("baseline.gamma");
  if (v.Has("focal.initial_policy")) {
    c.focal_initial_policy = Simplex("focal.initial_policy", v.Vector("focal.initial_policy"));
  }
  if (v.Has("opponent.initial_policy")) {
    c.opponent_initial_policy =
        Simplex("opponent.initial_policy", v.Vector("opponent.initial_policy"));
  }
  if (v.Has("opponent.fixed_policy")) {
    try {
      c.opponent_fixed_policy = SimplexPoint::FromProbs(v.Vector("opponent.fixed_policy"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("opponent.fixed_policy", e.what());
    }
  }
  for (const char* who : {"focal", "opponent"}) {
    const std::string g = std::string("cones.") + who + ".generators";
    const std::string h = std::string("cones.") + who + ".halfspaces";
    if (!v.Has(g) && !v.Has(h)) continue;
    ConeSpec spec;
    if (v.Has(g)) spec.generators = v.Matrix(g);
    if (v.Has(h)) spec.halfspaces = v.Matrix(h);
    (std::string(who) == "focal" ? c.focal_cone : c.opponent_cone) = spec;
  }
  if (v.Has("classify.window")) c.classify_window = v.Int("classify.window");
  if (v.Has("smoothing.window")) c.smoothing_window = v.Int("smoothing.window");
  if (v.Has("output.trajectories")) c.write_trajectories = v.Bool("output.trajectories");
  if (v.Has("output.histories")) c.keep_histories = v.Int("output.histories");
  if (v.Has("audit.enabled")) c.audit = v.Bool("audit.enabled");

  c.Validate();
  return c;
}

ExperimentConfig LoadConfigFile(const std::string& path,
                                const ConfigEntries& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", "cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  ConfigEntries entries = ParseConfigText(buffer.str());
  entries.insert(entries.end(), overrides.begin(), overrides.end());
  return BuildConfig(entries);
}

std::string ResolvedConfigJson(const ExperimentConfig& c) {
  json j = json::object();
  j["game.preset"] = c.game_preset;
  if (c.game_preset == "inline") {
    json actions = json::array();
    json payoffs = json::array();
    for (int i = 0; i < c.game.num_players(); ++i) {
      json labels = json::array();
      for (int a = 0; a < c.game.action_count(i); ++a) {
        labels.push_back(c.game.ActionLabel(i, a));
      }
      actions.push_back(labels);
      json table = json::array();
      for (std::size_t p = 0; p < c.game.num_profiles(); ++p) {
        auto u = c.game.PayoffAt(p, i);
        table.push_back(Vec(u.begin(), u.end()));
      }
      payoffs.push_back(table);
    }
    j["game.actions"] = actions;
    j["game.payoffs"] = payoffs;
    j["game.payoff_bound"] = c.game.payoff_bound();
  }
  j["scenario"] = std::string(ScenarioName(c.scenario));
  j["focal.learner"] = std::string(FocalLearnerName(c.focal_learner));
  j["opponent.learner"] = std::string(OpponentLearnerName(c.opponent_learner));
  j["rounds"] = c.rounds;
  j["runs"] = c.runs;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["bilevel.block_len"] = c.block_len;
  j["bilevel.candidates"] = WeightsJson(c.candidates);
  j["bilevel.eta_p"] = c.bilevel.eta_p;
  j["bilevel.eta_q"] = c.bilevel.eta_q;
  j["bilevel.gamma_p"] = c.bilevel.gamma_p;
  j["bilevel.gamma_q"] = c.bilevel.gamma_q;
  j["bilevel.initial_outer"] = OptionalSimplex(c.initial_outer);
  j["objective.focal"] = c.focal_objective.coords();
  j["objective.opponent"] = c.opponent_objective.coords();
  j["baseline.eta"] = c.baseline_eta;
  j["baseline.gamma"] = c.baseline_gamma;
  j["focal.initial_policy"] = OptionalSimplex(c.focal_initial_policy);
  j["opponent.initial_policy"] = OptionalSimplex(c.opponent_initial_policy);
  j["opponent.fixed_policy"] = OptionalSimplex(c.opponent_fixed_policy);
  for (const auto& [who, spec] : {std::pair{"focal", &c.focal_cone},
                                  std::pair{"opponent", &c.opponent_cone}}) {
    const std::string prefix = std::string("cones.") + who;
    j[prefix + ".generators"] =
        (*spec && !(*spec)->generators.empty()) ? json((*spec)->generators) : json(nullptr);
    j[prefix + ".halfspaces"] =
        (*spec && !(*spec)->halfspaces.empty()) ? json((*spec)->halfspaces) : json(nullptr);
  }
  j["classify.window"] = c.classify_window;
  j["smoothing.window"] = c.smoothing_window;
  j["output.trajectories"] = c.write_trajectories;
  j["output.histories"] = c.keep_histories;
  j["audit.enabled"] = c.audit;
  return j.dump(2);
}

ExperimentConfig ConfigFromResolvedJson(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("config.resolved.json", e.what());
  }
  if (!j.is_object()) throw ConfigError("config.resolved.json", "expected an object");
  ConfigEntries entries;
  for (const auto& [key, value] : j.items()) {
    if (value.is_null()) continue;
    entries.emplace_back(key, value.dump());
  }
  return BuildConfig(entries);
}

}  // namespace adascal
