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

// Experiment configuration.
//
// The file format is one `dotted.key = value` pair per line; `#` starts a
// comment. A value is a JSON literal (number, "string", true/false, array)
// or a bare word, which is read as a string. Weight vectors are normalized
// on load, so `objective.focal = [1, 1, 0, 0]` is accepted. The full key
// list with defaults is in README.md; ResolvedConfigJson writes every key.

#ifndef ADASCAL_EXPERIMENT_CONFIG_H_
#define ADASCAL_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "adascal/bilevel.h"
#include "adascal/cones.h"
#include "adascal/games.h"

namespace adascal {

// Validation failure tied to a config key, e.g. "bilevel.block_len".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::runtime_error(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

enum class Scenario { kExpIxVsExpIx, kBilevelVsExpIx, kCustom };
enum class FocalLearner { kExpIx, kBilevel };
enum class OpponentLearner { kExpIx, kFixed };

std::string_view ScenarioName(Scenario s);
std::string_view FocalLearnerName(FocalLearner f);
std::string_view OpponentLearnerName(OpponentLearner o);

struct ConeSpec {
  std::vector<Vec> generators;
  std::vector<Vec> halfspaces;
};

struct ExperimentConfig {
  std::string game_preset = "bos4d";  // "bos4d" or "inline"
  VectorGame game = Bos4dGame();

  Scenario scenario = Scenario::kBilevelVsExpIx;
  FocalLearner focal_learner = FocalLearner::kBilevel;
  OpponentLearner opponent_learner = OpponentLearner::kExpIx;

  int rounds = 10000;
  int runs = 1000;
  std::uint64_t seed = 20260417;
  int workers = 0;  // 0: one per hardware thread

  int block_len = 500;
  std::vector<WeightVector> candidates;
  BilevelParams bilevel;
  std::optional<SimplexPoint> initial_outer;

  WeightVector focal_objective;
  WeightVector opponent_objective;

  double baseline_eta = 0.005;
  double baseline_gamma = 0.2;

  std::optional<SimplexPoint> focal_initial_policy;
  std::optional<SimplexPoint> opponent_initial_policy;
  std::optional<SimplexPoint> opponent_fixed_policy;

  std::optional<ConeSpec> focal_cone;
  std::optional<ConeSpec> opponent_cone;

  int classify_window = 1000;
  int smoothing_window = 300;

  bool write_trajectories = true;
  int keep_histories = 0;
  bool audit = true;

  // Defaults: the bi-level vs Exp-IX experiment on bos4d.
  ExperimentConfig();

  // Checks every cross-field invariant; throws ConfigError.
  void Validate() const;
};

// key -> raw value text, in file order of first appearance.
using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// Splits the file into entries. Throws ConfigError("line N", ...) on syntax
// errors.
ConfigEntries ParseConfigText(std::string_view text);

// "key=value" from the command line.
std::pair<std::string, std::string> ParseOverride(std::string_view assignment);

// Applies entries (later entries win) over the defaults and validates.
ExperimentConfig BuildConfig(const ConfigEntries& entries);

ExperimentConfig LoadConfigFile(const std::string& path,
                                const ConfigEntries& overrides = {});

// Every effective parameter as a flat JSON object keyed like the config file.
std::string ResolvedConfigJson(const ExperimentConfig& config);

// Reads a ResolvedConfigJson document back.
ExperimentConfig ConfigFromResolvedJson(std::string_view json_text);

}  // namespace adascal

#endif  // ADASCAL_EXPERIMENT_CONFIG_H_
