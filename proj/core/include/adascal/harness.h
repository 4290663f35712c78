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

// Experiment orchestration: runs many independent simulations of one
// scenario, classifies each by the joint-action profile it settles on, and
// writes the aggregate artifacts.

#ifndef ADASCAL_HARNESS_H_
#define ADASCAL_HARNESS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adascal/bilevel.h"
#include "adascal/experiment_config.h"
#include "adascal/games.h"
#include "adascal/regret_audit.h"

namespace adascal {

inline constexpr const char* kNoneLabel = "None";

// SplitMix64(master ^ SplitMix64(run_id)).
std::uint64_t DeriveRunSeed(std::uint64_t master_seed, std::uint64_t run_id);

// Pure equilibria of the game scalarized by (focal objective, opponent
// objective), each mapped to its profile label ("BB", "SS" for bos4d).
std::map<JointAction, std::string> OutcomeLabels(const ExperimentConfig& config);

// Strict-plurality joint profile over the last `window` rounds, mapped
// through `labels`; an unlabeled plurality or a tie gives kNoneLabel.
// Throws std::invalid_argument if window < 1 or window > rounds logged.
std::string ClassifyOutcome(const RunHistory& history, int window,
                            const std::map<JointAction, std::string>& labels);

// out[t] = mean(series[max(0, t - window + 1) .. t]). Throws
// std::invalid_argument if window < 1.
std::vector<double> MovingAverage(std::span<const double> series, int window);

struct RunAuditSummary {
  bool ok;
  int bound_violations;
  int integrity_errors;
  double max_inner_ratio;  // max over blocks of value / bound
  double outer_ratio;      // best-vertex value / bound (0 when bound is 0)
  double bilevel_ratio;
};

struct RunRecord {
  int run_id;
  std::uint64_t seed;
  std::string outcome;
  double mean_obj_reward;
  SimplexPoint final_outer;
  // Per-round scalarized rewards, filled only when trajectories are kept.
  std::vector<double> focal_rewards;
  std::vector<double> opponent_rewards;
  std::optional<RunAuditSummary> audit;
};

// Plays one run of the configured scenario with the given run seed.
RunHistory SimulateRun(const ExperimentConfig& config, std::uint64_t run_seed);

struct OutcomeHistogram {
  struct Entry {
    std::string label;
    int count;
    double fraction;
  };
  // Labeled equilibria in profile order, then kNoneLabel.
  std::vector<Entry> entries;
  int total = 0;

  const Entry* Find(const std::string& label) const;
  double Fraction(const std::string& label) const;
};

OutcomeHistogram BuildHistogram(std::span<const std::string> label_order,
                                std::span<const RunRecord> records);

// Per-class smoothed reward curves: mean and population standard deviation
// over the runs of that class at each round.
struct Trajectory {
  std::string label;
  int runs = 0;
  std::vector<double> mean_focal, sd_focal, mean_opp, sd_opp;
};

struct ScenarioResult {
  std::vector<RunRecord> records;  // run_id order, series cleared
  OutcomeHistogram histogram;
  std::vector<Trajectory> trajectories;  // histogram order, empty classes skipped
  std::vector<RunHistory> histories;     // first keep_histories runs
};

// Runs config.runs simulations across config.workers threads. Results do not
// depend on the worker count.
ScenarioResult RunScenario(const ExperimentConfig& config);

// Formats a double as its shortest round-trip decimal string.
std::string FormatDouble(double x);

std::string OutcomesCsv(std::span<const RunRecord> records);
std::string HistogramJson(const ScenarioResult& result);

// Writes outcomes.csv, histogram.json, traj_<label>.csv per non-empty class,
// config.resolved.json, audit_summary.json when audited, and
// histories/run_<id>.json for kept histories. Throws std::runtime_error
// naming the path on I/O failure.
void EmitReport(const ScenarioResult& result, const ExperimentConfig& config,
                const std::string& out_dir);

// Histogram recomputed from an outcomes.csv body.
struct StoredOutcomes {
  std::vector<RunRecord> records;
  OutcomeHistogram histogram;
};
StoredOutcomes ReadOutcomesCsv(const std::string& path);

}  // namespace adascal

#endif  // ADASCAL_HARNESS_H_
