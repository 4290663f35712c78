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

#include "adascal/harness.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <memory>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "adascal/history_io.h"

namespace adascal {
namespace {

using nlohmann::json;

// Running mean and second moment per round.
struct SeriesMoments {
  int n = 0;
  std::vector<double> mean, m2;

  void Add(std::span<const double> x) {
    if (mean.empty()) {
      mean.assign(x.size(), 0.0);
      m2.assign(x.size(), 0.0);
    }
    ++n;
    for (std::size_t t = 0; t < x.size(); ++t) {
      const double delta = x[t] - mean[t];
      mean[t] += delta / n;
      m2[t] += delta * (x[t] - mean[t]);
    }
  }

  std::vector<double> Sd() const {
    std::vector<double> sd(m2.size());
    for (std::size_t t = 0; t < m2.size(); ++t) {
      sd[t] = std::sqrt(std::max(0.0, m2[t] / n));
    }
    return sd;
  }
};

struct ClassMoments {
  SeriesMoments focal, opp;
};

struct RunOutput {
  RunRecord record;
  std::optional<RunHistory> history;
};

RunAuditSummary Summarize(const RegretReport& r) {
  double max_inner = 0.0;
  for (const auto& b : r.inner) {
    if (b.bound > 0) max_inner = std::max(max_inner, b.value / b.bound);
  }
  return RunAuditSummary{
      r.ok(),
      r.BoundViolations(),
      static_cast<int>(r.integrity_errors.size()) + r.estimate_bound_violations,
      max_inner,
      r.outer.bound > 0 ? r.outer.best_vertex_value / r.outer.bound : 0.0,
      r.bilevel.bound > 0 ? r.bilevel.value / r.bilevel.bound : 0.0};
}

RunOutput ExecuteRun(const ExperimentConfig& config,
                     const std::map<JointAction, std::string>& labels,
                     int run_id) {
  const std::uint64_t seed = DeriveRunSeed(config.seed, run_id);
  RunHistory h = SimulateRun(config, seed);
  RunRecord rec{run_id,
                seed,
                ClassifyOutcome(h, config.classify_window, labels),
                h.MeanObjectiveReward(),
                h.final_outer,
                {},
                {},
                std::nullopt};
  if (config.write_trajectories) {
    std::vector<double> focal(h.rounds.size()), opp(h.rounds.size());
    for (std::size_t t = 0; t < h.rounds.size(); ++t) {
      focal[t] = Scalarize(config.focal_objective, h.rounds[t].payoff);
      opp[t] = h.rounds[t].opponent_reward;
    }
    rec.focal_rewards = MovingAverage(focal, config.smoothing_window);
    rec.opponent_rewards = MovingAverage(opp, config.smoothing_window);
  }
  if (config.audit) rec.audit = Summarize(AuditRunHistory(h, &config.game));
  RunOutput out{std::move(rec), std::nullopt};
  if (run_id < config.keep_histories) out.history = std::move(h);
  return out;
}

void WriteFile(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << body;
  out.close();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string FileSafe(const std::string& label) {
  std::string s = label;
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) c = '_';
  }
  return s;
}

std::string TrajectoryFile(const std::string& label) {
  return "traj_" + FileSafe(label) + ".csv";
}

std::vector<std::string_view> SplitCsv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

template <typename T>
T ParseField(std::string_view s, const std::string& where) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument(where + ": cannot parse '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace

std::uint64_t DeriveRunSeed(std::uint64_t master_seed, std::uint64_t run_id) {
  return SplitMix64(master_seed ^ SplitMix64(run_id));
}

std::map<JointAction, std::string> OutcomeLabels(const ExperimentConfig& config) {
  const std::vector<WeightVector> weights = {config.focal_objective,
                                             config.opponent_objective};
  std::map<JointAction, std::string> labels;
  for (const JointAction& ne : PureNash(ScalarizedGame(config.game, weights))) {
    labels.emplace(ne, config.game.ProfileLabel(ne));
  }
  return labels;
}

std::string ClassifyOutcome(const RunHistory& history, int window,
                            const std::map<JointAction, std::string>& labels) {
  if (window < 1 || window > static_cast<int>(history.rounds.size())) {
    throw std::invalid_argument("classify window must lie in [1, rounds]");
  }
  std::map<JointAction, int> counts;
  for (auto it = history.rounds.end() - window; it != history.rounds.end(); ++it) {
    ++counts[JointAction{it->focal_action, it->opponent_action}];
  }
  const JointAction* best = nullptr;
  int best_count = 0;
  bool tie = false;
  for (const auto& [profile, n] : counts) {
    if (n > best_count) {
      best = &profile;
      best_count = n;
      tie = false;
    } else if (n == best_count) {
      tie = true;
    }
  }
  if (tie || best == nullptr) return kNoneLabel;
  auto it = labels.find(*best);
  return it == labels.end() ? kNoneLabel : it->second;
}

std::vector<double> MovingAverage(std::span<const double> series, int window) {
  if (window < 1) throw std::invalid_argument("moving average window must be >= 1");
  std::vector<double> out(series.size());
  if (window == 1) {
    std::copy(series.begin(), series.end(), out.begin());
    return out;
  }
  const std::size_t w = static_cast<std::size_t>(window);
  double sum = 0.0;
  for (std::size_t t = 0; t < series.size(); ++t) {
    sum += series[t];
    if (t >= w) sum -= series[t - w];
    out[t] = sum / static_cast<double>(std::min(t + 1, w));
  }
  return out;
}

RunHistory SimulateRun(const ExperimentConfig& c, std::uint64_t run_seed) {
  RunStreams streams = RunStreams::Derive(run_seed);
  const VectorGame& g = c.game;
  std::unique_ptr<Environment> env;
  if (c.opponent_learner == OpponentLearner::kExpIx) {
    const SimplexPoint init =
        c.opponent_initial_policy.value_or(SimplexPoint::Uniform(g.action_count(1)));
    env = std::make_unique<ExpIxOpponentEnvironment>(
        g, LearnerState::Make(init, c.baseline_eta, c.baseline_gamma),
        c.opponent_objective, streams.opponent);
  } else {
    env = std::make_unique<FixedOpponentEnvironment>(
        g, *c.opponent_fixed_policy, streams.opponent, c.opponent_objective);
  }
  if (c.focal_learner == FocalLearner::kExpIx) {
    const SimplexPoint init =
        c.focal_initial_policy.value_or(SimplexPoint::Uniform(g.action_count(0)));
    return RunExpIxBaseline(LearnerState::Make(init, c.baseline_eta, c.baseline_gamma),
                            c.focal_objective, c.rounds, *env, streams.focal);
  }
  BilevelState state =
      BilevelState::Make(c.candidates, c.focal_objective, g.action_count(0),
                         c.bilevel, c.initial_outer, c.focal_initial_policy);
  return OuterAlg(std::move(state), BlockSchedule(c.rounds, c.block_len), *env,
                  streams.outer, streams.focal);
}

const OutcomeHistogram::Entry* OutcomeHistogram::Find(const std::string& label) const {
  for (const auto& e : entries) {
    if (e.label == label) return &e;
  }
  return nullptr;
}

double OutcomeHistogram::Fraction(const std::string& label) const {
  const Entry* e = Find(label);
  return e == nullptr ? 0.0 : e->fraction;
}

OutcomeHistogram BuildHistogram(std::span<const std::string> label_order,
                                std::span<const RunRecord> records) {
  OutcomeHistogram h;
  h.total = static_cast<int>(records.size());
  for (const auto& label : label_order) h.entries.push_back({label, 0, 0.0});
  for (const RunRecord& r : records) {
    auto it = std::find_if(h.entries.begin(), h.entries.end(),
                           [&](const auto& e) { return e.label == r.outcome; });
    if (it == h.entries.end()) {
      throw std::invalid_argument("run " + std::to_string(r.run_id) +
                                  ": outcome '" + r.outcome + "' is not a known label");
    }
    ++it->count;
  }
  for (auto& e : h.entries) {
    e.fraction = h.total == 0 ? 0.0 : static_cast<double>(e.count) / h.total;
  }
  return h;
}

ScenarioResult RunScenario(const ExperimentConfig& config) {
  config.Validate();
  const auto labels = OutcomeLabels(config);
  std::vector<std::string> label_order;
  for (const auto& [profile, label] : labels) label_order.push_back(label);
  label_order.push_back(kNoneLabel);

  int workers = config.workers;
  if (workers == 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, config.runs);

  ScenarioResult result;
  result.records.reserve(config.runs);
  std::map<std::string, ClassMoments> moments;

  // Runs are computed in batches and folded in run_id order, so every
  // floating-point reduction sees the same sequence for any worker count.
  const int batch = std::max(1, workers * 8);
  for (int begin = 0; begin < config.runs; begin += batch) {
    const int end = std::min(config.runs, begin + batch);
    std::vector<std::optional<RunOutput>> slots(end - begin);
    std::vector<std::exception_ptr> errors(end - begin);
    std::atomic<int> next{begin};
    auto work = [&] {
      for (int id = next++; id < end; id = next++) {
        try {
          slots[id - begin] = ExecuteRun(config, labels, id);
        } catch (...) {
          errors[id - begin] = std::current_exception();
        }
      }
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < std::min(workers, end - begin); ++w) pool.emplace_back(work);
      for (auto& t : pool) t.join();
    }
    for (int i = 0; i < end - begin; ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      RunOutput& out = *slots[i];
      if (config.write_trajectories) {
        ClassMoments& m = moments[out.record.outcome];
        m.focal.Add(out.record.focal_rewards);
        m.opp.Add(out.record.opponent_rewards);
        out.record.focal_rewards.clear();
        out.record.focal_rewards.shrink_to_fit();
        out.record.opponent_rewards.clear();
        out.record.opponent_rewards.shrink_to_fit();
      }
      if (out.history) result.histories.push_back(std::move(*out.history));
      result.records.push_back(std::move(out.record));
    }
  }

  result.histogram = BuildHistogram(label_order, result.records);
  for (const auto& label : label_order) {
    auto it = moments.find(label);
    if (it == moments.end()) continue;
    const ClassMoments& m = it->second;
    result.trajectories.push_back(Trajectory{label, m.focal.n, m.focal.mean,
                                             m.focal.Sd(), m.opp.mean, m.opp.Sd()});
  }
  return result;
}

std::string FormatDouble(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) throw std::runtime_error("cannot format double");
  return std::string(buf, ptr);
}

std::string OutcomesCsv(std::span<const RunRecord> records) {
  std::string s = "run_id,seed,outcome,mean_obj_reward\n";
  for (const RunRecord& r : records) {
    s += std::to_string(r.run_id);
    s += ',';
    s += std::to_string(r.seed);
    s += ',';
    s += r.outcome;
    s += ',';
    s += FormatDouble(r.mean_obj_reward);
    s += '\n';
  }
  return s;
}

std::string HistogramJson(const ScenarioResult& result) {
  json j;
  j["total"] = result.histogram.total;
  json entries = json::array();
  json files = json::object();
  json omitted = json::array();
  for (const auto& e : result.histogram.entries) {
    entries.push_back({{"label", e.label}, {"count", e.count}, {"fraction", e.fraction}});
    const bool has = std::any_of(result.trajectories.begin(), result.trajectories.end(),
                                 [&](const Trajectory& t) { return t.label == e.label; });
    if (has) {
      files[e.label] = TrajectoryFile(e.label);
    } else {
      files[e.label] = nullptr;
      omitted.push_back(e.label);
    }
  }
  j["outcomes"] = std::move(entries);
  j["trajectories"] = std::move(files);
  j["omitted_trajectories"] = std::move(omitted);
  return j.dump(2) + "\n";
}

void EmitReport(const ScenarioResult& result, const ExperimentConfig& config,
                const std::string& out_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir.string() + ": " + ec.message());

  WriteFile(dir / "outcomes.csv", OutcomesCsv(result.records));
  WriteFile(dir / "histogram.json", HistogramJson(result));
  WriteFile(dir / "config.resolved.json", ResolvedConfigJson(config) + "\n");

  for (const Trajectory& t : result.trajectories) {
    std::string s = "round,mean_focal,sd_focal,mean_opp,sd_opp\n";
    for (std::size_t i = 0; i < t.mean_focal.size(); ++i) {
      s += std::to_string(i + 1) + ',' + FormatDouble(t.mean_focal[i]) + ',' +
           FormatDouble(t.sd_focal[i]) + ',' + FormatDouble(t.mean_opp[i]) + ',' +
           FormatDouble(t.sd_opp[i]) + '\n';
    }
    WriteFile(dir / TrajectoryFile(t.label), s);
  }

  if (config.audit) {
    json a;
    int ok = 0, bound = 0, integrity = 0;
    double inner = 0, outer = 0, bilevel = 0;
    json failing = json::array();
    for (const RunRecord& r : result.records) {
      if (!r.audit) continue;
      ok += r.audit->ok;
      bound += r.audit->bound_violations;
      integrity += r.audit->integrity_errors;
      inner = std::max(inner, r.audit->max_inner_ratio);
      outer = std::max(outer, r.audit->outer_ratio);
      bilevel = std::max(bilevel, r.audit->bilevel_ratio);
      if (!r.audit->ok) failing.push_back(r.run_id);
    }
    a["runs_audited"] = result.records.size();
    a["runs_ok"] = ok;
    a["bound_violations"] = bound;
    a["integrity_errors"] = integrity;
    a["max_inner_ratio"] = inner;
    a["max_outer_ratio"] = outer;
    a["max_bilevel_ratio"] = bilevel;
    a["failing_runs"] = std::move(failing);
    WriteFile(dir / "audit_summary.json", a.dump(2) + "\n");
  }

  if (!result.histories.empty()) {
    const fs::path hdir = dir / "histories";
    fs::create_directories(hdir, ec);
    if (ec) throw std::runtime_error("cannot create " + hdir.string() + ": " + ec.message());
    for (std::size_t i = 0; i < result.histories.size(); ++i) {
      WriteRunHistory(result.histories[i],
                      (hdir / ("run_" + std::to_string(i) + ".json")).string());
    }
  }
}

StoredOutcomes ReadOutcomesCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "run_id,seed,outcome,mean_obj_reward") {
    throw std::invalid_argument(path + ": unexpected header");
  }
  StoredOutcomes out;
  std::vector<std::string> labels;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path + ":" + std::to_string(line_no);
    const auto fields = SplitCsv(line);
    if (fields.size() != 4) throw std::invalid_argument(where + ": expected 4 fields");
    RunRecord r{ParseField<int>(fields[0], where),
                ParseField<std::uint64_t>(fields[1], where),
                std::string(fields[2]),
                ParseField<double>(fields[3], where),
                SimplexPoint::Uniform(1),
                {},
                {},
                std::nullopt};
    if (r.outcome != kNoneLabel &&
        std::find(labels.begin(), labels.end(), r.outcome) == labels.end()) {
      labels.push_back(r.outcome);
    }
    out.records.push_back(std::move(r));
  }
  std::sort(labels.begin(), labels.end());
  labels.push_back(kNoneLabel);
  out.histogram = BuildHistogram(labels, out.records);
  return out;
}

}  // namespace adascal
