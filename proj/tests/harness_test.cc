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

#include "adascal/history_io.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

namespace adascal {
namespace {

namespace fs = std::filesystem;

constexpr int B = 0;
constexpr int S = 1;

// Reference splitmix64 finalizer, written out independently.
std::uint64_t RefMix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

RunHistory Scripted(const std::vector<std::pair<int, int>>& profiles) {
  RunHistory h{static_cast<int>(profiles.size()),
               static_cast<int>(profiles.size()),
               2,
               4,
               1.0,
               BilevelParams{},
               {WeightVector::Normalize(Vec{1, 1, 0, 0})},
               WeightVector::Normalize(Vec{1, 1, 0, 0}),
               {},
               {},
               SimplexPoint::Uniform(1),
               {SimplexPoint::Uniform(2)}};
  const VectorGame g = Bos4dGame();
  int t = 1;
  for (const auto& [a, b] : profiles) {
    h.rounds.push_back(RoundRecord{t++, 0, 0, a, b, g.Payoff(JointAction{a, b}, 0), 0.0,
                                   0.0, SimplexPoint::Uniform(2), Vec(2, 0.0)});
  }
  return h;
}

std::map<JointAction, std::string> BosLabels() {
  return OutcomeLabels(ExperimentConfig());
}

ExperimentConfig SmallConfig(int runs, int workers) {
  return BuildConfig({{"rounds", "3000"},
                      {"runs", std::to_string(runs)},
                      {"workers", std::to_string(workers)},
                      {"classify.window", "500"},
                      {"smoothing.window", "50"},
                      {"seed", "4242"}});
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

TEST(DeriveRunSeedTest, DocumentedMix) {
  for (std::uint64_t master : {0ULL, 20260417ULL, ~0ULL}) {
    for (std::uint64_t id = 0; id < 50; ++id) {
      ASSERT_EQ(DeriveRunSeed(master, id), RefMix(master ^ RefMix(id)));
    }
  }
  EXPECT_NE(DeriveRunSeed(1, 0), DeriveRunSeed(1, 1));
}

TEST(OutcomeLabelsTest, BosObjectiveEquilibria) {
  const auto labels = BosLabels();
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_EQ(labels.at(JointAction{B, B}), "BB");
  EXPECT_EQ(labels.at(JointAction{S, S}), "SS");
}

TEST(ClassifyOutcomeTest, Examples) {
  const auto labels = BosLabels();
  EXPECT_EQ(ClassifyOutcome(Scripted(std::vector<std::pair<int, int>>(1000, {B, B})), 1000,
                            labels),
            "BB");
  std::vector<std::pair<int, int>> alternating;
  for (int t = 0; t < 1000; ++t) alternating.push_back(t % 2 ? std::pair{S, B} : std::pair{B, S});
  EXPECT_EQ(ClassifyOutcome(Scripted(alternating), 1000, labels), kNoneLabel);
  std::vector<std::pair<int, int>> mixed(600, {S, S});
  mixed.insert(mixed.end(), 400, {B, B});
  EXPECT_EQ(ClassifyOutcome(Scripted(mixed), 1000, labels), "SS");
}

TEST(ClassifyOutcomeTest, OnlyTheFinalWindowCounts) {
  std::vector<std::pair<int, int>> p(900, {S, S});
  p.insert(p.end(), 100, {B, B});
  EXPECT_EQ(ClassifyOutcome(Scripted(p), 100, BosLabels()), "BB");
  EXPECT_EQ(ClassifyOutcome(Scripted(p), 1000, BosLabels()), "SS");
}

TEST(ClassifyOutcomeTest, TiesAndOffDiagonalPluralitiesAreNone) {
  std::vector<std::pair<int, int>> tie(500, {B, B});
  tie.insert(tie.end(), 500, {S, S});
  EXPECT_EQ(ClassifyOutcome(Scripted(tie), 1000, BosLabels()), kNoneLabel);
  std::vector<std::pair<int, int>> off(400, {B, S});
  off.insert(off.end(), 300, {B, B});
  off.insert(off.end(), 300, {S, S});
  EXPECT_EQ(ClassifyOutcome(Scripted(off), 1000, BosLabels()), kNoneLabel);
}

TEST(ClassifyOutcomeTest, WindowErrors) {
  const RunHistory h = Scripted(std::vector<std::pair<int, int>>(10, {B, B}));
  EXPECT_THROW(ClassifyOutcome(h, 11, BosLabels()), std::invalid_argument);
  EXPECT_THROW(ClassifyOutcome(h, 0, BosLabels()), std::invalid_argument);
}

TEST(ClassifyOutcomeTest, PermutationInvariant) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<int, int>> p;
    for (int t = 0; t < 300; ++t) p.push_back({static_cast<int>(rng() % 2), static_cast<int>(rng() % 2)});
    const int window = 1 + rng() % 300;
    const std::string before = ClassifyOutcome(Scripted(p), window, BosLabels());
    std::shuffle(p.end() - window, p.end(), rng);
    ASSERT_EQ(ClassifyOutcome(Scripted(p), window, BosLabels()), before);
  }
}

TEST(MovingAverageTest, Examples) {
  const std::vector<double> x = {3, -1, 4, 1, -5, 9};
  EXPECT_EQ(MovingAverage(x, 1), x);
  EXPECT_EQ(MovingAverage(std::vector<double>(20, 0.75), 7), std::vector<double>(20, 0.75));
  std::vector<double> alt;
  for (int t = 0; t < 10; ++t) alt.push_back(t % 2);
  const auto m = MovingAverage(alt, 2);
  EXPECT_EQ(m[0], 0.0);
  for (int t = 1; t < 10; ++t) EXPECT_EQ(m[t], 0.5);
  EXPECT_THROW(MovingAverage(x, 0), std::invalid_argument);
}

TEST(MovingAverageTest, MatchesDirectMeans) {
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> u(-2, 2);
  std::vector<double> x(2000);
  for (double& v : x) v = u(rng);
  for (int w : {2, 5, 300, 5000}) {
    const auto m = MovingAverage(x, w);
    ASSERT_EQ(m.size(), x.size());
    for (std::size_t t = 0; t < x.size(); ++t) {
      const std::size_t lo = t + 1 >= static_cast<std::size_t>(w) ? t + 1 - w : 0;
      double s = 0;
      for (std::size_t k = lo; k <= t; ++k) s += x[k];
      ASSERT_NEAR(m[t], s / (t - lo + 1), 1e-12);
    }
  }
}

TEST(FormatDoubleTest, ShortestRoundTrip) {
  EXPECT_EQ(FormatDouble(0.1), "0.1");
  EXPECT_EQ(FormatDouble(1.0), "1");
  EXPECT_EQ(FormatDouble(-0.5), "-0.5");
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 10000; ++i) {
    const double x = u(rng);
    ASSERT_EQ(std::stod(FormatDouble(x)), x);
  }
}

TEST(RunScenarioTest, SingleRunIsPointMass) {
  const ScenarioResult r = RunScenario(SmallConfig(1, 1));
  ASSERT_EQ(r.records.size(), 1u);
  double total = 0;
  for (const auto& e : r.histogram.entries) {
    total += e.fraction;
    EXPECT_EQ(e.fraction, e.label == r.records[0].outcome ? 1.0 : 0.0);
  }
  EXPECT_EQ(total, 1.0);
}

TEST(RunScenarioTest, IndependentOfWorkerCount) {
  const ScenarioResult one = RunScenario(SmallConfig(20, 1));
  const ScenarioResult three = RunScenario(SmallConfig(20, 3));
  EXPECT_EQ(OutcomesCsv(one.records), OutcomesCsv(three.records));
  EXPECT_EQ(HistogramJson(one), HistogramJson(three));
  ASSERT_EQ(one.trajectories.size(), three.trajectories.size());
  for (std::size_t i = 0; i < one.trajectories.size(); ++i) {
    EXPECT_EQ(one.trajectories[i].mean_focal, three.trajectories[i].mean_focal);
    EXPECT_EQ(one.trajectories[i].sd_opp, three.trajectories[i].sd_opp);
  }
}

TEST(RunScenarioTest, RecordsMatchStoredHistories) {
  ExperimentConfig c = SmallConfig(6, 2);
  c.keep_histories = 6;
  const ScenarioResult r = RunScenario(c);
  ASSERT_EQ(r.histories.size(), 6u);
  double fractions = 0;
  for (const auto& e : r.histogram.entries) fractions += e.fraction;
  EXPECT_NEAR(fractions, 1.0, 1e-12);
  for (int i = 0; i < 6; ++i) {
    const RunRecord& rec = r.records[i];
    EXPECT_EQ(rec.run_id, i);
    EXPECT_EQ(rec.seed, DeriveRunSeed(4242, i));
    const RunHistory& h = r.histories[i];
    Vec sum(4, 0.0);
    for (const auto& round : h.rounds) {
      for (int k = 0; k < 4; ++k) sum[k] += round.payoff[k];
    }
    for (double& v : sum) v /= h.rounds.size();
    EXPECT_NEAR(rec.mean_obj_reward, Scalarize(c.focal_objective, sum), 1e-12);
    EXPECT_EQ(rec.outcome, ClassifyOutcome(h, 500, BosLabels()));
    EXPECT_EQ(RunHistoryToJson(h), RunHistoryToJson(SimulateRun(c, rec.seed)));
    ASSERT_TRUE(rec.audit.has_value());
    EXPECT_TRUE(rec.audit->ok);
  }
}

TEST(RunScenarioTest, BilevelFocalOutearnsOpponentInBBClass) {
  ExperimentConfig c = BuildConfig({{"runs", "40"}, {"audit.enabled", "false"}});
  const ScenarioResult r = RunScenario(c);
  const auto bb = std::find_if(r.trajectories.begin(), r.trajectories.end(),
                               [](const Trajectory& t) { return t.label == "BB"; });
  ASSERT_NE(bb, r.trajectories.end());
  for (std::size_t t = bb->mean_focal.size() - 1000; t < bb->mean_focal.size(); ++t) {
    ASSERT_GT(bb->mean_focal[t], bb->mean_opp[t]) << t;
  }
}

TEST(EmitReportTest, WritesArtifacts) {
  const fs::path dir = fs::temp_directory_path() / "adascal_emit_report_test";
  fs::remove_all(dir);
  ExperimentConfig c = SmallConfig(8, 2);
  c.keep_histories = 2;
  const ScenarioResult r = RunScenario(c);
  EmitReport(r, c, dir.string());

  const std::string csv = Slurp(dir / "outcomes.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "run_id,seed,outcome,mean_obj_reward");
  EXPECT_EQ(csv, OutcomesCsv(r.records));

  const auto hist = nlohmann::json::parse(Slurp(dir / "histogram.json"));
  EXPECT_EQ(hist["total"], 8);
  for (const auto& e : r.histogram.entries) {
    const bool present = fs::exists(dir / ("traj_" + e.label + ".csv"));
    EXPECT_EQ(present, e.count > 0) << e.label;
    if (e.count == 0) {
      const auto& omitted = hist["omitted_trajectories"];
      EXPECT_NE(std::find(omitted.begin(), omitted.end(), e.label), omitted.end());
      EXPECT_TRUE(hist["trajectories"][e.label].is_null());
    }
  }
  const std::string traj = Slurp(dir / ("traj_" + r.records[0].outcome + ".csv"));
  EXPECT_EQ(traj.substr(0, traj.find('\n')), "round,mean_focal,sd_focal,mean_opp,sd_opp");
  EXPECT_EQ(std::count(traj.begin(), traj.end(), '\n'), 3001);

  const ExperimentConfig back = ConfigFromResolvedJson(Slurp(dir / "config.resolved.json"));
  EXPECT_EQ(ResolvedConfigJson(back), ResolvedConfigJson(c));
  EXPECT_TRUE(fs::exists(dir / "audit_summary.json"));
  EXPECT_TRUE(fs::exists(dir / "histories" / "run_1.json"));

  const StoredOutcomes stored = ReadOutcomesCsv((dir / "outcomes.csv").string());
  ASSERT_EQ(stored.records.size(), 8u);
  for (const auto& e : r.histogram.entries) {
    EXPECT_EQ(stored.histogram.Fraction(e.label), e.fraction) << e.label;
  }
  fs::remove_all(dir);
}

TEST(EmitReportTest, UnwritableDirectoryNamesThePath) {
  const fs::path file = fs::temp_directory_path() / "adascal_not_a_dir";
  std::ofstream(file) << "x";
  const ExperimentConfig c = SmallConfig(1, 1);
  try {
    EmitReport(RunScenario(c), c, (file / "out").string());
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("adascal_not_a_dir"), std::string::npos);
  }
  fs::remove(file);
}

}  // namespace
}  // namespace adascal
