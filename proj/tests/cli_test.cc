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

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

// Per-test scratch directory so tests can run in parallel.
fs::path kScratch;

int Cli(const std::string& args) {
  const std::string cmd = std::string(ADASCAL_CLI) + " " + args + " > " +
                          (kScratch / "stdout.txt").string() + " 2> " +
                          (kScratch / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string Config(const std::string& name) {
  return (fs::path(ADASCAL_CONFIG_DIR) / name).string();
}

const char* kSmall =
    " --set rounds=2000 --set runs=4 --set classify.window=200 --set workers=2"
    " --set output.histories=2";

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    kScratch = fs::temp_directory_path() /
               (std::string("adascal_cli_") +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(kScratch);
    fs::create_directories(kScratch);
  }
  void TearDown() override { fs::remove_all(kScratch); }
};

TEST_F(CliTest, SimulateWritesArtifacts) {
  const fs::path out = kScratch / "s2";
  ASSERT_EQ(Cli("simulate --config " + Config("scenario2.conf") + kSmall + " --out " +
                out.string()),
            0)
      << Slurp(kScratch / "stderr.txt");
  for (const char* f : {"outcomes.csv", "histogram.json", "config.resolved.json",
                        "audit_summary.json", "histories/run_0.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  EXPECT_NE(Slurp(kScratch / "stdout.txt").find("runs 4"), std::string::npos);
  EXPECT_EQ(Cli("report --in " + out.string()), 0) << Slurp(kScratch / "stderr.txt");
}

TEST_F(CliTest, ValidationErrorsExitOne) {
  EXPECT_EQ(Cli("simulate --config " + Config("scenario2.conf") +
                " --set bilevel.block_len=0 --out " + (kScratch / "x").string()),
            1);
  EXPECT_NE(Slurp(kScratch / "stderr.txt").find("bilevel.block_len"), std::string::npos);
  EXPECT_EQ(Cli("simulate --config " + (kScratch / "missing.conf").string() + " --out " +
                (kScratch / "x").string()),
            1);
  EXPECT_EQ(Cli("simulate --out " + (kScratch / "x").string()), 1);
  EXPECT_EQ(Cli("frobnicate"), 1);
  std::ofstream(kScratch / "bad.json") << "{";
  EXPECT_EQ(Cli("audit --history " + (kScratch / "bad.json").string() + " --out " +
                (kScratch / "r.json").string()),
            1);
}

TEST_F(CliTest, NashListsObjectiveEquilibria) {
  ASSERT_EQ(Cli("nash --config " + Config("scenario2.conf")), 0);
  const std::string out = Slurp(kScratch / "stdout.txt");
  EXPECT_NE(out.find("objective: BB SS"), std::string::npos) << out;
  EXPECT_NE(out.find("candidate 2"), std::string::npos) << out;
}

TEST_F(CliTest, AuditFlagsTamperedHistoryWithTwo) {
  const fs::path out = kScratch / "s2";
  ASSERT_EQ(Cli("simulate --config " + Config("scenario2.conf") + kSmall + " --out " +
                out.string()),
            0);
  const fs::path hist = out / "histories" / "run_1.json";
  ASSERT_EQ(Cli("audit --history " + hist.string() + " --out " +
                (kScratch / "report.json").string() + " --config " +
                Config("scenario2.conf")),
            0);
  const auto report = nlohmann::json::parse(Slurp(kScratch / "report.json"));
  EXPECT_TRUE(report.contains("realized_objective_regret_diagnostic"));

  auto j = nlohmann::json::parse(Slurp(hist));
  j["blocks"][1]["r_obj"] = j["blocks"][1]["r_obj"].get<double>() + 1.0;
  std::ofstream(hist) << j.dump();
  EXPECT_EQ(Cli("audit --history " + hist.string() + " --out " +
                (kScratch / "report.json").string()),
            2);
  EXPECT_EQ(Cli("report --in " + out.string()), 2);
}

TEST_F(CliTest, ReportRejectsInconsistentHistogram) {
  const fs::path out = kScratch / "s1";
  ASSERT_EQ(Cli("simulate --config " + Config("scenario1.conf") + kSmall + " --out " +
                out.string()),
            0);
  auto j = nlohmann::json::parse(Slurp(out / "histogram.json"));
  j["outcomes"][0]["count"] = j["outcomes"][0]["count"].get<int>() + 1;
  std::ofstream(out / "histogram.json") << j.dump();
  EXPECT_EQ(Cli("report --in " + out.string()), 1);
}

}  // namespace
