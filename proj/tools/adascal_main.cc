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

// adascal: simulate, audit, nash and report subcommands.
//
// Exit codes: 0 success, 1 validation or I/O error, 2 bound-audit violation.

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "adascal/experiment_config.h"
#include "adascal/games.h"
#include "adascal/harness.h"
#include "adascal/history_io.h"
#include "adascal/regret_audit.h"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kAuditViolation = 2;

adascal::ExperimentConfig Load(const std::string& path,
                               const std::vector<std::string>& sets) {
  adascal::ConfigEntries overrides;
  for (const auto& s : sets) overrides.push_back(adascal::ParseOverride(s));
  return adascal::LoadConfigFile(path, overrides);
}

void PrintHistogram(const adascal::OutcomeHistogram& h) {
  for (const auto& e : h.entries) {
    std::cout << e.label << ' ' << e.count << ' '
              << adascal::FormatDouble(e.fraction) << '\n';
  }
}

int Simulate(const std::string& config_path, const std::vector<std::string>& sets,
             const std::string& out_dir) {
  const adascal::ExperimentConfig config = Load(config_path, sets);
  const adascal::ScenarioResult result = adascal::RunScenario(config);
  adascal::EmitReport(result, config, out_dir);
  std::cout << "runs " << result.histogram.total << '\n';
  PrintHistogram(result.histogram);
  if (config.audit) {
    int failing = 0;
    for (const auto& r : result.records) failing += !r.audit->ok;
    if (failing > 0) {
      std::cerr << "audit: " << failing << " run(s) violate a regret bound or "
                << "fail integrity checks; see audit_summary.json\n";
      return kAuditViolation;
    }
  }
  return kOk;
}

int Audit(const std::string& history_path, const std::string& out_path,
          const std::string& config_path) {
  const adascal::RunHistory h = adascal::ReadRunHistory(history_path);
  std::optional<adascal::ExperimentConfig> config;
  if (!config_path.empty()) config = Load(config_path, {});
  const adascal::RegretReport report =
      adascal::AuditRunHistory(h, config ? &config->game : nullptr);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
  out << adascal::RegretReportToJson(report) << '\n';
  if (!out) throw std::runtime_error("write failed: " + out_path);
  std::cout << "bound violations " << report.BoundViolations()
            << ", integrity errors " << report.integrity_errors.size()
            << ", oversized estimates " << report.estimate_bound_violations << '\n';
  return report.ok() ? kOk : kAuditViolation;
}

void PrintNash(const adascal::VectorGame& game, const std::string& title,
               const adascal::WeightVector& focal, const adascal::WeightVector& opp) {
  const std::vector<adascal::WeightVector> w = {focal, opp};
  const auto ne = adascal::PureNash(adascal::ScalarizedGame(game, w));
  std::cout << title << ":";
  if (ne.empty()) std::cout << " (none)";
  for (const auto& profile : ne) std::cout << ' ' << game.ProfileLabel(profile);
  std::cout << '\n';
}

int Nash(const std::string& config_path, const std::vector<std::string>& sets) {
  const adascal::ExperimentConfig c = Load(config_path, sets);
  PrintNash(c.game, "objective", c.focal_objective, c.opponent_objective);
  for (std::size_t j = 0; j < c.candidates.size(); ++j) {
    PrintNash(c.game, "candidate " + std::to_string(j), c.candidates[j],
              c.opponent_objective);
  }
  return kOk;
}

int Report(const std::string& in_dir) {
  namespace fs = std::filesystem;
  const fs::path dir(in_dir);
  const adascal::StoredOutcomes stored =
      adascal::ReadOutcomesCsv((dir / "outcomes.csv").string());
  std::cout << "runs " << stored.histogram.total << '\n';
  PrintHistogram(stored.histogram);

  int status = kOk;
  const fs::path hist_path = dir / "histogram.json";
  if (fs::exists(hist_path)) {
    std::ifstream in(hist_path);
    const auto j = nlohmann::json::parse(in);
    for (const auto& e : j.at("outcomes")) {
      const auto* mine = stored.histogram.Find(e.at("label").get<std::string>());
      const int count = mine ? mine->count : 0;
      if (count != e.at("count").get<int>()) {
        std::cerr << "histogram.json: count for " << e.at("label")
                  << " disagrees with outcomes.csv\n";
        status = kInvalid;
      }
    }
  }

  const fs::path hdir = dir / "histories";
  if (fs::is_directory(hdir)) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(hdir)) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    int failing = 0;
    for (const auto& f : files) {
      if (!adascal::AuditRunHistory(adascal::ReadRunHistory(f.string())).ok()) {
        std::cerr << "audit failed: " << f.string() << '\n';
        ++failing;
      }
    }
    std::cout << "histories audited " << files.size() << ", failing " << failing << '\n';
    if (failing > 0 && status == kOk) status = kAuditViolation;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bi-level adaptive scalarization for vector-payoff games"};
  app.require_subcommand(1);

  std::string config_path, out_dir, history_path, out_path, in_dir;
  std::vector<std::string> sets;

  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its artifacts");
  simulate->add_option("--config", config_path, "Config file")->required();
  simulate->add_option("--set", sets, "Override, key=value (repeatable)");
  simulate->add_option("--out", out_dir, "Output directory")->required();

  auto* audit = app.add_subcommand("audit", "Audit a stored run history");
  audit->add_option("--history", history_path, "Run history JSON")->required();
  audit->add_option("--out", out_path, "Report JSON path")->required();
  audit->add_option("--config", config_path,
                    "Config whose game enables the realized-reward diagnostic");

  auto* nash = app.add_subcommand("nash", "Print pure equilibria of the scalarized games");
  nash->add_option("--config", config_path, "Config file")->required();
  nash->add_option("--set", sets, "Override, key=value (repeatable)");

  auto* report = app.add_subcommand("report", "Recompute aggregates from stored records");
  report->add_option("--in", in_dir, "Directory written by simulate")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (simulate->parsed()) return Simulate(config_path, sets, out_dir);
    if (audit->parsed()) return Audit(history_path, out_path, config_path);
    if (nash->parsed()) return Nash(config_path, sets);
    if (report->parsed()) return Report(in_dir);
  } catch (const adascal::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kInvalid;
}
