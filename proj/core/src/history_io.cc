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

#include "adascal/history_io.h"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>

namespace adascal {
namespace {

using nlohmann::json;

constexpr const char* kFormat = "adascal.run_history/1";

const json& Field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw std::invalid_argument("run history: missing field " + where + "." +
                                key);
  }
  return obj.at(key);
}

template <typename T>
T Get(const json& obj, const char* key, const std::string& where) {
  try {
    return Field(obj, key, where).get<T>();
  } catch (const json::exception& e) {
    throw std::invalid_argument("run history: bad field " + where + "." + key +
                                ": " + e.what());
  }
}

json Weights(const std::vector<WeightVector>& ws) {
  json out = json::array();
  for (const auto& w : ws) out.push_back(w.coords());
  return out;
}

std::vector<SimplexPoint> Rows(const json& arr, const std::string& where) {
  std::vector<SimplexPoint> rows;
  for (const auto& r : arr) {
    try {
      rows.push_back(SimplexPoint::FromProbs(r.get<Vec>()));
    } catch (const std::exception& e) {
      throw std::invalid_argument("run history: bad distribution in " + where +
                                  ": " + e.what());
    }
  }
  return rows;
}

}  // namespace

std::string RunHistoryToJson(const RunHistory& h) {
  json j;
  j["format"] = kFormat;
  j["horizon"] = h.horizon;
  j["block_len"] = h.block_len;
  j["num_actions"] = h.num_actions;
  j["payoff_dim"] = h.payoff_dim;
  j["payoff_bound"] = h.payoff_bound;
  j["params"] = {{"eta_p", h.params.eta_p},
                 {"eta_q", h.params.eta_q},
                 {"gamma_p", h.params.gamma_p},
                 {"gamma_q", h.params.gamma_q}};
  j["candidates"] = Weights(h.candidates);
  j["objective"] = h.objective.coords();
  json rounds = json::array();
  for (const RoundRecord& r : h.rounds) {
    rounds.push_back({{"t", r.round},
                      {"block", r.block},
                      {"deployed", r.deployed},
                      {"a", r.focal_action},
                      {"b", r.opponent_action},
                      {"u", r.payoff},
                      {"r", r.shaping_reward},
                      {"r_opp", r.opponent_reward},
                      {"q", r.focal_dist.probs()},
                      {"g", r.estimate}});
  }
  j["rounds"] = std::move(rounds);
  json blocks = json::array();
  for (const BlockRecord& b : h.blocks) {
    blocks.push_back({{"block", b.block},
                      {"first", b.rounds.first},
                      {"last", b.rounds.last},
                      {"deployed", b.deployed},
                      {"p", b.outer_before.probs()},
                      {"r_obj", b.objective_reward},
                      {"g", b.outer_estimate}});
  }
  j["blocks"] = std::move(blocks);
  j["final_outer"] = h.final_outer.probs();
  json rows = json::array();
  for (const auto& row : h.final_policy) rows.push_back(row.probs());
  j["final_policy"] = std::move(rows);
  return j.dump();
}

RunHistory RunHistoryFromJson(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("run history: not valid JSON: ") +
                                e.what());
  }
  if (Get<std::string>(j, "format", "$") != kFormat) {
    throw std::invalid_argument("run history: unknown format tag");
  }
  const json& params = Field(j, "params", "$");
  std::vector<WeightVector> candidates;
  for (const auto& c : Field(j, "candidates", "$")) {
    candidates.push_back(WeightVector::FromUnit(c.get<Vec>()));
  }
  RunHistory h{Get<int>(j, "horizon", "$"),
               Get<int>(j, "block_len", "$"),
               Get<int>(j, "num_actions", "$"),
               Get<int>(j, "payoff_dim", "$"),
               Get<double>(j, "payoff_bound", "$"),
               BilevelParams{Get<double>(params, "eta_p", "$.params"),
                             Get<double>(params, "eta_q", "$.params"),
                             Get<double>(params, "gamma_p", "$.params"),
                             Get<double>(params, "gamma_q", "$.params")},
               std::move(candidates),
               WeightVector::FromUnit(Get<Vec>(j, "objective", "$")),
               {},
               {},
               SimplexPoint::Uniform(1),
               {}};
  const json& rounds = Field(j, "rounds", "$");
  h.rounds.reserve(rounds.size());
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const json& r = rounds[i];
    const std::string where = "$.rounds[" + std::to_string(i) + "]";
    h.rounds.push_back(RoundRecord{
        Get<int>(r, "t", where), Get<int>(r, "block", where),
        Get<int>(r, "deployed", where), Get<int>(r, "a", where),
        Get<int>(r, "b", where), Get<Vec>(r, "u", where),
        Get<double>(r, "r", where), Get<double>(r, "r_opp", where),
        Rows(json::array({Field(r, "q", where)}), where).front(),
        Get<Vec>(r, "g", where)});
  }
  const json& blocks = Field(j, "blocks", "$");
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const json& b = blocks[i];
    const std::string where = "$.blocks[" + std::to_string(i) + "]";
    h.blocks.push_back(BlockRecord{
        Get<int>(b, "block", where),
        Interval{Get<int>(b, "first", where), Get<int>(b, "last", where)},
        Get<int>(b, "deployed", where),
        Rows(json::array({Field(b, "p", where)}), where).front(),
        Get<double>(b, "r_obj", where), Get<Vec>(b, "g", where)});
  }
  h.final_outer =
      Rows(json::array({Field(j, "final_outer", "$")}), "$.final_outer").front();
  h.final_policy = Rows(Field(j, "final_policy", "$"), "$.final_policy");
  return h;
}

void WriteRunHistory(const RunHistory& history, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << RunHistoryToJson(history) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

RunHistory ReadRunHistory(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return RunHistoryFromJson(buffer.str());
}

}  // namespace adascal
