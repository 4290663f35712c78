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

#include "adascal/regret_audit.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace adascal {
namespace {

double EstimateScale(int payoff_dim, double payoff_bound, double gamma) {
  return std::sqrt(static_cast<double>(payoff_dim)) * payoff_bound / gamma;
}

void CheckHistory(const RunHistory& h) {
  if (h.blocks.empty() || h.rounds.empty()) {
    throw std::invalid_argument("run history has no rounds or blocks");
  }
  if (static_cast<int>(h.rounds.size()) != h.horizon) {
    throw std::invalid_argument("run history is missing rounds");
  }
}

// Rounds of block k as a contiguous slice of the round log.
std::span<const RoundRecord> BlockRounds(const RunHistory& h, int k) {
  const BlockRecord& b = h.blocks.at(k);
  if (b.rounds.first < 1 || b.rounds.last > static_cast<int>(h.rounds.size()) ||
      b.rounds.size() <= 0) {
    throw std::invalid_argument("block " + std::to_string(k) +
                                " has an invalid round range");
  }
  return std::span<const RoundRecord>(h.rounds).subspan(b.rounds.first - 1,
                                                        b.rounds.size());
}

}  // namespace

double InnerBlockBound(int payoff_dim, double payoff_bound, double gamma_q,
                       int block_rounds, int num_actions) {
  return EstimateScale(payoff_dim, payoff_bound, gamma_q) *
         std::sqrt(2.0 * block_rounds * std::log(num_actions));
}

double OuterBound(int payoff_dim, double payoff_bound, double gamma_p,
                  int num_blocks, int num_candidates) {
  return EstimateScale(payoff_dim, payoff_bound, gamma_p) *
         std::sqrt(2.0 * num_blocks * std::log(num_candidates));
}

double BilevelBound(int payoff_dim, double payoff_bound, double gamma_p,
                    double gamma_q, int num_blocks, int horizon,
                    int num_candidates, int num_actions) {
  const double h = num_blocks;
  return std::sqrt(static_cast<double>(payoff_dim)) * payoff_bound *
         (std::sqrt(2.0 * h * std::log(num_candidates)) / gamma_p +
          std::sqrt(2.0 * h * horizon * std::log(num_actions)) / gamma_q);
}

SimplexPoint InnerHindsight(std::span<const Vec> estimates) {
  if (estimates.empty()) {
    throw std::invalid_argument("InnerHindsight: no estimates");
  }
  Vec total(estimates.front().size(), 0.0);
  if (total.empty()) throw std::invalid_argument("InnerHindsight: empty vector");
  for (const Vec& g : estimates) {
    if (g.size() != total.size()) {
      throw std::invalid_argument("InnerHindsight: ragged estimates");
    }
    for (std::size_t a = 0; a < g.size(); ++a) total[a] += g[a];
  }
  const auto best = std::min_element(total.begin(), total.end());
  return SimplexPoint::PointMass(static_cast<int>(total.size()),
                                 static_cast<int>(best - total.begin()));
}

InnerBlockRegret ComputeInnerBlockRegret(const RunHistory& history, int k) {
  if (k < 0 || k >= history.num_blocks()) {
    throw std::out_of_range("block " + std::to_string(k));
  }
  const auto rounds = BlockRounds(history, k);
  std::vector<Vec> estimates;
  estimates.reserve(rounds.size());
  for (const RoundRecord& r : rounds) estimates.push_back(r.estimate);
  const SimplexPoint best = InnerHindsight(estimates);
  int comparator = 0;
  while (best[comparator] != 1.0) ++comparator;

  double value = 0.0;
  for (const RoundRecord& r : rounds) {
    value += Dot(r.focal_dist.probs(), r.estimate) - r.estimate[comparator];
  }
  return InnerBlockRegret{
      k, static_cast<int>(rounds.size()), comparator, value,
      InnerBlockBound(history.payoff_dim, history.payoff_bound,
                      history.params.gamma_q, static_cast<int>(rounds.size()),
                      history.num_actions)};
}

OuterRegret ComputeOuterRegret(const RunHistory& history,
                               const SimplexPoint& comparator) {
  const int m = history.num_candidates();
  if (comparator.size() != m) {
    throw std::invalid_argument("outer comparator has the wrong size");
  }
  if (history.blocks.empty()) throw std::invalid_argument("no blocks logged");
  double played = 0.0;
  Vec totals(m, 0.0);
  for (const BlockRecord& b : history.blocks) {
    if (b.outer_before.size() != m || static_cast<int>(b.outer_estimate.size()) != m) {
      throw std::invalid_argument("block " + std::to_string(b.block) +
                                  " has outer fields of the wrong size");
    }
    played += Dot(b.outer_before.probs(), b.outer_estimate);
    for (int j = 0; j < m; ++j) totals[j] += b.outer_estimate[j];
  }
  OuterRegret out;
  out.value = played - Dot(comparator.probs(), totals);
  out.bound = OuterBound(history.payoff_dim, history.payoff_bound,
                         history.params.gamma_p, history.num_blocks(), m);
  out.vertex_values.resize(m);
  for (int j = 0; j < m; ++j) out.vertex_values[j] = played - totals[j];
  const auto best =
      std::max_element(out.vertex_values.begin(), out.vertex_values.end());
  out.best_vertex = static_cast<int>(best - out.vertex_values.begin());
  out.best_vertex_value = *best;
  return out;
}

BilevelRegret ComputeBilevelRegret(const RunHistory& history) {
  CheckHistory(history);
  const OuterRegret outer =
      ComputeOuterRegret(history, history.blocks.front().outer_before);
  double inner_sum = 0.0;
  for (int k = 0; k < history.num_blocks(); ++k) {
    inner_sum += ComputeInnerBlockRegret(history, k).value;
  }
  return BilevelRegret{
      outer.best_vertex_value + inner_sum,
      BilevelBound(history.payoff_dim, history.payoff_bound,
                   history.params.gamma_p, history.params.gamma_q,
                   history.num_blocks(), history.horizon,
                   history.num_candidates(), history.num_actions),
      outer.best_vertex_value, inner_sum};
}

RealizedRegret ComputeRealizedObjectiveRegret(const RunHistory& history,
                                              const VectorGame& game) {
  if (game.num_players() != 2 || game.action_count(0) != history.num_actions) {
    throw std::invalid_argument("game does not match the run history");
  }
  const int n = history.num_actions;
  Vec counterfactual(n, 0.0);
  double realized = 0.0;
  for (const RoundRecord& r : history.rounds) {
    realized += Scalarize(history.objective, r.payoff);
    for (int a = 0; a < n; ++a) {
      const int joint[2] = {a, r.opponent_action};
      counterfactual[a] += Scalarize(history.objective, game.Payoff(joint, 0));
    }
  }
  const auto best = std::max_element(counterfactual.begin(), counterfactual.end());
  return RealizedRegret{*best - realized,
                        static_cast<int>(best - counterfactual.begin())};
}

int RegretReport::BoundViolations() const {
  int count = 0;
  for (const auto& b : inner) count += b.violated() ? 1 : 0;
  count += outer.violated() ? 1 : 0;
  count += bilevel.violated() ? 1 : 0;
  return count;
}

RegretReport AuditRunHistory(const RunHistory& history, const VectorGame* game) {
  CheckHistory(history);
  RegretReport report{history.payoff_dim,
                      history.payoff_bound,
                      history.params.gamma_p,
                      history.params.gamma_q,
                      history.num_actions,
                      history.num_candidates(),
                      history.num_blocks(),
                      history.horizon,
                      {},
                      ComputeOuterRegret(history, history.blocks.front().outer_before),
                      ComputeBilevelRegret(history),
                      {},
                      {},
                      0};
  for (int k = 0; k < history.num_blocks(); ++k) {
    report.inner.push_back(ComputeInnerBlockRegret(history, k));
  }
  if (game != nullptr) {
    report.realized = ComputeRealizedObjectiveRegret(history, *game);
  }

  const double inner_cap = EstimateScale(history.payoff_dim, history.payoff_bound,
                                         history.params.gamma_q);
  const double outer_cap = EstimateScale(history.payoff_dim, history.payoff_bound,
                                         history.params.gamma_p);
  auto sup = [](const Vec& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  };
  for (const RoundRecord& r : history.rounds) {
    const std::string where = "round " + std::to_string(r.round);
    if (r.deployed < 0 || r.deployed >= history.num_candidates()) {
      report.integrity_errors.push_back(where + ": deployed index out of range");
      continue;
    }
    if (Scalarize(history.candidates[r.deployed], r.payoff) != r.shaping_reward) {
      report.integrity_errors.push_back(where + ": shaping reward mismatch");
    }
    if (IxEstimate(r.focal_dist, r.focal_action, r.shaping_reward,
                   history.params.gamma_q) != r.estimate) {
      report.integrity_errors.push_back(where + ": inner estimate mismatch");
    }
    if (sup(r.estimate) > inner_cap) ++report.estimate_bound_violations;
  }
  for (int k = 0; k < history.num_blocks(); ++k) {
    const BlockRecord& b = history.blocks[k];
    const std::string where = "block " + std::to_string(k);
    double sum = 0.0;
    for (const RoundRecord& r : BlockRounds(history, k)) {
      sum += Scalarize(history.objective, r.payoff);
      if (r.deployed != b.deployed || r.block != b.block) {
        report.integrity_errors.push_back(where + ": round " +
                                          std::to_string(r.round) +
                                          " logs a different block or index");
      }
    }
    if (std::abs(sum / b.rounds.size() - b.objective_reward) > 1e-12) {
      report.integrity_errors.push_back(where + ": block reward mismatch");
    }
    if (IxEstimate(b.outer_before, b.deployed, b.objective_reward,
                   history.params.gamma_p) != b.outer_estimate) {
      report.integrity_errors.push_back(where + ": outer estimate mismatch");
    }
    if (sup(b.outer_estimate) > outer_cap) ++report.estimate_bound_violations;
  }
  return report;
}

std::string RegretReportToJson(const RegretReport& r) {
  using nlohmann::json;
  json inner = json::array();
  for (const auto& b : r.inner) {
    inner.push_back({{"block", b.block},
                     {"rounds", b.rounds},
                     {"comparator", b.comparator},
                     {"value", b.value},
                     {"bound", b.bound},
                     {"violated", b.violated()}});
  }
  json j = {
      {"constants",
       {{"d", r.payoff_dim},
        {"U", r.payoff_bound},
        {"gamma_p", r.gamma_p},
        {"gamma_q", r.gamma_q},
        {"num_actions", r.num_actions},
        {"m", r.num_candidates},
        {"h", r.num_blocks},
        {"T", r.horizon}}},
      {"inner", std::move(inner)},
      {"outer",
       {{"value_vs_initial", r.outer.value},
        {"bound", r.outer.bound},
        {"best_vertex", r.outer.best_vertex},
        {"best_vertex_value", r.outer.best_vertex_value},
        {"vertex_values", r.outer.vertex_values},
        {"violated", r.outer.violated()}}},
      {"bilevel",
       {{"value", r.bilevel.value},
        {"bound", r.bilevel.bound},
        {"outer_value", r.bilevel.outer_value},
        {"inner_sum", r.bilevel.inner_sum},
        {"violated", r.bilevel.violated()}}},
      {"tolerance", kAuditTolerance},
      {"bound_violations", r.BoundViolations()},
      {"estimate_bound_violations", r.estimate_bound_violations},
      {"integrity_errors", r.integrity_errors},
      {"ok", r.ok()},
  };
  if (r.realized) {
    j["realized_objective_regret_diagnostic"] = {
        {"note", "best fixed action on realized objective reward; no bound applies"},
        {"value", r.realized->value},
        {"best_action", r.realized->best_action}};
  }
  return j.dump(2);
}

double LemmaStepSize(int dim, int rounds, double loss_bound) {
  if (dim < 2 || rounds < 1 || !(loss_bound > 0.0)) {
    throw std::invalid_argument("LemmaStepSize: need dim >= 2, T >= 1, bound > 0");
  }
  return std::sqrt(std::log(static_cast<double>(dim))) / loss_bound *
         std::sqrt(2.0 / rounds);
}

OmdLemmaReport VerifyOmdLemma(std::span<const Vec> losses, double eta, int dim,
                              std::optional<double> loss_bound) {
  if (dim <= 0) throw std::invalid_argument("VerifyOmdLemma: dim must be > 0");
  double observed = 0.0;
  for (const Vec& g : losses) {
    if (static_cast<int>(g.size()) != dim) {
      throw std::invalid_argument("VerifyOmdLemma: loss of the wrong size");
    }
    for (double x : g) observed = std::max(observed, std::abs(x));
  }
  const double lbar = loss_bound.value_or(observed);
  const int rounds = static_cast<int>(losses.size());

  SimplexPoint z = SimplexPoint::Uniform(dim);
  double played = 0.0;
  Vec totals(dim, 0.0);
  for (const Vec& g : losses) {
    played += Dot(z.probs(), g);
    for (int a = 0; a < dim; ++a) totals[a] += g[a];
    z = OmdEntropyStep(z, g, eta);
  }
  OmdLemmaReport report{dim, rounds, eta, lbar,
                        std::log(static_cast<double>(dim)) / eta +
                            eta * rounds * lbar * lbar / 2.0,
                        Vec(dim), -std::numeric_limits<double>::infinity(), 0};
  for (int a = 0; a < dim; ++a) {
    report.vertex_regret[a] = played - totals[a];
    report.max_regret = std::max(report.max_regret, report.vertex_regret[a]);
    if (report.vertex_regret[a] > report.bound + kAuditTolerance) {
      ++report.violations;
    }
  }
  if (rounds == 0) report.max_regret = 0.0;
  return report;
}

}  // namespace adascal
