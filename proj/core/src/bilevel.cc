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

#include "adascal/bilevel.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adascal {

BlockSchedule::BlockSchedule(int horizon, int block_len)
    : horizon_(horizon), block_len_(block_len) {
  if (horizon <= 0) throw std::invalid_argument("horizon must be positive");
  if (block_len <= 0) throw std::invalid_argument("block length must be positive");
  block_count_ = (horizon + block_len - 1) / block_len;
}

Interval BlockSchedule::Block(int k) const {
  if (k < 0 || k >= block_count_) {
    throw std::out_of_range("block " + std::to_string(k) + " outside [0, " +
                            std::to_string(block_count_) + ")");
  }
  const int first = k * block_len_ + 1;
  const int last = std::min((k + 1) * block_len_, horizon_);
  return Interval{first, last};
}

BilevelState BilevelState::Make(std::vector<WeightVector> candidates,
                                WeightVector objective, int num_actions,
                                BilevelParams params,
                                std::optional<SimplexPoint> initial_outer,
                                std::optional<SimplexPoint> initial_row) {
  if (candidates.empty()) {
    throw std::invalid_argument("bilevel learner needs at least one candidate");
  }
  if (num_actions <= 0) throw std::invalid_argument("num_actions must be positive");
  const int m = static_cast<int>(candidates.size());
  SimplexPoint outer =
      initial_outer ? *initial_outer : SimplexPoint::Uniform(m);
  SimplexPoint row =
      initial_row ? *initial_row : SimplexPoint::Uniform(num_actions);
  BilevelState state{std::move(outer), std::vector<SimplexPoint>(m, row),
                     std::move(candidates), std::move(objective), params};
  state.Validate();
  return state;
}

void BilevelState::Validate() const {
  const int m = num_candidates();
  if (m < 1) throw std::invalid_argument("bilevel state has no candidates");
  if (outer.size() != m) {
    throw std::invalid_argument("outer distribution has " +
                                std::to_string(outer.size()) +
                                " entries for " + std::to_string(m) +
                                " candidates");
  }
  if (!outer.strictly_positive()) {
    throw std::invalid_argument("outer distribution must have no zero entries");
  }
  if (static_cast<int>(policy.size()) != m) {
    throw std::invalid_argument("policy matrix needs one row per candidate");
  }
  for (int j = 0; j < m; ++j) {
    if (policy[j].size() != policy.front().size()) {
      throw std::invalid_argument("policy rows differ in size");
    }
    if (!policy[j].strictly_positive()) {
      throw std::invalid_argument("policy row " + std::to_string(j) +
                                  " must have no zero entries");
    }
    if (candidates[j].dim() != objective.dim()) {
      throw std::invalid_argument("candidate " + std::to_string(j) +
                                  " dimension differs from the objective");
    }
  }
  if (!(params.eta_p > 0.0) || !(params.eta_q > 0.0)) {
    throw std::invalid_argument("step sizes must be > 0");
  }
  if (!(params.gamma_p >= 0.0) || !(params.gamma_q >= 0.0)) {
    throw std::invalid_argument("IX parameters must be >= 0");
  }
}

ExpIxOpponentEnvironment::ExpIxOpponentEnvironment(VectorGame game,
                                                   LearnerState opponent,
                                                   WeightVector opponent_weight,
                                                   RandomStream rng)
    : game_(std::move(game)),
      opponent_(std::move(opponent)),
      opponent_weight_(std::move(opponent_weight)),
      rng_(rng) {
  if (game_.num_players() != 2) {
    throw std::invalid_argument("environment needs a two-player game");
  }
  if (opponent_.dist.size() != game_.action_count(1)) {
    throw std::invalid_argument("opponent policy size does not match its actions");
  }
  if (opponent_weight_.dim() != game_.payoff_dim(1)) {
    throw std::invalid_argument("opponent weight dimension mismatch");
  }
}

EnvOutcome ExpIxOpponentEnvironment::Step(int focal_action) {
  if (focal_action < 0 || focal_action >= game_.action_count(0)) {
    throw std::out_of_range("focal action " + std::to_string(focal_action));
  }
  const int b = Sample(opponent_.dist, rng_);
  const int joint[2] = {focal_action, b};
  const std::size_t p = game_.indexer().Index(joint);
  const double opp_reward = Scalarize(opponent_weight_, game_.PayoffAt(p, 1));
  opponent_ = ExpIxStep(opponent_, b, opp_reward);
  auto u = game_.PayoffAt(p, 0);
  return EnvOutcome{Vec(u.begin(), u.end()), b, opp_reward};
}

FixedOpponentEnvironment::FixedOpponentEnvironment(
    VectorGame game, SimplexPoint policy, RandomStream rng,
    std::optional<WeightVector> report_weight)
    : game_(std::move(game)),
      policy_(std::move(policy)),
      rng_(rng),
      report_weight_(std::move(report_weight)) {
  if (game_.num_players() != 2) {
    throw std::invalid_argument("environment needs a two-player game");
  }
  if (policy_.size() != game_.action_count(1)) {
    throw std::invalid_argument("opponent policy size does not match its actions");
  }
  if (report_weight_ && report_weight_->dim() != game_.payoff_dim(1)) {
    throw std::invalid_argument("opponent weight dimension mismatch");
  }
}

EnvOutcome FixedOpponentEnvironment::Step(int focal_action) {
  if (focal_action < 0 || focal_action >= game_.action_count(0)) {
    throw std::out_of_range("focal action " + std::to_string(focal_action));
  }
  const int b = Sample(policy_, rng_);
  const int joint[2] = {focal_action, b};
  const std::size_t p = game_.indexer().Index(joint);
  const double opp_reward =
      report_weight_ ? Scalarize(*report_weight_, game_.PayoffAt(p, 1)) : 0.0;
  auto u = game_.PayoffAt(p, 0);
  return EnvOutcome{Vec(u.begin(), u.end()), b, opp_reward};
}

double RunHistory::MeanObjectiveReward() const {
  if (rounds.empty()) throw std::invalid_argument("empty run history");
  double sum = 0.0;
  for (const RoundRecord& r : rounds) sum += Scalarize(objective, r.payoff);
  return sum / static_cast<double>(rounds.size());
}

RunStreams RunStreams::Derive(std::uint64_t run_seed) {
  // Distinct odd multipliers per stream, mixed through splitmix64.
  return RunStreams{
      RandomStream(SplitMix64(run_seed ^ 0xA0761D6478BD642FULL)),
      RandomStream(SplitMix64(run_seed ^ 0xE7037ED1A0B428DBULL)),
      RandomStream(SplitMix64(run_seed ^ 0x8EBC6AF09C88C6E3ULL)),
  };
}

InnerBlockResult InnerAlg(const BilevelState& state, int candidate,
                          Interval block, int block_index, Environment& env,
                          RandomStream& focal_rng) {
  if (candidate < 0 || candidate >= state.num_candidates()) {
    throw std::out_of_range("candidate index " + std::to_string(candidate));
  }
  if (block.size() <= 0) throw std::invalid_argument("empty block");
  if (env.num_focal_actions() != state.num_actions()) {
    throw std::invalid_argument("environment action count differs from the policy");
  }
  InnerBlockResult result{state, 0.0, {}};
  result.rounds.reserve(block.size());
  SimplexPoint& row = result.state.policy[candidate];
  const WeightVector& deployed = state.candidates[candidate];
  double objective_sum = 0.0;
  for (int t = block.first; t <= block.last; ++t) {
    const int a = Sample(row, focal_rng);
    EnvOutcome out = env.Step(a);
    if (static_cast<int>(out.payoff.size()) != deployed.dim()) {
      throw std::runtime_error("environment returned a payoff of dimension " +
                               std::to_string(out.payoff.size()) +
                               " at round " + std::to_string(t));
    }
    objective_sum += Scalarize(state.objective, out.payoff);
    const double r = Scalarize(deployed, out.payoff);
    Vec g = IxEstimate(row, a, r, state.params.gamma_q);
    SimplexPoint next = OmdEntropyStep(row, g, state.params.eta_q);
    result.rounds.push_back(RoundRecord{t, block_index, candidate, a,
                                        out.opponent_action,
                                        std::move(out.payoff), r,
                                        out.opponent_reward, row,
                                        std::move(g)});
    row = std::move(next);
  }
  result.objective_reward = objective_sum / block.size();
  return result;
}

RunHistory OuterAlg(BilevelState state, const BlockSchedule& schedule,
                    Environment& env, RandomStream& outer_rng,
                    RandomStream& focal_rng) {
  state.Validate();
  if (env.payoff_dim() != state.objective.dim()) {
    throw std::invalid_argument("environment payoff dimension differs from the weights");
  }
  RunHistory history{schedule.horizon(),
                     schedule.block_len(),
                     state.num_actions(),
                     env.payoff_dim(),
                     env.payoff_bound(),
                     state.params,
                     state.candidates,
                     state.objective,
                     {},
                     {},
                     state.outer,
                     {}};
  history.rounds.reserve(schedule.horizon());
  history.blocks.reserve(schedule.block_count());
  for (int k = 0; k < schedule.block_count(); ++k) {
    const Interval block = schedule.Block(k);
    const int j = Sample(state.outer, outer_rng);
    InnerBlockResult inner = InnerAlg(state, j, block, k, env, focal_rng);
    Vec g = IxEstimate(state.outer, j, inner.objective_reward,
                       state.params.gamma_p);
    SimplexPoint next_outer =
        OmdEntropyStep(state.outer, g, state.params.eta_p);
    history.blocks.push_back(BlockRecord{k, block, j, state.outer,
                                         inner.objective_reward,
                                         std::move(g)});
    for (RoundRecord& r : inner.rounds) history.rounds.push_back(std::move(r));
    state = std::move(inner.state);
    state.outer = std::move(next_outer);
  }
  history.final_outer = state.outer;
  history.final_policy = state.policy;
  return history;
}

RunHistory RunExpIxBaseline(LearnerState focal, WeightVector weight,
                            int horizon, Environment& env,
                            RandomStream& focal_rng) {
  const BilevelParams params{focal.eta, focal.eta, focal.gamma, focal.gamma};
  BilevelState state = BilevelState::Make({weight}, weight, focal.dist.size(),
                                          params, {}, focal.dist);
  const BlockSchedule schedule(horizon, horizon);
  if (env.payoff_dim() != weight.dim()) {
    throw std::invalid_argument("environment payoff dimension differs from the weight");
  }
  RunHistory history{horizon,  horizon, focal.dist.size(), env.payoff_dim(),
                     env.payoff_bound(), params, {weight}, weight, {}, {},
                     state.outer, {}};
  history.rounds.reserve(horizon);
  const Interval all = schedule.Block(0);
  LearnerState learner = std::move(focal);
  double objective_sum = 0.0;
  for (int t = all.first; t <= all.last; ++t) {
    const int a = Sample(learner.dist, focal_rng);
    EnvOutcome out = env.Step(a);
    const double r = Scalarize(weight, out.payoff);
    objective_sum += r;
    Vec g = IxEstimate(learner.dist, a, r, learner.gamma);
    SimplexPoint next = OmdEntropyStep(learner.dist, g, learner.eta);
    history.rounds.push_back(RoundRecord{t, 0, 0, a, out.opponent_action,
                                         std::move(out.payoff), r,
                                         out.opponent_reward, learner.dist,
                                         std::move(g)});
    learner.dist = std::move(next);
  }
  const double r_obj = objective_sum / horizon;
  Vec g_outer = IxEstimate(state.outer, 0, r_obj, params.gamma_p);
  history.blocks.push_back(
      BlockRecord{0, all, 0, state.outer, r_obj, std::move(g_outer)});
  history.final_outer = state.outer;
  history.final_policy = {learner.dist};
  return history;
}

}  // namespace adascal
