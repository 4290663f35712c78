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

// The block protocol for a focal player that learns which scalarization to
// deploy. An outer exponential-weights learner over m candidate weights picks
// one candidate per block of L rounds; inside the block an inner Exp-IX
// learner (one policy row per candidate) chooses actions from the reward
// scalarized by the deployed weight. The outer learner is scored by the
// block-average reward under the fixed objective weight.
//
// Indices are 0-based throughout: candidates j in [0, m), blocks k in
// [0, h). Round numbers in logs are 1-based so block k covers rounds
// [k * L + 1, min((k + 1) * L, T)].

#ifndef ADASCAL_BILEVEL_H_
#define ADASCAL_BILEVEL_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "adascal/bandit.h"
#include "adascal/cones.h"
#include "adascal/games.h"

namespace adascal {

// Closed range of 1-based round numbers.
struct Interval {
  int first = 1;
  int last = 0;
  int size() const { return last - first + 1; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

class BlockSchedule {
 public:
  BlockSchedule(int horizon, int block_len);

  int horizon() const { return horizon_; }
  int block_len() const { return block_len_; }
  // ceil(T / L)
  int block_count() const { return block_count_; }
  // Rounds of block k (0-based); only the last block may be short.
  // Throws std::out_of_range for k outside [0, block_count()).
  Interval Block(int k) const;

 private:
  int horizon_;
  int block_len_;
  int block_count_;
};

struct BilevelParams {
  double eta_p = 0.1;    // outer step size
  double eta_q = 0.1;    // inner step size
  double gamma_p = 0.2;  // outer IX parameter
  double gamma_q = 0.2;  // inner IX parameter
};

struct BilevelState {
  SimplexPoint outer;                // p over candidates
  std::vector<SimplexPoint> policy;  // row j: action distribution for candidate j
  std::vector<WeightVector> candidates;
  WeightVector objective;
  BilevelParams params;

  // Uniform p and uniform rows unless initial values are given. Throws
  // std::invalid_argument if any invariant fails (see Validate).
  static BilevelState Make(std::vector<WeightVector> candidates,
                           WeightVector objective, int num_actions,
                           BilevelParams params,
                           std::optional<SimplexPoint> initial_outer = {},
                           std::optional<SimplexPoint> initial_row = {});

  int num_candidates() const { return static_cast<int>(candidates.size()); }
  int num_actions() const { return policy.empty() ? 0 : policy.front().size(); }
  // m >= 1, matching sizes and dimensions, strictly positive p and rows,
  // eta > 0, gamma >= 0.
  void Validate() const;
};

struct EnvOutcome {
  Vec payoff;           // the focal player's payoff vector u_t
  int opponent_action;  // b_t
  double opponent_reward;  // the opponent's scalar reward this round
};

// The rest of the game as seen by the focal player. Step consumes the focal
// action, advances the opponent exactly once, and returns the outcome.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual EnvOutcome Step(int focal_action) = 0;
  virtual int num_focal_actions() const = 0;
  virtual int payoff_dim() const = 0;
  virtual double payoff_bound() const = 0;
};

// Two-player environment whose opponent (player 1) runs Exp-IX on its own
// payoff scalarized by opponent_weight. The focal player is player 0.
class ExpIxOpponentEnvironment final : public Environment {
 public:
  ExpIxOpponentEnvironment(VectorGame game, LearnerState opponent,
                           WeightVector opponent_weight, RandomStream rng);

  EnvOutcome Step(int focal_action) override;
  int num_focal_actions() const override { return game_.action_count(0); }
  int payoff_dim() const override { return game_.payoff_dim(0); }
  double payoff_bound() const override { return game_.payoff_bound(); }

  const LearnerState& opponent() const { return opponent_; }

 private:
  VectorGame game_;
  LearnerState opponent_;
  WeightVector opponent_weight_;
  RandomStream rng_;
};

// Two-player environment with a stationary opponent policy. opponent_reward
// is reported under report_weight when given, else 0.
class FixedOpponentEnvironment final : public Environment {
 public:
  FixedOpponentEnvironment(VectorGame game, SimplexPoint policy,
                           RandomStream rng,
                           std::optional<WeightVector> report_weight = {});

  EnvOutcome Step(int focal_action) override;
  int num_focal_actions() const override { return game_.action_count(0); }
  int payoff_dim() const override { return game_.payoff_dim(0); }
  double payoff_bound() const override { return game_.payoff_bound(); }

 private:
  VectorGame game_;
  SimplexPoint policy_;
  RandomStream rng_;
  std::optional<WeightVector> report_weight_;
};

struct RoundRecord {
  int round;            // 1-based
  int block;            // 0-based
  int deployed;         // J_k
  int focal_action;     // a_t
  int opponent_action;  // b_t
  Vec payoff;           // u_t
  double shaping_reward;   // <psi^{J_k}, u_t>
  double opponent_reward;
  SimplexPoint focal_dist;  // Q_t[J_k, .] before this round's update
  Vec estimate;             // inner IX estimate g_t
};

struct BlockRecord {
  int block;
  Interval rounds;
  int deployed;
  SimplexPoint outer_before;  // p_k
  double objective_reward;    // r_k^obj
  Vec outer_estimate;         // outer IX estimate g_k^(P)
};

// Everything needed to replay a run and recompute its regret offline.
struct RunHistory {
  int horizon;
  int block_len;
  int num_actions;
  int payoff_dim;
  double payoff_bound;
  BilevelParams params;
  std::vector<WeightVector> candidates;
  WeightVector objective;
  std::vector<RoundRecord> rounds;
  std::vector<BlockRecord> blocks;
  SimplexPoint final_outer;
  std::vector<SimplexPoint> final_policy;

  int num_candidates() const { return static_cast<int>(candidates.size()); }
  int num_blocks() const { return static_cast<int>(blocks.size()); }
  // Mean of <objective, u_t> over all rounds.
  double MeanObjectiveReward() const;
};

// Independent random streams of one run. Deriving them from one run seed
// keeps trajectories fixed no matter how pure computation is reordered.
struct RunStreams {
  RandomStream outer;
  RandomStream focal;
  RandomStream opponent;

  static RunStreams Derive(std::uint64_t run_seed);
};

struct InnerBlockResult {
  BilevelState state;
  double objective_reward;  // r^obj, the block mean of <objective, u_t>
  std::vector<RoundRecord> rounds;
};

// Plays one block with candidate j deployed. Only policy row j changes.
InnerBlockResult InnerAlg(const BilevelState& state, int candidate,
                          Interval block, int block_index, Environment& env,
                          RandomStream& focal_rng);

// Runs every block of the schedule: sample J_k ~ p_k, play the block, then
// update p with the IX estimate of the block objective reward.
RunHistory OuterAlg(BilevelState state, const BlockSchedule& schedule,
                    Environment& env, RandomStream& outer_rng,
                    RandomStream& focal_rng);

// Plain Exp-IX focal player scalarizing by `weight` for `horizon` rounds.
// Logged in RunHistory form as a single block with one candidate (weight),
// which is exactly what OuterAlg produces for m = 1 and L = T.
RunHistory RunExpIxBaseline(LearnerState focal, WeightVector weight,
                            int horizon, Environment& env,
                            RandomStream& focal_rng);

}  // namespace adascal

#endif  // ADASCAL_BILEVEL_H_
