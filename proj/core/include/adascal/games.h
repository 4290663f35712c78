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

#ifndef ADASCAL_GAMES_H_
#define ADASCAL_GAMES_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "adascal/cones.h"

namespace adascal {

// One action index per player.
using JointAction = std::vector<int>;

// Profiles are stored row-major over players: player 0 is the slowest-varying
// index and the last player the fastest. For two players this is the usual
// matrix layout, (row, column) -> row * cols + column.
class ProfileIndexer {
 public:
  explicit ProfileIndexer(std::vector<int> action_counts);

  int num_players() const { return static_cast<int>(counts_.size()); }
  const std::vector<int>& action_counts() const { return counts_; }
  std::size_t num_profiles() const { return num_profiles_; }

  // Throws std::out_of_range on a bad joint action.
  std::size_t Index(std::span<const int> joint) const;
  JointAction Joint(std::size_t index) const;

 private:
  std::vector<int> counts_;
  std::size_t num_profiles_;
};

// Normal-form game with vector payoffs u_i : A -> R^{d_i}. Immutable.
class VectorGame {
 public:
  // payoffs[i][p] is player i's payoff vector at profile p (ProfileIndexer
  // order). action_labels may be empty, in which case actions are named by
  // their index.
  VectorGame(std::vector<int> action_counts, std::vector<int> payoff_dims,
             std::vector<std::vector<Vec>> payoffs, double payoff_bound,
             std::vector<std::vector<std::string>> action_labels = {});

  int num_players() const { return indexer_.num_players(); }
  int action_count(int player) const;
  int payoff_dim(int player) const;
  const std::vector<int>& action_counts() const {
    return indexer_.action_counts();
  }
  std::size_t num_profiles() const { return indexer_.num_profiles(); }
  double payoff_bound() const { return payoff_bound_; }
  const ProfileIndexer& indexer() const { return indexer_; }

  // Copy of u_player(joint).
  Vec Payoff(std::span<const int> joint, int player) const;
  // Read-only view of the stored vector at a profile index.
  std::span<const double> PayoffAt(std::size_t profile, int player) const;

  const std::string& ActionLabel(int player, int action) const;
  // Concatenated action labels, e.g. "BB".
  std::string ProfileLabel(std::span<const int> joint) const;

 private:
  void CheckPlayer(int player) const;

  ProfileIndexer indexer_;
  std::vector<int> payoff_dims_;
  // payoffs_[player] holds num_profiles * dim values, profile-major.
  std::vector<Vec> payoffs_;
  double payoff_bound_;
  std::vector<std::vector<std::string>> labels_;
};

// The two-player, four-objective Bach-or-Stravinsky game with actions {B, S}
// and a payoff table shared by both players, U = 1.
VectorGame Bos4dGame();

// Coordinate-wise mean; throws std::invalid_argument on empty or ragged input.
Vec AveragePayoff(std::span<const Vec> history);

class ScalarGame {
 public:
  ScalarGame(std::vector<int> action_counts,
             std::vector<std::vector<double>> payoffs);

  int num_players() const { return indexer_.num_players(); }
  const std::vector<int>& action_counts() const {
    return indexer_.action_counts();
  }
  std::size_t num_profiles() const { return indexer_.num_profiles(); }
  const ProfileIndexer& indexer() const { return indexer_; }

  double Payoff(std::span<const int> joint, int player) const;
  double PayoffAt(std::size_t profile, int player) const {
    return payoffs_[player][profile];
  }

 private:
  ProfileIndexer indexer_;
  std::vector<std::vector<double>> payoffs_;
};

// Player i's entry at profile a is <weights[i], u_i(a)>.
ScalarGame ScalarizedGame(const VectorGame& game,
                          std::span<const WeightVector> weights);

inline constexpr std::size_t kMaxBruteForceProfiles = 1'000'000;

// All pure profiles where no player gains more than tol by a unilateral
// deviation, in profile-index order. Throws std::length_error above
// kMaxBruteForceProfiles.
std::vector<JointAction> PureNash(const ScalarGame& game, double tol = 1e-9);

// No player has a pure unilateral deviation whose payoff is strictly
// cone-better. Every cone needs a halfspace representation.
bool IsWeakNash(const VectorGame& game, std::span<const PolyhedralCone> cones,
                std::span<const int> profile);

struct WeakNashCheck {
  std::vector<WeightVector> weights;
  JointAction profile;
};

struct WeakNashInclusionReport {
  std::vector<WeakNashCheck> checked;
  std::vector<WeakNashCheck> violations;
  bool ok() const { return violations.empty(); }
};

// For every weight profile in the grid, checks that each pure NE of the
// scalarized game is a weak Nash equilibrium of the vector game. Weights must
// lie in the dual cones (std::invalid_argument otherwise).
WeakNashInclusionReport CertifyWeakNashInclusion(
    const VectorGame& game, std::span<const PolyhedralCone> cones,
    std::span<const std::vector<WeightVector>> weight_grid);

// Normalized points of the simplex grid {x >= 0 : sum x = 1, x = k/resolution}
// in R^dim, i.e. resolution + 1 levels per coordinate.
std::vector<WeightVector> SimplexWeightGrid(int dim, int resolution);

// Cartesian product of per-player weight lists.
std::vector<std::vector<WeightVector>> WeightProfileGrid(
    std::span<const std::vector<WeightVector>> per_player);

}  // namespace adascal

#endif  // ADASCAL_GAMES_H_
