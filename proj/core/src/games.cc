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

#include "adascal/games.h"

#include <cmath>
#include <stdexcept>

namespace adascal {

ProfileIndexer::ProfileIndexer(std::vector<int> action_counts)
    : counts_(std::move(action_counts)), num_profiles_(1) {
  if (counts_.empty()) {
    throw std::invalid_argument("game needs at least one player");
  }
  for (int c : counts_) {
    if (c <= 0) throw std::invalid_argument("action counts must be positive");
    if (num_profiles_ > kMaxBruteForceProfiles * 64) {
      throw std::length_error("game has too many joint profiles");
    }
    num_profiles_ *= static_cast<std::size_t>(c);
  }
}

std::size_t ProfileIndexer::Index(std::span<const int> joint) const {
  if (joint.size() != counts_.size()) {
    throw std::out_of_range("joint action has " + std::to_string(joint.size()) +
                            " entries, game has " +
                            std::to_string(counts_.size()) + " players");
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    if (joint[i] < 0 || joint[i] >= counts_[i]) {
      throw std::out_of_range("action " + std::to_string(joint[i]) +
                              " out of range for player " + std::to_string(i));
    }
    index = index * counts_[i] + static_cast<std::size_t>(joint[i]);
  }
  return index;
}

JointAction ProfileIndexer::Joint(std::size_t index) const {
  if (index >= num_profiles_) throw std::out_of_range("profile index");
  JointAction joint(counts_.size());
  for (std::size_t i = counts_.size(); i-- > 0;) {
    joint[i] = static_cast<int>(index % counts_[i]);
    index /= counts_[i];
  }
  return joint;
}

VectorGame::VectorGame(std::vector<int> action_counts,
                       std::vector<int> payoff_dims,
                       std::vector<std::vector<Vec>> payoffs,
                       double payoff_bound,
                       std::vector<std::vector<std::string>> action_labels)
    : indexer_(std::move(action_counts)),
      payoff_dims_(std::move(payoff_dims)),
      payoff_bound_(payoff_bound),
      labels_(std::move(action_labels)) {
  const int n = indexer_.num_players();
  if (static_cast<int>(payoff_dims_.size()) != n ||
      static_cast<int>(payoffs.size()) != n) {
    throw std::invalid_argument("payoff dims/tables must have one entry per player");
  }
  if (!(payoff_bound_ > 0.0) || !std::isfinite(payoff_bound_)) {
    throw std::invalid_argument("payoff bound must be positive and finite");
  }
  payoffs_.resize(n);
  for (int i = 0; i < n; ++i) {
    const int d = payoff_dims_[i];
    if (d <= 0) throw std::invalid_argument("payoff dims must be positive");
    if (payoffs[i].size() != indexer_.num_profiles()) {
      throw std::invalid_argument(
          "player " + std::to_string(i) + " payoff table has " +
          std::to_string(payoffs[i].size()) + " profiles, expected " +
          std::to_string(indexer_.num_profiles()));
    }
    payoffs_[i].reserve(indexer_.num_profiles() * d);
    for (std::size_t p = 0; p < payoffs[i].size(); ++p) {
      if (static_cast<int>(payoffs[i][p].size()) != d) {
        throw std::invalid_argument("player " + std::to_string(i) +
                                    " payoff at profile " + std::to_string(p) +
                                    " has wrong dimension");
      }
      for (double x : payoffs[i][p]) {
        if (!std::isfinite(x) || std::abs(x) > payoff_bound_) {
          throw std::invalid_argument(
              "player " + std::to_string(i) + " payoff at profile " +
              std::to_string(p) + " exceeds the payoff bound");
        }
        payoffs_[i].push_back(x);
      }
    }
  }
  if (labels_.empty()) {
    for (int i = 0; i < n; ++i) {
      std::vector<std::string> names;
      for (int a = 0; a < indexer_.action_counts()[i]; ++a) {
        names.push_back(std::to_string(a));
      }
      labels_.push_back(std::move(names));
    }
  }
  if (static_cast<int>(labels_.size()) != n) {
    throw std::invalid_argument("action labels must have one list per player");
  }
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(labels_[i].size()) != indexer_.action_counts()[i]) {
      throw std::invalid_argument("player " + std::to_string(i) +
                                  " has the wrong number of action labels");
    }
  }
}

void VectorGame::CheckPlayer(int player) const {
  if (player < 0 || player >= num_players()) {
    throw std::out_of_range("player index " + std::to_string(player));
  }
}

int VectorGame::action_count(int player) const {
  CheckPlayer(player);
  return indexer_.action_counts()[player];
}

int VectorGame::payoff_dim(int player) const {
  CheckPlayer(player);
  return payoff_dims_[player];
}

Vec VectorGame::Payoff(std::span<const int> joint, int player) const {
  CheckPlayer(player);
  auto view = PayoffAt(indexer_.Index(joint), player);
  return Vec(view.begin(), view.end());
}

std::span<const double> VectorGame::PayoffAt(std::size_t profile,
                                             int player) const {
  CheckPlayer(player);
  if (profile >= num_profiles()) throw std::out_of_range("profile index");
  const std::size_t d = payoff_dims_[player];
  return std::span<const double>(payoffs_[player]).subspan(profile * d, d);
}

const std::string& VectorGame::ActionLabel(int player, int action) const {
  CheckPlayer(player);
  if (action < 0 || action >= action_count(player)) {
    throw std::out_of_range("action index " + std::to_string(action));
  }
  return labels_[player][action];
}

std::string VectorGame::ProfileLabel(std::span<const int> joint) const {
  indexer_.Index(joint);  // validates
  std::string label;
  for (int i = 0; i < num_players(); ++i) label += labels_[i][joint[i]];
  return label;
}

VectorGame Bos4dGame() {
  // Rows: focal action, columns: opponent action, both in {B, S}.
  const std::vector<Vec> table = {
      {1, 1, 1, 0},    // (B, B)
      {-1, 1, 1, -1},  // (B, S)
      {1, -1, -1, 1},  // (S, B)
      {0, 1, 1, 1},    // (S, S)
  };
  return VectorGame({2, 2}, {4, 4}, {table, table}, 1.0,
                    {{"B", "S"}, {"B", "S"}});
}

Vec AveragePayoff(std::span<const Vec> history) {
  if (history.empty()) {
    throw std::invalid_argument("AveragePayoff: empty history");
  }
  Vec sum(history.front().size(), 0.0);
  for (const Vec& u : history) {
    if (u.size() != sum.size()) {
      throw std::invalid_argument("AveragePayoff: ragged history");
    }
    for (std::size_t j = 0; j < u.size(); ++j) sum[j] += u[j];
  }
  for (double& s : sum) s /= static_cast<double>(history.size());
  return sum;
}

ScalarGame::ScalarGame(std::vector<int> action_counts,
                       std::vector<std::vector<double>> payoffs)
    : indexer_(std::move(action_counts)), payoffs_(std::move(payoffs)) {
  if (static_cast<int>(payoffs_.size()) != indexer_.num_players()) {
    throw std::invalid_argument("scalar game needs one table per player");
  }
  for (const auto& table : payoffs_) {
    if (table.size() != indexer_.num_profiles()) {
      throw std::invalid_argument("scalar payoff table has the wrong size");
    }
  }
}

double ScalarGame::Payoff(std::span<const int> joint, int player) const {
  if (player < 0 || player >= num_players()) {
    throw std::out_of_range("player index " + std::to_string(player));
  }
  return payoffs_[player][indexer_.Index(joint)];
}

ScalarGame ScalarizedGame(const VectorGame& game,
                          std::span<const WeightVector> weights) {
  const int n = game.num_players();
  if (static_cast<int>(weights.size()) != n) {
    throw std::invalid_argument("ScalarizedGame: need one weight per player");
  }
  std::vector<std::vector<double>> tables(n);
  for (int i = 0; i < n; ++i) {
    if (weights[i].dim() != game.payoff_dim(i)) {
      throw std::invalid_argument("ScalarizedGame: weight " +
                                  std::to_string(i) + " has dimension " +
                                  std::to_string(weights[i].dim()) +
                                  ", payoffs have " +
                                  std::to_string(game.payoff_dim(i)));
    }
    tables[i].resize(game.num_profiles());
    for (std::size_t p = 0; p < game.num_profiles(); ++p) {
      tables[i][p] = Scalarize(weights[i], game.PayoffAt(p, i));
    }
  }
  return ScalarGame(game.action_counts(), std::move(tables));
}

std::vector<JointAction> PureNash(const ScalarGame& game, double tol) {
  if (game.num_profiles() > kMaxBruteForceProfiles) {
    throw std::length_error("PureNash: " + std::to_string(game.num_profiles()) +
                            " profiles exceeds the brute-force limit");
  }
  std::vector<JointAction> equilibria;
  const ProfileIndexer& idx = game.indexer();
  for (std::size_t p = 0; p < game.num_profiles(); ++p) {
    JointAction joint = idx.Joint(p);
    bool stable = true;
    for (int i = 0; i < game.num_players() && stable; ++i) {
      const double current = game.PayoffAt(p, i);
      JointAction dev = joint;
      for (int a = 0; a < game.action_counts()[i]; ++a) {
        if (a == joint[i]) continue;
        dev[i] = a;
        if (game.PayoffAt(idx.Index(dev), i) > current + tol) {
          stable = false;
          break;
        }
      }
    }
    if (stable) equilibria.push_back(std::move(joint));
  }
  return equilibria;
}

bool IsWeakNash(const VectorGame& game, std::span<const PolyhedralCone> cones,
                std::span<const int> profile) {
  if (static_cast<int>(cones.size()) != game.num_players()) {
    throw std::invalid_argument("IsWeakNash: need one cone per player");
  }
  for (const auto& cone : cones) {
    if (!cone.has_halfspaces()) {
      throw UnsupportedRepresentationError(
          "IsWeakNash: every cone needs a halfspace representation");
    }
  }
  const std::size_t p = game.indexer().Index(profile);
  for (int i = 0; i < game.num_players(); ++i) {
    const auto current = game.PayoffAt(p, i);
    JointAction dev(profile.begin(), profile.end());
    for (int a = 0; a < game.action_count(i); ++a) {
      if (a == profile[i]) continue;
      dev[i] = a;
      const auto deviation = game.PayoffAt(game.indexer().Index(dev), i);
      if (ConeOrderStrict(cones[i], current, deviation)) return false;
    }
  }
  return true;
}

WeakNashInclusionReport CertifyWeakNashInclusion(
    const VectorGame& game, std::span<const PolyhedralCone> cones,
    std::span<const std::vector<WeightVector>> weight_grid) {
  WeakNashInclusionReport report;
  for (const auto& profile_weights : weight_grid) {
    if (static_cast<int>(profile_weights.size()) != game.num_players() ||
        cones.size() != profile_weights.size()) {
      throw std::invalid_argument(
          "CertifyWeakNashInclusion: weight profile size mismatch");
    }
    for (std::size_t i = 0; i < profile_weights.size(); ++i) {
      if (!DualContains(cones[i], profile_weights[i].coords())) {
        throw std::invalid_argument(
            "CertifyWeakNashInclusion: weight outside the dual cone");
      }
    }
    const ScalarGame scalar = ScalarizedGame(game, profile_weights);
    for (JointAction& ne : PureNash(scalar)) {
      WeakNashCheck check{profile_weights, ne};
      if (!IsWeakNash(game, cones, ne)) report.violations.push_back(check);
      report.checked.push_back(std::move(check));
    }
  }
  return report;
}

std::vector<WeightVector> SimplexWeightGrid(int dim, int resolution) {
  if (dim <= 0 || resolution <= 0) {
    throw std::invalid_argument("SimplexWeightGrid: dim and resolution must be > 0");
  }
  std::vector<WeightVector> grid;
  std::vector<int> parts(dim, 0);
  // Enumerate compositions of `resolution` into `dim` nonnegative parts.
  auto recurse = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == dim - 1) {
      parts[pos] = remaining;
      Vec v(dim);
      for (int i = 0; i < dim; ++i) {
        v[i] = static_cast<double>(parts[i]) / resolution;
      }
      grid.push_back(WeightVector::Normalize(v));
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      parts[pos] = k;
      self(self, pos + 1, remaining - k);
    }
  };
  recurse(recurse, 0, resolution);
  return grid;
}

std::vector<std::vector<WeightVector>> WeightProfileGrid(
    std::span<const std::vector<WeightVector>> per_player) {
  std::vector<std::vector<WeightVector>> out = {{}};
  for (const auto& options : per_player) {
    std::vector<std::vector<WeightVector>> next;
    next.reserve(out.size() * options.size());
    for (const auto& prefix : out) {
      for (const auto& w : options) {
        auto extended = prefix;
        extended.push_back(w);
        next.push_back(std::move(extended));
      }
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace adascal
