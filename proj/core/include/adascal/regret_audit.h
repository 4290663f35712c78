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

// Offline regret accounting for a logged run. All regret values here are
// computed on the logged IX loss estimates, not on realized rewards, and the
// bounds they are checked against hold pathwise for those estimates:
//
//   inner, block k:  sum_t <Q_t[J_k] - q_k*, g_t> <= (sqrt(d) U / gamma_q) sqrt(2 T_k ln|A|)
//   outer:           sum_k <p_k - p, g_k^P>      <= (sqrt(d) U / gamma_p) sqrt(2 h ln m)
//   bilevel:         outer(best vertex) + sum_k inner_k
//                      <= sqrt(d) U (sqrt(2 h ln m) / gamma_p + sqrt(2 h T ln|A|) / gamma_q)

#ifndef ADASCAL_REGRET_AUDIT_H_
#define ADASCAL_REGRET_AUDIT_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "adascal/bandit.h"
#include "adascal/bilevel.h"
#include "adascal/games.h"

namespace adascal {

inline constexpr double kAuditTolerance = 1e-9;

double InnerBlockBound(int payoff_dim, double payoff_bound, double gamma_q,
                       int block_rounds, int num_actions);
double OuterBound(int payoff_dim, double payoff_bound, double gamma_p,
                  int num_blocks, int num_candidates);
double BilevelBound(int payoff_dim, double payoff_bound, double gamma_p,
                    double gamma_q, int num_blocks, int horizon,
                    int num_candidates, int num_actions);

// Point mass on the lowest index minimizing the summed estimates.
// Throws std::invalid_argument on empty or ragged input.
SimplexPoint InnerHindsight(std::span<const Vec> estimates);

struct InnerBlockRegret {
  int block;
  int rounds;      // T_k
  int comparator;  // vertex chosen by InnerHindsight
  double value;
  double bound;
  bool violated() const { return value > bound + kAuditTolerance; }
};

InnerBlockRegret ComputeInnerBlockRegret(const RunHistory& history, int k);

struct OuterRegret {
  double value;  // against the supplied comparator
  double bound;
  int best_vertex;             // comparator maximizing the regret
  double best_vertex_value;
  std::vector<double> vertex_values;  // regret against each vertex
  bool violated() const {
    return value > bound + kAuditTolerance ||
           best_vertex_value > bound + kAuditTolerance;
  }
};

OuterRegret ComputeOuterRegret(const RunHistory& history,
                               const SimplexPoint& comparator);

struct BilevelRegret {
  double value;
  double bound;
  double outer_value;  // best-vertex outer regret
  double inner_sum;    // sum of inner block regrets
  bool violated() const { return value > bound + kAuditTolerance; }
};

BilevelRegret ComputeBilevelRegret(const RunHistory& history);

// Best fixed focal action in hindsight on realized objective rewards, given
// the logged opponent actions. A diagnostic only; no bound applies to it.
struct RealizedRegret {
  double value;
  int best_action;
};

RealizedRegret ComputeRealizedObjectiveRegret(const RunHistory& history,
                                              const VectorGame& game);

struct RegretReport {
  int payoff_dim;
  double payoff_bound;
  double gamma_p;
  double gamma_q;
  int num_actions;
  int num_candidates;
  int num_blocks;
  int horizon;

  std::vector<InnerBlockRegret> inner;
  OuterRegret outer;
  BilevelRegret bilevel;
  std::optional<RealizedRegret> realized;

  // Estimates, shaping rewards and block rewards that do not recompute
  // exactly from the logged inputs; each entry names the record.
  std::vector<std::string> integrity_errors;
  // Number of estimates exceeding sqrt(d) U / gamma in sup norm.
  int estimate_bound_violations = 0;

  int BoundViolations() const;
  bool ok() const {
    return BoundViolations() == 0 && integrity_errors.empty() &&
           estimate_bound_violations == 0;
  }
};

// Runs every check above. The outer value is reported against the initial
// outer distribution p_1; the best-vertex value covers every comparator.
RegretReport AuditRunHistory(const RunHistory& history,
                             const VectorGame* game = nullptr);

std::string RegretReportToJson(const RegretReport& report);

struct OmdLemmaReport {
  int dim;
  int rounds;
  double eta;
  double loss_bound;
  double bound;  // ln(n) / eta + eta * T * loss_bound^2 / 2
  std::vector<double> vertex_regret;
  double max_regret;
  int violations;
};

// eta = sqrt(ln n) / loss_bound * sqrt(2 / T), which turns the bound into
// loss_bound * sqrt(2 T ln n).
double LemmaStepSize(int dim, int rounds, double loss_bound);

// Runs entropy OMD from the uniform point over the losses and checks the
// regret against every vertex. loss_bound defaults to max_t ||loss_t||_inf.
OmdLemmaReport VerifyOmdLemma(std::span<const Vec> losses, double eta, int dim,
                              std::optional<double> loss_bound = {});

}  // namespace adascal

#endif  // ADASCAL_REGRET_AUDIT_H_
