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

#include "adascal/cones.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace adascal {
namespace {

void CheckDim(int dim, std::size_t got, const char* what) {
  if (got != static_cast<std::size_t>(dim)) {
    throw std::invalid_argument(std::string(what) + ": expected length " +
                                std::to_string(dim) + ", got " +
                                std::to_string(got));
  }
}

Vec Difference(std::span<const double> b, std::span<const double> a) {
  Vec d(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) d[i] = b[i] - a[i];
  return d;
}

}  // namespace

double Dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("Dot: length mismatch " +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double Norm2(std::span<const double> v) { return std::sqrt(Dot(v, v)); }

PolyhedralCone::PolyhedralCone(int dim, std::vector<Vec> generators,
                               std::vector<Vec> halfspaces, ConeTolerances tol)
    : dim_(dim),
      generators_(std::move(generators)),
      halfspaces_(std::move(halfspaces)),
      tol_(tol) {
  if (dim_ <= 0) throw std::invalid_argument("PolyhedralCone: dim must be > 0");
  if (generators_.empty() && halfspaces_.empty()) {
    throw std::invalid_argument(
        "PolyhedralCone: needs generators or halfspaces");
  }
  for (const Vec& g : generators_) {
    CheckDim(dim_, g.size(), "PolyhedralCone generator");
    if (std::all_of(g.begin(), g.end(), [](double x) { return x == 0.0; })) {
      throw std::invalid_argument("PolyhedralCone: zero generator");
    }
  }
  for (const Vec& h : halfspaces_) {
    CheckDim(dim_, h.size(), "PolyhedralCone halfspace");
  }
  for (std::size_t gi = 0; gi < generators_.size(); ++gi) {
    for (std::size_t hi = 0; hi < halfspaces_.size(); ++hi) {
      if (Dot(halfspaces_[hi], generators_[gi]) < -tol_.halfspace) {
        throw std::invalid_argument(
            "PolyhedralCone: generator " + std::to_string(gi) +
            " violates halfspace " + std::to_string(hi));
      }
    }
  }
}

PolyhedralCone PolyhedralCone::Orthant(int dim, ConeTolerances tol) {
  if (dim <= 0) throw std::invalid_argument("Orthant: dim must be > 0");
  std::vector<Vec> basis;
  for (int i = 0; i < dim; ++i) {
    Vec e(dim, 0.0);
    e[i] = 1.0;
    basis.push_back(std::move(e));
  }
  return PolyhedralCone(dim, basis, basis, tol);
}

Vec NonnegativeLeastSquares(const std::vector<Vec>& generators,
                            std::span<const double> target) {
  const int m = static_cast<int>(generators.size());
  const int d = static_cast<int>(target.size());
  Eigen::MatrixXd a(d, m);
  for (int j = 0; j < m; ++j) {
    CheckDim(d, generators[j].size(), "NonnegativeLeastSquares generator");
    for (int i = 0; i < d; ++i) a(i, j) = generators[j][i];
  }
  Eigen::VectorXd b(d);
  for (int i = 0; i < d; ++i) b(i) = target[i];

  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff()) *
                       std::max(1.0, b.cwiseAbs().maxCoeff());
  const double tol = 1e-13 * scale;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(m);
  std::vector<bool> passive(m, false);

  auto solve_passive = [&]() {
    std::vector<int> cols;
    for (int j = 0; j < m; ++j)
      if (passive[j]) cols.push_back(j);
    Eigen::MatrixXd ap(d, static_cast<int>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) ap.col(c) = a.col(cols[c]);
    Eigen::VectorXd zp = ap.completeOrthogonalDecomposition().solve(b);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
    for (std::size_t c = 0; c < cols.size(); ++c) z(cols[c]) = zp(c);
    return z;
  };

  const int max_outer = 3 * m + 10;
  for (int outer = 0; outer < max_outer; ++outer) {
    Eigen::VectorXd w = a.transpose() * (b - a * x);
    int best = -1;
    double best_w = tol;
    for (int j = 0; j < m; ++j) {
      if (!passive[j] && w(j) > best_w) {
        best_w = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = true;

    for (int inner = 0; inner <= m; ++inner) {
      Eigen::VectorXd z = solve_passive();
      bool feasible = true;
      for (int j = 0; j < m; ++j)
        if (passive[j] && z(j) <= 0.0) feasible = false;
      if (feasible) {
        x = z;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (int j = 0; j < m; ++j) {
        if (passive[j] && z(j) <= 0.0) {
          alpha = std::min(alpha, x(j) / (x(j) - z(j)));
        }
      }
      x += alpha * (z - x);
      for (int j = 0; j < m; ++j) {
        if (passive[j] && x(j) <= tol) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
    }
  }
  return Vec(x.data(), x.data() + m);
}

bool ConeContains(const PolyhedralCone& cone, std::span<const double> v) {
  CheckDim(cone.dim(), v.size(), "ConeContains");
  if (cone.has_halfspaces()) {
    return std::all_of(cone.halfspaces().begin(), cone.halfspaces().end(),
                       [&](const Vec& h) {
                         return Dot(h, v) >= -cone.tolerances().halfspace;
                       });
  }
  if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
    return true;
  }
  const Vec lambda = NonnegativeLeastSquares(cone.generators(), v);
  Vec residual(v.begin(), v.end());
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    for (int i = 0; i < cone.dim(); ++i) {
      residual[i] -= lambda[j] * cone.generators()[j][i];
    }
  }
  return Norm2(residual) <= cone.tolerances().residual;
}

bool DualContains(const PolyhedralCone& cone, std::span<const double> psi) {
  if (!cone.has_generators()) {
    throw UnsupportedRepresentationError(
        "DualContains: cone has no generator representation");
  }
  CheckDim(cone.dim(), psi.size(), "DualContains");
  return std::all_of(cone.generators().begin(), cone.generators().end(),
                     [&](const Vec& g) {
                       return Dot(psi, g) >= -cone.tolerances().dual;
                     });
}

bool ConeOrderLeq(const PolyhedralCone& cone, std::span<const double> a,
                  std::span<const double> b) {
  CheckDim(cone.dim(), a.size(), "ConeOrderLeq a");
  CheckDim(cone.dim(), b.size(), "ConeOrderLeq b");
  return ConeContains(cone, Difference(b, a));
}

bool ConeOrderStrict(const PolyhedralCone& cone, std::span<const double> a,
                     std::span<const double> b) {
  if (!cone.has_halfspaces()) {
    throw UnsupportedRepresentationError(
        "ConeOrderStrict: interior test needs a halfspace representation");
  }
  CheckDim(cone.dim(), a.size(), "ConeOrderStrict a");
  CheckDim(cone.dim(), b.size(), "ConeOrderStrict b");
  const Vec diff = Difference(b, a);
  return std::all_of(cone.halfspaces().begin(), cone.halfspaces().end(),
                     [&](const Vec& h) {
                       return Dot(h, diff) > cone.tolerances().strict;
                     });
}

WeightVector WeightVector::Normalize(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("weight vector is empty");
  const double norm = Norm2(v);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("weight vector must be nonzero and finite");
  }
  Vec coords(v.begin(), v.end());
  // Already-unit inputs are returned untouched so normalization is
  // idempotent bit for bit.
  if (std::abs(norm - 1.0) <= 1e-15) return WeightVector(std::move(coords));
  for (double& c : coords) c /= norm;
  return WeightVector(std::move(coords));
}

WeightVector WeightVector::FromUnit(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("weight vector is empty");
  const double norm = Norm2(v);
  if (std::abs(norm - 1.0) > 1e-12) {
    throw std::invalid_argument("weight vector is not unit norm (norm " +
                                std::to_string(norm) + ")");
  }
  return WeightVector(Vec(v.begin(), v.end()));
}

WeightVector ValidateDual(const PolyhedralCone& cone, WeightVector w) {
  if (!DualContains(cone, w.coords())) {
    throw std::invalid_argument("weight vector is not in the dual cone");
  }
  w.dual_validated_ = true;
  return w;
}

double Scalarize(const WeightVector& psi, std::span<const double> u) {
  if (u.size() != psi.coords().size()) {
    throw std::invalid_argument("Scalarize: weight has dimension " +
                                std::to_string(psi.dim()) +
                                ", payoff has " + std::to_string(u.size()));
  }
  return Dot(psi.coords(), u);
}

}  // namespace adascal
