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

#ifndef ADASCAL_CONES_H_
#define ADASCAL_CONES_H_

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adascal {

using Vec = std::vector<double>;

// Raised when an operation needs a cone representation that was not supplied,
// e.g. a strict-order test on a generators-only cone.
class UnsupportedRepresentationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct ConeTolerances {
  // Slack allowed on <h, v> >= 0 for halfspace membership.
  double halfspace = 1e-9;
  // Maximum l2 residual of the nonnegative least-squares fit for generator
  // membership.
  double residual = 1e-9;
  // <h, v> must exceed this for interior (strict order) membership.
  double strict = 1e-9;
  // Slack allowed on <psi, g> >= 0 for dual membership.
  double dual = 1e-9;
};

// A polyhedral cone K in R^dim given by generators (K = cone(generators))
// and/or halfspaces (K = {x : <h, x> >= 0 for every h}). Immutable.
class PolyhedralCone {
 public:
  // Throws std::invalid_argument on length mismatches, zero generators, an
  // empty description, or generators that violate a supplied halfspace.
  PolyhedralCone(int dim, std::vector<Vec> generators,
                 std::vector<Vec> halfspaces = {}, ConeTolerances tol = {});

  // The nonnegative orthant with both representations (standard basis).
  static PolyhedralCone Orthant(int dim, ConeTolerances tol = {});

  int dim() const { return dim_; }
  const std::vector<Vec>& generators() const { return generators_; }
  const std::vector<Vec>& halfspaces() const { return halfspaces_; }
  bool has_generators() const { return !generators_.empty(); }
  bool has_halfspaces() const { return !halfspaces_.empty(); }
  const ConeTolerances& tolerances() const { return tol_; }

 private:
  int dim_;
  std::vector<Vec> generators_;
  std::vector<Vec> halfspaces_;
  ConeTolerances tol_;
};

// Minimizes ||G^T lambda - target||_2 over lambda >= 0 (Lawson-Hanson active
// set). Returns lambda, one coefficient per generator.
Vec NonnegativeLeastSquares(const std::vector<Vec>& generators,
                            std::span<const double> target);

// Membership in K. Uses halfspaces when present, otherwise NNLS on the
// generators.
bool ConeContains(const PolyhedralCone& cone, std::span<const double> v);

// Membership in K* = {psi : <psi, y> >= 0 for all y in K}; needs generators.
bool DualContains(const PolyhedralCone& cone, std::span<const double> psi);

// a <=_K b, i.e. b - a in K.
bool ConeOrderLeq(const PolyhedralCone& cone, std::span<const double> a,
                  std::span<const double> b);

// a <_K b, i.e. b - a in int(K); needs halfspaces.
bool ConeOrderStrict(const PolyhedralCone& cone, std::span<const double> a,
                     std::span<const double> b);

// A unit-norm scalarization direction. Construction goes through Normalize
// or FromUnit, so every instance has ||coords||_2 = 1 within 1e-12.
class WeightVector {
 public:
  // v / ||v||_2; throws std::invalid_argument for the zero vector.
  static WeightVector Normalize(std::span<const double> v);
  // Accepts v only if it is already unit norm within 1e-12.
  static WeightVector FromUnit(std::span<const double> v);

  int dim() const { return static_cast<int>(coords_.size()); }
  const Vec& coords() const { return coords_; }
  double operator[](int i) const { return coords_[i]; }
  // True once ValidateDual has accepted this weight for some cone.
  bool dual_validated() const { return dual_validated_; }

  friend bool operator==(const WeightVector& a, const WeightVector& b) {
    return a.coords_ == b.coords_;
  }

 private:
  explicit WeightVector(Vec coords) : coords_(std::move(coords)) {}

  Vec coords_;
  bool dual_validated_ = false;

  friend WeightVector ValidateDual(const PolyhedralCone& cone,
                                   WeightVector w);
};

// Returns w tagged as dual-valid for cone; throws std::invalid_argument if
// w is not in K*.
WeightVector ValidateDual(const PolyhedralCone& cone, WeightVector w);

// <psi, u>.
double Scalarize(const WeightVector& psi, std::span<const double> u);

double Dot(std::span<const double> a, std::span<const double> b);
double Norm2(std::span<const double> v);

}  // namespace adascal

#endif  // ADASCAL_CONES_H_
