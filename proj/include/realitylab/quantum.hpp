// Copyright 2026 The RealityLab Authors
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

#pragma once

#include <string>
#include <vector>

#include "realitylab/linalg.hpp"

namespace realitylab::quantum {

using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;
using linalg::kDefaultTol;

/// A unit vector in a finite-dimensional complex Hilbert space.
class StateVector {
 public:
  /// Throws if the vector is not normalized within 1e-10.
  StateVector(CVector vec, std::string label);

  const CVector& vec() const { return vec_; }
  const std::string& label() const { return label_; }
  std::size_t dim() const { return vec_.dim(); }

 private:
  CVector vec_;
  std::string label_;
};

/// Spatial tag for the region in which measuring an observable requires
/// operations. Two observables are separated iff their sites differ.
struct Site {
  std::string name;
  bool operator==(const Site&) const = default;
};

/// Outcome alphabet of an observable: {+1, -1} or {1, 0}.
enum class SpectrumKind { TwoValue, ZeroOne };

/// A self-adjoint operator with a declared spectrum kind and a site tag.
class Observable {
 public:
  /// Certifies self-adjointness plus the spectrum claim (op^2 = 1 for
  /// TwoValue, idempotence for ZeroOne) at tolerance tol.
  Observable(CMatrix op, SpectrumKind kind, Site site, std::string label,
             double tol = kDefaultTol);

  const CMatrix& op() const { return op_; }
  SpectrumKind kind() const { return kind_; }
  const Site& site() const { return site_; }
  const std::string& label() const { return label_; }
  std::size_t dim() const { return op_.rows(); }

  /// The two admissible outcomes, "plus" first: {1, -1} or {1, 0}.
  std::vector<int> spectrum() const;
  int plus_outcome() const { return 1; }
  int minus_outcome() const { return kind_ == SpectrumKind::TwoValue ? -1 : 0; }

  /// Spectral projector onto the given outcome; throws if the outcome is
  /// not in the spectrum.
  CMatrix spectral_projector(int outcome) const;

 private:
  CMatrix op_;
  SpectrumKind kind_;
  Site site_;
  std::string label_;
};

/// <psi| Pi_outcome |psi>.
double born_probability(const Observable& a, int outcome, const StateVector& psi);

/// p(a=1 | given=1) via outcome-1 projectors. Requires [a, given] = 0 and a
/// nonzero conditioning probability.
double conditional_probability(const Observable& a, const Observable& given,
                               const StateVector& psi, double tol = kDefaultTol);

/// True iff outcome 1 of a forces outcome 1 of b in psi, i.e. the joint
/// probability of (a=1, b!=1) vanishes. Commuting pairs only.
bool quantum_implies(const Observable& a, const Observable& b, const StateVector& psi,
                     double tol = kDefaultTol);

/// Perfect two-sided correlation a <-> b in psi. ZeroOne pairs use the
/// vector identity ||a psi - b psi|| <= tol; other pairs fall back to
/// quantum_implies in both directions.
bool perfectly_correlated(const Observable& a, const Observable& b, const StateVector& psi,
                          double tol = kDefaultTol);

/// Observable with operator -op and swapped outcome labels. TwoValue only.
Observable negate(const Observable& a);

/// True iff the sites differ. A separated pair must commute; a separated
/// but non-commuting pair is a model-construction bug and throws.
bool are_separated(const Observable& a, const Observable& b, double tol = kDefaultTol);

enum class Direction { Implies, Iff };
enum class Sign { Plus, Minus };

/// A certified perfect correlation between two observables in a state.
/// Sign::Minus expresses anti-correlation (a <-> -b) as perfect correlation
/// with negate(b); there is no separate signed code path.
class CorrelationRule {
 public:
  /// Certifies the claimed correlation in `state`; throws if it fails.
  static CorrelationRule certify(Observable a, Observable b, StateVector state,
                                 Direction direction, Sign sign = Sign::Plus,
                                 double tol = kDefaultTol);

  const Observable& a() const { return a_; }
  const Observable& b() const { return b_; }
  const StateVector& state() const { return state_; }
  Direction direction() const { return direction_; }
  Sign sign() const { return sign_; }

  /// Value of one side implied by an anchored value of the other. The
  /// mapping is its own inverse (identity for Plus, negation for Minus).
  int partner_value(int anchor_value) const;

 private:
  CorrelationRule(Observable a, Observable b, StateVector state, Direction direction, Sign sign);

  Observable a_;
  Observable b_;
  StateVector state_;
  Direction direction_;
  Sign sign_;
};

}  // namespace realitylab::quantum
