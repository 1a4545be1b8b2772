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

#include "realitylab/quantum.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace realitylab::quantum {

using linalg::adjoint;
using linalg::apply;
using linalg::frobenius_norm;
using linalg::inner;
using linalg::matmul;

StateVector::StateVector(CVector vec, std::string label)
    : vec_(std::move(vec)), label_(std::move(label)) {
  if (vec_.dim() == 0) throw std::invalid_argument("StateVector: empty vector");
  if (std::abs(linalg::norm(vec_) - 1.0) > 1e-10)
    throw std::invalid_argument("StateVector '" + label_ + "': vector is not normalized");
}

Observable::Observable(CMatrix op, SpectrumKind kind, Site site, std::string label, double tol)
    : op_(std::move(op)), kind_(kind), site_(std::move(site)), label_(std::move(label)) {
  if (!op_.is_square()) throw std::invalid_argument("Observable '" + label_ + "': operator must be square");
  if (frobenius_norm(adjoint(op_) - op_) > tol)
    throw std::invalid_argument("Observable '" + label_ + "': operator is not self-adjoint");
  if (kind_ == SpectrumKind::TwoValue) {
    if (frobenius_norm(matmul(op_, op_) - CMatrix::identity(op_.rows())) > tol)
      throw std::invalid_argument("Observable '" + label_ + "': spectrum is not {+1, -1}");
  } else {
    if (!linalg::is_projector(op_, tol))
      throw std::invalid_argument("Observable '" + label_ + "': operator is not a projector");
  }
}

std::vector<int> Observable::spectrum() const { return {plus_outcome(), minus_outcome()}; }

CMatrix Observable::spectral_projector(int outcome) const {
  const CMatrix one = CMatrix::identity(op_.rows());
  if (kind_ == SpectrumKind::TwoValue) {
    if (outcome == 1) return Complex{0.5, 0.0} * (one + op_);
    if (outcome == -1) return Complex{0.5, 0.0} * (one - op_);
  } else {
    if (outcome == 1) return op_;
    if (outcome == 0) return one - op_;
  }
  throw std::invalid_argument("Observable '" + label_ + "': outcome " + std::to_string(outcome) +
                              " is not in the spectrum");
}

double born_probability(const Observable& a, int outcome, const StateVector& psi) {
  const CMatrix projector = a.spectral_projector(outcome);
  return inner(psi.vec(), apply(projector, psi.vec())).real();
}

double conditional_probability(const Observable& a, const Observable& given,
                               const StateVector& psi, double tol) {
  if (linalg::commutator_norm(a.op(), given.op()) > tol)
    throw std::invalid_argument("conditional_probability: observables '" + a.label() + "' and '" +
                                given.label() + "' do not commute");
  const CVector given_psi = apply(given.spectral_projector(1), psi.vec());
  const double denom = inner(psi.vec(), given_psi).real();
  if (denom <= 0.0)
    throw std::invalid_argument("conditional_probability: conditioning event '" + given.label() +
                                "=1' has zero probability");
  const double joint = inner(psi.vec(), apply(a.spectral_projector(1), given_psi)).real();
  return joint / denom;
}

bool quantum_implies(const Observable& a, const Observable& b, const StateVector& psi,
                     double tol) {
  if (linalg::commutator_norm(a.op(), b.op()) > tol)
    throw std::invalid_argument("quantum_implies: observables '" + a.label() + "' and '" +
                                b.label() + "' do not commute");
  const CVector a_plus_psi = apply(a.spectral_projector(1), psi.vec());
  const CVector not_b_then = a_plus_psi - apply(b.spectral_projector(1), a_plus_psi);
  return std::abs(inner(psi.vec(), not_b_then).real()) <= tol;
}

bool perfectly_correlated(const Observable& a, const Observable& b, const StateVector& psi,
                          double tol) {
  bool correlated = false;
  if (a.kind() == SpectrumKind::ZeroOne && b.kind() == SpectrumKind::ZeroOne) {
    correlated = linalg::norm(apply(a.op(), psi.vec()) - apply(b.op(), psi.vec())) <= tol;
  } else {
    correlated = quantum_implies(a, b, psi, tol) && quantum_implies(b, a, psi, tol);
  }
  if (correlated && linalg::commutator_norm(a.op(), b.op()) <= tol) {
    // A certified correlation must exhibit unit conditional probabilities
    // whenever the conditioning events have nonzero weight.
    for (const auto& [x, y] : {std::pair{&a, &b}, std::pair{&b, &a}}) {
      if (born_probability(*y, 1, psi) > 1e-12 &&
          std::abs(conditional_probability(*x, *y, psi, tol) - 1.0) > 1e-8)
        throw std::logic_error("perfectly_correlated: vector identity holds for '" + a.label() +
                               "', '" + b.label() + "' but a conditional probability is not 1");
    }
  }
  return correlated;
}

Observable negate(const Observable& a) {
  if (a.kind() != SpectrumKind::TwoValue)
    throw std::invalid_argument("negate: only defined for two-value observables ('" + a.label() +
                                "' is 0-1)");
  std::string label = a.label().starts_with('-') ? a.label().substr(1) : "-" + a.label();
  return Observable(Complex{-1.0, 0.0} * a.op(), SpectrumKind::TwoValue, a.site(),
                    std::move(label));
}

bool are_separated(const Observable& a, const Observable& b, double tol) {
  if (!(a.site() == b.site())) {
    if (linalg::commutator_norm(a.op(), b.op()) > tol)
      throw std::logic_error("are_separated: '" + a.label() + "' and '" + b.label() +
                             "' sit in different regions but do not commute");
    return true;
  }
  return false;
}

CorrelationRule::CorrelationRule(Observable a, Observable b, StateVector state,
                                 Direction direction, Sign sign)
    : a_(std::move(a)), b_(std::move(b)), state_(std::move(state)), direction_(direction),
      sign_(sign) {}

CorrelationRule CorrelationRule::certify(Observable a, Observable b, StateVector state,
                                         Direction direction, Sign sign, double tol) {
  const Observable partner = sign == Sign::Minus ? negate(b) : b;
  bool ok = false;
  if (direction == Direction::Iff) {
    ok = perfectly_correlated(a, partner, state, tol);
  } else {
    ok = quantum_implies(a, partner, state, tol);
  }
  if (!ok)
    throw std::runtime_error("CorrelationRule: claimed correlation '" + a.label() +
                             (direction == Direction::Iff ? " <-> " : " -> ") +
                             (sign == Sign::Minus ? "-" : "") + b.label() + "' fails in state '" +
                             state.label() + "'");
  return CorrelationRule(std::move(a), std::move(b), std::move(state), direction, sign);
}

int CorrelationRule::partner_value(int anchor_value) const {
  if (sign_ == Sign::Plus) return anchor_value;
  // Minus rules are only certifiable for two-value pairs, where negate()
  // swaps the +1 / -1 outcome labels.
  return -anchor_value;
}

}  // namespace realitylab::quantum
