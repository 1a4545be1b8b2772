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

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "realitylab/ensemble.hpp"
#include "realitylab/linalg.hpp"
#include "realitylab/quantum.hpp"

namespace realitylab::histories {

using linalg::CMatrix;
using linalg::kDefaultTol;

/// Self-adjoint, positive semidefinite, positive-trace operator.
struct DensityOperator {
  explicit DensityOperator(CMatrix operator_matrix, double tol = kDefaultTol);
  static DensityOperator pure(const quantum::StateVector& psi);

  CMatrix op;
};

/// A projector-valued event at a (discrete) time label.
struct Event {
  int time = 0;
  CMatrix projector;
};

/// A finite sequence of events at strictly increasing times.
class History {
 public:
  explicit History(std::vector<Event> events, double tol = kDefaultTol);

  const std::vector<Event>& events() const { return events_; }
  std::size_t dim() const { return events_.empty() ? 0 : events_.front().projector.rows(); }

 private:
  std::vector<Event> events_;
};

/// Projective decompositions of the identity at ordered times, together
/// with the elementary histories they generate (one projector per time).
class HistoryFamily {
 public:
  /// Validates that each time's projectors are mutually orthogonal and sum
  /// to the identity.
  explicit HistoryFamily(std::vector<std::pair<int, std::vector<CMatrix>>> decompositions,
                         double tol = kDefaultTol);

  const std::vector<int>& times() const { return times_; }
  const std::vector<CMatrix>& decomposition(int time) const;
  std::size_t dim() const { return dim_; }

  std::size_t elementary_count() const;
  /// Per-time projector indices of the elementary history `index`
  /// (first time most significant).
  std::vector<std::size_t> elementary_indices(std::size_t index) const;
  History elementary(std::size_t index) const;
  std::string elementary_label(std::size_t index) const;

  /// Index of the elementary history whose event at each of `h`'s times
  /// dominates the assigned projector; nullopt if `h` does not fit.
  std::optional<std::size_t> find_elementary(const History& h, double tol = kDefaultTol) const;

  /// True iff the elementary history `index` conforms to `h`: at each of
  /// h's times the selected projector lies under h's event.
  bool conforms(std::size_t index, const History& h, double tol = kDefaultTol) const;

  /// Deterministic fingerprint of the decomposition structure, used to key
  /// occurrence sampling.
  std::uint64_t structural_key() const;

 private:
  std::vector<int> times_;
  std::vector<std::vector<CMatrix>> decompositions_;
  std::size_t dim_ = 0;
};

/// C_h = E_n * E_{n-1} * ... * E_1 (latest event leftmost).
CMatrix chain_operator(const History& h);

/// Re Tr(C_{h1} rho C_{h2}^dagger).
double decoherence_functional(const History& h1, const History& h2, const DensityOperator& rho);

/// Tr(C_h rho C_h^dagger) / Tr(rho). Requires the smallest family
/// containing h to be consistent under rho; otherwise the probability is
/// undefined and this throws.
double history_probability(const History& h, const DensityOperator& rho,
                           double tol = kDefaultTol);

/// The smallest family containing h: at each time {E, 1-E}, or {1} when the
/// event is the identity. The event itself gets projector index 0.
HistoryFamily minimal_family(const History& h, double tol = kDefaultTol);

/// Weak decoherence: |Re Tr(C_{h1} rho C_{h2}^dagger)| <= tol for every
/// pair of distinct elementary histories.
bool is_consistent(const HistoryFamily& family, const DensityOperator& rho,
                   double tol = kDefaultTol);

/// True iff every projector of every coarse decomposition is a sum of
/// projectors of the fine decomposition at the same time.
bool is_refinement(const HistoryFamily& coarse, const HistoryFamily& fine,
                   double tol = kDefaultTol);

/// Compatibility via the canonical product refinement: true iff the two
/// decompositions commute pairwise at every time and the resulting product
/// family is consistent under rho. (The general notion quantifies over all
/// containing families; commuting decompositions make the product family
/// the canonical witness, and non-commuting ones admit none.)
bool are_compatible(const HistoryFamily& f1, const HistoryFamily& f2, const DensityOperator& rho,
                    double tol = kDefaultTol);

/// A family bound to a concrete ensemble: every member specimen carries
/// exactly one occurring elementary history.
struct FamilySupport {
  HistoryFamily family;
  std::vector<std::int64_t> member_ids;
  std::map<std::int64_t, std::size_t> occurrence;

  /// b_1(h): members whose assigned elementary history conforms to h.
  std::set<std::int64_t> occurs_set(const History& h, double tol = kDefaultTol) const;
  /// b_0(h).
  std::set<std::int64_t> not_occurs_set(const History& h, double tol = kDefaultTol) const;
  std::set<std::int64_t> occurs_set(std::size_t elementary_index) const;
};

/// Assigns each specimen of the support one elementary history, sampled
/// from the family's chain-operator probabilities (deterministic per
/// (seed, specimen)). Binding an inconsistent family throws: its support
/// is empty by definition.
FamilySupport bind_support(const HistoryFamily& family, const ensemble::Support& support,
                           const DensityOperator& rho, double tol = kDefaultTol);

struct ContradictionReport {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool family_e_consistent = false;
  bool family_g_consistent = false;
  bool compatible = true;
  std::size_t witness_count = 0;
  double witness_fraction = 0.0;
  double expected_fraction = 0.0;
  bool objectification_holds = false;
  bool intersection_nonempty = false;
  bool exclusivity_violated = false;
  std::string verdict;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

struct ContradictionResult {
  ContradictionReport report;
  ensemble::Support support;
};

/// Runs the two-time analysis on the ideal setup: measures (T, Y) on all
/// specimens, applies the strict extensions, and checks that specimens for
/// which both T and Y occur end up inside the supports of both minimal
/// families C(h_E) and C(h_G) even though those families are incompatible.
ContradictionResult contradiction_demo(std::size_t n, std::uint64_t seed);

/// Family dump: per-time projector matrices as [re, im] entry pairs,
/// elementary history labels, consistency verdict under rho, and the
/// pairwise decoherence matrix.
nlohmann::json family_to_json(const HistoryFamily& family, const DensityOperator& rho,
                              double tol = kDefaultTol);

}  // namespace realitylab::histories
