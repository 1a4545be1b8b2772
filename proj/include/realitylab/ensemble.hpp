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
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "realitylab/quantum.hpp"

namespace realitylab::ensemble {

using quantum::kDefaultTol;

/// An objective value together with the label of the measured observable
/// (or extension rule) that licensed the assignment.
struct ObjectiveValue {
  int value;
  std::string via;
  bool operator==(const ObjectiveValue&) const = default;
};

/// One individual physical system drawn from a support. `measured` holds
/// actually recorded outcomes; `objective` holds possessed values. After an
/// extension pass every measured value is also an objective value.
struct Specimen {
  std::int64_t id = 0;
  std::map<std::string, int> measured;
  std::map<std::string, ObjectiveValue> objective;

  bool operator==(const Specimen&) const = default;
};

/// A concrete finite set of specimens prepared in one state. Outcome
/// sampling is keyed by (seed, specimen id, observable label), so results
/// do not depend on iteration order or on how ids are chunked across
/// measure() calls.
struct Support {
  quantum::StateVector state;
  std::uint64_t seed = 0;
  std::vector<Specimen> specimens;
  /// Every observable that has been measured on this support, by label.
  std::map<std::string, quantum::Observable> registry;

  Specimen& specimen(std::int64_t id);
  const Specimen& specimen(std::int64_t id) const;
  std::vector<std::int64_t> all_ids() const;
};

/// n fresh unmeasured specimens with ids 0..n-1. Throws on n = 0.
Support create_support(const quantum::StateVector& psi, std::size_t n, std::uint64_t seed);

/// Deterministic uniform draw in [0, 1) keyed by (seed, specimen, label).
double keyed_uniform(std::uint64_t seed, std::int64_t specimen_id, std::string_view label);

/// Jointly measures a commuting set of observables on the given specimens,
/// sampling from the Born distribution of the joint outcome (conditioned on
/// any outcomes already recorded on a specimen). Refuses any request that
/// would put two non-commuting observables in one specimen's record.
/// Returns the outcome maps aligned with `ids`.
std::vector<std::map<std::string, int>> measure(Support& support,
                                                std::span<const std::int64_t> ids,
                                                const std::vector<quantum::Observable>& observables,
                                                double tol = kDefaultTol);

/// measure() over every specimen of the support.
std::vector<std::map<std::string, int>> measure_all(
    Support& support, const std::vector<quantum::Observable>& observables,
    double tol = kDefaultTol);

/// Strict extension pass (sEQC): objective values propagate only to
/// specimens on which at least one of the rule's observables was actually
/// measured. An inference to an unmeasured observable O is refused when the
/// specimen carries a measurement co-sited with and non-commuting with O
/// (the locality guard). Returns the number of objective entries created.
std::size_t apply_strict_extension(Support& support, const quantum::CorrelationRule& rule,
                                   double tol = kDefaultTol);

/// Wide extension pass (EQC): for Iff rules every specimen of the support
/// ends up with consistent objective values for both observables; values
/// with no measured anchor are sampled from the Born marginal. For Implies
/// rules the extension covers the objective plus/minus sets only. Returns
/// the number of objective entries created.
std::size_t apply_wide_extension(Support& support, const quantum::CorrelationRule& rule,
                                 double tol = kDefaultTol);

/// Ids of specimens possessing objective values for both observables.
std::set<std::int64_t> simultaneous_reality_set(const Support& support,
                                                const quantum::Observable& o1,
                                                const quantum::Observable& o2);

/// (A u P) n (B u Q) on the measured bookkeeping sets, verified against the
/// decomposition (A n Q) u (P n B) which holds because A n B and P n Q are
/// kept empty by the measurement exclusion rule.
std::set<std::int64_t> epr_intersection(const Support& support, const std::string& label_a = "A",
                                        const std::string& label_b = "B",
                                        const std::string& label_p = "P",
                                        const std::string& label_q = "Q");

/// Ids of specimens carrying a measured record for `label`.
std::set<std::int64_t> measured_set(const Support& support, const std::string& label);

/// A partition of a support into jointly measured groups.
struct PolicyGroup {
  std::vector<quantum::Observable> observables;
  double fraction = 0.0;
};

class MeasurementPolicy {
 public:
  /// Validates that fractions lie in [0,1] and sum to 1 within 1e-9 and
  /// that each group commutes pairwise.
  explicit MeasurementPolicy(std::vector<PolicyGroup> groups, double tol = kDefaultTol);

  const std::vector<PolicyGroup>& groups() const { return groups_; }

 private:
  std::vector<PolicyGroup> groups_;
};

/// Allocates contiguous id blocks to the policy's groups (sizes by rounded
/// cumulative fraction) and measures each group jointly.
void apply_policy(Support& support, const MeasurementPolicy& policy, double tol = kDefaultTol);

/// Newline-delimited JSON, one record per specimen:
/// {"id": .., "measured": {label: outcome},
///  "objective": {label: {"value": outcome, "via": label}}}
void dump_support(const Support& support, std::ostream& out);
std::string dump_support(const Support& support);

}  // namespace realitylab::ensemble
