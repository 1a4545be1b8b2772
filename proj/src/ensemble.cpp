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

#include "realitylab/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace realitylab::ensemble {

using linalg::apply;
using linalg::CVector;
using linalg::inner;
using quantum::CorrelationRule;
using quantum::Direction;
using quantum::Observable;

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a_bytes(std::uint64_t h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

/// Conflicting objective assignments signal an inconsistent rule set.
std::size_t assign_objective(Specimen& x, const std::string& label, int value,
                             const std::string& via) {
  if (auto it = x.objective.find(label); it != x.objective.end()) {
    if (it->second.value != value)
      throw std::runtime_error("objective conflict on specimen " + std::to_string(x.id) +
                               ": '" + label + "' already holds " +
                               std::to_string(it->second.value) + " (via '" + it->second.via +
                               "') but " + std::to_string(value) + " was inferred via '" + via +
                               "'");
    return 0;
  }
  if (auto mit = x.measured.find(label); mit != x.measured.end() && mit->second != value)
    throw std::runtime_error("objective value " + std::to_string(value) + " for '" + label +
                             "' contradicts the measured outcome " +
                             std::to_string(mit->second) + " on specimen " + std::to_string(x.id));
  x.objective.emplace(label, ObjectiveValue{value, via});
  return 1;
}

/// sEQC locality guard: an inference to the unmeasured observable `target`
/// is void on a specimen that actually underwent a measurement co-sited
/// with and non-commuting with `target`.
bool locality_guard_blocks(const Support& support, const Specimen& x, const Observable& target,
                           double tol) {
  for (const auto& [label, outcome] : x.measured) {
    (void)outcome;
    const Observable& recorded = support.registry.at(label);
    if (recorded.site() == target.site() &&
        linalg::commutator_norm(recorded.op(), target.op()) > tol)
      return true;
  }
  return false;
}

void check_rule_applicable(const Support& support, const CorrelationRule& rule, double tol) {
  if (!quantum::are_separated(rule.a(), rule.b(), tol))
    throw std::invalid_argument("extension rules require separated observables; '" +
                                rule.a().label() + "' and '" + rule.b().label() +
                                "' share site '" + rule.a().site().name + "'");
  if (rule.state().dim() != support.state.dim() ||
      linalg::norm(rule.state().vec() - support.state.vec()) > tol)
    throw std::invalid_argument("rule certified in state '" + rule.state().label() +
                                "' does not match the support state '" + support.state.label() +
                                "'");
}

/// Copies the measured records of the rule's observables into the
/// objective maps (a measured value is also an objective value) and flags
/// which sides were measured.
struct MeasuredSides {
  bool in_a = false;
  bool in_b = false;
  int value_a = 0;
  int value_b = 0;
};

MeasuredSides copy_measured_to_objective(Specimen& x, const CorrelationRule& rule,
                                         std::size_t& assigned) {
  MeasuredSides sides;
  if (auto it = x.measured.find(rule.a().label()); it != x.measured.end()) {
    sides.in_a = true;
    sides.value_a = it->second;
    assigned += assign_objective(x, rule.a().label(), it->second, rule.a().label());
  }
  if (auto it = x.measured.find(rule.b().label()); it != x.measured.end()) {
    sides.in_b = true;
    sides.value_b = it->second;
    assigned += assign_objective(x, rule.b().label(), it->second, rule.b().label());
  }
  if (sides.in_a && sides.in_b) {
    const bool violated = rule.direction() == Direction::Iff
                              ? sides.value_b != rule.partner_value(sides.value_a)
                              : sides.value_a == rule.a().plus_outcome() &&
                                    sides.value_b != rule.partner_value(rule.a().plus_outcome());
    if (violated)
      throw std::runtime_error("measured outcomes on specimen " + std::to_string(x.id) +
                               " violate the certified correlation between '" + rule.a().label() +
                               "' and '" + rule.b().label() + "'");
  }
  return sides;
}

std::string rule_tag(const CorrelationRule& rule) {
  return rule.a().label() + (rule.direction() == Direction::Iff ? "<->" : "->") +
         (rule.sign() == quantum::Sign::Minus ? "-" : "") + rule.b().label();
}

}  // namespace

Specimen& Support::specimen(std::int64_t id) {
  if (id < 0 || static_cast<std::size_t>(id) >= specimens.size() ||
      specimens[static_cast<std::size_t>(id)].id != id)
    throw std::invalid_argument("unknown specimen id " + std::to_string(id));
  return specimens[static_cast<std::size_t>(id)];
}

const Specimen& Support::specimen(std::int64_t id) const {
  return const_cast<Support*>(this)->specimen(id);
}

std::vector<std::int64_t> Support::all_ids() const {
  std::vector<std::int64_t> ids(specimens.size());
  for (std::size_t i = 0; i < specimens.size(); ++i) ids[i] = specimens[i].id;
  return ids;
}

Support create_support(const quantum::StateVector& psi, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("create_support: a support must be non-empty");
  Support support{psi, seed, {}, {}};
  support.specimens.resize(n);
  for (std::size_t i = 0; i < n; ++i) support.specimens[i].id = static_cast<std::int64_t>(i);
  return support;
}

double keyed_uniform(std::uint64_t seed, std::int64_t specimen_id, std::string_view label) {
  std::uint64_t h = 14695981039346656037ull;
  h = fnv1a_bytes(h, &seed, sizeof(seed));
  h = fnv1a_bytes(h, &specimen_id, sizeof(specimen_id));
  h = fnv1a_bytes(h, label.data(), label.size());
  return static_cast<double>(splitmix64(h) >> 11) * 0x1.0p-53;
}

std::vector<std::map<std::string, int>> measure(Support& support,
                                                std::span<const std::int64_t> ids,
                                                const std::vector<Observable>& observables,
                                                double tol) {
  if (observables.empty()) throw std::invalid_argument("measure: empty observable set");
  for (const auto& o : observables) {
    if (o.dim() != support.state.dim())
      throw std::invalid_argument("measure: observable '" + o.label() +
                                  "' does not act on the support's Hilbert space");
  }
  for (std::size_t i = 0; i < observables.size(); ++i)
    for (std::size_t j = i + 1; j < observables.size(); ++j) {
      if (observables[i].label() == observables[j].label())
        throw std::invalid_argument("measure: duplicate observable label '" +
                                    observables[i].label() + "'");
      if (linalg::commutator_norm(observables[i].op(), observables[j].op()) > tol)
        throw std::invalid_argument("measure: observables '" + observables[i].label() +
                                    "' and '" + observables[j].label() +
                                    "' do not commute and cannot be measured together");
    }

  // Register the observables; a label may not be reused for a different operator.
  for (const auto& o : observables) {
    auto it = support.registry.find(o.label());
    if (it == support.registry.end()) {
      support.registry.emplace(o.label(), o);
    } else if (linalg::frobenius_norm(it->second.op() - o.op()) > tol ||
               !(it->second.site() == o.site()) || it->second.kind() != o.kind()) {
      throw std::invalid_argument("measure: label '" + o.label() +
                                  "' is already registered for a different observable");
    }
  }

  // Process observables in label order so that outcomes do not depend on
  // the order in which the caller lists them.
  std::vector<const Observable*> ordered;
  ordered.reserve(observables.size());
  for (const auto& o : observables) ordered.push_back(&o);
  std::sort(ordered.begin(), ordered.end(),
            [](const Observable* x, const Observable* y) { return x->label() < y->label(); });

  // Validate every target before sampling anything, so a refused request
  // leaves the support untouched.
  for (const std::int64_t id : ids) {
    const Specimen& x = support.specimen(id);
    for (const auto* o : ordered) {
      if (x.measured.contains(o->label())) continue;  // projective repeatability
      for (const auto& [label, outcome] : x.measured) {
        (void)outcome;
        const Observable& recorded = support.registry.at(label);
        if (linalg::commutator_norm(recorded.op(), o->op()) > tol)
          throw std::invalid_argument("measure: specimen " + std::to_string(id) +
                                      " already carries a measurement of '" + label +
                                      "', which does not commute with '" + o->label() + "'");
      }
    }
  }

  // The plus-outcome probability depends only on the specimen's fixed
  // outcomes so far, so it is cached across specimens.
  std::map<std::string, double> prob_cache;

  std::vector<std::map<std::string, int>> results;
  results.reserve(ids.size());
  for (const std::int64_t id : ids) {
    Specimen& x = support.specimen(id);

    // Conditioning context: the product of the projectors of all outcomes
    // fixed so far (they pairwise commute, so the order is irrelevant).
    std::string context;
    for (const auto& [label, outcome] : x.measured)
      context += label + "=" + std::to_string(outcome) + ";";

    CVector phi = support.state.vec();
    bool phi_current = false;  // recompute lazily only when a draw is needed

    std::map<std::string, int> outcomes;
    for (const auto* o : ordered) {
      if (auto it = x.measured.find(o->label()); it != x.measured.end()) {
        outcomes[o->label()] = it->second;
        continue;
      }
      const std::string cache_key = context + "|" + o->label();
      auto cached = prob_cache.find(cache_key);
      double p_plus = 0.0;
      if (cached != prob_cache.end()) {
        p_plus = cached->second;
      } else {
        if (!phi_current) {
          for (const auto& [label, outcome] : x.measured)
            phi = apply(support.registry.at(label).spectral_projector(outcome), phi);
          for (const auto& [label, outcome] : outcomes)
            phi = apply(support.registry.at(label).spectral_projector(outcome), phi);
          phi_current = true;
        }
        const double weight = inner(phi, phi).real();
        if (weight <= 0.0)
          throw std::logic_error("measure: conditioning context annihilated the state");
        p_plus = inner(phi, apply(o->spectral_projector(o->plus_outcome()), phi)).real() / weight;
        p_plus = std::clamp(p_plus, 0.0, 1.0);
        prob_cache.emplace(cache_key, p_plus);
      }

      const double u = keyed_uniform(support.seed, id, o->label());
      const int outcome = u < p_plus ? o->plus_outcome() : o->minus_outcome();
      outcomes[o->label()] = outcome;
      context += o->label() + "=" + std::to_string(outcome) + ";";
      if (phi_current) phi = apply(o->spectral_projector(outcome), phi);
    }

    for (const auto& [label, outcome] : outcomes) x.measured[label] = outcome;
    results.push_back(std::move(outcomes));
  }
  return results;
}

std::vector<std::map<std::string, int>> measure_all(Support& support,
                                                    const std::vector<Observable>& observables,
                                                    double tol) {
  const auto ids = support.all_ids();
  return measure(support, ids, observables, tol);
}

std::size_t apply_strict_extension(Support& support, const CorrelationRule& rule, double tol) {
  check_rule_applicable(support, rule, tol);
  std::size_t assigned = 0;
  for (Specimen& x : support.specimens) {
    const MeasuredSides sides = copy_measured_to_objective(x, rule, assigned);
    if (!sides.in_a && !sides.in_b) continue;  // sEQC reaches A u B only

    if (rule.direction() == Direction::Iff) {
      if (sides.in_a && !sides.in_b && !locality_guard_blocks(support, x, rule.b(), tol))
        assigned += assign_objective(x, rule.b().label(), rule.partner_value(sides.value_a),
                                     rule.a().label());
      if (sides.in_b && !sides.in_a && !locality_guard_blocks(support, x, rule.a(), tol))
        assigned += assign_objective(x, rule.a().label(), rule.partner_value(sides.value_b),
                                     rule.b().label());
    } else {
      // One-way rule a -> b: inferences exist only on A+ (forcing the
      // partner's plus side) and on the b-records forcing a's minus side.
      const int a_plus = rule.a().plus_outcome();
      const int a_minus = rule.a().minus_outcome();
      if (sides.in_a && !sides.in_b && sides.value_a == a_plus &&
          !locality_guard_blocks(support, x, rule.b(), tol))
        assigned +=
            assign_objective(x, rule.b().label(), rule.partner_value(a_plus), rule.a().label());
      if (sides.in_b && !sides.in_a && sides.value_b == rule.partner_value(a_minus) &&
          !locality_guard_blocks(support, x, rule.a(), tol))
        assigned += assign_objective(x, rule.a().label(), a_minus, rule.b().label());
    }
  }
  return assigned;
}

std::size_t apply_wide_extension(Support& support, const CorrelationRule& rule, double tol) {
  check_rule_applicable(support, rule, tol);
  const double p_plus_a =
      quantum::born_probability(rule.a(), rule.a().plus_outcome(), support.state);
  const std::string sampled_via = "EQC:" + rule_tag(rule);

  std::size_t assigned = 0;
  for (Specimen& x : support.specimens) {
    copy_measured_to_objective(x, rule, assigned);

    const auto obj_a = x.objective.find(rule.a().label());
    const auto obj_b = x.objective.find(rule.b().label());
    const bool has_a = obj_a != x.objective.end();
    const bool has_b = obj_b != x.objective.end();

    if (rule.direction() == Direction::Iff) {
      if (has_a) {
        assigned += assign_objective(x, rule.b().label(), rule.partner_value(obj_a->second.value),
                                     rule.a().label());
      } else if (has_b) {
        assigned += assign_objective(x, rule.a().label(), rule.partner_value(obj_b->second.value),
                                     rule.b().label());
      } else {
        // No anchor anywhere: EQC still grants both values. Sample the
        // common value from the Born marginal so ensemble statistics stay
        // quantum-consistent.
        const double u = keyed_uniform(support.seed, x.id, sampled_via);
        const int value_a =
            u < p_plus_a ? rule.a().plus_outcome() : rule.a().minus_outcome();
        assigned += assign_objective(x, rule.a().label(), value_a, sampled_via);
        assigned +=
            assign_objective(x, rule.b().label(), rule.partner_value(value_a), rule.a().label());
      }
    } else {
      const int a_plus = rule.a().plus_outcome();
      const int a_minus = rule.a().minus_outcome();
      if (has_a && obj_a->second.value == a_plus)
        assigned +=
            assign_objective(x, rule.b().label(), rule.partner_value(a_plus), rule.a().label());
      if (has_b && obj_b->second.value == rule.partner_value(a_minus))
        assigned += assign_objective(x, rule.a().label(), a_minus, rule.b().label());
    }
  }
  return assigned;
}

std::set<std::int64_t> simultaneous_reality_set(const Support& support, const Observable& o1,
                                                const Observable& o2) {
  std::set<std::int64_t> ids;
  for (const Specimen& x : support.specimens)
    if (x.objective.contains(o1.label()) && x.objective.contains(o2.label())) ids.insert(x.id);
  return ids;
}

std::set<std::int64_t> measured_set(const Support& support, const std::string& label) {
  std::set<std::int64_t> ids;
  for (const Specimen& x : support.specimens)
    if (x.measured.contains(label)) ids.insert(x.id);
  return ids;
}

std::set<std::int64_t> epr_intersection(const Support& support, const std::string& label_a,
                                        const std::string& label_b, const std::string& label_p,
                                        const std::string& label_q) {
  const auto set_a = measured_set(support, label_a);
  const auto set_b = measured_set(support, label_b);
  const auto set_p = measured_set(support, label_p);
  const auto set_q = measured_set(support, label_q);

  auto set_union = [](const std::set<std::int64_t>& u, const std::set<std::int64_t>& v) {
    std::set<std::int64_t> out;
    std::set_union(u.begin(), u.end(), v.begin(), v.end(), std::inserter(out, out.begin()));
    return out;
  };
  auto set_intersection = [](const std::set<std::int64_t>& u, const std::set<std::int64_t>& v) {
    std::set<std::int64_t> out;
    std::set_intersection(u.begin(), u.end(), v.begin(), v.end(),
                          std::inserter(out, out.begin()));
    return out;
  };

  const auto lhs = set_intersection(set_union(set_a, set_p), set_union(set_b, set_q));
  const auto rhs =
      set_union(set_intersection(set_a, set_q), set_intersection(set_p, set_b));
  if (lhs != rhs)
    throw std::logic_error(
        "epr_intersection: (A u P) n (B u Q) != (A n Q) u (P n B); the measurement exclusion "
        "rule was bypassed");
  return lhs;
}

MeasurementPolicy::MeasurementPolicy(std::vector<PolicyGroup> groups, double tol)
    : groups_(std::move(groups)) {
  double total = 0.0;
  for (const auto& group : groups_) {
    if (group.observables.empty())
      throw std::invalid_argument("MeasurementPolicy: empty observable group");
    if (group.fraction < 0.0 || group.fraction > 1.0)
      throw std::invalid_argument("MeasurementPolicy: group fraction outside [0, 1]");
    for (std::size_t i = 0; i < group.observables.size(); ++i)
      for (std::size_t j = i + 1; j < group.observables.size(); ++j)
        if (linalg::commutator_norm(group.observables[i].op(), group.observables[j].op()) > tol)
          throw std::invalid_argument("MeasurementPolicy: group contains the non-commuting pair '" +
                                      group.observables[i].label() + "', '" +
                                      group.observables[j].label() + "'");
    total += group.fraction;
  }
  if (std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("MeasurementPolicy: fractions must sum to 1");
}

void apply_policy(Support& support, const MeasurementPolicy& policy, double tol) {
  const auto ids = support.all_ids();
  const double n = static_cast<double>(ids.size());
  double cumulative = 0.0;
  std::size_t begin = 0;
  for (std::size_t g = 0; g < policy.groups().size(); ++g) {
    cumulative += policy.groups()[g].fraction;
    std::size_t end = g + 1 == policy.groups().size()
                          ? ids.size()
                          : static_cast<std::size_t>(std::llround(cumulative * n));
    end = std::min(end, ids.size());
    if (end > begin) {
      const std::span<const std::int64_t> chunk(ids.data() + begin, end - begin);
      measure(support, chunk, policy.groups()[g].observables, tol);
    }
    begin = std::max(begin, end);
  }
}

void dump_support(const Support& support, std::ostream& out) {
  for (const Specimen& x : support.specimens) {
    nlohmann::json record;
    record["id"] = x.id;
    record["measured"] = nlohmann::json::object();
    for (const auto& [label, outcome] : x.measured) record["measured"][label] = outcome;
    record["objective"] = nlohmann::json::object();
    for (const auto& [label, obj] : x.objective)
      record["objective"][label] = {{"value", obj.value}, {"via", obj.via}};
    out << record.dump() << "\n";
  }
}

std::string dump_support(const Support& support) {
  std::ostringstream out;
  dump_support(support, out);
  return out.str();
}

}  // namespace realitylab::ensemble
