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

#include "realitylab/histories.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "realitylab/experiments.hpp"

namespace realitylab::histories {

using linalg::adjoint;
using linalg::Complex;
using linalg::frobenius_norm;
using linalg::matmul;
using linalg::trace;

DensityOperator::DensityOperator(CMatrix operator_matrix, double tol) : op(std::move(operator_matrix)) {
  if (!op.is_square()) throw std::invalid_argument("DensityOperator: matrix must be square");
  if (frobenius_norm(adjoint(op) - op) > tol)
    throw std::invalid_argument("DensityOperator: matrix is not self-adjoint");
  const auto eigenvalues = linalg::hermitian_eigenvalues(op);
  if (!eigenvalues.empty() && eigenvalues.front() < -tol)
    throw std::invalid_argument("DensityOperator: matrix is not positive semidefinite");
  if (trace(op).real() <= 0.0)
    throw std::invalid_argument("DensityOperator: trace must be positive");
}

DensityOperator DensityOperator::pure(const quantum::StateVector& psi) {
  return DensityOperator(linalg::outer(psi.vec(), psi.vec()));
}

History::History(std::vector<Event> events, double tol) : events_(std::move(events)) {
  for (std::size_t i = 0; i < events_.size(); ++i) {
    if (!linalg::is_projector(events_[i].projector, tol))
      throw std::invalid_argument("History: event at time " + std::to_string(events_[i].time) +
                                  " is not a projector");
    if (events_[i].projector.rows() != events_.front().projector.rows())
      throw std::invalid_argument("History: events act on different spaces");
    if (i > 0 && events_[i].time <= events_[i - 1].time)
      throw std::invalid_argument("History: time labels must be strictly increasing");
  }
}

HistoryFamily::HistoryFamily(std::vector<std::pair<int, std::vector<CMatrix>>> decompositions,
                             double tol) {
  if (decompositions.empty())
    throw std::invalid_argument("HistoryFamily: at least one time label is required");
  std::sort(decompositions.begin(), decompositions.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t i = 1; i < decompositions.size(); ++i)
    if (decompositions[i].first == decompositions[i - 1].first)
      throw std::invalid_argument("HistoryFamily: duplicate time label " +
                                  std::to_string(decompositions[i].first));

  dim_ = decompositions.front().second.empty() ? 0
                                               : decompositions.front().second.front().rows();
  for (const auto& [time, projectors] : decompositions) {
    if (projectors.empty())
      throw std::invalid_argument("HistoryFamily: empty decomposition at time " +
                                  std::to_string(time));
    CMatrix sum = CMatrix::zero(dim_, dim_);
    for (std::size_t k = 0; k < projectors.size(); ++k) {
      if (projectors[k].rows() != dim_ || projectors[k].cols() != dim_)
        throw std::invalid_argument("HistoryFamily: projector dimension mismatch at time " +
                                    std::to_string(time));
      if (!linalg::is_projector(projectors[k], tol))
        throw std::invalid_argument("HistoryFamily: member " + std::to_string(k) + " at time " +
                                    std::to_string(time) + " is not a projector");
      for (std::size_t l = k + 1; l < projectors.size(); ++l)
        if (frobenius_norm(matmul(projectors[k], projectors[l])) > tol)
          throw std::invalid_argument("HistoryFamily: members at time " + std::to_string(time) +
                                      " are not mutually orthogonal");
      sum = sum + projectors[k];
    }
    if (frobenius_norm(sum - CMatrix::identity(dim_)) > tol)
      throw std::invalid_argument("HistoryFamily: decomposition at time " + std::to_string(time) +
                                  " does not sum to the identity");
    times_.push_back(time);
    decompositions_.push_back(projectors);
  }
}

const std::vector<CMatrix>& HistoryFamily::decomposition(int time) const {
  for (std::size_t i = 0; i < times_.size(); ++i)
    if (times_[i] == time) return decompositions_[i];
  throw std::invalid_argument("HistoryFamily: no decomposition at time " + std::to_string(time));
}

std::size_t HistoryFamily::elementary_count() const {
  std::size_t count = 1;
  for (const auto& projectors : decompositions_) count *= projectors.size();
  return count;
}

std::vector<std::size_t> HistoryFamily::elementary_indices(std::size_t index) const {
  if (index >= elementary_count())
    throw std::invalid_argument("HistoryFamily: elementary index out of range");
  std::vector<std::size_t> indices(decompositions_.size());
  for (std::size_t i = decompositions_.size(); i-- > 0;) {
    indices[i] = index % decompositions_[i].size();
    index /= decompositions_[i].size();
  }
  return indices;
}

History HistoryFamily::elementary(std::size_t index) const {
  const auto indices = elementary_indices(index);
  std::vector<Event> events;
  events.reserve(times_.size());
  for (std::size_t i = 0; i < times_.size(); ++i)
    events.push_back(Event{times_[i], decompositions_[i][indices[i]]});
  return History(std::move(events));
}

std::string HistoryFamily::elementary_label(std::size_t index) const {
  const auto indices = elementary_indices(index);
  std::string label;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (i) label += "|";
    label += std::to_string(times_[i]) + ":" + std::to_string(indices[i]);
  }
  return label;
}

bool HistoryFamily::conforms(std::size_t index, const History& h, double tol) const {
  const auto indices = elementary_indices(index);
  for (const Event& event : h.events()) {
    const auto it = std::find(times_.begin(), times_.end(), event.time);
    if (it == times_.end()) return false;
    const std::size_t slot = static_cast<std::size_t>(it - times_.begin());
    const CMatrix& assigned = decompositions_[slot][indices[slot]];
    if (frobenius_norm(matmul(event.projector, assigned) - assigned) > tol) return false;
  }
  return true;
}

std::optional<std::size_t> HistoryFamily::find_elementary(const History& h, double tol) const {
  if (h.events().size() != times_.size()) return std::nullopt;
  std::vector<std::size_t> indices(times_.size());
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (h.events()[i].time != times_[i]) return std::nullopt;
    bool found = false;
    for (std::size_t k = 0; k < decompositions_[i].size(); ++k) {
      if (frobenius_norm(h.events()[i].projector - decompositions_[i][k]) <= tol) {
        indices[i] = k;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;
  }
  std::size_t index = 0;
  for (std::size_t i = 0; i < indices.size(); ++i)
    index = index * decompositions_[i].size() + indices[i];
  return index;
}

std::uint64_t HistoryFamily::structural_key() const {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= p[i];
      h *= 1099511628211ull;
    }
  };
  for (std::size_t i = 0; i < times_.size(); ++i) {
    mix(&times_[i], sizeof(times_[i]));
    for (const CMatrix& projector : decompositions_[i])
      for (const Complex& entry : projector.entries()) {
        const double re = entry.real();
        const double im = entry.imag();
        mix(&re, sizeof(re));
        mix(&im, sizeof(im));
      }
  }
  return h;
}

CMatrix chain_operator(const History& h) {
  if (h.events().empty()) throw std::invalid_argument("chain_operator: empty history");
  CMatrix chain = h.events().front().projector;
  for (std::size_t i = 1; i < h.events().size(); ++i)
    chain = matmul(h.events()[i].projector, chain);
  return chain;
}

double decoherence_functional(const History& h1, const History& h2, const DensityOperator& rho) {
  if (h1.dim() != h2.dim() || h1.dim() != rho.op.rows())
    throw std::invalid_argument("decoherence_functional: dimension mismatch");
  const CMatrix c1 = chain_operator(h1);
  const CMatrix c2 = chain_operator(h2);
  return trace(matmul(matmul(c1, rho.op), adjoint(c2))).real();
}

double history_probability(const History& h, const DensityOperator& rho, double tol) {
  const HistoryFamily family = minimal_family(h, tol);
  if (!is_consistent(family, rho, tol))
    throw std::runtime_error(
        "history_probability: the smallest family containing the history is not consistent, so "
        "the probability is undefined");
  const double normalization = trace(rho.op).real();
  return decoherence_functional(h, h, rho) / normalization;
}

HistoryFamily minimal_family(const History& h, double tol) {
  if (h.events().empty()) throw std::invalid_argument("minimal_family: empty history");
  std::vector<std::pair<int, std::vector<CMatrix>>> decompositions;
  const CMatrix one = CMatrix::identity(h.dim());
  for (const Event& event : h.events()) {
    if (frobenius_norm(event.projector - one) <= tol) {
      decompositions.emplace_back(event.time, std::vector<CMatrix>{one});
    } else {
      decompositions.emplace_back(event.time,
                                  std::vector<CMatrix>{event.projector, one - event.projector});
    }
  }
  return HistoryFamily(std::move(decompositions), tol);
}

bool is_consistent(const HistoryFamily& family, const DensityOperator& rho, double tol) {
  const std::size_t count = family.elementary_count();
  std::vector<History> histories;
  histories.reserve(count);
  for (std::size_t k = 0; k < count; ++k) histories.push_back(family.elementary(k));
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t j = i + 1; j < count; ++j)
      if (std::abs(decoherence_functional(histories[i], histories[j], rho)) > tol) return false;
  return true;
}

bool is_refinement(const HistoryFamily& coarse, const HistoryFamily& fine, double tol) {
  if (coarse.times() != fine.times())
    throw std::invalid_argument("is_refinement: families have mismatched time labels");
  for (const int time : coarse.times()) {
    const auto& coarse_members = coarse.decomposition(time);
    const auto& fine_members = fine.decomposition(time);
    for (const CMatrix& projector : coarse_members) {
      CMatrix sum = CMatrix::zero(projector.rows(), projector.cols());
      for (const CMatrix& fine_member : fine_members)
        if (frobenius_norm(matmul(projector, fine_member) - fine_member) <= tol)
          sum = sum + fine_member;
      if (frobenius_norm(projector - sum) > tol) return false;
    }
  }
  return true;
}

bool are_compatible(const HistoryFamily& f1, const HistoryFamily& f2, const DensityOperator& rho,
                    double tol) {
  if (f1.times() != f2.times())
    throw std::invalid_argument("are_compatible: families have mismatched time labels");
  std::vector<std::pair<int, std::vector<CMatrix>>> product;
  for (const int time : f1.times()) {
    const auto& members1 = f1.decomposition(time);
    const auto& members2 = f2.decomposition(time);
    std::vector<CMatrix> products;
    for (const CMatrix& p : members1)
      for (const CMatrix& q : members2) {
        if (linalg::commutator_norm(p, q) > tol) return false;
        CMatrix pq = matmul(p, q);
        if (frobenius_norm(pq) > tol) products.push_back(std::move(pq));
      }
    product.emplace_back(time, std::move(products));
  }
  return is_consistent(HistoryFamily(std::move(product), tol), rho, tol);
}

std::set<std::int64_t> FamilySupport::occurs_set(const History& h, double tol) const {
  std::set<std::int64_t> ids;
  for (const auto& [id, index] : occurrence)
    if (family.conforms(index, h, tol)) ids.insert(id);
  return ids;
}

std::set<std::int64_t> FamilySupport::not_occurs_set(const History& h, double tol) const {
  const auto occurs = occurs_set(h, tol);
  std::set<std::int64_t> ids;
  for (const auto id : member_ids)
    if (!occurs.contains(id)) ids.insert(id);
  return ids;
}

std::set<std::int64_t> FamilySupport::occurs_set(std::size_t elementary_index) const {
  std::set<std::int64_t> ids;
  for (const auto& [id, index] : occurrence)
    if (index == elementary_index) ids.insert(id);
  return ids;
}

FamilySupport bind_support(const HistoryFamily& family, const ensemble::Support& support,
                           const DensityOperator& rho, double tol) {
  if (!is_consistent(family, rho, tol))
    throw std::runtime_error("bind_support: an inconsistent family has an empty support");
  const double normalization = trace(rho.op).real();
  const CMatrix pure_from_state = linalg::outer(support.state.vec(), support.state.vec());
  if (frobenius_norm(Complex{1.0 / normalization, 0.0} * rho.op - pure_from_state) > 1e-8)
    throw std::invalid_argument("bind_support: rho does not match the support's state");

  const std::size_t count = family.elementary_count();
  std::vector<double> probabilities(count);
  double total = 0.0;
  for (std::size_t k = 0; k < count; ++k) {
    const History h = family.elementary(k);
    probabilities[k] = std::max(0.0, decoherence_functional(h, h, rho) / normalization);
    total += probabilities[k];
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw std::logic_error("bind_support: elementary history probabilities do not sum to 1");

  std::ostringstream key;
  key << "bind:" << std::hex << family.structural_key();
  const std::string label = key.str();

  FamilySupport bound{family, {}, {}};
  bound.member_ids.reserve(support.specimens.size());
  for (const auto& specimen : support.specimens) {
    const double u = ensemble::keyed_uniform(support.seed, specimen.id, label) * total;
    double cumulative = 0.0;
    std::size_t chosen = count - 1;
    for (std::size_t k = 0; k < count; ++k) {
      cumulative += probabilities[k];
      if (u < cumulative) {
        chosen = k;
        break;
      }
    }
    bound.member_ids.push_back(specimen.id);
    bound.occurrence.emplace(specimen.id, chosen);
  }
  return bound;
}

ContradictionResult contradiction_demo(std::size_t n, std::uint64_t seed) {
  const experiments::IdealSetup setup = experiments::build_ideal();
  const DensityOperator rho = DensityOperator::pure(setup.psi);

  const History h_e(std::vector<Event>{{1, setup.E.op()}, {2, setup.T.op()}});
  const History h_g(std::vector<Event>{{1, setup.G.op()}, {2, setup.Y.op()}});
  const HistoryFamily family_e = minimal_family(h_e);
  const HistoryFamily family_g = minimal_family(h_g);

  ContradictionReport report;
  report.n = n;
  report.seed = seed;
  report.family_e_consistent = is_consistent(family_e, rho);
  report.family_g_consistent = is_consistent(family_g, rho);
  report.compatible = are_compatible(family_e, family_g, rho);
  report.expected_fraction =
      quantum::born_probability(setup.embedded_a_II(1), 1, setup.psi);

  ensemble::Support support = ensemble::create_support(setup.psi, n, seed);
  ensemble::measure_all(support, {setup.T, setup.Y});
  ensemble::apply_strict_extension(support, setup.rule_et);
  ensemble::apply_strict_extension(support, setup.rule_gy);

  // Specimens in b_1(h_T) n b_1(h_Y): both T and Y occurred. T and Y share
  // the spectral projector onto the 3/2 level of particle II, so for these
  // specimens the elementary history (1, A_II^1) occurs; the strict
  // extensions then place them in b_1(h_E) and b_1(h_G).
  report.objectification_holds = true;
  for (const auto& x : support.specimens) {
    const bool t_occurs = x.measured.at("T") == 1;
    const bool y_occurs = x.measured.at("Y") == 1;
    const auto ite = x.objective.find("E");
    const auto itg = x.objective.find("G");
    const bool e_occurs = ite != x.objective.end() && ite->second.value == 1;
    const bool g_occurs = itg != x.objective.end() && itg->second.value == 1;
    if (t_occurs && y_occurs && e_occurs && g_occurs) report.witness_count += 1;
    // Objectification: within b(C(h_E)), occurrence of T entails occurrence of E.
    if (ite != x.objective.end() && t_occurs && !e_occurs) report.objectification_holds = false;
  }
  report.witness_fraction = static_cast<double>(report.witness_count) / static_cast<double>(n);
  report.intersection_nonempty = report.witness_count > 0;
  report.exclusivity_violated = report.intersection_nonempty && !report.compatible;
  report.verdict = report.intersection_nonempty ? "exclusivity_violated" : "no_witness_in_sample";

  return ContradictionResult{std::move(report), std::move(support)};
}

nlohmann::json ContradictionReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = "histories";
  j["n"] = n;
  j["seed"] = seed;
  j["family_E_consistent"] = family_e_consistent;
  j["family_G_consistent"] = family_g_consistent;
  j["incompatible_families"] = !compatible;
  j["witness_count"] = witness_count;
  j["witness_fraction"] = witness_fraction;
  j["expected_fraction"] = expected_fraction;
  j["objectification_holds"] = objectification_holds;
  j["intersection_nonempty"] = intersection_nonempty;
  j["exclusivity_violated"] = exclusivity_violated;
  j["verdict"] = verdict;
  return j;
}

std::string ContradictionReport::to_text() const {
  std::ostringstream out;
  out << "Consistent-histories analysis\n";
  out << "  n=" << n << " seed=" << seed << "\n";
  out << "  C(h_E) consistent: " << (family_e_consistent ? "yes" : "NO")
      << ", C(h_G) consistent: " << (family_g_consistent ? "yes" : "NO") << "\n";
  out << "  families compatible: " << (compatible ? "yes" : "no") << "\n";
  out << "  witnesses in b1(h_T) n b1(h_Y) with objective E=G=1: " << witness_count << " ("
      << witness_fraction << ", Born expectation " << expected_fraction << ")\n";
  out << "  objectification (occurrence of T entails occurrence of E): "
      << (objectification_holds ? "holds" : "VIOLATED") << "\n";
  out << "  b(C(h_E)) n b(C(h_G)) nonempty: " << (intersection_nonempty ? "yes" : "no") << "\n";
  out << "  verdict: " << verdict << "\n";
  return out.str();
}

nlohmann::json family_to_json(const HistoryFamily& family, const DensityOperator& rho,
                              double tol) {
  auto matrix_to_json = [](const CMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (std::size_t j = 0; j < m.cols(); ++j)
        row.push_back({m(i, j).real(), m(i, j).imag()});
      rows.push_back(std::move(row));
    }
    return rows;
  };

  nlohmann::json j;
  j["times"] = family.times();
  nlohmann::json decompositions;
  for (const int time : family.times()) {
    nlohmann::json members = nlohmann::json::array();
    for (const CMatrix& projector : family.decomposition(time))
      members.push_back(matrix_to_json(projector));
    decompositions[std::to_string(time)] = std::move(members);
  }
  j["decompositions"] = std::move(decompositions);

  const std::size_t count = family.elementary_count();
  nlohmann::json labels = nlohmann::json::array();
  for (std::size_t k = 0; k < count; ++k) labels.push_back(family.elementary_label(k));
  j["elementary_histories"] = std::move(labels);

  nlohmann::json matrix = nlohmann::json::array();
  for (std::size_t i = 0; i < count; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < count; ++k)
      row.push_back(decoherence_functional(family.elementary(i), family.elementary(k), rho));
    matrix.push_back(std::move(row));
  }
  j["decoherence_matrix"] = std::move(matrix);
  j["consistent"] = is_consistent(family, rho, tol);
  return j;
}

}  // namespace realitylab::histories
