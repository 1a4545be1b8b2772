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

#include "realitylab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace realitylab::experiments {

using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;
using quantum::CorrelationRule;
using quantum::Direction;
using quantum::Observable;
using quantum::Sign;
using quantum::Site;
using quantum::SpectrumKind;
using quantum::StateVector;

namespace {

CMatrix spin_half(const Vec3& n) {
  // n . sigma in hbar/2 units.
  return CMatrix::from_rows({{Complex{n.z, 0.0}, Complex{n.x, -n.y}},
                             {Complex{n.x, n.y}, Complex{-n.z, 0.0}}});
}

CMatrix basis_projector(std::size_t dim, std::size_t index) {
  CMatrix m(dim, dim);
  m(index, index) = 1.0;
  return m;
}

std::string format_double(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

}  // namespace

BohmEprSetup build_singlet(const Vec3& n_a, const Vec3& n_b, double tol) {
  auto norm3 = [](const Vec3& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); };
  if (std::abs(norm3(n_a) - 1.0) > 1e-9 || std::abs(norm3(n_b) - 1.0) > 1e-9)
    throw std::invalid_argument("build_singlet: directions must be unit vectors");
  const Vec3 cross{n_a.y * n_b.z - n_a.z * n_b.y, n_a.z * n_b.x - n_a.x * n_b.z,
                   n_a.x * n_b.y - n_a.y * n_b.x};
  if (norm3(cross) <= 1e-9)
    throw std::invalid_argument("build_singlet: directions must be non-parallel");

  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  StateVector psi(CVector{0.0, inv_sqrt2, -inv_sqrt2, 0.0}, "psi_singlet");

  const CMatrix one2 = CMatrix::identity(2);
  const Site r1{"R_1"};
  const Site r2{"R_2"};
  Observable a(linalg::tensor(spin_half(n_a), one2), SpectrumKind::TwoValue, r1, "A", tol);
  Observable b(linalg::tensor(spin_half(n_b), one2), SpectrumKind::TwoValue, r1, "B", tol);
  Observable p(linalg::tensor(one2, spin_half(n_a)), SpectrumKind::TwoValue, r2, "P", tol);
  Observable q(linalg::tensor(one2, spin_half(n_b)), SpectrumKind::TwoValue, r2, "Q", tol);

  CorrelationRule rule_ap =
      CorrelationRule::certify(a, p, psi, Direction::Iff, Sign::Minus, tol);
  CorrelationRule rule_bq =
      CorrelationRule::certify(b, q, psi, Direction::Iff, Sign::Minus, tol);

  return BohmEprSetup{std::move(psi), std::move(a),       std::move(b),
                      std::move(p),   std::move(q),       std::move(rule_ap),
                      std::move(rule_bq), n_a,            n_b};
}

BohmEprSetup build_singlet_xz(double theta_a, double theta_b, double tol) {
  return build_singlet(Vec3{std::sin(theta_a), 0.0, std::cos(theta_a)},
                       Vec3{std::sin(theta_b), 0.0, std::cos(theta_b)}, tol);
}

Observable IdealSetup::embedded_a_II(int j) const {
  if (j < 1 || j > 4) throw std::invalid_argument("embedded_a_II: j must be in 1..4");
  return Observable(linalg::tensor(CMatrix::identity(6), a_II[static_cast<std::size_t>(j - 1)]),
                    SpectrumKind::ZeroOne, Site{"R_II"}, "A_II^" + std::to_string(j));
}

IdealSetup build_ideal() {
  const std::size_t dim_i = 6;
  const std::size_t dim_ii = 4;

  std::array<CMatrix, 6> a_I;
  for (std::size_t i = 0; i < dim_i; ++i) a_I[i] = basis_projector(dim_i, i);
  std::array<CMatrix, 4> a_II;
  for (std::size_t j = 0; j < dim_ii; ++j) a_II[j] = basis_projector(dim_ii, j);

  // psi_1^1 = (|5/2> - |3/2> + |-1/2> - |-3/2>) / 2, psi_1^2 = |1/2>,
  // psi_1^3 = |-5/2>.
  CVector psi11(dim_i);
  psi11[0] = 0.5;
  psi11[1] = -0.5;
  psi11[3] = 0.5;
  psi11[4] = -0.5;
  CVector psi12(dim_i);
  psi12[2] = 1.0;
  CVector psi13(dim_i);
  psi13[5] = 1.0;
  std::array<CMatrix, 3> b_I{linalg::outer(psi11, psi11), linalg::outer(psi12, psi12),
                             linalg::outer(psi13, psi13)};

  const CMatrix one_i = CMatrix::identity(dim_i);
  const CMatrix one_ii = CMatrix::identity(dim_ii);
  const CMatrix e_i = a_I[0] + a_I[1] + a_I[2];
  const CMatrix g_i = b_I[0] + b_I[1] + b_I[2];
  const CMatrix t_ii = a_II[0] + a_II[1];
  const CMatrix y_ii = a_II[0] + a_II[2];

  const Site r_i{"R_I"};
  const Site r_ii{"R_II"};
  Observable e(linalg::tensor(e_i, one_ii), SpectrumKind::ZeroOne, r_i, "E");
  Observable g(linalg::tensor(g_i, one_ii), SpectrumKind::ZeroOne, r_i, "G");
  Observable t(linalg::tensor(one_i, t_ii), SpectrumKind::ZeroOne, r_ii, "T");
  Observable y(linalg::tensor(one_i, y_ii), SpectrumKind::ZeroOne, r_ii, "Y");

  // psi = sqrt(3)/4 (|5/2> + |3/2>)|1/2> + 1/sqrt(8) |1/2>|3/2>
  //     + 1/4 (|-1/2> + |-3/2>)|-3/2> + sqrt(3/8) |-5/2>|-1/2>
  CVector amplitudes(dim_i * dim_ii);
  const double root3_4 = std::sqrt(3.0) / 4.0;
  amplitudes[0 * 4 + 1] = root3_4;
  amplitudes[1 * 4 + 1] = root3_4;
  amplitudes[2 * 4 + 0] = 1.0 / std::sqrt(8.0);
  amplitudes[3 * 4 + 3] = 0.25;
  amplitudes[4 * 4 + 3] = 0.25;
  amplitudes[5 * 4 + 2] = std::sqrt(3.0 / 8.0);
  StateVector psi(std::move(amplitudes), "psi_ideal");

  CorrelationRule rule_et = CorrelationRule::certify(e, t, psi, Direction::Iff);
  CorrelationRule rule_gy = CorrelationRule::certify(g, y, psi, Direction::Iff);

  return IdealSetup{std::move(psi), std::move(a_I),     std::move(a_II), std::move(b_I),
                    std::move(e),   std::move(g),       std::move(t),    std::move(y),
                    std::move(rule_et), std::move(rule_gy)};
}

std::array<TableRow, 4> inference_table(const IdealSetup& setup) {
  std::array<TableRow, 4> table{};
  std::size_t row = 0;
  for (const int t : {1, 0}) {
    for (const int y : {1, 0}) {
      table[row++] = TableRow{t, y, setup.rule_et.partner_value(t), setup.rule_gy.partner_value(y)};
    }
  }
  return table;
}

std::string to_string(Extension extension) {
  return extension == Extension::Strict ? "strict" : "wide";
}

Extension extension_from_string(const std::string& text) {
  if (text == "strict") return Extension::Strict;
  if (text == "wide") return Extension::Wide;
  throw std::invalid_argument("unknown extension '" + text + "' (expected strict or wide)");
}

namespace {

const std::set<std::vector<std::string>>& allowed_epr_groups() {
  static const std::set<std::vector<std::string>> allowed{
      {"A"}, {"B"}, {"P"}, {"Q"}, {"A", "P"}, {"B", "Q"}, {"A", "Q"}, {"B", "P"}};
  return allowed;
}

std::string policy_to_text(const EprPolicy& policy) {
  std::string out;
  for (std::size_t i = 0; i < policy.groups.size(); ++i) {
    if (i) out += ";";
    for (std::size_t j = 0; j < policy.groups[i].first.size(); ++j) {
      if (j) out += ",";
      out += policy.groups[i].first[j];
    }
    out += ":" + format_double(policy.groups[i].second);
  }
  return out;
}

}  // namespace

EprResult run_epr_analysis(std::size_t n, std::uint64_t seed, Extension extension,
                           const EprPolicy& policy, double theta_a, double theta_b) {
  const BohmEprSetup setup = build_singlet_xz(theta_a, theta_b);
  const std::map<std::string, const Observable*> by_label{
      {"A", &setup.A}, {"B", &setup.B}, {"P", &setup.P}, {"Q", &setup.Q}};

  std::vector<ensemble::PolicyGroup> groups;
  for (const auto& [labels, fraction] : policy.groups) {
    std::vector<std::string> sorted_labels = labels;
    std::sort(sorted_labels.begin(), sorted_labels.end());
    if (!allowed_epr_groups().contains(sorted_labels))
      throw std::invalid_argument("run_epr_analysis: policy group is not one of the admissible "
                                  "EPR measurement groups");
    ensemble::PolicyGroup group;
    group.fraction = fraction;
    for (const auto& label : sorted_labels) group.observables.push_back(*by_label.at(label));
    groups.push_back(std::move(group));
  }
  const ensemble::MeasurementPolicy measurement_policy(std::move(groups));

  ensemble::Support support = ensemble::create_support(setup.psi, n, seed);
  ensemble::apply_policy(support, measurement_policy);

  if (extension == Extension::Strict) {
    ensemble::apply_strict_extension(support, setup.rule_ap);
    ensemble::apply_strict_extension(support, setup.rule_bq);
  } else {
    ensemble::apply_wide_extension(support, setup.rule_ap);
    ensemble::apply_wide_extension(support, setup.rule_bq);
  }

  EprReport report;
  report.n = n;
  report.seed = seed;
  report.extension = extension;
  report.policy_text = policy_to_text(policy);
  report.theta_a = theta_a;
  report.theta_b = theta_b;
  for (const auto& label : {"A", "B", "P", "Q"})
    report.measured_counts[label] = ensemble::measured_set(support, label).size();

  const auto set_a = ensemble::measured_set(support, "A");
  const auto set_b = ensemble::measured_set(support, "B");
  const auto set_p = ensemble::measured_set(support, "P");
  const auto set_q = ensemble::measured_set(support, "Q");
  std::set<std::int64_t> a_and_q;
  std::set_intersection(set_a.begin(), set_a.end(), set_q.begin(), set_q.end(),
                        std::inserter(a_and_q, a_and_q.begin()));
  std::set<std::int64_t> p_and_b;
  std::set_intersection(set_p.begin(), set_p.end(), set_b.begin(), set_b.end(),
                        std::inserter(p_and_b, p_and_b.begin()));
  const auto xy = ensemble::epr_intersection(support);
  report.xy_intersection_size = xy.size();
  report.a_and_q_size = a_and_q.size();
  report.p_and_b_size = p_and_b.size();
  std::set<std::int64_t> rhs = a_and_q;
  rhs.insert(p_and_b.begin(), p_and_b.end());
  report.xy_identity_holds = xy == rhs;

  report.simultaneous_set_size = ensemble::simultaneous_reality_set(support, setup.P, setup.Q).size();

  report.anticorrelation_conformance = true;
  for (const auto& x : support.specimens) {
    const auto check_pair = [&](const std::string& la, const std::string& lb) {
      const auto ita = x.objective.find(la);
      const auto itb = x.objective.find(lb);
      if (ita != x.objective.end() && itb != x.objective.end() &&
          ita->second.value != -itb->second.value)
        report.anticorrelation_conformance = false;
    };
    check_pair("A", "P");
    check_pair("B", "Q");
  }

  if (report.simultaneous_set_size == 0)
    report.verdict = "simultaneous_PQ_reality: none";
  else if (report.simultaneous_set_size == n)
    report.verdict = "simultaneous_PQ_reality: all";
  else
    report.verdict = "simultaneous_PQ_reality: partial";

  return EprResult{std::move(report), std::move(support)};
}

IdealResult run_ideal_analysis(std::size_t n, std::uint64_t seed, Extension extension) {
  const IdealSetup setup = build_ideal();
  ensemble::Support support = ensemble::create_support(setup.psi, n, seed);
  ensemble::measure_all(support, {setup.T, setup.Y});

  if (extension == Extension::Strict) {
    ensemble::apply_strict_extension(support, setup.rule_et);
    ensemble::apply_strict_extension(support, setup.rule_gy);
  } else {
    ensemble::apply_wide_extension(support, setup.rule_et);
    ensemble::apply_wide_extension(support, setup.rule_gy);
  }

  IdealReport report;
  report.n = n;
  report.seed = seed;
  report.extension = extension;
  report.table = inference_table(setup);
  for (const auto& key : {"11", "10", "01", "00"}) report.joint_counts[key] = 0;

  report.table_conformance = true;
  for (const auto& x : support.specimens) {
    const int t = x.measured.at("T");
    const int y = x.measured.at("Y");
    report.joint_counts[std::to_string(t) + std::to_string(y)] += 1;

    const auto row = std::find_if(report.table.begin(), report.table.end(),
                                  [&](const TableRow& r) { return r.t == t && r.y == y; });
    const auto ite = x.objective.find("E");
    const auto itg = x.objective.find("G");
    if (ite == x.objective.end() || itg == x.objective.end() ||
        ite->second.value != row->e || itg->second.value != row->g)
      report.table_conformance = false;
  }
  for (const auto& [key, count] : report.joint_counts)
    report.joint_frequencies[key] = static_cast<double>(count) / static_cast<double>(n);

  report.simultaneous_set_size =
      ensemble::simultaneous_reality_set(support, setup.E, setup.G).size();

  if (report.simultaneous_set_size == n)
    report.verdict = "simultaneous_EG_reality: all";
  else if (report.simultaneous_set_size == 0)
    report.verdict = "simultaneous_EG_reality: none";
  else
    report.verdict = "simultaneous_EG_reality: partial";

  return IdealResult{std::move(report), std::move(support)};
}

nlohmann::json EprReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = "epr";
  j["n"] = n;
  j["seed"] = seed;
  j["extension"] = to_string(extension);
  j["policy"] = policy_text;
  j["theta_a"] = theta_a;
  j["theta_b"] = theta_b;
  j["counts"] = measured_counts;
  nlohmann::json freq;
  for (const auto& [label, count] : measured_counts)
    freq[label] = static_cast<double>(count) / static_cast<double>(n);
  j["frequencies"] = freq;
  j["xy_intersection"] = {{"size", xy_intersection_size},
                          {"A_and_Q", a_and_q_size},
                          {"P_and_B", p_and_b_size},
                          {"identity_holds", xy_identity_holds}};
  j["simultaneous_set_size"] = simultaneous_set_size;
  j["table_conformance"] = anticorrelation_conformance;
  j["verdict"] = verdict;
  return j;
}

std::string EprReport::to_text() const {
  std::ostringstream out;
  out << "EPR (singlet) analysis\n";
  out << "  n=" << n << " seed=" << seed << " extension=" << to_string(extension) << "\n";
  out << "  policy: " << policy_text << "\n";
  out << "  measured: ";
  for (const auto& [label, count] : measured_counts) out << "|" << label << "|=" << count << " ";
  out << "\n";
  out << "  X n Y: size=" << xy_intersection_size << " (A n Q: " << a_and_q_size
      << ", P n B: " << p_and_b_size << ", identity "
      << (xy_identity_holds ? "holds" : "VIOLATED") << ")\n";
  out << "  anti-correlation conformance: " << (anticorrelation_conformance ? "yes" : "NO")
      << "\n";
  out << "  simultaneous (P,Q) reality set size: " << simultaneous_set_size << "\n";
  out << "  verdict: " << verdict << "\n";
  return out.str();
}

nlohmann::json IdealReport::to_json() const {
  nlohmann::json j;
  j["experiment"] = "ideal";
  j["n"] = n;
  j["seed"] = seed;
  j["extension"] = to_string(extension);
  j["counts"] = joint_counts;
  j["frequencies"] = joint_frequencies;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table)
    rows.push_back({{"t", row.t}, {"y", row.y}, {"e", row.e}, {"g", row.g}});
  j["inference_table"] = rows;
  j["simultaneous_set_size"] = simultaneous_set_size;
  j["table_conformance"] = table_conformance;
  j["verdict"] = verdict;
  return j;
}

std::string IdealReport::to_text() const {
  std::ostringstream out;
  out << "Ideal experiment analysis\n";
  out << "  n=" << n << " seed=" << seed << " extension=" << to_string(extension) << "\n";
  out << "  inference table (T Y | E G):\n";
  for (const auto& row : table)
    out << "    " << row.t << " " << row.y << " | " << row.e << " " << row.g << "\n";
  out << "  joint (T,Y) frequencies: ";
  for (const auto& [key, f] : joint_frequencies) out << key << "=" << f << " ";
  out << "\n";
  out << "  table conformance: " << (table_conformance ? "yes" : "NO") << "\n";
  out << "  simultaneous (E,G) reality set size: " << simultaneous_set_size << "\n";
  out << "  verdict: " << verdict << "\n";
  return out.str();
}

}  // namespace realitylab::experiments
