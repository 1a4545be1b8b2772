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

#include <array>
#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "realitylab/ensemble.hpp"
#include "realitylab/quantum.hpp"

namespace realitylab::experiments {

using quantum::kDefaultTol;

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Two spin-1/2 particles in the singlet state, with spin observables along
/// two fixed non-parallel directions on each side. A and B live at site R_1,
/// P and Q at site R_2; P (resp. Q) shares A's (resp. B's) direction, so the
/// anti-correlations A <-> -P and B <-> -Q certify.
struct BohmEprSetup {
  quantum::StateVector psi;
  quantum::Observable A, B, P, Q;
  quantum::CorrelationRule rule_ap, rule_bq;
  Vec3 n_a, n_b;
};

/// Throws if the directions are not unit vectors or are (anti-)parallel.
BohmEprSetup build_singlet(const Vec3& n_a, const Vec3& n_b, double tol = kDefaultTol);

/// Directions in the x-z plane at the given polar angles (radians).
BohmEprSetup build_singlet_xz(double theta_a = 0.0,
                              double theta_b = std::numbers::pi / 2.0,
                              double tol = kDefaultTol);

/// A spin-5/2 particle at site R_I paired with a spin-3/2 particle at site
/// R_II, prepared in the entangled state for which E psi = T psi and
/// G psi = Y psi hold while [E, G] != 0.
///
/// Basis ordering: H_I kets |5/2> .. |-5/2> map to indices 0..5, H_II kets
/// |3/2> .. |-3/2> to indices 0..3, and the tensor index is 4*i + j.
struct IdealSetup {
  quantum::StateVector psi;
  std::array<linalg::CMatrix, 6> a_I;   // spin-z projectors of H_I, 5/2 .. -5/2
  std::array<linalg::CMatrix, 4> a_II;  // spin-z projectors of H_II, 3/2 .. -3/2
  std::array<linalg::CMatrix, 3> b_I;   // projectors onto psi_1^1..psi_1^3
  quantum::Observable E, G;             // site R_I, mutually non-commuting
  quantum::Observable T, Y;             // site R_II, commuting
  quantum::CorrelationRule rule_et, rule_gy;

  /// 1_I (x) A_II^j as a 0-1 observable at site R_II (j in 1..4).
  quantum::Observable embedded_a_II(int j) const;
};

IdealSetup build_ideal();

struct TableRow {
  int t, y, e, g;
  bool operator==(const TableRow&) const = default;
};

/// The four-row inference map (t, y) -> (e, g), produced by evaluating the
/// setup's certified rules.
std::array<TableRow, 4> inference_table(const IdealSetup& setup);

enum class Extension { Strict, Wide };
std::string to_string(Extension extension);
Extension extension_from_string(const std::string& text);

/// Measurement groups by observable label with support fractions, e.g.
/// {{"A","Q"}, 0.5}, {{"P","B"}, 0.5}.
struct EprPolicy {
  std::vector<std::pair<std::vector<std::string>, double>> groups;
};

struct EprReport {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Extension extension = Extension::Strict;
  std::string policy_text;
  double theta_a = 0.0;
  double theta_b = 0.0;
  std::map<std::string, std::size_t> measured_counts;  // |A|, |B|, |P|, |Q|
  std::size_t xy_intersection_size = 0;
  std::size_t a_and_q_size = 0;
  std::size_t p_and_b_size = 0;
  bool xy_identity_holds = false;
  std::size_t simultaneous_set_size = 0;
  bool anticorrelation_conformance = false;
  std::string verdict;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

struct EprResult {
  EprReport report;
  ensemble::Support support;
};

/// Creates a support of n specimens, measures it under the policy (groups
/// must be drawn from {A,P}, {B,Q}, {A,Q}, {P,B} and the four singletons),
/// applies the requested extension of A <-> -P and B <-> -Q, and reports the
/// resulting reality bookkeeping.
EprResult run_epr_analysis(std::size_t n, std::uint64_t seed, Extension extension,
                           const EprPolicy& policy, double theta_a = 0.0,
                           double theta_b = std::numbers::pi / 2.0);

struct IdealReport {
  std::size_t n = 0;
  std::uint64_t seed = 0;
  Extension extension = Extension::Strict;
  std::map<std::string, std::size_t> joint_counts;      // keys "ty": "11", "10", "01", "00"
  std::map<std::string, double> joint_frequencies;
  std::array<TableRow, 4> table{};
  bool table_conformance = false;
  std::size_t simultaneous_set_size = 0;
  std::string verdict;

  nlohmann::json to_json() const;
  std::string to_text() const;
};

struct IdealResult {
  IdealReport report;
  ensemble::Support support;
};

/// Measures (T, Y) jointly on all n specimens, applies the requested
/// extension of E <-> T and G <-> Y, and checks every inferred (e, g) pair
/// against the inference table.
IdealResult run_ideal_analysis(std::size_t n, std::uint64_t seed, Extension extension);

}  // namespace realitylab::experiments
