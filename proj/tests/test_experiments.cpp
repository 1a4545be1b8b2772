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

#include <doctest.h>

#include <cmath>

#include "oracle.hpp"
#include "realitylab/experiments.hpp"

using namespace realitylab;
using experiments::EprPolicy;
using experiments::Extension;
using realitylab::linalg::CMatrix;

namespace {

const experiments::IdealSetup& ideal() {
  static const experiments::IdealSetup setup = experiments::build_ideal();
  return setup;
}

EprPolicy mixed_policy() {
  return EprPolicy{{{{"A", "Q"}, 0.5}, {{"P", "B"}, 0.5}}};
}

}  // namespace

TEST_CASE("the singlet state is normalized and its rules certify") {
  const auto setup = experiments::build_singlet_xz();
  CHECK(std::abs(linalg::norm(setup.psi.vec()) - 1.0) < 1e-12);
  CHECK(quantum::quantum_implies(setup.A, quantum::negate(setup.P), setup.psi));
  CHECK(quantum::quantum_implies(quantum::negate(setup.P), setup.A, setup.psi));
  CHECK(quantum::quantum_implies(setup.B, quantum::negate(setup.Q), setup.psi));
  CHECK(quantum::are_separated(setup.A, setup.P));
  CHECK(linalg::commutator_norm(setup.A.op(), setup.B.op()) > 0.1);
  CHECK(linalg::commutator_norm(setup.P.op(), setup.Q.op()) > 0.1);
}

TEST_CASE("same-axis joint probabilities on the singlet") {
  // Reference: dense Born evaluation on the explicit 4-dim state.
  const auto psi = oracle::singlet_state();
  const auto az = oracle::singlet_Az();
  const auto pz = oracle::singlet_Pz();
  auto joint = [&](int a, int p) {
    const auto pa = oracle::pm_projector(az, a);
    const auto pp = oracle::pm_projector(pz, p);
    return oracle::dot(psi, oracle::mul(pa, oracle::mul(pp, psi))).real();
  };
  CHECK(joint(1, 1) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(joint(1, -1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(joint(-1, 1) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(joint(-1, -1) == doctest::Approx(0.0).epsilon(1e-14));

  const auto setup = experiments::build_singlet_xz();
  const auto pa_plus = setup.A.spectral_projector(1);
  const auto pp_plus = setup.P.spectral_projector(1);
  const auto v = linalg::apply(pa_plus, linalg::apply(pp_plus, setup.psi.vec()));
  CHECK(std::abs(linalg::inner(setup.psi.vec(), v).real()) < 1e-14);
}

TEST_CASE("parallel or non-unit directions are rejected") {
  using experiments::Vec3;
  CHECK_THROWS_AS(experiments::build_singlet(Vec3{0, 0, 1}, Vec3{0, 0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiments::build_singlet(Vec3{0, 0, 1}, Vec3{0, 0, -1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(experiments::build_singlet(Vec3{0, 0, 2}, Vec3{1, 0, 0}),
                  std::invalid_argument);
  CHECK_NOTHROW(experiments::build_singlet(Vec3{0, 0, 1}, Vec3{1, 0, 0}));
}

TEST_CASE("the prepared state of the ideal experiment is normalized") {
  // Hand sum of squared amplitudes: 3/16 + 3/16 + 1/8 + 1/16 + 1/16 + 3/8 = 1.
  CHECK(3.0 / 16 + 3.0 / 16 + 1.0 / 8 + 1.0 / 16 + 1.0 / 16 + 3.0 / 8 == 1.0);
  CHECK(std::abs(linalg::inner(ideal().psi.vec(), ideal().psi.vec()).real() - 1.0) < 1e-12);
}

TEST_CASE("the vector identities hold exactly") {
  const auto e_psi = linalg::apply(ideal().E.op(), ideal().psi.vec());
  const auto t_psi = linalg::apply(ideal().T.op(), ideal().psi.vec());
  CHECK(linalg::norm(e_psi - t_psi) < 1e-12);
  const auto g_psi = linalg::apply(ideal().G.op(), ideal().psi.vec());
  const auto y_psi = linalg::apply(ideal().Y.op(), ideal().psi.vec());
  CHECK(linalg::norm(g_psi - y_psi) < 1e-12);
}

TEST_CASE("the incompatibility of E and G is quantitative") {
  // Reference: dense 24x24 commutator. The nonzero block is the rank-one
  // overlap of psi_1^1 with the top three levels, giving norm sqrt(2).
  const auto commutator = oracle::sub(oracle::mul(oracle::ideal_E(), oracle::ideal_G()),
                                      oracle::mul(oracle::ideal_G(), oracle::ideal_E()));
  const double reference = oracle::fro(commutator);
  CHECK(reference == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(linalg::commutator_norm(ideal().E.op(), ideal().G.op()) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(linalg::commutator_norm(ideal().T.op(), ideal().Y.op()) < 1e-12);
}

TEST_CASE("every constituent operator certifies as a projector") {
  CHECK(linalg::is_projector(ideal().E.op(), 1e-10));
  CHECK(linalg::is_projector(ideal().G.op(), 1e-10));
  CHECK(linalg::is_projector(ideal().T.op(), 1e-10));
  CHECK(linalg::is_projector(ideal().Y.op(), 1e-10));
  for (const auto& projector : ideal().a_I) CHECK(linalg::is_projector(projector, 1e-10));
  for (const auto& projector : ideal().a_II) CHECK(linalg::is_projector(projector, 1e-10));
  for (const auto& projector : ideal().b_I) CHECK(linalg::is_projector(projector, 1e-10));
}

TEST_CASE("the operators match the reference construction entry by entry") {
  CMatrix e_ref(24, 24), t_ref(24, 24), y_ref(24, 24), g_ref(24, 24);
  const auto oe = oracle::ideal_E(), ot = oracle::ideal_T(), oy = oracle::ideal_Y(),
             og = oracle::ideal_G();
  for (std::size_t r = 0; r < 24; ++r)
    for (std::size_t c = 0; c < 24; ++c) {
      e_ref(r, c) = oe[r][c];
      t_ref(r, c) = ot[r][c];
      y_ref(r, c) = oy[r][c];
      g_ref(r, c) = og[r][c];
    }
  CHECK(linalg::frobenius_norm(ideal().E.op() - e_ref) == 0.0);
  CHECK(linalg::frobenius_norm(ideal().T.op() - t_ref) == 0.0);
  CHECK(linalg::frobenius_norm(ideal().Y.op() - y_ref) == 0.0);
  CHECK(linalg::frobenius_norm(ideal().G.op() - g_ref) == 0.0);
}

TEST_CASE("the inference table is the identity map on outcome pairs") {
  const auto table = experiments::inference_table(ideal());
  CHECK(table[0] == experiments::TableRow{1, 1, 1, 1});
  CHECK(table[1] == experiments::TableRow{1, 0, 1, 0});
  CHECK(table[2] == experiments::TableRow{0, 1, 0, 1});
  CHECK(table[3] == experiments::TableRow{0, 0, 0, 0});
  for (const auto& row : table) {
    CHECK(row.e == row.t);
    CHECK(row.g == row.y);
  }
}

TEST_CASE("strict EPR analysis denies simultaneous P,Q reality") {
  const auto result = experiments::run_epr_analysis(2000, 42, Extension::Strict, mixed_policy());
  CHECK(result.report.verdict == "simultaneous_PQ_reality: none");
  CHECK(result.report.simultaneous_set_size == 0);
  CHECK(result.report.xy_identity_holds);
  CHECK(result.report.xy_intersection_size == 2000);
  CHECK(result.report.anticorrelation_conformance);
  CHECK(result.report.measured_counts.at("A") == 1000);
  CHECK(result.report.measured_counts.at("Q") == 1000);
}

TEST_CASE("wide EPR analysis grants simultaneous P,Q reality to all") {
  const auto result = experiments::run_epr_analysis(2000, 42, Extension::Wide, mixed_policy());
  CHECK(result.report.verdict == "simultaneous_PQ_reality: all");
  CHECK(result.report.simultaneous_set_size == 2000);
  CHECK(result.report.anticorrelation_conformance);
}

TEST_CASE("a single specimen measured for A alone has no simultaneous P,Q") {
  const EprPolicy policy{{{{"A"}, 1.0}}};
  const auto result = experiments::run_epr_analysis(1, 42, Extension::Strict, policy);
  CHECK(result.report.simultaneous_set_size == 0);
  CHECK(result.report.verdict == "simultaneous_PQ_reality: none");
  // The lone specimen still gains the objective partner value.
  CHECK(result.support.specimen(0).objective.contains("P"));
}

TEST_CASE("policies outside the admissible groups are rejected") {
  const EprPolicy bad{{{{"A", "B"}, 1.0}}};
  CHECK_THROWS_AS(experiments::run_epr_analysis(10, 1, Extension::Strict, bad),
                  std::invalid_argument);
  const EprPolicy unknown{{{{"Z"}, 1.0}}};
  CHECK_THROWS_AS(experiments::run_epr_analysis(10, 1, Extension::Strict, unknown),
                  std::invalid_argument);
}

TEST_CASE("strict ideal analysis infers the full table on every specimen") {
  const auto result = experiments::run_ideal_analysis(100000, 42, Extension::Strict);
  CHECK(result.report.table_conformance);
  CHECK(result.report.simultaneous_set_size == 100000);
  CHECK(result.report.verdict == "simultaneous_EG_reality: all");

  // Joint frequencies against the dense Born reference (1/8, 3/8, 3/8, 1/8).
  auto tolerance = [](double p) { return 4.0 * std::sqrt(p * (1.0 - p) / 100000.0); };
  CHECK(std::abs(result.report.joint_frequencies.at("11") - 0.125) < tolerance(0.125));
  CHECK(std::abs(result.report.joint_frequencies.at("10") - 0.375) < tolerance(0.375));
  CHECK(std::abs(result.report.joint_frequencies.at("01") - 0.375) < tolerance(0.375));
  CHECK(std::abs(result.report.joint_frequencies.at("00") - 0.125) < tolerance(0.125));
}

TEST_CASE("a single-specimen ideal run lands on one consistent table row") {
  const auto result = experiments::run_ideal_analysis(1, 7, Extension::Strict);
  CHECK(result.report.table_conformance);
  CHECK(result.report.simultaneous_set_size == 1);
  const auto& x = result.support.specimen(0);
  CHECK(x.objective.at("E").value == x.measured.at("T"));
  CHECK(x.objective.at("G").value == x.measured.at("Y"));
}

TEST_CASE("report serialization carries the schema fields") {
  const auto epr_result = experiments::run_epr_analysis(100, 1, Extension::Strict, mixed_policy());
  const auto epr_json = epr_result.report.to_json();
  for (const auto* key :
       {"experiment", "n", "seed", "extension", "frequencies", "simultaneous_set_size",
        "table_conformance", "verdict"})
    CHECK(epr_json.contains(key));
  CHECK(epr_json["experiment"] == "epr");

  const auto ideal_result = experiments::run_ideal_analysis(100, 1, Extension::Strict);
  const auto ideal_json = ideal_result.report.to_json();
  for (const auto* key :
       {"experiment", "n", "seed", "extension", "frequencies", "simultaneous_set_size",
        "table_conformance", "verdict"})
    CHECK(ideal_json.contains(key));
  CHECK(ideal_json["experiment"] == "ideal");

  // Byte-determinism of the serialized report.
  const auto again = experiments::run_ideal_analysis(100, 1, Extension::Strict);
  CHECK(ideal_json.dump() == again.report.to_json().dump());
}

TEST_CASE("extension names round-trip") {
  CHECK(experiments::to_string(Extension::Strict) == "strict");
  CHECK(experiments::to_string(Extension::Wide) == "wide");
  CHECK(experiments::extension_from_string("wide") == Extension::Wide);
  CHECK_THROWS_AS(experiments::extension_from_string("loose"), std::invalid_argument);
}
