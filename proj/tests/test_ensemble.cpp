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
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracle.hpp"
#include "realitylab/ensemble.hpp"
#include "realitylab/experiments.hpp"

using namespace realitylab;
using ensemble::MeasurementPolicy;
using ensemble::PolicyGroup;
using ensemble::Support;
using quantum::CorrelationRule;
using quantum::Direction;
using quantum::Observable;
using quantum::Sign;
using quantum::Site;
using quantum::SpectrumKind;
using realitylab::linalg::CMatrix;

namespace {

const experiments::IdealSetup& ideal() {
  static const experiments::IdealSetup setup = experiments::build_ideal();
  return setup;
}

const experiments::BohmEprSetup& epr() {
  static const experiments::BohmEprSetup setup = experiments::build_singlet_xz();
  return setup;
}

double binomial_tolerance(double p, std::size_t n) {
  return 4.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

}  // namespace

TEST_CASE("create_support is deterministic and refuses empty supports") {
  const auto s1 = ensemble::create_support(ideal().psi, 10, 42);
  const auto s2 = ensemble::create_support(ideal().psi, 10, 42);
  CHECK(s1.specimens == s2.specimens);
  CHECK(s1.specimens.size() == 10);
  for (const auto& x : s1.specimens) {
    CHECK(x.measured.empty());
    CHECK(x.objective.empty());
  }
  CHECK_THROWS_AS(ensemble::create_support(ideal().psi, 0, 42), std::invalid_argument);
}

TEST_CASE("joint (T, Y) frequencies match the Born distribution") {
  // Reference: dense evaluation of <psi| Pi_T(t) Pi_Y(y) psi> per outcome
  // pair, using the explicitly constructed 24x24 projectors.
  const auto psi = oracle::ideal_state();
  const auto t_mat = oracle::ideal_T();
  const auto y_mat = oracle::ideal_Y();
  const auto one = oracle::eye(24);
  auto joint = [&](int t, int y) {
    const auto pt = t == 1 ? t_mat : oracle::sub(one, t_mat);
    const auto py = y == 1 ? y_mat : oracle::sub(one, y_mat);
    return oracle::dot(psi, oracle::mul(pt, oracle::mul(py, psi))).real();
  };
  const double p11 = joint(1, 1), p10 = joint(1, 0), p01 = joint(0, 1), p00 = joint(0, 0);
  CHECK(p11 == doctest::Approx(1.0 / 8).epsilon(1e-14));
  CHECK(p10 == doctest::Approx(3.0 / 8).epsilon(1e-14));
  CHECK(p01 == doctest::Approx(3.0 / 8).epsilon(1e-14));
  CHECK(p00 == doctest::Approx(1.0 / 8).epsilon(1e-14));

  const std::size_t n = 100000;
  Support support = ensemble::create_support(ideal().psi, n, 42);
  ensemble::measure_all(support, {ideal().T, ideal().Y});

  std::map<std::pair<int, int>, std::size_t> counts;
  for (const auto& x : support.specimens)
    counts[{x.measured.at("T"), x.measured.at("Y")}] += 1;
  auto frequency = [&](int t, int y) {
    return static_cast<double>(counts[{t, y}]) / static_cast<double>(n);
  };
  CHECK(std::abs(frequency(1, 1) - p11) < binomial_tolerance(p11, n));
  CHECK(std::abs(frequency(1, 0) - p10) < binomial_tolerance(p10, n));
  CHECK(std::abs(frequency(0, 1) - p01) < binomial_tolerance(p01, n));
  CHECK(std::abs(frequency(0, 0) - p00) < binomial_tolerance(p00, n));
}

TEST_CASE("non-commuting measurements are excluded on one specimen") {
  Support support = ensemble::create_support(epr().psi, 3, 1);
  const std::vector<std::int64_t> first{0};
  ensemble::measure(support, first, {epr().A});
  // B is the other spin direction of the same particle.
  CHECK_THROWS_AS(ensemble::measure(support, first, {epr().B}), std::invalid_argument);
  // And a joint request of the two is refused outright.
  const std::vector<std::int64_t> second{1};
  CHECK_THROWS_AS(ensemble::measure(support, second, {epr().A, epr().B}),
                  std::invalid_argument);
}

TEST_CASE("measuring the identity observable yields outcome 1 everywhere") {
  const Observable one(CMatrix::identity(24), SpectrumKind::ZeroOne, Site{"R_I"}, "one");
  Support support = ensemble::create_support(ideal().psi, 50, 5);
  ensemble::measure_all(support, {one});
  for (const auto& x : support.specimens) CHECK(x.measured.at("one") == 1);
}

TEST_CASE("measure validates its inputs") {
  Support support = ensemble::create_support(ideal().psi, 4, 9);
  const std::vector<std::int64_t> bad_id{99};
  CHECK_THROWS_AS(ensemble::measure(support, bad_id, {ideal().T}), std::invalid_argument);
  const std::vector<std::int64_t> ok{0};
  CHECK_THROWS_AS(ensemble::measure(support, ok, {}), std::invalid_argument);
  CHECK_THROWS_AS(ensemble::measure(support, ok, {ideal().T, ideal().T}), std::invalid_argument);
  // Wrong Hilbert space.
  CHECK_THROWS_AS(ensemble::measure(support, ok, {epr().A}), std::invalid_argument);
  // Same label, different operator.
  ensemble::measure(support, ok, {ideal().T});
  const Observable fake_t(CMatrix::identity(24), SpectrumKind::ZeroOne, Site{"R_II"}, "T");
  CHECK_THROWS_AS(ensemble::measure(support, ok, {fake_t}), std::invalid_argument);
}

TEST_CASE("repeated measurement of the same observable is stable") {
  Support support = ensemble::create_support(ideal().psi, 20, 3);
  const auto first = ensemble::measure_all(support, {ideal().T});
  const auto second = ensemble::measure_all(support, {ideal().T});
  CHECK(first == second);
}

TEST_CASE("outcomes do not depend on chunking or listing order") {
  const std::size_t n = 200;
  Support whole = ensemble::create_support(ideal().psi, n, 11);
  ensemble::measure_all(whole, {ideal().T, ideal().Y});

  Support chunked = ensemble::create_support(ideal().psi, n, 11);
  std::vector<std::int64_t> front, back;
  for (std::size_t i = 0; i < n; ++i)
    (i % 3 == 0 ? front : back).push_back(static_cast<std::int64_t>(i));
  ensemble::measure(chunked, back, {ideal().Y, ideal().T});  // swapped listing order
  ensemble::measure(chunked, front, {ideal().T, ideal().Y});
  CHECK(ensemble::dump_support(whole) == ensemble::dump_support(chunked));
}

TEST_CASE("later measurements respect earlier outcomes through conditioning") {
  // E and T are perfectly correlated, so measuring T first and E afterwards
  // must never produce disagreeing records.
  const std::size_t n = 2000;
  Support support = ensemble::create_support(ideal().psi, n, 21);
  ensemble::measure_all(support, {ideal().T});
  ensemble::measure_all(support, {ideal().E});
  for (const auto& x : support.specimens) CHECK(x.measured.at("E") == x.measured.at("T"));
}

TEST_CASE("joint (T, Y) outcomes pin the top spin level of particle II") {
  // T Y = A_II^1 as projectors, so conditioned on the recorded (t, y) the
  // level measurement is deterministic: 1 exactly when t = y = 1.
  Support support = ensemble::create_support(ideal().psi, 500, 31);
  ensemble::measure_all(support, {ideal().T, ideal().Y});
  ensemble::measure_all(support, {ideal().embedded_a_II(1)});
  for (const auto& x : support.specimens) {
    const int expected = x.measured.at("T") == 1 && x.measured.at("Y") == 1 ? 1 : 0;
    CHECK(x.measured.at("A_II^1") == expected);
  }
}

TEST_CASE("strict extension assigns the partner value on the measured set") {
  Support support = ensemble::create_support(ideal().psi, 40, 42);
  // Leave a tail of specimens unmeasured.
  std::vector<std::int64_t> measured_ids;
  for (std::int64_t id = 0; id < 30; ++id) measured_ids.push_back(id);
  ensemble::measure(support, measured_ids, {ideal().T});

  const std::size_t assigned = ensemble::apply_strict_extension(support, ideal().rule_et);
  CHECK(assigned == 60);  // objective T (self) + objective E (inferred) on 30 specimens

  for (const auto& x : support.specimens) {
    if (x.measured.contains("T")) {
      CHECK(x.objective.at("T").value == x.measured.at("T"));
      CHECK(x.objective.at("T").via == "T");
      CHECK(x.objective.at("E").value == x.measured.at("T"));
      CHECK(x.objective.at("E").via == "T");
    } else {
      CHECK(x.objective.empty());  // sEQC never reaches unmeasured specimens
    }
  }
}

TEST_CASE("strict extension requires separated observables") {
  Support support = ensemble::create_support(ideal().psi, 4, 2);
  const auto same_site_rule =
      CorrelationRule::certify(ideal().T, ideal().T, ideal().psi, Direction::Iff);
  CHECK_THROWS_AS(ensemble::apply_strict_extension(support, same_site_rule),
                  std::invalid_argument);
}

TEST_CASE("extension rules must be certified in the support's state") {
  Support support = ensemble::create_support(ideal().psi, 4, 2);
  CHECK_THROWS_AS(ensemble::apply_strict_extension(support, epr().rule_ap),
                  std::invalid_argument);
  CHECK_THROWS_AS(ensemble::apply_wide_extension(support, epr().rule_ap), std::invalid_argument);
}

TEST_CASE("locality guard refuses inferences blocked by a co-sited measurement") {
  Support support = ensemble::create_support(epr().psi, 6, 7);
  // Specimen 0: P and B measured together (they commute across particles).
  const std::vector<std::int64_t> pb{0};
  ensemble::measure(support, pb, {epr().P, epr().B});
  // Specimen 1: A and Q measured together.
  const std::vector<std::int64_t> aq{1};
  ensemble::measure(support, aq, {epr().A, epr().Q});
  // Specimen 2: A alone; the guard has nothing to block here.
  const std::vector<std::int64_t> a_only{2};
  ensemble::measure(support, a_only, {epr().A});

  ensemble::apply_strict_extension(support, epr().rule_ap);
  ensemble::apply_strict_extension(support, epr().rule_bq);

  const auto& x0 = support.specimen(0);
  CHECK(x0.objective.contains("P"));
  CHECK(x0.objective.contains("B"));
  CHECK_FALSE(x0.objective.contains("A"));  // blocked: B measured, co-sited with A
  CHECK_FALSE(x0.objective.contains("Q"));  // blocked: P measured, co-sited with Q

  const auto& x1 = support.specimen(1);
  CHECK(x1.objective.contains("A"));
  CHECK(x1.objective.contains("Q"));
  CHECK_FALSE(x1.objective.contains("P"));
  CHECK_FALSE(x1.objective.contains("B"));

  const auto& x2 = support.specimen(2);
  CHECK(x2.objective.contains("A"));
  CHECK(x2.objective.at("P").value == -x2.objective.at("A").value);
  CHECK(x2.objective.at("P").via == "A");

  CHECK(ensemble::simultaneous_reality_set(support, epr().P, epr().Q).empty());
}

TEST_CASE("wide extension grants values to every specimen") {
  Support support = ensemble::create_support(epr().psi, 500, 13);
  ensemble::apply_wide_extension(support, epr().rule_ap);
  ensemble::apply_wide_extension(support, epr().rule_bq);
  for (const auto& x : support.specimens) {
    REQUIRE(x.objective.contains("A"));
    REQUIRE(x.objective.contains("P"));
    REQUIRE(x.objective.contains("B"));
    REQUIRE(x.objective.contains("Q"));
    CHECK(x.objective.at("A").value == -x.objective.at("P").value);
    CHECK(x.objective.at("B").value == -x.objective.at("Q").value);
  }
  CHECK(ensemble::simultaneous_reality_set(support, epr().P, epr().Q).size() == 500);

  Support single = ensemble::create_support(epr().psi, 1, 13);
  ensemble::apply_wide_extension(single, epr().rule_ap);
  CHECK(single.specimen(0).objective.contains("A"));
  CHECK(single.specimen(0).objective.contains("P"));
}

TEST_CASE("wide extension of the ideal rules equates the assignment maps") {
  Support support = ensemble::create_support(ideal().psi, 300, 4);
  ensemble::apply_wide_extension(support, ideal().rule_et);
  ensemble::apply_wide_extension(support, ideal().rule_gy);
  for (const auto& x : support.specimens) {
    CHECK(x.objective.at("E").value == x.objective.at("T").value);
    CHECK(x.objective.at("G").value == x.objective.at("Y").value);
  }
}

TEST_CASE("wide extension keeps Born statistics for sampled values") {
  const std::size_t n = 100000;
  Support support = ensemble::create_support(epr().psi, n, 99);
  ensemble::apply_wide_extension(support, epr().rule_ap);
  std::size_t plus = 0;
  for (const auto& x : support.specimens)
    if (x.objective.at("A").value == 1) ++plus;
  const double frequency = static_cast<double>(plus) / static_cast<double>(n);
  CHECK(std::abs(frequency - 0.5) < binomial_tolerance(0.5, n));
}

TEST_CASE("one-way rules extend only the forcing outcome sets") {
  // psi = (|uu> + |du> + |dd>)/sqrt(3): spin-up on the first particle forces
  // spin-up on the second, but not conversely.
  const double amp = 1.0 / std::sqrt(3.0);
  const quantum::StateVector psi(linalg::CVector{amp, 0.0, amp, amp}, "one_way");
  const CMatrix sz = CMatrix::diagonal({1.0, -1.0});
  const Observable a(linalg::tensor(sz, CMatrix::identity(2)), SpectrumKind::TwoValue,
                     Site{"R_1"}, "Az");
  const Observable b(linalg::tensor(CMatrix::identity(2), sz), SpectrumKind::TwoValue,
                     Site{"R_2"}, "Bz");
  REQUIRE(quantum::quantum_implies(a, b, psi));
  REQUIRE_FALSE(quantum::quantum_implies(b, a, psi));
  CHECK_THROWS_AS(CorrelationRule::certify(a, b, psi, Direction::Iff), std::runtime_error);
  const auto rule = CorrelationRule::certify(a, b, psi, Direction::Implies);

  Support support = ensemble::create_support(psi, 300, 5);
  std::vector<std::int64_t> only_a, only_b, both;
  for (std::int64_t id = 0; id < 100; ++id) only_a.push_back(id);
  for (std::int64_t id = 100; id < 200; ++id) only_b.push_back(id);
  for (std::int64_t id = 200; id < 300; ++id) both.push_back(id);
  ensemble::measure(support, only_a, {a});
  ensemble::measure(support, only_b, {b});
  ensemble::measure(support, both, {a, b});

  ensemble::apply_strict_extension(support, rule);
  for (const auto id : only_a) {
    const auto& x = support.specimen(id);
    CHECK(x.objective.at("Az").value == x.measured.at("Az"));
    if (x.measured.at("Az") == 1) {
      CHECK(x.objective.at("Bz").value == 1);
    } else {
      CHECK_FALSE(x.objective.contains("Bz"));  // a = -1 forces nothing
    }
  }
  for (const auto id : only_b) {
    const auto& x = support.specimen(id);
    if (x.measured.at("Bz") == -1) {
      CHECK(x.objective.at("Az").value == -1);
    } else {
      CHECK_FALSE(x.objective.contains("Az"));  // b = 1 forces nothing
    }
  }
  for (const auto id : both) {
    const auto& x = support.specimen(id);
    if (x.measured.at("Az") == 1) CHECK(x.measured.at("Bz") == 1);
  }

  // The wide pass reaches objective values but never samples for a
  // one-way rule: untouched specimens stay untouched.
  Support fresh = ensemble::create_support(psi, 200, 6);
  ensemble::measure(fresh, std::vector<std::int64_t>{0, 1, 2, 3}, {a});
  ensemble::apply_wide_extension(fresh, rule);
  for (std::int64_t id = 4; id < 200; ++id) CHECK(fresh.specimen(id).objective.empty());
  for (std::int64_t id = 0; id < 4; ++id) {
    const auto& x = fresh.specimen(id);
    CHECK(x.objective.contains("Az"));
    CHECK(x.objective.contains("Bz") == (x.measured.at("Az") == 1));
  }
}

TEST_CASE("conflicting objective assignments abort with a diagnostic") {
  Support support = ensemble::create_support(epr().psi, 2, 3);
  ensemble::measure_all(support, {epr().P});
  // Forge an objective value that contradicts the anti-correlation with the
  // recorded P outcome.
  auto& forged = support.specimen(0);
  forged.objective["A"] = ensemble::ObjectiveValue{forged.measured.at("P"), "forged"};
  CHECK_THROWS_AS(ensemble::apply_wide_extension(support, epr().rule_ap), std::runtime_error);
}

TEST_CASE("measured and objective values agree wherever both exist") {
  Support support = ensemble::create_support(ideal().psi, 500, 77);
  ensemble::measure_all(support, {ideal().T, ideal().Y});
  ensemble::apply_strict_extension(support, ideal().rule_et);
  ensemble::apply_strict_extension(support, ideal().rule_gy);
  for (const auto& x : support.specimens)
    for (const auto& [label, objective] : x.objective)
      if (auto it = x.measured.find(label); it != x.measured.end())
        CHECK(it->second == objective.value);
}

TEST_CASE("plus and minus outcome sets partition each measured set") {
  Support support = ensemble::create_support(epr().psi, 1000, 55);
  const MeasurementPolicy policy({PolicyGroup{{epr().A, epr().Q}, 0.5},
                                  PolicyGroup{{epr().P, epr().B}, 0.5}});
  ensemble::apply_policy(support, policy);
  for (const std::string label : {"A", "B", "P", "Q"}) {
    std::size_t plus = 0, minus = 0, total = 0;
    for (const auto& x : support.specimens) {
      const auto it = x.measured.find(label);
      if (it == x.measured.end()) continue;
      ++total;
      if (it->second == 1)
        ++plus;
      else if (it->second == -1)
        ++minus;
    }
    CHECK(plus + minus == total);
    CHECK(total == 500);
  }
}

TEST_CASE("simultaneous reality under sEQC is exactly the doubly measured set") {
  Support support = ensemble::create_support(ideal().psi, 100, 42);
  std::vector<std::int64_t> t_only, ty, y_only;
  for (std::int64_t id = 0; id < 50; ++id) t_only.push_back(id);
  for (std::int64_t id = 50; id < 75; ++id) ty.push_back(id);
  for (std::int64_t id = 75; id < 100; ++id) y_only.push_back(id);
  ensemble::measure(support, t_only, {ideal().T});
  ensemble::measure(support, ty, {ideal().T, ideal().Y});
  ensemble::measure(support, y_only, {ideal().Y});
  ensemble::apply_strict_extension(support, ideal().rule_et);
  ensemble::apply_strict_extension(support, ideal().rule_gy);

  const auto simultaneous = ensemble::simultaneous_reality_set(support, ideal().E, ideal().G);
  std::set<std::int64_t> expected(ty.begin(), ty.end());
  CHECK(simultaneous == expected);
}

TEST_CASE("epr intersection decomposes into the cross-measured sets") {
  Support support = ensemble::create_support(epr().psi, 1000, 8);
  SUBCASE("an A,Q / P,B split covers the whole support") {
    const MeasurementPolicy policy({PolicyGroup{{epr().A, epr().Q}, 0.5},
                                    PolicyGroup{{epr().P, epr().B}, 0.5}});
    ensemble::apply_policy(support, policy);
    CHECK(ensemble::epr_intersection(support).size() == 1000);
  }
  SUBCASE("same-direction measurements only leave it empty") {
    const MeasurementPolicy policy({PolicyGroup{{epr().A, epr().P}, 1.0}});
    ensemble::apply_policy(support, policy);
    CHECK(ensemble::epr_intersection(support).empty());
  }
  SUBCASE("an unmeasured support has an empty intersection") {
    CHECK(ensemble::epr_intersection(support).empty());
  }
}

TEST_CASE("epr bookkeeping on a support with foreign labels is empty") {
  Support support = ensemble::create_support(ideal().psi, 10, 2);
  ensemble::measure_all(support, {ideal().T, ideal().Y});
  CHECK(ensemble::epr_intersection(support).empty());
}

TEST_CASE("policies validate fractions and commutation") {
  CHECK_THROWS_AS(MeasurementPolicy({PolicyGroup{{epr().A}, 0.5}}), std::invalid_argument);
  CHECK_THROWS_AS(MeasurementPolicy({PolicyGroup{{epr().A}, -0.2},
                                     PolicyGroup{{epr().B}, 1.2}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MeasurementPolicy({PolicyGroup{{epr().A, epr().B}, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(MeasurementPolicy({PolicyGroup{{}, 1.0}}), std::invalid_argument);
  CHECK_NOTHROW(MeasurementPolicy({PolicyGroup{{epr().A, epr().Q}, 0.25},
                                   PolicyGroup{{epr().P, epr().B}, 0.25},
                                   PolicyGroup{{epr().A}, 0.5}}));
}

TEST_CASE("identical runs produce bit-identical support dumps") {
  auto run = []() {
    Support support = ensemble::create_support(epr().psi, 400, 2024);
    const MeasurementPolicy policy({PolicyGroup{{epr().A, epr().Q}, 0.4},
                                    PolicyGroup{{epr().P, epr().B}, 0.4},
                                    PolicyGroup{{epr().P}, 0.2}});
    ensemble::apply_policy(support, policy);
    ensemble::apply_strict_extension(support, epr().rule_ap);
    ensemble::apply_strict_extension(support, epr().rule_bq);
    return ensemble::dump_support(support);
  };
  CHECK(run() == run());
}

TEST_CASE("support dumps are newline-delimited JSON records") {
  Support support = ensemble::create_support(ideal().psi, 5, 6);
  ensemble::measure_all(support, {ideal().T});
  ensemble::apply_strict_extension(support, ideal().rule_et);
  const std::string dump = ensemble::dump_support(support);

  std::size_t lines = 0;
  std::stringstream stream(dump);
  std::string line;
  while (std::getline(stream, line)) {
    const auto record = nlohmann::json::parse(line);
    CHECK(record.contains("id"));
    CHECK(record.contains("measured"));
    CHECK(record.contains("objective"));
    CHECK(record["measured"].contains("T"));
    CHECK(record["objective"]["E"].contains("value"));
    CHECK(record["objective"]["E"]["via"] == "T");
    ++lines;
  }
  CHECK(lines == 5);
}
