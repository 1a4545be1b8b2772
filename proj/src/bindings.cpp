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

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include "realitylab/cli.hpp"
#include "realitylab/ensemble.hpp"
#include "realitylab/experiments.hpp"
#include "realitylab/histories.hpp"
#include "realitylab/linalg.hpp"
#include "realitylab/quantum.hpp"

namespace py = pybind11;
using namespace realitylab;
using linalg::CMatrix;
using linalg::Complex;
using linalg::CVector;

namespace {

using rows_t = std::vector<std::vector<Complex>>;

CMatrix matrix_from_rows(const rows_t& rows) {
  if (rows.empty()) return CMatrix();
  CMatrix m(rows.size(), rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw std::invalid_argument("matrix rows must all have the same length");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

rows_t matrix_to_rows(const CMatrix& m) {
  rows_t rows(m.rows(), std::vector<Complex>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
  return rows;
}

py::object json_to_py(const nlohmann::json& j) {
  using value_t = nlohmann::json::value_t;
  switch (j.type()) {
    case value_t::boolean: return py::bool_(j.get<bool>());
    case value_t::number_integer: return py::int_(j.get<long long>());
    case value_t::number_unsigned: return py::int_(j.get<unsigned long long>());
    case value_t::number_float: return py::float_(j.get<double>());
    case value_t::string: return py::str(j.get<std::string>());
    case value_t::array: {
      py::list out;
      for (const auto& element : j) out.append(json_to_py(element));
      return out;
    }
    case value_t::object: {
      py::dict out;
      for (const auto& [key, value] : j.items()) out[py::str(key)] = json_to_py(value);
      return out;
    }
    default: return py::none();
  }
}

py::dict specimen_to_dict(const ensemble::Specimen& x) {
  py::dict measured;
  for (const auto& [label, outcome] : x.measured) measured[py::str(label)] = outcome;
  py::dict objective;
  for (const auto& [label, value] : x.objective) {
    py::dict entry;
    entry["value"] = value.value;
    entry["via"] = value.via;
    objective[py::str(label)] = entry;
  }
  py::dict out;
  out["id"] = x.id;
  out["measured"] = measured;
  out["objective"] = objective;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Correlation-extension experiments on entangled spin systems";

  // --- linalg
  py::class_<CMatrix>(m, "CMatrix")
      .def(py::init(&matrix_from_rows), py::arg("rows"))
      .def_static("identity", &CMatrix::identity, py::arg("n"))
      .def_property_readonly("rows", &CMatrix::rows)
      .def_property_readonly("cols", &CMatrix::cols)
      .def("to_rows", &matrix_to_rows)
      .def("__repr__", [](const CMatrix& self) {
        return "CMatrix(" + std::to_string(self.rows()) + "x" + std::to_string(self.cols()) + ")";
      });

  m.def("tensor",
        [](const CMatrix& a, const CMatrix& b) { return linalg::tensor(a, b); },
        py::arg("a"), py::arg("b"));
  m.def("is_projector", &linalg::is_projector, py::arg("m"), py::arg("tol") = linalg::kDefaultTol);
  m.def("commutator_norm", &linalg::commutator_norm, py::arg("a"), py::arg("b"));
  m.def("hermitian_eigenvalues", &linalg::hermitian_eigenvalues, py::arg("m"));

  // --- quantum
  py::class_<quantum::StateVector>(m, "StateVector")
      .def(py::init([](const std::vector<Complex>& amplitudes, const std::string& label) {
             return quantum::StateVector(CVector(amplitudes), label);
           }),
           py::arg("amplitudes"), py::arg("label"))
      .def_property_readonly("dim", &quantum::StateVector::dim)
      .def_property_readonly("label",
                             [](const quantum::StateVector& self) { return self.label(); })
      .def("amplitudes",
           [](const quantum::StateVector& self) { return self.vec().entries(); });

  py::class_<quantum::Site>(m, "Site")
      .def(py::init<std::string>(), py::arg("name"))
      .def_readonly("name", &quantum::Site::name)
      .def("__eq__", [](const quantum::Site& a, const quantum::Site& b) { return a == b; });

  py::enum_<quantum::SpectrumKind>(m, "SpectrumKind")
      .value("TWO_VALUE", quantum::SpectrumKind::TwoValue)
      .value("ZERO_ONE", quantum::SpectrumKind::ZeroOne);

  py::class_<quantum::Observable>(m, "Observable")
      .def(py::init<CMatrix, quantum::SpectrumKind, quantum::Site, std::string, double>(),
           py::arg("op"), py::arg("kind"), py::arg("site"), py::arg("label"),
           py::arg("tol") = linalg::kDefaultTol)
      .def_property_readonly("label",
                             [](const quantum::Observable& self) { return self.label(); })
      .def_property_readonly("site", &quantum::Observable::site)
      .def_property_readonly("kind", &quantum::Observable::kind)
      .def_property_readonly("op", [](const quantum::Observable& self) { return self.op(); })
      .def("spectrum", &quantum::Observable::spectrum)
      .def("spectral_projector", &quantum::Observable::spectral_projector, py::arg("outcome"));

  m.def("born_probability", &quantum::born_probability, py::arg("a"), py::arg("outcome"),
        py::arg("psi"));
  m.def("conditional_probability", &quantum::conditional_probability, py::arg("a"),
        py::arg("given"), py::arg("psi"), py::arg("tol") = linalg::kDefaultTol);
  m.def("quantum_implies", &quantum::quantum_implies, py::arg("a"), py::arg("b"), py::arg("psi"),
        py::arg("tol") = linalg::kDefaultTol);
  m.def("perfectly_correlated", &quantum::perfectly_correlated, py::arg("a"), py::arg("b"),
        py::arg("psi"), py::arg("tol") = linalg::kDefaultTol);
  m.def("negate", &quantum::negate, py::arg("a"));
  m.def("are_separated", &quantum::are_separated, py::arg("a"), py::arg("b"),
        py::arg("tol") = linalg::kDefaultTol);

  py::enum_<quantum::Direction>(m, "Direction")
      .value("IMPLIES", quantum::Direction::Implies)
      .value("IFF", quantum::Direction::Iff);
  py::enum_<quantum::Sign>(m, "Sign")
      .value("PLUS", quantum::Sign::Plus)
      .value("MINUS", quantum::Sign::Minus);

  py::class_<quantum::CorrelationRule>(m, "CorrelationRule")
      .def_static("certify", &quantum::CorrelationRule::certify, py::arg("a"), py::arg("b"),
                  py::arg("state"), py::arg("direction"), py::arg("sign") = quantum::Sign::Plus,
                  py::arg("tol") = linalg::kDefaultTol)
      .def_property_readonly("a", &quantum::CorrelationRule::a)
      .def_property_readonly("b", &quantum::CorrelationRule::b)
      .def_property_readonly("direction", &quantum::CorrelationRule::direction)
      .def_property_readonly("sign", &quantum::CorrelationRule::sign)
      .def("partner_value", &quantum::CorrelationRule::partner_value, py::arg("anchor_value"));

  // --- ensemble
  py::class_<ensemble::Support>(m, "Support")
      .def_property_readonly("size",
                             [](const ensemble::Support& self) { return self.specimens.size(); })
      .def_property_readonly("seed", [](const ensemble::Support& self) { return self.seed; })
      .def("ids", &ensemble::Support::all_ids)
      .def("specimen", [](const ensemble::Support& self, std::int64_t id) {
        return specimen_to_dict(self.specimen(id));
      });

  m.def("create_support", &ensemble::create_support, py::arg("psi"), py::arg("n"),
        py::arg("seed"));
  m.def(
      "measure",
      [](ensemble::Support& support, const std::vector<std::int64_t>& ids,
         const std::vector<quantum::Observable>& observables, double tol) {
        return ensemble::measure(support, ids, observables, tol);
      },
      py::arg("support"), py::arg("ids"), py::arg("observables"),
      py::arg("tol") = linalg::kDefaultTol);
  m.def("measure_all", &ensemble::measure_all, py::arg("support"), py::arg("observables"),
        py::arg("tol") = linalg::kDefaultTol);
  m.def("apply_strict_extension", &ensemble::apply_strict_extension, py::arg("support"),
        py::arg("rule"), py::arg("tol") = linalg::kDefaultTol);
  m.def("apply_wide_extension", &ensemble::apply_wide_extension, py::arg("support"),
        py::arg("rule"), py::arg("tol") = linalg::kDefaultTol);
  m.def("simultaneous_reality_set", &ensemble::simultaneous_reality_set, py::arg("support"),
        py::arg("o1"), py::arg("o2"));
  m.def("epr_intersection", &ensemble::epr_intersection, py::arg("support"),
        py::arg("label_a") = "A", py::arg("label_b") = "B", py::arg("label_p") = "P",
        py::arg("label_q") = "Q");
  m.def("dump_support",
        [](const ensemble::Support& support) { return ensemble::dump_support(support); },
        py::arg("support"));

  // --- experiments
  py::class_<experiments::BohmEprSetup>(m, "BohmEprSetup")
      .def_readonly("psi", &experiments::BohmEprSetup::psi)
      .def_readonly("A", &experiments::BohmEprSetup::A)
      .def_readonly("B", &experiments::BohmEprSetup::B)
      .def_readonly("P", &experiments::BohmEprSetup::P)
      .def_readonly("Q", &experiments::BohmEprSetup::Q)
      .def_readonly("rule_ap", &experiments::BohmEprSetup::rule_ap)
      .def_readonly("rule_bq", &experiments::BohmEprSetup::rule_bq);

  py::class_<experiments::IdealSetup>(m, "IdealSetup")
      .def_readonly("psi", &experiments::IdealSetup::psi)
      .def_readonly("E", &experiments::IdealSetup::E)
      .def_readonly("G", &experiments::IdealSetup::G)
      .def_readonly("T", &experiments::IdealSetup::T)
      .def_readonly("Y", &experiments::IdealSetup::Y)
      .def_readonly("rule_et", &experiments::IdealSetup::rule_et)
      .def_readonly("rule_gy", &experiments::IdealSetup::rule_gy)
      .def("embedded_a_II", &experiments::IdealSetup::embedded_a_II, py::arg("j"));

  m.def("build_singlet_xz", &experiments::build_singlet_xz, py::arg("theta_a") = 0.0,
        py::arg("theta_b") = std::numbers::pi / 2.0, py::arg("tol") = linalg::kDefaultTol);
  m.def("build_ideal", &experiments::build_ideal);
  m.def("inference_table", [](const experiments::IdealSetup& setup) {
    py::list rows;
    for (const auto& row : experiments::inference_table(setup))
      rows.append(py::make_tuple(row.t, row.y, row.e, row.g));
    return rows;
  });

  py::class_<experiments::EprResult>(m, "EprResult")
      .def_readonly("support", &experiments::EprResult::support)
      .def_property_readonly("report", [](const experiments::EprResult& self) {
        return json_to_py(self.report.to_json());
      });
  py::class_<experiments::IdealResult>(m, "IdealResult")
      .def_readonly("support", &experiments::IdealResult::support)
      .def_property_readonly("report", [](const experiments::IdealResult& self) {
        return json_to_py(self.report.to_json());
      });

  m.def(
      "run_epr_analysis",
      [](std::size_t n, std::uint64_t seed, const std::string& extension,
         const std::string& policy, double theta_a, double theta_b) {
        return experiments::run_epr_analysis(n, seed,
                                             experiments::extension_from_string(extension),
                                             cli::parse_policy(policy), theta_a, theta_b);
      },
      py::arg("n"), py::arg("seed"), py::arg("extension") = "strict",
      py::arg("policy") = "A,Q:0.5;P,B:0.5", py::arg("theta_a") = 0.0,
      py::arg("theta_b") = std::numbers::pi / 2.0);
  m.def(
      "run_ideal_analysis",
      [](std::size_t n, std::uint64_t seed, const std::string& extension) {
        return experiments::run_ideal_analysis(n, seed,
                                               experiments::extension_from_string(extension));
      },
      py::arg("n"), py::arg("seed"), py::arg("extension") = "strict");

  // --- histories
  py::class_<histories::DensityOperator>(m, "DensityOperator")
      .def(py::init<CMatrix, double>(), py::arg("op"), py::arg("tol") = linalg::kDefaultTol)
      .def_static("pure", &histories::DensityOperator::pure, py::arg("psi"))
      .def_readonly("op", &histories::DensityOperator::op);

  py::class_<histories::History>(m, "History")
      .def(py::init([](const std::vector<std::pair<int, CMatrix>>& events, double tol) {
             std::vector<histories::Event> converted;
             converted.reserve(events.size());
             for (const auto& [time, projector] : events)
               converted.push_back(histories::Event{time, projector});
             return histories::History(std::move(converted), tol);
           }),
           py::arg("events"), py::arg("tol") = linalg::kDefaultTol)
      .def("times", [](const histories::History& self) {
        std::vector<int> times;
        for (const auto& event : self.events()) times.push_back(event.time);
        return times;
      });

  py::class_<histories::HistoryFamily>(m, "HistoryFamily")
      .def_property_readonly("times", &histories::HistoryFamily::times)
      .def_property_readonly("elementary_count", &histories::HistoryFamily::elementary_count)
      .def("elementary", &histories::HistoryFamily::elementary, py::arg("index"))
      .def("elementary_label", &histories::HistoryFamily::elementary_label, py::arg("index"));

  py::class_<histories::FamilySupport>(m, "FamilySupport")
      .def_readonly("member_ids", &histories::FamilySupport::member_ids)
      .def_readonly("occurrence", &histories::FamilySupport::occurrence)
      .def("occurs_set",
           [](const histories::FamilySupport& self, const histories::History& h) {
             return self.occurs_set(h);
           },
           py::arg("h"));

  m.def("chain_operator", &histories::chain_operator, py::arg("h"));
  m.def("decoherence_functional", &histories::decoherence_functional, py::arg("h1"),
        py::arg("h2"), py::arg("rho"));
  m.def("history_probability", &histories::history_probability, py::arg("h"), py::arg("rho"),
        py::arg("tol") = linalg::kDefaultTol);
  m.def("minimal_family", &histories::minimal_family, py::arg("h"),
        py::arg("tol") = linalg::kDefaultTol);
  m.def("is_consistent", &histories::is_consistent, py::arg("family"), py::arg("rho"),
        py::arg("tol") = linalg::kDefaultTol);
  m.def("is_refinement", &histories::is_refinement, py::arg("coarse"), py::arg("fine"),
        py::arg("tol") = linalg::kDefaultTol);
  m.def("are_compatible", &histories::are_compatible, py::arg("f1"), py::arg("f2"),
        py::arg("rho"), py::arg("tol") = linalg::kDefaultTol);
  m.def("bind_support", &histories::bind_support, py::arg("family"), py::arg("support"),
        py::arg("rho"), py::arg("tol") = linalg::kDefaultTol);
  m.def("family_to_json", [](const histories::HistoryFamily& family,
                             const histories::DensityOperator& rho, double tol) {
          return json_to_py(histories::family_to_json(family, rho, tol));
        },
        py::arg("family"), py::arg("rho"), py::arg("tol") = linalg::kDefaultTol);

  py::class_<histories::ContradictionResult>(m, "ContradictionResult")
      .def_readonly("support", &histories::ContradictionResult::support)
      .def_property_readonly("report", [](const histories::ContradictionResult& self) {
        return json_to_py(self.report.to_json());
      });
  m.def("contradiction_demo", &histories::contradiction_demo, py::arg("n"), py::arg("seed"));

  // --- certificates
  m.def(
      "verify_certificates",
      [](double tol) {
        py::list out;
        for (const auto& cert : cli::verify_certificates(tol)) {
          py::dict entry;
          entry["name"] = cert.name;
          entry["passed"] = cert.passed;
          entry["value"] = cert.value;
          entry["threshold"] = cert.threshold;
          entry["relation"] = cert.relation;
          out.append(entry);
        }
        return out;
      },
      py::arg("tol") = 1e-10);
}
