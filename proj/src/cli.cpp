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

#include "realitylab/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "realitylab/ensemble.hpp"
#include "realitylab/histories.hpp"
#include "realitylab/linalg.hpp"
#include "realitylab/quantum.hpp"

namespace realitylab::cli {

using experiments::Extension;
using linalg::apply;
using linalg::CMatrix;
using linalg::commutator_norm;
using linalg::frobenius_norm;
using linalg::inner;
using linalg::matmul;
using quantum::Observable;

experiments::EprPolicy parse_policy(const std::string& text) {
  experiments::EprPolicy policy;
  std::stringstream groups(text);
  std::string group;
  while (std::getline(groups, group, ';')) {
    if (group.empty()) continue;
    const auto colon = group.rfind(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("policy group '" + group + "' is missing ':fraction'");
    std::vector<std::string> labels;
    const std::string labels_text = group.substr(0, colon);
    std::size_t start = 0;
    while (start <= labels_text.size()) {
      const auto comma = labels_text.find(',', start);
      const std::string label = labels_text.substr(
          start, comma == std::string::npos ? std::string::npos : comma - start);
      if (label.empty())
        throw std::invalid_argument("policy group '" + group + "' contains an empty label");
      labels.push_back(label);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    double fraction = 0.0;
    try {
      std::size_t used = 0;
      fraction = std::stod(group.substr(colon + 1), &used);
      if (used != group.size() - colon - 1) throw std::invalid_argument("");
    } catch (const std::exception&) {
      throw std::invalid_argument("policy group '" + group + "' has a malformed fraction");
    }
    policy.groups.emplace_back(std::move(labels), fraction);
  }
  if (policy.groups.empty()) throw std::invalid_argument("policy names no measurement groups");
  return policy;
}

namespace {

/// Sum of the same-outcome joint probabilities for two observables that
/// should be perfectly anti-correlated.
double agreement_probability(const Observable& a, const Observable& b,
                             const quantum::StateVector& psi) {
  double total = 0.0;
  for (const int outcome : a.spectrum()) {
    const auto joint = apply(a.spectral_projector(outcome),
                             apply(b.spectral_projector(outcome), psi.vec()));
    total += inner(psi.vec(), joint).real();
  }
  return total;
}

double projector_residual(const CMatrix& m) {
  return std::max(frobenius_norm(matmul(m, m) - m), frobenius_norm(linalg::adjoint(m) - m));
}

}  // namespace

std::vector<Certificate> verify_certificates(double tol) {
  std::vector<Certificate> certs;
  auto check_le = [&](std::string name, double value, double threshold) {
    certs.push_back(Certificate{std::move(name), value <= threshold, value, threshold, "<="});
  };
  auto check_gt = [&](std::string name, double value, double threshold) {
    certs.push_back(Certificate{std::move(name), value > threshold, value, threshold, ">"});
  };

  const experiments::IdealSetup ideal = experiments::build_ideal();
  const auto& psi = ideal.psi;
  check_le("ideal_state_normalized", std::abs(linalg::norm(psi.vec()) - 1.0), tol);
  check_le("ET_vector_identity",
           linalg::norm(apply(ideal.E.op(), psi.vec()) - apply(ideal.T.op(), psi.vec())), tol);
  check_le("GY_vector_identity",
           linalg::norm(apply(ideal.G.op(), psi.vec()) - apply(ideal.Y.op(), psi.vec())), tol);
  check_le("conditional_E_given_T",
           std::abs(quantum::conditional_probability(ideal.E, ideal.T, psi) - 1.0), tol);
  check_le("conditional_T_given_E",
           std::abs(quantum::conditional_probability(ideal.T, ideal.E, psi) - 1.0), tol);
  check_le("conditional_G_given_Y",
           std::abs(quantum::conditional_probability(ideal.G, ideal.Y, psi) - 1.0), tol);
  check_le("conditional_Y_given_G",
           std::abs(quantum::conditional_probability(ideal.Y, ideal.G, psi) - 1.0), tol);
  check_le("TY_commute", commutator_norm(ideal.T.op(), ideal.Y.op()), tol);
  check_gt("EG_noncommute", commutator_norm(ideal.E.op(), ideal.G.op()), 0.1);

  check_le("projector_E", projector_residual(ideal.E.op()), tol);
  check_le("projector_G", projector_residual(ideal.G.op()), tol);
  check_le("projector_T", projector_residual(ideal.T.op()), tol);
  check_le("projector_Y", projector_residual(ideal.Y.op()), tol);
  for (std::size_t i = 0; i < ideal.a_I.size(); ++i)
    check_le("projector_A_I^" + std::to_string(i + 1), projector_residual(ideal.a_I[i]), tol);
  for (std::size_t j = 0; j < ideal.a_II.size(); ++j)
    check_le("projector_A_II^" + std::to_string(j + 1), projector_residual(ideal.a_II[j]), tol);
  for (std::size_t i = 0; i < ideal.b_I.size(); ++i)
    check_le("projector_B_I^" + std::to_string(i + 1), projector_residual(ideal.b_I[i]), tol);

  const experiments::BohmEprSetup epr = experiments::build_singlet_xz();
  check_le("singlet_state_normalized", std::abs(linalg::norm(epr.psi.vec()) - 1.0), tol);
  check_le("singlet_anticorrelation_AP", agreement_probability(epr.A, epr.P, epr.psi), tol);
  check_le("singlet_anticorrelation_BQ", agreement_probability(epr.B, epr.Q, epr.psi), tol);

  return certs;
}

namespace {

std::string format_text(const std::vector<Certificate>& certs) {
  std::ostringstream out;
  for (const auto& cert : certs) {
    out << (cert.passed ? "PASS" : "FAIL") << "  " << cert.name << "  value="
        << cert.value << " (" << cert.relation << " " << cert.threshold << ")\n";
  }
  std::size_t passed = 0;
  for (const auto& cert : certs) passed += cert.passed ? 1 : 0;
  out << passed << "/" << certs.size() << " certificates passed\n";
  return out.str();
}

nlohmann::json certs_to_json(const std::vector<Certificate>& certs) {
  nlohmann::json array = nlohmann::json::array();
  for (const auto& cert : certs)
    array.push_back({{"name", cert.name},
                     {"passed", cert.passed},
                     {"value", cert.value},
                     {"threshold", cert.threshold},
                     {"relation", cert.relation}});
  return array;
}

std::string certs_to_csv(const std::vector<Certificate>& certs) {
  std::ostringstream out;
  out << "name,passed,value,threshold,relation\n";
  for (const auto& cert : certs)
    out << cert.name << "," << (cert.passed ? 1 : 0) << "," << cert.value << ","
        << cert.threshold << "," << cert.relation << "\n";
  return out.str();
}

std::string support_to_csv(const ensemble::Support& support) {
  std::set<std::string> labels;
  for (const auto& [label, observable] : support.registry) {
    (void)observable;
    labels.insert(label);
  }
  for (const auto& x : support.specimens)
    for (const auto& [label, value] : x.objective) {
      (void)value;
      labels.insert(label);
    }

  std::ostringstream out;
  out << "id";
  for (const auto& label : labels) out << ",measured_" << label;
  for (const auto& label : labels) out << ",objective_" << label << ",via_" << label;
  out << "\n";
  for (const auto& x : support.specimens) {
    out << x.id;
    for (const auto& label : labels) {
      out << ",";
      if (auto it = x.measured.find(label); it != x.measured.end()) out << it->second;
    }
    for (const auto& label : labels) {
      if (auto it = x.objective.find(label); it != x.objective.end())
        out << "," << it->second.value << "," << it->second.via;
      else
        out << ",,";
    }
    out << "\n";
  }
  return out.str();
}

void write_output(const RunConfig& cfg, const std::string& payload) {
  if (cfg.out) {
    std::ofstream file(*cfg.out, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot write output file '" + *cfg.out + "'");
    file << payload;
    if (!file.good()) throw std::invalid_argument("write to '" + *cfg.out + "' failed");
  } else {
    std::cout << payload;
  }
}

void maybe_dump_support(const RunConfig& cfg, const ensemble::Support& support) {
  if (!cfg.dump_support_path) return;
  std::ofstream file(*cfg.dump_support_path, std::ios::binary);
  if (!file)
    throw std::invalid_argument("cannot write support dump '" + *cfg.dump_support_path + "'");
  ensemble::dump_support(support, file);
}

int cmd_verify(const RunConfig& cfg) {
  const auto certs = verify_certificates(cfg.tol);
  std::string payload;
  switch (cfg.format) {
    case Format::Text: payload = format_text(certs); break;
    case Format::Json: payload = certs_to_json(certs).dump(2) + "\n"; break;
    case Format::Csv: payload = certs_to_csv(certs); break;
  }
  write_output(cfg, payload);
  for (const auto& cert : certs)
    if (!cert.passed) return kExitCheckFailure;
  return kExitOk;
}

int cmd_epr(const RunConfig& cfg) {
  const auto policy = parse_policy(cfg.policy);
  auto result =
      experiments::run_epr_analysis(cfg.n, cfg.seed, cfg.extension, policy, cfg.theta_a,
                                    cfg.theta_b);
  std::string payload;
  switch (cfg.format) {
    case Format::Text: payload = result.report.to_text(); break;
    case Format::Json: payload = result.report.to_json().dump(2) + "\n"; break;
    case Format::Csv: payload = support_to_csv(result.support); break;
  }
  write_output(cfg, payload);
  maybe_dump_support(cfg, result.support);

  const bool expected_verdict =
      cfg.extension == Extension::Strict
          ? result.report.simultaneous_set_size == 0
          : result.report.simultaneous_set_size == result.report.n;
  const bool ok = result.report.xy_identity_holds &&
                  result.report.anticorrelation_conformance && expected_verdict;
  return ok ? kExitOk : kExitCheckFailure;
}

int cmd_ideal(const RunConfig& cfg) {
  auto result = experiments::run_ideal_analysis(cfg.n, cfg.seed, cfg.extension);
  std::string payload;
  switch (cfg.format) {
    case Format::Text: payload = result.report.to_text(); break;
    case Format::Json: payload = result.report.to_json().dump(2) + "\n"; break;
    case Format::Csv: payload = support_to_csv(result.support); break;
  }
  write_output(cfg, payload);
  maybe_dump_support(cfg, result.support);

  const bool ok = result.report.table_conformance &&
                  result.report.simultaneous_set_size == result.report.n;
  return ok ? kExitOk : kExitCheckFailure;
}

int cmd_histories(const RunConfig& cfg) {
  auto result = histories::contradiction_demo(cfg.n, cfg.seed);
  std::string payload;
  switch (cfg.format) {
    case Format::Text: payload = result.report.to_text(); break;
    case Format::Json: payload = result.report.to_json().dump(2) + "\n"; break;
    case Format::Csv: payload = support_to_csv(result.support); break;
  }
  write_output(cfg, payload);
  maybe_dump_support(cfg, result.support);

  if (cfg.dump_family_path) {
    const experiments::IdealSetup setup = experiments::build_ideal();
    const auto rho = histories::DensityOperator::pure(setup.psi);
    const auto family_e = histories::minimal_family(
        histories::History({{1, setup.E.op()}, {2, setup.T.op()}}));
    const auto family_g = histories::minimal_family(
        histories::History({{1, setup.G.op()}, {2, setup.Y.op()}}));
    nlohmann::json dump = nlohmann::json::array();
    dump.push_back(histories::family_to_json(family_e, rho, cfg.tol));
    dump.push_back(histories::family_to_json(family_g, rho, cfg.tol));
    std::ofstream file(*cfg.dump_family_path, std::ios::binary);
    if (!file)
      throw std::invalid_argument("cannot write family dump '" + *cfg.dump_family_path + "'");
    file << dump.dump(2) << "\n";
  }

  const bool ok = result.report.family_e_consistent && result.report.family_g_consistent &&
                  !result.report.compatible && result.report.objectification_holds &&
                  (result.report.witness_count == 0 || result.report.exclusivity_violated);
  return ok ? kExitOk : kExitCheckFailure;
}

}  // namespace

int run(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Verify: return cmd_verify(cfg);
    case Command::Epr: return cmd_epr(cfg);
    case Command::Ideal: return cmd_ideal(cfg);
    case Command::Histories: return cmd_histories(cfg);
  }
  return kExitUsage;
}

int main_entry(int argc, const char* const* argv) {
  RunConfig cfg;

  CLI::App app{"realitylab: correlation-extension experiments on entangled spin systems"};
  app.require_subcommand(1);

  const std::map<std::string, Format> format_map{
      {"text", Format::Text}, {"json", Format::Json}, {"csv", Format::Csv}};
  const std::map<std::string, Extension> extension_map{{"strict", Extension::Strict},
                                                       {"wide", Extension::Wide}};

  auto add_output_options = [&](CLI::App* cmd) {
    cmd->add_option("--format", cfg.format, "output format")
        ->transform(CLI::CheckedTransformer(format_map, CLI::ignore_case));
    cmd->add_option("--out", cfg.out, "write the report to this path instead of stdout");
    cmd->add_option("--tol", cfg.tol, "tolerance for algebraic identity checks");
  };
  auto add_ensemble_options = [&](CLI::App* cmd) {
    cmd->add_option("--n", cfg.n, "number of specimens")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", cfg.seed, "ensemble seed");
    cmd->add_option("--dump-support", cfg.dump_support_path,
                    "write the specimen records as newline-delimited JSON to this path");
  };

  CLI::App* verify = app.add_subcommand("verify", "recheck every certified operator identity");
  add_output_options(verify);

  CLI::App* epr = app.add_subcommand("epr", "run the singlet ensemble analysis");
  add_output_options(epr);
  add_ensemble_options(epr);
  epr->add_option("--extension", cfg.extension, "correlation-extension rule")
      ->transform(CLI::CheckedTransformer(extension_map, CLI::ignore_case));
  epr->add_option("--policy", cfg.policy,
                  "measurement groups with fractions, e.g. \"A,Q:0.5;P,B:0.5\"");
  epr->add_option("--theta-a", cfg.theta_a, "polar angle of the first direction (radians)");
  epr->add_option("--theta-b", cfg.theta_b, "polar angle of the second direction (radians)");

  CLI::App* ideal = app.add_subcommand("ideal", "run the two-particle inference analysis");
  add_output_options(ideal);
  add_ensemble_options(ideal);
  ideal->add_option("--extension", cfg.extension, "correlation-extension rule")
      ->transform(CLI::CheckedTransformer(extension_map, CLI::ignore_case));

  CLI::App* hist = app.add_subcommand("histories", "run the family-compatibility analysis");
  add_output_options(hist);
  add_ensemble_options(hist);
  hist->add_option("--dump-family", cfg.dump_family_path,
                   "write the two minimal families as JSON to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (verify->parsed()) cfg.command = Command::Verify;
  if (epr->parsed()) cfg.command = Command::Epr;
  if (ideal->parsed()) cfg.command = Command::Ideal;
  if (hist->parsed()) cfg.command = Command::Histories;

  if (const char* env_seed = std::getenv("REALITYLAB_SEED")) {
    try {
      std::size_t used = 0;
      const std::string text(env_seed);
      cfg.seed = std::stoull(text, &used);
      if (used != text.size()) throw std::invalid_argument("");
    } catch (const std::exception&) {
      std::cerr << "error: REALITYLAB_SEED is not an integer\n";
      return kExitUsage;
    }
  }

  try {
    return run(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
}

}  // namespace realitylab::cli
