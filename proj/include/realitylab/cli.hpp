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
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "realitylab/experiments.hpp"

namespace realitylab::cli {

enum class Command { Verify, Epr, Ideal, Histories };
enum class Format { Text, Json, Csv };

/// Exit codes: 0 ok, 1 check failure, 2 usage error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailure = 1;
inline constexpr int kExitUsage = 2;

struct RunConfig {
  Command command = Command::Verify;
  std::size_t n = 100000;
  std::uint64_t seed = 42;
  experiments::Extension extension = experiments::Extension::Strict;
  double tol = 1e-10;
  Format format = Format::Text;
  std::string policy = "A,Q:0.5;P,B:0.5";
  std::optional<std::string> out;
  double theta_a = 0.0;
  double theta_b = std::numbers::pi / 2.0;
  std::optional<std::string> dump_support_path;
  std::optional<std::string> dump_family_path;
};

/// Parses "A,Q:0.5;P,B:0.5" into measurement groups. Throws
/// std::invalid_argument on malformed input.
experiments::EprPolicy parse_policy(const std::string& text);

struct Certificate {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=" or ">"
};

/// Recomputes every certified identity of the two experimental setups at
/// the given tolerance: normalizations, the vector identities E psi = T psi
/// and G psi = Y psi, the unit conditional probabilities, the commutation
/// facts, the singlet anti-correlations, and all projector certificates.
std::vector<Certificate> verify_certificates(double tol = 1e-10);

/// Runs the configured command, writing the report to cfg.out or stdout.
int run(const RunConfig& cfg);

/// Full command-line entry point (argument parsing plus run()).
int main_entry(int argc, const char* const* argv);

}  // namespace realitylab::cli
