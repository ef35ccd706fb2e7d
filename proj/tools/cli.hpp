// Copyright 2026 The fhsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Run configuration and the command-line front end.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fhsim/circuits.hpp"
#include "fhsim/hamiltonian.hpp"
#include "fhsim/io.hpp"
#include "fhsim/measure.hpp"
#include "fhsim/optimize.hpp"

namespace fhsim::cli {

inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

struct InitialConfig {
  InitialKind kind = InitialKind::kNeel;
  double u = 32.0;
};

struct HyvaConfig {
  std::string mode = "fully-variational";
  int depth = 3;
  double ramp_time_2 = 10.0;
  double ramp_time_3 = 10.0;
  double dt = kDefaultScheduleDt;
  // Doped stripes when wavelength > 0; empty columns default to the
  // symmetric placement.
  int wavelength = 0;
  std::vector<int> empty_columns;
  bool links_variational = true;
  int link_depth = 2;
  double link_ramp_1 = 5.0;
  double link_ramp_2 = 5.0;
  // Re-optimize every variational stage instead of loading cached parameters.
  bool optimize = false;
  std::map<std::string, std::vector<double>> params;
  bool save_state = false;
};

struct QiteRunConfig {
  double dtau = 0.1;
  int steps = 20;
  double dephase_time = 0.0;
  InitialConfig initial{InitialKind::kPlaquetteProduct, 32.0};
  double drop_ratio = 1e-10;
  double max_overlap = 0.999;
  bool complete = true;
};

struct TrotterConfig {
  double t_trotter = 10.0;
  double dt = 0.05;
};

struct MeasureConfig {
  std::vector<std::string> observables{"Ht", "Ht2", "ReHtHU", "ImHtHU", "HU", "HU2", "Hn"};
  InitialConfig initial{InitialKind::kNeel, 32.0};
};

struct RunConfig {
  int rows = 2;
  int cols = 4;
  std::optional<SpinSector> sector;
  double t = 1.0;
  double u = 8.0;
  double tp = 0.0;
  double v = 0.0;
  std::string mu_kind = "zero";
  double mu_value = 0.0;
  std::string protocol;
  std::uint64_t seed = 1;
  std::string output = "run";
  int threads = 0;
  bool shot_mode = false;
  ShotConfig shots;
  OptimizerConfig optimizer;
  HyvaConfig hyva;
  QiteRunConfig qite;
  TrotterConfig trotter;
  MeasureConfig measure;
};

// YAML, or JSON as the same schema. Unknown keys and bad values raise
// ConfigError carrying the source line.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
Json to_json(const RunConfig& c);

LatticeGeometry geometry(const RunConfig& c);
// FH target with t', V and the chemical-potential pattern.
HamiltonianSpec target_spec(const RunConfig& c);

// Executes the configured protocol and writes the run directory.
void execute(const RunConfig& c);

// Entry point; returns the process exit code.
int main(int argc, char** argv);

}  // namespace fhsim::cli
