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

// JSON encodings of Hamiltonians, pulse lists and preparation programs, and a
// binary state checkpoint format.

#include <string>

#include "fhsim/circuits.hpp"
#include "fhsim/evolve.hpp"
#include "fhsim/hamiltonian.hpp"
#include "json.hpp"

namespace fhsim {

using Json = nlohmann::json;

// Decoders throw ConfigError on missing or mistyped fields.
Json to_json(const HamiltonianSpec& h);
HamiltonianSpec spec_from_json(const Json& j);

Json to_json(const CompiledSequence& seq);
CompiledSequence sequence_from_json(const Json& j);

Json to_json(const ProtocolProgram& p);
ProtocolProgram program_from_json(const Json& j);

Json read_json_file(const std::string& path);
void write_json_file(const Json& j, const std::string& path);

// Header: magic "FHSV", format version, rows, cols, n_up, n_down, dimension;
// then the amplitudes as little-endian (re, im) doubles.
void write_state(const StateVector& s, const std::string& path);
StateVector read_state(const std::string& path);

// Cached optimal parameters of one pre-compiled stage.
struct Precompiled {
  std::string stage;  // "dimer", "plaquette", "fusion", "links"
  int rows = 0;
  int cols = 0;
  double u = 8.0;
  int depth = 0;
  std::vector<double> params;
  double infidelity = 0.0;
  double residual = 0.0;
};

Json to_json(const Precompiled& p);
Precompiled precompiled_from_json(const Json& j);

// $FHSIM_DATA_DIR if set, else the source tree's data directory.
std::string data_dir();
// data_dir()/precompiled/<stage>_<rows>x<cols>_u<U>_d<depth>.json
std::string precompiled_path(const std::string& stage, int rows, int cols, double u, int depth);
Precompiled load_precompiled(const std::string& stage, int rows, int cols, double u, int depth);

}  // namespace fhsim
