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

// Variational quench circuits and the multi-stage preparation programs built
// from them.

#include <functional>
#include <string>
#include <vector>

#include "fhsim/evolve.hpp"
#include "fhsim/fock.hpp"
#include "fhsim/hamiltonian.hpp"

namespace fhsim {

// One quench exp(-i T (F + sum_c p_c G_c)). With variable_time the first
// parameter is T (its magnitude is used) and the remaining ones are the
// couplings p_c; otherwise T = fixed_time and every parameter is a coupling,
// so with fixed_time = 1 the parameters are the products theta = T lambda.
struct CircuitLayer {
  std::string label;
  HamiltonianSpec frozen;
  std::vector<HamiltonianSpec> generators;
  std::vector<std::string> coordinate_names;
  bool variable_time = false;
  double fixed_time = 1.0;
  // Largest coupling magnitude per generator, used to convert theta
  // coordinates into a physical quench time.
  std::vector<double> max_coupling;

  int num_params() const { return static_cast<int>(generators.size()) + (variable_time ? 1 : 0); }
  HamiltonianSpec spec(const double* p) const;
  double duration(const double* p) const;
  double physical_time(const double* p) const;
};

struct VariationalCircuit {
  std::vector<CircuitLayer> layers;
  int num_params() const;
  double physical_time(const std::vector<double>& params) const;
  // Per-layer cumulative physical times.
  std::vector<double> layer_times(const std::vector<double>& params) const;
};

StateVector apply_circuit(const StateVector& state, const VariationalCircuit& circuit,
                          const std::vector<double>& params, const KrylovOptions& opt = {});

// Stage 1: per layer (Tt, TU, Tmu) on the dimer bonds with the staggered field.
VariationalCircuit dimer_circuit(const LatticeGeometry& g, const std::vector<Bond>& dimers, int depth);
// Stage 2: per layer (T, t_tilde) with dimer hops t = 1 and U fixed.
VariationalCircuit plaquette_circuit(const LatticeGeometry& g, const std::vector<Bond>& dimers,
                                     const std::vector<Bond>& rungs, int depth, double u = 8.0);
// Stage 3: per layer (T, t_tilde) with intra-plaquette hops t = 1 and U fixed.
VariationalCircuit fusion_circuit(const LatticeGeometry& g, int depth, double u = 8.0);
// Doped linking: per layer (T, t_tilde, Delta) with the empty-site field.
VariationalCircuit doped_link_circuit(const LatticeGeometry& g, const std::vector<Bond>& links,
                                      const std::vector<int>& empty_sites, int depth, double u = 8.0);

inline constexpr double kMaxTunneling = 1.0;
inline constexpr double kMaxInteraction = 8.0;

// ---------------------------------------------------------------------------
// Initial states

enum class InitialKind { kNeel, kDopedStripe, kPlaquetteProduct };

struct InitialRecipe {
  InitialKind kind = InitialKind::kNeel;
  double u = 32.0;                  // plaquette-product interaction
  std::vector<int> empty_columns;   // doped stripe
};

std::string to_string(InitialKind k);
InitialKind initial_kind_from_string(const std::string& s);

// Up spins on sites with even x + y, down spins on the others, skipping the
// empty columns.
std::pair<Word, Word> neel_words(const LatticeGeometry& g, const std::vector<int>& empty_columns = {});

// Product of local states on disjoint site blocks, embedded with the
// fermionic sign of reordering the block creators into global mode order.
struct Tile {
  std::vector<int> sites;  // global site of local site k
  StateVector state;
};
StateVector tile_product(BasisPtr basis, const std::vector<Tile>& tiles);

StateVector initial_state(const InitialRecipe& recipe, BasisPtr basis);

// Sector implied by a recipe: half filling minus the emptied rungs.
SpinSector recipe_sector(const InitialRecipe& recipe, const LatticeGeometry& g);

// ---------------------------------------------------------------------------
// Programs

struct ProgramStage {
  std::string name;
  bool adiabatic = false;
  VariationalCircuit circuit;
  std::vector<double> params;
  Schedule schedule;
  double dt = kDefaultScheduleDt;

  double physical_time() const;
};

struct ProtocolProgram {
  LatticeGeometry geometry;
  SpinSector sector;
  InitialRecipe initial;
  std::vector<ProgramStage> stages;
  double physical_time() const;
};

StateVector run_stage(const StateVector& state, const ProgramStage& stage, const KrylovOptions& opt = {});

using StageCallback = std::function<void(std::size_t stage_index, const StateVector& state)>;
StateVector run_program(const ProtocolProgram& program, BasisPtr basis, const StageCallback& cb = {},
                        const KrylovOptions& opt = {});

enum class HyvaMode { kFullyVariational, kHyva12, kHyva23 };
std::string to_string(HyvaMode m);
HyvaMode hyva_mode_from_string(const std::string& s);

struct HyvaParameters {
  HyvaMode mode = HyvaMode::kFullyVariational;
  double u = 8.0;
  std::vector<double> dimer;      // stage 1, 3 per layer
  std::vector<double> plaquette;  // stage 2, 2 per layer
  std::vector<double> fusion;     // stage 3, 2 per layer
  double ramp_time_2 = 10.0;      // hyva-1->2
  double ramp_time_3 = 10.0;      // hyva-1->2 and hyva-2->3
  double dt = kDefaultScheduleDt;
};

// Half-filled 2 x L ladder, L even.
ProtocolProgram build_hyva_program(const LatticeGeometry& g, const HyvaParameters& p);

// Doped stripe ladder: edge rung dimers and central plaquettes prepared by the
// pre-compiled circuits, then linked variationally or by the two-step ramp.
struct DopedLayout {
  std::vector<int> empty_columns;
  std::vector<int> empty_sites;
  std::vector<Bond> dimers;   // stage-1 bonds
  std::vector<Bond> rungs;    // stage-2 plaquette rungs
  std::vector<Bond> links;    // bonds touching an empty site
};
DopedLayout doped_layout(const LatticeGeometry& g, const std::vector<int>& empty_columns);

// Symmetric stripe placement with wavelength lambda on a 2 x L ladder.
std::vector<int> stripe_empty_columns(int cols, int wavelength);

struct DopedParameters {
  bool variational = true;
  double u = 8.0;
  std::vector<double> dimer;
  std::vector<double> plaquette;
  std::vector<double> links;  // 3 per layer
  double ramp_time_1 = 5.0;   // t_tilde 0 -> t at fixed Delta = 1
  double ramp_time_2 = 5.0;   // Delta 1 -> 0
  double dt = kDefaultScheduleDt;
};

ProtocolProgram build_doped_program(const LatticeGeometry& g, const std::vector<int>& empty_columns,
                                    const DopedParameters& p);

// Adiabatic reference from the staggered field to uncoupled dimers: the first
// fifth ramps t and U from zero at mu = mu0, the rest lowers mu to zero.
Schedule dimer_adiabatic_schedule(const LatticeGeometry& g, const std::vector<Bond>& dimers, double total_time,
                                  double u = 8.0, double mu0 = kDefaultMu0);

}  // namespace fhsim
