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

// Real- and imaginary-time propagation, coupling schedules, and the
// compilation of fSWAP and next-nearest-neighbour evolutions into native
// quenches.

#include <string>
#include <vector>

#include "fhsim/fock.hpp"
#include "fhsim/hamiltonian.hpp"
#include "fhsim/lattice.hpp"
#include "fhsim/operator.hpp"

namespace fhsim {

struct KrylovOptions {
  double tol = 1e-9;
  int max_dim = 40;
};

struct KrylovStats {
  int substeps = 0;
  int matvecs = 0;
};

// exp(-i H T) applied in place.
KrylovStats propagate_real_inplace(StateVector& state, const Operator& h, double T, const KrylovOptions& opt = {});
StateVector propagate_real(const StateVector& state, const HamiltonianSpec& spec, double T,
                           const KrylovOptions& opt = {});

struct ImagStep {
  StateVector state;  // normalized
  double decay = 1.0;      // || exp(-dtau H) |state> ||
  double log_decay = 0.0;  // log of decay, finite when decay over/underflows
};

// Normalized exp(-dtau H)|state>, for a normalized input.
ImagStep propagate_imag(const StateVector& state, const Operator& h, double dtau, const KrylovOptions& opt = {});
ImagStep propagate_imag(const StateVector& state, const HamiltonianSpec& spec, double dtau,
                        const KrylovOptions& opt = {});

struct Segment {
  double duration = 0.0;
  HamiltonianSpec start;
  HamiltonianSpec end;
};

// Piecewise-linear interpolation between coupling sets.
struct Schedule {
  std::vector<Segment> segments;
  double total_time() const;
  HamiltonianSpec at(double time) const;
  // Throws ParameterError on non-positive durations or coupling jumps.
  void validate() const;
};

inline constexpr double kDefaultScheduleDt = 0.01;

// Couplings are frozen at their midpoint value over micro-steps of length <= dt.
StateVector run_schedule(const StateVector& state, const Schedule& schedule, double dt = kDefaultScheduleDt,
                         const KrylovOptions& opt = {});

// True when both specs describe the same operator (tunnelings compared after
// merging duplicate bonds).
bool same_couplings(const HamiltonianSpec& a, const HamiltonianSpec& b, double tol = 1e-12);

enum class PulseKind { kQuench, kFswap };

struct Pulse {
  std::string label;
  HamiltonianSpec spec;
  double duration = 0.0;
  PulseKind kind = PulseKind::kQuench;
  std::vector<Bond> swap_bonds;  // kFswap only
};

struct CompiledSequence {
  std::vector<Pulse> pulses;
  double physical_time() const;
  void append(const CompiledSequence& other);
};

struct SequenceOptions {
  KrylovOptions krylov;
  // fSWAP pulses are exactly the fermionic swap; apply them as the
  // equivalent basis permutation instead of integrating the quench.
  bool closed_form_fswap = true;
};

StateVector apply_sequence(const StateVector& state, const CompiledSequence& seq, const SequenceOptions& opt = {});

// Exact fermionic swap of the full local states of the bonds' sites.
StateVector apply_fswap_exact(const StateVector& state, const std::vector<Bond>& bonds);

// One H_fS pulse of length pi/(2t) on a set of site-disjoint NN bonds.
CompiledSequence compile_fswap(const LatticeGeometry& g, const std::vector<Bond>& bonds, double t = 1.0);
inline CompiledSequence compile_fswap(const LatticeGeometry& g, Bond b, double t = 1.0) {
  return compile_fswap(g, std::vector<Bond>{b}, t);
}

enum class NnnOrientation { kDiag1, kDiag2, kBoth };

// exp(-i H_t' T') for the NNN bonds of the chosen orientation, realized per
// commuting plaquette class as fSWAP, NN quench with tT = t'T', fSWAP. For a
// single orientation the result is exact; kBoth on more than one plaquette
// is a first-order product over plaquette classes.
CompiledSequence compile_nnn_step(const LatticeGeometry& g, double tp, double Tp,
                                  NnnOrientation orientation = NnnOrientation::kBoth);

struct TrotterResult {
  StateVector state;
  double nominal_physical_time = 0.0;  // 2 T_trotter
  double pulse_time = 0.0;             // summed quench durations
  int steps = 0;
};

// Symmetric adiabatic Trotter ramp of the NNN tunneling from 0 to tp_final.
// fh_spec supplies the fixed local part of every half-step.
TrotterResult adiabatic_trotter_nnn(const StateVector& state, const HamiltonianSpec& fh_spec, double tp_final,
                                    double t_trotter, double dT, const SequenceOptions& opt = {});

}  // namespace fhsim
