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

// Exact reference solutions, figures of merit and the classical optimizer
// used to pre-compile variational circuits.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fhsim/circuits.hpp"
#include "fhsim/fock.hpp"
#include "fhsim/hamiltonian.hpp"
#include "fhsim/operator.hpp"

namespace fhsim {

struct EigenOptions {
  double residual_tol = 1e-9;
  int krylov_dim = 80;
  int max_restarts = 200;
  double degeneracy_tol = 1e-8;
  int max_degenerate = 16;
  std::uint64_t seed = 12345;
  // Sectors up to this dimension are diagonalized densely.
  std::size_t dense_limit = 1500;
};

struct GroundState {
  double energy = 0.0;
  std::vector<StateVector> subspace;  // orthonormal, real amplitudes
  double gap = 0.0;                   // to the first level above the subspace
};

GroundState exact_ground_state(const Operator& h, const EigenOptions& opt = {});
GroundState exact_ground_state(const HamiltonianSpec& spec, BasisPtr basis, const EigenOptions& opt = {});

// Lowest `count` eigenpairs (with multiplicity), ascending.
std::vector<std::pair<double, StateVector>> lowest_eigenpairs(const Operator& h, int count,
                                                              const EigenOptions& opt = {});

// 1 - ||P_GS psi|| for a normalized psi.
double infidelity(const StateVector& psi, const GroundState& gs);

struct MeritReport {
  double energy = 0.0;
  double residual = 0.0;    // |E - E_GS| / N
  double infidelity = 0.0;
  double physical_time = 0.0;
  double wall_time = 0.0;
  bool converged = true;
  int evaluations = 0;
};

MeritReport merit(const StateVector& psi, const Operator& target, const GroundState& gs,
                  double physical_time = 0.0);

struct OptimizerConfig {
  int restarts = 5;
  int budget = 2000;  // evaluations per restart
  double init_lo = 0.0;
  double init_hi = 0.5;
  // Range for bare quench-time coordinates of variable-time layers.
  double time_init_lo = 0.0;
  double time_init_hi = 3.0;
  double spread_tol = 1e-10;
  double initial_step = 0.2;
  std::uint64_t seed = 1;
  std::vector<double> initial_guess;  // used for the first restart when set
};

struct NelderMeadResult {
  std::vector<double> x;
  double f = 0.0;
  int evaluations = 0;
  bool converged = false;
  std::vector<double> best_history;  // best value after each evaluation
};

// Simplex search backed by GSL's nmsimplex2.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double step, int budget, double spread_tol);

struct OptimizationResult {
  std::vector<double> params;
  MeritReport report;
  std::vector<double> best_history;
  std::vector<double> restart_values;
};

OptimizationResult minimize_energy(const VariationalCircuit& circuit, const StateVector& initial,
                                   const HamiltonianSpec& target, const OptimizerConfig& cfg,
                                   const GroundState* gs = nullptr, const KrylovOptions& kopt = {});

}  // namespace fhsim
