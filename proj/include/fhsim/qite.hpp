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

// Variational imaginary-time evolution with re-anchoring at theta = 0, the
// exact imaginary-time reference, and the two QLanczos refinements.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "fhsim/fock.hpp"
#include "fhsim/hamiltonian.hpp"
#include "fhsim/measure.hpp"

namespace fhsim {

struct QiteGenerator {
  std::string name;
  HamiltonianSpec spec;
};

// Native generator set {H_t, H_U} with unit couplings.
std::vector<QiteGenerator> default_generators(const LatticeGeometry& g);

struct QiteConfig {
  double dtau = 0.1;
  int n_steps = 20;
  std::vector<QiteGenerator> generators;  // empty: default_generators
  double regularization = 1e-6;
  double pinv_cutoff = 1e-8;
  bool shot_mode = false;
  ShotConfig shots;
  bool store_states = false;
  // Quench under the hopping and on-site parts of the target before the first
  // step. Real states have b = 0 and would not move otherwise.
  double dephase_time = 0.0;
  void validate() const;
};

inline constexpr int kMaxStoredStates = 50;

struct GB {
  Eigen::MatrixXd g;
  Eigen::VectorXd b;
  Eigen::VectorXd mean;  // <H_mu>
  double energy = 0.0;
  double energy_stderr = 0.0;
  int settings = 0;
  long runs = 0;
};

GB measure_g_b(const StateVector& state, const std::vector<QiteGenerator>& generators,
               const HamiltonianSpec& target, const QiteConfig& cfg, std::uint64_t stream = 0);

struct QiteStep {
  double tau = 0.0;
  double energy = 0.0;
  double energy_stderr = 0.0;
  Eigen::MatrixXd g;
  Eigen::VectorXd b;
  std::vector<double> theta;  // applied after this measurement, empty on the last step
  double c = 1.0;             // NaN once 1 - 2 dtau E <= 0
  double physical_time = 0.0; // cumulative
  int settings = 0;
  long runs = 0;
};

struct QiteTrace {
  double dtau = 0.0;
  std::vector<std::string> generators;
  std::vector<QiteStep> steps;
  std::vector<StateVector> states;  // only with store_states
  int increases = 0;                // steps whose energy rose (monotonicity monitor)
  double dephase_time = 0.0;
  double energy_reference = 0.0;  // shift the c chain was built with

  std::vector<double> energies() const;
};

// c_0 = 1, 1 / c_{k+1}^2 = (1 - 2 dtau (E_k - reference)) / c_k^2.
// NaN from the first non-positive factor on.
std::vector<double> normalization_chain(const std::vector<double>& energies, double dtau, double reference = 0.0);

// Reference used for recorded traces: max(0, max_k E_k). Zero for the usual
// negative-energy runs; for positive spectra it keeps every factor >= 1.
// S and H ratios in the approximate variant are invariant under the shift
// to the order of the recursion itself.
double chain_reference(const std::vector<double>& energies);

QiteTrace varqite_run(const StateVector& initial, const HamiltonianSpec& target, const QiteConfig& cfg);

// Energies of the normalized exp(-k dtau H)|initial>, k = 0..n_steps.
std::vector<double> exact_ite_reference(const StateVector& initial, const HamiltonianSpec& target, double dtau,
                                        int n_steps);

// Exact imaginary-time trajectory in trace form (energies, c chain, states),
// the fully expressive limit of varqite_run.
QiteTrace exact_ite_trace(const StateVector& initial, const HamiltonianSpec& target, double dtau, int n_steps,
                          bool store_states = true);

struct KrylovPair {
  Eigen::MatrixXcd S;
  Eigen::MatrixXcd H;
  std::vector<int> indices;  // kept trace steps
  int dropped = 0;           // S eigendirections discarded
  double smallest_kept = 0.0;
  double largest = 0.0;
};

struct QLanczosResult {
  double energy = 0.0;
  KrylovPair pair;
};

struct QLanczosOptions {
  double drop_ratio = 1e-10;
  double max_overlap = 0.999;
};

// Index selection shared by both variants: steps with the parity of the
// lowest-energy step, thinned outward from it by overlap.
std::vector<int> qlanczos_indices(const std::vector<int>& candidates, int anchor,
                                  const std::function<double(int, int)>& overlap, double max_overlap);

double solve_krylov(KrylovPair& pair, double drop_ratio);

QLanczosResult qlanczos_approx(const QiteTrace& trace, const QLanczosOptions& opt = {});

struct CompleteOptions {
  QLanczosOptions base;
  bool shot_mode = false;
  ShotConfig shots;
};

QLanczosResult qlanczos_complete(const QiteTrace& trace, const HamiltonianSpec& target,
                                 const CompleteOptions& opt = {});

// Scalars to CSV, matrices and scalars to JSON.
void write_trace(const QiteTrace& trace, const std::string& json_path, const std::string& csv_path);
QiteTrace read_trace(const std::string& json_path);

}  // namespace fhsim
