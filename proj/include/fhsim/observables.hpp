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

// Diagonal observables read off a state: S^z correlations, the connected spin
// structure factor along x and the rung-summed charge density.

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fhsim/fock.hpp"
#include "fhsim/hamiltonian.hpp"

namespace fhsim {

// <S^z_i S^z_j> with S^z = (n_up - n_dn) / 2.
Eigen::MatrixXd spin_correlations(const StateVector& state);
Eigen::VectorXd spin_polarization(const StateVector& state);

// S(k_m) for k_m = 2 pi m / L_x, m = 0..L_x-1, from connected correlators
// between sites on the same leg, averaged over legs. Unnormalized.
struct StructureFactor {
  int length = 0;
  std::vector<double> k;
  std::vector<double> value;
};
StructureFactor structure_factor(const StateVector& state);

// <n_x> summed over the rung and both spins.
std::vector<double> density_profile(const StateVector& state);

// Wavelength L_x / m of the largest nonzero Fourier mode of a profile,
// or 0 for a flat one.
double dominant_wavelength(const std::vector<double>& profile);

struct ObservableReport {
  Eigen::MatrixXd szsz;
  StructureFactor sk;
  std::vector<double> density;
  double energy = 0.0;
};

ObservableReport observe(const StateVector& state, const HamiltonianSpec& target);

// spin_correlations.csv, structure_factor.csv and density_profile.csv in dir.
void write_observables(const ObservableReport& r, const std::string& dir);

}  // namespace fhsim
