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

// Emulated occupation-basis readout: basis-rotation settings built from the
// native gate set, shot sampling and the estimators that recombine sampled
// occupations into <H_t>, <H_t^2>, Re/Im <H_t D> and diagonal observables.

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fhsim/evolve.hpp"
#include "fhsim/fock.hpp"
#include "fhsim/hamiltonian.hpp"

namespace fhsim {

// B maps the bond hop onto n_i - n_j, C maps the current onto n_i - n_j.
enum class RotationKind { kB, kC };

// Unit-duration quench under H_FT(theta, mu1, mu2).
struct FtQuench {
  double theta = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
};

struct RotationCompilation {
  std::array<FtQuench, 2> quenches;  // applied in order
  double infidelity = 1.0;           // 1 - |tr(u_ideal^dag u)| / 2
  bool compiled = false;             // false: closed-form fallback
};

// Single-particle 2 x 2 unitaries on the modes (i, j) of one spin.
Eigen::Matrix2cd ideal_rotation(RotationKind k);
Eigen::Matrix2cd ft_unitary(const FtQuench& q);
Eigen::Matrix2cd rotation_unitary(const RotationCompilation& c);
double rotation_infidelity(const Eigen::Matrix2cd& ideal, const Eigen::Matrix2cd& u);
// Frobenius distance after removing the global phase.
double rotation_distance(const Eigen::Matrix2cd& ideal, const Eigen::Matrix2cd& u);

// Two-quench H_FT realization, optimized once per kind and cached.
const RotationCompilation& compiled_rotation(RotationKind k);

CompiledSequence bond_rotation(const LatticeGeometry& g, Bond b, SpinMask spins, RotationKind k);

struct Rotation {
  Bond bond;
  SpinMask spins = SpinMask::kBoth;
  RotationKind kind = RotationKind::kB;
};

// Occupation-resolved diagonal function of one configuration.
using DiagonalFn = std::function<double(Word up, Word down)>;

struct MeasurementSetting {
  std::string label;
  std::vector<Bond> fswaps;          // applied first
  std::vector<Rotation> rotations;   // then all at once
  DiagonalFn estimator;
};

// Applies the prefix circuit of a setting.
StateVector prepare_setting(const StateVector& state, const MeasurementSetting& s);

// Hopping part of a spec as a map (bond, spin) -> coefficient of (c^dag_i c_j + h.c.).
struct HopTerm {
  Bond bond;
  Spin spin;
  double coef;
};
std::vector<HopTerm> hop_terms(const HamiltonianSpec& spec);
bool has_diagonal_part(const HamiltonianSpec& spec);
DiagonalFn diagonal_fn(const HamiltonianSpec& spec);

enum class CrossPart { kReal, kImag };

std::vector<MeasurementSetting> plan_hopping(const HamiltonianSpec& t);
std::vector<MeasurementSetting> plan_hopping_product(const HamiltonianSpec& t1, const HamiltonianSpec& t2);
std::vector<MeasurementSetting> plan_diagonal(const DiagonalFn& d, const std::string& label = "diag");
// Re or Im of <T D> with T the hopping part of t and D the diagonal part of d.
std::vector<MeasurementSetting> plan_cross(const HamiltonianSpec& t, const HamiltonianSpec& d, CrossPart part);

enum class Observable { kHt, kHt2, kHtHuRe, kHtHuIm, kHu, kHu2, kHn };
std::string to_string(Observable o);
// Unit couplings: H_t = -sum (c^dag c + h.c.), H_U = sum n_up n_dn, H_n = sum n.
std::vector<MeasurementSetting> plan_settings(Observable o, const LatticeGeometry& g);

struct ShotConfig {
  long shots = 2000;
  int parallel_factor = 10;
  std::uint64_t seed = 1;
  bool exact = false;
};

struct EstimateResult {
  std::string observable;
  double mean = 0.0;
  double stderr_ = 0.0;
  long shots = 0;
  int settings = 0;
  long runs = 0;
};

// Exact mode returns the decomposition evaluated on the full distribution.
// Shot mode draws `shots` snapshots per setting from a stream derived from
// (seed, stream, setting index).
EstimateResult sample_and_estimate(const StateVector& state, const std::vector<MeasurementSetting>& settings,
                                   const ShotConfig& cfg, std::uint64_t stream = 0,
                                   const std::string& observable = "");

// Several diagonal estimators evaluated on the same snapshots of one setting.
std::vector<EstimateResult> sample_batch(const StateVector& state, const MeasurementSetting& setting,
                                         const std::vector<DiagonalFn>& estimators, const ShotConfig& cfg,
                                         std::uint64_t stream = 0);

long run_count(long settings, long shots, int parallel_factor);
// 8 N M on ladders, 10 N M on wider lattices, divided by the parallel factor.
long nominal_run_count(const LatticeGeometry& g, long shots, int parallel_factor);

void write_estimates_csv(const std::string& path, const std::vector<EstimateResult>& rows);

}  // namespace fhsim
