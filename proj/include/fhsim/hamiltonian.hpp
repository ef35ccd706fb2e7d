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

// Parametrized Hamiltonians. All couplings are in units of the tunneling t:
//   H = -sum_b t_b sum_s (c^dag_i c_j + h.c.) + U sum n_up n_dn
//       + sum mu_{i,s} n_{i,s} + V sum_<ij> n_i n_j
// with NNN tunnelings t' entering exactly like the NN ones.

#include <cstdint>
#include <string>
#include <vector>

#include "fhsim/fock.hpp"
#include "fhsim/lattice.hpp"

namespace fhsim {

enum class SpinMask : std::uint8_t { kUp = 1, kDown = 2, kBoth = 3 };

inline bool has_spin(SpinMask m, Spin s) {
  return (static_cast<unsigned>(m) >> static_cast<unsigned>(s)) & 1u;
}

struct Tunneling {
  Bond bond;
  double t = 0.0;
  SpinMask spins = SpinMask::kBoth;
};

struct HamiltonianSpec {
  LatticeGeometry geometry;
  std::vector<Tunneling> tunnelings;
  std::vector<Tunneling> nnn;
  double u = 0.0;
  double v = 0.0;
  std::vector<double> mu_up;
  std::vector<double> mu_down;

  HamiltonianSpec() = default;
  explicit HamiltonianSpec(const LatticeGeometry& g)
      : geometry(g), mu_up(g.num_sites(), 0.0), mu_down(g.num_sites(), 0.0) {}

  HamiltonianSpec& add_hop(Bond b, double t, SpinMask spins = SpinMask::kBoth);
  HamiltonianSpec& add_nnn(Bond b, double tp, SpinMask spins = SpinMask::kBoth);
  HamiltonianSpec& add_mu(int site, double mu_up_value, double mu_down_value);

  // Throws ParameterError if a bond is not part of the geometry.
  void validate() const;

  bool has_offdiagonal() const;
  // Number of (bond, spin) hop terms, NN and NNN.
  std::size_t hop_term_count() const;

  HamiltonianSpec scaled(double a) const;
  HamiltonianSpec& operator+=(const HamiltonianSpec& other);
};

HamiltonianSpec operator+(HamiltonianSpec a, const HamiltonianSpec& b);

struct MuPattern {
  enum class Kind { kZero, kUniform, kStaggered, kPerSite };
  Kind kind = Kind::kZero;
  double value = 0.0;
  std::vector<double> up;
  std::vector<double> down;

  static MuPattern zero() { return {}; }
  static MuPattern uniform(double mu) { return {Kind::kUniform, mu, {}, {}}; }
  // -mu (-1)^(x+y) (n_up - n_dn)
  static MuPattern staggered(double mu) { return {Kind::kStaggered, mu, {}, {}}; }
  static MuPattern per_site(std::vector<double> up, std::vector<double> down) {
    return {Kind::kPerSite, 0.0, std::move(up), std::move(down)};
  }
};

// Applies a pattern additively to the chemical potentials of a spec.
void apply_mu_pattern(HamiltonianSpec& spec, const MuPattern& p);

int site_parity(const LatticeGeometry& g, int s);

HamiltonianSpec fh_local(const LatticeGeometry& g, double t, double u, const MuPattern& mu = {});

// Only the generators used as native building blocks.
HamiltonianSpec hopping_spec(const LatticeGeometry& g, const std::vector<Bond>& bonds, double t);
HamiltonianSpec interaction_spec(const LatticeGeometry& g, double u);

struct ResourceCouplings {
  double t = 1.0;
  double u = 8.0;
  double mu = 10.0;
  double t_tilde = 0.0;
};

inline constexpr double kDefaultMu0 = 10.0;

// k = 0: staggered field only; k = 1: dimer hops + U + staggered field;
// k = 2: dimer hops t, rung hops t_tilde, U; k = 3: intra-plaquette hops t,
// inter-plaquette hops t_tilde, U.
HamiltonianSpec resource_step_hamiltonian(int k, const LatticeGeometry& g, const ResourceCouplings& c);

// Links get t_tilde, other NN bonds t, U everywhere, delta * 4t on empty sites.
HamiltonianSpec doped_protocol_hamiltonian(const LatticeGeometry& g, double t, double u, double t_tilde,
                                           double delta, const std::vector<Bond>& links,
                                           const std::vector<int>& empty_sites);

inline constexpr double kEmptySiteMu = 4.0;

// -t sum_s hop - 3t (n_i + n_j); evolving for pi/(2t) swaps the two sites.
HamiltonianSpec fswap_hamiltonian(const LatticeGeometry& g, Bond b, double t = 1.0);

// -theta sum_s hop - mu1 n_i - mu2 n_j, restricted to the given spins.
HamiltonianSpec ft_hamiltonian(const LatticeGeometry& g, Bond b, double theta, double mu1, double mu2,
                               SpinMask spins = SpinMask::kBoth);

// -t' sum over the NNN bonds of one orientation class.
HamiltonianSpec nnn_spec(const LatticeGeometry& g, BondClass orientation, double tp);

// Nearest-neighbour density interaction V sum_<ij> n_i n_j.
HamiltonianSpec v_spec(const LatticeGeometry& g, double v);

}  // namespace fhsim
