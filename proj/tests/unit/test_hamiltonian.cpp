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

#include <numbers>

#include "doctest.h"
#include "fhsim/errors.hpp"
#include "fhsim/evolve.hpp"
#include "fhsim/hamiltonian.hpp"
#include "fhsim/optimize.hpp"
#include "oracles.hpp"

using namespace fhsim;

TEST_CASE("fh_local term counts") {
  const LatticeGeometry g(2, 4);
  HamiltonianSpec s = fh_local(g, 1.0, 8.0);
  CHECK(s.hop_term_count() == 20);
  CHECK(s.u == 8.0);
  const LatticeGeometry d(1, 2);
  auto b = make_basis(d, {1, 0});
  Operator h(fh_local(d, 1.0, 0.0), b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0));
}

TEST_CASE("U = 0 ground energy equals filled single-particle levels") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.2, 1.4);
  for (auto [r, c, nu, nd] : std::vector<std::array<int, 4>>{{2, 3, 2, 3}, {2, 4, 4, 4}, {3, 3, 4, 5}}) {
    const LatticeGeometry g(r, c);
    HamiltonianSpec spec(g);
    for (const Bond& b : g.nn_bonds()) spec.add_hop(b, u(rng));
    for (int i = 0; i < g.num_sites(); ++i) spec.add_mu(i, u(rng) - 0.8, u(rng) - 0.8);
    // single-particle matrices, one per spin
    auto level_sum = [&](const std::vector<double>& mu, int count) {
      Eigen::MatrixXd h = Eigen::MatrixXd::Zero(g.num_sites(), g.num_sites());
      for (const auto& t : spec.tunnelings) {
        h(t.bond.i, t.bond.j) -= t.t;
        h(t.bond.j, t.bond.i) -= t.t;
      }
      for (int i = 0; i < g.num_sites(); ++i) h(i, i) = mu[i];
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
      return es.eigenvalues().head(count).sum();
    };
    const double expect = level_sum(spec.mu_up, nu) + level_sum(spec.mu_down, nd);
    GroundState gs = exact_ground_state(spec, make_basis(g, {nu, nd}));
    CHECK(gs.energy == doctest::Approx(expect).epsilon(1e-10));
  }
}

TEST_CASE("resource step Hamiltonians") {
  const LatticeGeometry g(2, 4);
  ResourceCouplings c{1.0, 8.0, 10.0, 1.0};
  HamiltonianSpec h0 = resource_step_hamiltonian(0, g, c);
  ResourceCouplings c0 = c;
  c0.t = 0.0;
  c0.u = 0.0;
  CHECK(same_couplings(resource_step_hamiltonian(1, g, c0), h0));
  // k=2 with t_tilde = t is the local model on dimer + rung bonds
  HamiltonianSpec k2 = resource_step_hamiltonian(2, g, c);
  HamiltonianSpec ref2 = hopping_spec(g, g.bonds(BondClass::kDimer), 1.0) + hopping_spec(g, g.bonds(BondClass::kRung), 1.0);
  ref2.u = 8.0;
  CHECK(same_couplings(k2, ref2));
  CHECK(same_couplings(resource_step_hamiltonian(3, g, c), fh_local(g, 1.0, 8.0)));
  CHECK_THROWS_AS(resource_step_hamiltonian(4, g, c), ParameterError);
  CHECK_THROWS_AS(resource_step_hamiltonian(2, LatticeGeometry(2, 3), c), ParameterError);
}

TEST_CASE("doped protocol Hamiltonian") {
  const LatticeGeometry g(2, 6);
  std::vector<int> empty{g.site(1, 0), g.site(1, 1), g.site(4, 0), g.site(4, 1)};
  std::vector<Bond> links;
  for (const Bond& b : g.nn_bonds()) {
    const bool ei = std::find(empty.begin(), empty.end(), b.i) != empty.end();
    const bool ej = std::find(empty.begin(), empty.end(), b.j) != empty.end();
    if (ei != ej) links.push_back(b);
  }
  CHECK(links.size() == 8);
  CHECK(same_couplings(doped_protocol_hamiltonian(g, 1.0, 8.0, 1.0, 0.0, links, empty), fh_local(g, 1.0, 8.0)));
  HamiltonianSpec h = doped_protocol_hamiltonian(g, 1.0, 8.0, 0.3, 1.0, links, empty);
  int shifted = 0;
  for (int i = 0; i < g.num_sites(); ++i)
    if (h.mu_up[i] != 0.0) {
      CHECK(h.mu_up[i] == 4.0);
      CHECK(h.mu_down[i] == 4.0);
      ++shifted;
    }
  CHECK(shifted == 4);
  CHECK_THROWS_AS(doped_protocol_hamiltonian(g, 1.0, 8.0, 0.3, 1.0, {{0, 3}}, empty), ParameterError);
}

TEST_CASE("fSWAP and FT Hamiltonians") {
  const LatticeGeometry g(1, 2);
  auto b = make_basis(g, {1, 0});
  Operator h(fswap_hamiltonian(g, {0, 1}), b);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
  CHECK(es.eigenvalues()(0) == doctest::Approx(-4.0));
  CHECK(es.eigenvalues()(1) == doctest::Approx(-2.0));
  CHECK(Operator(ft_hamiltonian(g, {0, 1}, 0.0, 0.4, -0.2), b).is_diagonal());

  StateVector s = StateVector::product(b, 0b01, 0);
  StateVector out = propagate_real(s, fswap_hamiltonian(g, {0, 1}), std::numbers::pi / 2.0);
  CHECK(std::abs(std::abs(out[b->index(0b10, 0)]) - 1.0) < 1e-9);
}
