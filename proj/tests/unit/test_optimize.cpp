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

#include <cmath>

#include "doctest.h"
#include "fhsim/circuits.hpp"
#include "fhsim/optimize.hpp"
#include "oracles.hpp"

using namespace fhsim;

TEST_CASE("dimer ground-state energy matches the closed form") {
  const LatticeGeometry g(1, 2);
  const GroundState gs = exact_ground_state(fh_local(g, 1.0, 8.0), make_basis(g, {1, 1}));
  CHECK(gs.energy == doctest::Approx((8.0 - std::sqrt(64.0 + 16.0)) / 2).epsilon(1e-12));
  CHECK(gs.energy == doctest::Approx(-0.47214).epsilon(1e-5));
}

TEST_CASE("Mott suppression at large U") {
  const LatticeGeometry g(2, 2);
  const GroundState gs = exact_ground_state(fh_local(g, 1.0, 1000.0), make_basis(g, {2, 2}));
  CHECK(gs.energy < 0.0);
  CHECK(gs.energy > -0.1);
}

TEST_CASE("staggered field without hopping has the Neel ground state") {
  const LatticeGeometry g(2, 3);
  auto b = make_basis(g, {3, 3});
  const GroundState gs = exact_ground_state(fh_local(g, 0.0, 8.0, MuPattern::staggered(2.0)), b);
  CHECK(infidelity(initial_state({}, b), gs) < 1e-12);
}

TEST_CASE("degenerate ground spaces use the subspace projection") {
  const LatticeGeometry g(1, 3);
  auto b = make_basis(g, {2, 1});
  const HamiltonianSpec h = fh_local(g, 1.0, 4.0);
  const GroundState gs = exact_ground_state(h, b);
  if (gs.subspace.size() > 1) {
    StateVector mix = gs.subspace[0];
    for (std::size_t k = 0; k < mix.size(); ++k) mix[k] = (gs.subspace[0][k] + gs.subspace[1][k]) / std::sqrt(2.0);
    CHECK(infidelity(mix, gs) < 1e-10);
  }
  const MeritReport r = merit(gs.subspace.front(), Operator(h, b), gs);
  CHECK(r.residual < 1e-10);
  CHECK(r.infidelity < 1e-10);
  CHECK(r.residual >= 0.0);
}

TEST_CASE("Lanczos agrees with dense diagonalization on a positive spectrum") {
  const LatticeGeometry g(2, 3);
  auto b = make_basis(g, {3, 3});
  HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  h.v = 2.0;
  const GroundState dense = exact_ground_state(h, b);
  EigenOptions sparse;
  sparse.dense_limit = 0;
  const GroundState gs = exact_ground_state(h, b, sparse);
  REQUIRE(dense.energy > 0.0);
  CHECK(gs.energy == doctest::Approx(dense.energy).epsilon(1e-10));
  CHECK(gs.gap == doctest::Approx(dense.gap).epsilon(1e-8));
  CHECK(gs.subspace.size() == dense.subspace.size());
  const auto pairs = lowest_eigenpairs(Operator(h, b), 4, sparse);
  const auto ref = lowest_eigenpairs(Operator(h, b), 4, {});
  for (int k = 0; k < 4; ++k) CHECK(pairs[k].first == doctest::Approx(ref[k].first).epsilon(1e-9));
}

TEST_CASE("Nelder-Mead minimizes the Rosenbrock valley") {
  auto f = [](const std::vector<double>& x) {
    return 100 * std::pow(x[1] - x[0] * x[0], 2) + std::pow(1 - x[0], 2);
  };
  const NelderMeadResult r = nelder_mead(f, {-1.2, 1.0}, 0.5, 5000, 1e-14);
  CHECK(r.f < 1e-10);
  CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-4));
  for (std::size_t k = 1; k < r.best_history.size(); ++k) CHECK(r.best_history[k] <= r.best_history[k - 1]);
}

TEST_CASE("dimer stage optimization reaches the exact ground state") {
  const LatticeGeometry g(1, 2);
  auto b = make_basis(g, {1, 1});
  OptimizerConfig cfg;
  cfg.restarts = 3;
  const OptimizationResult r =
      minimize_energy(dimer_circuit(g, g.bonds(BondClass::kDimer), 3), initial_state({}, b), fh_local(g, 1.0, 8.0), cfg);
  CHECK(r.report.infidelity < 1e-8);
  CHECK(r.report.residual < 1e-8);
  CHECK(r.report.physical_time > 0.0);
  for (std::size_t k = 1; k < r.best_history.size(); ++k) CHECK(r.best_history[k] <= r.best_history[k - 1]);

  const OptimizationResult again =
      minimize_energy(dimer_circuit(g, g.bonds(BondClass::kDimer), 3), initial_state({}, b), fh_local(g, 1.0, 8.0), cfg);
  CHECK(again.params == r.params);
}

TEST_CASE("zero-layer circuit reports the initial merit") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  const StateVector neel = initial_state({}, b);
  const OptimizationResult r = minimize_energy(VariationalCircuit{}, neel, h, {});
  const MeritReport m = merit(neel, Operator(h, b), exact_ground_state(h, b));
  CHECK(r.params.empty());
  CHECK(r.report.energy == m.energy);
  CHECK(r.report.infidelity == m.infidelity);
  CHECK(r.report.physical_time == 0.0);
}
