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
#include "fhsim/errors.hpp"
#include "fhsim/io.hpp"
#include "fhsim/optimize.hpp"
#include "oracles.hpp"

using namespace fhsim;

namespace {

bool same(const StateVector& a, const StateVector& b) { return a.amplitudes() == b.amplitudes(); }

HyvaParameters shipped(HyvaMode mode) {
  HyvaParameters p;
  p.mode = mode;
  p.dimer = load_precompiled("dimer", 1, 2, 8.0, 3).params;
  p.plaquette = load_precompiled("plaquette", 2, 2, 8.0, 3).params;
  p.fusion = std::vector<double>(6, 0.1);
  p.ramp_time_2 = 1.0;
  p.ramp_time_3 = 1.0;
  p.dt = 0.05;
  return p;
}

}  // namespace

TEST_CASE("empty circuit is the identity") {
  auto b = make_basis(LatticeGeometry(2, 2), {2, 2});
  const StateVector s = oracle::random_state(b, 1);
  CHECK(same(apply_circuit(s, VariationalCircuit{}, {}), s));
}

TEST_CASE("interaction layer leaves the Neel state unchanged") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  VariationalCircuit c;
  CircuitLayer l;
  l.frozen = HamiltonianSpec(g);
  l.generators = {interaction_spec(g, 1.0)};
  l.coordinate_names = {"TU"};
  c.layers.push_back(l);
  const StateVector neel = initial_state({}, b);
  CHECK(state_distance(apply_circuit(neel, c, {8.0 * 0.37}), neel) < 1e-14);
  CHECK(std::abs(overlap(neel, apply_circuit(neel, c, {8.0 * 0.37})) - 1.0) < 1e-14);
}

TEST_CASE("shipped dimer circuit prepares the dimer ground state") {
  const LatticeGeometry g(1, 2);
  auto b = make_basis(g, {1, 1});
  const auto p = load_precompiled("dimer", 1, 2, 8.0, 3).params;
  const StateVector out = apply_circuit(initial_state({}, b), dimer_circuit(g, g.bonds(BondClass::kDimer), 3), p);
  CHECK(infidelity(out, exact_ground_state(fh_local(g, 1.0, 8.0), b)) < 1e-8);

  // Same parameters on a ladder of uncoupled dimers.
  const LatticeGeometry l(2, 4);
  auto bl = make_basis(l, {4, 4});
  HamiltonianSpec dimers(l);
  dimers += hopping_spec(l, l.bonds(BondClass::kDimer), 1.0) + interaction_spec(l, 8.0);
  const StateVector lad = apply_circuit(initial_state({}, bl), dimer_circuit(l, l.bonds(BondClass::kDimer), 3), p);
  CHECK(infidelity(lad, exact_ground_state(dimers, bl)) < 1e-7);
}

TEST_CASE("property: reparametrizing time and coupling leaves a layer invariant") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 1});
  VariationalCircuit c;
  CircuitLayer l;
  l.frozen = HamiltonianSpec(g);
  l.generators = {hopping_spec(g, g.nn_bonds(), 1.0), interaction_spec(g, 1.0)};
  l.variable_time = true;
  c.layers = {l, l};
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0), sc(0.3, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p{std::abs(u(rng)), u(rng), 4 * u(rng), std::abs(u(rng)), u(rng), 4 * u(rng)};
    std::vector<double> q = p;
    for (int layer = 0; layer < 2; ++layer) {
      const double a = sc(rng);
      q[3 * layer] *= a;
      q[3 * layer + 1] /= a;
      q[3 * layer + 2] /= a;
    }
    const StateVector s = oracle::random_state(b, trial);
    CHECK(state_distance(apply_circuit(s, c, p), apply_circuit(s, c, q)) < 1e-10);
  }
  // With frozen couplings only theta = T lambda is a coordinate of the layer.
  const VariationalCircuit plaq = plaquette_circuit(g, g.bonds(BondClass::kDimer), g.bonds(BondClass::kRung), 1);
  const StateVector s = oracle::random_state(b, 99);
  CHECK(state_distance(apply_circuit(s, plaq, {1.0, 0.4}), apply_circuit(s, plaq, {2.0, 0.2})) > 1e-3);
}

TEST_CASE("stages composed separately equal the whole program") {
  const LatticeGeometry g(2, 4);
  for (HyvaMode m : {HyvaMode::kFullyVariational, HyvaMode::kHyva12, HyvaMode::kHyva23}) {
    const ProtocolProgram prog = build_hyva_program(g, shipped(m));
    REQUIRE(prog.stages.size() == 3);
    auto b = make_basis(g, prog.sector);
    StateVector s = initial_state(prog.initial, b);
    double t = 0.0;
    for (const ProgramStage& st : prog.stages) {
      s = run_stage(s, st);
      t += st.physical_time();
    }
    CHECK(state_distance(s, run_program(prog, b)) < 1e-12);
    CHECK(t == doctest::Approx(prog.physical_time()));
    CHECK(prog.stages[1].adiabatic == (m == HyvaMode::kHyva12));
    CHECK(prog.stages[2].adiabatic == (m != HyvaMode::kFullyVariational));
  }
}

TEST_CASE("HyVA programs need an even ladder") {
  CHECK_THROWS_AS(build_hyva_program(LatticeGeometry(2, 3), shipped(HyvaMode::kFullyVariational)), ParameterError);
  CHECK_THROWS_AS(build_hyva_program(LatticeGeometry(3, 4), shipped(HyvaMode::kFullyVariational)), ParameterError);
  HyvaParameters bad = shipped(HyvaMode::kFullyVariational);
  bad.dimer.pop_back();
  CHECK_THROWS_AS(build_hyva_program(LatticeGeometry(2, 4), bad), ParameterError);
}

TEST_CASE("initial states") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const StateVector neel = initial_state({}, b);
  int nonzero = 0;
  for (std::size_t k = 0; k < neel.size(); ++k) nonzero += neel[k] != cplx(0.0);
  CHECK(nonzero == 1);
  CHECK(expectation(neel, interaction_spec(g, 8.0)) == 0.0);

  const LatticeGeometry d(2, 6);
  InitialRecipe rec;
  rec.kind = InitialKind::kDopedStripe;
  rec.empty_columns = stripe_empty_columns(6, 3);
  CHECK(rec.empty_columns == std::vector<int>{1, 4});
  const SpinSector sec = recipe_sector(rec, d);
  CHECK(sec.n_up + sec.n_down == 8);
  const StateVector doped = initial_state(rec, make_basis(d, sec));
  for (double x : {1, 4}) CHECK(expectation(doped, [&] {
          HamiltonianSpec n(d);
          n.add_mu(d.site(x, 0), 1, 1).add_mu(d.site(x, 1), 1, 1);
          return n;
        }()) == 0.0);
  CHECK_THROWS_AS(initial_state(rec, make_basis(d, {4, 3})), ParameterError);
}

TEST_CASE("plaquette-product state embeds exact plaquette ground states") {
  const LatticeGeometry p(2, 2), g(2, 4);
  const double e2 = exact_ground_state(fh_local(p, 1.0, 8.0), make_basis(p, {2, 2})).energy;
  InitialRecipe rec;
  rec.kind = InitialKind::kPlaquetteProduct;
  rec.u = 8.0;
  const StateVector s = initial_state(rec, make_basis(g, {4, 4}));
  HamiltonianSpec intra = hopping_spec(g, g.bonds(BondClass::kIntraPlaquette), 1.0) + interaction_spec(g, 8.0);
  CHECK(expectation(s, intra.scaled(-1.0) + fh_local(g, 1.0, 8.0)) == 0.0);
  CHECK(expectation(s, fh_local(g, 1.0, 8.0)) == doctest::Approx(2 * e2).epsilon(1e-12));
  CHECK(expectation(s, hopping_spec(g, g.bonds(BondClass::kInterPlaquette), 1.0)) == 0.0);
}
