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
#include "fhsim/optimize.hpp"
#include "oracles.hpp"

using namespace fhsim;

namespace {

double vec_diff(const StateVector& a, const Eigen::VectorXcd& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b(k)));
  return m;
}

HamiltonianSpec random_spec(const LatticeGeometry& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  HamiltonianSpec s = fh_local(g, 1.0, 6.0);
  for (int i = 0; i < g.num_sites(); ++i) s.add_mu(i, u(rng), u(rng));
  return s;
}

}  // namespace

TEST_CASE("real-time propagation matches dense exponentials") {
  const LatticeGeometry g(2, 3);
  auto b = make_basis(g, {3, 3});
  HamiltonianSpec spec = random_spec(g, 1);
  const auto m = oracle::sector_matrix(spec, *b);
  StateVector x = oracle::random_state(b, 2);
  for (double T : {0.0, 0.05, 0.7, 3.0, 12.0}) {
    StateVector y = propagate_real(x, spec, T);
    CAPTURE(T);
    CHECK(vec_diff(y, oracle::dense_evolve(m, oracle::to_eigen(x), T)) < 1e-8);
    CHECK(std::abs(y.norm() - 1.0) < 1e-8);
  }
}

TEST_CASE("diagonal propagation is exact") {
  const LatticeGeometry g(1, 3);
  auto b = make_basis(g, {1, 2});
  HamiltonianSpec spec = interaction_spec(g, 8.0);
  apply_mu_pattern(spec, MuPattern::staggered(0.9));
  Operator h(spec, b);
  StateVector x = oracle::random_state(b, 4);
  StateVector y = propagate_real(x, spec, 1.3);
  for (std::size_t k = 0; k < b->dim(); ++k)
    CHECK(std::abs(y[k] - x[k] * std::exp(cplx(0, -1.3 * h.diagonal()[k]))) < 1e-14);
}

TEST_CASE("dimer single-particle transfer") {
  // H = -(c0^dag c1 + h.c.) is -sigma_x, so exp(-i H pi/2) = i sigma_x.
  const LatticeGeometry g(1, 2);
  auto b = make_basis(g, {1, 0});
  StateVector y = propagate_real(StateVector::product(b, 0b01, 0), fh_local(g, 1.0, 0.0), std::numbers::pi / 2);
  CHECK(std::abs(y[b->index(0b10, 0)] - cplx(0.0, 1.0)) < 1e-9);
  CHECK(std::abs(y[b->index(0b01, 0)]) < 1e-9);
}

TEST_CASE("imaginary-time steps") {
  const LatticeGeometry g(1, 2);
  auto b = make_basis(g, {1, 1});
  const HamiltonianSpec spec = fh_local(g, 1.0, 8.0);
  GroundState gs = exact_ground_state(spec, b);
  ImagStep r = propagate_imag(gs.subspace[0], spec, 0.3);
  CHECK(std::abs(std::abs(overlap(r.state, gs.subspace[0])) - 1.0) < 1e-10);
  CHECK(r.decay == doctest::Approx(std::exp(-0.3 * gs.energy)).epsilon(1e-9));

  StateVector x = oracle::random_state(b, 8);
  ImagStep big = propagate_imag(x, spec, 50.0);
  CHECK(1.0 - std::abs(overlap(big.state, gs.subspace[0])) < 1e-10);

  const LatticeGeometry g2(2, 3);
  auto b2 = make_basis(g2, {3, 3});
  const HamiltonianSpec s2 = random_spec(g2, 5);
  Operator h2(s2, b2);
  for (int trial = 0; trial < 5; ++trial) {
    StateVector y = oracle::random_state(b2, 50 + trial);
    const double e0 = expectation(y, h2);
    ImagStep st = propagate_imag(y, h2, 0.05 * (trial + 1));
    CHECK(expectation(st.state, h2) <= e0 + 1e-9);
    CHECK(std::abs(st.state.norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("constant schedule equals a single quench") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 1});
  const HamiltonianSpec spec = random_spec(g, 7);
  StateVector x = oracle::random_state(b, 1);
  Schedule s{{{1.0, spec, spec}, {0.5, spec, spec}}};
  StateVector y = run_schedule(x, s, 0.1);
  CHECK(state_distance(y, propagate_real(x, spec, 1.5)) < 1e-7);
  Schedule bad{{{1.0, spec, spec}, {1.0, spec.scaled(2.0), spec}}};
  CHECK_THROWS_AS(run_schedule(x, bad), ParameterError);
}

TEST_CASE("slow sweeps approach the instantaneous ground state") {
  // Dimer driven from a tilted double well into the symmetric one.
  const LatticeGeometry g(1, 2);
  auto b = make_basis(g, {1, 1});
  HamiltonianSpec start = fh_local(g, 1.0, 4.0);
  start.add_mu(0, -3.0, -3.0);
  const HamiltonianSpec end = fh_local(g, 1.0, 4.0);
  GroundState g0 = exact_ground_state(start, b);
  GroundState g1 = exact_ground_state(end, b);
  double last = 1.0;
  for (double T : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    Schedule s{{{T, start, end}}};
    const double inf = infidelity(run_schedule(g0.subspace[0], s), g1);
    CAPTURE(T);
    CHECK(inf < last);
    last = inf;
  }
  CHECK(last < 1e-3);
}

TEST_CASE("compiled fSWAP is an involution and matches the closed form") {
  const LatticeGeometry g(2, 3);
  auto b = make_basis(g, {3, 2});
  StateVector x = oracle::random_state(b, 3);
  std::vector<Bond> bonds{{g.site(0, 0), g.site(0, 1)}, {g.site(1, 0), g.site(2, 0)}};
  CompiledSequence fs = compile_fswap(g, bonds);
  SequenceOptions integrate;
  integrate.closed_form_fswap = false;
  StateVector once = apply_sequence(x, fs, integrate);
  StateVector closed = apply_fswap_exact(x, bonds);
  double m = 0.0;
  for (std::size_t k = 0; k < b->dim(); ++k) m = std::max(m, std::abs(once[k] - closed[k]));
  CHECK(m < 1e-8);
  StateVector twice = apply_sequence(once, fs, integrate);
  CHECK(state_distance(twice, x) < 1e-10);
  CHECK(state_distance(apply_fswap_exact(closed, bonds), x) < 1e-14);
}

TEST_CASE("compiled NNN evolution equals the direct exponential") {
  for (auto [r, c] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {2, 4}, {3, 2}}) {
    const LatticeGeometry g(r, c);
    auto b = make_basis(g, {g.num_sites() / 2, g.num_sites() / 2 - (g.num_sites() > 4 ? 1 : 0)});
    StateVector x = oracle::random_state(b, 17);
    std::vector<std::pair<NnnOrientation, BondClass>> cases = {{NnnOrientation::kDiag1, BondClass::kNnnDiag1},
                                                               {NnnOrientation::kDiag2, BondClass::kNnnDiag2}};
    for (auto [o, cls] : cases)
      for (double tpT : {-0.5, 0.2, 0.5}) {
        const double Tp = 1.3;
        const double tp = tpT / Tp;
        for (bool closed : {true, false}) {
          SequenceOptions opt;
          opt.closed_form_fswap = closed;
          StateVector comp = apply_sequence(x, compile_nnn_step(g, tp, Tp, o), opt);
          StateVector direct = propagate_real(x, nnn_spec(g, cls, tp), Tp);
          CAPTURE(r);
          CAPTURE(c);
          CAPTURE(tpT);
          CHECK(state_distance(comp, direct) < 1e-6);
          CHECK(std::abs(comp.norm() - 1.0) < 1e-8);
        }
      }
  }
  // Both diagonals of a single plaquette commute and compile together.
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  StateVector x = oracle::random_state(b, 23);
  HamiltonianSpec both(g);
  for (const Bond& bd : g.nnn_bonds()) both.add_nnn(bd, 0.4);
  StateVector comp = apply_sequence(x, compile_nnn_step(g, 0.4, 1.25, NnnOrientation::kBoth));
  CHECK(state_distance(comp, propagate_real(x, both, 1.25)) < 1e-8);
  // Zero amplitude compiles to nothing.
  CHECK(compile_nnn_step(g, 0.0, 1.0).pulses.empty());
  for (const auto& p : compile_nnn_step(g, 0.4, 1.0).pulses) CHECK(p.spec.nnn.empty());
}

TEST_CASE("adiabatic Trotter without NNN reduces to the local evolution") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const HamiltonianSpec fh = fh_local(g, 1.0, 8.0);
  StateVector x = oracle::random_state(b, 31);
  TrotterResult r = adiabatic_trotter_nnn(x, fh, 0.0, 1.0, 0.1);
  CHECK(state_distance(r.state, propagate_real(x, fh, 1.0)) < 1e-8);
  CHECK(r.nominal_physical_time == doctest::Approx(2.0));
  CHECK_THROWS_AS(adiabatic_trotter_nnn(x, fh, 0.0, 1.0, 0.3), ParameterError);
}

TEST_CASE("adiabatic Trotter error is second order in the step") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const HamiltonianSpec fh = fh_local(g, 1.0, 4.0);
  StateVector x = oracle::random_state(b, 41);
  const double tp = -0.8;
  const double T = 2.0;
  HamiltonianSpec full = fh;
  for (const Bond& bd : g.nnn_bonds()) full.add_nnn(bd, tp);
  Schedule ramp{{{T, fh, full}}};
  StateVector exact = run_schedule(x, ramp, 1e-3);
  std::vector<double> errs;
  for (double dT : {0.2, 0.1, 0.05, 0.025}) {
    TrotterResult r = adiabatic_trotter_nnn(x, fh, tp, T, dT);
    errs.push_back(state_distance(r.state, exact));
  }
  for (std::size_t k = 1; k < errs.size(); ++k) {
    const double slope = std::log2(errs[k - 1] / errs[k]);
    CAPTURE(k);
    CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
  }
}
