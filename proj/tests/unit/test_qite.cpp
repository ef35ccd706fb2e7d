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
#include <filesystem>

#include "doctest.h"
#include "fhsim/circuits.hpp"
#include "fhsim/errors.hpp"
#include "fhsim/evolve.hpp"
#include "fhsim/optimize.hpp"
#include "fhsim/qite.hpp"
#include "oracles.hpp"

using namespace fhsim;

namespace {

// Parity-even singlet-sector state of a half-filled dimer with a complex
// relative phase between the spin and doublon parts.
StateVector dimer_state(BasisPtr b, double phase) {
  StateVector s(b);
  const double r = 1.0 / std::sqrt(2.0);
  const cplx a(0.8, 0.0);
  const cplx d = 0.6 * std::exp(cplx(0.0, phase));
  s[b->index(0b01, 0b10)] += a * r;
  s[b->index(0b10, 0b01)] += a * r;
  s[b->index(0b01, 0b01)] += d * r;
  s[b->index(0b10, 0b10)] += d * r;
  s.normalize();
  return s;
}

StateVector apply_layers(StateVector s, const std::vector<QiteGenerator>& gens, const std::vector<double>& th) {
  for (std::size_t a = 0; a < gens.size(); ++a)
    if (th[a] != 0.0) s = propagate_real(s, gens[a].spec.scaled(th[a]), 1.0, KrylovOptions{1e-14, 40});
  return s;
}

HamiltonianSpec extended_target(const LatticeGeometry& g) {
  HamiltonianSpec t = fh_local(g, 1.0, 8.0);
  t.v = 2.0;
  for (int i = 0; i < g.num_sites(); ++i) t.add_mu(i, 0.1 * i, -0.05 * i);
  return t;
}

}  // namespace

TEST_CASE("g and b vanish appropriately on eigenstates") {
  const LatticeGeometry g(1, 2);
  auto b = make_basis(g, {1, 1});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  const GroundState gs = exact_ground_state(h, b);
  QiteConfig cfg;
  const GB r = measure_g_b(gs.subspace.front(), default_generators(g), h, cfg);
  CHECK(r.b.norm() < 1e-12);
  CHECK(r.energy == doctest::Approx(gs.energy).epsilon(1e-12));
}

TEST_CASE("property: g is symmetric positive semidefinite") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 1});
  QiteConfig cfg;
  std::vector<QiteGenerator> gens = default_generators(g);
  gens.push_back({"Hrung", hopping_spec(g, g.bonds(BondClass::kRung), 1.0)});
  for (int trial = 0; trial < 30; ++trial) {
    const GB r = measure_g_b(oracle::random_state(b, 40 + trial), gens, extended_target(g), cfg);
    CHECK((r.g - r.g.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(r.g);
    CHECK(es.eigenvalues().minCoeff() >= -1e-8);
  }
}

TEST_CASE("g and b match finite differences of the parametrized state") {
  const LatticeGeometry g(1, 2);
  auto b = make_basis(g, {1, 1});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  const auto gens = default_generators(g);
  const StateVector psi = oracle::random_state(b, 9);
  QiteConfig cfg;
  const GB r = measure_g_b(psi, gens, h, cfg);
  const double eps = 1e-5;
  const std::size_t n = gens.size();
  std::vector<Eigen::VectorXcd> d(n);
  for (std::size_t a = 0; a < n; ++a) {
    std::vector<double> p(n, 0.0), m(n, 0.0);
    p[a] = eps;
    m[a] = -eps;
    const StateVector sp = apply_layers(psi, gens, p), sm = apply_layers(psi, gens, m);
    d[a] = (oracle::to_eigen(sp) - oracle::to_eigen(sm)) / (2 * eps);
    const double de = (expectation(sp, h) - expectation(sm, h)) / (2 * eps);
    CHECK(r.b(a) == doctest::Approx(-de / 2).epsilon(1e-6));
  }
  const Eigen::VectorXcd v = oracle::to_eigen(psi);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t c = 0; c < n; ++c) {
      const double gfd = (d[a].dot(d[c]) - d[a].dot(v) * v.dot(d[c])).real();
      CHECK(r.g(a, c) == doctest::Approx(gfd).epsilon(1e-6));
    }
}

TEST_CASE("shot-mode decomposition in exact evaluation equals operator algebra") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const auto gens = default_generators(g);
  for (const HamiltonianSpec& target : {fh_local(g, 1.0, 8.0), extended_target(g), fh_local(g, 0.7, 3.0)}) {
    const StateVector psi = oracle::random_state(b, 17);
    QiteConfig exact;
    QiteConfig decomposed;
    decomposed.shot_mode = true;
    decomposed.shots.exact = true;
    const GB a = measure_g_b(psi, gens, target, exact);
    const GB c = measure_g_b(psi, gens, target, decomposed);
    CHECK((a.g - c.g).norm() < 1e-10);
    CHECK((a.b - c.b).norm() < 1e-10);
    CHECK(std::abs(a.energy - c.energy) < 1e-10);
    CHECK(c.settings > 0);
  }
}

TEST_CASE("shot mode rejects hopping generators that do not match the target") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {1, 1});
  QiteConfig cfg;
  cfg.shot_mode = true;
  cfg.shots.exact = true;
  std::vector<QiteGenerator> gens{{"Hrung", hopping_spec(g, g.bonds(BondClass::kRung), 1.0)}};
  CHECK_THROWS_AS(measure_g_b(oracle::random_state(b, 1), gens, fh_local(g, 1.0, 4.0), cfg), ParameterError);
}

TEST_CASE("ground state is a fixed point of VarQITE") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  const GroundState gs = exact_ground_state(h, b);
  QiteConfig cfg;
  cfg.n_steps = 5;
  const QiteTrace tr = varqite_run(gs.subspace.front(), h, cfg);
  for (const QiteStep& s : tr.steps) {
    CHECK(std::abs(s.energy - gs.energy) < 1e-8);
    for (double t : s.theta) CHECK(std::abs(t) < 1e-6);
  }
}

TEST_CASE("VarQITE approaches exact ITE linearly in the step") {
  const LatticeGeometry g(1, 2);
  auto b = make_basis(g, {1, 1});
  const HamiltonianSpec h = fh_local(g, 1.0, 4.0);
  const StateVector psi = dimer_state(b, 0.93);
  std::vector<double> err;
  for (double dt : {0.004, 0.002, 0.001}) {
    QiteConfig cfg;
    cfg.dtau = dt;
    cfg.n_steps = static_cast<int>(std::lround(0.3 / dt));
    const QiteTrace tr = varqite_run(psi, h, cfg);
    const auto ex = exact_ite_reference(psi, h, dt, cfg.n_steps);
    double worst = 0.0;
    for (std::size_t k = 0; k < ex.size(); ++k) worst = std::max(worst, std::abs(tr.steps[k].energy - ex[k]));
    err.push_back(worst);
  }
  CHECK(err[0] / err[1] == doctest::Approx(2.0).epsilon(0.15));
  CHECK(err[1] / err[2] == doctest::Approx(2.0).epsilon(0.15));
}

TEST_CASE("real states need the dephasing quench to move") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  InitialRecipe rec;
  rec.kind = InitialKind::kPlaquetteProduct;
  rec.u = 32.0;
  const StateVector psi = initial_state(rec, b);
  QiteConfig cfg;
  cfg.dtau = 0.05;
  cfg.n_steps = 3;
  const QiteTrace still = varqite_run(psi, h, cfg);
  CHECK(still.steps.back().energy == doctest::Approx(still.steps.front().energy).epsilon(1e-10));
  cfg.dephase_time = 0.1;
  const QiteTrace moved = varqite_run(psi, h, cfg);
  CHECK(moved.steps.back().energy < moved.steps.front().energy - 1e-3);
  // The dephasing quench commutes with the target, so the start energy is unchanged.
  CHECK(moved.steps.front().energy == doctest::Approx(still.steps.front().energy).epsilon(1e-9));
}

TEST_CASE("exact ITE reference") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  const GroundState gs = exact_ground_state(h, b);
  const auto flat = exact_ite_reference(gs.subspace.front(), h, 0.1, 10);
  for (double e : flat) CHECK(e == doctest::Approx(gs.energy).epsilon(1e-10));
  const auto curve = exact_ite_reference(oracle::random_state(b, 5, true), h, 0.5, 80);
  for (std::size_t k = 1; k < curve.size(); ++k) CHECK(curve[k] <= curve[k - 1] + 1e-12);
  CHECK(std::abs(curve.back() - gs.energy) < 1e-8);
}

// Euler-stepped VarQITE can overshoot the exact flow, so exact ITE is not a pointwise lower bound.
TEST_CASE("VarQITE can dip below exact ITE at finite step") {
  const LatticeGeometry g(2, 4);
  auto b = make_basis(g, {4, 4});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  InitialRecipe rec;
  rec.kind = InitialKind::kPlaquetteProduct;
  rec.u = 32.0;
  QiteConfig cfg;
  cfg.dtau = 0.05;
  cfg.n_steps = 12;
  cfg.dephase_time = 0.1;
  const StateVector psi = initial_state(rec, b);
  const QiteTrace tr = varqite_run(psi, h, cfg);
  const auto ex = exact_ite_reference(psi, h, cfg.dtau, cfg.n_steps);
  double worst = -1e300;
  for (std::size_t k = 0; k < ex.size(); ++k) worst = std::max(worst, ex[k] - tr.steps[k].energy);
  CHECK(worst > 1e-2);
  CHECK(tr.increases == 0);
  CHECK(tr.steps.back().energy > exact_ground_state(h, b).energy);
}

TEST_CASE("normalization chain tracks the exact decay factors") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  const StateVector psi0 = oracle::random_state(b, 23);
  const Operator op(h, b);
  for (double dt : {0.02, 0.01}) {
    StateVector psi = psi0;
    std::vector<double> e, logc{0.0};
    for (int k = 0; k < 10; ++k) {
      e.push_back(expectation(psi, op));
      const ImagStep st = propagate_imag(psi, op, dt);
      logc.push_back(logc.back() - st.log_decay);
      psi = st.state;
    }
    e.push_back(expectation(psi, op));
    const auto c = normalization_chain(e, dt);
    CHECK(c.front() == 1.0);
    for (std::size_t k = 1; k < c.size(); ++k) {
      const double per_step = std::abs(std::log(c[k]) - logc[k]) / static_cast<double>(k);
      CHECK(per_step < 10.0 * dt * dt * 40.0);
    }
  }
}

TEST_CASE("normalization chain breaks down when 1 - 2 dtau E <= 0") {
  const auto c = normalization_chain({1.0, 6.0, 1.0}, 0.1);
  CHECK(std::isfinite(c[1]));
  CHECK(std::isnan(c[2]));
  QiteTrace tr;
  tr.dtau = 0.1;
  for (int k = 0; k < 3; ++k) {
    QiteStep s;
    s.energy = k == 1 ? 6.0 : 1.0 + k;
    s.c = c[k];
    tr.steps.push_back(s);
  }
  tr.steps[2].energy = 0.5;
  CHECK_THROWS_AS(qlanczos_approx(tr), ConditioningError);
}

TEST_CASE("shifted chain survives positive spectra") {
  const auto raw = normalization_chain({12.0, 11.0, 10.5}, 0.05);
  CHECK(std::isnan(raw[1]));
  const double ref = chain_reference({12.0, 11.0, 10.5});
  CHECK(ref == 12.0);
  CHECK(chain_reference({-3.0, -4.0}) == 0.0);
  const auto c = normalization_chain({12.0, 11.0, 10.5}, 0.05, ref);
  for (double x : c) CHECK(std::isfinite(x));

  // Shifting H by a constant leaves the approximate QLanczos estimate shifted
  // by the same constant, up to the order of the recursion.
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  HamiltonianSpec lifted = h;
  for (int s = 0; s < 4; ++s) lifted.add_mu(s, 2.5, 2.5);
  InitialRecipe rec;
  rec.kind = InitialKind::kPlaquetteProduct;
  rec.u = 32.0;
  const StateVector psi = initial_state(rec, b);
  const QiteTrace a = exact_ite_trace(psi, h, 0.02, 20);
  const QiteTrace l = exact_ite_trace(psi, lifted, 0.02, 20);
  CHECK(l.energy_reference > 0.0);
  CHECK(qlanczos_approx(l).energy - 10.0 == doctest::Approx(qlanczos_approx(a).energy).epsilon(2e-2));
  CHECK(qlanczos_complete(l, lifted).energy - 10.0 == doctest::Approx(qlanczos_complete(a, h).energy).epsilon(1e-9));
}

TEST_CASE("QLanczos on single states and spans") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  const GroundState gs = exact_ground_state(h, b);
  InitialRecipe rec;
  rec.kind = InitialKind::kPlaquetteProduct;
  rec.u = 32.0;
  const StateVector psi = initial_state(rec, b);

  const QiteTrace one = exact_ite_trace(psi, h, 0.1, 0);
  CHECK(qlanczos_approx(one).energy == doctest::Approx(one.steps[0].energy).epsilon(1e-12));
  CHECK(qlanczos_complete(one, h).energy == doctest::Approx(expectation(psi, h)).epsilon(1e-12));

  for (double dt : {0.2, 0.1, 0.05}) {
    const QiteTrace tr = exact_ite_trace(psi, h, dt, static_cast<int>(std::lround(1.0 / dt)));
    double emin = 1e300;
    for (const QiteStep& s : tr.steps) emin = std::min(emin, s.energy);
    const QLanczosResult a = qlanczos_approx(tr);
    const QLanczosResult c = qlanczos_complete(tr, h);
    CAPTURE(dt);
    CHECK(a.energy <= emin + 1e-8);
    CHECK(c.energy <= emin + 1e-8);
    CHECK(c.energy >= gs.energy - 1e-6);
    for (std::size_t k = 1; k < c.pair.indices.size(); ++k)
      CHECK((c.pair.indices[k] - c.pair.indices[k - 1]) % 2 == 0);
  }
}

TEST_CASE("complete QLanczos with sampled overlaps converges to the exact one") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  const HamiltonianSpec h = fh_local(g, 1.0, 8.0);
  InitialRecipe rec;
  rec.kind = InitialKind::kPlaquetteProduct;
  rec.u = 32.0;
  const QiteTrace tr = exact_ite_trace(initial_state(rec, b), h, 0.2, 6);
  const double ref = qlanczos_complete(tr, h).energy;
  CompleteOptions opt;
  opt.shot_mode = true;
  opt.shots.shots = 1'000'000;
  CHECK(std::abs(qlanczos_complete(tr, h, opt).energy - ref) < 5e-2);
}

TEST_CASE("index thinning keeps the anchor and separates neighbours") {
  auto ov = [](int a, int b) { return std::exp(-0.01 * std::abs(a - b)); };
  const auto kept = qlanczos_indices({0, 2, 4, 6, 8, 10}, 4, ov, 0.95);
  CHECK(std::find(kept.begin(), kept.end(), 4) != kept.end());
  for (std::size_t k = 1; k < kept.size(); ++k) CHECK(ov(kept[k - 1], kept[k]) < 0.95);
}

TEST_CASE("extended targets change measured objects only") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  InitialRecipe rec;
  rec.kind = InitialKind::kPlaquetteProduct;
  QiteConfig cfg;
  cfg.n_steps = 3;
  cfg.dephase_time = 0.1;
  const StateVector psi = initial_state(rec, b);
  const QiteTrace local = varqite_run(psi, fh_local(g, 1.0, 8.0), cfg);
  HamiltonianSpec ext = fh_local(g, 1.0, 8.0);
  ext.v = 2.0;
  const QiteTrace extended = varqite_run(psi, ext, cfg);
  CHECK(local.generators == extended.generators);
  CHECK((local.steps[0].b - extended.steps[0].b).norm() > 1e-6);
}

TEST_CASE("shot-mode VarQITE counts settings and runs") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  InitialRecipe rec;
  rec.kind = InitialKind::kPlaquetteProduct;
  QiteConfig cfg;
  cfg.n_steps = 2;
  cfg.dephase_time = 0.1;
  cfg.shot_mode = true;
  cfg.shots.shots = 200;
  const QiteTrace tr = varqite_run(initial_state(rec, b), fh_local(g, 1.0, 8.0), cfg);
  for (const QiteStep& s : tr.steps) {
    CHECK(s.settings > 0);
    CHECK(s.runs == run_count(s.settings, 200, 10));
    CHECK(s.energy_stderr > 0.0);
  }
}

TEST_CASE("trace files round-trip") {
  const LatticeGeometry g(2, 2);
  auto b = make_basis(g, {2, 2});
  QiteConfig cfg;
  cfg.n_steps = 3;
  cfg.dephase_time = 0.1;
  InitialRecipe rec;
  rec.kind = InitialKind::kPlaquetteProduct;
  rec.u = 32.0;
  cfg.dtau = 0.05;
  const QiteTrace tr = varqite_run(initial_state(rec, b), fh_local(g, 1.0, 8.0), cfg);
  const auto dir = std::filesystem::temp_directory_path();
  const std::string js = (dir / "fhsim_trace.json").string(), csv = (dir / "fhsim_trace.csv").string();
  write_trace(tr, js, csv);
  const QiteTrace back = read_trace(js);
  REQUIRE(back.steps.size() == tr.steps.size());
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    CHECK(back.steps[k].energy == tr.steps[k].energy);
    CHECK(back.steps[k].c == tr.steps[k].c);
    CHECK((back.steps[k].g - tr.steps[k].g).norm() == 0.0);
  }
  CHECK(qlanczos_approx(back).energy == qlanczos_approx(tr).energy);
  std::filesystem::remove(js);
  std::filesystem::remove(csv);
}
