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

#include <bit>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "fhsim/circuits.hpp"
#include "fhsim/observables.hpp"
#include "fhsim/optimize.hpp"
#include "oracles.hpp"

using namespace fhsim;

namespace {

double sz_oracle(const StateVector& s, int i, int j) {
  const FockBasis& b = s.basis();
  double acc = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const Word mi = Word{1} << i, mj = Word{1} << j;
    const int si = std::popcount(b.up_word(k) & mi) - std::popcount(b.down_word(k) & mi);
    const int sj = std::popcount(b.up_word(k) & mj) - std::popcount(b.down_word(k) & mj);
    acc += std::norm(s[k]) * si * sj / 4.0;
  }
  return acc;
}

int argmax(const std::vector<double>& v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

}  // namespace

TEST_CASE("Neel state correlations form a checkerboard") {
  const LatticeGeometry g(2, 4);
  auto b = make_basis(g, {4, 4});
  const StateVector neel = initial_state({}, b);
  const Eigen::MatrixXd c = spin_correlations(neel);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) CHECK(c(i, j) == 0.25 * site_parity(g, i) * site_parity(g, j));
  const StructureFactor sf = structure_factor(neel);
  for (double v : sf.value) CHECK(std::abs(v) < 1e-12);  // product state: no connected part
  const auto dens = density_profile(neel);
  for (double d : dens) CHECK(d == 2.0);
}

TEST_CASE("half-filled ladder ground state has antiferromagnetic S(k)") {
  const LatticeGeometry g(2, 4);
  auto b = make_basis(g, {4, 4});
  const GroundState gs = exact_ground_state(fh_local(g, 1.0, 8.0), b);
  const StructureFactor sf = structure_factor(gs.subspace.front());
  REQUIRE(sf.length == 4);
  CHECK(sf.k[2] == doctest::Approx(std::numbers::pi));
  CHECK(argmax(sf.value) == 2);
}

TEST_CASE("doped ladder ground state shows a wavelength-3 stripe") {
  const LatticeGeometry g(2, 6);
  auto b = make_basis(g, {4, 4});
  const GroundState gs = exact_ground_state(fh_local(g, 1.0, 8.0), b);
  const auto prof = density_profile(gs.subspace.front());
  CHECK(dominant_wavelength(prof) == doctest::Approx(3.0));
  CHECK(prof[1] < prof[0]);
  CHECK(prof[4] < prof[5]);
}

TEST_CASE("property: correlations match a direct evaluation and obey the sum rules") {
  for (int trial = 0; trial < 25; ++trial) {
    const LatticeGeometry g(trial % 2 ? 2 : 1, 2 + trial % 3);
    const int ns = g.num_sites();
    auto b = make_basis(g, {(trial % ns) / 2 + 1, ns / 2});
    const StateVector s = oracle::random_state(b, 100 + trial);
    const Eigen::MatrixXd c = spin_correlations(s);
    for (int i = 0; i < ns; ++i)
      for (int j = 0; j < ns; ++j) CHECK(c(i, j) == doctest::Approx(sz_oracle(s, i, j)).epsilon(1e-12));

    const Eigen::VectorXd m = spin_polarization(s);
    const StructureFactor sf = structure_factor(s);
    const int lx = g.cols();
    double total = 0.0, var = 0.0;
    for (int q = 0; q < lx; ++q) {
      CHECK(sf.value[q] >= -1e-10);
      CHECK(std::abs(sf.value[q] - sf.value[(lx - q) % lx]) < 1e-10);
      total += sf.value[q];
    }
    for (int i = 0; i < ns; ++i) var += c(i, i) - m(i) * m(i);
    CHECK(std::abs(total / lx - var / g.rows()) < 1e-8);

    double n = 0.0;
    for (double d : density_profile(s)) n += d;
    CHECK(std::abs(n - (b->sector().n_up + b->sector().n_down)) < 1e-12);
  }
}

TEST_CASE("dominant wavelength") {
  CHECK(dominant_wavelength({1, 0, 1, 0, 1, 0}) == 2.0);
  CHECK(dominant_wavelength({1, 0, 0, 1, 0, 0}) == 3.0);
  CHECK(dominant_wavelength({2, 2, 2, 2}) == 0.0);
}
