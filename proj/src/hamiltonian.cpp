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

#include "fhsim/hamiltonian.hpp"

#include <algorithm>
#include <string>

#include "fhsim/errors.hpp"

namespace fhsim {

HamiltonianSpec& HamiltonianSpec::add_hop(Bond b, double t, SpinMask spins) {
  tunnelings.push_back({b, t, spins});
  return *this;
}

HamiltonianSpec& HamiltonianSpec::add_nnn(Bond b, double tp, SpinMask spins) {
  nnn.push_back({b, tp, spins});
  return *this;
}

HamiltonianSpec& HamiltonianSpec::add_mu(int site, double up, double down) {
  mu_up.at(site) += up;
  mu_down.at(site) += down;
  return *this;
}

void HamiltonianSpec::validate() const {
  const int n = geometry.num_sites();
  if (static_cast<int>(mu_up.size()) != n || static_cast<int>(mu_down.size()) != n)
    throw ParameterError("chemical potential arrays must have one entry per site");
  for (const auto& h : tunnelings)
    if (!geometry.is_nn(h.bond))
      throw ParameterError("bond (" + std::to_string(h.bond.i) + "," + std::to_string(h.bond.j) +
                           ") is not a nearest-neighbour bond");
  for (const auto& h : nnn)
    if (!geometry.is_nnn(h.bond))
      throw ParameterError("bond (" + std::to_string(h.bond.i) + "," + std::to_string(h.bond.j) +
                           ") is not a next-nearest-neighbour bond");
}

bool HamiltonianSpec::has_offdiagonal() const {
  auto nz = [](const Tunneling& h) { return h.t != 0.0; };
  return std::any_of(tunnelings.begin(), tunnelings.end(), nz) || std::any_of(nnn.begin(), nnn.end(), nz);
}

std::size_t HamiltonianSpec::hop_term_count() const {
  std::size_t c = 0;
  for (const auto* list : {&tunnelings, &nnn})
    for (const auto& h : *list) c += h.spins == SpinMask::kBoth ? 2 : 1;
  return c;
}

HamiltonianSpec HamiltonianSpec::scaled(double a) const {
  HamiltonianSpec s = *this;
  for (auto& h : s.tunnelings) h.t *= a;
  for (auto& h : s.nnn) h.t *= a;
  s.u *= a;
  s.v *= a;
  for (double& m : s.mu_up) m *= a;
  for (double& m : s.mu_down) m *= a;
  return s;
}

HamiltonianSpec& HamiltonianSpec::operator+=(const HamiltonianSpec& o) {
  if (!(geometry == o.geometry)) throw IncompatibleError("cannot add specs on different geometries");
  tunnelings.insert(tunnelings.end(), o.tunnelings.begin(), o.tunnelings.end());
  nnn.insert(nnn.end(), o.nnn.begin(), o.nnn.end());
  u += o.u;
  v += o.v;
  for (std::size_t i = 0; i < mu_up.size(); ++i) {
    mu_up[i] += o.mu_up[i];
    mu_down[i] += o.mu_down[i];
  }
  return *this;
}

HamiltonianSpec operator+(HamiltonianSpec a, const HamiltonianSpec& b) {
  a += b;
  return a;
}

int site_parity(const LatticeGeometry& g, int s) { return ((g.x_of(s) + g.y_of(s)) % 2 == 0) ? 1 : -1; }

void apply_mu_pattern(HamiltonianSpec& spec, const MuPattern& p) {
  const int n = spec.geometry.num_sites();
  switch (p.kind) {
    case MuPattern::Kind::kZero:
      break;
    case MuPattern::Kind::kUniform:
      for (int i = 0; i < n; ++i) spec.add_mu(i, p.value, p.value);
      break;
    case MuPattern::Kind::kStaggered:
      for (int i = 0; i < n; ++i) {
        const double s = site_parity(spec.geometry, i);
        spec.add_mu(i, -p.value * s, p.value * s);
      }
      break;
    case MuPattern::Kind::kPerSite:
      if (static_cast<int>(p.up.size()) != n || static_cast<int>(p.down.size()) != n)
        throw ParameterError("per-site chemical potential needs one value per site and spin");
      for (int i = 0; i < n; ++i) spec.add_mu(i, p.up[i], p.down[i]);
      break;
  }
}

HamiltonianSpec hopping_spec(const LatticeGeometry& g, const std::vector<Bond>& bonds, double t) {
  HamiltonianSpec s(g);
  for (const Bond& b : bonds) s.add_hop(b, t);
  return s;
}

HamiltonianSpec interaction_spec(const LatticeGeometry& g, double u) {
  HamiltonianSpec s(g);
  s.u = u;
  return s;
}

HamiltonianSpec fh_local(const LatticeGeometry& g, double t, double u, const MuPattern& mu) {
  HamiltonianSpec s = hopping_spec(g, g.nn_bonds(), t);
  s.u = u;
  apply_mu_pattern(s, mu);
  return s;
}

HamiltonianSpec resource_step_hamiltonian(int k, const LatticeGeometry& g, const ResourceCouplings& c) {
  if (k < 0 || k > 3) throw ParameterError("resource step must be 0, 1, 2 or 3");
  if (g.rows() > 2) throw ParameterError("resource step Hamiltonians are defined on 1 x L or 2 x L ladders");
  if (k >= 2 && g.cols() % 2 != 0) throw ParameterError("plaquette steps need an even ladder length");
  HamiltonianSpec s(g);
  switch (k) {
    case 0:
      apply_mu_pattern(s, MuPattern::staggered(c.mu));
      break;
    case 1:
      for (const Bond& b : g.bonds(BondClass::kDimer)) s.add_hop(b, c.t);
      s.u = c.u;
      apply_mu_pattern(s, MuPattern::staggered(c.mu));
      break;
    case 2:
      for (const Bond& b : g.bonds(BondClass::kDimer)) s.add_hop(b, c.t);
      for (const Bond& b : g.bonds(BondClass::kRung)) s.add_hop(b, c.t_tilde);
      s.u = c.u;
      break;
    case 3:
      for (const Bond& b : g.bonds(BondClass::kIntraPlaquette)) s.add_hop(b, c.t);
      for (const Bond& b : g.bonds(BondClass::kInterPlaquette)) s.add_hop(b, c.t_tilde);
      s.u = c.u;
      break;
  }
  return s;
}

HamiltonianSpec doped_protocol_hamiltonian(const LatticeGeometry& g, double t, double u, double t_tilde,
                                           double delta, const std::vector<Bond>& links,
                                           const std::vector<int>& empty_sites) {
  auto same = [](const Bond& a, const Bond& b) { return (a.i == b.i && a.j == b.j) || (a.i == b.j && a.j == b.i); };
  for (const Bond& l : links)
    if (!g.is_nn(l)) throw ParameterError("doping link is not a nearest-neighbour bond");
  HamiltonianSpec s(g);
  for (const Bond& b : g.nn_bonds()) {
    const bool link = std::any_of(links.begin(), links.end(), [&](const Bond& l) { return same(l, b); });
    s.add_hop(b, link ? t_tilde : t);
  }
  s.u = u;
  for (int e : empty_sites) {
    if (e < 0 || e >= g.num_sites()) throw ParameterError("empty site index out of range");
    s.add_mu(e, delta * kEmptySiteMu * t, delta * kEmptySiteMu * t);
  }
  return s;
}

HamiltonianSpec fswap_hamiltonian(const LatticeGeometry& g, Bond b, double t) {
  HamiltonianSpec s(g);
  s.add_hop(b, t);
  s.add_mu(b.i, -3.0 * t, -3.0 * t);
  s.add_mu(b.j, -3.0 * t, -3.0 * t);
  return s;
}

HamiltonianSpec ft_hamiltonian(const LatticeGeometry& g, Bond b, double theta, double mu1, double mu2,
                               SpinMask spins) {
  HamiltonianSpec s(g);
  s.add_hop(b, theta, spins);
  const double up = has_spin(spins, Spin::kUp) ? 1.0 : 0.0;
  const double dn = has_spin(spins, Spin::kDown) ? 1.0 : 0.0;
  s.add_mu(b.i, -mu1 * up, -mu1 * dn);
  s.add_mu(b.j, -mu2 * up, -mu2 * dn);
  return s;
}

HamiltonianSpec nnn_spec(const LatticeGeometry& g, BondClass orientation, double tp) {
  HamiltonianSpec s(g);
  for (const Bond& b : g.bonds(orientation)) s.add_nnn(b, tp);
  return s;
}

HamiltonianSpec v_spec(const LatticeGeometry& g, double v) {
  HamiltonianSpec s(g);
  s.v = v;
  return s;
}

}  // namespace fhsim
