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

#include <algorithm>
#include <bit>
#include <cmath>

#include "fhsim/circuits.hpp"
#include "fhsim/errors.hpp"

namespace fhsim {

HamiltonianSpec CircuitLayer::spec(const double* p) const {
  HamiltonianSpec s = frozen;
  const int off = variable_time ? 1 : 0;
  for (std::size_t c = 0; c < generators.size(); ++c) s += generators[c].scaled(p[off + c]);
  return s;
}

double CircuitLayer::duration(const double* p) const { return variable_time ? std::abs(p[0]) : fixed_time; }

double CircuitLayer::physical_time(const double* p) const {
  if (variable_time) return std::abs(p[0]);
  double t = 0.0;
  for (std::size_t c = 0; c < generators.size(); ++c) {
    const double m = c < max_coupling.size() ? max_coupling[c] : 1.0;
    t = std::max(t, std::abs(p[c]) * fixed_time / m);
  }
  return t;
}

int VariationalCircuit::num_params() const {
  int n = 0;
  for (const auto& l : layers) n += l.num_params();
  return n;
}

std::vector<double> VariationalCircuit::layer_times(const std::vector<double>& params) const {
  if (static_cast<int>(params.size()) != num_params()) throw ParameterError("parameter vector has the wrong length");
  std::vector<double> out;
  double t = 0.0;
  const double* p = params.data();
  for (const auto& l : layers) {
    t += l.physical_time(p);
    out.push_back(t);
    p += l.num_params();
  }
  return out;
}

double VariationalCircuit::physical_time(const std::vector<double>& params) const {
  auto t = layer_times(params);
  return t.empty() ? 0.0 : t.back();
}

StateVector apply_circuit(const StateVector& state, const VariationalCircuit& circuit,
                          const std::vector<double>& params, const KrylovOptions& opt) {
  if (static_cast<int>(params.size()) != circuit.num_params())
    throw ParameterError("expected " + std::to_string(circuit.num_params()) + " circuit parameters, got " +
                         std::to_string(params.size()));
  StateVector psi = state;
  const double* p = params.data();
  for (const auto& layer : circuit.layers) {
    const double T = layer.duration(p);
    if (T > 0.0) propagate_real_inplace(psi, Operator(layer.spec(p), psi.basis_ptr()), T, opt);
    p += layer.num_params();
  }
  return psi;
}

namespace {

HamiltonianSpec staggered_unit(const LatticeGeometry& g) {
  HamiltonianSpec s(g);
  apply_mu_pattern(s, MuPattern::staggered(1.0));
  return s;
}

}  // namespace

VariationalCircuit dimer_circuit(const LatticeGeometry& g, const std::vector<Bond>& dimers, int depth) {
  VariationalCircuit c;
  for (int d = 0; d < depth; ++d) {
    CircuitLayer l;
    l.label = "H(1)";
    l.frozen = HamiltonianSpec(g);
    l.generators = {hopping_spec(g, dimers, 1.0), interaction_spec(g, 1.0), staggered_unit(g)};
    l.coordinate_names = {"Tt", "TU", "Tmu"};
    l.max_coupling = {kMaxTunneling, kMaxInteraction, kDefaultMu0};
    c.layers.push_back(std::move(l));
  }
  return c;
}

VariationalCircuit plaquette_circuit(const LatticeGeometry& g, const std::vector<Bond>& dimers,
                                     const std::vector<Bond>& rungs, int depth, double u) {
  VariationalCircuit c;
  for (int d = 0; d < depth; ++d) {
    CircuitLayer l;
    l.label = "H(2)";
    l.frozen = hopping_spec(g, dimers, 1.0) + interaction_spec(g, u);
    l.generators = {hopping_spec(g, rungs, 1.0)};
    l.coordinate_names = {"T", "t_tilde"};
    l.variable_time = true;
    c.layers.push_back(std::move(l));
  }
  return c;
}

VariationalCircuit fusion_circuit(const LatticeGeometry& g, int depth, double u) {
  VariationalCircuit c;
  for (int d = 0; d < depth; ++d) {
    CircuitLayer l;
    l.label = "H(3)";
    l.frozen = hopping_spec(g, g.bonds(BondClass::kIntraPlaquette), 1.0) + interaction_spec(g, u);
    l.generators = {hopping_spec(g, g.bonds(BondClass::kInterPlaquette), 1.0)};
    l.coordinate_names = {"T", "t_tilde"};
    l.variable_time = true;
    c.layers.push_back(std::move(l));
  }
  return c;
}

VariationalCircuit doped_link_circuit(const LatticeGeometry& g, const std::vector<Bond>& links,
                                      const std::vector<int>& empty_sites, int depth, double u) {
  VariationalCircuit c;
  std::vector<Bond> rest;
  for (const Bond& b : g.nn_bonds())
    if (std::find(links.begin(), links.end(), b) == links.end()) rest.push_back(b);
  HamiltonianSpec field(g);
  for (int e : empty_sites) field.add_mu(e, kEmptySiteMu, kEmptySiteMu);
  for (int d = 0; d < depth; ++d) {
    CircuitLayer l;
    l.label = "Hdelta";
    l.frozen = hopping_spec(g, rest, 1.0) + interaction_spec(g, u);
    l.generators = {hopping_spec(g, links, 1.0), field};
    l.coordinate_names = {"T", "t_tilde", "Delta"};
    l.variable_time = true;
    c.layers.push_back(std::move(l));
  }
  return c;
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::kNeel: return "neel";
    case InitialKind::kDopedStripe: return "doped-stripe";
    case InitialKind::kPlaquetteProduct: return "plaquette-product";
  }
  return "?";
}

InitialKind initial_kind_from_string(const std::string& s) {
  if (s == "neel") return InitialKind::kNeel;
  if (s == "doped-stripe") return InitialKind::kDopedStripe;
  if (s == "plaquette-product") return InitialKind::kPlaquetteProduct;
  throw ParameterError("unknown initial state '" + s + "'");
}

std::pair<Word, Word> neel_words(const LatticeGeometry& g, const std::vector<int>& empty_columns) {
  Word up = 0;
  Word dn = 0;
  for (int s = 0; s < g.num_sites(); ++s) {
    if (std::find(empty_columns.begin(), empty_columns.end(), g.x_of(s)) != empty_columns.end()) continue;
    if (site_parity(g, s) > 0)
      up |= Word{1} << s;
    else
      dn |= Word{1} << s;
  }
  return {up, dn};
}

SpinSector recipe_sector(const InitialRecipe& r, const LatticeGeometry& g) {
  auto [up, dn] = neel_words(g, r.kind == InitialKind::kDopedStripe ? r.empty_columns : std::vector<int>{});
  return {std::popcount(up), std::popcount(dn)};
}

StateVector tile_product(BasisPtr basis, const std::vector<Tile>& tiles) {
  StateVector out(basis);
  const int n = basis->num_sites();
  // Enumerate combinations of nonzero local configurations.
  std::vector<std::vector<std::size_t>> nz(tiles.size());
  for (std::size_t t = 0; t < tiles.size(); ++t)
    for (std::size_t k = 0; k < tiles[t].state.size(); ++k)
      if (tiles[t].state[k] != cplx{}) nz[t].push_back(k);
  std::vector<std::size_t> pos(tiles.size(), 0);
  for (const auto& v : nz)
    if (v.empty()) return out;
  std::vector<int> modes;
  while (true) {
    cplx amp = 1.0;
    modes.clear();
    Word up = 0;
    Word dn = 0;
    // Creator sequence: tile by tile, up modes then down modes in local order.
    for (std::size_t t = 0; t < tiles.size(); ++t) {
      const StateVector& ls = tiles[t].state;
      const std::size_t k = nz[t][pos[t]];
      amp *= ls[k];
      const Word lu = ls.basis().up_word(k);
      const Word ld = ls.basis().down_word(k);
      for (std::size_t q = 0; q < tiles[t].sites.size(); ++q)
        if (lu >> q & 1u) {
          modes.push_back(tiles[t].sites[q]);
          up |= Word{1} << tiles[t].sites[q];
        }
      for (std::size_t q = 0; q < tiles[t].sites.size(); ++q)
        if (ld >> q & 1u) {
          modes.push_back(n + tiles[t].sites[q]);
          dn |= Word{1} << tiles[t].sites[q];
        }
    }
    int inversions = 0;
    for (std::size_t a = 0; a < modes.size(); ++a)
      for (std::size_t b = a + 1; b < modes.size(); ++b)
        if (modes[a] > modes[b]) ++inversions;
    const std::size_t idx = basis->index(up, dn);
    if (idx == FockBasis::npos) throw ParameterError("tile product leaves the target sector");
    out[idx] += (inversions % 2 ? -1.0 : 1.0) * amp;
    std::size_t t = 0;
    while (t < tiles.size() && ++pos[t] == nz[t].size()) pos[t++] = 0;
    if (t == tiles.size()) break;
  }
  return out;
}

}  // namespace fhsim
