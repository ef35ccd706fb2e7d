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
#include <cmath>

#include "fhsim/circuits.hpp"
#include "fhsim/errors.hpp"
#include "fhsim/optimize.hpp"

namespace fhsim {

StateVector initial_state(const InitialRecipe& recipe, BasisPtr basis) {
  const LatticeGeometry& g = basis->geometry();
  const SpinSector want = recipe_sector(recipe, g);
  switch (recipe.kind) {
    case InitialKind::kNeel:
    case InitialKind::kDopedStripe: {
      if (!(basis->sector() == want))
        throw ParameterError("initial state particle numbers do not match the basis sector");
      auto [up, dn] = neel_words(g, recipe.kind == InitialKind::kDopedStripe ? recipe.empty_columns
                                                                                : std::vector<int>{});
      return StateVector::product(basis, up, dn);
    }
    case InitialKind::kPlaquetteProduct: {
      if (g.rows() != 2 || g.cols() % 2 != 0)
        throw ParameterError("plaquette-product states need a 2 x L ladder with L even");
      if (!(basis->sector() == want))
        throw ParameterError("plaquette-product state is half filled; sector does not match");
      const LatticeGeometry pg(2, 2);
      auto pb = make_basis(pg, {2, 2});
      GroundState gs = exact_ground_state(fh_local(pg, 1.0, recipe.u), pb);
      std::vector<Tile> tiles;
      for (int p = 0; p < g.cols() / 2; ++p)
        tiles.push_back({{4 * p, 4 * p + 1, 4 * p + 2, 4 * p + 3}, gs.subspace.front()});
      StateVector s = tile_product(basis, tiles);
      s.normalize();
      return s;
    }
  }
  throw ParameterError("unknown initial state");
}

double ProgramStage::physical_time() const {
  return adiabatic ? schedule.total_time() : circuit.physical_time(params);
}

double ProtocolProgram::physical_time() const {
  double t = 0.0;
  for (const auto& s : stages) t += s.physical_time();
  return t;
}

StateVector run_stage(const StateVector& state, const ProgramStage& stage, const KrylovOptions& opt) {
  if (stage.adiabatic) return run_schedule(state, stage.schedule, stage.dt, opt);
  return apply_circuit(state, stage.circuit, stage.params, opt);
}

StateVector run_program(const ProtocolProgram& program, BasisPtr basis, const StageCallback& cb,
                        const KrylovOptions& opt) {
  StateVector psi = initial_state(program.initial, basis);
  if (cb) cb(0, psi);
  for (std::size_t k = 0; k < program.stages.size(); ++k) {
    psi = run_stage(psi, program.stages[k], opt);
    if (cb) cb(k + 1, psi);
  }
  return psi;
}

std::string to_string(HyvaMode m) {
  switch (m) {
    case HyvaMode::kFullyVariational: return "fully-variational";
    case HyvaMode::kHyva12: return "hyva-1-2";
    case HyvaMode::kHyva23: return "hyva-2-3";
  }
  return "?";
}

HyvaMode hyva_mode_from_string(const std::string& s) {
  if (s == "fully-variational") return HyvaMode::kFullyVariational;
  if (s == "hyva-1-2" || s == "hyva-1->2") return HyvaMode::kHyva12;
  if (s == "hyva-2-3" || s == "hyva-2->3") return HyvaMode::kHyva23;
  throw ParameterError("unknown HyVA mode '" + s + "'");
}

namespace {

ProgramStage circuit_stage(std::string name, VariationalCircuit c, std::vector<double> params) {
  if (static_cast<int>(params.size()) != c.num_params())
    throw ParameterError("stage '" + name + "' expects " + std::to_string(c.num_params()) + " parameters, got " +
                         std::to_string(params.size()));
  ProgramStage s;
  s.name = std::move(name);
  s.circuit = std::move(c);
  s.params = std::move(params);
  return s;
}

ProgramStage ramp_stage(std::string name, Schedule sched, double dt) {
  ProgramStage s;
  s.name = std::move(name);
  s.adiabatic = true;
  s.schedule = std::move(sched);
  s.dt = dt;
  return s;
}

int depth_of(const std::vector<double>& p, int per_layer, const char* what) {
  if (p.empty() || p.size() % per_layer != 0)
    throw ParameterError(std::string(what) + " parameters must come in groups of " + std::to_string(per_layer));
  return static_cast<int>(p.size()) / per_layer;
}

}  // namespace

ProtocolProgram build_hyva_program(const LatticeGeometry& g, const HyvaParameters& p) {
  if (g.rows() != 2 || g.cols() % 2 != 0) throw ParameterError("HyVA programs need a 2 x L ladder with L even");
  ProtocolProgram prog;
  prog.geometry = g;
  prog.initial = {InitialKind::kNeel, 0.0, {}};
  prog.sector = recipe_sector(prog.initial, g);
  const auto dimers = g.bonds(BondClass::kDimer);
  const auto rungs = g.bonds(BondClass::kRung);
  prog.stages.push_back(
      circuit_stage("dimers", dimer_circuit(g, dimers, depth_of(p.dimer, 3, "dimer")), p.dimer));
  if (p.mode == HyvaMode::kHyva12) {
    const HamiltonianSpec base = hopping_spec(g, dimers, 1.0) + interaction_spec(g, p.u);
    Schedule s{{{p.ramp_time_2, base, base + hopping_spec(g, rungs, 1.0)}}};
    prog.stages.push_back(ramp_stage("plaquettes", std::move(s), p.dt));
  } else {
    prog.stages.push_back(circuit_stage(
        "plaquettes", plaquette_circuit(g, dimers, rungs, depth_of(p.plaquette, 2, "plaquette"), p.u), p.plaquette));
  }
  if (p.mode == HyvaMode::kFullyVariational) {
    prog.stages.push_back(
        circuit_stage("fusion", fusion_circuit(g, depth_of(p.fusion, 2, "fusion"), p.u), p.fusion));
  } else {
    const HamiltonianSpec base = hopping_spec(g, g.bonds(BondClass::kIntraPlaquette), 1.0) + interaction_spec(g, p.u);
    Schedule s{{{p.ramp_time_3, base, base + hopping_spec(g, g.bonds(BondClass::kInterPlaquette), 1.0)}}};
    prog.stages.push_back(ramp_stage("fusion", std::move(s), p.dt));
  }
  return prog;
}

std::vector<int> stripe_empty_columns(int cols, int wavelength) {
  if (wavelength < 2 || cols < wavelength) throw ParameterError("stripe wavelength incompatible with ladder length");
  const int count = cols / wavelength;
  const int offset = (cols - 1 - (count - 1) * wavelength) / 2;
  std::vector<int> out;
  for (int k = 0; k < count; ++k) out.push_back(offset + k * wavelength);
  return out;
}

DopedLayout doped_layout(const LatticeGeometry& g, const std::vector<int>& empty_columns) {
  if (g.rows() != 2) throw ParameterError("doped stripes are defined on 2 x L ladders");
  DopedLayout d;
  d.empty_columns = empty_columns;
  std::vector<bool> empty(g.cols(), false);
  for (int c : empty_columns) {
    if (c < 0 || c >= g.cols()) throw ParameterError("empty column out of range");
    empty[c] = true;
    d.empty_sites.push_back(g.site(c, 0));
    d.empty_sites.push_back(g.site(c, 1));
  }
  int x = 0;
  while (x < g.cols()) {
    if (empty[x]) {
      ++x;
      continue;
    }
    int end = x;
    while (end + 1 < g.cols() && !empty[end + 1]) ++end;
    const int width = end - x + 1;
    if (width == 1) {
      d.dimers.push_back({g.site(x, 0), g.site(x, 1)});
    } else if (width == 2) {
      d.dimers.push_back({g.site(x, 0), g.site(x + 1, 0)});
      d.dimers.push_back({g.site(x, 1), g.site(x + 1, 1)});
      d.rungs.push_back({g.site(x, 0), g.site(x, 1)});
      d.rungs.push_back({g.site(x + 1, 0), g.site(x + 1, 1)});
    } else {
      throw ParameterError("occupied segments between empty rungs must be one or two columns wide");
    }
    x = end + 1;
  }
  for (const Bond& b : g.nn_bonds())
    if (empty[g.x_of(b.i)] != empty[g.x_of(b.j)]) d.links.push_back(b);
  return d;
}

ProtocolProgram build_doped_program(const LatticeGeometry& g, const std::vector<int>& empty_columns,
                                    const DopedParameters& p) {
  const DopedLayout lay = doped_layout(g, empty_columns);
  ProtocolProgram prog;
  prog.geometry = g;
  prog.initial = {InitialKind::kDopedStripe, 0.0, empty_columns};
  prog.sector = recipe_sector(prog.initial, g);
  prog.stages.push_back(
      circuit_stage("dimers", dimer_circuit(g, lay.dimers, depth_of(p.dimer, 3, "dimer")), p.dimer));
  if (!lay.rungs.empty())
    prog.stages.push_back(circuit_stage(
        "plaquettes", plaquette_circuit(g, lay.dimers, lay.rungs, depth_of(p.plaquette, 2, "plaquette"), p.u),
        p.plaquette));
  if (p.variational) {
    prog.stages.push_back(circuit_stage(
        "links", doped_link_circuit(g, lay.links, lay.empty_sites, depth_of(p.links, 3, "link"), p.u), p.links));
  } else {
    auto h = [&](double tt, double delta) {
      return doped_protocol_hamiltonian(g, 1.0, p.u, tt, delta, lay.links, lay.empty_sites);
    };
    Schedule s{{{p.ramp_time_1, h(0.0, 1.0), h(1.0, 1.0)}, {p.ramp_time_2, h(1.0, 1.0), h(1.0, 0.0)}}};
    prog.stages.push_back(ramp_stage("links", std::move(s), p.dt));
  }
  return prog;
}

Schedule dimer_adiabatic_schedule(const LatticeGeometry& g, const std::vector<Bond>& dimers, double total_time,
                                  double u, double mu0) {
  HamiltonianSpec field(g);
  apply_mu_pattern(field, MuPattern::staggered(mu0));
  const HamiltonianSpec fh = hopping_spec(g, dimers, 1.0) + interaction_spec(g, u);
  Schedule s;
  s.segments.push_back({total_time / 5.0, field, fh + field});
  s.segments.push_back({total_time * 4.0 / 5.0, fh + field, fh});
  return s;
}

}  // namespace fhsim
