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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>

#include "cli.hpp"
#include "fhsim/errors.hpp"
#include "fhsim/observables.hpp"
#include "fhsim/qite.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fhsim::cli {
namespace {

namespace fs = std::filesystem;

class RunDir {
 public:
  explicit RunDir(const std::string& path) : root_(path) { fs::create_directories(root_); }

  std::string path(const std::string& name) {
    outputs_.push_back(name);
    return (root_ / name).string();
  }

  std::ofstream csv(const std::string& name, const std::string& header) {
    std::ofstream f(path(name));
    if (!f) throw ParameterError("cannot write " + (root_ / name).string());
    f.precision(17);
    f << header << '\n';
    return f;
  }

  const std::vector<std::string>& outputs() const { return outputs_; }

 private:
  fs::path root_;
  std::vector<std::string> outputs_;
};

SpinSector default_sector(const RunConfig& c) {
  if (c.sector) return *c.sector;
  const int n = c.rows * c.cols;
  return {(n + 1) / 2, n / 2};
}

struct Summary {
  double energy = 0.0;
  double residual = 0.0;
  std::optional<double> infidelity;  // unset when no prepared state is compared
  double physical_time = 0.0;
  long runs = 0;
};

Precompiled cached(const std::string& stage, int rows, int cols, double u, int depth) {
  try {
    return load_precompiled(stage, rows, cols, u, depth);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(e.what()) + " (generate it with 'fhsim precompile --stage " + stage + "')");
  }
}

// Parameters for one variational stage: inline, re-optimized, or cached.
std::vector<double> stage_params(const RunConfig& c, const std::string& stage, int rows, int cols, int depth,
                                 const std::function<OptimizationResult()>& optimize) {
  if (auto it = c.hyva.params.find(stage); it != c.hyva.params.end()) return it->second;
  if (c.hyva.optimize) return optimize().params;
  return cached(stage, rows, cols, c.u, depth).params;
}

struct Prepared {
  ProtocolProgram program;
  BasisPtr basis;
};

Prepared build_program(const RunConfig& c) {
  const LatticeGeometry g = geometry(c);
  const int d = c.hyva.depth;
  const HamiltonianSpec target = target_spec(c);
  const LatticeGeometry dg(1, 2), pg(2, 2);
  auto dimer = [&] {
    return stage_params(c, "dimer", 1, 2, d, [&] {
      return minimize_energy(dimer_circuit(dg, dg.bonds(BondClass::kDimer), d), initial_state({}, make_basis(dg, {1, 1})),
                             fh_local(dg, c.t, c.u), c.optimizer);
    });
  };
  auto plaquette = [&](const std::vector<double>& dp) {
    return stage_params(c, "plaquette", 2, 2, d, [&] {
      auto b = make_basis(pg, {2, 2});
      const StateVector s = apply_circuit(initial_state({}, b), dimer_circuit(pg, pg.bonds(BondClass::kDimer), d), dp);
      return minimize_energy(plaquette_circuit(pg, pg.bonds(BondClass::kDimer), pg.bonds(BondClass::kRung), d, c.u), s,
                             fh_local(pg, c.t, c.u), c.optimizer);
    });
  };

  Prepared out;
  const bool doped = c.hyva.wavelength > 0 || !c.hyva.empty_columns.empty();
  if (doped) {
    DopedParameters p;
    p.u = c.u;
    p.dt = c.hyva.dt;
    p.dimer = dimer();
    p.plaquette = plaquette(p.dimer);
    p.variational = c.hyva.links_variational;
    p.ramp_time_1 = c.hyva.link_ramp_1;
    p.ramp_time_2 = c.hyva.link_ramp_2;
    const std::vector<int> cols =
        c.hyva.empty_columns.empty() ? stripe_empty_columns(c.cols, c.hyva.wavelength) : c.hyva.empty_columns;
    if (p.variational) {
      p.links.assign(3 * c.hyva.link_depth, 0.0);
      const ProtocolProgram pre = build_doped_program(g, cols, p);
      out.basis = make_basis(g, pre.sector);
      p.links = stage_params(c, "links", c.rows, c.cols, c.hyva.link_depth, [&] {
        StateVector s = initial_state(pre.initial, out.basis);
        for (std::size_t k = 0; k + 1 < pre.stages.size(); ++k) s = run_stage(s, pre.stages[k]);
        const DopedLayout lay = doped_layout(g, cols);
        return minimize_energy(doped_link_circuit(g, lay.links, lay.empty_sites, c.hyva.link_depth, c.u), s, target,
                               c.optimizer);
      });
    }
    out.program = build_doped_program(g, cols, p);
  } else {
    HyvaParameters p;
    p.mode = hyva_mode_from_string(c.hyva.mode);
    p.u = c.u;
    p.dt = c.hyva.dt;
    p.ramp_time_2 = c.hyva.ramp_time_2;
    p.ramp_time_3 = c.hyva.ramp_time_3;
    p.dimer = dimer();
    if (p.mode != HyvaMode::kHyva12) p.plaquette = plaquette(p.dimer);
    if (p.mode == HyvaMode::kFullyVariational) {
      p.fusion.assign(2 * d, 0.0);
      const ProtocolProgram pre = build_hyva_program(g, p);
      out.basis = make_basis(g, pre.sector);
      p.fusion = stage_params(c, "fusion", c.rows, c.cols, d, [&] {
        const StateVector s = run_stage(run_stage(initial_state(pre.initial, out.basis), pre.stages[0]), pre.stages[1]);
        return minimize_energy(fusion_circuit(g, d, c.u), s, target, c.optimizer);
      });
    }
    out.program = build_hyva_program(g, p);
  }
  if (c.sector && !(*c.sector == out.program.sector))
    throw ConfigError("sector does not match the preparation program's filling");
  if (!out.basis) out.basis = make_basis(g, out.program.sector);
  return out;
}

Summary run_exact_gs(const RunConfig& c, RunDir& dir) {
  const HamiltonianSpec h = target_spec(c);
  auto b = make_basis(geometry(c), default_sector(c));
  const GroundState gs = exact_ground_state(h, b);
  auto f = dir.csv("energy.csv", "energy,energy_per_site,gap,degeneracy");
  f << gs.energy << ',' << gs.energy / b->num_sites() << ',' << gs.gap << ',' << gs.subspace.size() << '\n';
  write_observables(observe(gs.subspace.front(), h), dir.path("observables"));
  return {gs.energy, 0.0, 0.0, 0.0, 0};
}

Summary run_hyva(const RunConfig& c, RunDir& dir) {
  const HamiltonianSpec target = target_spec(c);
  const Prepared prep = build_program(c);
  const Operator h(target, prep.basis);
  const GroundState gs = exact_ground_state(h);
  write_json_file(to_json(prep.program), dir.path("program.json"));
  auto f = dir.csv("merit.csv", "stage,name,physical_time,energy,residual,infidelity");
  double time = 0.0;
  MeritReport last;
  StateVector final_state;
  run_program(prep.program, prep.basis, [&](std::size_t k, const StateVector& s) {
    if (k > 0) time += prep.program.stages[k - 1].physical_time();
    last = merit(s, h, gs, time);
    f << k << ',' << (k == 0 ? std::string("initial") : prep.program.stages[k - 1].name) << ',' << time << ','
      << last.energy << ',' << last.residual << ',' << last.infidelity << '\n';
    final_state = s;
  });
  write_observables(observe(final_state, target), dir.path("observables"));
  if (c.hyva.save_state) write_state(final_state, dir.path("state.bin"));
  return {last.energy, last.residual, last.infidelity, time, 0};
}

Summary run_qite(const RunConfig& c, RunDir& dir, bool lanczos) {
  const HamiltonianSpec target = target_spec(c);
  const LatticeGeometry g = geometry(c);
  InitialRecipe rec;
  rec.kind = c.qite.initial.kind;
  rec.u = c.qite.initial.u;
  auto b = make_basis(g, c.sector ? *c.sector : recipe_sector(rec, g));
  const StateVector psi = initial_state(rec, b);
  const GroundState gs = exact_ground_state(target, b);
  const int n = g.num_sites();

  QiteConfig q;
  q.dtau = c.qite.dtau;
  q.n_steps = c.qite.steps;
  q.dephase_time = c.qite.dephase_time;
  q.shot_mode = c.shot_mode;
  q.shots = c.shots;
  q.store_states = lanczos && c.qite.complete;
  const QiteTrace tr = varqite_run(psi, target, q);
  write_trace(tr, dir.path("trace.json"), dir.path("trace.csv"));

  const auto ite = exact_ite_reference(psi, target, q.dtau, q.n_steps);
  auto f = dir.csv("merit.csv", "step,tau,energy,energy_stderr,residual,ite_energy,ite_residual,settings,runs");
  Summary s{1e300, 0.0, std::nullopt, tr.steps.back().physical_time, 0};
  for (std::size_t k = 0; k < tr.steps.size(); ++k) {
    const QiteStep& st = tr.steps[k];
    f << k << ',' << st.tau << ',' << st.energy << ',' << st.energy_stderr << ','
      << std::abs(st.energy - gs.energy) / n << ',' << ite[k] << ',' << std::abs(ite[k] - gs.energy) / n << ','
      << st.settings << ',' << st.runs << '\n';
    s.energy = std::min(s.energy, st.energy);
    s.runs += st.runs;
  }
  if (lanczos) {
    const QLanczosOptions lo{c.qite.drop_ratio, c.qite.max_overlap};
    auto l = dir.csv("qlanczos.csv", "variant,energy,residual,kept,dropped");
    const QLanczosResult a = qlanczos_approx(tr, lo);
    l << "approx," << a.energy << ',' << std::abs(a.energy - gs.energy) / n << ',' << a.pair.indices.size() << ','
      << a.pair.dropped << '\n';
    s.energy = std::min(s.energy, a.energy);
    if (c.qite.complete) {
      CompleteOptions co{lo, c.shot_mode, c.shots};
      const QLanczosResult r = qlanczos_complete(tr, target, co);
      l << "complete," << r.energy << ',' << std::abs(r.energy - gs.energy) / n << ',' << r.pair.indices.size()
        << ',' << r.pair.dropped << '\n';
      s.energy = r.energy;
    }
  }
  s.residual = std::abs(s.energy - gs.energy) / n;
  return s;
}

Summary run_trotter(const RunConfig& c, RunDir& dir) {
  if (c.tp == 0.0) throw ConfigError("trotter-nnn needs a nonzero couplings.tp");
  RunConfig fh = c;
  fh.tp = 0.0;
  const HamiltonianSpec fh_spec = target_spec(fh), target = target_spec(c);
  const Prepared prep = build_program(fh);
  const StateVector start = run_program(prep.program, prep.basis);
  const Operator h(target, prep.basis), h0(fh_spec, prep.basis);
  const GroundState gs = exact_ground_state(h), gs0 = exact_ground_state(h0);
  const TrotterResult tr = adiabatic_trotter_nnn(start, fh_spec, c.tp, c.trotter.t_trotter, c.trotter.dt);
  const double t0 = prep.program.physical_time();
  auto f = dir.csv("merit.csv", "point,physical_time,pulse_time,energy,residual,infidelity,fh_infidelity");
  const MeritReport a = merit(start, h, gs, t0), z = merit(tr.state, h, gs, t0 + tr.nominal_physical_time);
  f << "start," << t0 << ',' << 0.0 << ',' << a.energy << ',' << a.residual << ',' << a.infidelity << ','
    << infidelity(start, gs0) << '\n';
  f << "final," << z.physical_time << ',' << tr.pulse_time << ',' << z.energy << ',' << z.residual << ','
    << z.infidelity << ',' << infidelity(tr.state, gs0) << '\n';
  write_observables(observe(tr.state, target), dir.path("observables"));
  return {z.energy, z.residual, z.infidelity, z.physical_time, 0};
}

Observable observable_from(const std::string& s) {
  for (Observable o : {Observable::kHt, Observable::kHt2, Observable::kHtHuRe, Observable::kHtHuIm, Observable::kHu,
                       Observable::kHu2, Observable::kHn})
    if (to_string(o) == s) return o;
  throw ConfigError("unknown observable '" + s + "'");
}

Summary run_measure(const RunConfig& c, RunDir& dir) {
  const LatticeGeometry g = geometry(c);
  InitialRecipe rec;
  rec.kind = c.measure.initial.kind;
  rec.u = c.measure.initial.u;
  auto b = make_basis(g, c.sector ? *c.sector : recipe_sector(rec, g));
  const StateVector psi = initial_state(rec, b);
  ShotConfig exact = c.shots;
  exact.exact = true;
  std::vector<EstimateResult> rows, ref;
  Summary s;
  std::uint64_t stream = 0;
  for (const std::string& name : c.measure.observables) {
    const auto settings = plan_settings(observable_from(name), g);
    ref.push_back(sample_and_estimate(psi, settings, exact, stream, name));
    rows.push_back(sample_and_estimate(psi, settings, c.shots, stream, name));
    s.runs += rows.back().runs;
    ++stream;
  }
  write_estimates_csv(dir.path("estimates.csv"), rows);
  write_estimates_csv(dir.path("exact_values.csv"), ref);
  const HamiltonianSpec target = target_spec(c);
  s.energy = expectation(psi, target);
  s.residual = std::abs(s.energy - exact_ground_state(target, b).energy) / g.num_sites();
  return s;
}

}  // namespace

void execute(const RunConfig& c) {
#ifdef _OPENMP
  if (c.threads > 0) omp_set_num_threads(c.threads);
#endif
  const auto t0 = std::chrono::steady_clock::now();
  RunDir dir(c.output);
  Summary s;
  if (c.protocol == "exact-gs") s = run_exact_gs(c, dir);
  if (c.protocol == "hyva") s = run_hyva(c, dir);
  if (c.protocol == "varqite") s = run_qite(c, dir, false);
  if (c.protocol == "qlanczos") s = run_qite(c, dir, true);
  if (c.protocol == "trotter-nnn") s = run_trotter(c, dir);
  if (c.protocol == "measure") s = run_measure(c, dir);

  const Json summary{{"protocol", c.protocol},          {"target", fhsim::to_json(target_spec(c))},
                     {"energy", s.energy},              {"residual", s.residual},
                     {"infidelity", s.infidelity ? Json(*s.infidelity) : Json(nullptr)},      {"physical_time", s.physical_time},
                     {"runs", s.runs}};
  write_json_file(summary, dir.path("summary.json"));
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const Json manifest{{"version", FHSIM_VERSION},  {"config", to_json(c)},     {"seed", c.seed},
                      {"outputs", dir.outputs()}, {"wall_time_s", wall}};
  write_json_file(manifest, (fs::path(c.output) / "manifest.json").string());
}

}  // namespace fhsim::cli
