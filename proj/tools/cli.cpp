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

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "fhsim/errors.hpp"
#include "fhsim/qite.hpp"

namespace fhsim::cli {
namespace {

namespace fs = std::filesystem;

struct Args {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  int threads = 0;
  bool exact = false;
  long shots = 0;

  std::string run_a, run_b, compare_out;

  std::string trace;
  std::string lanczos_out;
  double drop_ratio = 1e-10;
  double max_overlap = 0.999;

  std::string stage;
  int depth = 3;
  int rows = 2;
  int cols = 4;
  double u = 8.0;
  int wavelength = 0;
  int restarts = 5;
  int budget = 2000;
  std::string precompile_out;
  int base_depth = 3;
};

int cmd_run(const Args& a) {
  RunConfig c = load_config(a.config);
  if (a.seed_set) {
    c.seed = a.seed;
    c.shots.seed = a.seed;
    c.optimizer.seed = a.seed;
  }
  if (!a.out.empty()) c.output = a.out;
  if (a.threads > 0) c.threads = a.threads;
  if (a.exact) {
    c.shot_mode = true;
    c.shots.exact = true;
  }
  if (a.shots > 0) {
    c.shot_mode = true;
    c.shots.exact = false;
    c.shots.shots = a.shots;
  }
  try {
    execute(c);
  } catch (const NumericError& e) {
    throw NumericError(c.protocol + ": " + e.what());
  } catch (const ParameterError& e) {
    throw ConfigError(c.protocol + ": " + e.what());
  }
  std::printf("wrote %s\n", c.output.c_str());
  return 0;
}

Json summary_of(const std::string& dir) { return read_json_file((fs::path(dir) / "summary.json").string()); }

int cmd_compare(const Args& a) {
  const Json x = summary_of(a.run_a), y = summary_of(a.run_b);
  if (x.at("target") != y.at("target")) throw ConfigError("runs have different target Hamiltonians");
  struct Metric {
    const char* key;
    bool lower_is_better;
  };
  const Metric metrics[] = {{"energy", true}, {"residual", true}, {"infidelity", true}, {"physical_time", true},
                            {"runs", true}};
  std::ostringstream table;
  table.precision(10);
  table << "metric,a,b,delta,better\n";
  for (const Metric& m : metrics) {
    if (x.at(m.key).is_null() || y.at(m.key).is_null()) {
      table << m.key << ',' << (x.at(m.key).is_null() ? "n/a" : x.at(m.key).dump()) << ','
            << (y.at(m.key).is_null() ? "n/a" : y.at(m.key).dump()) << ",n/a,n/a\n";
      continue;
    }
    const double va = x.at(m.key).get<double>(), vb = y.at(m.key).get<double>();
    const char* better = va == vb ? "tie" : ((va < vb) == m.lower_is_better ? "a" : "b");
    table << m.key << ',' << va << ',' << vb << ',' << vb - va << ',' << better << '\n';
  }
  std::cout << "a: " << a.run_a << " (" << x.at("protocol").get<std::string>() << ")\n"
            << "b: " << a.run_b << " (" << y.at("protocol").get<std::string>() << ")\n"
            << table.str();
  if (!a.compare_out.empty()) std::ofstream(a.compare_out) << table.str();
  return 0;
}

int cmd_qlanczos(const Args& a) {
  const QiteTrace tr = read_trace(a.trace);
  QLanczosResult r;
  try {
    r = qlanczos_approx(tr, {a.drop_ratio, a.max_overlap});
  } catch (const NumericError& e) {
    throw NumericError(std::string("qlanczos: ") + e.what());
  }
  std::printf("%.12f\n", r.energy);
  if (!a.lanczos_out.empty()) {
    fs::create_directories(a.lanczos_out);
    std::ofstream f(fs::path(a.lanczos_out) / "qlanczos.csv");
    f.precision(17);
    f << "variant,energy,kept,dropped\napprox," << r.energy << ',' << r.pair.indices.size() << ',' << r.pair.dropped
      << '\n';
  }
  return 0;
}

int cmd_precompile(const Args& a) {
  RunConfig c;
  c.rows = a.rows;
  c.cols = a.cols;
  c.u = a.u;
  c.hyva.depth = a.depth;
  c.hyva.optimize = true;
  c.optimizer.restarts = a.restarts;
  c.optimizer.budget = a.budget;
  c.optimizer.seed = a.seed_set ? a.seed : 1;
  if (a.stage == "links") {
    c.hyva.wavelength = a.wavelength > 0 ? a.wavelength : 3;
    c.hyva.link_depth = a.depth;
  }
  Precompiled p;
  p.stage = a.stage;
  p.u = a.u;
  p.depth = a.depth;
  const LatticeGeometry dg(1, 2), pg(2, 2);
  auto load = [&](const std::string& s, int r, int cl) { return load_precompiled(s, r, cl, a.u, a.base_depth).params; };
  OptimizationResult res;
  if (a.stage == "dimer") {
    p.rows = 1;
    p.cols = 2;
    res = minimize_energy(dimer_circuit(dg, dg.bonds(BondClass::kDimer), a.depth),
                          initial_state({}, make_basis(dg, {1, 1})), fh_local(dg, 1.0, a.u), c.optimizer);
  } else if (a.stage == "plaquette") {
    p.rows = 2;
    p.cols = 2;
    auto b = make_basis(pg, {2, 2});
    const StateVector s =
        apply_circuit(initial_state({}, b), dimer_circuit(pg, pg.bonds(BondClass::kDimer), a.base_depth), load("dimer", 1, 2));
    res = minimize_energy(plaquette_circuit(pg, pg.bonds(BondClass::kDimer), pg.bonds(BondClass::kRung), a.depth, a.u),
                          s, fh_local(pg, 1.0, a.u), c.optimizer);
  } else if (a.stage == "fusion" || a.stage == "links") {
    p.rows = a.rows;
    p.cols = a.cols;
    c.hyva.params["dimer"] = load("dimer", 1, 2);
    c.hyva.params["plaquette"] = load("plaquette", 2, 2);
    const LatticeGeometry g(a.rows, a.cols);
    HyvaParameters hp;
    hp.u = a.u;
    hp.dimer = c.hyva.params["dimer"];
    hp.plaquette = c.hyva.params["plaquette"];
    if (a.stage == "fusion") {
      hp.fusion.assign(2 * a.depth, 0.0);
      const ProtocolProgram pre = build_hyva_program(g, hp);
      auto b = make_basis(g, pre.sector);
      const StateVector s = run_stage(run_stage(initial_state(pre.initial, b), pre.stages[0]), pre.stages[1]);
      res = minimize_energy(fusion_circuit(g, a.depth, a.u), s, fh_local(g, 1.0, a.u), c.optimizer);
    } else {
      DopedParameters dp;
      dp.u = a.u;
      dp.dimer = hp.dimer;
      dp.plaquette = hp.plaquette;
      dp.links.assign(3 * a.depth, 0.0);
      const auto cols = stripe_empty_columns(a.cols, c.hyva.wavelength);
      const ProtocolProgram pre = build_doped_program(g, cols, dp);
      auto b = make_basis(g, pre.sector);
      StateVector s = initial_state(pre.initial, b);
      for (std::size_t k = 0; k + 1 < pre.stages.size(); ++k) s = run_stage(s, pre.stages[k]);
      const DopedLayout lay = doped_layout(g, cols);
      res = minimize_energy(doped_link_circuit(g, lay.links, lay.empty_sites, a.depth, a.u), s, fh_local(g, 1.0, a.u),
                            c.optimizer);
    }
  } else {
    throw ConfigError("unknown stage '" + a.stage + "'");
  }
  p.params = res.params;
  p.infidelity = res.report.infidelity;
  p.residual = res.report.residual;
  const std::string path =
      a.precompile_out.empty() ? precompiled_path(p.stage, p.rows, p.cols, p.u, p.depth) : a.precompile_out;
  write_json_file(to_json(p), path);
  std::printf("%s: I=%.3e eps=%.3e -> %s\n", p.stage.c_str(), p.infidelity, p.residual, path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fermi-Hubbard quantum-simulator protocols"};
  app.set_version_flag("--version", FHSIM_VERSION);
  app.require_subcommand(1);
  Args a;

  auto* run = app.add_subcommand("run", "execute a configured protocol");
  run->add_option("--config", a.config, "run configuration (YAML or JSON)")->required();
  run->add_option("--seed", a.seed, "override the seed")->each([&](const std::string&) { a.seed_set = true; });
  run->add_option("--out", a.out, "output directory");
  run->add_option("--threads", a.threads, "OpenMP threads");
  auto* ex = run->add_flag("--exact", a.exact, "evaluate measurement decompositions without sampling");
  run->add_option("--shots", a.shots, "snapshots per measured object")->excludes(ex);

  auto* cmp = app.add_subcommand("compare", "compare two run directories");
  cmp->add_option("run_a", a.run_a)->required();
  cmp->add_option("run_b", a.run_b)->required();
  cmp->add_option("--out", a.compare_out, "write the table as CSV");

  auto* ql = app.add_subcommand("qlanczos", "post-process a VarQITE trace");
  ql->add_option("--from", a.trace, "trace JSON")->required();
  ql->add_option("--out", a.lanczos_out, "output directory");
  ql->add_option("--drop-ratio", a.drop_ratio);
  ql->add_option("--max-overlap", a.max_overlap);

  auto* pre = app.add_subcommand("precompile", "optimize and cache one variational stage");
  pre->add_option("--stage", a.stage, "dimer, plaquette, fusion or links")->required();
  pre->add_option("--depth", a.depth);
  pre->add_option("--base-depth", a.base_depth, "depth of the cached stages this one starts from");
  pre->add_option("--rows", a.rows);
  pre->add_option("--cols", a.cols);
  pre->add_option("--u", a.u);
  pre->add_option("--wavelength", a.wavelength);
  pre->add_option("--restarts", a.restarts);
  pre->add_option("--budget", a.budget);
  pre->add_option("--seed", a.seed)->each([&](const std::string&) { a.seed_set = true; });
  pre->add_option("--out", a.precompile_out, "output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }
  try {
    if (*run) return cmd_run(a);
    if (*cmp) return cmd_compare(a);
    if (*ql) return cmd_qlanczos(a);
    if (*pre) return cmd_precompile(a);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "fhsim: config error: %s\n", e.what());
    return kExitConfig;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "fhsim: numeric error in %s\n", e.what());
    return kExitNumeric;
  } catch (const Error& e) {
    std::fprintf(stderr, "fhsim: %s\n", e.what());
    return kExitConfig;
  } catch (const Json::exception& e) {
    std::fprintf(stderr, "fhsim: malformed run data: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}

}  // namespace fhsim::cli
