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

#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "cli.hpp"
#include "fhsim/errors.hpp"

namespace fhsim::cli {
namespace {

int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : -1; }

// A mapping whose keys are consumed one by one; finish() rejects the rest.
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError(where() + " must be a mapping", line_of(node_));
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_ && node_.IsMap() && node_[key];
  }

  template <class T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    const YAML::Node n = node_[key];
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(key) + ": invalid value", line_of(n));
    }
  }

  template <class T>
  void positive(const std::string& key, T& out) {
    read(key, out);
    if (has(key) && !(out > 0)) throw ConfigError(where(key) + " must be positive", line_of(node_[key]));
  }

  template <class T>
  T required(const std::string& key) {
    if (!has(key)) throw ConfigError("missing " + where(key), line_of(node_));
    T out{};
    read(key, out);
    return out;
  }

  Section sub(const std::string& key) {
    seen_.insert(key);
    return Section(node_ && node_.IsMap() ? node_[key] : YAML::Node(), where(key));
  }

  YAML::Node node(const std::string& key) {
    seen_.insert(key);
    return node_[key];
  }

  int line(const std::string& key) { return line_of(node_[key]); }

  void finish() const {
    if (!node_ || !node_.IsMap()) return;
    for (const auto& kv : node_) {
      const auto k = kv.first.as<std::string>();
      if (!seen_.count(k)) throw ConfigError("unknown key '" + where(k) + "'", line_of(kv.first));
    }
  }

 private:
  std::string where(const std::string& key = "") const {
    if (key.empty()) return path_.empty() ? "document" : path_;
    return path_.empty() ? key : path_ + "." + key;
  }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> seen_;
};

InitialConfig read_initial(Section s, InitialConfig def) {
  std::string kind = to_string(def.kind);
  s.read("kind", kind);
  try {
    def.kind = initial_kind_from_string(kind);
  } catch (const ParameterError& e) {
    throw ConfigError(e.what(), s.line("kind"));
  }
  s.positive("u", def.u);
  s.finish();
  return def;
}

Json initial_json(const InitialConfig& i) { return {{"kind", to_string(i.kind)}, {"u", i.u}}; }

const std::set<std::string> kProtocols{"hyva", "varqite", "qlanczos", "trotter-nnn", "measure", "exact-gs"};
const std::set<std::string> kMuKinds{"zero", "uniform", "staggered"};
const std::set<std::string> kParamStages{"dimer", "plaquette", "fusion", "links"};

}  // namespace

RunConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1);
  }
  if (!root || root.IsNull()) throw ConfigError("empty configuration");
  RunConfig c;
  Section top(root, "");
  c.protocol = top.required<std::string>("protocol");
  if (!kProtocols.count(c.protocol)) throw ConfigError("unknown protocol '" + c.protocol + "'", top.line("protocol"));
  top.read("seed", c.seed);
  top.read("output", c.output);
  top.read("threads", c.threads);

  {
    Section g = top.sub("geometry");
    g.positive("rows", c.rows);
    g.positive("cols", c.cols);
    g.finish();
  }
  if (top.has("sector")) {
    Section s = top.sub("sector");
    c.sector = SpinSector{s.required<int>("n_up"), s.required<int>("n_down")};
    s.finish();
  }
  {
    Section k = top.sub("couplings");
    k.read("t", c.t);
    k.read("u", c.u);
    k.read("tp", c.tp);
    k.read("v", c.v);
    if (k.has("mu")) {
      Section m = k.sub("mu");
      m.read("kind", c.mu_kind);
      if (!kMuKinds.count(c.mu_kind)) throw ConfigError("unknown mu kind '" + c.mu_kind + "'", m.line("kind"));
      m.read("value", c.mu_value);
      m.finish();
    }
    k.finish();
  }
  {
    Section s = top.sub("shots");
    s.read("enabled", c.shot_mode);
    s.positive("m", c.shots.shots);
    s.positive("parallel_factor", c.shots.parallel_factor);
    s.read("exact", c.shots.exact);
    s.finish();
    c.shots.seed = c.seed;
  }
  {
    Section o = top.sub("optimizer");
    c.optimizer.seed = c.seed;
    o.positive("restarts", c.optimizer.restarts);
    o.positive("budget", c.optimizer.budget);
    o.read("init_lo", c.optimizer.init_lo);
    o.read("init_hi", c.optimizer.init_hi);
    o.read("time_init_lo", c.optimizer.time_init_lo);
    o.read("time_init_hi", c.optimizer.time_init_hi);
    o.positive("spread_tol", c.optimizer.spread_tol);
    o.positive("initial_step", c.optimizer.initial_step);
    o.read("seed", c.optimizer.seed);
    o.finish();
  }
  {
    Section h = top.sub("hyva");
    HyvaConfig& y = c.hyva;
    h.read("mode", y.mode);
    try {
      hyva_mode_from_string(y.mode);
    } catch (const ParameterError& e) {
      throw ConfigError(e.what(), h.line("mode"));
    }
    h.positive("depth", y.depth);
    h.positive("ramp_time_2", y.ramp_time_2);
    h.positive("ramp_time_3", y.ramp_time_3);
    h.positive("dt", y.dt);
    h.read("wavelength", y.wavelength);
    h.read("empty_columns", y.empty_columns);
    h.read("links_variational", y.links_variational);
    h.positive("link_depth", y.link_depth);
    h.positive("link_ramp_1", y.link_ramp_1);
    h.positive("link_ramp_2", y.link_ramp_2);
    h.read("optimize", y.optimize);
    h.read("save_state", y.save_state);
    if (h.has("params")) {
      Section p = h.sub("params");
      for (const std::string& stage : kParamStages)
        if (p.has(stage)) p.read(stage, y.params[stage]);
      p.finish();
    }
    h.finish();
  }
  {
    Section q = top.sub("qite");
    QiteRunConfig& y = c.qite;
    q.positive("dtau", y.dtau);
    q.read("steps", y.steps);
    if (y.steps < 0) throw ConfigError("qite.steps must be non-negative", q.line("steps"));
    q.read("dephase_time", y.dephase_time);
    if (q.has("initial")) y.initial = read_initial(q.sub("initial"), y.initial);
    q.positive("drop_ratio", y.drop_ratio);
    q.positive("max_overlap", y.max_overlap);
    q.read("complete", y.complete);
    q.finish();
  }
  {
    Section t = top.sub("trotter");
    t.positive("t_trotter", c.trotter.t_trotter);
    t.positive("dt", c.trotter.dt);
    t.finish();
  }
  {
    Section m = top.sub("measure");
    m.read("observables", c.measure.observables);
    if (m.has("initial")) c.measure.initial = read_initial(m.sub("initial"), c.measure.initial);
    m.finish();
  }
  top.finish();
  try {
    geometry(c);
  } catch (const SizeError& e) {
    throw ConfigError(e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

Json to_json(const RunConfig& c) {
  Json j;
  j["protocol"] = c.protocol;
  j["seed"] = c.seed;
  j["output"] = c.output;
  j["threads"] = c.threads;
  j["geometry"] = {{"rows", c.rows}, {"cols", c.cols}};
  if (c.sector) j["sector"] = {{"n_up", c.sector->n_up}, {"n_down", c.sector->n_down}};
  j["couplings"] = {{"t", c.t}, {"u", c.u}, {"tp", c.tp}, {"v", c.v}, {"mu", {{"kind", c.mu_kind}, {"value", c.mu_value}}}};
  j["shots"] = {{"enabled", c.shot_mode}, {"m", c.shots.shots}, {"parallel_factor", c.shots.parallel_factor},
                {"exact", c.shots.exact}};
  const OptimizerConfig& o = c.optimizer;
  j["optimizer"] = {{"restarts", o.restarts},         {"budget", o.budget},         {"init_lo", o.init_lo},
                    {"init_hi", o.init_hi},           {"time_init_lo", o.time_init_lo}, {"time_init_hi", o.time_init_hi},
                    {"spread_tol", o.spread_tol},     {"initial_step", o.initial_step}, {"seed", o.seed}};
  const HyvaConfig& h = c.hyva;
  j["hyva"] = {{"mode", h.mode},
               {"depth", h.depth},
               {"ramp_time_2", h.ramp_time_2},
               {"ramp_time_3", h.ramp_time_3},
               {"dt", h.dt},
               {"wavelength", h.wavelength},
               {"empty_columns", h.empty_columns},
               {"links_variational", h.links_variational},
               {"link_depth", h.link_depth},
               {"link_ramp_1", h.link_ramp_1},
               {"link_ramp_2", h.link_ramp_2},
               {"optimize", h.optimize},
               {"params", h.params},
               {"save_state", h.save_state}};
  const QiteRunConfig& q = c.qite;
  j["qite"] = {{"dtau", q.dtau},
               {"steps", q.steps},
               {"dephase_time", q.dephase_time},
               {"initial", initial_json(q.initial)},
               {"drop_ratio", q.drop_ratio},
               {"max_overlap", q.max_overlap},
               {"complete", q.complete}};
  j["trotter"] = {{"t_trotter", c.trotter.t_trotter}, {"dt", c.trotter.dt}};
  j["measure"] = {{"observables", c.measure.observables}, {"initial", initial_json(c.measure.initial)}};
  return j;
}

LatticeGeometry geometry(const RunConfig& c) { return LatticeGeometry(c.rows, c.cols); }

HamiltonianSpec target_spec(const RunConfig& c) {
  const LatticeGeometry g = geometry(c);
  MuPattern mu;
  if (c.mu_kind == "uniform") mu = MuPattern::uniform(c.mu_value);
  if (c.mu_kind == "staggered") mu = MuPattern::staggered(c.mu_value);
  HamiltonianSpec h = fh_local(g, c.t, c.u, mu);
  h.v = c.v;
  if (c.tp != 0.0) h += nnn_spec(g, BondClass::kNnnDiag1, c.tp) + nnn_spec(g, BondClass::kNnnDiag2, c.tp);
  return h;
}

}  // namespace fhsim::cli
