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

#include "fhsim/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fhsim/errors.hpp"

namespace fhsim {
namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string("field '") + key + "' has the wrong type");
  }
}

std::string mask_name(SpinMask m) {
  switch (m) {
    case SpinMask::kUp: return "up";
    case SpinMask::kDown: return "down";
    default: return "both";
  }
}

SpinMask mask_from(const std::string& s) {
  if (s == "up") return SpinMask::kUp;
  if (s == "down") return SpinMask::kDown;
  if (s == "both") return SpinMask::kBoth;
  throw ConfigError("unknown spin mask '" + s + "'");
}

Json hops_json(const std::vector<Tunneling>& hs) {
  Json a = Json::array();
  for (const Tunneling& h : hs) a.push_back({{"i", h.bond.i}, {"j", h.bond.j}, {"t", h.t}, {"spins", mask_name(h.spins)}});
  return a;
}

Json layer_json(const CircuitLayer& l) {
  Json gens = Json::array();
  for (const HamiltonianSpec& g : l.generators) gens.push_back(to_json(g));
  return {{"label", l.label},
          {"frozen", to_json(l.frozen)},
          {"generators", gens},
          {"coordinates", l.coordinate_names},
          {"variable_time", l.variable_time},
          {"fixed_time", l.fixed_time},
          {"max_coupling", l.max_coupling}};
}

CircuitLayer layer_from(const Json& j) {
  CircuitLayer l;
  l.label = get<std::string>(j, "label");
  l.frozen = spec_from_json(field(j, "frozen"));
  for (const Json& g : field(j, "generators")) l.generators.push_back(spec_from_json(g));
  l.coordinate_names = get<std::vector<std::string>>(j, "coordinates");
  l.variable_time = get<bool>(j, "variable_time");
  l.fixed_time = get<double>(j, "fixed_time");
  l.max_coupling = get<std::vector<double>>(j, "max_coupling");
  if (!l.max_coupling.empty() && l.max_coupling.size() != l.generators.size()) throw ConfigError("max_coupling does not match generators");
  return l;
}

constexpr char kMagic[4] = {'F', 'H', 'S', 'V'};
constexpr std::uint32_t kStateFormat = 1;

}  // namespace

Json to_json(const HamiltonianSpec& h) {
  return {{"rows", h.geometry.rows()}, {"cols", h.geometry.cols()}, {"hops", hops_json(h.tunnelings)},
          {"nnn", hops_json(h.nnn)},   {"u", h.u},                   {"v", h.v},
          {"mu_up", h.mu_up},          {"mu_down", h.mu_down}};
}

HamiltonianSpec spec_from_json(const Json& j) {
  HamiltonianSpec h(LatticeGeometry(get<int>(j, "rows"), get<int>(j, "cols")));
  for (const Json& t : field(j, "hops"))
    h.add_hop({get<int>(t, "i"), get<int>(t, "j")}, get<double>(t, "t"), mask_from(get<std::string>(t, "spins")));
  for (const Json& t : field(j, "nnn"))
    h.add_nnn({get<int>(t, "i"), get<int>(t, "j")}, get<double>(t, "t"), mask_from(get<std::string>(t, "spins")));
  h.u = get<double>(j, "u");
  h.v = get<double>(j, "v");
  h.mu_up = get<std::vector<double>>(j, "mu_up");
  h.mu_down = get<std::vector<double>>(j, "mu_down");
  const auto n = static_cast<std::size_t>(h.geometry.num_sites());
  if (h.mu_up.size() != n || h.mu_down.size() != n) throw ConfigError("chemical potential length mismatch");
  try {
    h.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return h;
}

Json to_json(const CompiledSequence& seq) {
  Json a = Json::array();
  for (const Pulse& p : seq.pulses) {
    Json sb = Json::array();
    for (const Bond& b : p.swap_bonds) sb.push_back({b.i, b.j});
    a.push_back({{"label", p.label},
                 {"kind", p.kind == PulseKind::kFswap ? "fswap" : "quench"},
                 {"duration", p.duration},
                 {"swap_bonds", sb},
                 {"hamiltonian", to_json(p.spec)}});
  }
  return {{"pulses", a}, {"physical_time", seq.physical_time()}};
}

CompiledSequence sequence_from_json(const Json& j) {
  CompiledSequence seq;
  for (const Json& p : field(j, "pulses")) {
    Pulse q;
    q.label = get<std::string>(p, "label");
    const auto kind = get<std::string>(p, "kind");
    if (kind != "fswap" && kind != "quench") throw ConfigError("unknown pulse kind '" + kind + "'");
    q.kind = kind == "fswap" ? PulseKind::kFswap : PulseKind::kQuench;
    q.duration = get<double>(p, "duration");
    for (const auto& b : get<std::vector<std::array<int, 2>>>(p, "swap_bonds")) q.swap_bonds.push_back({b[0], b[1]});
    q.spec = spec_from_json(field(p, "hamiltonian"));
    seq.pulses.push_back(std::move(q));
  }
  return seq;
}

Json to_json(const ProtocolProgram& p) {
  Json stages = Json::array();
  for (const ProgramStage& s : p.stages) {
    Json layers = Json::array();
    for (const CircuitLayer& l : s.circuit.layers) layers.push_back(layer_json(l));
    Json segs = Json::array();
    for (const Segment& g : s.schedule.segments)
      segs.push_back({{"duration", g.duration}, {"start", to_json(g.start)}, {"end", to_json(g.end)}});
    stages.push_back({{"name", s.name},
                      {"adiabatic", s.adiabatic},
                      {"layers", layers},
                      {"params", s.params},
                      {"schedule", segs},
                      {"dt", s.dt}});
  }
  return {{"rows", p.geometry.rows()},
          {"cols", p.geometry.cols()},
          {"n_up", p.sector.n_up},
          {"n_down", p.sector.n_down},
          {"initial", {{"kind", to_string(p.initial.kind)}, {"u", p.initial.u}, {"empty_columns", p.initial.empty_columns}}},
          {"stages", stages},
          {"physical_time", p.physical_time()}};
}

ProtocolProgram program_from_json(const Json& j) {
  ProtocolProgram p;
  p.geometry = LatticeGeometry(get<int>(j, "rows"), get<int>(j, "cols"));
  p.sector = {get<int>(j, "n_up"), get<int>(j, "n_down")};
  const Json& init = field(j, "initial");
  try {
    p.initial.kind = initial_kind_from_string(get<std::string>(init, "kind"));
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  p.initial.u = get<double>(init, "u");
  p.initial.empty_columns = get<std::vector<int>>(init, "empty_columns");
  for (const Json& s : field(j, "stages")) {
    ProgramStage st;
    st.name = get<std::string>(s, "name");
    st.adiabatic = get<bool>(s, "adiabatic");
    for (const Json& l : field(s, "layers")) st.circuit.layers.push_back(layer_from(l));
    st.params = get<std::vector<double>>(s, "params");
    if (!st.adiabatic && static_cast<int>(st.params.size()) != st.circuit.num_params())
      throw ConfigError("stage '" + st.name + "' parameter count does not match its circuit");
    for (const Json& g : field(s, "schedule"))
      st.schedule.segments.push_back(
          {get<double>(g, "duration"), spec_from_json(field(g, "start")), spec_from_json(field(g, "end"))});
    st.dt = get<double>(s, "dt");
    p.stages.push_back(std::move(st));
  }
  return p;
}

Json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

void write_json_file(const Json& j, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParameterError("cannot write " + path);
  f << j.dump(2) << '\n';
}

void write_state(const StateVector& s, const std::string& path) {
  static_assert(std::endian::native == std::endian::little);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParameterError("cannot write " + path);
  const FockBasis& b = s.basis();
  const std::int32_t hdr[5] = {static_cast<std::int32_t>(kStateFormat), b.geometry().rows(), b.geometry().cols(),
                               b.sector().n_up, b.sector().n_down};
  const std::uint64_t dim = s.size();
  f.write(kMagic, 4);
  f.write(reinterpret_cast<const char*>(hdr), sizeof hdr);
  f.write(reinterpret_cast<const char*>(&dim), sizeof dim);
  f.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(dim * sizeof(cplx)));
}

StateVector read_state(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  char magic[4];
  std::int32_t hdr[5];
  std::uint64_t dim = 0;
  f.read(magic, 4);
  f.read(reinterpret_cast<char*>(hdr), sizeof hdr);
  f.read(reinterpret_cast<char*>(&dim), sizeof dim);
  if (!f || std::memcmp(magic, kMagic, 4) != 0) throw ConfigError(path + ": not a state checkpoint");
  if (hdr[0] != static_cast<std::int32_t>(kStateFormat)) throw ConfigError(path + ": unsupported checkpoint version");
  BasisPtr basis = make_basis(LatticeGeometry(hdr[1], hdr[2]), {hdr[3], hdr[4]});
  if (basis->dim() != dim) throw ConfigError(path + ": dimension does not match the header sector");
  StateVector s(basis);
  f.read(reinterpret_cast<char*>(s.data()), static_cast<std::streamsize>(dim * sizeof(cplx)));
  if (!f) throw ConfigError(path + ": truncated amplitudes");
  return s;
}

Json to_json(const Precompiled& p) {
  return {{"stage", p.stage},   {"rows", p.rows},         {"cols", p.cols},        {"u", p.u},
          {"depth", p.depth},   {"params", p.params},     {"infidelity", p.infidelity},
          {"residual", p.residual}};
}

Precompiled precompiled_from_json(const Json& j) {
  Precompiled p;
  p.stage = get<std::string>(j, "stage");
  p.rows = get<int>(j, "rows");
  p.cols = get<int>(j, "cols");
  p.u = get<double>(j, "u");
  p.depth = get<int>(j, "depth");
  p.params = get<std::vector<double>>(j, "params");
  p.infidelity = get<double>(j, "infidelity");
  p.residual = get<double>(j, "residual");
  return p;
}

std::string data_dir() {
  if (const char* env = std::getenv("FHSIM_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return FHSIM_DEFAULT_DATA_DIR;
}

std::string precompiled_path(const std::string& stage, int rows, int cols, double u, int depth) {
  std::ostringstream os;
  os << data_dir() << "/precompiled/" << stage << '_' << rows << 'x' << cols << "_u" << u << "_d" << depth << ".json";
  return os.str();
}

Precompiled load_precompiled(const std::string& stage, int rows, int cols, double u, int depth) {
  const std::string path = precompiled_path(stage, rows, cols, u, depth);
  Precompiled p = precompiled_from_json(read_json_file(path));
  if (p.stage != stage || p.rows != rows || p.cols != cols || p.u != u || p.depth != depth)
    throw ConfigError(path + ": header does not match the requested stage");
  return p;
}

}  // namespace fhsim
