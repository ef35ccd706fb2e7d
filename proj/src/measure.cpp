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

#include "fhsim/measure.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <unsupported/Eigen/MatrixFunctions>

#include "fhsim/errors.hpp"
#include "fhsim/kernels.hpp"
#include "fhsim/optimize.hpp"

namespace fhsim {
namespace {

constexpr double kCompileTarget = 1e-8;

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

int mode_bit(Word up, Word dn, int site, Spin s) {
  return static_cast<int>(((s == Spin::kUp ? up : dn) >> site) & 1u);
}

double occupation_difference(Word up, Word dn, Bond b, Spin s) {
  return mode_bit(up, dn, b.i, s) - mode_bit(up, dn, b.j, s);
}

Bond canonical(Bond b) { return b.i < b.j ? b : Bond{b.j, b.i}; }

bool share_site(Bond a, Bond b) { return a.i == b.i || a.i == b.j || a.j == b.i || a.j == b.j; }

int shared_site(Bond a, Bond b) {
  if (a.i == b.i || a.i == b.j) return a.i;
  return a.j;
}

int other_end(Bond b, int s) { return b.i == s ? b.j : b.i; }

// Closed-form two-quench realizations: B is exp(-i pi/2 (sx+sz)/sqrt2) up to
// phase, C first rotates by exp(-i pi/4 sz).
RotationCompilation closed_form(RotationKind k) {
  const double a = std::numbers::pi / (2.0 * std::numbers::sqrt2);
  RotationCompilation c;
  const FtQuench b{-a, -a, a};
  if (k == RotationKind::kB) {
    c.quenches = {b, FtQuench{}};
  } else {
    const double q = std::numbers::pi / 4.0;
    c.quenches = {FtQuench{0.0, -q, q}, b};
  }
  c.infidelity = rotation_infidelity(ideal_rotation(k), rotation_unitary(c));
  c.compiled = false;
  return c;
}

RotationCompilation optimize_rotation(RotationKind k) {
  const Eigen::Matrix2cd target = ideal_rotation(k);
  auto cost = [&](const std::vector<double>& x) {
    RotationCompilation c;
    c.quenches = {FtQuench{x[0], x[1], x[2]}, FtQuench{x[3], x[4], x[5]}};
    return rotation_distance(target, rotation_unitary(c));
  };
  std::mt19937_64 rng(k == RotationKind::kB ? 101 : 202);
  std::uniform_real_distribution<double> dist(-1.5, 1.5);
  RotationCompilation best;
  double best_dist = 1e300;
  for (int start = 0; start < 40 && best_dist >= 1e-14; ++start) {
    std::vector<double> x0(6);
    for (double& v : x0) v = dist(rng);
    NelderMeadResult nm = nelder_mead(cost, x0, 0.3, 4000, 1e-15);
    NelderMeadResult polish = nelder_mead(cost, nm.x, 1e-3, 2000, 1e-16);
    if (polish.f < nm.f) nm = polish;
    if (nm.f < best_dist) {
      best.quenches = {FtQuench{nm.x[0], nm.x[1], nm.x[2]}, FtQuench{nm.x[3], nm.x[4], nm.x[5]}};
      best_dist = nm.f;
    }
  }
  best.infidelity = rotation_infidelity(target, rotation_unitary(best));
  best.compiled = true;
  return best;
}

HamiltonianSpec quench_spec(const LatticeGeometry& g, const std::vector<Rotation>& rots, int which) {
  HamiltonianSpec s(g);
  for (const Rotation& r : rots) {
    const FtQuench& q = compiled_rotation(r.kind).quenches[which];
    s += ft_hamiltonian(g, r.bond, q.theta, q.mu1, q.mu2, r.spins);
  }
  return s;
}

void check_disjoint(const MeasurementSetting& s) {
  std::set<std::pair<int, int>> modes;
  for (const Rotation& r : s.rotations)
    for (Spin sp : {Spin::kUp, Spin::kDown}) {
      if (!has_spin(r.spins, sp)) continue;
      for (int site : {r.bond.i, r.bond.j})
        if (!modes.insert({site, static_cast<int>(sp)}).second)
          throw ParameterError("setting '" + s.label + "' rotates a mode twice");
    }
}

struct TermKey {
  Bond bond;
  Spin spin;
  friend bool operator<(const TermKey& a, const TermKey& b) {
    return std::tie(a.bond.i, a.bond.j, a.spin) < std::tie(b.bond.i, b.bond.j, b.spin);
  }
};

using TermMap = std::map<TermKey, double>;

TermMap term_map(const HamiltonianSpec& spec) {
  TermMap m;
  for (const HopTerm& h : hop_terms(spec)) m[{h.bond, h.spin}] += h.coef;
  return m;
}

double coef(const TermMap& m, Bond b, Spin s) {
  auto it = m.find({canonical(b), s});
  return it == m.end() ? 0.0 : it->second;
}

std::vector<Bond> term_bonds(const TermMap& a, const TermMap* b = nullptr) {
  std::vector<Bond> out;
  auto add = [&](const TermMap& m) {
    for (const auto& [k, v] : m)
      if (std::find(out.begin(), out.end(), k.bond) == out.end()) out.push_back(k.bond);
  };
  add(a);
  if (b) add(*b);
  return out;
}

// sum_{b in bonds} c(b, s) d_{b s}
double weighted_difference(const TermMap& m, const std::vector<Bond>& bonds, Spin s, Word up, Word dn) {
  double acc = 0.0;
  for (const Bond& b : bonds) acc += coef(m, b, s) * occupation_difference(up, dn, b, s);
  return acc;
}

std::string bond_label(Bond b) { return std::to_string(b.i) + "-" + std::to_string(b.j); }

}  // namespace

Eigen::Matrix2cd ideal_rotation(RotationKind k) {
  const double r = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd u;
  if (k == RotationKind::kB)
    u << r, r, r, -r;
  else
    u << r, cplx(0, r), cplx(0, -r), -r;
  return u;
}

Eigen::Matrix2cd ft_unitary(const FtQuench& q) {
  Eigen::Matrix2cd h;
  h << -q.mu1, -q.theta, -q.theta, -q.mu2;
  return (cplx(0, -1) * h).exp();
}

Eigen::Matrix2cd rotation_unitary(const RotationCompilation& c) {
  return ft_unitary(c.quenches[1]) * ft_unitary(c.quenches[0]);
}

double rotation_infidelity(const Eigen::Matrix2cd& ideal, const Eigen::Matrix2cd& u) {
  return 1.0 - std::abs((ideal.adjoint() * u).trace()) / 2.0;
}

double rotation_distance(const Eigen::Matrix2cd& ideal, const Eigen::Matrix2cd& u) {
  const cplx tr = (ideal.adjoint() * u).trace();
  const cplx phase = std::abs(tr) > 0.0 ? tr / std::abs(tr) : cplx(1.0);
  return (u - phase * ideal).norm();
}

const RotationCompilation& compiled_rotation(RotationKind k) {
  static const std::array<RotationCompilation, 2> cache = [] {
    std::array<RotationCompilation, 2> c;
    for (RotationKind kind : {RotationKind::kB, RotationKind::kC}) {
      RotationCompilation r = optimize_rotation(kind);
      c[static_cast<int>(kind)] = r.infidelity < kCompileTarget ? r : closed_form(kind);
    }
    return c;
  }();
  return cache[static_cast<int>(k)];
}

CompiledSequence bond_rotation(const LatticeGeometry& g, Bond b, SpinMask spins, RotationKind k) {
  const RotationCompilation& c = compiled_rotation(k);
  const std::string name = k == RotationKind::kB ? "rotB" : "rotC";
  CompiledSequence seq;
  for (int q = 0; q < 2; ++q) {
    Pulse p;
    p.label = name + "[" + std::to_string(q) + "] " + bond_label(b);
    p.spec = ft_hamiltonian(g, b, c.quenches[q].theta, c.quenches[q].mu1, c.quenches[q].mu2, spins);
    p.duration = 1.0;
    seq.pulses.push_back(std::move(p));
  }
  return seq;
}

StateVector prepare_setting(const StateVector& state, const MeasurementSetting& s) {
  check_disjoint(s);
  StateVector phi = s.fswaps.empty() ? state : apply_fswap_exact(state, s.fswaps);
  if (s.rotations.empty()) return phi;
  KrylovOptions opt;
  opt.tol = 1e-13;
  const LatticeGeometry& g = state.basis().geometry();
  for (int q = 0; q < 2; ++q) phi = propagate_real(phi, quench_spec(g, s.rotations, q), 1.0, opt);
  return phi;
}

std::vector<HopTerm> hop_terms(const HamiltonianSpec& spec) {
  if (!spec.nnn.empty()) throw ParameterError("measurement decompositions support nearest-neighbour hops only");
  std::map<TermKey, double> acc;
  for (const Tunneling& t : spec.tunnelings) {
    if (!spec.geometry.is_nn(t.bond)) throw ParameterError("measurement decompositions support nearest-neighbour hops only");
    for (Spin s : {Spin::kUp, Spin::kDown})
      if (has_spin(t.spins, s)) acc[{canonical(t.bond), s}] += -t.t;
  }
  std::vector<HopTerm> out;
  for (const auto& [k, v] : acc)
    if (v != 0.0) out.push_back({k.bond, k.spin, v});
  return out;
}

bool has_diagonal_part(const HamiltonianSpec& spec) {
  if (spec.u != 0.0 || spec.v != 0.0) return true;
  for (double m : spec.mu_up)
    if (m != 0.0) return true;
  for (double m : spec.mu_down)
    if (m != 0.0) return true;
  return false;
}

DiagonalFn diagonal_fn(const HamiltonianSpec& spec) {
  NumberWeights w{spec.mu_up, spec.mu_down, spec.u, spec.v, spec.geometry.nn_bonds()};
  return [w](Word up, Word dn) { return w.evaluate(up, dn); };
}

std::vector<MeasurementSetting> plan_hopping(const HamiltonianSpec& t) {
  const TermMap m = term_map(t);
  std::vector<MeasurementSetting> out;
  for (const auto& group : partition_commuting(t.geometry, term_bonds(m))) {
    MeasurementSetting s;
    s.label = "hop";
    for (const Bond& b : group) {
      s.rotations.push_back({b, SpinMask::kBoth, RotationKind::kB});
      s.label += " " + bond_label(b);
    }
    s.estimator = [m, group](Word up, Word dn) {
      return weighted_difference(m, group, Spin::kUp, up, dn) + weighted_difference(m, group, Spin::kDown, up, dn);
    };
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<MeasurementSetting> plan_hopping_product(const HamiltonianSpec& t1, const HamiltonianSpec& t2) {
  if (!(t1.geometry == t2.geometry)) throw IncompatibleError("hopping operators on different geometries");
  const LatticeGeometry& g = t1.geometry;
  const TermMap m1 = term_map(t1);
  const TermMap m2 = term_map(t2);
  const auto groups = partition_commuting(g, term_bonds(m1, &m2));
  std::vector<MeasurementSetting> out;

  // Pairs inside one commuting group: both factors diagonal after one rotation.
  for (const auto& group : groups) {
    MeasurementSetting s;
    s.label = "hop2 same";
    for (const Bond& b : group) s.rotations.push_back({b, SpinMask::kBoth, RotationKind::kB});
    s.estimator = [m1, m2, group](Word up, Word dn) {
      const double a = weighted_difference(m1, group, Spin::kUp, up, dn) +
                       weighted_difference(m1, group, Spin::kDown, up, dn);
      const double b = weighted_difference(m2, group, Spin::kUp, up, dn) +
                       weighted_difference(m2, group, Spin::kDown, up, dn);
      return a * b;
    };
    out.push_back(std::move(s));
  }

  // Opposite spins on different groups: rotate up on one group, down on the other.
  for (std::size_t a = 0; a < groups.size(); ++a)
    for (std::size_t b = 0; b < groups.size(); ++b) {
      if (a == b) continue;
      MeasurementSetting s;
      s.label = "hop2 up" + std::to_string(a) + " dn" + std::to_string(b);
      for (const Bond& bd : groups[a]) s.rotations.push_back({bd, SpinMask::kUp, RotationKind::kB});
      for (const Bond& bd : groups[b]) s.rotations.push_back({bd, SpinMask::kDown, RotationKind::kB});
      const auto& ga = groups[a];
      const auto& gb = groups[b];
      s.estimator = [m1, m2, ga, gb](Word up, Word dn) {
        const double x1 = weighted_difference(m1, ga, Spin::kUp, up, dn);
        const double x2 = weighted_difference(m2, ga, Spin::kUp, up, dn);
        const double y1 = weighted_difference(m1, gb, Spin::kDown, up, dn);
        const double y2 = weighted_difference(m2, gb, Spin::kDown, up, dn);
        return x1 * y2 + x2 * y1;
      };
      out.push_back(std::move(s));
    }

  // Same spin, disjoint bonds in different groups.
  for (std::size_t a = 0; a < groups.size(); ++a)
    for (std::size_t b = a + 1; b < groups.size(); ++b)
      for (const Bond& bd : groups[a]) {
        std::vector<Bond> partners;
        for (const Bond& o : groups[b])
          if (!share_site(bd, o)) partners.push_back(o);
        if (partners.empty()) continue;
        MeasurementSetting s;
        s.label = "hop2 pair " + bond_label(bd) + " g" + std::to_string(b);
        s.rotations.push_back({bd, SpinMask::kBoth, RotationKind::kB});
        for (const Bond& o : partners) s.rotations.push_back({o, SpinMask::kBoth, RotationKind::kB});
        s.estimator = [m1, m2, bd, partners](Word up, Word dn) {
          double acc = 0.0;
          for (Spin sp : {Spin::kUp, Spin::kDown}) {
            const double db = occupation_difference(up, dn, bd, sp);
            if (db == 0.0) continue;
            for (const Bond& o : partners)
              acc += (coef(m1, bd, sp) * coef(m2, o, sp) + coef(m1, o, sp) * coef(m2, bd, sp)) * db *
                     occupation_difference(up, dn, o, sp);
          }
          return acc;
        };
        out.push_back(std::move(s));
      }

  // Same spin on bonds i-j and j-s: {h_ij, h_js} = h_is (1 - 2 n_j). After an
  // fSWAP on (j, s) this reads h_ij (1 - 2 n_s).
  struct Triple {
    int i, j, s;
    Bond b1, b2;
  };
  std::vector<Triple> triples;
  for (std::size_t a = 0; a < groups.size(); ++a)
    for (std::size_t b = a + 1; b < groups.size(); ++b)
      for (const Bond& x : groups[a])
        for (const Bond& y : groups[b]) {
          if (!share_site(x, y)) continue;
          const int j = shared_site(x, y);
          triples.push_back({other_end(x, j), j, other_end(y, j), x, y});
        }
  std::vector<bool> used(triples.size(), false);
  for (std::size_t first = 0; first < triples.size(); ++first) {
    if (used[first]) continue;
    std::vector<Triple> pack;
    std::set<int> sites;
    for (std::size_t k = first; k < triples.size(); ++k) {
      if (used[k]) continue;
      const Triple& t = triples[k];
      if (sites.count(t.i) || sites.count(t.j) || sites.count(t.s)) continue;
      sites.insert({t.i, t.j, t.s});
      pack.push_back(t);
      used[k] = true;
    }
    MeasurementSetting s;
    s.label = "hop2 chain";
    for (const Triple& t : pack) {
      s.fswaps.push_back(Bond{t.j, t.s});
      s.rotations.push_back({Bond{t.i, t.j}, SpinMask::kBoth, RotationKind::kB});
      s.label += " " + std::to_string(t.i) + "-" + std::to_string(t.j) + "-" + std::to_string(t.s);
    }
    s.estimator = [m1, m2, pack](Word up, Word dn) {
      double acc = 0.0;
      for (const Triple& t : pack)
        for (Spin sp : {Spin::kUp, Spin::kDown}) {
          const double c = 0.5 * (coef(m1, t.b1, sp) * coef(m2, t.b2, sp) + coef(m1, t.b2, sp) * coef(m2, t.b1, sp));
          if (c == 0.0) continue;
          acc += c * occupation_difference(up, dn, Bond{t.i, t.j}, sp) * (1 - 2 * mode_bit(up, dn, t.s, sp));
        }
      return acc;
    };
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<MeasurementSetting> plan_diagonal(const DiagonalFn& d, const std::string& label) {
  MeasurementSetting s;
  s.label = label;
  s.estimator = d;
  return {s};
}

std::vector<MeasurementSetting> plan_cross(const HamiltonianSpec& t, const HamiltonianSpec& d, CrossPart part) {
  if (!(t.geometry == d.geometry)) throw IncompatibleError("operators on different geometries");
  const DiagonalFn f = diagonal_fn(d);
  std::vector<MeasurementSetting> out;
  for (const HopTerm& h : hop_terms(t)) {
    MeasurementSetting s;
    const SpinMask mask = h.spin == Spin::kUp ? SpinMask::kUp : SpinMask::kDown;
    const RotationKind kind = part == CrossPart::kReal ? RotationKind::kB : RotationKind::kC;
    s.label = std::string(part == CrossPart::kReal ? "re" : "im") + " " + bond_label(h.bond) +
              (h.spin == Spin::kUp ? " up" : " dn");
    s.rotations.push_back({h.bond, mask, kind});
    const Bond b = h.bond;
    const Spin sp = h.spin;
    const double c = h.coef;
    s.estimator = [f, b, sp, c, part](Word up, Word dn) {
      const double dd = occupation_difference(up, dn, b, sp);
      if (dd == 0.0) return 0.0;
      Word& w = sp == Spin::kUp ? up : dn;
      const Word base = w & ~((Word{1} << b.i) | (Word{1} << b.j));
      w = base | (Word{1} << b.i);
      const double p = f(up, dn);
      w = base | (Word{1} << b.j);
      const double q = f(up, dn);
      return part == CrossPart::kReal ? c * dd * 0.5 * (p + q) : c * dd * 0.5 * (p - q);
    };
    out.push_back(std::move(s));
  }
  return out;
}

std::string to_string(Observable o) {
  switch (o) {
    case Observable::kHt: return "Ht";
    case Observable::kHt2: return "Ht2";
    case Observable::kHtHuRe: return "ReHtHU";
    case Observable::kHtHuIm: return "ImHtHU";
    case Observable::kHu: return "HU";
    case Observable::kHu2: return "HU2";
    case Observable::kHn: return "Hn";
  }
  return "?";
}

std::vector<MeasurementSetting> plan_settings(Observable o, const LatticeGeometry& g) {
  const HamiltonianSpec ht = hopping_spec(g, g.nn_bonds(), 1.0);
  const HamiltonianSpec hu = interaction_spec(g, 1.0);
  switch (o) {
    case Observable::kHt: return plan_hopping(ht);
    case Observable::kHt2: return plan_hopping_product(ht, ht);
    case Observable::kHtHuRe: return plan_cross(ht, hu, CrossPart::kReal);
    case Observable::kHtHuIm: return plan_cross(ht, hu, CrossPart::kImag);
    case Observable::kHu: return plan_diagonal(diagonal_fn(hu), "HU");
    case Observable::kHu2: {
      const DiagonalFn f = diagonal_fn(hu);
      return plan_diagonal([f](Word up, Word dn) { return f(up, dn) * f(up, dn); }, "HU2");
    }
    case Observable::kHn:
      return plan_diagonal([](Word up, Word dn) { return double(std::popcount(up) + std::popcount(dn)); }, "Hn");
  }
  return {};
}

namespace {

struct SettingStats {
  std::vector<double> mean;
  std::vector<double> var;  // sample variance of one shot
};

SettingStats sample_setting(const StateVector& state, const MeasurementSetting& s,
                            const std::vector<DiagonalFn>& fns, const ShotConfig& cfg, std::uint64_t stream,
                            std::size_t index) {
  const FockBasis& basis = state.basis();
  const StateVector phi = prepare_setting(state, s);
  std::vector<double> prob(basis.dim());
  kernels::active().abs_sq(phi.data(), prob.data(), prob.size());
  SettingStats st{std::vector<double>(fns.size(), 0.0), std::vector<double>(fns.size(), 0.0)};
  if (cfg.exact) {
    for (std::size_t k = 0; k < prob.size(); ++k) {
      if (prob[k] == 0.0) continue;
      for (std::size_t f = 0; f < fns.size(); ++f) st.mean[f] += prob[k] * fns[f](basis.up_word(k), basis.down_word(k));
    }
    return st;
  }
  std::mt19937_64 rng(splitmix(cfg.seed ^ splitmix(stream * 0x100000001b3ull + index)));
  std::discrete_distribution<std::size_t> pick(prob.begin(), prob.end());
  std::vector<double> sum2(fns.size(), 0.0);
  for (long m = 0; m < cfg.shots; ++m) {
    const std::size_t k = pick(rng);
    for (std::size_t f = 0; f < fns.size(); ++f) {
      const double v = fns[f](basis.up_word(k), basis.down_word(k));
      st.mean[f] += v;
      sum2[f] += v * v;
    }
  }
  const double n = static_cast<double>(cfg.shots);
  for (std::size_t f = 0; f < fns.size(); ++f) {
    st.mean[f] /= n;
    if (cfg.shots > 1) st.var[f] = std::max(0.0, (sum2[f] - n * st.mean[f] * st.mean[f]) / (n - 1.0));
  }
  return st;
}

void check_shot_config(const ShotConfig& cfg) {
  if (!cfg.exact && cfg.shots <= 0) throw ParameterError("shots must be positive");
  if (cfg.parallel_factor <= 0) throw ParameterError("parallel factor must be positive");
}

}  // namespace

EstimateResult sample_and_estimate(const StateVector& state, const std::vector<MeasurementSetting>& settings,
                                   const ShotConfig& cfg, std::uint64_t stream, const std::string& observable) {
  check_shot_config(cfg);
  const std::size_t ns = settings.size();
  std::vector<SettingStats> per(ns);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t si = 0; si < ns; ++si)
    per[si] = sample_setting(state, settings[si], {settings[si].estimator}, cfg, stream, si);
  EstimateResult res;
  res.observable = observable;
  res.settings = static_cast<int>(ns);
  double var_sum = 0.0;
  for (const SettingStats& st : per) {
    res.mean += st.mean[0];
    var_sum += st.var[0];
  }
  if (!cfg.exact) {
    res.shots = cfg.shots;
    res.stderr_ = std::sqrt(var_sum / static_cast<double>(cfg.shots));
    res.runs = run_count(res.settings, cfg.shots, cfg.parallel_factor);
  }
  return res;
}

std::vector<EstimateResult> sample_batch(const StateVector& state, const MeasurementSetting& setting,
                                         const std::vector<DiagonalFn>& estimators, const ShotConfig& cfg,
                                         std::uint64_t stream) {
  check_shot_config(cfg);
  const SettingStats st = sample_setting(state, setting, estimators, cfg, stream, 0);
  std::vector<EstimateResult> out(estimators.size());
  for (std::size_t f = 0; f < estimators.size(); ++f) {
    out[f].mean = st.mean[f];
    out[f].settings = 1;
    if (!cfg.exact) {
      out[f].shots = cfg.shots;
      out[f].stderr_ = std::sqrt(st.var[f] / static_cast<double>(cfg.shots));
      out[f].runs = run_count(1, cfg.shots, cfg.parallel_factor);
    }
  }
  return out;
}

long run_count(long settings, long shots, int parallel_factor) {
  return (settings * shots + parallel_factor - 1) / parallel_factor;
}

long nominal_run_count(const LatticeGeometry& g, long shots, int parallel_factor) {
  const long c = g.rows() <= 2 ? 8 : 10;
  return run_count(c * g.num_sites(), shots, parallel_factor);
}

void write_estimates_csv(const std::string& path, const std::vector<EstimateResult>& rows) {
  std::ofstream f(path);
  if (!f) throw Error("cannot open " + path);
  f.precision(12);
  f << "observable,mean,stderr,shots,settings,runs\n";
  for (const EstimateResult& r : rows)
    f << r.observable << ',' << r.mean << ',' << r.stderr_ << ',' << r.shots << ',' << r.settings << ',' << r.runs
      << '\n';
}

}  // namespace fhsim
