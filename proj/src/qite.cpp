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

#include "fhsim/qite.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include "json.hpp"
#include <random>

#include "fhsim/circuits.hpp"
#include "fhsim/errors.hpp"
#include "fhsim/evolve.hpp"
#include "fhsim/operator.hpp"

namespace fhsim {
namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

HamiltonianSpec hopping_part(const HamiltonianSpec& s) {
  HamiltonianSpec out(s.geometry);
  out.tunnelings = s.tunnelings;
  out.nnn = s.nnn;
  return out;
}

HamiltonianSpec diagonal_part(const HamiltonianSpec& s) {
  HamiltonianSpec out = s;
  out.tunnelings.clear();
  out.nnn.clear();
  return out;
}

bool is_hopping(const HamiltonianSpec& s) { return s.has_offdiagonal() && !has_diagonal_part(s); }
bool is_diagonal(const HamiltonianSpec& s) { return !s.has_offdiagonal(); }

std::map<std::pair<int, int>, double> hop_map(const HamiltonianSpec& s) {
  std::map<std::pair<int, int>, double> m;
  for (const HopTerm& h : hop_terms(s)) m[{h.bond.i * 2 + static_cast<int>(h.spin), h.bond.j}] += h.coef;
  return m;
}

// lambda with a = lambda b, if it exists.
std::optional<double> ratio(const std::vector<double>& a, const std::vector<double>& b) {
  std::optional<double> lam;
  double scale = 0.0;
  for (double x : b) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return std::nullopt;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(b[k]) > 1e-12 * scale) {
      lam = a[k] / b[k];
      break;
    }
  if (!lam) return std::nullopt;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - *lam * b[k]) > 1e-12 * std::max(1.0, std::abs(a[k]))) return std::nullopt;
  return lam;
}

std::optional<double> hop_ratio(const HamiltonianSpec& a, const HamiltonianSpec& b) {
  auto ma = hop_map(a), mb = hop_map(b);
  std::vector<double> va, vb;
  for (const auto& [k, v] : mb) {
    vb.push_back(v);
    va.push_back(ma.count(k) ? ma[k] : 0.0);
  }
  for (const auto& [k, v] : ma)
    if (!mb.count(k)) return std::nullopt;
  return ratio(va, vb);
}

std::vector<double> diag_vector(const HamiltonianSpec& s) {
  std::vector<double> v = s.mu_up;
  v.insert(v.end(), s.mu_down.begin(), s.mu_down.end());
  v.push_back(s.u);
  v.push_back(s.v);
  return v;
}

std::optional<double> diag_ratio(const HamiltonianSpec& a, const HamiltonianSpec& b) {
  return ratio(diag_vector(a), diag_vector(b));
}

GB measure_exact(const StateVector& psi, const std::vector<QiteGenerator>& gens, const HamiltonianSpec& target) {
  const std::size_t n = gens.size();
  std::vector<StateVector> hv;
  hv.reserve(n);
  for (const QiteGenerator& gen : gens) hv.push_back(Operator(gen.spec, psi.basis_ptr()).apply(psi));
  const StateVector h = Operator(target, psi.basis_ptr()).apply(psi);
  GB r;
  r.g.resize(n, n);
  r.b.resize(n);
  r.mean.resize(n);
  for (std::size_t a = 0; a < n; ++a) r.mean(a) = overlap(psi, hv[a]).real();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t c = a; c < n; ++c) {
      const double v = overlap(hv[a], hv[c]).real() - r.mean(a) * r.mean(c);
      r.g(a, c) = r.g(c, a) = v;
    }
    r.b(a) = overlap(hv[a], h).imag();
  }
  r.energy = overlap(psi, h).real();
  return r;
}

class ShotMeasurer {
 public:
  ShotMeasurer(const StateVector& psi, const ShotConfig& cfg, std::uint64_t stream)
      : psi_(psi), cfg_(cfg), stream_(stream) {}

  const EstimateResult& get(const std::string& key, const std::function<std::vector<MeasurementSetting>()>& plan) {
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    EstimateResult r = sample_and_estimate(psi_, plan(), cfg_, stream_ * 1000003ull + std::hash<std::string>{}(key), key);
    settings_ += r.settings;
    runs_ += r.runs;
    return cache_.emplace(key, r).first->second;
  }

  std::vector<EstimateResult> batch(const std::vector<DiagonalFn>& fns) {
    if (fns.empty()) return {};
    MeasurementSetting s;
    s.label = "diag";
    auto r = sample_batch(psi_, s, fns, cfg_, stream_ * 1000003ull + 17);
    settings_ += 1;
    runs_ += r.front().runs;
    return r;
  }

  int settings() const { return settings_; }
  long runs() const { return runs_; }

 private:
  const StateVector& psi_;
  ShotConfig cfg_;
  std::uint64_t stream_;
  std::map<std::string, EstimateResult> cache_;
  int settings_ = 0;
  long runs_ = 0;
};

struct Scaled {
  double value = 0.0;
  double se = 0.0;
};

GB measure_shots(const StateVector& psi, const std::vector<QiteGenerator>& gens, const HamiltonianSpec& target,
                 const ShotConfig& cfg, std::uint64_t stream) {
  const int n = static_cast<int>(gens.size());
  std::vector<bool> hop(n);
  for (int a = 0; a < n; ++a) {
    if (is_hopping(gens[a].spec))
      hop[a] = true;
    else if (!is_diagonal(gens[a].spec))
      throw ParameterError("shot mode needs generators that are purely hopping or purely diagonal: " + gens[a].name);
  }
  const HamiltonianSpec t_tgt = hopping_part(target);
  const HamiltonianSpec d_tgt = diagonal_part(target);
  const bool has_t = t_tgt.has_offdiagonal();
  const bool has_d = has_diagonal_part(d_tgt);

  // Target parts expressed through generators where possible.
  int t_gen = -1, d_gen = -1;
  double t_lam = 0.0, d_lam = 0.0;
  for (int a = 0; a < n && has_t; ++a)
    if (hop[a])
      if (auto l = hop_ratio(t_tgt, gens[a].spec)) {
        t_gen = a;
        t_lam = *l;
        break;
      }
  for (int a = 0; a < n && has_d; ++a)
    if (!hop[a])
      if (auto l = diag_ratio(d_tgt, gens[a].spec)) {
        d_gen = a;
        d_lam = *l;
        break;
      }

  ShotMeasurer m(psi, cfg, stream);

  // One diagonal setting serves every diagonal object.
  std::vector<DiagonalFn> fns;
  std::map<std::pair<int, int>, int> diag_index;
  auto add_fn = [&](int a, int c, DiagonalFn f) {
    diag_index[{a, c}] = static_cast<int>(fns.size());
    fns.push_back(std::move(f));
  };
  for (int a = 0; a < n; ++a) {
    if (hop[a]) continue;
    const DiagonalFn fa = diagonal_fn(gens[a].spec);
    add_fn(a, -1, fa);
    for (int c = a; c < n; ++c)
      if (!hop[c]) {
        const DiagonalFn fc = diagonal_fn(gens[c].spec);
        add_fn(a, c, [fa, fc](Word u, Word d) { return fa(u, d) * fc(u, d); });
      }
  }
  if (has_d) add_fn(-1, -1, diagonal_fn(d_tgt));
  const std::vector<EstimateResult> diag = m.batch(fns);
  auto dget = [&](int a, int c) { return diag[diag_index.at({a, c})]; };

  auto hop_mean = [&](int a) -> const EstimateResult& {
    return m.get("H" + std::to_string(a), [&] { return plan_hopping(gens[a].spec); });
  };

  GB r;
  r.g.resize(n, n);
  r.b.resize(n);
  r.mean.resize(n);
  for (int a = 0; a < n; ++a) r.mean(a) = hop[a] ? hop_mean(a).mean : dget(a, -1).mean;

  for (int a = 0; a < n; ++a)
    for (int c = a; c < n; ++c) {
      double re = 0.0;
      if (hop[a] && hop[c]) {
        re = m.get("HH" + std::to_string(a) + "," + std::to_string(c),
                   [&] { return plan_hopping_product(gens[a].spec, gens[c].spec); }).mean;
      } else if (hop[a] != hop[c]) {
        const int h = hop[a] ? a : c, d = hop[a] ? c : a;
        re = m.get("ReHD" + std::to_string(h) + "," + std::to_string(d),
                   [&] { return plan_cross(gens[h].spec, gens[d].spec, CrossPart::kReal); }).mean;
      } else {
        re = dget(a, c).mean;
      }
      r.g(a, c) = r.g(c, a) = re - r.mean(a) * r.mean(c);
    }

  // Im<Hop D> for a hopping generator (or the target hopping part) and a
  // diagonal generator (or the target diagonal part).
  auto im_cross = [&](int h, int d) {
    const std::string hk = h >= 0 ? std::to_string(h) : "T";
    const std::string dk = d >= 0 ? std::to_string(d) : "D";
    return m.get("ImHD" + hk + "," + dk, [&] {
      return plan_cross(h >= 0 ? gens[h].spec : t_tgt, d >= 0 ? gens[d].spec : d_tgt, CrossPart::kImag);
    }).mean;
  };

  for (int a = 0; a < n; ++a) {
    double b = 0.0;
    if (hop[a]) {
      if (has_t && !hop_ratio(t_tgt, gens[a].spec))
        throw ParameterError("shot mode needs the target hopping part proportional to generator " + gens[a].name);
      if (has_d) b = d_gen >= 0 ? d_lam * im_cross(a, d_gen) : im_cross(a, -1);
    } else if (has_t) {
      b = t_gen >= 0 ? -t_lam * im_cross(t_gen, a) : -im_cross(-1, a);
    }
    r.b(a) = b;
  }

  Scaled et, ed;
  if (has_t) {
    if (t_gen >= 0) {
      const EstimateResult& e = hop_mean(t_gen);
      et = {t_lam * e.mean, std::abs(t_lam) * e.stderr_};
    } else {
      const EstimateResult& e = m.get("T", [&] { return plan_hopping(t_tgt); });
      et = {e.mean, e.stderr_};
    }
  }
  if (has_d) ed = {dget(-1, -1).mean, dget(-1, -1).stderr_};
  r.energy = et.value + ed.value;
  r.energy_stderr = std::hypot(et.se, ed.se);
  r.settings = m.settings();
  r.runs = m.runs();
  return r;
}

Eigen::VectorXd solve_regularized(const Eigen::MatrixXd& g, const Eigen::VectorXd& b, double reg, double cutoff) {
  Eigen::MatrixXd gr = 0.5 * (g + g.transpose());
  gr.diagonal().array() += reg;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gr);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  int kept = 0;
  for (int k = 0; k < gr.rows(); ++k) {
    const double l = es.eigenvalues()(k);
    if (l <= cutoff) continue;
    ++kept;
    const Eigen::VectorXd v = es.eigenvectors().col(k);
    x += v * (v.dot(b) / l);
  }
  if (kept == 0) throw ConditioningError("metric tensor is singular beyond the regularization");
  return x;
}

double generator_time(const HamiltonianSpec& s, double theta) {
  double peak = 0.0;
  for (const Tunneling& t : s.tunnelings) peak = std::max(peak, std::abs(t.t));
  if (peak > 0.0) return std::abs(theta) * peak / kMaxTunneling;
  peak = std::max(std::abs(s.u), std::abs(s.v));
  for (double x : s.mu_up) peak = std::max(peak, std::abs(x));
  for (double x : s.mu_down) peak = std::max(peak, std::abs(x));
  return std::abs(theta) * peak / kMaxInteraction;
}

}  // namespace

std::vector<QiteGenerator> default_generators(const LatticeGeometry& g) {
  return {{"Ht", hopping_spec(g, g.nn_bonds(), 1.0)}, {"HU", interaction_spec(g, 1.0)}};
}

void QiteConfig::validate() const {
  if (!(dtau > 0.0)) throw ParameterError("dtau must be positive");
  if (n_steps < 0) throw ParameterError("n_steps must be non-negative");
  if (regularization < 0.0) throw ParameterError("regularization must be non-negative");
  if (dephase_time < 0.0) throw ParameterError("dephase time must be non-negative");
  if (store_states && n_steps + 1 > kMaxStoredStates)
    throw ParameterError("storing more than " + std::to_string(kMaxStoredStates) + " states");
}

GB measure_g_b(const StateVector& state, const std::vector<QiteGenerator>& generators, const HamiltonianSpec& target,
               const QiteConfig& cfg, std::uint64_t stream) {
  if (generators.empty()) throw ParameterError("generator list is empty");
  GB r = cfg.shot_mode ? measure_shots(state, generators, target, cfg.shots, stream)
                       : measure_exact(state, generators, target);
  r.g = 0.5 * (r.g + r.g.transpose()).eval();
  return r;
}

std::vector<double> QiteTrace::energies() const {
  std::vector<double> e;
  for (const QiteStep& s : steps) e.push_back(s.energy);
  return e;
}

std::vector<double> normalization_chain(const std::vector<double>& energies, double dtau, double reference) {
  std::vector<double> c(energies.size(), kNan);
  if (c.empty()) return c;
  c[0] = 1.0;
  double inv2 = 1.0;  // 1 / c^2
  for (std::size_t k = 0; k + 1 < energies.size(); ++k) {
    const double f = 1.0 - 2.0 * dtau * (energies[k] - reference);
    if (!(f > 0.0)) break;
    inv2 *= f;
    c[k + 1] = 1.0 / std::sqrt(inv2);
  }
  return c;
}

double chain_reference(const std::vector<double>& energies) {
  double r = 0.0;
  for (double e : energies) r = std::max(r, e);
  return r;
}

QiteTrace varqite_run(const StateVector& initial, const HamiltonianSpec& target, const QiteConfig& cfg) {
  cfg.validate();
  const std::vector<QiteGenerator> gens =
      cfg.generators.empty() ? default_generators(target.geometry) : cfg.generators;
  if (gens.empty()) throw ParameterError("generator list is empty");
  QiteTrace tr;
  tr.dtau = cfg.dtau;
  tr.dephase_time = cfg.dephase_time;
  for (const QiteGenerator& g : gens) tr.generators.push_back(g.name);

  StateVector psi = initial;
  psi.normalize();
  double time = 0.0;
  if (cfg.dephase_time > 0.0) {
    HamiltonianSpec native = hopping_part(target);
    native.u = target.u;
    psi = propagate_real(psi, native, cfg.dephase_time);
    time += cfg.dephase_time;
  }
  for (int n = 0; n <= cfg.n_steps; ++n) {
    const GB gb = measure_g_b(psi, gens, target, cfg, static_cast<std::uint64_t>(n));
    QiteStep st;
    st.tau = n * cfg.dtau;
    st.energy = gb.energy;
    st.energy_stderr = gb.energy_stderr;
    st.g = gb.g;
    st.b = gb.b;
    st.settings = gb.settings;
    st.runs = gb.runs;
    if (cfg.store_states) tr.states.push_back(psi);
    if (n > 0 && st.energy > tr.steps.back().energy + 1e-12) ++tr.increases;
    if (n < cfg.n_steps) {
      const Eigen::VectorXd x = solve_regularized(gb.g, gb.b, cfg.regularization, cfg.pinv_cutoff);
      for (std::size_t a = 0; a < gens.size(); ++a) {
        const double theta = cfg.dtau * x(static_cast<Eigen::Index>(a));
        st.theta.push_back(theta);
        if (theta == 0.0) continue;
        psi = propagate_real(psi, gens[a].spec.scaled(theta), 1.0);
        time += generator_time(gens[a].spec, theta);
      }
    }
    st.physical_time = time;
    tr.steps.push_back(std::move(st));
  }
  tr.energy_reference = chain_reference(tr.energies());
  const std::vector<double> c = normalization_chain(tr.energies(), cfg.dtau, tr.energy_reference);
  for (std::size_t k = 0; k < c.size(); ++k) tr.steps[k].c = c[k];
  return tr;
}

std::vector<double> exact_ite_reference(const StateVector& initial, const HamiltonianSpec& target, double dtau,
                                        int n_steps) {
  if (!(dtau > 0.0)) throw ParameterError("dtau must be positive");
  const Operator h(target, initial.basis_ptr());
  StateVector psi = initial;
  psi.normalize();
  std::vector<double> e{expectation(psi, h)};
  for (int n = 0; n < n_steps; ++n) {
    psi = propagate_imag(psi, h, dtau).state;
    e.push_back(expectation(psi, h));
  }
  return e;
}

QiteTrace exact_ite_trace(const StateVector& initial, const HamiltonianSpec& target, double dtau, int n_steps,
                          bool store_states) {
  if (!(dtau > 0.0)) throw ParameterError("dtau must be positive");
  if (store_states && n_steps + 1 > kMaxStoredStates)
    throw ParameterError("storing more than " + std::to_string(kMaxStoredStates) + " states");
  const Operator h(target, initial.basis_ptr());
  QiteTrace tr;
  tr.dtau = dtau;
  tr.generators = {"exact"};
  StateVector psi = initial;
  psi.normalize();
  for (int n = 0; n <= n_steps; ++n) {
    QiteStep st;
    st.tau = n * dtau;
    st.energy = expectation(psi, h);
    if (store_states) tr.states.push_back(psi);
    if (n > 0 && st.energy > tr.steps.back().energy + 1e-12) ++tr.increases;
    tr.steps.push_back(std::move(st));
    if (n < n_steps) psi = propagate_imag(psi, h, dtau).state;
  }
  tr.energy_reference = chain_reference(tr.energies());
  const std::vector<double> c = normalization_chain(tr.energies(), dtau, tr.energy_reference);
  for (std::size_t k = 0; k < c.size(); ++k) tr.steps[k].c = c[k];
  return tr;
}

std::vector<int> qlanczos_indices(const std::vector<int>& candidates, int anchor,
                                  const std::function<double(int, int)>& overlap, double max_overlap) {
  std::vector<int> below, above;
  for (int k : candidates) (k < anchor ? below : above).push_back(k);
  std::vector<int> kept{anchor};
  int last = anchor;
  for (auto it = below.rbegin(); it != below.rend(); ++it)
    if (overlap(*it, last) < max_overlap) kept.push_back(last = *it);
  last = anchor;
  for (int k : above)
    if (k != anchor && overlap(k, last) < max_overlap) kept.push_back(last = k);
  std::sort(kept.begin(), kept.end());
  return kept;
}

double solve_krylov(KrylovPair& pair, double drop_ratio) {
  const Eigen::MatrixXcd s = 0.5 * (pair.S + pair.S.adjoint());
  const Eigen::MatrixXcd h = 0.5 * (pair.H + pair.H.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s);
  const Eigen::VectorXd& l = es.eigenvalues();
  pair.largest = l.maxCoeff();
  if (!(pair.largest > 0.0)) throw ConditioningError("overlap matrix has no positive direction");
  std::vector<int> keep;
  for (int k = 0; k < l.size(); ++k)
    if (l(k) >= drop_ratio * pair.largest) keep.push_back(k);
  pair.dropped = static_cast<int>(l.size() - keep.size());
  if (keep.empty()) throw ConditioningError("all overlap directions discarded");
  pair.smallest_kept = l(keep.front());
  Eigen::MatrixXcd x(s.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k)
    x.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]) / std::sqrt(l(keep[k]));
  const Eigen::MatrixXcd heff = x.adjoint() * h * x;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eh(0.5 * (heff + heff.adjoint()));
  return eh.eigenvalues()(0);
}

namespace {

std::vector<int> same_parity(int count, int anchor) {
  std::vector<int> c;
  for (int k = anchor % 2; k < count; k += 2) c.push_back(k);
  return c;
}

int argmin_energy(const QiteTrace& t) {
  if (t.steps.empty()) throw ParameterError("trace has no steps");
  int m = 0;
  for (int k = 1; k < static_cast<int>(t.steps.size()); ++k)
    if (t.steps[k].energy < t.steps[m].energy) m = k;
  return m;
}

}  // namespace

QLanczosResult qlanczos_approx(const QiteTrace& trace, const QLanczosOptions& opt) {
  const int m = argmin_energy(trace);
  const int count = static_cast<int>(trace.steps.size());
  for (int k = 0; k <= m; ++k)
    if (!std::isfinite(trace.steps[k].c))
      throw ConditioningError("normalization chain breaks down: 1 - 2 dtau E <= 0");
  // Past a breakdown the chain is unusable; restrict to its valid prefix.
  int valid = count;
  for (int k = 0; k < count; ++k)
    if (!std::isfinite(trace.steps[k].c)) {
      valid = k;
      break;
    }
  auto c = [&](int k) { return trace.steps[k].c; };
  auto s_of = [&](int a, int b) { return c(a) * c(b) / (c((a + b) / 2) * c((a + b) / 2)); };
  QLanczosResult r;
  r.pair.indices = qlanczos_indices(same_parity(valid, m), m, s_of, opt.max_overlap);
  const int n = static_cast<int>(r.pair.indices.size());
  r.pair.S.resize(n, n);
  r.pair.H.resize(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const int ia = r.pair.indices[a], ib = r.pair.indices[b];
      const double s = s_of(ia, ib);
      r.pair.S(a, b) = s;
      r.pair.H(a, b) = s * trace.steps[(ia + ib) / 2].energy;
    }
  r.energy = solve_krylov(r.pair, opt.drop_ratio);
  return r;
}

QLanczosResult qlanczos_complete(const QiteTrace& trace, const HamiltonianSpec& target, const CompleteOptions& opt) {
  if (trace.states.size() != trace.steps.size()) throw ParameterError("complete QLanczos needs stored states");
  const int m = argmin_energy(trace);
  const int count = static_cast<int>(trace.states.size());
  auto ov = [&](int a, int b) { return std::abs(overlap(trace.states[a], trace.states[b])); };
  QLanczosResult r;
  r.pair.indices = qlanczos_indices(same_parity(count, m), m, ov, opt.base.max_overlap);
  const int n = static_cast<int>(r.pair.indices.size());
  const Operator h(target, trace.states.front().basis_ptr());
  std::vector<StateVector> hv;
  for (int k : r.pair.indices) hv.push_back(h.apply(trace.states[k]));
  std::mt19937_64 rng(opt.shots.seed ^ 0x5bd1e995ull);
  r.pair.S.resize(n, n);
  r.pair.H.resize(n, n);
  for (int a = 0; a < n; ++a) {
    r.pair.S(a, a) = 1.0;
    r.pair.H(a, a) = overlap(trace.states[r.pair.indices[a]], hv[a]).real();
    for (int b = a + 1; b < n; ++b) {
      cplx s = overlap(trace.states[r.pair.indices[a]], trace.states[r.pair.indices[b]]);
      if (opt.shot_mode) {
        // Compute-uncompute: the return probability is |S|^2.
        const double p = std::min(1.0, std::norm(s));
        std::binomial_distribution<long> draw(opt.shots.shots, p);
        const double mag = std::sqrt(static_cast<double>(draw(rng)) / static_cast<double>(opt.shots.shots));
        s = std::abs(s) > 0.0 ? s / std::abs(s) * mag : cplx(mag, 0.0);
      }
      r.pair.S(a, b) = s;
      r.pair.S(b, a) = std::conj(s);
      const cplx hab = overlap(trace.states[r.pair.indices[a]], hv[b]);
      r.pair.H(a, b) = hab;
      r.pair.H(b, a) = std::conj(hab);
    }
  }
  r.energy = solve_krylov(r.pair, opt.base.drop_ratio);
  return r;
}

void write_trace(const QiteTrace& trace, const std::string& json_path, const std::string& csv_path) {
  using nlohmann::json;
  json j;
  j["dtau"] = trace.dtau;
  j["generators"] = trace.generators;
  j["increases"] = trace.increases;
  j["dephase_time"] = trace.dephase_time;
  j["energy_reference"] = trace.energy_reference;
  j["steps"] = json::array();
  for (const QiteStep& s : trace.steps) {
    json e;
    e["tau"] = s.tau;
    e["energy"] = s.energy;
    e["energy_stderr"] = s.energy_stderr;
    e["c"] = std::isfinite(s.c) ? json(s.c) : json(nullptr);
    e["theta"] = s.theta;
    e["physical_time"] = s.physical_time;
    e["settings"] = s.settings;
    e["runs"] = s.runs;
    json g = json::array();
    for (int r = 0; r < s.g.rows(); ++r) {
      std::vector<double> row(s.g.cols());
      for (int c = 0; c < s.g.cols(); ++c) row[c] = s.g(r, c);
      g.push_back(row);
    }
    e["g"] = g;
    e["b"] = std::vector<double>(s.b.data(), s.b.data() + s.b.size());
    j["steps"].push_back(e);
  }
  std::ofstream fj(json_path);
  if (!fj) throw Error("cannot open " + json_path);
  fj << j.dump(1) << '\n';

  std::ofstream fc(csv_path);
  if (!fc) throw Error("cannot open " + csv_path);
  fc.precision(12);
  fc << "step,tau,energy,energy_stderr,c,physical_time,settings,runs";
  for (const std::string& g : trace.generators) fc << ",theta_" << g;
  fc << '\n';
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const QiteStep& s = trace.steps[k];
    fc << k << ',' << s.tau << ',' << s.energy << ',' << s.energy_stderr << ',' << s.c << ',' << s.physical_time
       << ',' << s.settings << ',' << s.runs;
    for (std::size_t a = 0; a < trace.generators.size(); ++a) fc << ',' << (a < s.theta.size() ? s.theta[a] : 0.0);
    fc << '\n';
  }
}

QiteTrace read_trace(const std::string& json_path) {
  std::ifstream f(json_path);
  if (!f) throw Error("cannot open " + json_path);
  nlohmann::json j;
  try {
    f >> j;
    QiteTrace t;
    t.dtau = j.at("dtau").get<double>();
    t.generators = j.at("generators").get<std::vector<std::string>>();
    t.increases = j.value("increases", 0);
    t.dephase_time = j.value("dephase_time", 0.0);
    t.energy_reference = j.value("energy_reference", 0.0);
    for (const auto& e : j.at("steps")) {
      QiteStep s;
      s.tau = e.at("tau").get<double>();
      s.energy = e.at("energy").get<double>();
      s.energy_stderr = e.value("energy_stderr", 0.0);
      s.c = e.at("c").is_null() ? kNan : e.at("c").get<double>();
      s.theta = e.value("theta", std::vector<double>{});
      s.physical_time = e.value("physical_time", 0.0);
      s.settings = e.value("settings", 0);
      s.runs = e.value("runs", 0L);
      if (e.contains("g")) {
        const auto rows = e.at("g").get<std::vector<std::vector<double>>>();
        s.g.resize(static_cast<Eigen::Index>(rows.size()), rows.empty() ? 0 : static_cast<Eigen::Index>(rows[0].size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
          for (std::size_t c = 0; c < rows[r].size(); ++c) s.g(r, c) = rows[r][c];
      }
      if (e.contains("b")) {
        const auto b = e.at("b").get<std::vector<double>>();
        s.b = Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size()));
      }
      t.steps.push_back(std::move(s));
    }
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed trace: ") + e.what());
  }
}

}  // namespace fhsim
