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
#include <map>
#include <numbers>
#include <tuple>

#include "fhsim/errors.hpp"
#include "fhsim/evolve.hpp"

namespace fhsim {

namespace {

using HopKey = std::tuple<int, int, int>;  // (i, j, spin), i < j

std::map<HopKey, double> hop_table(const HamiltonianSpec& s) {
  std::map<HopKey, double> m;
  for (const auto* list : {&s.tunnelings, &s.nnn})
    for (const auto& h : *list) {
      const int i = std::min(h.bond.i, h.bond.j);
      const int j = std::max(h.bond.i, h.bond.j);
      for (int sp = 0; sp < 2; ++sp)
        if (has_spin(h.spins, static_cast<Spin>(sp))) m[{i, j, sp}] += h.t;
    }
  return m;
}

}  // namespace

bool same_couplings(const HamiltonianSpec& a, const HamiltonianSpec& b, double tol) {
  if (!(a.geometry == b.geometry)) return false;
  if (std::abs(a.u - b.u) > tol || std::abs(a.v - b.v) > tol) return false;
  for (std::size_t i = 0; i < a.mu_up.size(); ++i)
    if (std::abs(a.mu_up[i] - b.mu_up[i]) > tol || std::abs(a.mu_down[i] - b.mu_down[i]) > tol) return false;
  auto ta = hop_table(a);
  auto tb = hop_table(b);
  for (const auto& [k, v] : ta) {
    auto it = tb.find(k);
    if (std::abs(v - (it == tb.end() ? 0.0 : it->second)) > tol) return false;
  }
  for (const auto& [k, v] : tb)
    if (!ta.count(k) && std::abs(v) > tol) return false;
  return true;
}

double Schedule::total_time() const {
  double t = 0.0;
  for (const auto& s : segments) t += s.duration;
  return t;
}

HamiltonianSpec Schedule::at(double time) const {
  if (segments.empty()) throw ParameterError("empty schedule");
  double t0 = 0.0;
  for (const auto& s : segments) {
    if (time <= t0 + s.duration || &s == &segments.back()) {
      const double f = std::clamp((time - t0) / s.duration, 0.0, 1.0);
      return s.start.scaled(1.0 - f) + s.end.scaled(f);
    }
    t0 += s.duration;
  }
  return segments.back().end;
}

void Schedule::validate() const {
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (!(segments[k].duration > 0.0)) throw ParameterError("schedule segment durations must be positive");
    if (k > 0 && !same_couplings(segments[k - 1].end, segments[k].start, 1e-12))
      throw ParameterError("schedule couplings jump between segments " + std::to_string(k - 1) + " and " +
                           std::to_string(k));
  }
}

StateVector run_schedule(const StateVector& state, const Schedule& schedule, double dt, const KrylovOptions& opt) {
  if (!(dt > 0.0)) throw ParameterError("schedule micro-step must be positive");
  schedule.validate();
  StateVector psi = state;
  for (const auto& seg : schedule.segments) {
    const int n = std::max(1, static_cast<int>(std::ceil(seg.duration / dt - 1e-9)));
    const double h = seg.duration / n;
    for (int k = 0; k < n; ++k) {
      const double f = (k + 0.5) / n;
      const HamiltonianSpec spec = seg.start.scaled(1.0 - f) + seg.end.scaled(f);
      propagate_real_inplace(psi, Operator(spec, psi.basis_ptr()), h, opt);
    }
  }
  return psi;
}

double CompiledSequence::physical_time() const {
  double t = 0.0;
  for (const auto& p : pulses) t += p.duration;
  return t;
}

void CompiledSequence::append(const CompiledSequence& other) {
  pulses.insert(pulses.end(), other.pulses.begin(), other.pulses.end());
}

StateVector apply_fswap_exact(const StateVector& state, const std::vector<Bond>& bonds) {
  const FockBasis& b = state.basis();
  StateVector out(state.basis_ptr());
  // c_i <-> c_j for each bond; the sign is the parity of the permutation of
  // occupied modes, obtained by applying the swaps as hop strings.
  for (std::size_t k = 0; k < b.dim(); ++k) {
    Word w[2] = {b.up_word(k), b.down_word(k)};
    int sign = 1;
    for (int s = 0; s < 2; ++s) {
      for (const Bond& bd : bonds) {
        const bool oi = w[s] >> bd.i & 1u;
        const bool oj = w[s] >> bd.j & 1u;
        if (oi == oj) {
          if (oi) sign = -sign;
          continue;
        }
        auto r = oi ? hop_word(w[s], bd.j, bd.i) : hop_word(w[s], bd.i, bd.j);
        sign *= r->sign;
        w[s] = r->word;
      }
    }
    out[b.index(w[0], w[1])] = static_cast<double>(sign) * state[k];
  }
  return out;
}

StateVector apply_sequence(const StateVector& state, const CompiledSequence& seq, const SequenceOptions& opt) {
  StateVector psi = state;
  for (const auto& p : seq.pulses) {
    if (p.kind == PulseKind::kFswap && opt.closed_form_fswap) {
      psi = apply_fswap_exact(psi, p.swap_bonds);
      continue;
    }
    propagate_real_inplace(psi, Operator(p.spec, psi.basis_ptr()), p.duration, opt.krylov);
  }
  return psi;
}

CompiledSequence compile_fswap(const LatticeGeometry& g, const std::vector<Bond>& bonds, double t) {
  HamiltonianSpec spec(g);
  for (const Bond& b : bonds) {
    if (!g.is_nn(b)) throw ParameterError("fSWAP bonds must be nearest neighbours");
    spec += fswap_hamiltonian(g, b, t);
  }
  CompiledSequence seq;
  seq.pulses.push_back({"HfS", std::move(spec), std::numbers::pi / (2.0 * t), PulseKind::kFswap, bonds});
  return seq;
}

CompiledSequence compile_nnn_step(const LatticeGeometry& g, double tp, double Tp, NnnOrientation orientation) {
  CompiledSequence seq;
  const double theta = tp * Tp;
  if (theta == 0.0 || g.rows() < 2 || g.cols() < 2) return seq;
  const bool d1 = orientation != NnnOrientation::kDiag2;
  const bool d2 = orientation != NnnOrientation::kDiag1;
  // Plaquettes with equal (x mod 2, y mod 2) share no sites.
  for (int px = 0; px < 2; ++px) {
    for (int py = 0; py < 2; ++py) {
      std::vector<Bond> swaps;
      HamiltonianSpec hop(g);
      for (const Plaquette& p : plaquettes(g)) {
        if (p.x % 2 != px || p.y % 2 != py) continue;
        // After swapping (x+1,y) <-> (x+1,y+1), the bottom and top legs carry
        // the two diagonals of the plaquette.
        swaps.push_back({g.site(p.x + 1, p.y), g.site(p.x + 1, p.y + 1)});
        const double sgn = theta > 0.0 ? 1.0 : -1.0;
        if (d1) hop.add_hop({g.site(p.x, p.y), g.site(p.x + 1, p.y)}, sgn);
        if (d2) hop.add_hop({g.site(p.x, p.y + 1), g.site(p.x + 1, p.y + 1)}, sgn);
      }
      if (swaps.empty()) continue;
      seq.append(compile_fswap(g, swaps));
      seq.pulses.push_back({"Ht", std::move(hop), std::abs(theta), PulseKind::kQuench, {}});
      seq.append(compile_fswap(g, swaps));
    }
  }
  return seq;
}

TrotterResult adiabatic_trotter_nnn(const StateVector& state, const HamiltonianSpec& fh_spec, double tp_final,
                                    double t_trotter, double dT, const SequenceOptions& opt) {
  if (!(dT > 0.0) || !(t_trotter > 0.0)) throw ParameterError("Trotter times must be positive");
  const double ratio = t_trotter / dT;
  const int steps = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - steps) > 1e-9 * ratio) throw ParameterError("time step must divide the Trotter time");
  const LatticeGeometry& g = fh_spec.geometry;
  TrotterResult r{state, 2.0 * t_trotter, 0.0, steps};
  const Operator fh(fh_spec, state.basis_ptr());
  for (int k = 1; k <= steps; ++k) {
    const double tk = k * dT;
    const double tk1 = (k - 1) * dT;
    const double dtt = (tk + tk1) * dT / (2.0 * t_trotter);
    propagate_real_inplace(r.state, fh, dT / 2.0, opt.krylov);
    CompiledSequence seq = compile_nnn_step(g, tp_final, dtt / 2.0, NnnOrientation::kDiag1);
    seq.append(compile_nnn_step(g, tp_final, dtt, NnnOrientation::kDiag2));
    seq.append(compile_nnn_step(g, tp_final, dtt / 2.0, NnnOrientation::kDiag1));
    r.state = apply_sequence(r.state, seq, opt);
    propagate_real_inplace(r.state, fh, dT / 2.0, opt.krylov);
    r.pulse_time += dT + seq.physical_time();
  }
  return r;
}

}  // namespace fhsim
