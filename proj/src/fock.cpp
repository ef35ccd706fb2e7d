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

#include "fhsim/fock.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "fhsim/errors.hpp"
#include "fhsim/vec.hpp"

namespace fhsim {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return r;
}

std::vector<Word> words_with_popcount(int bits, int ones) {
  std::vector<Word> out;
  if (ones < 0 || ones > bits) return out;
  out.reserve(binomial(bits, ones));
  if (ones == 0) {
    out.push_back(0);
    return out;
  }
  // Gosper's hack enumerates k-subsets in increasing numeric order.
  std::uint64_t w = (std::uint64_t{1} << ones) - 1;
  const std::uint64_t limit = std::uint64_t{1} << bits;
  while (w < limit) {
    out.push_back(static_cast<Word>(w));
    const std::uint64_t c = w & (~w + 1);
    const std::uint64_t r = w + c;
    w = (((r ^ w) >> 2) / c) | r;
  }
  return out;
}

std::optional<HopResult> hop_word(Word w, int i, int j) {
  const Word bi = Word{1} << i;
  const Word bj = Word{1} << j;
  if (!(w & bj)) return std::nullopt;
  if (i == j) return HopResult{w, 1};
  if (w & bi) return std::nullopt;
  const int lo = i < j ? i : j;
  const int hi = i < j ? j : i;
  const Word between = ((Word{1} << hi) - 1) & ~((Word{1} << (lo + 1)) - 1);
  const int sign = (std::popcount(w & between) & 1) ? -1 : 1;
  return HopResult{(w & ~bj) | bi, sign};
}

FockBasis::FockBasis(const LatticeGeometry& geometry, SpinSector sector, std::size_t cap)
    : geometry_(geometry), sector_(sector) {
  const int n = geometry.num_sites();
  if (sector.n_up < 0 || sector.n_down < 0 || sector.n_up > n || sector.n_down > n)
    throw ParameterError("sector (" + std::to_string(sector.n_up) + "," + std::to_string(sector.n_down) +
                         ") invalid for " + std::to_string(n) + " sites");
  const std::uint64_t d = binomial(n, sector.n_up) * binomial(n, sector.n_down);
  if (d > cap)
    throw SizeError("basis dimension " + std::to_string(d) + " exceeds cap " + std::to_string(cap));
  up_ = words_with_popcount(n, sector.n_up);
  down_ = words_with_popcount(n, sector.n_down);
  for (std::uint32_t k = 0; k < up_.size(); ++k) up_rank_.emplace(up_[k], k);
  for (std::uint32_t k = 0; k < down_.size(); ++k) down_rank_.emplace(down_[k], k);
}

std::size_t FockBasis::rank(Spin s, Word w) const {
  const auto& m = s == Spin::kUp ? up_rank_ : down_rank_;
  auto it = m.find(w);
  return it == m.end() ? npos : it->second;
}

std::size_t FockBasis::index(Word up, Word down) const {
  const std::size_t ru = rank(Spin::kUp, up);
  const std::size_t rd = rank(Spin::kDown, down);
  if (ru == npos || rd == npos) return npos;
  return ru * down_.size() + rd;
}

StateVector::StateVector(BasisPtr basis) : basis_(std::move(basis)), amp_(basis_->dim()) {}

StateVector::StateVector(BasisPtr basis, std::vector<cplx> amplitudes)
    : basis_(std::move(basis)), amp_(std::move(amplitudes)) {
  if (amp_.size() != basis_->dim()) throw IncompatibleError("amplitude count does not match basis dimension");
}

StateVector StateVector::product(BasisPtr basis, Word up, Word down) {
  StateVector s(basis);
  const std::size_t k = basis->index(up, down);
  if (k == FockBasis::npos) throw ParameterError("configuration is outside the basis sector");
  s.amp_[k] = 1.0;
  return s;
}

double StateVector::norm() const { return std::sqrt(vec::norm_sq(amp_.data(), amp_.size())); }

double StateVector::normalize() {
  const double n = norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericError("cannot normalize a zero or non-finite state");
  vec::scale(1.0 / n, amp_.data(), amp_.size());
  return n;
}

void StateVector::set_zero() { std::fill(amp_.begin(), amp_.end(), cplx{}); }

void require_compatible(const StateVector& a, const StateVector& b) {
  if (a.basis_ptr() != b.basis_ptr() && !a.basis().compatible(b.basis()))
    throw IncompatibleError("states live in different bases");
}

cplx overlap(const StateVector& a, const StateVector& b) {
  require_compatible(a, b);
  return vec::dot(a.data(), b.data(), a.size());
}

double state_distance(const StateVector& a, const StateVector& b) {
  // Norm of the part of b orthogonal to a; avoids the cancellation in 1 - |<a|b>|^2.
  const double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 1.0;
  const cplx ov = overlap(a, b) / (na * na);
  double r = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) r += std::norm(b[k] - ov * a[k]);
  return std::min(1.0, std::sqrt(r) / nb);
}

void apply_hop(const StateVector& state, Bond bond, Spin spin, double amplitude, StateVector& out) {
  require_compatible(state, out);
  const FockBasis& b = state.basis();
  const std::size_t dd = b.dim_down();
  const auto& words = b.words(spin);
  for (std::size_t r = 0; r < words.size(); ++r) {
    for (int dir = 0; dir < 2; ++dir) {
      const int i = dir == 0 ? bond.i : bond.j;
      const int j = dir == 0 ? bond.j : bond.i;
      auto h = hop_word(words[r], i, j);
      if (!h) continue;
      const std::size_t r2 = b.rank(spin, h->word);
      const double a = amplitude * h->sign;
      if (spin == Spin::kUp) {
        vec::axpy_real(a, state.data() + r * dd, out.data() + r2 * dd, dd);
      } else {
        for (std::size_t u = 0; u < b.dim_up(); ++u) out[u * dd + r2] += a * state[u * dd + r];
      }
    }
  }
}

double NumberWeights::evaluate(Word up, Word down) const {
  double e = 0.0;
  for (std::size_t i = 0; i < mu_up.size(); ++i)
    if (up >> i & 1u) e += mu_up[i];
  for (std::size_t i = 0; i < mu_down.size(); ++i)
    if (down >> i & 1u) e += mu_down[i];
  e += u * std::popcount(up & down);
  if (v != 0.0) {
    for (const Bond& bd : v_bonds) {
      const int ni = static_cast<int>(up >> bd.i & 1u) + static_cast<int>(down >> bd.i & 1u);
      const int nj = static_cast<int>(up >> bd.j & 1u) + static_cast<int>(down >> bd.j & 1u);
      e += v * ni * nj;
    }
  }
  return e;
}

void apply_number_ops(const StateVector& state, const NumberWeights& w, StateVector& out) {
  require_compatible(state, out);
  const FockBasis& b = state.basis();
  for (std::size_t k = 0; k < b.dim(); ++k) out[k] += w.evaluate(b.up_word(k), b.down_word(k)) * state[k];
}

}  // namespace fhsim
