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

#pragma once

// Fixed-(N_up, N_down) Fock sectors, state vectors and elementary fermionic
// operators. Mode order: up modes of sites 0..N-1, then down modes.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "fhsim/lattice.hpp"

namespace fhsim {

using cplx = std::complex<double>;
using Word = std::uint32_t;

enum class Spin { kUp = 0, kDown = 1 };

struct SpinSector {
  int n_up = 0;
  int n_down = 0;
  friend bool operator==(const SpinSector&, const SpinSector&) = default;
};

inline constexpr std::size_t kDefaultDimensionCap = 10'000'000;

std::uint64_t binomial(int n, int k);

// Words of `bits` bits with `ones` bits set, in increasing numeric order.
std::vector<Word> words_with_popcount(int bits, int ones);

// Result of c^dag_i c_j on one spin word: the new word and the fermionic sign.
struct HopResult {
  Word word;
  int sign;
};
std::optional<HopResult> hop_word(Word w, int i, int j);

class FockBasis {
 public:
  FockBasis(const LatticeGeometry& geometry, SpinSector sector,
            std::size_t cap = kDefaultDimensionCap);

  const LatticeGeometry& geometry() const { return geometry_; }
  SpinSector sector() const { return sector_; }
  int num_sites() const { return geometry_.num_sites(); }

  std::size_t dim() const { return up_.size() * down_.size(); }
  std::size_t dim_up() const { return up_.size(); }
  std::size_t dim_down() const { return down_.size(); }

  const std::vector<Word>& words(Spin s) const { return s == Spin::kUp ? up_ : down_; }
  Word up_word(std::size_t k) const { return up_[k / down_.size()]; }
  Word down_word(std::size_t k) const { return down_[k % down_.size()]; }

  // Rank of a single-spin word, or npos.
  std::size_t rank(Spin s, Word w) const;
  // Index of the configuration (up, down), or npos.
  std::size_t index(Word up, Word down) const;
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  bool compatible(const FockBasis& other) const {
    return geometry_ == other.geometry_ && sector_ == other.sector_;
  }

 private:
  LatticeGeometry geometry_;
  SpinSector sector_;
  std::vector<Word> up_;
  std::vector<Word> down_;
  std::unordered_map<Word, std::uint32_t> up_rank_;
  std::unordered_map<Word, std::uint32_t> down_rank_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

inline BasisPtr make_basis(const LatticeGeometry& g, SpinSector s, std::size_t cap = kDefaultDimensionCap) {
  return std::make_shared<const FockBasis>(g, s, cap);
}

class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(BasisPtr basis);
  StateVector(BasisPtr basis, std::vector<cplx> amplitudes);

  // Single configuration with amplitude 1.
  static StateVector product(BasisPtr basis, Word up, Word down);

  const FockBasis& basis() const { return *basis_; }
  const BasisPtr& basis_ptr() const { return basis_; }
  std::size_t size() const { return amp_.size(); }
  cplx* data() { return amp_.data(); }
  const cplx* data() const { return amp_.data(); }
  std::vector<cplx>& amplitudes() { return amp_; }
  const std::vector<cplx>& amplitudes() const { return amp_; }
  cplx& operator[](std::size_t k) { return amp_[k]; }
  const cplx& operator[](std::size_t k) const { return amp_[k]; }

  double norm() const;
  // Returns the norm before scaling; throws NumericError on a zero vector.
  double normalize();
  void set_zero();

 private:
  BasisPtr basis_;
  std::vector<cplx> amp_;
};

void require_compatible(const StateVector& a, const StateVector& b);

cplx overlap(const StateVector& a, const StateVector& b);

// Phase-insensitive distance sqrt(1 - |<a|b>|^2) of normalized states.
double state_distance(const StateVector& a, const StateVector& b);

// out += amplitude * (c^dag_{i,s} c_{j,s} + h.c.) |state>
void apply_hop(const StateVector& state, Bond bond, Spin spin, double amplitude, StateVector& out);

// Diagonal number-operator weights evaluated on one configuration.
struct NumberWeights {
  std::vector<double> mu_up;
  std::vector<double> mu_down;
  double u = 0.0;
  double v = 0.0;
  std::vector<Bond> v_bonds;
  double evaluate(Word up, Word down) const;
};

// out += (sum mu n + U sum n_up n_dn + V sum_<ij> n_i n_j) |state>
void apply_number_ops(const StateVector& state, const NumberWeights& w, StateVector& out);

}  // namespace fhsim
