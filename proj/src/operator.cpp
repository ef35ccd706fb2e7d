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

#include "fhsim/operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fhsim/errors.hpp"
#include "fhsim/kernels.hpp"

namespace fhsim {

Operator::Csr Operator::build_spin_block(const HamiltonianSpec& spec, const FockBasis& basis, Spin spin) {
  Csr m;
  const auto& words = basis.words(spin);
  bool any = false;
  for (const auto* list : {&spec.tunnelings, &spec.nnn})
    for (const auto& h : *list) any = any || (h.t != 0.0 && has_spin(h.spins, spin));
  if (!any) return m;
  m.row_ptr.reserve(words.size() + 1);
  m.row_ptr.push_back(0);
  std::map<std::uint32_t, double> row;
  for (const Word w : words) {
    row.clear();
    for (const auto* list : {&spec.tunnelings, &spec.nnn}) {
      for (const auto& h : *list) {
        if (h.t == 0.0 || !has_spin(h.spins, spin)) continue;
        for (int dir = 0; dir < 2; ++dir) {
          const int i = dir == 0 ? h.bond.i : h.bond.j;
          const int j = dir == 0 ? h.bond.j : h.bond.i;
          if (auto r = hop_word(w, i, j))
            row[static_cast<std::uint32_t>(basis.rank(spin, r->word))] += -h.t * r->sign;
        }
      }
    }
    for (const auto& [c, v] : row) {
      if (v == 0.0) continue;
      m.cols.push_back(c);
      m.vals.push_back(v);
    }
    m.row_ptr.push_back(static_cast<std::uint32_t>(m.cols.size()));
  }
  if (m.vals.empty()) m = Csr{};
  return m;
}

Operator::Operator(const HamiltonianSpec& spec, BasisPtr basis) : basis_(std::move(basis)) {
  if (!(spec.geometry == basis_->geometry())) throw IncompatibleError("spec and basis use different geometries");
  spec.validate();
  const FockBasis& b = *basis_;
  up_ = build_spin_block(spec, b, Spin::kUp);
  down_ = build_spin_block(spec, b, Spin::kDown);

  NumberWeights w{spec.mu_up, spec.mu_down, spec.u, spec.v, spec.geometry.nn_bonds()};
  const std::size_t du = b.dim_up();
  const std::size_t dd = b.dim_down();
  diag_.resize(b.dim());
#pragma omp parallel for schedule(static)
  for (std::size_t u = 0; u < du; ++u)
    for (std::size_t d = 0; d < dd; ++d) diag_[u * dd + d] = w.evaluate(b.words(Spin::kUp)[u], b.words(Spin::kDown)[d]);

  auto row_abs = [](const Csr& m, std::size_t r) {
    double s = 0.0;
    if (m.row_ptr.empty()) return s;
    for (std::uint32_t k = m.row_ptr[r]; k < m.row_ptr[r + 1]; ++k) s += std::abs(m.vals[k]);
    return s;
  };
  double max_up = 0.0;
  double max_dn = 0.0;
  for (std::size_t u = 0; u < du; ++u) max_up = std::max(max_up, row_abs(up_, u));
  for (std::size_t d = 0; d < dd; ++d) max_dn = std::max(max_dn, row_abs(down_, d));
  const auto [mn, mx] = std::minmax_element(diag_.begin(), diag_.end());
  lower_ = *mn - max_up - max_dn;
  upper_ = *mx + max_up + max_dn;
}

void Operator::apply(const cplx* x, cplx* y) const {
  const auto& k = kernels::active();
  const FockBasis& b = *basis_;
  const std::size_t du = b.dim_up();
  const std::size_t dd = b.dim_down();
  const bool hop_up = !up_.vals.empty();
  const bool hop_dn = !down_.vals.empty();
#pragma omp parallel for schedule(static)
  for (std::size_t u = 0; u < du; ++u) {
    cplx* yb = y + u * dd;
    const cplx* xb = x + u * dd;
    k.mul_diag(diag_.data() + u * dd, xb, yb, dd);
    if (hop_up)
      for (std::uint32_t e = up_.row_ptr[u]; e < up_.row_ptr[u + 1]; ++e)
        k.axpy_real(up_.vals[e], x + std::size_t(up_.cols[e]) * dd, yb, dd);
    if (hop_dn) k.csr_gather(down_.row_ptr.data(), down_.cols.data(), down_.vals.data(), xb, yb, dd);
  }
}

void Operator::apply(const StateVector& x, StateVector& y) const {
  if (!x.basis().compatible(*basis_) || !y.basis().compatible(*basis_))
    throw IncompatibleError("state basis does not match operator basis");
  apply(x.data(), y.data());
}

StateVector Operator::apply(const StateVector& x) const {
  StateVector y(x.basis_ptr());
  apply(x, y);
  return y;
}

Eigen::MatrixXd Operator::dense() const {
  const std::size_t n = dim();
  if (n > 8192) throw SizeError("dense matrix requested for a large sector");
  Eigen::MatrixXd m(n, n);
  std::vector<cplx> e(n), col(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(e.begin(), e.end(), cplx{});
    e[c] = 1.0;
    apply(e.data(), col.data());
    for (std::size_t r = 0; r < n; ++r) m(r, c) = col[r].real();
  }
  return m;
}

double expectation(const StateVector& s, const Operator& op) {
  StateVector hs = op.apply(s);
  return overlap(s, hs).real();
}

double expectation(const StateVector& s, const HamiltonianSpec& spec) {
  return expectation(s, Operator(spec, s.basis_ptr()));
}

}  // namespace fhsim
