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

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

#include "fhsim/errors.hpp"
#include "fhsim/optimize.hpp"

namespace fhsim {

namespace {

using RVec = std::vector<double>;

double rdot(const RVec& a, const RVec& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void raxpy(double a, const RVec& x, RVec& y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

double rnormalize(RVec& v) {
  const double n = std::sqrt(rdot(v, v));
  for (double& x : v) x /= n;
  return n;
}

// Real matvec through the complex operator.
struct RealApply {
  const Operator& op;
  std::vector<cplx> xc, yc;
  explicit RealApply(const Operator& o) : op(o), xc(o.dim()), yc(o.dim()) {}
  void operator()(const RVec& x, RVec& y) {
    for (std::size_t k = 0; k < x.size(); ++k) xc[k] = x[k];
    op.apply(xc.data(), yc.data());
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = yc[k].real();
  }
};

void project_out(const std::vector<RVec>& locked, RVec& w) {
  for (int pass = 0; pass < 2; ++pass)
    for (const RVec& q : locked) raxpy(-rdot(q, w), q, w);
}

// Lowest eigenpair in the complement of `locked`, by explicitly restarted
// Lanczos with full reorthogonalization. Locked directions are lifted to
// `top`, an upper spectral estimate, so roundoff leaking back into them
// cannot produce a spurious zero Ritz value. `top` is widened on return.
std::pair<double, RVec> lowest_in_complement(RealApply& apply, const std::vector<RVec>& locked, RVec x,
                                             const EigenOptions& opt, double& top) {
  const std::size_t n = x.size();
  const std::size_t free_dim = n - locked.size();
  const int m = static_cast<int>(std::min<std::size_t>(opt.krylov_dim, free_dim));
  project_out(locked, x);
  rnormalize(x);
  std::vector<RVec> v;
  RVec w(n), hx(n);
  double theta = 0.0;
  for (int restart = 0; restart < opt.max_restarts; ++restart) {
    v.assign(1, x);
    std::vector<double> alpha, beta;
    int used = 0;
    for (int j = 0; j < m; ++j) {
      apply(v[j], w);
      project_out(locked, w);
      for (const RVec& q : locked) raxpy(top * rdot(q, v[j]), q, w);
      const double a = rdot(v[j], w);
      alpha.push_back(a);
      for (int pass = 0; pass < 2; ++pass)
        for (const RVec& q : v) raxpy(-rdot(q, w), q, w);
      const double b = std::sqrt(rdot(w, w));
      used = j + 1;
      if (b < 1e-12 * std::max(1.0, std::abs(a)) || used == m) break;
      beta.push_back(b);
      for (double& e : w) e /= b;
      v.push_back(w);
    }
    Eigen::VectorXd d(used), e(std::max(used - 1, 0));
    for (int k = 0; k < used; ++k) d(k) = alpha[k];
    for (int k = 0; k + 1 < used; ++k) e(k) = beta[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    top = std::max(top, es.eigenvalues()(used - 1) + 1.0);
    std::fill(x.begin(), x.end(), 0.0);
    for (int k = 0; k < used; ++k) raxpy(es.eigenvectors()(k, 0), v[k], x);
    project_out(locked, x);
    rnormalize(x);
    apply(x, hx);
    project_out(locked, hx);
    theta = rdot(x, hx);
    raxpy(-theta, x, hx);
    const double res = std::sqrt(rdot(hx, hx));
    if (res <= opt.residual_tol * std::max(1.0, std::abs(theta))) return {theta, x};
  }
  throw NumericError("ground-state Lanczos did not converge");
}

StateVector to_state(const BasisPtr& b, const RVec& x) {
  StateVector s(b);
  for (std::size_t k = 0; k < x.size(); ++k) s[k] = x[k];
  return s;
}

}  // namespace

std::vector<std::pair<double, StateVector>> lowest_eigenpairs(const Operator& h, int count, const EigenOptions& opt) {
  const std::size_t n = h.dim();
  std::vector<std::pair<double, StateVector>> out;
  count = static_cast<int>(std::min<std::size_t>(count, n));
  if (n <= opt.dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
    for (int k = 0; k < count; ++k) {
      RVec x(n);
      for (std::size_t r = 0; r < n; ++r) x[r] = es.eigenvectors()(r, k);
      out.emplace_back(es.eigenvalues()(k), to_state(h.basis_ptr(), x));
    }
    return out;
  }
  RealApply apply(h);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  std::vector<RVec> locked;
  double top = 0.0;
  for (int k = 0; k < count; ++k) {
    RVec x(n);
    for (double& e : x) e = nd(rng);
    auto [e, v] = lowest_in_complement(apply, locked, std::move(x), opt, top);
    locked.push_back(v);
    out.emplace_back(e, to_state(h.basis_ptr(), v));
  }
  return out;
}

GroundState exact_ground_state(const Operator& h, const EigenOptions& opt) {
  const std::size_t n = h.dim();
  GroundState gs;
  if (n <= opt.dense_limit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.dense());
    gs.energy = es.eigenvalues()(0);
    std::size_t k = 0;
    while (k < n && es.eigenvalues()(k) - gs.energy < opt.degeneracy_tol) {
      RVec x(n);
      for (std::size_t r = 0; r < n; ++r) x[r] = es.eigenvectors()(r, k);
      gs.subspace.push_back(to_state(h.basis_ptr(), x));
      ++k;
    }
    gs.gap = k < n ? es.eigenvalues()(k) - gs.energy : 0.0;
    return gs;
  }
  RealApply apply(h);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd;
  std::vector<RVec> locked;
  double top = 0.0;
  for (int k = 0; k <= opt.max_degenerate; ++k) {
    if (locked.size() == n) break;
    RVec x(n);
    for (double& e : x) e = nd(rng);
    auto [e, v] = lowest_in_complement(apply, locked, std::move(x), opt, top);
    if (k == 0) gs.energy = e;
    if (k > 0 && e - gs.energy >= opt.degeneracy_tol) {
      gs.gap = e - gs.energy;
      break;
    }
    locked.push_back(v);
    gs.subspace.push_back(to_state(h.basis_ptr(), v));
  }
  return gs;
}

GroundState exact_ground_state(const HamiltonianSpec& spec, BasisPtr basis, const EigenOptions& opt) {
  return exact_ground_state(Operator(spec, std::move(basis)), opt);
}

double infidelity(const StateVector& psi, const GroundState& gs) {
  double p = 0.0;
  for (const auto& g : gs.subspace) p += std::norm(overlap(g, psi));
  return std::max(0.0, 1.0 - std::sqrt(p));
}

}  // namespace fhsim
