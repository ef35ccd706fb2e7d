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

#include "fhsim/errors.hpp"
#include "fhsim/evolve.hpp"
#include "fhsim/vec.hpp"

namespace fhsim {

namespace {

// Lanczos basis storage reused across calls on the same thread.
struct Workspace {
  std::vector<std::vector<cplx>> v;
  std::vector<cplx> w;
  void ensure(std::size_t count, std::size_t n) {
    if (w.size() != n) {
      v.clear();
      w.assign(n, cplx{});
    }
    while (v.size() < count) v.emplace_back(n);
  }
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

// exp(z h (T - shift)) e1 for the j x j leading block of the tridiagonal T.
Eigen::VectorXcd small_expm(const std::vector<double>& alpha, const std::vector<double>& beta, int j, cplx z,
                            double h, double shift) {
  Eigen::VectorXd d(j), e(std::max(j - 1, 0));
  for (int k = 0; k < j; ++k) d(k) = alpha[k] - shift;
  for (int k = 0; k + 1 < j; ++k) e(k) = beta[k];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  const Eigen::MatrixXd& q = es.eigenvectors();
  Eigen::VectorXcd c(j);
  for (int k = 0; k < j; ++k) c(k) = std::exp(z * h * es.eigenvalues()(k)) * q(0, k);
  return q.cast<cplx>() * c;
}

// Applies exp(z H time) to v in place, z in {-i, -1}. For z = -1 the vector is
// renormalized after each substep and log_norm accumulates the growth.
KrylovStats expm_krylov(const Operator& op, cplx z, double time, std::vector<cplx>& v, const KrylovOptions& opt,
                        double& log_norm) {
  KrylovStats st;
  log_norm = 0.0;
  const std::size_t n = v.size();
  const bool imaginary = z.imag() == 0.0;
  if (time == 0.0) return st;

  if (op.is_diagonal()) {
    const auto& d = op.diagonal();
    if (imaginary) {
      double dmin = *std::min_element(d.begin(), d.end());
      for (std::size_t k = 0; k < n; ++k) v[k] *= std::exp(-time * (d[k] - dmin));
      const double nrm = std::sqrt(vec::norm_sq(v.data(), n));
      if (!(nrm > 0.0)) throw NumericError("imaginary-time propagation annihilated the state");
      vec::scale(1.0 / nrm, v.data(), n);
      log_norm = std::log(nrm) - time * dmin;
    } else {
      for (std::size_t k = 0; k < n; ++k) v[k] *= std::exp(z * time * d[k]);
    }
    st.substeps = 1;
    return st;
  }

  const int m_max = std::max(2, opt.max_dim);
  Workspace& ws = workspace();
  ws.ensure(1, n);
  std::vector<double> alpha, beta;
  alpha.reserve(m_max);
  beta.reserve(m_max);
  const double scale_h = std::max(std::abs(op.upper_bound()), std::abs(op.lower_bound()));
  const double breakdown = 1e-13 * std::max(1.0, scale_h);

  double remaining = time;
  double h = time;
  while (remaining > 0.0) {
    h = std::min(h, remaining);
    const double beta0 = std::sqrt(vec::norm_sq(v.data(), n));
    if (!(beta0 > 0.0)) return st;
    std::copy(v.begin(), v.end(), ws.v[0].begin());
    vec::scale(1.0 / beta0, ws.v[0].data(), n);
    alpha.clear();
    beta.clear();
    double shift = 0.0;
    int m = 0;
    bool exact = false;
    Eigen::VectorXcd y;
    bool accepted = false;
    for (int j = 0; j < m_max; ++j) {
      ws.ensure(static_cast<std::size_t>(j) + 2, n);
      std::vector<cplx>& w = ws.v[j + 1];
      op.apply(ws.v[j].data(), w.data());
      ++st.matvecs;
      const double a = vec::dot(ws.v[j].data(), w.data(), n).real();
      alpha.push_back(a);
      if (j == 0) shift = a;
      vec::axpy_real(-a, ws.v[j].data(), w.data(), n);
      if (j > 0) vec::axpy_real(-beta[j - 1], ws.v[j - 1].data(), w.data(), n);
      const double b = std::sqrt(vec::norm_sq(w.data(), n));
      beta.push_back(b);
      m = j + 1;
      if (b < breakdown) {
        exact = true;
        break;
      }
      vec::scale(1.0 / b, w.data(), n);
      if (m >= 3 && (m % 2 == 1 || m == m_max)) {
        y = small_expm(alpha, beta, m, z, h, shift);
        const double rel = imaginary ? y.norm() : 1.0;
        const double err = b * std::abs(y(m - 1)) / rel;
        if (err <= opt.tol * h / time) {
          accepted = true;
          break;
        }
      }
    }
    if (exact) {
      y = small_expm(alpha, beta, m, z, h, shift);
      accepted = true;
    }
    while (!accepted) {
      h *= 0.5;
      if (h < 1e-14 * time) throw NumericError("Krylov exponential failed to converge");
      y = small_expm(alpha, beta, m, z, h, shift);
      const double rel = imaginary ? y.norm() : 1.0;
      const double err = beta[m - 1] * std::abs(y(m - 1)) / rel;
      accepted = err <= opt.tol * h / time;
    }
    std::fill(v.begin(), v.end(), cplx{});
    for (int k = 0; k < m; ++k) vec::axpy(beta0 * y(k), ws.v[k].data(), v.data(), n);
    if (imaginary) {
      const double nrm = std::sqrt(vec::norm_sq(v.data(), n));
      if (!(nrm > 0.0)) throw NumericError("imaginary-time propagation annihilated the state");
      vec::scale(1.0 / nrm, v.data(), n);
      log_norm += std::log(nrm) - h * shift;
    } else {
      vec::scale(std::exp(z * h * shift), v.data(), n);
    }
    remaining -= h;
    if (remaining < 1e-15 * time) remaining = 0.0;
    ++st.substeps;
    h *= 2.0;
  }
  return st;
}

}  // namespace

KrylovStats propagate_real_inplace(StateVector& state, const Operator& h, double T, const KrylovOptions& opt) {
  if (T < 0.0) throw ParameterError("propagation time must be non-negative");
  double log_norm = 0.0;
  return expm_krylov(h, cplx(0.0, -1.0), T, state.amplitudes(), opt, log_norm);
}

StateVector propagate_real(const StateVector& state, const HamiltonianSpec& spec, double T,
                           const KrylovOptions& opt) {
  StateVector out = state;
  propagate_real_inplace(out, Operator(spec, state.basis_ptr()), T, opt);
  return out;
}

ImagStep propagate_imag(const StateVector& state, const Operator& h, double dtau, const KrylovOptions& opt) {
  if (!(dtau > 0.0)) throw ParameterError("imaginary time step must be positive");
  ImagStep r{state, 1.0, 0.0};
  const double n0 = r.state.normalize();
  expm_krylov(h, cplx(-1.0, 0.0), dtau, r.state.amplitudes(), opt, r.log_decay);
  r.log_decay += std::log(n0);
  r.decay = std::exp(r.log_decay);
  return r;
}

ImagStep propagate_imag(const StateVector& state, const HamiltonianSpec& spec, double dtau,
                        const KrylovOptions& opt) {
  return propagate_imag(state, Operator(spec, state.basis_ptr()), dtau, opt);
}

}  // namespace fhsim
