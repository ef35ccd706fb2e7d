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

// Matrix-free application of a HamiltonianSpec on one Fock sector. The
// operator is real symmetric: H = T_up (x) 1 + 1 (x) T_dn + D, with the
// single-spin hopping blocks stored as CSR over spin words and D as a
// diagonal vector.

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fhsim/fock.hpp"
#include "fhsim/hamiltonian.hpp"

namespace fhsim {

class Operator {
 public:
  Operator(const HamiltonianSpec& spec, BasisPtr basis);

  std::size_t dim() const { return diag_.size(); }
  const BasisPtr& basis_ptr() const { return basis_; }

  // y = H x
  void apply(const cplx* x, cplx* y) const;
  void apply(const StateVector& x, StateVector& y) const;
  StateVector apply(const StateVector& x) const;

  const std::vector<double>& diagonal() const { return diag_; }
  bool is_diagonal() const { return up_.vals.empty() && down_.vals.empty(); }

  // Gershgorin bounds on the spectrum.
  double lower_bound() const { return lower_; }
  double upper_bound() const { return upper_; }

  // Dense matrix, for small sectors only.
  Eigen::MatrixXd dense() const;

 private:
  struct Csr {
    std::vector<std::uint32_t> row_ptr;
    std::vector<std::uint32_t> cols;
    std::vector<double> vals;
  };
  static Csr build_spin_block(const HamiltonianSpec& spec, const FockBasis& basis, Spin spin);

  BasisPtr basis_;
  Csr up_;
  Csr down_;
  std::vector<double> diag_;
  double lower_ = 0.0;
  double upper_ = 0.0;
};

double expectation(const StateVector& s, const Operator& op);
double expectation(const StateVector& s, const HamiltonianSpec& spec);

}  // namespace fhsim
