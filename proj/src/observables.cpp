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

#include "fhsim/observables.hpp"

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "fhsim/errors.hpp"
#include "fhsim/operator.hpp"

namespace fhsim {
namespace {

struct Moments {
  Eigen::VectorXd sz;
  Eigen::MatrixXd szsz;
  Eigen::VectorXd n;
};

Moments moments(const StateVector& state) {
  const FockBasis& b = state.basis();
  const int ns = b.num_sites();
  Moments m{Eigen::VectorXd::Zero(ns), Eigen::MatrixXd::Zero(ns, ns), Eigen::VectorXd::Zero(ns)};
  Eigen::VectorXd s(ns), n(ns);
  for (std::size_t iu = 0; iu < b.dim_up(); ++iu) {
    const Word up = b.words(Spin::kUp)[iu];
    for (std::size_t id = 0; id < b.dim_down(); ++id) {
      const double p = std::norm(state[iu * b.dim_down() + id]);
      if (p == 0.0) continue;
      const Word dn = b.words(Spin::kDown)[id];
      for (int i = 0; i < ns; ++i) {
        const int a = (up >> i) & 1u, c = (dn >> i) & 1u;
        s(i) = 0.5 * (a - c);
        n(i) = a + c;
      }
      m.sz += p * s;
      m.n += p * n;
      m.szsz.noalias() += p * s * s.transpose();
    }
  }
  return m;
}

StructureFactor structure_from(const Moments& m, const LatticeGeometry& g) {
  const int lx = g.cols(), ly = g.rows();
  const Eigen::MatrixXd conn = m.szsz - m.sz * m.sz.transpose();
  StructureFactor sf;
  sf.length = lx;
  for (int q = 0; q < lx; ++q) {
    const double k = 2.0 * std::numbers::pi * q / lx;
    double acc = 0.0;
    for (int y = 0; y < ly; ++y)
      for (int x = 0; x < lx; ++x)
        for (int xp = 0; xp < lx; ++xp) acc += std::cos(k * (x - xp)) * conn(g.site(x, y), g.site(xp, y));
    sf.k.push_back(k);
    sf.value.push_back(acc / ly);
  }
  return sf;
}

std::vector<double> profile_from(const Moments& m, const LatticeGeometry& g) {
  std::vector<double> out(g.cols(), 0.0);
  for (int s = 0; s < g.num_sites(); ++s) out[g.x_of(s)] += m.n(s);
  return out;
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ParameterError("cannot write " + path);
  f.precision(17);
  return f;
}

}  // namespace

Eigen::MatrixXd spin_correlations(const StateVector& state) { return moments(state).szsz; }

Eigen::VectorXd spin_polarization(const StateVector& state) { return moments(state).sz; }

StructureFactor structure_factor(const StateVector& state) {
  return structure_from(moments(state), state.basis().geometry());
}

std::vector<double> density_profile(const StateVector& state) {
  return profile_from(moments(state), state.basis().geometry());
}

double dominant_wavelength(const std::vector<double>& profile) {
  const int l = static_cast<int>(profile.size());
  double best = 1e-12, lambda = 0.0;
  for (int q = 1; q <= l / 2; ++q) {
    std::complex<double> f = 0.0;
    for (int x = 0; x < l; ++x) f += profile[x] * std::polar(1.0, -2.0 * std::numbers::pi * q * x / l);
    if (std::norm(f) > best * (1.0 + 1e-9)) {
      best = std::norm(f);
      lambda = static_cast<double>(l) / q;
    }
  }
  return lambda;
}

ObservableReport observe(const StateVector& state, const HamiltonianSpec& target) {
  const Moments m = moments(state);
  const LatticeGeometry& g = state.basis().geometry();
  return {m.szsz, structure_from(m, g), profile_from(m, g), expectation(state, target)};
}

void write_observables(const ObservableReport& r, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path d(dir);
  auto f = open_csv((d / "spin_correlations.csv").string());
  f << "i,j,szsz\n";
  for (int i = 0; i < r.szsz.rows(); ++i)
    for (int j = 0; j < r.szsz.cols(); ++j) f << i << ',' << j << ',' << r.szsz(i, j) << '\n';
  auto s = open_csv((d / "structure_factor.csv").string());
  s << "m,k,s_m,length\n";
  for (std::size_t q = 0; q < r.sk.value.size(); ++q)
    s << q << ',' << r.sk.k[q] << ',' << r.sk.value[q] << ',' << r.sk.length << '\n';
  auto n = open_csv((d / "density_profile.csv").string());
  n << "x,density\n";
  for (std::size_t x = 0; x < r.density.size(); ++x) n << x << ',' << r.density[x] << '\n';
}

}  // namespace fhsim
