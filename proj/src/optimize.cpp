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

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "fhsim/errors.hpp"
#include "fhsim/optimize.hpp"

namespace fhsim {

MeritReport merit(const StateVector& psi, const Operator& target, const GroundState& gs, double physical_time) {
  MeritReport r;
  r.energy = expectation(psi, target);
  r.residual = std::abs(r.energy - gs.energy) / psi.basis().num_sites();
  r.infidelity = infidelity(psi, gs);
  r.physical_time = physical_time;
  return r;
}

namespace {

struct Objective {
  const std::function<double(const std::vector<double>&)>* f;
  std::vector<double> x;
  int evaluations = 0;
  int budget = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_x;
  std::vector<double> history;
};

double gsl_objective(const gsl_vector* v, void* params) {
  auto* o = static_cast<Objective*>(params);
  for (std::size_t k = 0; k < o->x.size(); ++k) o->x[k] = gsl_vector_get(v, k);
  double val = (*o->f)(o->x);
  if (!std::isfinite(val)) val = std::numeric_limits<double>::max();
  ++o->evaluations;
  if (val < o->best) {
    o->best = val;
    o->best_x = o->x;
  }
  o->history.push_back(o->best);
  return val;
}

}  // namespace

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             const std::vector<double>& x0, double step, int budget, double spread_tol) {
  const std::size_t n = x0.size();
  NelderMeadResult res;
  if (n == 0) {
    res.x = x0;
    res.f = f(x0);
    res.evaluations = 1;
    res.converged = true;
    res.best_history = {res.f};
    return res;
  }
  Objective obj{&f, x0, 0, budget, std::numeric_limits<double>::infinity(), x0, {}};
  gsl_set_error_handler_off();
  gsl_multimin_function fn{gsl_objective, n, &obj};
  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t k = 0; k < n; ++k) gsl_vector_set(x, k, x0[k]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  while (obj.evaluations < budget) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_fminimizer_size(s) < spread_tol) {
      res.converged = true;
      break;
    }
  }
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  res.x = obj.best_x;
  res.f = obj.best;
  res.evaluations = obj.evaluations;
  res.best_history = std::move(obj.history);
  return res;
}

OptimizationResult minimize_energy(const VariationalCircuit& circuit, const StateVector& initial,
                                   const HamiltonianSpec& target, const OptimizerConfig& cfg,
                                   const GroundState* gs, const KrylovOptions& kopt) {
  const auto t0 = std::chrono::steady_clock::now();
  const Operator h(target, initial.basis_ptr());
  GroundState own;
  if (gs == nullptr) {
    own = exact_ground_state(h);
    gs = &own;
  }
  const int np = circuit.num_params();
  OptimizationResult out;
  if (np == 0) {
    out.report = merit(initial, h, *gs, 0.0);
    out.report.evaluations = 1;
    return out;
  }
  std::function<double(const std::vector<double>&)> energy = [&](const std::vector<double>& p) {
    return expectation(apply_circuit(initial, circuit, p, kopt), h);
  };
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> init(cfg.init_lo, cfg.init_hi);
  std::uniform_real_distribution<double> init_time(cfg.time_init_lo, cfg.time_init_hi);
  std::vector<bool> is_time;
  for (const auto& l : circuit.layers)
    for (int k = 0; k < l.num_params(); ++k) is_time.push_back(l.variable_time && k == 0);
  double best = std::numeric_limits<double>::infinity();
  bool converged = false;
  int evals = 0;
  for (int r = 0; r < std::max(1, cfg.restarts); ++r) {
    std::vector<double> x0(np);
    for (int k = 0; k < np; ++k) x0[k] = is_time[k] ? init_time(rng) : init(rng);
    if (r == 0 && static_cast<int>(cfg.initial_guess.size()) == np) x0 = cfg.initial_guess;
    NelderMeadResult nm = nelder_mead(energy, x0, cfg.initial_step, cfg.budget, cfg.spread_tol);
    // A collapsed simplex can stall away from a minimum; restart it once
    // around the best point with whatever budget is left.
    const int left = cfg.budget - nm.evaluations;
    if (left > 4 * np) {
      NelderMeadResult polish = nelder_mead(energy, nm.x, 0.02, left, cfg.spread_tol);
      if (polish.f <= nm.f) {
        nm.x = polish.x;
        nm.f = polish.f;
        nm.converged = polish.converged;
      }
      nm.evaluations += polish.evaluations;
      for (double v : polish.best_history) nm.best_history.push_back(std::min(v, nm.best_history.back()));
    }
    evals += nm.evaluations;
    out.restart_values.push_back(nm.f);
    for (double v : nm.best_history) out.best_history.push_back(std::min(best, v));
    if (nm.f < best) {
      best = nm.f;
      out.params = nm.x;
      converged = nm.converged;
    }
  }
  const StateVector psi = apply_circuit(initial, circuit, out.params, kopt);
  out.report = merit(psi, h, *gs, circuit.physical_time(out.params));
  out.report.converged = converged;
  out.report.evaluations = evals;
  out.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace fhsim
