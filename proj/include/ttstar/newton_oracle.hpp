#pragma once

#include <cmath>
#include <string>

#include "ttstar/newton.hpp"
#include "ttstar/radial_solver.hpp"

namespace ttstar {

namespace detail {

inline PairState oracle_guess(const RadialGrid& grid, double g, double d) {
  PairState s = zero_state(grid.m);
  for (int j = 0; j < grid.m - 1; ++j) {
    const double t = grid.t(j), shape = t - std::log1p(std::exp(t));
    s.u[j] = g * shape;
    s.v[j] = d * shape;
  }
  return s;
}

}  // namespace detail

// Independent check of the monotone scheme: damped Newton on the same
// discrete system. Falls back to continuation along s (gamma, delta).
inline PairProfile newton_oracle(double a, double b, double g, double d, const RadialGrid& grid = {},
                                 const SolverConfig& cfg = {}) {
  grid.validate();
  if (!region_contains(a, b, g, d, 1e-12))
    throw bad_argument("region_violation", "(gamma, delta) outside the admissible region");
  const double tol = 0.01 * cfg.residual_tol;
  RadialSystem sys(a, b, g, d, grid, cfg.inner_bc);
  PairState s = detail::oracle_guess(grid, g, d);
  NewtonReport rep = newton_solve(sys, s, tol, cfg.max_linear, 1e-13);
  if (!rep.converged) {
    s = detail::zero_state(grid.m);
    for (int step = 1; step <= 8; ++step) {
      const double f = step / 8.0;
      RadialSystem part(a, b, f * g, f * d, grid, cfg.inner_bc);
      rep = newton_solve(part, s, tol, cfg.max_linear);
      if (!rep.converged) break;
    }
    if (rep.converged) rep = newton_solve(sys, s, tol, cfg.max_linear, 1e-13);
  }
  if (!rep.converged)
    throw non_convergence("oracle_failure", "Newton oracle diverged; residual " + std::to_string(rep.residual));
  PairProfile p = detail::wrap(grid, std::move(s), a, b, g, d, cfg, "newton_oracle", rep.residual, {});
  return p;
}

}  // namespace ttstar
