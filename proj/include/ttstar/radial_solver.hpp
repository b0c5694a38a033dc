#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "ttstar/newton.hpp"
#include "ttstar/radial_system.hpp"

namespace ttstar {

inline PairState monotone_iterate(const RadialSystem& sys, const PairState& lo, const PairState& hi,
                                  Direction dir, const SolverConfig& cfg, IterationStats& stats,
                                  double& final_residual) {
  PairState cur = dir == Direction::decreasing ? hi : lo;
  for (int it = 0; it < cfg.max_outer; ++it) {
    PairState next = monotone_step(sys, cur, lo, hi, dir, stats, cfg.slack);
    double change = 0.0;
    for (int j = 0; j < sys.m(); ++j)
      change = std::max({change, std::abs(next.u[j] - cur.u[j]), std::abs(next.v[j] - cur.v[j])});
    cur = std::move(next);
    if (cfg.polish_after > 0 && it + 1 == cfg.polish_after && change > cfg.iter_tol) {
      // Slow tail (typically near region corners): jump to the Newton limit
      // of the current iterate, keep it only if it respects the bracket.
      PairState trial = cur;
      if (newton_solve(sys, trial, 0.01 * cfg.residual_tol, cfg.max_linear, 1e-13).converged) {
        const PairState& blo = dir == Direction::increasing ? cur : lo;
        const PairState& bhi = dir == Direction::decreasing ? cur : hi;
        double excess = 0.0;
        for (int j = 0; j < sys.m(); ++j)
          excess = std::max({excess, blo.u[j] - trial.u[j], blo.v[j] - trial.v[j], trial.u[j] - bhi.u[j],
                             trial.v[j] - bhi.v[j]});
        if (excess <= cfg.slack) {
          cur = std::move(trial);
          ++stats.polish_events;
        } else {
          ++stats.polish_rejections;
        }
      }
    }
    if (change <= cfg.iter_tol) {
      final_residual = sys.scaled_residual(cur);
      if (final_residual <= cfg.residual_tol) {
        long clamps = 0;
        for (int j = 0; j < sys.m(); ++j) {
          detail::clamped_exp(sys.a() * cur.u[j], &clamps);
          detail::clamped_exp(cur.v[j] - cur.u[j], &clamps);
          detail::clamped_exp(-sys.b() * cur.v[j], &clamps);
        }
        stats.clamp_active_at_end = stats.clamp_active_at_end || clamps > 0;
        return cur;
      }
    }
  }
  final_residual = sys.scaled_residual(cur);
  throw non_convergence("iteration_limit",
                        "monotone iteration hit max_outer; last scaled residual " + std::to_string(final_residual));
}

// ---------------------------------------------------------------- scalar problems

enum class ScalarKind { h, q0, q1 };

// Auxiliary scalar problems for the nonnegative scheme, in the log variable:
//   h''  = k (e^{a h} - 1)
//   q0'' = k (e^{a q0} - e^{h - 2 q0})
//   q1'' = k (e^{2 q1 - h} - e^{-a q1})
// with slope `slope` at t_min and zero at t_max. Solved by damped Newton.
inline ScalarProfile solve_scalar_bvp(ScalarKind kind, double slope, double a, const RadialGrid& grid,
                                      const SolverConfig& cfg, const ScalarProfile* coupling = nullptr) {
  using detail::clamped_exp;
  grid.validate();
  if (kind != ScalarKind::h && (!coupling || coupling->values.size() != std::size_t(grid.m)))
    throw bad_argument("missing_coupling", "q0/q1 problems need the solved h profile");
  const int m = grid.m;
  const double h = grid.h(), ih2 = 1.0 / (h * h);
  std::vector<double> k(m);
  for (int j = 0; j < m; ++j) k[j] = 4.0 * std::exp(2.0 * grid.t(j));
  const std::vector<double> zero(m, 0.0);
  const std::vector<double>& H = coupling ? coupling->values : zero;

  auto f = [&](double y, int j, double& df) {
    switch (kind) {
      case ScalarKind::h: {
        const double e = clamped_exp(a * y);
        df = a * e;
        return e - 1.0;
      }
      case ScalarKind::q0: {
        const double e1 = clamped_exp(a * y), e2 = clamped_exp(H[j] - 2.0 * y);
        df = a * e1 + 2.0 * e2;
        return e1 - e2;
      }
      case ScalarKind::q1: {
        const double e1 = clamped_exp(2.0 * y - H[j]), e2 = clamped_exp(-a * y);
        df = 2.0 * e1 + a * e2;
        return e1 - e2;
      }
    }
    return 0.0;
  };

  auto residual = [&](const std::vector<double>& y, std::vector<double>& r, std::vector<double>& jd) {
    r.assign(m, 0.0);
    jd.assign(m, 1.0);
    double worst = 0.0;
    for (int j = 0; j < m - 1; ++j) {
      double df = 0.0;
      const double fv = f(y[j], j, df);
      const double lap = j == 0 ? 2.0 * (y[1] - y[0]) * ih2 : (y[j - 1] - 2.0 * y[j] + y[j + 1]) * ih2;
      r[j] = lap - k[j] * fv - (j == 0 ? 2.0 / h * slope : 0.0);
      jd[j] = -2.0 * ih2 - k[j] * df;
      worst = std::max(worst, std::abs(r[j]) / (2.0 * ih2 + k[j] * df));
    }
    r[m - 1] = y[m - 1];
    return std::max(worst, std::abs(r[m - 1]));
  };

  // Initial guess with the prescribed slope at the inner end and decay outside.
  std::vector<double> y(m, 0.0), r, jd, sub(m, ih2), sup(m, ih2);
  for (int j = 0; j < m - 1; ++j) {
    const double t = grid.t(j);
    y[j] = slope * (t - std::log1p(std::exp(t)));
  }
  sub[0] = 0.0;
  sup[0] = 2.0 * ih2;
  sub[m - 1] = sup[m - 1] = 0.0;
  // iterate until the update is negligible, not only the scaled residual
  double res = residual(y, r, jd), last_step = 1.0;
  for (int it = 0; it < cfg.max_linear && (res > 0.01 * cfg.residual_tol || last_step > 1e-13); ++it) {
    for (double& x : r) x = -x;
    std::vector<double> step = solve_tridiagonal(sub, jd, sup, r);
    double lambda = 1.0, trial_res = 0.0;
    std::vector<double> trial(m), tr, tj;
    for (;;) {
      for (int j = 0; j < m; ++j) trial[j] = y[j] + lambda * step[j];
      trial_res = residual(trial, tr, tj);
      if (trial_res < res || lambda < 1e-6) break;
      lambda *= 0.5;
    }
    if (!(trial_res < res) && res <= 0.01 * cfg.residual_tol) break;  // roundoff floor
    last_step = 0.0;
    for (int j = 0; j < m; ++j) last_step = std::max(last_step, std::abs(trial[j] - y[j]));
    y.swap(trial);
    res = residual(y, r, jd);
  }
  if (res > cfg.residual_tol)
    throw non_convergence("scalar_iteration_limit",
                          "auxiliary scalar solve did not converge; residual " + std::to_string(res));
  return {grid, std::move(y), res};
}

// ---------------------------------------------------------------- orchestration

namespace detail {

inline PairProfile wrap(const RadialGrid& grid, PairState s, double a, double b, double g, double d,
                        const SolverConfig& cfg, std::string scheme, double residual, IterationStats stats) {
  PairProfile p;
  p.grid = grid;
  p.u = std::move(s.u);
  p.v = std::move(s.v);
  p.gamma = g;
  p.delta = d;
  p.a = a;
  p.b = b;
  p.inner_bc = cfg.inner_bc;
  p.scheme = std::move(scheme);
  p.residual = residual;
  p.stats = stats;
  return p;
}

inline PairState state_of(const PairProfile& p) { return {p.u, p.v}; }

inline PairState zero_state(int m) { return {std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)}; }

}  // namespace detail

inline PairProfile solve(double a, double b, double gamma, double delta, const RadialGrid& grid = {},
                  const SolverConfig& cfg = {});

namespace detail {

inline PairProfile solve_bracketed(double a, double b, double g, double d, const RadialGrid& grid,
                                   const SolverConfig& cfg, const PairState& lo, const PairState& hi,
                                   Direction dir, std::string scheme, IterationStats stats) {
  RadialSystem sys(a, b, g, d, grid, cfg.inner_bc);
  double res = 0.0;
  PairState s = monotone_iterate(sys, lo, hi, dir, cfg, stats, res);
  return wrap(grid, std::move(s), a, b, g, d, cfg, std::move(scheme), res, stats);
}

// gamma, delta >= 0 with equal exponents: supersolution 0, subsolution (q0, q1).
inline PairProfile solve_nonneg_equal(double a, double g, double d, const RadialGrid& grid,
                                      const SolverConfig& cfg) {
  const ScalarProfile hs = solve_scalar_bvp(ScalarKind::h, g + d, a, grid, cfg);
  const ScalarProfile q0 = solve_scalar_bvp(ScalarKind::q0, g, a, grid, cfg, &hs);
  const ScalarProfile q1 = solve_scalar_bvp(ScalarKind::q1, d, a, grid, cfg, &hs);
  return solve_bracketed(a, a, g, d, grid, cfg, {q0.values, q1.values}, zero_state(grid.m),
                         Direction::decreasing, "nonneg", {});
}

inline PairProfile involuted(const PairProfile& p) {
  PairProfile out = p;
  out.u.resize(p.v.size());
  out.v.resize(p.u.size());
  for (std::size_t j = 0; j < p.u.size(); ++j) {
    out.u[j] = -p.v[j];
    out.v[j] = -p.u[j];
  }
  out.gamma = -p.delta;
  out.delta = -p.gamma;
  out.a = p.b;
  out.b = p.a;
  return out;
}

}  // namespace detail

// Solves the radial problem by the monotone scheme.
//   (0, 0)                  -> exact zero profile
//   a = b, gamma, delta >= 0 -> decreasing scheme between (q0, q1) and 0
//   a = b, gamma, delta <= 0 -> the involution (u, v, gamma, delta) -> (-v, -u, -delta, -gamma)
//   a != b, same signs      -> comparison with the equal-exponent problems
//   mixed signs             -> increasing scheme between two auxiliary solves
inline PairProfile solve(double a, double b, double g, double d, const RadialGrid& grid,
                         const SolverConfig& cfg) {
  using namespace detail;
  grid.validate();
  cfg.validate();
  if (!(a > 0 && b > 0)) throw bad_argument("bad_exponents", "a and b must be positive");
  if (!region_contains(a, b, g, d, 1e-12))
    throw bad_argument("region_violation", "(gamma, delta) outside the admissible region");

  if (g == 0.0 && d == 0.0) return wrap(grid, zero_state(grid.m), a, b, g, d, cfg, "trivial", 0.0, {});

  const bool nonneg = g >= 0 && d >= 0, nonpos = g <= 0 && d <= 0;
  if (a == b && nonneg) return solve_nonneg_equal(a, g, d, grid, cfg);
  if (a == b && nonpos) {
    PairProfile p = involuted(solve_nonneg_equal(b, -d, -g, grid, cfg));
    p.scheme = "nonpos";
    return p;
  }

  if (nonneg || nonpos) {
    // Equal-exponent comparison problems; the smaller exponent always has
    // the point in its region, the larger one only sometimes.
    const double lo_e = std::min(a, b), hi_e = std::max(a, b);
    const PairProfile small = solve(lo_e, lo_e, g, d, grid, cfg);
    IterationStats st = small.stats;
    PairState other = zero_state(grid.m);
    if (region_contains(hi_e, hi_e, g, d)) {
      const PairProfile large = solve(hi_e, hi_e, g, d, grid, cfg);
      st.merge(large.stats);
      other = state_of(large);
    }
    if (nonneg)
      return solve_bracketed(a, b, g, d, grid, cfg, state_of(small), other, Direction::decreasing,
                             "comparison_nonneg", st);
    return solve_bracketed(a, b, g, d, grid, cfg, other, state_of(small), Direction::increasing,
                           "comparison_nonpos", st);
  }

  // Mixed signs: the supersolution has the positive slope replaced by 0 and
  // the negative one pushed further down; the subsolution symmetrically.
  auto push_down = [&](double x, double floor) {
    double y = std::max(floor + cfg.mixed_gap, x - cfg.mixed_margin);
    return y < x ? y : 0.5 * (x + floor);
  };
  auto push_up = [&](double x, double ceil) {
    double y = std::min(ceil - cfg.mixed_gap, x + cfg.mixed_margin);
    return y > x ? y : 0.5 * (x + ceil);
  };
  PairProfile hi, lo;
  if (g > 0) {  // delta < 0
    hi = solve(a, b, 0.0, push_down(d, -2.0), grid, cfg);
    lo = solve(a, b, push_up(g, 2.0), 0.0, grid, cfg);
  } else {  // gamma < 0 < delta
    hi = solve(a, b, push_down(g, -2.0 / a), 0.0, grid, cfg);
    lo = solve(a, b, 0.0, push_up(d, 2.0 / b), grid, cfg);
  }
  IterationStats st = hi.stats;
  st.merge(lo.stats);
  return solve_bracketed(a, b, g, d, grid, cfg, state_of(lo), state_of(hi), Direction::increasing, "mixed", st);
}

inline PairProfile solve(const CaseSpec& spec, double gamma, double delta, const RadialGrid& grid = {},
                         const SolverConfig& cfg = {}) {
  PairProfile p = solve(spec.a, spec.b, gamma, delta, grid, cfg);
  p.case_label = spec.label;
  return p;
}

// Least-squares slopes of u and v against t over the first `window` nodes.
inline std::pair<double, double> fit_log_slope(const PairProfile& p, int window = 200) {
  const int n = std::min<int>(std::max(window, 2), p.grid.m);
  double st = 0, stt = 0, su = 0, stu = 0, sv = 0, stv = 0;
  for (int j = 0; j < n; ++j) {
    const double t = p.grid.t(j);
    st += t;
    stt += t * t;
    su += p.u[j];
    stu += t * p.u[j];
    sv += p.v[j];
    stv += t * p.v[j];
  }
  const double den = n * stt - st * st;
  return {(n * stu - st * su) / den, (n * stv - st * sv) / den};
}

// Largest |u|, |v| over the outermost 1% of nodes.
inline double outer_sup(const PairProfile& p) {
  const int m = p.grid.m, from = m - std::max(2, m / 100);
  double w = 0.0;
  for (int j = from; j < m; ++j) w = std::max({w, std::abs(p.u[j]), std::abs(p.v[j])});
  return w;
}

// Conservation defect: integrating u'' + v'' = 4e^{2t}(e^{au} - e^{-bv}) in t
// and restoring the inner flux,
//   2 pi [ int k (e^{au} - e^{-bv}) dt + sigma_u + sigma_v ],
// which vanishes up to discretisation and outer truncation. For Neumann
// data sigma_u + sigma_v = gamma + delta. Composite Simpson quadrature.
inline double integral_identity(const PairProfile& p) {
  const int m = p.grid.m;
  const double h = p.grid.h();
  std::vector<double> f(m);
  for (int j = 0; j < m; ++j)
    f[j] = 4.0 * std::exp(2.0 * p.grid.t(j)) *
           (detail::clamped_exp(p.a * p.u[j]) - detail::clamped_exp(-p.b * p.v[j]));
  double integral = 0.0;
  const int last = (m - 1) % 2 == 0 ? m - 1 : m - 2;
  for (int j = 0; j + 2 <= last; j += 2) integral += h / 3.0 * (f[j] + 4.0 * f[j + 1] + f[j + 2]);
  if (last != m - 1) integral += 0.5 * h * (f[m - 2] + f[m - 1]);
  const InnerBoundary bc(p.a, p.b, p.gamma, p.delta, p.grid.t_min, p.inner_bc);
  const InnerSlopes s = bc.eval(p.u[0], p.v[0]);
  return 2.0 * std::numbers::pi * (integral + s.su + s.sv);
}

// Tolerance used by the conservation check.
inline bool identity_within_tolerance(const PairProfile& p, double defect) {
  const double total = p.gamma + p.delta;
  if (std::abs(total) < 1e-12) return std::abs(defect) <= 0.05;
  return std::abs(defect) <= 0.01 * 2.0 * std::numbers::pi * std::abs(total);
}

}  // namespace ttstar
