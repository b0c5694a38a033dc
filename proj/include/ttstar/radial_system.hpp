#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ttstar/case_model.hpp"
#include "ttstar/error.hpp"
#include "ttstar/tridiagonal.hpp"

namespace ttstar {

// Uniform grid in t = log r.
struct RadialGrid {
  double t_min = -14.0;
  double t_max = std::log(40.0);
  int m = 4001;

  double h() const { return (t_max - t_min) / (m - 1); }
  double t(int j) const { return t_min + j * h(); }

  void validate() const {
    if (!(t_min < 0.0 && 0.0 < t_max) || m < 3)
      throw bad_argument("bad_grid", "grid needs t_min < 0 < t_max and at least 3 nodes");
  }
};

// How the slope condition at t_min is imposed.
//   edge_aware: plain Neumann inside the region, Robin forms carrying the
//               leading correction on the region edges.
//   neumann:    du/dt = gamma, dv/dt = delta everywhere.
enum class InnerBc { edge_aware, neumann };

struct SolverConfig {
  double residual_tol = 1e-8;
  double iter_tol = 1e-10;
  int max_outer = 400000;
  int max_linear = 200;     // Newton steps (auxiliary scalar problems, polish)
  int polish_after = 4000;  // sweeps before a Newton polish is attempted; 0 disables
  InnerBc inner_bc = InnerBc::edge_aware;
  double mixed_margin = 0.2;
  double mixed_gap = 1e-3;
  double slack = 1e-9;

  void validate() const {
    if (!(residual_tol > 0 && iter_tol > 0 && max_outer > 0 && max_linear > 0 && mixed_margin > 0 &&
          mixed_gap > 0 && slack > 0 && polish_after >= 0))
      throw bad_argument("bad_config", "solver tolerances and limits must be positive");
  }
};

// Counters recorded over every sweep of the monotone scheme.
struct IterationStats {
  long sweeps = 0;
  long monotone_violations = 0;
  long bracket_violations = 0;
  long clamp_events = 0;
  long polish_events = 0;
  long polish_rejections = 0;  // Newton jumps discarded for leaving the bracket
  bool clamp_active_at_end = false;
  double worst_monotone_excess = 0.0;
  double worst_bracket_excess = 0.0;

  void merge(const IterationStats& o) {
    sweeps += o.sweeps;
    monotone_violations += o.monotone_violations;
    bracket_violations += o.bracket_violations;
    clamp_events += o.clamp_events;
    polish_events += o.polish_events;
    polish_rejections += o.polish_rejections;
    clamp_active_at_end = clamp_active_at_end || o.clamp_active_at_end;
    worst_monotone_excess = std::max(worst_monotone_excess, o.worst_monotone_excess);
    worst_bracket_excess = std::max(worst_bracket_excess, o.worst_bracket_excess);
  }
  bool clean() const { return monotone_violations == 0 && bracket_violations == 0 && !clamp_active_at_end; }
};

struct ScalarProfile {
  RadialGrid grid;
  std::vector<double> values;
  double residual = 0.0;
};

struct PairProfile {
  RadialGrid grid;
  std::vector<double> u, v;
  double gamma = 0, delta = 0, a = 2, b = 2;
  InnerBc inner_bc = InnerBc::edge_aware;
  std::optional<CaseLabel> case_label;
  std::string scheme;
  double residual = 0.0;
  IterationStats stats;
};

namespace detail {

inline double clamped_exp(double x, long* clamps = nullptr) {
  if (x > 700.0) {
    if (clamps) ++*clamps;
    return std::exp(700.0);
  }
  if (x < -700.0) {
    if (clamps) ++*clamps;
    return std::exp(-700.0);
  }
  return std::exp(x);
}

}  // namespace detail

// Right sides of u_tt and v_tt in the log variable.
inline std::pair<double, double> radial_rhs(double u, double v, double a, double b, double t) {
  using detail::clamped_exp;
  const double k = 4.0 * std::exp(2.0 * t);
  const double mid = clamped_exp(v - u);
  return {k * (clamped_exp(a * u) - mid), k * (mid - clamped_exp(-b * v))};
}

struct InnerSlopes {
  double su = 0, sv = 0;
  double dsu_du = 0, dsu_dv = 0, dsv_du = 0, dsv_dv = 0;
};

// Slope data at t_min. On an edge of the region the solution carries a
// log-log correction; the Robin forms below encode its leading term in
// p = u - gamma t0, q = v - delta t0 and chi = v - u + 2 t0.
class InnerBoundary {
 public:
  InnerBoundary(double a, double b, double gamma, double delta, double t0, InnerBc mode)
      : a_(a), b_(b), g_(gamma), d_(delta), t0_(t0) {
    if (mode == InnerBc::edge_aware) edges_ = region_edges(a, b, gamma, delta);
  }

  bool robin() const { return edges_.any(); }
  const RegionEdges& edges() const { return edges_; }

  InnerSlopes eval(double u0, double v0) const {
    using detail::clamped_exp;
    InnerSlopes s;
    s.su = g_;
    s.sv = d_;
    const double ep = clamped_exp(0.5 * a_ * (u0 - g_ * t0_));   // e^{a p / 2}
    const double eq = clamped_exp(-0.5 * b_ * (v0 - d_ * t0_));  // e^{-b q / 2}
    const double ec = clamped_exp(0.5 * (v0 - u0) + t0_);        // e^{chi / 2}
    if (edges_.top && edges_.slant) {
      const double alpha = g_, beta = d_, c2 = (alpha + beta) / 4.0;
      const double cu = 2.0 * std::sqrt(alpha), cv = beta / std::sqrt(c2);
      s.su = g_ - cu * ec;
      s.dsu_du = 0.5 * cu * ec;
      s.dsu_dv = -0.5 * cu * ec;
      s.sv = d_ - cv * eq;
      s.dsv_dv = 0.5 * b_ * cv * eq;
    } else if (edges_.left && edges_.slant) {
      const double c3 = (4.0 / a_ + 2.0) / 4.0;
      const double cu = (2.0 / a_) / std::sqrt(c3), cv = 2.0 * std::sqrt(2.0 / a_ + 2.0);
      s.su = g_ + cu * ep;
      s.dsu_du = 0.5 * a_ * cu * ep;
      s.sv = d_ + cv * ec;
      s.dsv_du = -0.5 * cv * ec;
      s.dsv_dv = 0.5 * cv * ec;
    } else {
      if (edges_.left) {
        const double c = std::sqrt(8.0 / a_);
        s.su = g_ + c * ep;
        s.dsu_du = 0.5 * a_ * c * ep;
      }
      if (edges_.top) {
        const double c = std::sqrt(8.0 / b_);
        s.sv = d_ - c * eq;
        s.dsv_dv = 0.5 * b_ * c * eq;
      }
      if (edges_.slant) {
        s.su = g_ - 2.0 * ec;
        s.dsu_du = ec;
        s.dsu_dv = -ec;
        s.sv = d_ + 2.0 * ec;
        s.dsv_du = -ec;
        s.dsv_dv = ec;
      }
    }
    return s;
  }

  // Upper bounds of dsu/du0 and dsv/dv0 over a box. Every term is an
  // increasing exponential, so the worst corner is explicit.
  std::pair<double, double> own_derivative_bound(double ulo, double uhi, double vlo, double vhi) const {
    if (!robin()) return {0.0, 0.0};
    const InnerSlopes at_p = eval(uhi, vhi);  // largest e^{ap/2}
    const InnerSlopes at_q = eval(uhi, vlo);  // largest e^{-bq/2}
    const InnerSlopes at_c = eval(ulo, vhi);  // largest e^{chi/2}
    return {std::max({at_p.dsu_du, at_c.dsu_du}), std::max({at_q.dsv_dv, at_c.dsv_dv})};
  }

 private:
  double a_, b_, g_, d_, t0_;
  RegionEdges edges_;
};

struct PairState {
  std::vector<double> u, v;
};

// The discretised coupled system on a grid:
//   rows 0..m-2:  (L u)_j = k_j F(u_j, v_j)  [+ (2/h) sigma_u at j = 0]
//   row m-1:      u = v = 0
// with L the centred second difference (ghost-node reflection at j = 0).
class RadialSystem {
 public:
  RadialSystem(double a, double b, double gamma, double delta, const RadialGrid& grid, InnerBc mode)
      : a_(a), b_(b), gamma_(gamma), delta_(delta), grid_(grid), bc_(a, b, gamma, delta, grid.t_min, mode) {
    grid.validate();
    h_ = grid.h();
    k_.resize(grid.m);
    for (int j = 0; j < grid.m; ++j) k_[j] = 4.0 * std::exp(2.0 * grid.t(j));
  }

  double a() const { return a_; }
  double b() const { return b_; }
  double gamma() const { return gamma_; }
  double delta() const { return delta_; }
  double h() const { return h_; }
  int m() const { return grid_.m; }
  const RadialGrid& grid() const { return grid_; }
  const InnerBoundary& boundary() const { return bc_; }
  const std::vector<double>& k() const { return k_; }

  double lap(const std::vector<double>& x, int j) const {
    if (j == 0) return 2.0 * (x[1] - x[0]) / (h_ * h_);
    return (x[j - 1] - 2.0 * x[j] + x[j + 1]) / (h_ * h_);
  }

  // Raw and scaled residual rows.
  void residual(const PairState& s, std::vector<double>& ru, std::vector<double>& rv,
                double* scaled_sup = nullptr) const {
    using detail::clamped_exp;
    const int m = grid_.m;
    ru.assign(m, 0.0);
    rv.assign(m, 0.0);
    double worst = 0.0;
    const InnerSlopes sl = bc_.eval(s.u[0], s.v[0]);
    for (int j = 0; j < m - 1; ++j) {
      const double eu = clamped_exp(a_ * s.u[j]), em = clamped_exp(s.v[j] - s.u[j]),
                   ev = clamped_exp(-b_ * s.v[j]);
      ru[j] = lap(s.u, j) - k_[j] * (eu - em);
      rv[j] = lap(s.v, j) - k_[j] * (em - ev);
      double su = 2.0 / (h_ * h_) + k_[j] * (a_ * eu + em);
      double sv = 2.0 / (h_ * h_) + k_[j] * (em + b_ * ev);
      if (j == 0) {
        ru[0] -= 2.0 / h_ * sl.su;
        rv[0] -= 2.0 / h_ * sl.sv;
        su += 2.0 / h_ * std::abs(sl.dsu_du);
        sv += 2.0 / h_ * std::abs(sl.dsv_dv);
      }
      worst = std::max({worst, std::abs(ru[j]) / su, std::abs(rv[j]) / sv});
    }
    ru[m - 1] = s.u[m - 1];
    rv[m - 1] = s.v[m - 1];
    worst = std::max({worst, std::abs(ru[m - 1]), std::abs(rv[m - 1])});
    if (scaled_sup) *scaled_sup = worst;
  }

  double scaled_residual(const PairState& s) const {
    std::vector<double> ru, rv;
    double w = 0;
    residual(s, ru, rv, &w);
    return w;
  }

 private:
  double a_, b_, gamma_, delta_;
  RadialGrid grid_;
  InnerBoundary bc_;
  double h_;
  std::vector<double> k_;
};

enum class Direction { decreasing, increasing };

// One sweep of the shifted linear iteration
//   (L - S) w_new = N(w_old) - S w_old
// where the shift S bounds dN/dw on the box [lo, hi] tightened by the
// current iterate. The off-diagonal couplings of N are non-positive, so the
// sweep maps the box into itself and preserves order.
inline PairState monotone_step(const RadialSystem& sys, const PairState& cur, const PairState& lo,
                               const PairState& hi, Direction dir, IterationStats& stats,
                               double slack = 1e-9) {
  using detail::clamped_exp;
  const int m = sys.m();
  const double h = sys.h(), ih2 = 1.0 / (h * h), a = sys.a(), b = sys.b();
  const auto& k = sys.k();
  const PairState& blo = dir == Direction::increasing ? cur : lo;
  const PairState& bhi = dir == Direction::decreasing ? cur : hi;

  std::vector<double> sub(m, ih2), diag(m), sup(m, ih2), ru(m), su(m), dv(m), rv(m);
  sub[0] = 0.0;
  sup[0] = 2.0 * ih2;
  long clamps = 0;
  const InnerSlopes sl = sys.boundary().eval(cur.u[0], cur.v[0]);
  const auto [bu0, bv0] = sys.boundary().own_derivative_bound(blo.u[0], bhi.u[0], blo.v[0], bhi.v[0]);

  for (int j = 0; j < m - 1; ++j) {
    const double eu = clamped_exp(a * cur.u[j], &clamps), em = clamped_exp(cur.v[j] - cur.u[j], &clamps),
                 ev = clamped_exp(-b * cur.v[j], &clamps);
    const double cross = clamped_exp(bhi.v[j] - blo.u[j], &clamps);
    double Su = k[j] * (a * clamped_exp(a * bhi.u[j], &clamps) + cross);
    double Sv = k[j] * (cross + b * clamped_exp(-b * blo.v[j], &clamps));
    double Nu = k[j] * (eu - em), Nv = k[j] * (em - ev);
    if (j == 0) {
      Su += 2.0 / h * bu0;
      Sv += 2.0 / h * bv0;
      Nu += 2.0 / h * sl.su;
      Nv += 2.0 / h * sl.sv;
    }
    su[j] = -2.0 * ih2 - Su;
    dv[j] = -2.0 * ih2 - Sv;
    ru[j] = Nu - Su * cur.u[j];
    rv[j] = Nv - Sv * cur.v[j];
  }
  sub[m - 1] = 0.0;
  sup[m - 1] = 0.0;
  su[m - 1] = dv[m - 1] = 1.0;
  ru[m - 1] = rv[m - 1] = 0.0;

  PairState next{solve_tridiagonal(sub, su, sup, ru), solve_tridiagonal(sub, dv, sup, rv)};

  ++stats.sweeps;
  if (clamps) ++stats.clamp_events;
  double worst_mono = 0.0, worst_br = 0.0;
  for (int j = 0; j < m; ++j) {
    for (int c = 0; c < 2; ++c) {
      const double x = c ? next.v[j] : next.u[j];
      const double x0 = c ? cur.v[j] : cur.u[j];
      const double step = dir == Direction::decreasing ? x - x0 : x0 - x;
      worst_mono = std::max(worst_mono, step);
      worst_br = std::max({worst_br, (c ? lo.v[j] : lo.u[j]) - x, x - (c ? hi.v[j] : hi.u[j])});
    }
  }
  if (worst_mono > slack) ++stats.monotone_violations;
  if (worst_br > slack) ++stats.bracket_violations;
  stats.worst_monotone_excess = std::max(stats.worst_monotone_excess, worst_mono);
  stats.worst_bracket_excess = std::max(stats.worst_bracket_excess, worst_br);
  return next;
}

// Decreasing sweep from a supersolution, as used for gamma, delta >= 0.
inline PairState monotone_step_nonneg(const RadialSystem& sys, const PairState& cur, const PairState& sub,
                                      const PairState& super, IterationStats& stats, double slack = 1e-9) {
  return monotone_step(sys, cur, sub, super, Direction::decreasing, stats, slack);
}

// Increasing sweep from a subsolution, as used for mixed signs.
inline PairState monotone_step_mixed(const RadialSystem& sys, const PairState& cur, const PairState& wbar,
                                     const PairState& wstar, IterationStats& stats, double slack = 1e-9) {
  return monotone_step(sys, cur, wbar, wstar, Direction::increasing, stats, slack);
}

}  // namespace ttstar
