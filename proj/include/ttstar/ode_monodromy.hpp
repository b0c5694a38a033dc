#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/numeric/odeint.hpp>

#include "ttstar/case_model.hpp"
#include "ttstar/error.hpp"
#include "ttstar/parallel.hpp"
#include "ttstar/radial_solver.hpp"
#include "ttstar/stokes.hpp"

namespace ttstar {

// Coefficient data of Psi_zeta = A(zeta) Psi with
//   A(zeta) = -W / zeta^2 - diag(x w_x) / zeta + x^2 W^T,
// W_{i,i+1} = e^{w_{i+1} - w_i} (indices mod n+1).
struct OdeField {
  CaseSpec spec;
  double x = 0;
  RVector w, xw;
  CMatrix W, Wt, P, d;

  CMatrix coefficient(cplx z) const {
    CMatrix A = -W / (z * z) + x * x * Wt;
    for (int i = 0; i < spec.size(); ++i) A(i, i) -= xw[i] / z;
    return A;
  }
};

inline OdeField ode_field_from_values(const CaseSpec& spec, const RVector& w, const RVector& xw, double x) {
  const int N = spec.size();
  OdeField f{spec, x, w, xw, CMatrix::Zero(N, N), CMatrix(), CMatrix(), cyclic_d(spec)};
  for (int i = 0; i < N; ++i) f.W(i, (i + 1) % N) = std::exp(w[(i + 1) % N] - w[i]);
  f.Wt = f.W.transpose();
  CMatrix ew = CMatrix::Zero(N, N);
  for (int i = 0; i < N; ++i) ew(i, i) = std::exp(w[i]);
  f.P = ew * omega_matrix(spec).inverse();
  return f;
}

// w_i(x) and x dw_i/dx = dw_i/dt from cubic B-spline interpolation of the profile.
inline OdeField ode_field(const CaseSpec& spec, const PairProfile& p, double x) {
  if (!(x > 0) || std::log(x) < p.grid.t_min || std::log(x) > p.grid.t_max)
    throw bad_argument("x_out_of_grid", "x lies outside the profile grid");
  const double t = std::log(x), h = p.grid.h();
  boost::math::interpolators::cardinal_cubic_b_spline<double> su(p.u.begin(), p.u.end(), p.grid.t_min, h);
  boost::math::interpolators::cardinal_cubic_b_spline<double> sv(p.v.begin(), p.v.end(), p.grid.t_min, h);
  return ode_field_from_values(spec, spec.toda_w(su(t), sv(t)), spec.toda_w(su.prime(t), sv.prime(t)), x);
}

inline std::vector<double> stokes_ray_layout(const CaseSpec& spec) {
  const int N = spec.size();
  std::vector<double> rays;
  for (int k = 0; k < 2 * N; ++k) rays.push_back(k * std::numbers::pi / N);
  return rays;
}

// Opening of the initial Stokes sector Omega_1.
inline std::pair<double, double> initial_sector(const CaseSpec& spec) {
  const double pi = std::numbers::pi;
  switch (spec.n) {
    case 3: return {-pi / 2, 3 * pi / 4};
    case 4: return {-3 * pi / 5, 3 * pi / 5};
    default: return {-pi / 2, 4 * pi / 6};
  }
}

// Integrates the gauged system Phi = Psi e^{-zeta x^2 d},
//   dPhi/dtheta = i zeta (A Phi - x^2 Phi d),
// along zeta = r e^{i theta} with an adaptive Runge-Kutta-Fehlberg 7(8) stepper.
inline CMatrix integrate_arc(const OdeField& f, const CMatrix& phi0, double r, double th0, double th1,
                             double tol = 1e-10) {
  namespace odeint = boost::numeric::odeint;
  const int N = f.spec.size();
  using State = std::vector<cplx>;
  State y(phi0.data(), phi0.data() + N * N);
  if (th0 == th1) return phi0;
  const Eigen::VectorXcd dv = f.d.diagonal();
  auto rhs = [&](const State& s, State& ds, double th) {
    const cplx z = std::polar(r, th);
    Eigen::Map<const CMatrix> Y(s.data(), N, N);
    Eigen::Map<CMatrix> dY(ds.data(), N, N);
    CMatrix T = f.coefficient(z) * Y - f.x * f.x * (Y * dv.asDiagonal());
    dY = cplx(0, 1) * z * T;
  };
  auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>());
  const double dt = (th1 > th0 ? 1.0 : -1.0) * std::min(1e-3, std::abs(th1 - th0));
  try {
    odeint::integrate_adaptive(stepper, rhs, y, th0, th1, dt);
  } catch (const std::exception& e) {
    throw non_convergence("stiff_arc", std::string("arc integration failed: ") + e.what() +
                                           "; try a smaller x or R");
  }
  for (const cplx& c : y)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
      throw non_convergence("stiff_arc", "arc integration overflowed; try a smaller x or R");
  return Eigen::Map<const CMatrix>(y.data(), N, N);
}

// Formal solution P (I + sum psi_k zeta^{-k}) e^{zeta x^2 d} at infinity.
class FormalSeries {
 public:
  FormalSeries(const OdeField& f, int terms = 60) : P_(f.P) {
    const int N = f.spec.size();
    const CMatrix Pinv = f.P.inverse();
    CMatrix xwd = CMatrix::Zero(N, N);
    for (int i = 0; i < N; ++i) xwd(i, i) = f.xw[i];
    const CMatrix B1 = -Pinv * xwd * f.P, B2 = -Pinv * f.W * f.P;
    const Eigen::VectorXcd dv = f.d.diagonal();
    auto D = [&](int i, int j) { return f.x * f.x * (dv[i] - dv[j]); };

    psi_.push_back(CMatrix::Identity(N, N));
    CMatrix p1 = CMatrix::Zero(N, N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        if (i != j) p1(i, j) = -B1(i, j) / D(i, j);
    psi_.push_back(p1);
    for (int k = 1; k < terms; ++k) {
      CMatrix& pk = psi_[k];
      const CMatrix& pkm = psi_[k - 1];
      CMatrix R = B1 * pk + B2 * pkm;
      for (int i = 0; i < N; ++i) pk(i, i) = -R(i, i) / double(k);
      R = double(k) * pk + B1 * pk + B2 * pkm;
      CMatrix nx = CMatrix::Zero(N, N);
      for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
          if (i != j) nx(i, j) = -R(i, j) / D(i, j);
      psi_.push_back(nx);
    }
  }

  // Gauged value Phi at zeta, truncated at the smallest term.
  CMatrix seed(cplx z) const {
    std::size_t stop = 1;
    double smallest = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < psi_.size(); ++k) {
      const double nrm = psi_[k].norm() / std::pow(std::abs(z), double(k));
      if (nrm < smallest) {
        smallest = nrm;
        stop = k;
      }
    }
    CMatrix sum = CMatrix::Zero(P_.rows(), P_.cols());
    for (std::size_t k = 0; k <= stop; ++k) sum += psi_[k] / std::pow(z, double(k));
    return P_ * sum;
  }

 private:
  CMatrix P_;
  std::vector<CMatrix> psi_;
};

inline double condition_number(const CMatrix& M) {
  Eigen::JacobiSVD<CMatrix> svd(M);
  const auto& s = svd.singularValues();
  return s[0] / s[s.size() - 1];
}

struct CanonicalFrame {
  double sector_index = 1;  // k, in steps of 1/(n+1)
  cplx anchor;              // |anchor| = R
  CMatrix matrix;           // gauged Phi, Psi = Phi e^{zeta x^2 d}
};

inline CanonicalFrame integrate_arc(const OdeField& f, const CanonicalFrame& frame, double target_angle,
                                    double tol = 1e-10) {
  const double r = std::abs(frame.anchor);
  return {frame.sector_index, std::polar(r, target_angle),
          integrate_arc(f, frame.matrix, r, std::arg(frame.anchor), target_angle, tol)};
}

struct StokesEstimate {
  std::vector<double> k;       // sector indices of the Q_k below
  std::vector<CMatrix> Q;      // Psi_{k + 1/(n+1)} = Psi_k Q_k
  cplx s1_est, s2_est;
  double R = 0, x = 0, integration_tol = 0;
  double worst_condition = 0;  // over the frame inversions
  bool accuracy_warning = false;
};

namespace detail {

// Constant C with Y_b = Y_a C, for the series-seeded solutions at angles a, b.
struct Connection {
  CMatrix C;
  double condition = 0;  // of the frame inverted at the meeting angle
};

struct Connector {
  const OdeField& f;
  const FormalSeries& series;
  double R, tol;

  Connection operator()(double ta, double tb) const {
    const double tm = 0.5 * (ta + tb);
    const CMatrix Fa = integrate_arc(f, series.seed(std::polar(R, ta)), R, ta, tm, tol);
    const CMatrix Fb = integrate_arc(f, series.seed(std::polar(R, tb)), R, tb, tm, tol);
    const cplx z = std::polar(R, tm);
    const int N = f.spec.size();
    Eigen::VectorXcd e(N);
    for (int j = 0; j < N; ++j) e[j] = std::exp(z * f.x * f.x * f.d(j, j));
    return {e.cwiseInverse().asDiagonal() * (Fa.partialPivLu().solve(Fb)) * e.asDiagonal(), condition_number(Fa)};
  }
};

inline double sector_left(const CaseSpec& spec, double k) {
  return initial_sector(spec).first + (k - 1) * std::numbers::pi;
}

inline double anchor_angle(const CaseSpec& spec, double k) {
  return sector_left(spec, k) + std::numbers::pi / (2 * spec.size());
}

// Canonical solution on Omega_k as Y_A U, with Y_A seeded just inside the
// left edge of the sector and U unit upper triangular once the exponentials
// are ordered from recessive to dominant along that direction.

inline Connection canonical_factor(const CaseSpec& spec, const Connector& conn, double k) {
  const int N = spec.size();
  const double thA = anchor_angle(spec, k);
  const Connection G0 = conn(thA, thA + std::numbers::pi);
  const CMatrix& G = G0.C;
  std::vector<int> order(N);
  for (int j = 0; j < N; ++j) order[j] = j;
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return (std::polar(1.0, thA) * spec.omega_pow(i)).real() < (std::polar(1.0, thA) * spec.omega_pow(j)).real();
  });
  // reversed order turns G = U L into an LU factorisation without pivoting
  CMatrix H(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) H(i, j) = G(order[N - 1 - i], order[N - 1 - j]);
  CMatrix L = CMatrix::Identity(N, N);
  for (int c = 0; c < N; ++c)
    for (int r = c + 1; r < N; ++r) {
      const cplx fct = H(r, c) / H(c, c);
      L(r, c) = fct;
      H.row(r) -= fct * H.row(c);
    }
  CMatrix U = CMatrix::Zero(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) U(order[i], order[j]) = L(N - 1 - i, N - 1 - j);
  return {U, G0.condition};
}

// Q_k for the sector indices ks[j] -> ks[j] + 1/(n+1). Continuations are
// independent and run in parallel; results come back in index order.
inline std::vector<CMatrix> stokes_factors(const OdeField& f, const std::vector<double>& ks, double R, double tol,
                                           double* worst_condition = nullptr) {
  const CaseSpec& spec = f.spec;
  const int N = spec.size();
  const FormalSeries series(f);
  const Connector conn{f, series, R, tol};
  // tasks 0..K-1: U at ks[j]; K..2K-1: U at ks[j] + 1/N; 2K..3K-1: connections
  const std::size_t K = ks.size();
  auto parts = parallel_map(3 * K, [&](std::size_t i) {
    const double k = ks[i % K];
    if (i < 2 * K) return canonical_factor(spec, conn, i < K ? k : k + 1.0 / N);
    return conn(anchor_angle(spec, k), anchor_angle(spec, k + 1.0 / N));
  });
  std::vector<CMatrix> Q;
  for (std::size_t j = 0; j < K; ++j) Q.push_back(parts[j].C.partialPivLu().solve(parts[2 * K + j].C * parts[K + j].C));
  if (worst_condition)
    for (const auto& p : parts) *worst_condition = std::max(*worst_condition, p.condition);
  return Q;
}

}  // namespace detail

inline CMatrix stokes_factor(const CaseSpec& spec, const PairProfile& profile, double k, double x = 0.1,
                             double R = 800, double tol = 1e-10) {
  return detail::stokes_factors(ode_field(spec, profile, x), {k}, R, tol).front();
}

// Stokes factors Q_k for one full turn, k = 1, 1 + 1/(n+1), ..., 3 - 1/(n+1).
inline StokesEstimate estimate_stokes(const CaseSpec& spec, const PairProfile& profile, double x = 0.1,
                                      double R = 800, double tol = 1e-10) {
  if (!(R > 0) || !(tol > 0)) throw bad_argument("bad_monodromy_args", "R and tol must be positive");
  StokesEstimate est;
  est.R = R;
  est.x = x;
  est.integration_tol = tol;
  const int N = spec.size();
  for (int j = 0; j < 2 * N; ++j) est.k.push_back(1.0 + double(j) / N);
  est.Q = detail::stokes_factors(ode_field(spec, profile, x), est.k, R, tol, &est.worst_condition);
  // Case 4: s1 at (1,0) of Q_1, s2 at (1,3) of Q_{1+1/4}; cases 5, 6: s2 at
  // (2,0) of Q_1, s1 at (1,0) of Q_{1+1/(n+1)}.
  if (spec.n == 3) {
    est.s1_est = est.Q[0](1, 0);
    est.s2_est = est.Q[1](1, 3);
  } else {
    est.s1_est = est.Q[1](1, 0);
    est.s2_est = est.Q[0](2, 0);
  }
  est.accuracy_warning = est.worst_condition > 1e8;
  return est;
}

// Un-gauged continuation of Psi itself, dPsi/dtheta = i zeta A Psi.
inline CMatrix integrate_arc_raw(const OdeField& f, const CMatrix& psi0, double r, double th0, double th1,
                                 double tol = 1e-12) {
  namespace odeint = boost::numeric::odeint;
  const int N = f.spec.size();
  using State = std::vector<cplx>;
  State y(psi0.data(), psi0.data() + N * N);
  if (th0 == th1) return psi0;
  auto rhs = [&](const State& s, State& ds, double th) {
    const cplx z = std::polar(r, th);
    Eigen::Map<const CMatrix> Y(s.data(), N, N);
    Eigen::Map<CMatrix> dY(ds.data(), N, N);
    dY = cplx(0, 1) * z * (f.coefficient(z) * Y);
  };
  const double dt = (th1 > th0 ? 1.0 : -1.0) * std::min(1e-3, std::abs(th1 - th0));
  try {
    odeint::integrate_adaptive(odeint::make_controlled(tol, tol, odeint::runge_kutta_fehlberg78<State>()), rhs, y,
                               th0, th1, dt);
  } catch (const std::exception& e) {
    throw non_convergence("stiff_arc", std::string("arc integration failed: ") + e.what());
  }
  return Eigen::Map<const CMatrix>(y.data(), N, N);
}

// Second estimate free of asymptotics: for Y(zeta0) = I the matrix
// Y(omega zeta0)^{-1} d is conjugate to Q_k Q_{k+1/(n+1)} Pi, so its
// characteristic polynomial carries s1 and s2 directly.
inline std::pair<cplx, cplx> twisted_monodromy_estimate(const CaseSpec& spec, const PairProfile& profile,
                                                        double x = 0.1, double tol = 1e-12) {
  const OdeField f = ode_field(spec, profile, x);
  const int N = spec.size();
  const double th0 = 0.3;
  const CMatrix Y = integrate_arc_raw(f, CMatrix::Identity(N, N), 1.0, th0, th0 + 2 * std::numbers::pi / N, tol);
  const CharPoly cp = matrix_char_poly(Y.partialPivLu().solve(f.d));
  return {-cp.coeffs[1], -cp.coeffs[2]};
}

struct MonodromyReport {
  CaseLabel label;
  double gamma = 0, delta = 0, x = 0, R = 0;
  cplx s1_est, s2_est, s1_analytic, s2_analytic;
  double s1_err = 0, s2_err = 0;
  int resolved_sign = +1;  // sign of the s1R reading that fits the estimate
  bool accuracy_warning = false;
};

inline MonodromyReport compare(const StokesEstimate& est, const StokesData& analytic) {
  MonodromyReport r;
  r.label = analytic.label;
  r.gamma = analytic.gamma;
  r.delta = analytic.delta;
  r.x = est.x;
  r.R = est.R;
  r.s1_est = est.s1_est;
  r.s2_est = est.s2_est;
  r.s2_analytic = analytic.s2;
  const double plus = std::abs(est.s1_est - analytic.s1), minus = std::abs(est.s1_est + analytic.s1);
  r.resolved_sign = analytic.sign_ambiguous && minus < plus ? -1 : +1;
  r.s1_analytic = double(r.resolved_sign) * analytic.s1;
  r.s1_err = std::abs(est.s1_est - r.s1_analytic);
  r.s2_err = std::abs(est.s2_est - analytic.s2);
  r.accuracy_warning = est.accuracy_warning;
  return r;
}

}  // namespace ttstar
