#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "ttstar/radial_system.hpp"

namespace ttstar {

// Jacobian of the residual rows of RadialSystem, unknowns interleaved as
// (u_0, v_0, u_1, v_1, ...).
inline Eigen::SparseMatrix<double> radial_jacobian(const RadialSystem& sys, const PairState& s) {
  using detail::clamped_exp;
  const int m = sys.m();
  const double h = sys.h(), ih2 = 1.0 / (h * h), a = sys.a(), b = sys.b();
  const auto& k = sys.k();
  std::vector<Eigen::Triplet<double>> tr;
  tr.reserve(8 * m);
  const InnerSlopes sl = sys.boundary().eval(s.u[0], s.v[0]);
  for (int j = 0; j < m - 1; ++j) {
    const int iu = 2 * j, iv = 2 * j + 1;
    const double eu = clamped_exp(a * s.u[j]), em = clamped_exp(s.v[j] - s.u[j]), ev = clamped_exp(-b * s.v[j]);
    double duu = -2.0 * ih2 - k[j] * (a * eu + em), duv = k[j] * em;
    double dvv = -2.0 * ih2 - k[j] * (em + b * ev), dvu = k[j] * em;
    if (j == 0) {
      duu -= 2.0 / h * sl.dsu_du;
      duv -= 2.0 / h * sl.dsu_dv;
      dvu -= 2.0 / h * sl.dsv_du;
      dvv -= 2.0 / h * sl.dsv_dv;
      tr.emplace_back(iu, iu + 2, 2.0 * ih2);
      tr.emplace_back(iv, iv + 2, 2.0 * ih2);
    } else {
      tr.emplace_back(iu, iu - 2, ih2);
      tr.emplace_back(iu, iu + 2, ih2);
      tr.emplace_back(iv, iv - 2, ih2);
      tr.emplace_back(iv, iv + 2, ih2);
    }
    tr.emplace_back(iu, iu, duu);
    tr.emplace_back(iu, iv, duv);
    tr.emplace_back(iv, iv, dvv);
    tr.emplace_back(iv, iu, dvu);
  }
  tr.emplace_back(2 * (m - 1), 2 * (m - 1), 1.0);
  tr.emplace_back(2 * (m - 1) + 1, 2 * (m - 1) + 1, 1.0);
  Eigen::SparseMatrix<double> J(2 * m, 2 * m);
  J.setFromTriplets(tr.begin(), tr.end());
  return J;
}

struct NewtonReport {
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;
};

// Damped Newton with backtracking on the scaled sup-norm residual. With
// step_tol > 0 iteration continues past `tol` until the update falls below
// step_tol: near t_min the scaled residual is a weak measure of the error.
inline NewtonReport newton_solve(const RadialSystem& sys, PairState& s, double tol, int max_iter,
                                 double step_tol = 0.0) {
  const int m = sys.m();
  NewtonReport rep;
  std::vector<double> ru, rv;
  sys.residual(s, ru, rv, &rep.residual);
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  double last_step = step_tol > 0 ? std::numeric_limits<double>::infinity() : 0.0;
  for (; rep.iterations < max_iter && (rep.residual > tol || last_step > step_tol); ++rep.iterations) {
    Eigen::VectorXd rhs(2 * m);
    for (int j = 0; j < m; ++j) {
      rhs[2 * j] = -ru[j];
      rhs[2 * j + 1] = -rv[j];
    }
    const Eigen::SparseMatrix<double> J = radial_jacobian(sys, s);
    lu.compute(J);
    if (lu.info() != Eigen::Success) return rep;
    const Eigen::VectorXd dx = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !dx.allFinite()) return rep;

    double lambda = 1.0;
    PairState trial = s;
    double trial_res = 0.0;
    std::vector<double> tu, tv;
    for (;;) {
      for (int j = 0; j < m; ++j) {
        trial.u[j] = s.u[j] + lambda * dx[2 * j];
        trial.v[j] = s.v[j] + lambda * dx[2 * j + 1];
      }
      sys.residual(trial, tu, tv, &trial_res);
      if (trial_res < rep.residual || lambda < 1e-8) break;
      lambda *= 0.5;
    }
    if (!(trial_res < rep.residual)) {
      if (rep.residual <= tol) break;  // roundoff floor reached
      return rep;
    }
    last_step = lambda * dx.cwiseAbs().maxCoeff();
    s = std::move(trial);
    ru.swap(tu);
    rv.swap(tv);
    rep.residual = trial_res;
  }
  rep.converged = rep.residual <= tol;
  return rep;
}

}  // namespace ttstar
