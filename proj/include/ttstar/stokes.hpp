#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "ttstar/case_model.hpp"
#include "ttstar/error.hpp"

namespace ttstar {

struct StokesData {
  CaseLabel label;
  double gamma = 0, delta = 0;
  double s1R = 0, s2R = 0;
  cplx s1, s2;
  bool sign_ambiguous = false;
};

struct QPair {
  CMatrix first;   // Q_1
  CMatrix second;  // Q_{1 + 1/(n+1)}
};

// Coefficients of lambda^{n+1}, lambda^n, ..., lambda^0.
struct CharPoly {
  std::vector<cplx> coeffs;
  int degree() const { return int(coeffs.size()) - 1; }
};

namespace detail {

// Angle offsets (o1, o2) with c1 = cos(pi (gamma + o1)/(n+1)), c2 = cos(pi (delta + o2)/(n+1)).
inline std::array<double, 2> group_offsets(CaseGroup g) {
  switch (g) {
    case CaseGroup::g4: return {1, 3};
    case CaseGroup::g5ab: return {6, 8};
    case CaseGroup::g5cde: return {2, 4};
    case CaseGroup::g6: return {2, 4};
  }
  return {0, 0};
}

inline int group_n(CaseGroup g) { return g == CaseGroup::g4 ? 3 : g == CaseGroup::g6 ? 5 : 4; }

inline bool group_even(CaseGroup g) { return g == CaseGroup::g4 || g == CaseGroup::g6; }

// Phase exponents p with s = omega^p s^R.
inline std::array<double, 2> phase_exponents(CaseLabel c) {
  switch (c) {
    case CaseLabel::c4a: return {1.5, 3};
    case CaseLabel::c4b: return {0.5, 1};
    case CaseLabel::c5a: return {2, 4};
    case CaseLabel::c5b: return {1, 2};
    case CaseLabel::c5c: return {4, 3};
    case CaseLabel::c5d: return {0, 0};
    case CaseLabel::c5e: return {3, 1};
    case CaseLabel::c6a: return {2, 4};
    case CaseLabel::c6b: return {0, 0};
    case CaseLabel::c6c: return {1, 2};
  }
  return {0, 0};
}

}  // namespace detail

// Real Stokes data as functions of (c1, c2). Even groups use the "+" reading.
struct GroupForward {
  double s1R, s2R, c1, c2;
};

inline GroupForward group_forward(CaseGroup g, double gamma, double delta) {
  const auto [o1, o2] = detail::group_offsets(g);
  const double N = detail::group_n(g) + 1;
  const double c1 = std::cos(std::numbers::pi * (gamma + o1) / N);
  const double c2 = std::cos(std::numbers::pi * (delta + o2) / N);
  switch (g) {
    case CaseGroup::g4: return {2 * c1 + 2 * c2, -(2 + 4 * c1 * c2), c1, c2};
    case CaseGroup::g5ab:
    case CaseGroup::g5cde: return {1 + 2 * c1 + 2 * c2, -(2 + 2 * c1 + 2 * c2 + 4 * c1 * c2), c1, c2};
    case CaseGroup::g6: return {2 * c1 + 2 * c2, -(1 + 4 * c1 * c2), c1, c2};
  }
  return {0, 0, c1, c2};
}

inline std::pair<cplx, cplx> complex_lift(CaseLabel label, double s1R, double s2R) {
  const CaseSpec spec = make_case(label);
  const auto [p1, p2] = detail::phase_exponents(label);
  return {spec.omega_pow(p1) * s1R, spec.omega_pow(p2) * s2R};
}

inline std::pair<cplx, cplx> complex_lift(const StokesData& d) { return complex_lift(d.label, d.s1R, d.s2R); }

inline StokesData stokes_from_asymptotics(const CaseSpec& spec, double gamma, double delta) {
  if (!region_contains(spec.a, spec.b, gamma, delta, 1e-12))
    throw bad_argument("region_violation", "(gamma, delta) outside the admissible region");
  const GroupForward f = group_forward(spec.group, gamma, delta);
  StokesData d;
  d.label = spec.label;
  d.gamma = gamma;
  d.delta = delta;
  d.s1R = f.s1R;
  d.s2R = f.s2R;
  d.sign_ambiguous = detail::group_even(spec.group);
  std::tie(d.s1, d.s2) = complex_lift(d);
  return d;
}

inline QPair q_matrices(const CaseSpec& spec, cplx s1, cplx s2) {
  const int N = spec.size();
  QPair q{CMatrix::Identity(N, N), CMatrix::Identity(N, N)};
  switch (spec.n) {
    case 3:
      q.first(1, 0) = s1;
      q.first(2, 3) = -std::conj(s1);
      q.second(1, 3) = s2;
      break;
    case 4:
      q.first(2, 0) = s2;
      q.first(3, 4) = -std::conj(s1);
      q.second(1, 0) = s1;
      q.second(2, 4) = -std::conj(s2);
      break;
    default:
      q.first(2, 0) = s2;
      q.first(3, 5) = -std::conj(s2);
      q.second(1, 0) = s1;
      q.second(3, 4) = -std::conj(s1);
      break;
  }
  return q;
}

inline CharPoly char_poly(const CaseSpec& spec, cplx s1, cplx s2) {
  const cplx one = 1.0;
  switch (spec.n) {
    case 3: return {{one, -s1, -s2, std::conj(s1), -one}};
    case 4: return {{one, -s1, -s2, std::conj(s2), std::conj(s1), -one}};
    default: return {{one, -s1, -s2, 0.0, std::conj(s2), std::conj(s1), -one}};
  }
}

// Characteristic polynomial of a small dense matrix (Faddeev-LeVerrier).
inline CharPoly matrix_char_poly(const CMatrix& M) {
  const int N = int(M.rows());
  CharPoly p;
  p.coeffs.assign(N + 1, 0.0);
  p.coeffs[0] = 1.0;
  CMatrix Mk = CMatrix::Zero(N, N);
  for (int k = 1; k <= N; ++k) {
    Mk = M * (Mk + p.coeffs[k - 1] * CMatrix::Identity(N, N));
    p.coeffs[k] = -Mk.trace() / double(k);
  }
  return p;
}

inline std::vector<cplx> poly_roots(const CharPoly& p) {
  const int N = p.degree();
  CMatrix C = CMatrix::Zero(N, N);
  for (int j = 0; j < N; ++j) C(0, j) = -p.coeffs[j + 1] / p.coeffs[0];
  for (int i = 1; i < N; ++i) C(i, i - 1) = 1.0;
  Eigen::ComplexEigenSolver<CMatrix> es(C, false);
  std::vector<cplx> r(es.eigenvalues().data(), es.eigenvalues().data() + N);
  return r;
}

// Greedy nearest-pair matching; repeated values are matched by multiplicity.
// Returns the largest matched distance (infinity on size mismatch).
inline double multiset_distance(std::vector<cplx> x, std::vector<cplx> y) {
  if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  while (!x.empty()) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < y.size(); ++j)
        if (std::abs(x[i] - y[j]) < best) {
          best = std::abs(x[i] - y[j]);
          bi = i;
          bj = j;
        }
    worst = std::max(worst, best);
    x.erase(x.begin() + bi);
    y.erase(y.begin() + bj);
  }
  return worst;
}

// kappa in the root involution lambda -> 1/(omega^kappa lambda).
inline int root_kappa(CaseLabel c) {
  switch (c) {
    case CaseLabel::c4a: return 1;
    case CaseLabel::c4b: return 3;
    case CaseLabel::c5a: return 1;
    case CaseLabel::c5b: return 3;
    case CaseLabel::c5c: return 2;
    case CaseLabel::c5d: return 0;
    case CaseLabel::c5e: return 4;
    case CaseLabel::c6a: return 2;
    case CaseLabel::c6b: return 0;
    case CaseLabel::c6c: return 4;
  }
  return 0;
}

// Closure of the roots under lambda -> 1/(omega^kappa lambda), tested on
// coefficients: lambda^N p(1/(omega^kappa lambda)) must be proportional to p.
// This is equivalent to multiset closure and stays well conditioned at
// repeated roots.
inline bool root_symmetry_check(const CaseSpec& spec, const CharPoly& p, double tol = 1e-8) {
  const int N = p.degree();
  const cplx lead = p.coeffs[N];
  if (std::abs(lead) < 1e-300) return false;
  for (int j = 0; j <= N; ++j) {
    const cplx q = p.coeffs[N - j] * std::pow(spec.omega_pow(-root_kappa(spec.label)), j) / lead;
    if (std::abs(q - p.coeffs[j]) > tol) return false;
  }
  return true;
}

// Integer exponents a_i with eigenvalues omega^{a_i} e^{i pi gamma_i/(n+1)}.
// For even cases the two admissible (l, m) choices belong to the two sign
// readings of s1R; `plus` selects the one matching the "+" formula.
inline std::vector<int> eigenvalue_offsets(CaseLabel c, bool plus = true) {
  auto lm = [&](int lp, int mp, int lm_, int mm) { return plus ? std::pair{lp, mp} : std::pair{lm_, mm}; };
  switch (c) {
    case CaseLabel::c4a: {
      auto [l, m] = lm(2, 3, 0, 1);
      return {l, m, -m - 1, -l - 1};
    }
    case CaseLabel::c4b: {
      auto [l, m] = lm(1, 2, 3, 0);
      return {m, -m + 1, -l + 1, l};
    }
    case CaseLabel::c5a: return {0, 1, 2, -2, -1};
    case CaseLabel::c5b: return {0, 1, -3, -7, 4};
    case CaseLabel::c5c: return {0, 1, -3, -2, 4};
    case CaseLabel::c5d: return {0, 1, 2, -2, -1};
    case CaseLabel::c5e: return {0, -4, -8, 3, 4};
    case CaseLabel::c6a: {
      auto [l, m] = lm(3, 4, 0, 1);
      return {l, m, 2, -m - 2, -l - 2, 5};
    }
    case CaseLabel::c6b: {
      auto [l, m] = lm(1, 2, 4, 5);
      return {0, l, m, 3, -m, -l};
    }
    case CaseLabel::c6c: {
      // l sits next to delta in this ordering of the gamma vector
      auto [l, m] = lm(3, 2, 0, 5);
      return {l, 1, -l - 4, -m - 4, 4, m};
    }
  }
  return {};
}

inline std::vector<cplx> monodromy_eigenvalues(const CaseSpec& spec, double gamma, double delta,
                                               int s1_sign = +1) {
  const RVector gv = spec.gamma_map(gamma, delta);
  const std::vector<int> off = eigenvalue_offsets(spec.label, s1_sign >= 0);
  const int N = spec.size();
  std::vector<cplx> ev(N);
  for (int i = 0; i < N; ++i)
    ev[i] = spec.omega_pow(((off[i] % N) + N) % N) * std::polar(1.0, std::numbers::pi * gv[i] / N);
  return ev;
}

}  // namespace ttstar
