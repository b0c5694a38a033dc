#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ttstar/error.hpp"

namespace ttstar {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

enum class CaseLabel { c4a, c4b, c5a, c5b, c5c, c5d, c5e, c6a, c6b, c6c };

inline constexpr std::array<CaseLabel, 10> all_cases = {
    CaseLabel::c4a, CaseLabel::c4b, CaseLabel::c5a, CaseLabel::c5b, CaseLabel::c5c,
    CaseLabel::c5d, CaseLabel::c5e, CaseLabel::c6a, CaseLabel::c6b, CaseLabel::c6c};

// Formula families shared by several cases.
enum class CaseGroup { g4, g5ab, g5cde, g6 };

inline constexpr std::array<CaseGroup, 4> all_groups = {CaseGroup::g4, CaseGroup::g5ab,
                                                        CaseGroup::g5cde, CaseGroup::g6};

// Coefficients of (gamma, delta) in one component of the gamma vector.
struct LinearEntry {
  int cg;
  int cd;
};

struct CaseSpec {
  CaseLabel label;
  std::string_view name;
  CaseGroup group;
  int n;
  int l;
  double a;
  double b;
  std::vector<LinearEntry> pattern;

  int size() const { return n + 1; }
  cplx omega() const { return std::polar(1.0, 2.0 * std::numbers::pi / (n + 1)); }
  cplx omega_pow(double p) const { return std::polar(1.0, 2.0 * std::numbers::pi * p / (n + 1)); }

  // (gamma_0, ..., gamma_n) for the asymptotic data (gamma, delta).
  RVector gamma_map(double gamma, double delta) const {
    RVector out(size());
    for (int i = 0; i < size(); ++i) out[i] = pattern[i].cg * gamma + pattern[i].cd * delta;
    return out;
  }

  // Toda functions w_i from the pair (u, v) = (2 w_0, 2 w_1) in the normalised ordering.
  RVector toda_w(double u, double v) const { return gamma_map(0.5 * u, 0.5 * v); }
};

namespace detail {

inline CaseSpec make_row(CaseLabel label, std::string_view name, CaseGroup group, int n, int l,
                         double a, double b, std::vector<LinearEntry> pattern) {
  return CaseSpec{label, name, group, n, l, a, b, std::move(pattern)};
}

constexpr LinearEntry G{1, 0}, D{0, 1}, mG{-1, 0}, mD{0, -1}, Z{0, 0};

}  // namespace detail

inline CaseSpec make_case(CaseLabel label) {
  using namespace detail;
  switch (label) {
    case CaseLabel::c4a: return make_row(label, "4a", CaseGroup::g4, 3, 4, 2, 2, {G, D, mD, mG});
    case CaseLabel::c4b: return make_row(label, "4b", CaseGroup::g4, 3, 2, 2, 2, {D, mD, mG, G});
    case CaseLabel::c5a: return make_row(label, "5a", CaseGroup::g5ab, 4, 5, 2, 1, {G, D, Z, mD, mG});
    case CaseLabel::c5b: return make_row(label, "5b", CaseGroup::g5ab, 4, 3, 2, 1, {D, Z, mD, mG, G});
    case CaseLabel::c5c: return make_row(label, "5c", CaseGroup::g5cde, 4, 4, 1, 2, {G, D, mD, mG, Z});
    case CaseLabel::c5d: return make_row(label, "5d", CaseGroup::g5cde, 4, 1, 1, 2, {Z, G, D, mD, mG});
    case CaseLabel::c5e: return make_row(label, "5e", CaseGroup::g5cde, 4, 2, 1, 2, {D, mD, mG, Z, G});
    case CaseLabel::c6a: return make_row(label, "6a", CaseGroup::g6, 5, 5, 1, 1, {G, D, Z, mD, mG, Z});
    case CaseLabel::c6b: return make_row(label, "6b", CaseGroup::g6, 5, 1, 1, 1, {Z, G, D, Z, mD, mG});
    case CaseLabel::c6c: return make_row(label, "6c", CaseGroup::g6, 5, 3, 1, 1, {D, Z, mD, mG, Z, G});
  }
  throw bad_argument("unknown_case", "unknown case label");
}

inline std::string_view case_name(CaseLabel label) { return make_case(label).name; }

inline std::optional<CaseLabel> parse_case(std::string_view text) {
  for (CaseLabel c : all_cases)
    if (case_name(c) == text) return c;
  return std::nullopt;
}

inline std::string_view group_name(CaseGroup g) {
  switch (g) {
    case CaseGroup::g4: return "4";
    case CaseGroup::g5ab: return "5ab";
    case CaseGroup::g5cde: return "5cde";
    case CaseGroup::g6: return "6";
  }
  return "?";
}

inline std::optional<CaseGroup> parse_group(std::string_view text) {
  for (CaseGroup g : all_groups)
    if (group_name(g) == text) return g;
  return std::nullopt;
}

// A representative case of each group; the group formulas only depend on n, a, b.
inline CaseSpec group_representative(CaseGroup g) {
  switch (g) {
    case CaseGroup::g4: return make_case(CaseLabel::c4a);
    case CaseGroup::g5ab: return make_case(CaseLabel::c5a);
    case CaseGroup::g5cde: return make_case(CaseLabel::c5c);
    case CaseGroup::g6: return make_case(CaseLabel::c6a);
  }
  throw bad_argument("unknown_group", "unknown case group");
}

inline bool region_contains(double a, double b, double gamma, double delta, double slack = 0.0) {
  return gamma >= -2.0 / a - slack && delta <= 2.0 / b + slack && gamma - delta <= 2.0 + slack;
}

inline bool region_contains(const CaseSpec& spec, double gamma, double delta) {
  return region_contains(spec.a, spec.b, gamma, delta);
}

// Which edges of the closed triangle the point lies on.
struct RegionEdges {
  bool left = false;   // gamma = -2/a
  bool top = false;    // delta = 2/b
  bool slant = false;  // gamma - delta = 2
  bool any() const { return left || top || slant; }
};

inline RegionEdges region_edges(double a, double b, double gamma, double delta, double tol = 1e-12) {
  RegionEdges e;
  e.left = std::abs(gamma + 2.0 / a) <= tol;
  e.top = std::abs(delta - 2.0 / b) <= tol;
  e.slant = std::abs(gamma - delta - 2.0) <= tol;
  return e;
}

struct AsymptoticData {
  double gamma;
  double delta;
  RVector gamma_vec;
  bool weak_asymptotics;  // point on the boundary of the region
};

inline AsymptoticData make_asymptotic_data(const CaseSpec& spec, double gamma, double delta) {
  if (!region_contains(spec, gamma, delta))
    throw bad_argument("region_violation", "(gamma, delta) outside the admissible region");
  return {gamma, delta, spec.gamma_map(gamma, delta),
          region_edges(spec.a, spec.b, gamma, delta).any()};
}

struct StructureMatrices {
  CMatrix Omega;
  CMatrix d;
  CMatrix Pi;
  CMatrix Delta;
  CMatrix OmegaDeltaOmega;
  CMatrix OmegaBarInv;
};

inline CMatrix cyclic_d(const CaseSpec& spec) {
  CMatrix d = CMatrix::Zero(spec.size(), spec.size());
  for (int i = 0; i < spec.size(); ++i) d(i, i) = spec.omega_pow(i);
  return d;
}

inline CMatrix omega_matrix(const CaseSpec& spec) {
  const int N = spec.size();
  CMatrix O(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) O(i, j) = spec.omega_pow((i * j) % N);
  return O;
}

namespace detail {

inline void require_close(const CMatrix& x, const CMatrix& y, const char* what) {
  if ((x - y).cwiseAbs().maxCoeff() > 1e-12)
    throw verification_failure("structure_identity", std::string("identity failed: ") + what);
}

}  // namespace detail

// Builds the fixed matrices and checks their defining identities.
inline StructureMatrices structure_matrices(const CaseSpec& spec) {
  const int N = spec.size();
  StructureMatrices s;
  s.Omega = omega_matrix(spec);
  s.d = cyclic_d(spec);
  const CMatrix Oinv = s.Omega.inverse();
  s.Pi = s.Omega * s.d * Oinv;

  // block anti-diagonal with an l block and an (n+1-l) block
  s.Delta = CMatrix::Zero(N, N);
  for (int i = 0; i < spec.l; ++i) s.Delta(i, spec.l - 1 - i) = 1.0;
  for (int i = spec.l; i < N; ++i) s.Delta(i, N - 1 - (i - spec.l)) = 1.0;

  s.OmegaDeltaOmega = s.Omega * s.Delta * s.Omega;
  s.OmegaBarInv = s.Omega * s.Omega.conjugate().inverse();

  CMatrix cycle = CMatrix::Zero(N, N);
  for (int i = 0; i < N; ++i) cycle(i, (i + 1) % N) = 1.0;
  detail::require_close(s.Pi, cycle, "Pi is the cyclic shift");
  detail::require_close(s.Delta * s.Delta, CMatrix::Identity(N, N), "Delta squared");

  CMatrix expected = CMatrix::Zero(N, N);
  for (int i = 0; i < N; ++i) expected(i, i) = double(N) * spec.omega_pow(((spec.l - 1) * i) % N);
  detail::require_close(s.OmegaDeltaOmega, expected, "Omega Delta Omega");

  CMatrix flip = CMatrix::Zero(N, N);
  for (int i = 0; i < N; ++i) flip(i, (N - i) % N) = 1.0;
  detail::require_close(s.OmegaBarInv, flip, "Omega Omegabar^-1");
  return s;
}

}  // namespace ttstar
