#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "ttstar/case_model.hpp"
#include "ttstar/parallel.hpp"
#include "ttstar/stokes.hpp"

namespace ttstar {

struct Rational {
  long p = 0;
  long q = 1;

  double value() const { return double(p) / double(q); }
  std::string str() const { return q == 1 ? std::to_string(p) : std::to_string(p) + "/" + std::to_string(q); }
  friend bool operator==(const Rational& x, const Rational& y) { return x.p == y.p && x.q == y.q; }
  friend bool operator<(const Rational& x, const Rational& y) { return x.p * y.q < y.p * x.q; }
};

inline Rational make_rational(long p, long q) {
  if (q < 0) p = -p, q = -q;
  const long g = std::gcd(std::labs(p), q);
  return {p / (g ? g : 1), q / (g ? g : 1)};
}

// Nearest p/q with q <= max_den (smallest q first) within tol, if any.
inline std::optional<Rational> snap_rational(double x, int max_den = 30, double tol = 1e-6) {
  for (int q = 1; q <= max_den; ++q) {
    const long p = std::lround(x * q);
    if (std::abs(x - double(p) / q) <= tol) return make_rational(p, q);
  }
  return std::nullopt;
}

struct IntegralSolution {
  CaseGroup group;
  double gamma = 0, delta = 0;
  std::optional<Rational> gamma_q, delta_q;  // empty when no small-denominator fraction fits
  int s1R = 0;  // "+" reading for the even groups
  int s2R = 0;
  std::string label;

  bool rational() const { return gamma_q && delta_q; }
};

namespace detail {

// Integer windows for the Stokes data, from |cos| <= 1 envelopes:
//   4:    |s1R| <= 4, s2R = -(2 + 4 c1 c2) in [-6, 2]
//   5ab, 5cde: s1R = 1 + 2(c1 + c2) in [-3, 5] (scanned over [-5, 5]),
//         s2R in [-10, 2]
//   6:    |s1R| <= 4 (scanned over [-6, 6]), s2R = -(1 + 4 c1 c2) in [-5, 3]
inline std::pair<int, int> s2_window(CaseGroup g) {
  switch (g) {
    case CaseGroup::g4: return {-6, 2};
    case CaseGroup::g5ab:
    case CaseGroup::g5cde: return {-10, 2};
    case CaseGroup::g6: return {-5, 3};
  }
  return {0, 0};
}

}  // namespace detail

// All (gamma, delta) in the group's region with the given Stokes data.
// Writes the formulas as c1 + c2 = S, c1 c2 = P and solves the quadratic;
// each root pair is mapped back through arccos on the angle interval the
// region occupies. For even groups s1R is read with the "+" sign.
inline std::vector<std::pair<double, double>> invert_stokes(CaseGroup g, double s1R, double s2R) {
  double S = 0, P = 0;
  switch (g) {
    case CaseGroup::g4:
      S = s1R / 2;
      P = (-s2R - 2) / 4;
      break;
    case CaseGroup::g5ab:
    case CaseGroup::g5cde:
      S = (s1R - 1) / 2;
      P = (-s2R - 2 - 2 * S) / 4;
      break;
    case CaseGroup::g6:
      S = s1R / 2;
      P = (-s2R - 1) / 4;
      break;
  }
  std::vector<std::pair<double, double>> out;
  double disc = S * S - 4 * P;
  if (disc < -1e-12) return out;
  disc = std::sqrt(std::max(disc, 0.0));
  const double r1 = 0.5 * (S + disc), r2 = 0.5 * (S - disc);

  const CaseSpec rep = group_representative(g);
  const double N = rep.n + 1;
  const auto [o1, o2] = detail::group_offsets(g);
  // gamma in [-2/a, 2/b + 2] and delta in [-2/a - 2, 2/b] over the region
  auto angles = [&](double c, double lo_var, double off) {
    std::vector<double> vals;
    if (std::abs(c) > 1 + 1e-9) return vals;
    const double th = std::acos(std::clamp(c, -1.0, 1.0));
    const double lo = std::numbers::pi * (lo_var + off) / N;
    for (double cand : {th, 2 * std::numbers::pi - th, th + 2 * std::numbers::pi, -th})
      if (cand >= lo - 1e-7 && cand <= lo + std::numbers::pi + 1e-7) vals.push_back(cand * N / std::numbers::pi);
    return vals;
  };
  for (auto [c1, c2] : {std::pair{r1, r2}, std::pair{r2, r1}}) {
    for (double x1 : angles(c1, -2.0 / rep.a, o1))
      for (double x2 : angles(c2, -2.0 / rep.a - 2.0, o2)) {
        const double gm = x1 - o1, dl = x2 - o2;
        if (!region_contains(rep.a, rep.b, gm, dl, 1e-6)) continue;
        const bool dup = std::any_of(out.begin(), out.end(), [&](const auto& p) {
          return std::abs(p.first - gm) < 1e-9 && std::abs(p.second - dl) < 1e-9;
        });
        if (!dup) out.emplace_back(gm, dl);
      }
  }
  return out;
}

// Positional labels for the region edges and two interior singularities.
inline std::string solution_label(CaseGroup g, const Rational& gm, const Rational& dl) {
  struct Row {
    CaseGroup g;
    long gp, gq, dp, dq;
    const char* label;
  };
  static const Row rows[] = {
      {CaseGroup::g4, 3, 1, 1, 1, "ℙ³"},
      {CaseGroup::g4, 5, 3, 1, 1, "X^{1,1,1,6}_{2,3}"},
      {CaseGroup::g4, 1, 1, 1, 1, "X^{1,1,4}_{2}"},
      {CaseGroup::g4, 1, 3, 1, 1, "ℙ^{1,3}"},
      {CaseGroup::g4, -1, 1, 1, 1, "ℙ^{2,2}"},
      {CaseGroup::g4, -1, 1, -1, 3, "ℙ^{1,3}"},
      {CaseGroup::g4, -1, 1, -1, 1, "X^{1,1,4}_{2}"},
      {CaseGroup::g4, -1, 1, -5, 3, "X^{1,1,1,6}_{2,3}"},
      {CaseGroup::g4, -1, 1, -3, 1, "ℙ³"},
      {CaseGroup::g4, 3, 5, 1, 5, "A₄ singularity"},
      {CaseGroup::g4, -1, 5, -3, 5, "A₄ singularity"},

      {CaseGroup::g5ab, 4, 1, 2, 1, "ℙ⁴"},
      {CaseGroup::g5ab, 7, 3, 2, 1, "X^{1,1,1,1,6}_{2,3}"},
      {CaseGroup::g5ab, 3, 2, 2, 1, "X^{1,1,1,4}_{2}"},
      {CaseGroup::g5ab, 2, 3, 2, 1, "ℙ^{1,1,3}"},
      {CaseGroup::g5ab, -1, 1, 2, 1, "ℙ^{1,2,2}"},
      {CaseGroup::g5ab, -1, 1, 1, 3, "ℙ^{2,3}"},
      {CaseGroup::g5ab, -1, 1, -1, 2, "ℙ^{1,4}"},
      {CaseGroup::g5ab, -1, 1, -4, 3, "X^{1,1,6}_{3}"},
      {CaseGroup::g5ab, -1, 1, -3, 1, "ℙ^{1,1,1,2}"},
      {CaseGroup::g5ab, 2, 3, 1, 3, "A₅ singularity"},

      {CaseGroup::g5cde, 3, 1, 1, 1, "ℙ^{1,1,1,2}"},
      {CaseGroup::g5cde, 4, 3, 1, 1, "X^{1,1,6}_{3}"},
      {CaseGroup::g5cde, 1, 2, 1, 1, "ℙ^{1,4}"},
      {CaseGroup::g5cde, -1, 3, 1, 1, "ℙ^{2,3}"},
      {CaseGroup::g5cde, -2, 1, 1, 1, "ℙ^{1,2,2}"},
      {CaseGroup::g5cde, -2, 1, -2, 3, "ℙ^{1,1,3}"},
      {CaseGroup::g5cde, -2, 1, -3, 2, "X^{1,1,1,4}_{2}"},
      {CaseGroup::g5cde, -2, 1, -7, 3, "X^{1,1,1,1,6}_{2,3}"},
      {CaseGroup::g5cde, -2, 1, -4, 1, "ℙ⁴"},
      {CaseGroup::g5cde, -1, 3, -2, 3, "A₅ singularity"},

      {CaseGroup::g6, 4, 1, 2, 1, "ℙ^{1,1,1,1,2}"},
      {CaseGroup::g6, 2, 1, 2, 1, "X^{1,1,1,6}_{3}"},
      {CaseGroup::g6, 1, 1, 2, 1, "ℙ^{1,1,4}"},
      {CaseGroup::g6, 0, 1, 2, 1, "ℙ^{1,2,3}"},
      {CaseGroup::g6, -2, 1, 2, 1, "ℙ^{2,2,2}"},
      {CaseGroup::g6, -2, 1, 0, 1, "ℙ^{1,2,3}"},
      {CaseGroup::g6, -2, 1, -1, 1, "ℙ^{1,1,4}"},
      {CaseGroup::g6, -2, 1, -2, 1, "X^{1,1,1,6}_{3}"},
      {CaseGroup::g6, -2, 1, -4, 1, "ℙ^{1,1,1,1,2}"},
  };
  for (const Row& r : rows)
    if (r.g == g && make_rational(r.gp, r.gq) == gm && make_rational(r.dp, r.dq) == dl) return r.label;
  return "";
}

inline std::vector<IntegralSolution> attach_labels(std::vector<IntegralSolution> sols) {
  for (auto& s : sols)
    if (s.rational()) s.label = solution_label(s.group, *s.gamma_q, *s.delta_q);
  return sols;
}

// Every region point of the group with integral (s1R, s2R), sorted by (gamma, delta).
inline std::vector<IntegralSolution> enumerate_integral(CaseGroup g) {
  const int N = detail::group_n(g) + 1;
  const auto [s2lo, s2hi] = detail::s2_window(g);
  const CaseSpec rep = group_representative(g);

  auto batches = parallel_map(std::size_t(2 * N + 1), [&](std::size_t idx) {
    const int s1 = int(idx) - N;
    std::vector<IntegralSolution> found;
    for (int s2 = s2lo; s2 <= s2hi; ++s2)
      for (auto [gm, dl] : invert_stokes(g, s1, s2)) {
        IntegralSolution sol{g, gm, dl, snap_rational(gm), snap_rational(dl), s1, s2, {}};
        // snapped values must reproduce the data exactly, otherwise keep the decimals
        if (sol.rational()) {
          const GroupForward f = group_forward(g, sol.gamma_q->value(), sol.delta_q->value());
          if (std::abs(f.s1R - s1) <= 1e-9 && std::abs(f.s2R - s2) <= 1e-9 &&
              region_contains(rep.a, rep.b, sol.gamma_q->value(), sol.delta_q->value())) {
            sol.gamma = sol.gamma_q->value();
            sol.delta = sol.delta_q->value();
          } else {
            sol.gamma_q.reset();
            sol.delta_q.reset();
          }
        }
        if (!sol.rational() && !region_contains(rep.a, rep.b, sol.gamma, sol.delta)) continue;
        found.push_back(sol);
      }
    return found;
  });

  std::vector<IntegralSolution> all;
  for (auto& b : batches)
    for (auto& s : b) {
      const bool dup = std::any_of(all.begin(), all.end(), [&](const IntegralSolution& o) {
        return std::abs(o.gamma - s.gamma) < 1e-9 && std::abs(o.delta - s.delta) < 1e-9;
      });
      if (!dup) all.push_back(s);
    }
  std::sort(all.begin(), all.end(), [](const IntegralSolution& x, const IntegralSolution& y) {
    if (std::abs(x.gamma - y.gamma) > 1e-12) return x.gamma < y.gamma;
    return x.delta < y.delta;
  });
  return all;
}

}  // namespace ttstar
