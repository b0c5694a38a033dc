#include <gtest/gtest.h>

#include <random>

#include "ttstar/stokes.hpp"

using namespace ttstar;

namespace {

std::pair<double, double> random_region_point(const CaseSpec& s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ug(-2.0 / s.a, 2.0 / s.b + 2.0), ud(-2.0 / s.a - 2.0, 2.0 / s.b);
  for (;;) {
    const double g = ug(rng), d = ud(rng);
    if (region_contains(s, g, d)) return {g, d};
  }
}

std::vector<cplx> expand(const std::vector<cplx>& roots) {
  std::vector<cplx> c{1.0};
  for (cplx r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i] += c[i];
      next[i + 1] -= r * c[i];
    }
    c = next;
  }
  return c;
}

}  // namespace

TEST(Stokes, OriginIsTrivialForEveryCase) {
  for (CaseLabel c : all_cases) {
    const StokesData d = stokes_from_asymptotics(make_case(c), 0, 0);
    EXPECT_NEAR(d.s1R, 0, 1e-12) << case_name(c);
    EXPECT_NEAR(d.s2R, 0, 1e-12) << case_name(c);
  }
}

TEST(Stokes, SpotValues) {
  const StokesData d4 = stokes_from_asymptotics(make_case(CaseLabel::c4a), 3, 1);
  EXPECT_NEAR(std::abs(d4.s1R), 4, 1e-12);
  EXPECT_NEAR(d4.s2R, -6, 1e-12);
  EXPECT_TRUE(d4.sign_ambiguous);
  const StokesData d5 = stokes_from_asymptotics(make_case(CaseLabel::c5a), 4, 2);
  EXPECT_NEAR(d5.s1R, 5, 1e-12);
  EXPECT_NEAR(d5.s2R, -10, 1e-12);
  EXPECT_FALSE(d5.sign_ambiguous);
  const StokesData d6 = stokes_from_asymptotics(make_case(CaseLabel::c6a), 4, 2);
  EXPECT_NEAR(std::abs(d6.s1R), 4, 1e-12);
  EXPECT_NEAR(d6.s2R, -5, 1e-12);
}

// At (4,2) in case 5a all five eigenvalues coincide: the polynomial is a
// perfect fifth power.
TEST(Stokes, FifthPowerAtTopCorner) {
  const CaseSpec s = make_case(CaseLabel::c5a);
  const StokesData d = stokes_from_asymptotics(s, 4, 2);
  const CharPoly cp = char_poly(s, d.s1, d.s2);
  const std::vector<cplx> want = expand(std::vector<cplx>(5, s.omega_pow(2)));
  for (int i = 0; i <= 5; ++i) EXPECT_LT(std::abs(cp.coeffs[i] - want[i]), 1e-12) << i;
  EXPECT_TRUE(root_symmetry_check(s, cp));
}

TEST(Stokes, PhaseLiftIsUnimodular) {
  for (CaseLabel c : all_cases) {
    const auto [s1, s2] = complex_lift(c, 1.5, -2.0);
    EXPECT_NEAR(std::abs(s1), 1.5, 1e-14);
    EXPECT_NEAR(std::abs(s2), 2.0, 1e-14);
  }
}

// Independent of the closed-form polynomial: Faddeev-LeVerrier on Q_1 Q_2 Pi.
TEST(Stokes, PolynomialMatchesStokesFactorProduct) {
  std::mt19937_64 rng(23);
  for (CaseLabel c : all_cases) {
    const CaseSpec s = make_case(c);
    const StructureMatrices m = structure_matrices(s);
    for (int k = 0; k < 20; ++k) {
      const auto [g, d] = random_region_point(s, rng);
      const StokesData sd = stokes_from_asymptotics(s, g, d);
      const QPair q = q_matrices(s, sd.s1, sd.s2);
      const CharPoly direct = matrix_char_poly(q.first * q.second * m.Pi);
      const CharPoly formula = char_poly(s, sd.s1, sd.s2);
      for (int i = 0; i <= s.size(); ++i)
        EXPECT_LT(std::abs(direct.coeffs[i] - formula.coeffs[i]), 1e-10) << case_name(c) << " coeff " << i;
    }
  }
}

TEST(Stokes, FactorsAreUnipotent) {
  for (CaseLabel c : all_cases) {
    const CaseSpec s = make_case(c);
    const QPair q = q_matrices(s, cplx(0.3, -1.1), cplx(-0.7, 0.4));
    EXPECT_LT(std::abs(q.first.determinant() - 1.0), 1e-14);
    EXPECT_LT(std::abs(q.second.determinant() - 1.0), 1e-14);
    EXPECT_LT((q.first - CMatrix::Identity(s.size(), s.size())).diagonal().norm(), 1e-15);
  }
}

// Unit modulus, closure of the roots under the involution and agreement
// with the closed-form eigenvalues.
TEST(Stokes, CharPolyEigenvalueConsistency) {
  std::mt19937_64 rng(99);
  for (CaseLabel c : all_cases) {
    const CaseSpec s = make_case(c);
    const int kappa = root_kappa(c);
    for (int k = 0; k < 200; ++k) {
      const auto [g, d] = random_region_point(s, rng);
      const StokesData sd = stokes_from_asymptotics(s, g, d);
      const CharPoly cp = char_poly(s, sd.s1, sd.s2);
      ASSERT_TRUE(root_symmetry_check(s, cp)) << case_name(c);
      const auto ev = monodromy_eigenvalues(s, g, d, +1);
      std::vector<cplx> mapped;
      for (cplx r : ev) mapped.push_back(1.0 / (s.omega_pow(kappa) * r));
      ASSERT_LE(multiset_distance(ev, mapped), 1e-12) << case_name(c);
      // numerical roots lose half the digits near coalescing eigenvalues
      const auto roots = poly_roots(cp);
      for (cplx r : roots) ASSERT_NEAR(std::abs(r), 1.0, 1e-6) << case_name(c);
      ASSERT_LE(multiset_distance(roots, ev), 1e-6) << case_name(c);
    }
  }
}

// The other sign reading of an even case belongs to the other offset choice.
TEST(Stokes, MinusReadingMatchesSecondOffsets) {
  std::mt19937_64 rng(7);
  for (CaseLabel c : {CaseLabel::c4a, CaseLabel::c4b, CaseLabel::c6a, CaseLabel::c6b, CaseLabel::c6c}) {
    const CaseSpec s = make_case(c);
    for (int k = 0; k < 50; ++k) {
      const auto [g, d] = random_region_point(s, rng);
      const StokesData sd = stokes_from_asymptotics(s, g, d);
      const auto [s1, s2] = complex_lift(c, -sd.s1R, sd.s2R);
      const auto roots = poly_roots(char_poly(s, s1, s2));
      ASSERT_LE(multiset_distance(roots, monodromy_eigenvalues(s, g, d, -1)), 1e-8) << case_name(c);
    }
  }
}

TEST(Stokes, SymmetryCheckRejectsGenericPolynomial) {
  const CaseSpec s = make_case(CaseLabel::c4a);
  EXPECT_FALSE(root_symmetry_check(s, CharPoly{{1.0, 0.3, -0.2, 0.7, 2.0}}));
}

TEST(Stokes, MultisetDistanceRespectsMultiplicity) {
  EXPECT_NEAR(multiset_distance({1.0, 1.0, 2.0}, {1.0, 2.0, 2.0}), 1.0, 1e-15);
  EXPECT_TRUE(std::isinf(multiset_distance({1.0}, {1.0, 2.0})));
}

TEST(Stokes, RegionViolation) {
  EXPECT_THROW(stokes_from_asymptotics(make_case(CaseLabel::c6a), 5, 2), Error);
}
