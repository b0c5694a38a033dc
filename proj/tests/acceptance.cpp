// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ttstar/case_model.hpp"
#include "ttstar/enumerator.hpp"
#include "ttstar/newton_oracle.hpp"
#include "ttstar/ode_monodromy.hpp"
#include "ttstar/radial_solver.hpp"
#include "ttstar/stokes.hpp"

using namespace ttstar;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// Column entries as (p/q) pairs.
using Pair = std::pair<Rational, Rational>;

Pair rp(long gp, long gq, long dp, long dq) { return {make_rational(gp, gq), make_rational(dp, dq)}; }

std::set<Pair> table2(CaseGroup g) {
  switch (g) {
    case CaseGroup::g4:
      return {rp(3, 1, 1, 1),   rp(5, 3, 1, 1),   rp(1, 1, 1, 1),   rp(1, 3, 1, 1),   rp(-1, 1, 1, 1),
              rp(-1, 1, -1, 3), rp(-1, 1, -1, 1), rp(-1, 1, -5, 3), rp(-1, 1, -3, 1), rp(1, 3, -5, 3),
              rp(1, 1, -1, 1),  rp(5, 3, -1, 3),  rp(1, 3, -1, 3),  rp(0, 1, 0, 1),   rp(-1, 3, 1, 3),
              rp(1, 1, -1, 3),  rp(3, 5, 1, 5),   rp(-1, 5, -3, 5), rp(1, 3, -1, 1)};
    case CaseGroup::g5ab:
      return {rp(4, 1, 2, 1),   rp(7, 3, 2, 1),   rp(3, 2, 2, 1),   rp(2, 3, 2, 1),   rp(-1, 1, 2, 1),
              rp(-1, 1, 1, 3),  rp(-1, 1, -1, 2), rp(-1, 1, -4, 3), rp(-1, 1, -3, 1), rp(2, 3, -4, 3),
              rp(3, 2, -1, 2),  rp(7, 3, 1, 3),   rp(2, 3, 1, 3),   rp(1, 4, 3, 4),   rp(-1, 6, 7, 6),
              rp(3, 2, 1, 3),   rp(1, 1, 1, 1),   rp(0, 1, 0, 1),   rp(2, 3, -1, 2)};
    case CaseGroup::g5cde:
      return {rp(3, 1, 1, 1),   rp(4, 3, 1, 1),   rp(1, 2, 1, 1),   rp(-1, 3, 1, 1),  rp(-2, 1, 1, 1),
              rp(-2, 1, -2, 3), rp(-2, 1, -3, 2), rp(-2, 1, -7, 3), rp(-2, 1, -4, 1), rp(-1, 3, -7, 3),
              rp(1, 2, -3, 2),  rp(4, 3, -2, 3),  rp(-1, 3, -2, 3), rp(-3, 4, -1, 4), rp(-7, 6, 1, 6),
              rp(1, 2, -2, 3),  rp(0, 1, 0, 1),   rp(-1, 1, -1, 1), rp(-1, 3, -3, 2)};
    case CaseGroup::g6:
      return {rp(4, 1, 2, 1),   rp(2, 1, 2, 1),   rp(1, 1, 2, 1),   rp(0, 1, 2, 1),   rp(-2, 1, 2, 1),
              rp(-2, 1, 0, 1),  rp(-2, 1, -1, 1), rp(-2, 1, -2, 1), rp(-2, 1, -4, 1), rp(0, 1, -2, 1),
              rp(1, 1, -1, 1),  rp(2, 1, 0, 1),   rp(0, 1, 0, 1),   rp(-1, 2, 1, 2),  rp(-1, 1, 1, 1),
              rp(1, 1, 0, 1),   rp(2, 5, 4, 5),   rp(-4, 5, -2, 5), rp(0, 1, -1, 1)};
  }
  return {};
}

Outcome criterion1() {
  Outcome o;
  const auto t0 = Clock::now();
  int total = 0;
  for (CaseGroup g : all_groups) {
    std::set<Pair> got;
    for (const auto& s : enumerate_integral(g)) {
      if (!s.rational()) {
        o.pass = false;
        o.detail += " group " + std::string(group_name(g)) + " has an irrational entry;";
        continue;
      }
      got.insert({*s.gamma_q, *s.delta_q});
    }
    const auto want = table2(g);
    total += int(got.size());
    if (got != want || want.size() != 19) {
      o.pass = false;
      o.detail += " group " + std::string(group_name(g)) + " differs from the table;";
    }
  }
  const double dt = seconds_since(t0);
  if (dt >= 1.0) o.pass = false;
  o.detail = std::to_string(total) + " entries, " + fmt("%.3f s", dt) + o.detail;
  return o;
}

Outcome criterion2() {
  Outcome o;
  int checks = 0;
  auto check = [&](CaseGroup g, double gm, double dl, double s1, double s2, bool either_sign) {
    const GroupForward f = group_forward(g, gm, dl);
    const bool s1_ok = std::abs(f.s1R - s1) <= 1e-9 || (either_sign && std::abs(f.s1R + s1) <= 1e-9);
    bool round_trip = false;
    for (auto [g2, d2] : invert_stokes(g, f.s1R, f.s2R))
      round_trip = round_trip || (std::abs(g2 - gm) <= 1e-9 && std::abs(d2 - dl) <= 1e-9);
    ++checks;
    if (!s1_ok || std::abs(f.s2R - s2) > 1e-9 || !round_trip) {
      o.pass = false;
      o.detail += " group " + std::string(group_name(g)) + " at (" + fmt("%g", gm) + "," + fmt("%g", dl) + ");";
    }
  };
  for (CaseLabel c : all_cases) {
    const CaseSpec spec = make_case(c);
    const StokesData d = stokes_from_asymptotics(spec, 0, 0);
    ++checks;
    if (std::abs(d.s1R) > 1e-9 || std::abs(d.s2R) > 1e-9) {
      o.pass = false;
      o.detail += " case " + std::string(spec.name) + " at the origin;";
    }
    check(spec.group, 0, 0, 0, 0, false);
  }
  check(CaseGroup::g4, 3, 1, 4, -6, true);
  check(CaseGroup::g5ab, 4, 2, 5, -10, false);
  check(CaseGroup::g6, 4, 2, 4, -5, true);
  o.detail = std::to_string(checks) + " checks" + o.detail;
  return o;
}

Outcome criterion3() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0;
  for (CaseLabel c : all_cases) {
    const PairProfile p = solve(make_case(c), 0, 0);
    for (int j = 0; j < p.grid.m; ++j) worst = std::max({worst, std::abs(p.u[j]), std::abs(p.v[j])});
  }
  const double dt = seconds_since(t0);
  o.pass = worst <= 1e-10 && dt < 5.0;
  o.detail = "sup norm " + fmt("%.3g", worst) + ", " + fmt("%.2f s", dt);
  return o;
}

struct Point {
  CaseGroup group;
  double gamma, delta;
};

// Six interior points per group: gamma delta > 0, < 0 and both orderings.
std::vector<Point> criterion4_points() {
  return {
      {CaseGroup::g4, 0.5, 0.3},     {CaseGroup::g4, 1.0, 0.5},     {CaseGroup::g4, -0.5, -0.8},
      {CaseGroup::g4, 0.5, -0.5},    {CaseGroup::g4, -0.5, 0.5},    {CaseGroup::g4, 1.2, -0.3},
      {CaseGroup::g5ab, 1.0, 1.0},   {CaseGroup::g5ab, 2.0, 1.5},   {CaseGroup::g5ab, -0.5, -1.0},
      {CaseGroup::g5ab, 0.8, -0.6},  {CaseGroup::g5ab, -0.5, 1.0},  {CaseGroup::g5ab, 0.5, -1.0},
      {CaseGroup::g5cde, 1.0, 0.5},  {CaseGroup::g5cde, 2.0, 0.5},  {CaseGroup::g5cde, -1.0, -1.5},
      {CaseGroup::g5cde, 0.5, -0.8}, {CaseGroup::g5cde, -1.0, 0.5}, {CaseGroup::g5cde, 1.0, -0.5},
      {CaseGroup::g6, 1.0, 1.0},     {CaseGroup::g6, 2.0, 1.0},     {CaseGroup::g6, -1.0, -2.0},
      {CaseGroup::g6, 1.0, -0.5},    {CaseGroup::g6, -1.0, 1.0},    {CaseGroup::g6, 1.5, -0.3},
  };
}

struct SolveRecord {
  Point pt;
  PairProfile profile;
  bool converged = false;
  std::string failure;
};

std::vector<SolveRecord> run_criterion4_solves(double& seconds) {
  const auto t0 = Clock::now();
  std::vector<SolveRecord> out;
  for (const Point& pt : criterion4_points()) {
    SolveRecord r{pt, {}, false, {}};
    try {
      r.profile = solve(group_representative(pt.group), pt.gamma, pt.delta);
      r.converged = true;
    } catch (const Error& e) {
      r.failure = e.code();
    }
    out.push_back(std::move(r));
  }
  seconds = seconds_since(t0);
  return out;
}

Outcome criterion4(const std::vector<SolveRecord>& runs, double seconds) {
  Outcome o;
  double worst_slope = 0, worst_outer = 0;
  for (const auto& r : runs) {
    if (!r.converged) {
      o.pass = false;
      o.detail += " no convergence at (" + fmt("%g", r.pt.gamma) + "," + fmt("%g", r.pt.delta) + ");";
      continue;
    }
    const auto [sg, sd] = fit_log_slope(r.profile);
    const double err = std::max(std::abs(sg - r.pt.gamma), std::abs(sd - r.pt.delta));
    worst_slope = std::max(worst_slope, err);
    worst_outer = std::max(worst_outer, outer_sup(r.profile));
  }
  if (worst_slope > 0.05 || worst_outer > 1e-4 || seconds >= 120) o.pass = false;
  o.detail = std::to_string(runs.size()) + " points, slope error " + fmt("%.3g", worst_slope) + ", outer " +
             fmt("%.3g", worst_outer) + ", " + fmt("%.1f s", seconds) + o.detail;
  return o;
}

Outcome criterion5(const std::vector<SolveRecord>& runs) {
  Outcome o;
  double worst_rel = 0;
  int n = 0;
  for (const auto& r : runs) {
    if (!r.converged) continue;
    const double defect = integral_identity(r.profile);
    const double total = std::abs(r.pt.gamma + r.pt.delta);
    worst_rel = std::max(worst_rel, total > 1e-12 ? std::abs(defect) / (2 * std::numbers::pi * total)
                                                  : std::abs(defect) / 0.05 * 0.01);
    ++n;
    if (!identity_within_tolerance(r.profile, defect)) o.pass = false;
  }
  o.pass = o.pass && n == int(runs.size());
  o.detail = std::to_string(n) + " solves, worst relative defect " + fmt("%.3g", worst_rel);
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto t0 = Clock::now();
  const std::vector<std::pair<double, double>> pts = {{0.5, 0.3}, {1.0, 0.5}, {0.3, 0.8},   {-0.5, -0.8},
                                                      {-0.2, -0.4}, {0.5, -0.5}, {-0.5, 0.5}, {1.2, -0.3},
                                                      {0.2, -0.9},  {-0.8, 0.1}, {1.0, 1.0}};
  double worst = 0;
  for (auto [g, d] : pts) {
    const PairProfile mono = solve(2, 2, g, d);
    const PairProfile newt = newton_oracle(2, 2, g, d);
    for (int j = 0; j < mono.grid.m; ++j)
      worst = std::max({worst, std::abs(mono.u[j] - newt.u[j]), std::abs(mono.v[j] - newt.v[j])});
  }
  const double dt = seconds_since(t0);
  o.pass = worst <= 1e-6 && dt < 120;
  o.detail = std::to_string(pts.size()) + " points, sup difference " + fmt("%.3g", worst) + ", " + fmt("%.1f s", dt);
  return o;
}

Outcome criterion7(const std::vector<SolveRecord>& runs) {
  Outcome o;
  long sweeps = 0, mono = 0, bracket = 0;
  bool clamp = false;
  for (const auto& r : runs) {
    if (!r.converged) {
      o.pass = false;
      continue;
    }
    const IterationStats& s = r.profile.stats;
    sweeps += s.sweeps;
    mono += s.monotone_violations;
    bracket += s.bracket_violations;
    clamp = clamp || s.clamp_active_at_end;
  }
  o.pass = o.pass && mono == 0 && bracket == 0 && !clamp;
  o.detail = std::to_string(sweeps) + " sweeps, " + std::to_string(mono) + " monotonicity and " +
             std::to_string(bracket) + " bracket violations";
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240607);
  double worst_mod = 0, worst_match = 0;
  int asym_fail = 0;
  for (CaseLabel c : all_cases) {
    const CaseSpec spec = make_case(c);
    std::uniform_real_distribution<double> ug(-2.0 / spec.a, 2.0 / spec.b + 2.0), ud(-2.0 / spec.a - 2.0, 2.0 / spec.b);
    for (int k = 0; k < 200;) {
      const double g = ug(rng), d = ud(rng);
      if (!region_contains(spec, g, d)) continue;
      ++k;
      const StokesData sd = stokes_from_asymptotics(spec, g, d);
      const CharPoly cp = char_poly(spec, sd.s1, sd.s2);
      const auto roots = poly_roots(cp);
      for (cplx r : roots) worst_mod = std::max(worst_mod, std::abs(std::abs(r) - 1.0));
      if (!root_symmetry_check(spec, cp, 1e-8)) ++asym_fail;
      worst_match = std::max(worst_match, multiset_distance(roots, monodromy_eigenvalues(spec, g, d, +1)));
    }
  }
  const double dt = seconds_since(t0);
  o.pass = worst_mod <= 1e-8 && asym_fail == 0 && worst_match <= 1e-8 && dt < 10;
  o.detail = "2000 points, modulus " + fmt("%.3g", worst_mod) + ", multiset " + fmt("%.3g", worst_match) + ", " +
             std::to_string(asym_fail) + " symmetry failures, " + fmt("%.2f s", dt);
  return o;
}

Outcome criterion9() {
  Outcome o;
  const auto t0 = Clock::now();
  struct Target {
    CaseLabel c;
    double g, d;
  };
  double worst = 0;
  for (Target t : {Target{CaseLabel::c4a, 1, 1}, Target{CaseLabel::c4a, 0, 0}, Target{CaseLabel::c5d, 0, 0}}) {
    const CaseSpec spec = make_case(t.c);
    const PairProfile p = solve(spec, t.g, t.d);
    const MonodromyReport r = compare(estimate_stokes(spec, p), stokes_from_asymptotics(spec, t.g, t.d));
    worst = std::max({worst, r.s1_err, r.s2_err});
    o.detail += " " + std::string(spec.name) + "(" + fmt("%g", t.g) + "," + fmt("%g", t.d) + ") sign " +
                std::to_string(r.resolved_sign) + ";";
  }
  const double dt = seconds_since(t0);
  o.pass = worst <= 1e-3 && dt < 300;
  o.detail = "worst error " + fmt("%.3g", worst) + ", " + fmt("%.1f s", dt) + "," + o.detail;
  return o;
}

Outcome criterion10() {
  Outcome o;
  const auto t0 = Clock::now();
  const CaseSpec spec = make_case(CaseLabel::c4a);
  struct Sample {
    double g, d, s1, s2;
  };
  std::vector<Sample> pts;
  for (int i = 0; i < 60; ++i)
    for (int j = 0; j < 60; ++j) {
      const double g = -1.0 + 4.0 * i / 59, d = -3.0 + 4.0 * j / 59;
      if (!region_contains(spec.a, spec.b, g, d, 1e-12)) continue;
      const GroupForward f = group_forward(CaseGroup::g4, g, d);
      pts.push_back({g, d, std::abs(f.s1R), f.s2R});
    }
  long collisions = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dist = std::hypot(pts[i].s1 - pts[j].s1, pts[i].s2 - pts[j].s2);
      if (dist >= 1e-9) continue;
      const bool partners = std::abs(pts[i].g + pts[j].d) < 1e-9 && std::abs(pts[i].d + pts[j].g) < 1e-9;
      if (!partners) ++collisions;
    }
  const double dt = seconds_since(t0);
  o.pass = collisions == 0 && dt < 5;
  o.detail = std::to_string(pts.size()) + " grid points, " + std::to_string(collisions) + " collisions, " +
             fmt("%.2f s", dt);
  return o;
}

}  // namespace

int main() {
  bool all = true;
  auto report = [&](int id, const Outcome& o) {
    std::printf("criterion %2d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  };
  auto guarded = [](const std::function<Outcome()>& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  report(1, guarded(criterion1));
  report(2, guarded(criterion2));
  report(3, guarded(criterion3));
  double seconds = 0;
  const auto runs = run_criterion4_solves(seconds);
  report(4, guarded([&] { return criterion4(runs, seconds); }));
  report(5, guarded([&] { return criterion5(runs); }));
  report(6, guarded(criterion6));
  report(7, guarded([&] { return criterion7(runs); }));
  report(8, guarded(criterion8));
  report(9, guarded(criterion9));
  report(10, guarded(criterion10));
  std::printf("acceptance: %s\n", all ? "PASS" : "FAIL");
  return all ? 0 : 1;
}
