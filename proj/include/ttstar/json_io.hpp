#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ttstar/case_model.hpp"
#include "ttstar/enumerator.hpp"
#include "ttstar/error.hpp"
#include "ttstar/ode_monodromy.hpp"
#include "ttstar/radial_solver.hpp"
#include "ttstar/stokes.hpp"

namespace ttstar {

using Json = nlohmann::ordered_json;

// Display formatting: 12 significant digits, no negative zero.
inline std::string fmt12(double x) {
  if (x == 0.0) x = 0.0;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

// Value whose shortest representation has at most 12 significant digits.
inline double round12(double x) { return std::strtod(fmt12(x).c_str(), nullptr); }

inline Json complex_json(cplx z) { return Json::array({round12(z.real()), round12(z.imag())}); }

inline Json case_json(const CaseSpec& s) {
  return {{"label", std::string(s.name)}, {"n", s.n}, {"l", s.l}, {"a", s.a}, {"b", s.b}};
}

inline const char* inner_bc_name(InnerBc bc) { return bc == InnerBc::neumann ? "neumann" : "edge_aware"; }

// Profile documents keep full precision so a reload reproduces every
// derived quantity bit for bit.
inline Json profile_json(const PairProfile& p) {
  Json j;
  if (p.case_label) j["case"] = std::string(case_name(*p.case_label));
  j["a"] = p.a;
  j["b"] = p.b;
  j["gamma"] = p.gamma;
  j["delta"] = p.delta;
  j["inner_bc"] = inner_bc_name(p.inner_bc);
  j["scheme"] = p.scheme;
  j["grid"] = {{"t_min", p.grid.t_min}, {"t_max", p.grid.t_max}, {"m", p.grid.m}};
  j["u"] = p.u;
  j["v"] = p.v;
  j["residual"] = p.residual;
  const auto [sg, sd] = fit_log_slope(p);
  j["slopes"] = {sg, sd};
  return j;
}

inline PairProfile profile_from_json(const Json& j) {
  try {
    PairProfile p;
    if (j.contains("case")) {
      const auto lab = parse_case(j.at("case").get<std::string>());
      if (!lab) throw bad_argument("bad_profile", "unknown case label in profile");
      p.case_label = *lab;
    }
    p.a = j.at("a").get<double>();
    p.b = j.at("b").get<double>();
    p.gamma = j.at("gamma").get<double>();
    p.delta = j.at("delta").get<double>();
    p.inner_bc = j.value("inner_bc", std::string("edge_aware")) == "neumann" ? InnerBc::neumann : InnerBc::edge_aware;
    p.scheme = j.value("scheme", std::string());
    const Json& g = j.at("grid");
    p.grid = {g.at("t_min").get<double>(), g.at("t_max").get<double>(), g.at("m").get<int>()};
    p.grid.validate();
    p.u = j.at("u").get<std::vector<double>>();
    p.v = j.at("v").get<std::vector<double>>();
    p.residual = j.value("residual", 0.0);
    if (int(p.u.size()) != p.grid.m || int(p.v.size()) != p.grid.m)
      throw bad_argument("bad_profile", "profile arrays do not match the grid size");
    return p;
  } catch (const Json::exception& e) {
    throw bad_argument("bad_profile", std::string("malformed profile: ") + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bad_argument("io_error", "cannot write " + path);
  out << text;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bad_argument("io_error", "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void save_profile(const PairProfile& p, const std::string& path) { write_text(path, profile_json(p).dump() + "\n"); }

inline PairProfile load_profile(const std::string& path) {
  Json j;
  try {
    j = Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw bad_argument("bad_profile", std::string("profile is not valid JSON: ") + e.what());
  }
  return profile_from_json(j);
}

// Columns t, r = e^t, u, v.
inline std::string profile_csv(const PairProfile& p) {
  std::string out = "t,r,u,v\n";
  for (int j = 0; j < p.grid.m; ++j) {
    const double t = p.grid.t(j);
    out += fmt12(t) + "," + fmt12(std::exp(t)) + "," + fmt12(p.u[j]) + "," + fmt12(p.v[j]) + "\n";
  }
  return out;
}

// Ordered by argument in [0, 2 pi) so the output is stable.
inline std::vector<cplx> sorted_by_arg(std::vector<cplx> r) {
  auto key = [](cplx z) {
    double a = std::atan2(z.imag(), z.real());
    if (a < -1e-9) a += 2 * std::numbers::pi;
    return std::max(a, 0.0);
  };
  std::sort(r.begin(), r.end(), [&](cplx x, cplx y) { return key(x) < key(y); });
  return r;
}

inline Json stokes_json(const CaseSpec& spec, const StokesData& d) {
  const CharPoly cp = char_poly(spec, d.s1, d.s2);
  Json poly = Json::array(), eig = Json::array();
  for (cplx c : cp.coeffs) poly.push_back(complex_json(c));
  // closed-form eigenvalues: companion roots lose accuracy at repeated roots
  for (cplx z : sorted_by_arg(monodromy_eigenvalues(spec, d.gamma, d.delta, +1))) eig.push_back(complex_json(z));
  return {{"case", std::string(spec.name)}, {"gamma", round12(d.gamma)},
          {"delta", round12(d.delta)},       {"s1R", round12(d.s1R)},
          {"s2R", round12(d.s2R)},           {"sign_ambiguous", d.sign_ambiguous},
          {"s1", complex_json(d.s1)},        {"s2", complex_json(d.s2)},
          {"char_poly", poly},               {"eigenvalues", eig}};
}

inline Json solution_json(const IntegralSolution& s) {
  Json j{{"group", std::string(group_name(s.group))},
         {"gamma", s.gamma_q ? Json(s.gamma_q->str()) : Json(round12(s.gamma))},
         {"delta", s.delta_q ? Json(s.delta_q->str()) : Json(round12(s.delta))},
         {"s1R", s.s1R},
         {"s2R", s.s2R}};
  if (!s.label.empty()) j["label"] = s.label;
  return j;
}

inline Json solutions_json(const std::vector<IntegralSolution>& sols) {
  Json arr = Json::array();
  for (const auto& s : sols) arr.push_back(solution_json(s));
  return arr;
}

// Aligned plain-text table of the enumeration.
inline std::string solutions_table(const std::vector<IntegralSolution>& sols, bool labels) {
  std::vector<std::vector<std::string>> rows{{"gamma", "delta", "s1R", "s2R"}};
  if (labels) rows[0].push_back("label");
  for (const auto& s : sols) {
    rows.push_back({s.gamma_q ? s.gamma_q->str() : fmt12(s.gamma), s.delta_q ? s.delta_q->str() : fmt12(s.delta),
                    std::to_string(s.s1R), std::to_string(s.s2R)});
    if (labels) rows.back().push_back(s.label);
  }
  std::vector<std::size_t> w(rows[0].size(), 0);
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size(); ++c) w[c] = std::max(w[c], r[c].size());
  std::string out;
  for (const auto& r : rows) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      out += r[c];
      if (c + 1 < r.size()) out += std::string(w[c] - r[c].size() + 2, ' ');
    }
    out += "\n";
  }
  return out;
}

inline Json report_json(const MonodromyReport& r) {
  return {{"case", std::string(case_name(r.label))},
          {"gamma", round12(r.gamma)},
          {"delta", round12(r.delta)},
          {"x", round12(r.x)},
          {"R", round12(r.R)},
          {"s1_est", complex_json(r.s1_est)},
          {"s2_est", complex_json(r.s2_est)},
          {"s1_err", round12(r.s1_err)},
          {"s2_err", round12(r.s2_err)},
          {"resolved_sign", r.resolved_sign},
          {"accuracy_warning", r.accuracy_warning}};
}

}  // namespace ttstar
