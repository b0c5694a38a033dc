#pragma once

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ttstar/case_model.hpp"
#include "ttstar/enumerator.hpp"
#include "ttstar/error.hpp"
#include "ttstar/json_io.hpp"
#include "ttstar/ode_monodromy.hpp"
#include "ttstar/radial_solver.hpp"
#include "ttstar/stokes.hpp"

namespace ttstar::cli {

enum ExitCode { ok = 0, bad_args = 2, no_convergence = 3, verification_exceeded = 4 };

inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::bad_argument: return bad_args;
    case ErrorKind::non_convergence: return no_convergence;
    case ErrorKind::verification: return verification_exceeded;
  }
  return bad_args;
}

inline void print_error(std::ostream& err, const std::string& code, const std::string& message, int exit) {
  err << Json{{"error", code}, {"message", message}, {"exit", exit}}.dump() << "\n";
}

// Flat key/value document as aligned text; nested values stay JSON.
inline std::string text_of(const Json& j) {
  std::size_t w = 0;
  for (const auto& [k, v] : j.items()) w = std::max(w, k.size());
  std::string out;
  for (const auto& [k, v] : j.items()) {
    std::string val;
    if (v.is_string()) val = v.get<std::string>();
    else if (v.is_number_float()) val = fmt12(v.get<double>());
    else val = v.dump();
    out += k + std::string(w - k.size() + 2, ' ') + val + "\n";
  }
  return out;
}

inline void emit(std::ostream& out, const Json& j, const std::string& format) {
  if (format == "text") out << text_of(j);
  else out << j.dump() << "\n";
}

inline CaseSpec case_arg(const std::string& text) {
  const auto lab = parse_case(text);
  if (!lab) throw bad_argument("unknown_case", "unknown case '" + text + "'; expected one of 4a 4b 5a..5e 6a 6b 6c");
  return make_case(*lab);
}

inline RadialGrid grid_arg(const std::string& text) {
  RadialGrid g;
  if (text.empty()) return g;
  std::istringstream in(text);
  char c1 = 0, c2 = 0;
  if (!(in >> g.t_min >> c1 >> g.t_max >> c2 >> g.m) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof())
    throw bad_argument("bad_grid", "--grid expects tmin,tmax,m");
  g.validate();
  return g;
}

inline InnerBc inner_bc_arg(const std::string& text) {
  if (text == "edge_aware") return InnerBc::edge_aware;
  if (text == "neumann") return InnerBc::neumann;
  throw bad_argument("bad_inner_bc", "--inner-bc expects edge_aware or neumann");
}

inline Json identity_json(const PairProfile& p) {
  const double defect = integral_identity(p);
  const double total = p.gamma + p.delta;
  const double tol = std::abs(total) < 1e-12 ? 0.05 : 0.02 * std::numbers::pi * std::abs(total);
  return {{"gamma", round12(p.gamma)},
          {"delta", round12(p.delta)},
          {"defect", round12(defect)},
          {"tolerance", round12(tol)},
          {"within", identity_within_tolerance(p, defect)}};
}

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Radial tt*-Toda solutions, Stokes data and integrality checks", "ttstar"};
  app.require_subcommand(1);
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));

  std::string case_s, grid_s, out_s, profile_s, group_s, inner_s = "edge_aware";
  double gamma = 0, delta = 0, x = 0.1, R = 800, tol = 1e-10, threshold = 1e-3;
  bool labels = false;

  auto* solve_cmd = app.add_subcommand("solve", "Solve the radial boundary value problem");
  solve_cmd->add_option("--case", case_s)->required();
  solve_cmd->add_option("--gamma", gamma)->required();
  solve_cmd->add_option("--delta", delta)->required();
  solve_cmd->add_option("--grid", grid_s, "tmin,tmax,m");
  solve_cmd->add_option("--out", out_s, "Profile JSON path");
  solve_cmd->add_option("--inner-bc", inner_s, "edge_aware or neumann");

  auto* stokes_cmd = app.add_subcommand("stokes", "Closed-form Stokes data");
  stokes_cmd->add_option("--case", case_s)->required();
  stokes_cmd->add_option("--gamma", gamma)->required();
  stokes_cmd->add_option("--delta", delta)->required();

  auto* enum_cmd = app.add_subcommand("enumerate", "Region points with integral Stokes data");
  enum_cmd->add_option("--group", group_s, "4, 5ab, 5cde or 6")->required();
  enum_cmd->add_flag("--labels", labels, "Attach geometric labels");

  auto* verify_cmd = app.add_subcommand("verify-monodromy", "Numerical Stokes data from a profile");
  verify_cmd->add_option("--profile", profile_s)->required();
  verify_cmd->add_option("--x", x);
  verify_cmd->add_option("--R", R);
  verify_cmd->add_option("--tol", tol, "Integration tolerance");
  verify_cmd->add_option("--threshold", threshold, "Largest accepted error");

  auto* ident_cmd = app.add_subcommand("identity-check", "Conservation defect of a profile");
  ident_cmd->add_option("--profile", profile_s)->required();

  auto* plot_cmd = app.add_subcommand("export-plot", "CSV of t, r, u, v");
  plot_cmd->add_option("--profile", profile_s)->required();
  plot_cmd->add_option("--out", out_s, "CSV path, '-' for standard output")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    print_error(err, "bad_arguments", e.what(), bad_args);
    return bad_args;
  }

  try {
    if (solve_cmd->parsed()) {
      const CaseSpec spec = case_arg(case_s);
      SolverConfig cfg;
      cfg.inner_bc = inner_bc_arg(inner_s);
      const RadialGrid grid = grid_arg(grid_s);
      const PairProfile p = solve(spec, gamma, delta, grid, cfg);
      if (!out_s.empty()) save_profile(p, out_s);
      const auto [sg, sd] = fit_log_slope(p);
      Json j{{"case", std::string(spec.name)},
             {"gamma", round12(gamma)},
             {"delta", round12(delta)},
             {"scheme", p.scheme},
             {"residual", round12(p.residual)},
             {"slopes", {round12(sg), round12(sd)}},
             {"outer_sup", round12(outer_sup(p))},
             {"defect", round12(integral_identity(p))},
             {"sweeps", p.stats.sweeps}};
      if (!out_s.empty()) j["out"] = out_s;
      emit(out, j, format);
    } else if (stokes_cmd->parsed()) {
      const CaseSpec spec = case_arg(case_s);
      emit(out, stokes_json(spec, stokes_from_asymptotics(spec, gamma, delta)), format);
    } else if (enum_cmd->parsed()) {
      const auto g = parse_group(group_s);
      if (!g) throw bad_argument("unknown_group", "unknown group '" + group_s + "'; expected 4, 5ab, 5cde or 6");
      auto sols = enumerate_integral(*g);
      if (labels) sols = attach_labels(std::move(sols));
      if (format == "text") out << solutions_table(sols, labels);
      else out << solutions_json(sols).dump() << "\n";
    } else if (verify_cmd->parsed()) {
      const PairProfile p = load_profile(profile_s);
      if (!p.case_label) throw bad_argument("bad_profile", "profile carries no case label");
      const CaseSpec spec = make_case(*p.case_label);
      const MonodromyReport r =
          compare(estimate_stokes(spec, p, x, R, tol), stokes_from_asymptotics(spec, p.gamma, p.delta));
      emit(out, report_json(r), format);
      if (r.s1_err > threshold || r.s2_err > threshold)
        throw verification_failure("monodromy_mismatch", "estimated Stokes data differ from the closed form by more than " +
                                                             fmt12(threshold));
    } else if (ident_cmd->parsed()) {
      const Json j = identity_json(load_profile(profile_s));
      emit(out, j, format);
      if (!j["within"].get<bool>())
        throw verification_failure("identity_defect", "conservation defect exceeds its tolerance");
    } else if (plot_cmd->parsed()) {
      const std::string csv = profile_csv(load_profile(profile_s));
      if (out_s == "-") out << csv;
      else write_text(out_s, csv);
    }
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    print_error(err, e.code(), e.what(), code);
    return code;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what(), bad_args);
    return bad_args;
  }
  return ok;
}

}  // namespace ttstar::cli
