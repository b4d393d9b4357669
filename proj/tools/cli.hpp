#pragma once

// Command-line front end: holodyn <subcommand> [options].
// Exit codes: 0 success, 1 usage, 2 numerical non-convergence, 3 precondition violation.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <holodyn/catalog.hpp>
#include <holodyn/centralizer.hpp>
#include <holodyn/criteria.hpp>
#include <holodyn/io.hpp>
#include <holodyn/koenigs.hpp>
#include <holodyn/metric.hpp>
#include <holodyn/petals.hpp>

namespace holodyn::cli {

using io::json;

struct Globals {
  double tol = 1e-6;
  unsigned max_iter = 65536;
  std::string out_path;
  std::string format = "json";
  std::optional<unsigned> seed;
};

struct Output {
  json report;
  std::string csv;     // overrides the flattened CSV when set
  bool numerical_failure = false;
};

inline Output reported(json j) {
  Output o;
  o.report = std::move(j);
  return o;
}

inline cplx parse_point(const std::string& s) {
  auto first = s.find_first_not_of(' ');
  if (first != std::string::npos && s[first] == '[') return io::parse_complex(json::parse(s));
  return formula::eval(formula::parse(s), 0.0);
}

inline std::vector<cplx> grid_for(const Globals& g, std::size_t n) { return disc_grid(n, 0.9, g.seed); }

inline std::optional<catalog::CatalogEntry> catalog_entry_for(const std::string& spec) {
  for (const auto& n : catalog::names())
    if (n == spec) return catalog::catalog_build(n);
  return std::nullopt;
}

inline Output cmd_classify(const Globals& g, const std::string& map_arg) {
  MapDescriptor m = io::parse_map(io::load_spec(map_arg));
  ClassifyOptions opt;
  opt.max_iter = g.max_iter;
  ClassificationReport rep = classify(m, opt);
  Output o = reported(io::to_json(rep));
  json pts = json::array();
  std::optional<cplx> hint;
  if (std::abs(std::abs(rep.dw_point) - 1.0) < 1e-6) hint = rep.dw_point;
  for (const auto& r : brfp_scan(m, 256, hint)) pts.push_back(io::to_json(r));
  o.report["boundary_fixed_points"] = pts;
  return o;
}

inline Output cmd_koenigs(const Globals& g, const std::string& map_arg, unsigned depth, const std::string& w0_arg) {
  MapDescriptor m = io::parse_map(io::load_spec(map_arg));
  Output o;
  MapDescriptor f = m;
  if (m.domain() != Domain::right_half_plane) {
    ClassifyOptions copt;
    copt.max_iter = g.max_iter;
    ClassificationReport rep = classify(m, copt);
    if (rep.kind == MapKind::elliptic) {
      auto h = elliptic_koenigs(m, rep.dw_point);
      json vals = json::array();
      for (cplx z : grid_for(g, 16)) vals.push_back(json{{"z", io::to_json(z)}, {"h", io::to_json((*h)(z))}});
      o.report = json{{"model", "schroeder"}, {"dw", io::to_json(rep.dw_point)},
                      {"multiplier", io::to_json(rep.multiplier)},
                      {"residual", io::num(schroeder_residual(*h, m, rep.multiplier, grid_for(g, 64)))},
                      {"samples", vals}};
      return o;
    }
    if (rep.kind != MapKind::parabolic_positive_step)
      throw Error(Errc::wrong_class, std::string("Koenigs construction needs elliptic or positive-step parabolic, got ") +
                                         map_kind_name(rep.kind));
    f = chart_form(m, cayley(rep.dw_point / std::abs(rep.dw_point)));
  }
  PommerenkeOptions opt;
  opt.n_max = depth;
  opt.verify_class = false;
  cplx w0 = parse_point(w0_arg);
  PommerenkeModel model = pommerenke_koenigs(f, w0, opt);
  json vals = json::array();
  for (const auto& [w, h] : model.grid) vals.push_back(json{{"w", io::to_json(w)}, {"h", io::to_json(h)}});
  o.report = json{{"model", "pommerenke"}, {"b", model.b}, {"n_used", model.n_used},
                  {"abel_residual", io::num(model.residual)}, {"cauchy", io::num(model.cauchy)},
                  {"converged", model.converged}, {"w0", io::to_json(model.w0)}, {"samples", vals}};
  o.numerical_failure = !model.converged;
  return o;
}

inline Output cmd_flow(const std::string& s_arg, double t, const std::string& z_arg, bool backward) {
  SemigroupSpec s = io::parse_semigroup(io::load_spec(s_arg));
  cplx z = parse_point(z_arg);
  Output o;
  o.report = json{{"t", t}, {"z", io::to_json(z)}, {"backward", backward}};
  if (backward) {
    auto v = s.backward_flow(t, z);
    o.report["value"] = v ? io::to_json(*v) : json(nullptr);
    o.report["defined"] = v.has_value();
  } else {
    o.report["value"] = io::to_json(s.flow(t, z));
    o.report["defined"] = true;
  }
  return o;
}

inline Output cmd_commute(const Globals& g, const std::string& phi_arg, const std::string& psi_arg, std::size_t n) {
  MapDescriptor phi = io::parse_map(io::load_spec(phi_arg));
  MapDescriptor psi = io::parse_map(io::load_spec(psi_arg));
  double r = commutator_residual(phi, psi, grid_for(g, n));
  return reported(json{{"residual", io::num(r)}, {"grid", n}, {"commute", r < g.tol}});
}

inline Output cmd_affinity(const Globals& g, const std::string& phi_arg, const std::string& psi_arg, std::size_t n) {
  MapDescriptor phi = io::parse_map(io::load_spec(phi_arg));
  MapDescriptor psi = io::parse_map(io::load_spec(psi_arg));
  FLimitOptions opt;
  opt.tol = g.tol;
  opt.n_max = g.max_iter;
  AffinityReport rep = f_limit(phi, psi, grid_for(g, n), opt);
  Output o = reported(io::to_json(rep));
  if (rep.is_constant) {
    try {
      o.report["c_formula"] = io::to_json(c_formula(phi, psi, denjoy_wolff(phi), MapKind::parabolic_positive_step));
    } catch (const Error&) {
      o.report["c_formula"] = nullptr;
    }
  }
  o.csv = io::f_samples_csv(rep);
  o.numerical_failure = !rep.converged;
  return o;
}

inline Output cmd_criteria(const Globals& g, const std::string& phi_arg, const std::string& s_arg) {
  MapDescriptor phi = io::parse_map(io::load_spec(phi_arg));
  SemigroupSpec s = io::parse_semigroup(io::load_spec(s_arg));
  CriteriaOptions opt;
  opt.commute_tol = g.tol;
  return reported(io::to_json(criteria_battery(phi, s, opt)));
}

inline const std::vector<cplx>& default_seeds() {
  static const std::vector<cplx> seeds = {cplx(0.0, 0.5), cplx(0.0, -0.5), 0.0,         0.5,
                                          -0.5,           cplx(0.5, 0.5),  cplx(0.5, -0.5), cplx(-0.5, 0.5),
                                          cplx(-0.5, -0.5), cplx(0.0, 0.9), cplx(0.0, -0.9)};
  return seeds;
}

/// Level curves Im h = y through each petal, traced as z = h^{-1}(x + iy).
inline std::string petal_traces_csv(const SemigroupSpec& s, const PetalSurvey& survey, json& traces) {
  std::ostringstream os;
  os << "petal,curve,x,re,im\n";
  traces = json::array();
  for (std::size_t p = 0; p < survey.petals.size(); ++p) {
    const PetalReport& pr = survey.petals[p];
    std::vector<double> levels;
    for (cplx w : pr.witnesses) levels.push_back(s.koenigs()(w).imag());
    if (pr.strip) {
      levels.push_back(pr.strip->first + 1e-3 * (pr.strip->second - pr.strip->first));
      levels.push_back(pr.strip->second - 1e-3 * (pr.strip->second - pr.strip->first));
    }
    for (std::size_t c = 0; c < levels.size(); ++c) {
      json curve = json::array();
      for (int k = 0; k <= 80; ++k) {
        double x = -20.0 + 0.5 * k;
        try {
          cplx z = s.koenigs().invert(cplx(x, levels[c]));
          os << p << ',' << c << ',' << io::format_double(x) << ',' << io::format_double(z.real()) << ','
             << io::format_double(z.imag()) << '\n';
          curve.push_back(io::to_json(z));
        } catch (const Error&) {
        }
      }
      traces.push_back(json{{"petal", p}, {"level", levels[c]}, {"points", curve}});
    }
  }
  return os.str();
}

inline Output cmd_petals(const std::string& s_arg, bool trace) {
  SemigroupSpec s = io::parse_semigroup(io::load_spec(s_arg));
  PetalSurvey survey = petal_survey(s, default_seeds());
  if (auto e = catalog_entry_for(s_arg))
    for (auto& p : survey.petals)
      for (const auto& meta : e->meta.petals)
        if (p.petal_id && *p.petal_id == meta.label && meta.strip) p.strip = meta.strip;
  Output o = reported(io::to_json(survey));
  o.report["tau"] = io::to_json(semigroup_dw_point(s));
  if (trace) {
    json traces;
    o.csv = petal_traces_csv(s, survey, traces);
    o.report["traces"] = traces;
  }
  return o;
}

inline Output cmd_cascade(const std::string& s_arg, const std::string& phi_arg, const std::string& z0_arg, int n) {
  if (s_arg == "comb-model") {
    json rows = json::array();
    for (const auto& r : comb_cascade(0, n))
      rows.push_back(json{{"petal", r.petal}, {"strip", json::array({r.petal, r.petal + 1})}, {"alpha_im", r.alpha_im}});
    return reported(json{{"model_level", true}, {"map", "w + i"}, {"case", "infinite"}, {"cascade", rows}});
  }
  SemigroupSpec s = io::parse_semigroup(io::load_spec(s_arg));
  MapDescriptor phi = io::parse_map(io::load_spec(phi_arg));
  return reported(io::to_json(petal_cascade(s, phi, parse_point(z0_arg), n)));
}

inline Output cmd_demo_comb() { return reported(io::to_json(catalog::comb_demo())); }

inline Output cmd_catalog_list() {
  json entries = json::array();
  for (const auto& n : catalog::names()) entries.push_back(io::to_json(catalog::catalog_build(n)));
  return reported(json{{"entries", entries}});
}

inline int exit_code(Errc c) { return is_numerical(c) ? 2 : 3; }

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"holomorphic dynamics in the unit disc", "holodyn"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--tol", g.tol, "tolerance for commutation and convergence tests");
  app.add_option("--max-iter", g.max_iter, "iteration cap");
  app.add_option("--out", g.out_path, "write the report to a file");
  app.add_option("--format", g.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--seed", g.seed, "grid jitter seed");

  std::string map_arg, phi_arg, psi_arg, s_arg, z_arg = "0", w0_arg = "1";
  double t = 1.0;
  unsigned depth = 50000;
  std::size_t grid_n = 128;
  int n_max = 8;
  bool trace = false, backward = false;

  auto* classify_cmd = app.add_subcommand("classify", "Denjoy-Wolff point, kind, multiplier, boundary fixed points");
  classify_cmd->add_option("--map", map_arg, "map spec: JSON, JSON file or formula")->required();
  auto* koenigs_cmd = app.add_subcommand("koenigs", "Koenigs model by normalized iterates");
  koenigs_cmd->add_option("--map", map_arg)->required();
  koenigs_cmd->add_option("--depth", depth, "maximum number of iterates");
  koenigs_cmd->add_option("--w0", w0_arg, "base point in the right half-plane");
  auto* flow_cmd = app.add_subcommand("flow", "evaluate psi_t(z)");
  flow_cmd->add_option("--semigroup", s_arg)->required();
  flow_cmd->add_option("--t", t)->required();
  flow_cmd->add_option("--z", z_arg)->required();
  flow_cmd->add_flag("--backward", backward, "psi_{-t}(z) when defined");
  auto* commute_cmd = app.add_subcommand("commute", "commutator residual on a disc grid");
  commute_cmd->add_option("--phi", phi_arg)->required();
  commute_cmd->add_option("--psi", psi_arg)->required();
  commute_cmd->add_option("--grid", grid_n);
  auto* affinity_cmd = app.add_subcommand("affinity", "limit function f_{phi,psi}");
  affinity_cmd->add_option("--phi", phi_arg)->required();
  affinity_cmd->add_option("--psi", psi_arg)->required();
  affinity_cmd->add_option("--grid", grid_n);
  auto* criteria_cmd = app.add_subcommand("criteria", "sufficient conditions for psi_t in Z(phi)");
  criteria_cmd->add_option("--phi", phi_arg)->required();
  criteria_cmd->add_option("--semigroup", s_arg)->required();
  auto* petals_cmd = app.add_subcommand("petals", "petal classes found from standard seeds");
  petals_cmd->add_option("--semigroup", s_arg)->required();
  petals_cmd->add_flag("--trace", trace, "emit level curves Im h = const");
  auto* cascade_cmd = app.add_subcommand("cascade", "images of a petal under a commuting map");
  cascade_cmd->add_option("--semigroup", s_arg)->required();
  cascade_cmd->add_option("--phi", phi_arg);
  cascade_cmd->add_option("--z0", z_arg, "witness point of the starting petal");
  cascade_cmd->add_option("--n", n_max, "maximum cascade length");
  auto* demo_cmd = app.add_subcommand("demo", "model-level demonstrations");
  std::string demo_name;
  demo_cmd->add_option("name", demo_name)->required()->check(CLI::IsMember({"comb"}));
  auto* catalog_cmd = app.add_subcommand("catalog", "catalog entries");
  std::string catalog_action;
  catalog_cmd->add_option("action", catalog_action)->required()->check(CLI::IsMember({"list"}));

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 1;
  }
  if (cascade_cmd->parsed() && s_arg != "comb-model" && phi_arg.empty()) {
    err << "error: cascade needs --phi unless --semigroup comb-model\n" << app.help();
    return 1;
  }

  Output o;
  int code = 0;
  try {
    if (classify_cmd->parsed()) o = cmd_classify(g, map_arg);
    else if (koenigs_cmd->parsed()) o = cmd_koenigs(g, map_arg, depth, w0_arg);
    else if (flow_cmd->parsed()) o = cmd_flow(s_arg, t, z_arg, backward);
    else if (commute_cmd->parsed()) o = cmd_commute(g, phi_arg, psi_arg, grid_n);
    else if (affinity_cmd->parsed()) o = cmd_affinity(g, phi_arg, psi_arg, grid_n);
    else if (criteria_cmd->parsed()) o = cmd_criteria(g, phi_arg, s_arg);
    else if (petals_cmd->parsed()) o = cmd_petals(s_arg, trace);
    else if (cascade_cmd->parsed()) o = cmd_cascade(s_arg, phi_arg, z_arg, n_max);
    else if (demo_cmd->parsed()) o = cmd_demo_comb();
    else if (catalog_cmd->parsed()) o = cmd_catalog_list();
    if (o.numerical_failure) code = 2;
  } catch (const Error& e) {
    o.report = json{{"error", errc_name(e.code())}, {"message", e.what()}};
    o.csv.clear();
    code = exit_code(e.code());
    err << e.what() << "\n";
  } catch (const json::exception& e) {
    err << "error: malformed spec: " << e.what() << "\n";
    return 1;
  }

  std::string text = g.format == "csv" ? (o.csv.empty() ? io::to_csv(o.report) : o.csv) : io::dump(o.report);
  if (g.out_path.empty()) {
    out << text;
  } else {
    std::ofstream f(g.out_path, std::ios::binary);
    if (!f) {
      err << "error: cannot open " << g.out_path << "\n";
      return 1;
    }
    f << text;
  }
  return code;
}

}  // namespace holodyn::cli
