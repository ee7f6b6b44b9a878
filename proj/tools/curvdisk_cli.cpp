// Batch front end: reads an experiment config (JSON), dispatches to the
// library, and writes machine-readable reports plus plot-ready CSV tables.
//
// Exit codes: 0 success, 1 config error, 2 numerical failure.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "curvdisk/diagnostics.hpp"
#include "curvdisk/io.hpp"
#include "curvdisk/paths.hpp"
#include "curvdisk/solver.hpp"

namespace fs = std::filesystem;
using curvdisk::Json;

namespace {

constexpr const char* kVersion = "curvdisk 0.1.0";

struct Finding {
  std::string severity;  // "error" | "warning"
  std::string code;
  std::string message;
};

struct Options {
  std::string config_path;
  std::string output_dir;
  std::string grid_override;
  double eps_override = 0;
  bool has_eps_override = false;
  bool quiet = false;
};

Json findings_to_json(const std::vector<Finding>& fs) {
  Json arr = Json::array();
  for (const auto& f : fs)
    arr.push_back(Json{{"severity", f.severity},
                       {"code", f.code},
                       {"message", f.message}});
  return Json{{"findings", arr}};
}

curvdisk::GridSpec parse_grid(const Json& cfg, const Options& opt) {
  curvdisk::GridSpec g;
  if (cfg.contains("grid")) g = curvdisk::grid_from_json(cfg.at("grid"));
  if (!opt.grid_override.empty()) {
    auto comma = opt.grid_override.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("--grid expects NTHETA,NR");
    g.n_theta = std::stoi(opt.grid_override.substr(0, comma));
    g.n_r = std::stoi(opt.grid_override.substr(comma + 1));
  }
  curvdisk::validate_spec(g);
  return g;
}

curvdisk::CurvatureModel parse_model(const Json& cfg,
                                     const curvdisk::GridSpec& grid) {
  if (!cfg.contains("model"))
    throw std::invalid_argument("config needs a model block");
  const Json& m = cfg.at("model");
  bool assert_H = m.value("assert_H", true);

  auto field_of = [&](const Json& spec) {
    if (spec.contains("expr"))
      return curvdisk::field_from_xy(
          grid, [e = curvdisk::Expr::parse(spec.at("expr").get<std::string>())](
                    double a, double b) { return e.eval(a, b); });
    if (spec.contains("values"))
      return curvdisk::field_from_json(spec.at("values"));
    throw std::invalid_argument("K needs expr or values");
  };
  auto boundary_of = [&](const Json& spec) {
    if (spec.contains("expr"))
      return curvdisk::boundary_from_callable(
          grid.n_theta,
          [e = curvdisk::Expr::parse(spec.at("expr").get<std::string>())](
              double th) { return e.eval(std::cos(th), std::sin(th)); });
    if (spec.contains("coeffs"))
      return curvdisk::boundary_from_json(spec.at("coeffs"));
    throw std::invalid_argument("h needs expr or coeffs");
  };

  curvdisk::CurvatureModel model{field_of(m.at("K")), boundary_of(m.at("h"))};
  if (!model.K.values.allFinite())
    throw std::invalid_argument("non-finite field");
  if (assert_H && !(model.K.values.array() < 0).all())
    throw std::invalid_argument("hypothesis (H) violated: K must be < 0");
  return model;
}

curvdisk::SolveConfig parse_solver(const Json& cfg,
                                   const curvdisk::GridSpec& grid) {
  curvdisk::SolveConfig sc;
  sc.grid = grid;
  if (!cfg.contains("solver")) return sc;
  const Json& s = cfg.at("solver");
  sc.newton_tol = s.value("newton_tol", 1e-10);
  sc.max_newton = s.value("max_newton", 50);
  std::string damping = s.value("damping", "armijo");
  sc.damping =
      damping == "none" ? curvdisk::Damping::none : curvdisk::Damping::armijo;
  std::string gauge = s.value("gauge", "none");
  if (gauge == "none") sc.gauge = curvdisk::Gauge::none;
  else if (gauge == "barycenter") sc.gauge = curvdisk::Gauge::barycenter;
  else if (gauge == "mass_barycenter")
    sc.gauge = curvdisk::Gauge::mass_barycenter;
  else throw std::invalid_argument("unknown gauge: " + gauge);
  sc.compute_morse = s.value("compute_morse", false);
  sc.morse_n_eigs = s.value("morse_n_eigs", 8);
  if (s.contains("init")) {
    const Json& in = s.at("init");
    std::string type = in.value("type", "zero");
    if (type == "zero") sc.init = curvdisk::ZeroInit{};
    else if (type == "constant") sc.init = in.at("value").get<double>();
    else if (type == "bubble")
      sc.init = curvdisk::bubble_params_from_json(in.at("params"));
    else if (type == "field")
      sc.init = curvdisk::field_from_json(in.at("field"));
    else throw std::invalid_argument("unknown init type: " + type);
  }
  return sc;
}

curvdisk::LinkingConfig parse_linking(const Json& cfg) {
  if (!cfg.contains("linking"))
    throw std::invalid_argument("command requires a linking block");
  const Json& l = cfg.at("linking");
  curvdisk::LinkingConfig lc;
  lc.sigma = l.value("sigma", 0.05);
  lc.delta = l.value("delta", 0.2);
  lc.hh0 = l.value("hh0", 2.0);
  lc.hh = l.value("hh", 1.5);
  lc.validate();
  return lc;
}

std::vector<Finding> validate_config(const Json& cfg, const Options& opt) {
  std::vector<Finding> out;
  std::string command = cfg.value("command", "");
  const std::vector<std::string> known = {"solve",     "continue", "criteria",
                                          "landscape", "degree",   "bubbles",
                                          "diagnose"};
  if (std::find(known.begin(), known.end(), command) == known.end()) {
    out.push_back({"error", "bad-command",
                   "unknown or missing command: '" + command + "'"});
    return out;
  }

  curvdisk::GridSpec grid;
  try {
    grid = parse_grid(cfg, opt);
  } catch (const std::exception& e) {
    out.push_back({"error", "bad-grid", e.what()});
    return out;
  }

  if (command != "bubbles") {
    try {
      parse_model(cfg, grid);
    } catch (const std::exception& e) {
      out.push_back({"error", "bad-model", e.what()});
    }
  }

  double eps = opt.has_eps_override ? opt.eps_override : cfg.value("eps", 0.0);
  if (eps <= -1.0)
    out.push_back({"error", "invalid-perturbation", "invalid perturbation"});

  try {
    parse_solver(cfg, grid);
  } catch (const std::exception& e) {
    out.push_back({"error", "bad-solver", e.what()});
  }

  if (command == "degree" || command == "landscape") {
    if (!cfg.contains("linking")) {
      out.push_back({"error", "missing-linking",
                     "command '" + command + "' requires a linking block"});
    } else {
      try {
        parse_linking(cfg);
      } catch (const std::exception& e) {
        out.push_back({"error", "bad-linking", e.what()});
      }
    }
  }
  if (command == "continue" && cfg.contains("schedule")) {
    auto sched = cfg.at("schedule").get<std::vector<double>>();
    for (size_t i = 0; i < sched.size(); ++i) {
      if (sched[i] <= -1.0)
        out.push_back(
            {"error", "invalid-perturbation", "invalid perturbation"});
      if (i > 0 && std::abs(sched[i]) >= std::abs(sched[i - 1]))
        out.push_back({"warning", "schedule-not-monotone",
                       "schedule should be monotone toward 0"});
    }
  }
  if (command == "diagnose" && !cfg.contains("diagnose"))
    out.push_back({"error", "missing-diagnose",
                   "command 'diagnose' requires a diagnose block with a field"});
  return out;
}

// Random smooth polynomial fields, bitwise-reproducible for a fixed seed.
curvdisk::DiskField random_field(const curvdisk::GridSpec& g,
                                 std::mt19937_64& rng, int degree = 5) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<std::array<double, 3>> terms;
  for (int i = 0; i <= degree; ++i)
    for (int j = 0; i + j <= degree; ++j)
      terms.push_back({unif(rng) / (1.0 + i + j), double(i), double(j)});
  return curvdisk::field_from_xy(g, [terms](double a, double b) {
    double s = 0;
    for (const auto& t : terms)
      s += t[0] * std::pow(a, t[1]) * std::pow(b, t[2]);
    return s;
  });
}

int run_solve(const Json& cfg, const Options& opt, const fs::path& dir,
              Json& report) {
  curvdisk::GridSpec grid = parse_grid(cfg, opt);
  curvdisk::CurvatureModel model = parse_model(cfg, grid);
  curvdisk::SolveConfig sc = parse_solver(cfg, grid);
  double eps = opt.has_eps_override ? opt.eps_override : cfg.value("eps", 0.0);

  curvdisk::SolveReport rep = curvdisk::newton_solve(model, eps, sc);
  report = curvdisk::to_json(rep, true);
  if (!rep.converged && rep.blowup_watch) {
    // Route concentrating iterates to the fitter for a structured report.
    try {
      curvdisk::BlowupFit fit = curvdisk::blowup_fit(rep.u, model, eps);
      report["blowup_fit"] = curvdisk::to_json(fit, false);
      report["localization"] =
          curvdisk::to_json(curvdisk::localization_check(fit, model, eps));
    } catch (const std::exception& e) {
      report["blowup_fit_error"] = e.what();
    }
  }
  curvdisk::write_json_file(dir / "report.json", report);

  std::vector<std::vector<std::string>> rows;
  for (const auto& [name, value] : rep.identity_residuals)
    rows.push_back({"solve", name, curvdisk::format_double(value)});
  curvdisk::write_csv_rows(dir / "residuals.csv",
                           {"solution_id", "residual", "value"}, rows);
  return rep.converged ? 0 : 2;
}

int run_continue(const Json& cfg, const Options& opt, const fs::path& dir,
                 Json& report) {
  curvdisk::GridSpec grid = parse_grid(cfg, opt);
  curvdisk::CurvatureModel model = parse_model(cfg, grid);
  curvdisk::SolveConfig sc = parse_solver(cfg, grid);

  std::vector<double> schedule;
  if (cfg.contains("schedule"))
    schedule = cfg.at("schedule").get<std::vector<double>>();
  else {
    // Pick the sign from the hypothesis verdicts: the (b-) structure works
    // with eps > 0, the (b+) structure with eps < 0.
    curvdisk::HypothesisReport hr = curvdisk::check_hypotheses(model);
    int sign = (hr.thm22_i && hr.thm22_ii) ? -1 : +1;
    schedule = curvdisk::default_eps_schedule(sign);
  }

  curvdisk::ContinuationTrace trace =
      curvdisk::continue_in_eps(model, schedule.front(), sc, schedule);
  report = curvdisk::to_json(trace);
  curvdisk::write_json_file(dir / "report.json", report);

  std::vector<std::vector<double>> rows;
  for (const auto& r : trace.reports) {
    rows.push_back({r.eps, r.converged ? 1.0 : 0.0, r.sup_u, r.interior_mass,
                    r.boundary_mass,
                    r.identity_residuals.count("gauss_bonnet")
                        ? r.identity_residuals.at("gauss_bonnet")
                        : std::numeric_limits<double>::quiet_NaN()});
  }
  curvdisk::write_csv(dir / "continuation.csv",
                      {"eps", "converged", "sup_u", "interior_mass",
                       "boundary_mass", "gauss_bonnet"},
                      rows);
  return trace.completed ? 0 : 2;
}

int run_criteria(const Json& cfg, const Options& opt, const fs::path& dir,
                 Json& report) {
  curvdisk::GridSpec grid = parse_grid(cfg, opt);
  curvdisk::CurvatureModel model = parse_model(cfg, grid);
  curvdisk::HypothesisReport hr = curvdisk::check_hypotheses(model);
  report = curvdisk::to_json(hr);
  curvdisk::write_json_file(dir / "report.json", report);
  return 0;
}

int run_landscape(const Json& cfg, const Options& opt, const fs::path& dir,
                  Json& report) {
  curvdisk::GridSpec grid = parse_grid(cfg, opt);
  curvdisk::CurvatureModel model = parse_model(cfg, grid);
  curvdisk::LinkingConfig lc = parse_linking(cfg);
  double shift = curvdisk::normalization_shift(model);
  lc.normalization_shift = shift;
  curvdisk::CurvatureModel shifted = curvdisk::shifted_model(model, shift);

  double eps = opt.has_eps_override ? opt.eps_override
                                    : cfg.value("eps", -0.75 * lc.delta);
  Json lcfg = cfg.value("landscape", Json::object());
  int n_samples = lcfg.value("n_samples", 61);
  Eigen::Vector2d p(1.0, 0.0);
  if (lcfg.contains("p"))
    p = Eigen::Vector2d(lcfg.at("p")[0].get<double>(),
                        lcfg.at("p")[1].get<double>());

  curvdisk::PathProfile prof =
      curvdisk::path_energy_profile(shifted, eps, lc, p, n_samples, grid);

  std::vector<std::vector<double>> rows;
  for (const auto& s : prof.samples) {
    double seg = s.segment == curvdisk::PathSegment::g1
                     ? 1.0
                     : (s.segment == curvdisk::PathSegment::g2 ? 2.0 : 3.0);
    rows.push_back({s.tau, seg, s.energy, s.aux_energy, s.bridge,
                    s.constraint.A, s.constraint.B(0), s.constraint.B(1)});
  }
  curvdisk::write_csv(
      dir / "landscape.csv",
      {"tau", "segment", "energy", "J_h", "B_eps_h", "A", "B1", "B2"}, rows);

  report = Json{{"max_energy", prof.max_energy},
                {"unresolved", prof.unresolved},
                {"alpha", prof.alpha},
                {"beta", prof.beta},
                {"normalization_shift", shift},
                {"eps", eps},
                {"n_samples", n_samples}};
  curvdisk::write_json_file(dir / "report.json", report);
  return 0;
}

int run_degree(const Json& cfg, const Options& opt, const fs::path& dir,
               Json& report) {
  curvdisk::GridSpec grid = parse_grid(cfg, opt);
  curvdisk::CurvatureModel model = parse_model(cfg, grid);
  curvdisk::LinkingConfig lc = parse_linking(cfg);
  double shift = curvdisk::normalization_shift(model);
  lc.normalization_shift = shift;
  curvdisk::CurvatureModel shifted = curvdisk::shifted_model(model, shift);
  int refinement = cfg.value("refinement", 3);

  curvdisk::DegreeReport dr =
      curvdisk::degree_of_chi_lambda(shifted, lc, refinement);
  report = curvdisk::to_json(dr);
  report["normalization_shift"] = shift;
  curvdisk::write_json_file(dir / "report.json", report);
  return 0;
}

int run_bubbles(const Json& cfg, const Options& opt, const fs::path& dir,
                Json& report) {
  curvdisk::GridSpec grid = parse_grid(cfg, opt);
  Json b = cfg.value("bubbles", Json::object());
  double hh = b.value("hh", 2.0);
  double phi = hh + std::sqrt(hh * hh - 1.0);
  std::vector<double> lambdas =
      b.value("lambdas", std::vector<double>{0.0, 0.5, 0.9});
  std::vector<double> appendix_a =
      b.value("appendix_a", std::vector<double>{0.9, 0.99, 0.999});

  report["closed_forms"] =
      Json{{"phi", phi},
           {"boundary_mass", curvdisk::bubble_boundary_mass(hh)},
           {"interior_mass", curvdisk::bubble_interior_mass(hh)},
           {"energy", curvdisk::bubble_energy(phi)}};
  Json quad = Json::array();
  for (double lam : lambdas) {
    curvdisk::DiskField psi = curvdisk::psi_field(phi, lam, grid);
    curvdisk::DiskField epsi = curvdisk::exp_field(psi);
    double bm = curvdisk::quad_circle_values(
        curvdisk::exp_checked(curvdisk::boundary_trace_values(psi) / 2.0));
    quad.push_back(Json{{"lambda", lam},
                        {"boundary_mass", bm},
                        {"interior_mass", curvdisk::quad_disk(epsi)},
                        {"aux_energy", curvdisk::aux_energy(psi, hh)}});
  }
  report["quadrature"] = quad;
  Json app = Json::array();
  for (double a : appendix_a) {
    auto [interior, boundary] = curvdisk::appendix_limits(a, phi, -1.0);
    app.push_back(
        Json{{"a", a}, {"interior", interior}, {"boundary", boundary}});
  }
  report["appendix"] = app;
  report["resolvable_a"] = curvdisk::resolvable_concentration(grid, phi, -1.0);
  curvdisk::write_json_file(dir / "report.json", report);

  std::vector<std::vector<double>> rows;
  for (const auto& q : quad)
    rows.push_back({q.at("lambda").get<double>(),
                    q.at("boundary_mass").get<double>(),
                    q.at("interior_mass").get<double>(),
                    q.at("aux_energy").get<double>()});
  curvdisk::write_csv(
      dir / "bubbles.csv",
      {"lambda", "boundary_mass", "interior_mass", "aux_energy"}, rows);
  return 0;
}

int run_diagnose(const Json& cfg, const Options& opt, const fs::path& dir,
                 Json& report) {
  curvdisk::GridSpec grid = parse_grid(cfg, opt);
  curvdisk::CurvatureModel model = parse_model(cfg, grid);
  double eps = opt.has_eps_override ? opt.eps_override : cfg.value("eps", 0.0);
  const Json& d = cfg.at("diagnose");

  curvdisk::DiskField u = [&] {
    if (d.contains("field")) return curvdisk::field_from_json(d.at("field"));
    if (d.contains("field_file")) {
      std::ifstream in(d.at("field_file").get<std::string>());
      if (!in) throw std::invalid_argument("cannot read field_file");
      Json j;
      in >> j;
      return curvdisk::field_from_json(j);
    }
    throw std::invalid_argument("diagnose needs field or field_file");
  }();
  if (!(u.grid == grid))
    throw std::invalid_argument("diagnose: field grid mismatch");

  curvdisk::PerturbedCoefficients coeffs = curvdisk::perturb(model, eps);
  curvdisk::IdentityResiduals ids = curvdisk::identity_residuals(u, coeffs);
  report["identity_residuals"] = curvdisk::to_json(ids);

  std::vector<std::vector<std::string>> rows;
  rows.push_back(
      {"diagnose", "gauss_bonnet", curvdisk::format_double(ids.gauss_bonnet)});
  rows.push_back({"diagnose", "kazdan_warner",
                  curvdisk::format_double(ids.kazdan_warner)});
  for (const auto& [name, value] : ids.pohozaev)
    rows.push_back(
        {"diagnose", "pohozaev_" + name, curvdisk::format_double(value)});
  curvdisk::write_csv_rows(dir / "residuals.csv",
                           {"solution_id", "residual", "value"}, rows);

  bool force_fit = d.value("force_fit", false);
  if (u.values.maxCoeff() > 10.0 || force_fit) {
    curvdisk::BlowupFit fit = curvdisk::blowup_fit(u, model, eps);
    report["blowup_fit"] = curvdisk::to_json(fit, false);
    curvdisk::ConcentrationReport cr =
        curvdisk::concentration_masses(u, model, fit);
    report["concentration"] = Json{{"total_interior", cr.total_interior},
                                   {"total_boundary", cr.total_boundary},
                                   {"predicted_interior", cr.predicted_interior},
                                   {"predicted_boundary", cr.predicted_boundary},
                                   {"peak_fraction", cr.peak_fraction}};
    report["localization"] =
        curvdisk::to_json(curvdisk::localization_check(fit, model, eps));
    report["psi_holder_quotient"] =
        curvdisk::grid_holder_quotient(fit.psi, 0.25);
  }

  int fd_checks = d.value("fd_checks", 0);
  if (fd_checks > 0) {
    std::mt19937_64 rng(cfg.value("seed", 0));
    Json fd = Json::array();
    for (int i = 0; i < fd_checks; ++i) {
      curvdisk::DiskField v = random_field(grid, rng);
      double t = 1e-4;
      curvdisk::DiskField up{grid, u.values + t * v.values};
      curvdisk::DiskField um{grid, u.values - t * v.values};
      double fd_val = (curvdisk::energy(up, coeffs).total -
                       curvdisk::energy(um, coeffs).total) /
                      (2 * t);
      double pairing =
          curvdisk::pair_residual(curvdisk::el_residual(u, coeffs), v);
      fd.push_back(Json{{"gateaux_fd", fd_val}, {"pairing", pairing}});
    }
    report["fd_checks"] = fd;
  }
  curvdisk::write_json_file(dir / "report.json", report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - prescribed-curvature laboratory on the unit disk"};
  Options opt;
  bool validate_only = false;
  app.add_option("--config", opt.config_path, "experiment config (JSON)")
      ->required();
  app.add_option("--output", opt.output_dir, "output directory");
  app.add_option("--grid", opt.grid_override, "override grid as NTHETA,NR");
  auto* eps_opt = app.add_option("--eps", opt.eps_override, "override eps");
  app.add_flag("--quiet", opt.quiet, "suppress stdout");
  app.add_flag("--validate", validate_only,
               "validate the config and emit findings without running");
  CLI11_PARSE(app, argc, argv);
  opt.has_eps_override = eps_opt->count() > 0;

  auto t0 = std::chrono::steady_clock::now();

  Json cfg;
  std::vector<Finding> findings;
  bool parse_ok = true;
  {
    std::ifstream in(opt.config_path);
    if (!in) {
      findings.push_back({"error", "config-unreadable",
                          "cannot open config: " + opt.config_path});
      parse_ok = false;
    } else {
      try {
        in >> cfg;
      } catch (const std::exception& e) {
        findings.push_back({"error", "config-parse", e.what()});
        parse_ok = false;
      }
    }
  }

  fs::path dir = !opt.output_dir.empty()
                     ? fs::path(opt.output_dir)
                     : fs::path(parse_ok ? cfg.value("output_dir", "out")
                                         : std::string("out"));
  std::error_code ec;
  fs::create_directories(dir, ec);

  if (parse_ok) {
    auto more = validate_config(cfg, opt);
    findings.insert(findings.end(), more.begin(), more.end());
  }
  bool has_error = false;
  for (const auto& f : findings) has_error |= f.severity == "error";

  auto write_manifest = [&](int status, const std::string& reason) {
    double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    Json manifest{{"version", kVersion},
                  {"config", parse_ok ? cfg : Json(nullptr)},
                  {"config_path", opt.config_path},
                  {"exit_status", status},
                  {"reason", reason},
                  {"wall_time_s", wall}};
    if (parse_ok && cfg.contains("grid")) manifest["grid"] = cfg.at("grid");
    try {
      curvdisk::write_json_file(dir / "manifest.json", manifest);
    } catch (const std::exception& e) {
      std::cerr << "manifest write failed: " << e.what() << "\n";
    }
  };

  if (validate_only) {
    Json out = findings_to_json(findings);
    curvdisk::write_json_file(dir / "validate.json", out);
    if (!opt.quiet) std::cout << out.dump(2) << "\n";
    write_manifest(0, "validate");
    return 0;
  }

  if (has_error) {
    Json out = findings_to_json(findings);
    curvdisk::write_json_file(dir / "validate.json", out);
    if (!opt.quiet) std::cout << out.dump(2) << "\n";
    write_manifest(1, "config error");
    return 1;
  }

  std::string command = cfg.value("command", "");
  Json report;
  int status = 0;
  std::string reason = "ok";
  try {
    if (command == "solve") status = run_solve(cfg, opt, dir, report);
    else if (command == "continue") status = run_continue(cfg, opt, dir, report);
    else if (command == "criteria") status = run_criteria(cfg, opt, dir, report);
    else if (command == "landscape")
      status = run_landscape(cfg, opt, dir, report);
    else if (command == "degree") status = run_degree(cfg, opt, dir, report);
    else if (command == "bubbles") status = run_bubbles(cfg, opt, dir, report);
    else if (command == "diagnose")
      status = run_diagnose(cfg, opt, dir, report);
    if (status == 2)
      reason = report.contains("reason")
                   ? report.at("reason").get<std::string>()
                   : "numerical failure";
  } catch (const std::invalid_argument& e) {
    status = 1;
    reason = e.what();
    curvdisk::write_json_file(dir / "report.json", Json{{"error", reason}});
  } catch (const std::exception& e) {
    status = 2;
    reason = e.what();
    curvdisk::write_json_file(dir / "report.json", Json{{"error", reason}});
  }

  write_manifest(status, reason);
  if (!opt.quiet) {
    std::cout << "command: " << command << "\nstatus: " << status
              << "\nreason: " << reason << "\noutput: " << dir.string()
              << "\n";
  }
  return status;
}
